#include "asrlab/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asrlab/kernels.hpp"
#include "asrlab/sobol_sequence.hpp"
#include "asrlab/surrogate.hpp"

namespace asrlab {

hpo::ParamMap SaltelliPlan::params(std::size_t r) const {
  hpo::ParamMap out;
  const auto u = row(r);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& p = space.params[k];
    const double v = hpo::from_unit(p, u[k]);
    if (p.kind == hpo::ParamKind::int_uniform) {
      out[p.name] = static_cast<std::int64_t>(std::clamp(std::round(v), p.low, p.high));
    } else {
      out[p.name] = std::clamp(v, p.low, p.high);
    }
  }
  return out;
}

SaltelliPlan saltelli_sample(const hpo::SearchSpace& space, std::size_t n, std::uint64_t seed) {
  space.validate();
  const std::size_t d = space.size();
  if (d == 0) throw InvalidArgument("sensitivity analysis needs at least one parameter");
  if (2 * d > SobolSequence::kMaxDims) throw InvalidArgument("sensitivity analysis supports at most 10 parameters");
  for (const auto& p : space.params) {
    if (!p.continuous()) throw InvalidArgument("parameter '" + p.name + "' is categorical");
  }
  if (n == 0 || (n & (n - 1)) != 0) throw InvalidArgument("base sample count must be a power of two");

  const SobolSequence seq(2 * d, true, seed);
  const auto pts = seq.first(n);
  SaltelliPlan plan;
  plan.space = space;
  plan.n = n;
  plan.d = d;
  plan.unit.resize(plan.rows() * d);
  auto put = [&](std::size_t r, std::size_t k, double v) { plan.unit[r * d + k] = v; };
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      const double a = pts[j * 2 * d + k];
      const double b = pts[j * 2 * d + d + k];
      put(j, k, a);
      put(n + j, k, b);
      for (std::size_t i = 0; i < d; ++i) put((2 + i) * n + j, k, k == i ? b : a);
    }
  }
  return plan;
}

void sobol_point_estimates(std::size_t n, std::size_t d, std::span<const double> f_a,
                           std::span<const double> f_b, std::span<const double> f_ab,
                           std::span<const std::size_t> idx, double* s1, double* st) {
  const auto m = static_cast<double>(idx.size());
  double mean = 0.0;
  for (std::size_t j : idx) mean += f_a[j] + f_b[j];
  mean /= 2.0 * m;
  double var = 0.0;
  for (std::size_t j : idx) {
    var += (f_a[j] - mean) * (f_a[j] - mean) + (f_b[j] - mean) * (f_b[j] - mean);
  }
  var /= 2.0 * m;
  for (std::size_t i = 0; i < d; ++i) {
    const double* fi = f_ab.data() + i * n;
    double vi = 0.0, ti = 0.0;
    for (std::size_t j : idx) {
      vi += f_b[j] * (fi[j] - f_a[j]);
      ti += (f_a[j] - fi[j]) * (f_a[j] - fi[j]);
    }
    s1[i] = var > 0.0 ? vi / m / var : 0.0;
    st[i] = var > 0.0 ? ti / (2.0 * m) / var : 0.0;
  }
}

namespace {
double quantile(std::vector<double>& v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}
}  // namespace

SobolResult estimate_indices(const SaltelliPlan& plan, std::span<const double> f_a, std::span<const double> f_b,
                             std::span<const double> f_ab, const EstimateOptions& opts) {
  const std::size_t n = plan.n, d = plan.d;
  if (f_a.size() != n || f_b.size() != n || f_ab.size() != n * d) {
    throw InvalidArgument("evaluation vectors do not match the plan");
  }
  for (std::span<const double> s : {f_a, f_b, f_ab}) {
    for (double v : s) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite model output");
    }
  }
  const auto [lo, hi] = std::minmax_element(f_a.begin(), f_a.end());
  const auto [lo_b, hi_b] = std::minmax_element(f_b.begin(), f_b.end());
  if (*lo == *hi && *lo_b == *hi_b && *lo == *lo_b) throw DegenerateOutput("model output has zero variance");

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> s1(d), st(d);
  sobol_point_estimates(n, d, f_a, f_b, f_ab, all, s1.data(), st.data());

  SobolResult r;
  r.n_effective = n;
  r.params.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    r.params[i].name = plan.space.params[i].name;
    r.params[i].s1 = s1[i];
    r.params[i].st = st[i];
    r.params[i].s1_lo = r.params[i].s1_hi = s1[i];
    r.params[i].st_lo = r.params[i].st_hi = st[i];
  }
  if (opts.bootstrap > 0) {
    const auto reps = kernels::bootstrap_sobol(n, d, f_a, f_b, f_ab, opts.bootstrap, opts.seed);
    const double tail = (1.0 - opts.confidence) / 2.0;
    std::vector<double> col(opts.bootstrap);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t b = 0; b < opts.bootstrap; ++b) col[b] = reps[b * 2 * d + i];
      r.params[i].s1_lo = quantile(col, tail);
      r.params[i].s1_hi = quantile(col, 1.0 - tail);
      for (std::size_t b = 0; b < opts.bootstrap; ++b) col[b] = reps[b * 2 * d + d + i];
      r.params[i].st_lo = quantile(col, tail);
      r.params[i].st_hi = quantile(col, 1.0 - tail);
    }
  }
  return r;
}

SobolResult estimate_indices(const SaltelliPlan& plan, std::span<const double> f_rows, const EstimateOptions& opts) {
  if (f_rows.size() != plan.rows()) throw InvalidArgument("evaluation vector does not match the plan");
  const std::size_t n = plan.n;
  return estimate_indices(plan, f_rows.subspan(0, n), f_rows.subspan(n, n), f_rows.subspan(2 * n), opts);
}

SobolResult analyze_function(const SaltelliPlan& plan, const UnitFunction& f, const EstimateOptions& opts) {
  const auto values = kernels::evaluate_points(f, plan.unit, plan.d);
  return estimate_indices(plan, values, opts);
}

SobolResult analyze_study(const hpo::Study& study, std::size_t n, std::uint64_t seed,
                          const SurrogateConfig& surrogate, const EstimateOptions& opts) {
  const auto& space = study.space;
  const std::size_t d = space.size();
  std::vector<double> pts;
  std::vector<double> ys;
  for (const auto& t : study.trials) {
    if (t.state != hpo::TrialState::complete) continue;
    auto it = t.metrics.find(study.objective_metric);
    if (it == t.metrics.end() || !std::isfinite(it->second)) continue;
    for (const auto& p : space.params) {
      if (!p.continuous()) throw InvalidArgument("parameter '" + p.name + "' is categorical");
      pts.push_back(hpo::to_unit(p, hpo::as_double(t.params.at(p.name))));
    }
    ys.push_back(it->second);
  }
  if (ys.size() < d + 2) {
    throw InvalidArgument("sensitivity analysis needs at least " + std::to_string(d + 2) +
                          " complete trials, found " + std::to_string(ys.size()));
  }
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  if (*lo == *hi) throw DegenerateOutput("objective is constant across trials");

  const std::size_t used = ys.size();
  const RbfSurrogate model(std::move(pts), d, ys, surrogate.smoothing);
  const auto plan = saltelli_sample(space, n, seed);
  const UnitFunction f = [&](std::span<const double> u) {
    std::vector<double> x(u.begin(), u.end());
    for (std::size_t k = 0; k < d; ++k) {
      const auto& p = space.params[k];
      if (p.kind == hpo::ParamKind::int_uniform) {
        x[k] = hpo::to_unit(p, std::clamp(std::round(hpo::from_unit(p, x[k])), p.low, p.high));
      }
    }
    return model(x);
  };
  auto r = analyze_function(plan, f, opts);
  r.loo_rmse = model.loo_rmse();
  r.trials_used = used;
  return r;
}

std::vector<std::string> rank_by_st(const SobolResult& r) {
  std::vector<std::size_t> order(r.params.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.params[a].st > r.params[b].st; });
  std::vector<std::string> names;
  names.reserve(order.size());
  for (std::size_t i : order) names.push_back(r.params[i].name);
  return names;
}

nlohmann::json to_json(const SobolResult& r) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : r.params) {
    params.push_back({{"name", p.name},
                      {"S1", p.s1},
                      {"ST", p.st},
                      {"S1_ci", {p.s1_lo, p.s1_hi}},
                      {"ST_ci", {p.st_lo, p.st_hi}}});
  }
  nlohmann::json j = {{"n_effective", r.n_effective}, {"params", params}};
  if (r.loo_rmse) j["loo_rmse"] = *r.loo_rmse;
  if (r.trials_used) j["trials_used"] = *r.trials_used;
  return j;
}

SobolResult sobol_result_from_json(const nlohmann::json& j) {
  SobolResult r;
  try {
    r.n_effective = j.value("n_effective", std::size_t{0});
    for (const auto& pj : j.at("params")) {
      SobolIndex p;
      p.name = pj.at("name").get<std::string>();
      p.s1 = pj.at("S1").get<double>();
      p.st = pj.at("ST").get<double>();
      p.s1_lo = p.s1_hi = p.s1;
      p.st_lo = p.st_hi = p.st;
      if (pj.contains("S1_ci")) {
        p.s1_lo = pj["S1_ci"].at(0).get<double>();
        p.s1_hi = pj["S1_ci"].at(1).get<double>();
      }
      if (pj.contains("ST_ci")) {
        p.st_lo = pj["ST_ci"].at(0).get<double>();
        p.st_hi = pj["ST_ci"].at(1).get<double>();
      }
      r.params.push_back(std::move(p));
    }
    if (j.contains("loo_rmse")) r.loo_rmse = j["loo_rmse"].get<double>();
    if (j.contains("trials_used")) r.trials_used = j["trials_used"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sensitivity result: ") + e.what());
  }
  return r;
}

}  // namespace asrlab
