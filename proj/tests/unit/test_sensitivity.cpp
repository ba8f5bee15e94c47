#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "asrlab/error.hpp"
#include "asrlab/sensitivity.hpp"
#include "asrlab/surrogate.hpp"
#include "oracles.hpp"

using namespace asrlab;

namespace {

hpo::SearchSpace unit_space(std::size_t d) {
  hpo::SearchSpace s;
  for (std::size_t i = 0; i < d; ++i) s.params.push_back(hpo::ParamSpec::uniform("x" + std::to_string(i + 1), 0.0, 1.0));
  return s;
}

EstimateOptions quick(std::size_t bootstrap = 0, std::uint64_t seed = 0) {
  EstimateOptions o;
  o.bootstrap = bootstrap;
  o.seed = seed;
  return o;
}

double ishigami_error(const SobolResult& r) {
  const double s1[] = {0.3139, 0.4424, 0.0};
  const double st[] = {0.5576, 0.4424, 0.2437};
  double e = 0.0;
  for (int i = 0; i < 3; ++i) e = std::max({e, std::abs(r.params[i].s1 - s1[i]), std::abs(r.params[i].st - st[i])});
  return e;
}

}  // namespace

TEST_CASE("d = 1 design") {
  const auto plan = saltelli_sample(unit_space(1), 4, 0);
  CHECK(plan.rows() == 12);
  for (std::size_t j = 0; j < 4; ++j) CHECK(plan.ab(0, j)[0] == plan.b(j)[0]);
}

TEST_CASE("AB_i takes column i from B and the rest from A") {
  const auto plan = saltelli_sample(unit_space(4), 16, 3);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      for (std::size_t k = 0; k < 4; ++k) REQUIRE(plan.ab(i, j)[k] == (k == i ? plan.b(j)[k] : plan.a(j)[k]));
    }
  }
}

TEST_CASE("mapped points respect bounds") {
  hpo::SearchSpace s;
  s.params = {hpo::ParamSpec::loguniform("lr", 1e-6, 1e-3), hpo::ParamSpec::int_uniform("n", 10, 20),
              hpo::ParamSpec::uniform("p", 0.2, 0.7)};
  const auto plan = saltelli_sample(s, 64, 1);
  for (std::size_t r = 0; r < plan.rows(); ++r) {
    const auto p = plan.params(r);
    REQUIRE(s.contains(p));
    REQUIRE(std::holds_alternative<std::int64_t>(p.at("n")));
  }
}

TEST_CASE("design errors") {
  CHECK_THROWS_AS(saltelli_sample(unit_space(2), 12, 0), InvalidArgument);
  CHECK_THROWS_AS(saltelli_sample(unit_space(2), 0, 0), InvalidArgument);
  CHECK_THROWS_AS(saltelli_sample(unit_space(11), 8, 0), InvalidArgument);
  hpo::SearchSpace cat = unit_space(1);
  cat.params.push_back(hpo::ParamSpec::categorical("c", {"a", "b"}));
  CHECK_THROWS_AS(saltelli_sample(cat, 8, 0), InvalidArgument);
}

TEST_CASE("additive function") {
  const auto plan = saltelli_sample(unit_space(2), 1 << 13, 5);
  const auto r = analyze_function(plan, [](std::span<const double> x) { return x[0] + 2.0 * x[1]; }, quick());
  CHECK(std::abs(r.params[0].s1 - 0.2) <= 0.02);
  CHECK(std::abs(r.params[1].s1 - 0.8) <= 0.02);
  CHECK(std::abs(r.params[0].st - r.params[0].s1) <= 0.03);
  CHECK(std::abs(r.params[1].st - r.params[1].s1) <= 0.03);
  CHECK(std::abs(r.params[0].s1 + r.params[1].s1 - 1.0) <= 0.03);
  CHECK(r.n_effective == 1 << 13);
}

TEST_CASE("Ishigami indices and ST >= S1") {
  const auto plan = saltelli_sample(unit_space(3), 1 << 13, 2);
  const auto r = analyze_function(plan, [](std::span<const double> x) { return testing::ishigami(x); }, quick(200, 2));
  CHECK(ishigami_error(r) <= 0.02);
  for (const auto& p : r.params) {
    CHECK(p.st >= p.s1 - 0.03);
    CHECK(p.s1_lo <= p.s1);
    CHECK(p.s1 <= p.s1_hi);
    CHECK(p.st_lo <= p.st);
    CHECK(p.st <= p.st_hi);
  }
}

TEST_CASE("estimates converge with n") {
  std::vector<double> small, large;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = [](std::span<const double> x) { return testing::ishigami(x); };
    small.push_back(ishigami_error(analyze_function(saltelli_sample(unit_space(3), 1 << 10, seed), f, quick())));
    large.push_back(ishigami_error(analyze_function(saltelli_sample(unit_space(3), 1 << 14, seed), f, quick())));
  }
  std::sort(small.begin(), small.end());
  std::sort(large.begin(), large.end());
  CHECK(large[5] <= small[5]);
}

TEST_CASE("constant output is degenerate") {
  const auto plan = saltelli_sample(unit_space(2), 64, 0);
  CHECK_THROWS_AS(analyze_function(plan, [](std::span<const double>) { return 4.0; }, quick()), DegenerateOutput);
}

TEST_CASE("both estimate_indices forms agree and are deterministic") {
  const auto plan = saltelli_sample(unit_space(3), 256, 9);
  std::vector<double> rows;
  for (std::size_t r = 0; r < plan.rows(); ++r) rows.push_back(testing::ishigami(plan.row(r)));
  const std::span<const double> all(rows);
  const auto n = plan.n;
  const auto a = estimate_indices(plan, all.first(n), all.subspan(n, n), all.subspan(2 * n), quick(100, 4));
  const auto b = estimate_indices(plan, all, quick(100, 4));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.params[i].s1 == b.params[i].s1);
    CHECK(a.params[i].st_hi == b.params[i].st_hi);
  }
  CHECK_THROWS_AS(estimate_indices(plan, all.first(10), quick()), InvalidArgument);
}

TEST_CASE("ranking is by ST with stable ties") {
  SobolResult r;
  r.params = {{"a", 0.1, 0.2}, {"b", 0.1, 0.5}, {"c", 0.1, 0.2}, {"d", 0.0, 0.9}};
  CHECK(rank_by_st(r) == std::vector<std::string>{"d", "b", "a", "c"});
  SobolResult one;
  one.params = {{"only", 1.0, 1.0}};
  CHECK(rank_by_st(one) == std::vector<std::string>{"only"});
}

TEST_CASE("result json round trip") {
  SobolResult r;
  r.params = {{"x", 0.25, 0.5, 0.2, 0.3, 0.45, 0.55}};
  r.n_effective = 1024;
  r.loo_rmse = 0.125;
  r.trials_used = 40;
  const auto j = to_json(r);
  CHECK(j["params"][0]["ST"] == 0.5);
  CHECK(j["params"][0]["S1_ci"][1] == 0.3);
  const auto back = sobol_result_from_json(j);
  CHECK(back.params[0].s1_hi == 0.3);
  CHECK(back.loo_rmse == 0.125);
  CHECK(back.trials_used == 40u);
}

TEST_CASE("thin-plate surrogate interpolates and reproduces linear functions") {
  CHECK(thin_plate(0.0) == 0.0);
  CHECK(thin_plate(1.0) == 0.0);
  CHECK(thin_plate(2.0) == doctest::Approx(4.0 * std::log(2.0)));

  Rng rng(1);
  std::vector<double> pts, vals;
  for (int i = 0; i < 30; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    pts.insert(pts.end(), {x, y});
    vals.push_back(std::sin(3 * x) + y * y);
  }
  const RbfSurrogate s(pts, 2, vals);
  for (int i = 0; i < 30; ++i) CHECK(s(std::span<const double>(pts).subspan(2 * i, 2)) == doctest::Approx(vals[i]).epsilon(1e-6));
  CHECK(s.loo_rmse() > 0.0);

  std::vector<double> lin;
  for (int i = 0; i < 30; ++i) lin.push_back(1.0 + 2.0 * pts[2 * i] - pts[2 * i + 1]);
  const RbfSurrogate l(pts, 2, lin);
  const double q[] = {0.3, 0.8};
  CHECK(l(q) == doctest::Approx(1.0 + 0.6 - 0.8).epsilon(1e-6));
  CHECK(l.loo_rmse() <= 1e-6);
}

namespace {

hpo::Study grid_study(std::size_t d, const std::function<double(std::span<const double>)>& f, int per_axis) {
  hpo::Study s;
  s.space = unit_space(d);
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  while (true) {
    hpo::Trial t;
    t.index = s.trials.size();
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = (idx[k] + 0.5) / per_axis;
      t.params[s.space.params[k].name] = x[k];
    }
    t.metrics["objective"] = f(x);
    s.trials.push_back(t);
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
  return s;
}

}  // namespace

TEST_CASE("surrogate analysis of a study") {
  const auto add = grid_study(2, [](std::span<const double> x) { return x[0] + 2.0 * x[1]; }, 12);
  const auto r = analyze_study(add, 1 << 12, 1, {}, quick());
  CHECK(std::abs(r.params[0].s1 - 0.2) <= 0.05);
  CHECK(std::abs(r.params[1].s1 - 0.8) <= 0.05);
  CHECK(r.trials_used == 144u);
  REQUIRE(r.loo_rmse.has_value());
  CHECK(*r.loo_rmse < 1e-3);

  const auto one = grid_study(1, [](std::span<const double> x) { return std::exp(x[0]); }, 20);
  const auto r1 = analyze_study(one, 1 << 10, 1, {}, quick());
  CHECK(std::abs(r1.params[0].s1 - 1.0) <= 0.02);
  CHECK(std::abs(r1.params[0].st - 1.0) <= 0.02);
}

TEST_CASE("study analysis errors") {
  auto few = grid_study(2, [](std::span<const double> x) { return x[0]; }, 1);
  CHECK_THROWS_AS(analyze_study(few, 64, 0, {}, quick()), InvalidArgument);
  auto flat = grid_study(2, [](std::span<const double>) { return 1.0; }, 3);
  CHECK_THROWS_AS(analyze_study(flat, 64, 0, {}, quick()), DegenerateOutput);

  // Failed trials are ignored.
  auto mixed = grid_study(2, [](std::span<const double> x) { return x[0] + x[1]; }, 4);
  mixed.trials[3].state = hpo::TrialState::failed;
  mixed.trials[3].metrics.clear();
  CHECK(analyze_study(mixed, 64, 0, {}, quick()).trials_used == 15u);
}
