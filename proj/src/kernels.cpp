#include "asrlab/kernels.hpp"

#include <algorithm>

#include <exception>
#include <limits>

#include "asrlab/rng.hpp"
#include "asrlab/sensitivity.hpp"

namespace asrlab::kernels {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {
ErrorBreakdown score_one(const RefHyp& p, RateLevel level, const CerOptions& opts) {
  return level == RateLevel::word ? wer(p.ref, p.hyp) : cer(p.ref, p.hyp, opts);
}
}  // namespace

std::vector<ErrorBreakdown> score_pairs(std::span<const RefHyp> pairs, RateLevel level, const CerOptions& opts) {
  std::vector<ErrorBreakdown> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) { out[i] = score_one(pairs[i], level, opts); });
  return out;
}

std::vector<ErrorBreakdown> score_pairs_serial(std::span<const RefHyp> pairs, RateLevel level,
                                               const CerOptions& opts) {
  std::vector<ErrorBreakdown> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(score_one(p, level, opts));
  return out;
}

std::vector<std::string> greedy_decode_batch(std::span<const EmissionMatrix* const> ems) {
  std::vector<std::string> out(ems.size());
  parallel_for(ems.size(), [&](std::size_t i) { out[i] = greedy_decode(*ems[i]); });
  return out;
}

std::vector<std::string> greedy_decode_batch_serial(std::span<const EmissionMatrix* const> ems) {
  std::vector<std::string> out;
  out.reserve(ems.size());
  for (const auto* em : ems) out.push_back(greedy_decode(*em));
  return out;
}

std::vector<std::vector<Hypothesis>> beam_decode_batch(std::span<const EmissionMatrix* const> ems,
                                                       const DecodeConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<Hypothesis>> out(ems.size());
  parallel_for(ems.size(), [&](std::size_t i) { out[i] = beam_decode(*ems[i], cfg); });
  return out;
}

std::vector<std::vector<Hypothesis>> beam_decode_batch_serial(std::span<const EmissionMatrix* const> ems,
                                                              const DecodeConfig& cfg) {
  std::vector<std::vector<Hypothesis>> out;
  out.reserve(ems.size());
  for (const auto* em : ems) out.push_back(beam_decode(*em, cfg));
  return out;
}

std::vector<std::optional<hpo::MetricMap>> evaluate_objective(const hpo::Objective& objective,
                                                              std::span<const hpo::ParamMap> configs) {
  std::vector<std::optional<hpo::MetricMap>> out(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) {
    try {
      out[i] = objective(configs[i]);
    } catch (const hpo::ObjectiveMissing&) {
      throw;
    } catch (const std::exception&) {
      out[i] = std::nullopt;
    }
  });
  return out;
}

std::vector<double> evaluate_points(const std::function<double(std::span<const double>)>& f,
                                    std::span<const double> rows, std::size_t dims) {
  const std::size_t n = rows.size() / dims;
  std::vector<double> out(n);
  constexpr std::size_t block = 512;
  parallel_for((n + block - 1) / block, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * block);
    for (std::size_t i = b * block; i < end; ++i) out[i] = f(rows.subspan(i * dims, dims));
  });
  return out;
}

std::vector<double> evaluate_points_serial(const std::function<double(std::span<const double>)>& f,
                                           std::span<const double> rows, std::size_t dims) {
  const std::size_t n = rows.size() / dims;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(rows.subspan(i * dims, dims));
  return out;
}

namespace {
void bootstrap_one(std::size_t b, std::size_t n, std::size_t d, std::span<const double> f_a,
                   std::span<const double> f_b, std::span<const double> f_ab, std::uint64_t seed,
                   double* slot) {
  Rng rng(mix_seed(seed, b));
  std::vector<std::size_t> idx(n);
  for (auto& j : idx) j = static_cast<std::size_t>(rng.below(n));
  sobol_point_estimates(n, d, f_a, f_b, f_ab, idx, slot, slot + d);
}
}  // namespace

std::vector<double> bootstrap_sobol(std::size_t n, std::size_t d, std::span<const double> f_a,
                                    std::span<const double> f_b, std::span<const double> f_ab,
                                    std::size_t reps, std::uint64_t seed) {
  std::vector<double> out(reps * 2 * d);
  const auto count = static_cast<std::ptrdiff_t>(reps);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < count; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    bootstrap_one(ub, n, d, f_a, f_b, f_ab, seed, &out[ub * 2 * d]);
  }
  return out;
}

std::vector<double> bootstrap_sobol_serial(std::size_t n, std::size_t d, std::span<const double> f_a,
                                           std::span<const double> f_b, std::span<const double> f_ab,
                                           std::size_t reps, std::uint64_t seed) {
  std::vector<double> out(reps * 2 * d);
  for (std::size_t b = 0; b < reps; ++b) bootstrap_one(b, n, d, f_a, f_b, f_ab, seed, &out[b * 2 * d]);
  return out;
}

namespace {
float resample_one(std::span<const float> in, const ResampleFilter& filter, std::size_t n) {
  long base;
  std::size_t phase;
  filter.locate(n, base, phase);
  const auto taps = filter.taps(phase);
  const long start = base + filter.first_offset();
  const long len = static_cast<long>(in.size());
  const long lo = std::max(0L, -start);
  const long hi = std::min(static_cast<long>(taps.size()), len - start);
  float acc = 0.0f;
  for (long j = lo; j < hi; ++j) acc += taps[static_cast<std::size_t>(j)] * in[static_cast<std::size_t>(start + j)];
  return acc;
}
}  // namespace

std::vector<float> resample(std::span<const float> in, const ResampleFilter& filter) {
  std::vector<float> out(filter.output_length(in.size()));
  const auto count = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < count; ++n) {
    out[static_cast<std::size_t>(n)] = resample_one(in, filter, static_cast<std::size_t>(n));
  }
  return out;
}

std::vector<float> resample_serial(std::span<const float> in, const ResampleFilter& filter) {
  std::vector<float> out(filter.output_length(in.size()));
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = resample_one(in, filter, n);
  return out;
}

}  // namespace asrlab::kernels
