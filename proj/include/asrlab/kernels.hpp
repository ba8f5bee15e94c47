#pragma once

// Data-parallel kernels. Each has an OpenMP version and a serial reference
// that produces identical results; outputs are written to pre-sized slots,
// so ordering never depends on scheduling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrlab/augment.hpp"
#include "asrlab/ctc.hpp"
#include "asrlab/hpo.hpp"
#include "asrlab/metrics.hpp"

namespace asrlab::kernels {

// Runs fn(i) for i in [0, n) across threads. The first exception thrown
// (lowest index) is rethrown after the loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::vector<ErrorBreakdown> score_pairs(std::span<const RefHyp> pairs, RateLevel level, const CerOptions& opts);
std::vector<ErrorBreakdown> score_pairs_serial(std::span<const RefHyp> pairs, RateLevel level,
                                               const CerOptions& opts);

std::vector<std::string> greedy_decode_batch(std::span<const EmissionMatrix* const> ems);
std::vector<std::string> greedy_decode_batch_serial(std::span<const EmissionMatrix* const> ems);

std::vector<std::vector<Hypothesis>> beam_decode_batch(std::span<const EmissionMatrix* const> ems,
                                                       const DecodeConfig& cfg);
std::vector<std::vector<Hypothesis>> beam_decode_batch_serial(std::span<const EmissionMatrix* const> ems,
                                                              const DecodeConfig& cfg);

// Failed evaluations (nullopt or a thrown exception other than
// ObjectiveMissing) come back as nullopt.
std::vector<std::optional<hpo::MetricMap>> evaluate_objective(const hpo::Objective& objective,
                                                              std::span<const hpo::ParamMap> configs);

// f applied to each row of a row-major matrix with `dims` columns.
std::vector<double> evaluate_points(const std::function<double(std::span<const double>)>& f,
                                    std::span<const double> rows, std::size_t dims);
std::vector<double> evaluate_points_serial(const std::function<double(std::span<const double>)>& f,
                                           std::span<const double> rows, std::size_t dims);

// `reps` bootstrap replicates of (S1, ST); replicate b occupies
// [b * 2d, b * 2d + 2d) with the d S1 values first.
std::vector<double> bootstrap_sobol(std::size_t n, std::size_t d, std::span<const double> f_a,
                                    std::span<const double> f_b, std::span<const double> f_ab,
                                    std::size_t reps, std::uint64_t seed);
std::vector<double> bootstrap_sobol_serial(std::size_t n, std::size_t d, std::span<const double> f_a,
                                           std::span<const double> f_b, std::span<const double> f_ab,
                                           std::size_t reps, std::uint64_t seed);

std::vector<float> resample(std::span<const float> in, const ResampleFilter& filter);
std::vector<float> resample_serial(std::span<const float> in, const ResampleFilter& filter);

}  // namespace asrlab::kernels
