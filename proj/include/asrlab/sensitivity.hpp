#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "asrlab/hpo.hpp"

namespace asrlab {

// A/B/AB_i design in the unit cube. Rows are stored in evaluation order:
// A (n rows), B (n rows), then AB_1 .. AB_d (n rows each).
struct SaltelliPlan {
  hpo::SearchSpace space;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> unit;  // n * (d + 2) rows x d, row-major

  std::size_t rows() const { return n * (d + 2); }
  std::span<const double> row(std::size_t r) const { return {unit.data() + r * d, d}; }
  std::span<const double> a(std::size_t j) const { return row(j); }
  std::span<const double> b(std::size_t j) const { return row(n + j); }
  std::span<const double> ab(std::size_t i, std::size_t j) const { return row((2 + i) * n + j); }

  // Row mapped into parameter space; integer parameters are rounded.
  hpo::ParamMap params(std::size_t r) const;
};

// n must be a power of two. Categorical parameters are rejected; integer
// parameters are treated as continuous.
SaltelliPlan saltelli_sample(const hpo::SearchSpace& space, std::size_t n, std::uint64_t seed);

struct SobolIndex {
  std::string name;
  double s1 = 0.0;
  double st = 0.0;
  double s1_lo = 0.0, s1_hi = 0.0;
  double st_lo = 0.0, st_hi = 0.0;
};

struct SobolResult {
  std::vector<SobolIndex> params;
  std::size_t n_effective = 0;
  // Set by analyze_study.
  std::optional<double> loo_rmse;
  std::optional<std::size_t> trials_used;
};

// Thrown when the output variance is zero.
class DegenerateOutput : public Error {
 public:
  using Error::Error;
};

struct EstimateOptions {
  std::size_t bootstrap = 1000;
  double confidence = 0.95;
  std::uint64_t seed = 0;
};

// f_ab holds d blocks of n values, block i evaluated on AB_i.
SobolResult estimate_indices(const SaltelliPlan& plan, std::span<const double> f_a,
                             std::span<const double> f_b, std::span<const double> f_ab,
                             const EstimateOptions& opts = {});

// Same, with all n (d + 2) values in plan row order.
SobolResult estimate_indices(const SaltelliPlan& plan, std::span<const double> f_rows,
                             const EstimateOptions& opts = {});

// Point estimates only, for one set of sample indices (used by the
// bootstrap). `idx` selects rows j of A, B and every AB_i.
void sobol_point_estimates(std::size_t n, std::size_t d, std::span<const double> f_a,
                           std::span<const double> f_b, std::span<const double> f_ab,
                           std::span<const std::size_t> idx, double* s1, double* st);

using UnitFunction = std::function<double(std::span<const double>)>;

// Evaluates `f` on every plan row (unit coordinates) and estimates indices.
SobolResult analyze_function(const SaltelliPlan& plan, const UnitFunction& f, const EstimateOptions& opts = {});

struct SurrogateConfig {
  double smoothing = 1e-9;
};

// Fits a thin-plate RBF surrogate to the study's complete trials in unit
// coordinates and runs the Saltelli analysis on it.
SobolResult analyze_study(const hpo::Study& study, std::size_t n, std::uint64_t seed,
                          const SurrogateConfig& surrogate = {}, const EstimateOptions& opts = {});

// Parameter names by descending ST; equal values keep input order.
std::vector<std::string> rank_by_st(const SobolResult& r);

nlohmann::json to_json(const SobolResult& r);
SobolResult sobol_result_from_json(const nlohmann::json& j);

}  // namespace asrlab
