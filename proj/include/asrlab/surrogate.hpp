#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace asrlab {

// Thin-plate spline interpolant phi(r) = r^2 log r with a linear polynomial
// tail, fitted on points in the unit cube.
class RbfSurrogate {
 public:
  // `points` is row-major n x dims. `smoothing` is added to the kernel
  // diagonal; a small positive value keeps repeated points solvable.
  RbfSurrogate(std::vector<double> points, std::size_t dims, std::span<const double> values,
               double smoothing = 1e-9);

  std::size_t dims() const { return dims_; }
  std::size_t size() const { return n_; }
  double operator()(std::span<const double> x) const;

  // Leave-one-out root-mean-square error of the fit (computed in closed
  // form from the inverse system matrix).
  double loo_rmse() const { return loo_rmse_; }

 private:
  std::vector<double> points_;
  std::size_t dims_;
  std::size_t n_;
  std::vector<double> weights_;  // n kernel weights then dims + 1 tail terms
  double loo_rmse_ = 0.0;
};

double thin_plate(double r);

}  // namespace asrlab
