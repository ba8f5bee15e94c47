#include "asrlab/surrogate.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "asrlab/error.hpp"

namespace asrlab {

double thin_plate(double r) { return r > 0.0 ? r * r * std::log(r) : 0.0; }

namespace {
double distance(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}
}  // namespace

RbfSurrogate::RbfSurrogate(std::vector<double> points, std::size_t dims, std::span<const double> values,
                           double smoothing)
    : points_(std::move(points)), dims_(dims), n_(values.size()) {
  if (dims_ == 0 || points_.size() != n_ * dims_) throw InvalidArgument("surrogate: point/value shape mismatch");
  if (n_ < dims_ + 2) throw InvalidArgument("surrogate: needs at least dims + 2 points");
  const auto n = static_cast<Eigen::Index>(n_);
  const auto m = static_cast<Eigen::Index>(dims_ + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + m, n + m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* pi = &points_[static_cast<std::size_t>(i) * dims_];
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = thin_plate(distance(pi, &points_[static_cast<std::size_t>(j) * dims_], dims_));
      A(i, j) = v;
      A(j, i) = v;
    }
    A(i, i) = smoothing;
    A(i, n) = 1.0;
    A(n, i) = 1.0;
    for (Eigen::Index k = 0; k < m - 1; ++k) {
      A(i, n + 1 + k) = pi[k];
      A(n + 1 + k, i) = pi[k];
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = values[static_cast<std::size_t>(i)];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) {
    throw Error("surrogate: system is singular (points may be affinely degenerate)");
  }
  const Eigen::MatrixXd inv = lu.inverse();
  const Eigen::VectorXd c = inv * rhs;
  weights_.assign(c.data(), c.data() + c.size());

  double sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = c(i) / inv(i, i);
    sq += e * e;
  }
  loo_rmse_ = std::sqrt(sq / static_cast<double>(n_));
}

double RbfSurrogate::operator()(std::span<const double> x) const {
  if (x.size() != dims_) throw InvalidArgument("surrogate: wrong point dimension");
  double s = weights_[n_];
  for (std::size_t k = 0; k < dims_; ++k) s += weights_[n_ + 1 + k] * x[k];
  for (std::size_t i = 0; i < n_; ++i) s += weights_[i] * thin_plate(distance(x.data(), &points_[i * dims_], dims_));
  return s;
}

}  // namespace asrlab
