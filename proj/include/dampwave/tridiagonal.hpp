#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dampwave/errors.hpp"

namespace dampwave {

/// Tridiagonal matrix stored as three diagonals.
/// lower[i] is entry (i+1, i), upper[i] is entry (i, i+1).
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t order() const noexcept { return diag.size(); }

  bool symmetric() const noexcept { return lower == upper; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    const auto n = static_cast<Eigen::Index>(order());
    if (x.size() != n) throw SizeError("tridiagonal apply: dimension mismatch");
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = diag[i] * x[i];
      if (i > 0) acc += lower[i - 1] * x[i - 1];
      if (i + 1 < n) acc += upper[i] * x[i + 1];
      y[i] = acc;
    }
    return y;
  }

  Eigen::MatrixXd dense() const {
    const auto n = static_cast<Eigen::Index>(order());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = diag[i];
      if (i + 1 < n) {
        m(i, i + 1) = upper[i];
        m(i + 1, i) = lower[i];
      }
    }
    return m;
  }

  Tridiagonal scaled(double s) const {
    Tridiagonal t = *this;
    for (auto& x : t.lower) x *= s;
    for (auto& x : t.diag) x *= s;
    for (auto& x : t.upper) x *= s;
    return t;
  }
};

/// Thomas-algorithm factorisation. No pivoting: only used on the
/// diagonally dominant FEM mass matrix.
class TridiagonalSolver {
 public:
  explicit TridiagonalSolver(const Tridiagonal& m) : lower_(m.lower), upper_(m.upper) {
    const std::size_t n = m.order();
    pivot_.resize(n);
    pivot_[0] = m.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
      if (pivot_[i - 1] == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
      const double l = m.lower[i - 1] / pivot_[i - 1];
      pivot_[i] = m.diag[i] - l * m.upper[i - 1];
    }
    if (pivot_[n - 1] == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    const auto n = static_cast<Eigen::Index>(pivot_.size());
    if (rhs.size() != n) throw SizeError("tridiagonal solve: dimension mismatch");
    Eigen::VectorXd y = rhs;
    for (Eigen::Index i = 1; i < n; ++i) y[i] -= lower_[i - 1] / pivot_[i - 1] * y[i - 1];
    y[n - 1] /= pivot_[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) y[i] = (y[i] - upper_[i] * y[i + 1]) / pivot_[i];
    return y;
  }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> pivot_;
};

}  // namespace dampwave
