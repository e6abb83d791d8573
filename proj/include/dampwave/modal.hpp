#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "dampwave/dense_eigen.hpp"
#include "dampwave/errors.hpp"
#include "dampwave/spectrum.hpp"

namespace dampwave {

/// Right eigenvectors V and their dual rows W = V^{-1} (so W V = I and the
/// rows of W are left eigenvectors).
struct ModalBasis {
  Eigen::VectorXcd lambda;
  Eigen::MatrixXcd V;
  Eigen::MatrixXcd W;
  double condition = 0.0;  // ||V||_1 ||W||_1

  static ModalBasis from_spectrum(const Spectrum& spec) {
    ModalBasis b;
    b.V = eigenvector_matrix(spec);
    if (b.V.rows() != b.V.cols()) throw SizeError("modal basis needs a complete spectrum");
    b.lambda.resize(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t k = 0; k < spec.size(); ++k) b.lambda[static_cast<Eigen::Index>(k)] = spec.pairs[k].lambda;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(b.V);
    b.W = lu.inverse();
    b.condition = b.V.cwiseAbs().colwise().sum().maxCoeff() * b.W.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(b.condition)) throw ConditioningError("eigenvector matrix is singular", b.condition);
    return b;
  }

  Eigen::Index dim() const noexcept { return V.rows(); }

  /// Modal coefficients a = W y.
  Eigen::VectorXcd coefficients(const Eigen::VectorXd& y) const { return W * y.cast<cplx>(); }

  /// Re(V diag(exp(lambda t)) a).
  Eigen::VectorXd evolve(const Eigen::VectorXcd& a, double t) const {
    const Eigen::VectorXcd phase = (lambda * t).array().exp();
    return (V * phase.cwiseProduct(a)).real();
  }
};

}  // namespace dampwave
