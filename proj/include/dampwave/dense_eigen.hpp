#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dampwave/errors.hpp"
#include "dampwave/model.hpp"
#include "dampwave/spectrum.hpp"

namespace dampwave {

struct Balanced {
  Eigen::MatrixXd matrix;  // D^{-1} A D
  Eigen::VectorXd scale;   // diagonal of D
};

/// Radix-2 diagonal similarity scaling (Parlett-Reinsch, no permutations).
/// Row and column off-diagonal 1-norms are equalised to within a factor of 2.
inline Balanced balance(Eigen::MatrixXd a) {
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  const Eigen::Index n = a.rows();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / radix;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        scale[i] *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return {std::move(a), std::move(scale)};
}

/// All 2(N+1) eigenpairs of the first-order operator via balancing +
/// Hessenberg reduction + shifted QR. Pairs are unit-norm, residual checked,
/// exactly conjugate-paired and sorted by imaginary part.
inline Spectrum dense_spectrum(const SemiDiscreteModel& model) {
  if (model.mesh().N() > 2000) throw SizeError("dense spectrum limited to N <= 2000");

  const Eigen::MatrixXd op = assemble_dense_operator(model);
  const Eigen::Index order = op.rows();
  const Balanced bal = balance(op);

  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.setMaxIterations(100 * order);
  solver.compute(bal.matrix, true);
  if (solver.info() != Eigen::Success) {
    Eigen::RealSchur<Eigen::MatrixXd> schur(order);
    schur.setMaxIterations(100 * order);
    schur.compute(bal.matrix, false);
    std::vector<cplx> partial;
    const auto& t = schur.matrixT();
    for (Eigen::Index i = 0; i < t.rows(); ++i) partial.emplace_back(t(i, i), 0.0);
    throw NumericalFailure("dense eigensolver did not converge within " +
                               std::to_string(100 * order) + " iterations",
                           std::move(partial));
  }

  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();

  std::vector<EigenPair> pairs(static_cast<std::size_t>(order));
  for (Eigen::Index k = 0; k < order; ++k) {
    Eigen::VectorXcd v = bal.scale.cast<cplx>().cwiseProduct(vectors.col(k));
    v.normalize();
    pairs[k] = {values[k], std::move(v), Provenance::DenseOracle, 0.0};
  }

  // Exact conjugate pairing: mirror every upper-half pair onto its nearest
  // lower-half partner.
  std::vector<bool> taken(pairs.size(), false);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].lambda.imag() <= 0.0) continue;
    const cplx target = std::conj(pairs[k].lambda);
    std::size_t best = pairs.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < pairs.size(); ++m) {
      if (taken[m] || pairs[m].lambda.imag() >= 0.0) continue;
      const double d = std::abs(pairs[m].lambda - target);
      if (d < best_d) {
        best_d = d;
        best = m;
      }
    }
    if (best == pairs.size()) throw NumericalFailure("eigenvalue without conjugate partner", {});
    taken[best] = true;
    pairs[best].lambda = target;
    pairs[best].vec = pairs[k].vec.conjugate();
  }

  const Eigen::MatrixXcd opc = op.cast<cplx>();
  for (auto& p : pairs) {
    p.residual = (opc * p.vec - p.lambda * p.vec).norm();
    if (!(p.residual <= 1e-8 * std::max(std::abs(p.lambda), 1e-300)))
      throw NumericalFailure("dense eigenpair residual check failed",
                             std::vector<cplx>(values.data(), values.data() + values.size()));
  }
  sort_by_imaginary(pairs);
  return Spectrum{model.scheme(), model.params(), model.mesh(), std::move(pairs)};
}

/// Columns are the right eigenvectors of `spec`, in spectrum order.
inline Eigen::MatrixXcd eigenvector_matrix(const Spectrum& spec) {
  if (!spec.has_vectors()) throw SizeError("spectrum carries no eigenvectors");
  const Eigen::Index dim = spec.pairs.front().vec.size();
  Eigen::MatrixXcd v(dim, static_cast<Eigen::Index>(spec.size()));
  for (std::size_t k = 0; k < spec.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = spec.pairs[k].vec;
  return v;
}

/// Ascending eigenvalues of a symmetric matrix.
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver failed", {});
  return solver.eigenvalues();
}

/// Ascending eigenvalues of the pencil (A, M), M symmetric positive definite.
inline Eigen::VectorXd generalized_symmetric_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, m, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw NumericalFailure("generalized eigensolver failed", {});
  return solver.eigenvalues();
}

}  // namespace dampwave
