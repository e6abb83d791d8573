#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "dampwave/dense_eigen.hpp"
#include "dampwave/errors.hpp"
#include "dampwave/model.hpp"
#include "dampwave/spectrum.hpp"

namespace dampwave {

/// Which FD matrix the closed form describes.
///  Assembled:   order N+1, unknowns v_1..v_{N+1} (the matrix build_model assembles).
///  ControlFree: order N, unknowns v_1..v_N with v_{N+1} = v_N eliminated.
enum class FdSystem { Assembled, ControlFree };

namespace detail {

inline double fd_angle_ratio(const Mesh& mesh, FdSystem sys) {
  // h / (2L +- h) == 1 / (2 n + 1) for a matrix of order n.
  const double h = mesh.h();
  return sys == FdSystem::Assembled ? h / (2.0 * mesh.L() + h) : h / (2.0 * mesh.L() - h);
}

inline int fd_order(const Mesh& mesh, FdSystem sys) {
  return sys == FdSystem::Assembled ? mesh.N() + 1 : mesh.N();
}

// First-order residual ||Op y - lambda y|| for y = (u1, u2), Op = [[0, I], [-A, 0]].
inline double undamped_residual(const Tridiagonal& a, const Eigen::VectorXcd& y, cplx lambda) {
  const Eigen::Index n = y.size() / 2;
  const Eigen::VectorXcd u1 = y.head(n);
  const Eigen::VectorXcd u2 = y.tail(n);
  const Eigen::VectorXcd au1 =
      a.apply(u1.real()).cast<cplx>() + cplx(0.0, 1.0) * a.apply(u1.imag()).cast<cplx>();
  Eigen::VectorXcd r(2 * n);
  r << u2 - lambda * u1, -au1 - lambda * u2;
  return r.norm();
}

inline Tridiagonal clamped_stencil(int order, double scale) {
  Tridiagonal t;
  t.diag.assign(order, 2.0 * scale);
  t.diag[order - 1] = scale;
  t.lower.assign(order - 1, -scale);
  t.upper.assign(order - 1, -scale);
  return t;
}

// Adds the pair +-i sqrt(mu) with eigenvector (phi / lambda, phi).
inline void push_undamped_pair(std::vector<EigenPair>& out, double mu, const Eigen::VectorXd& phi,
                               const Tridiagonal* residual_matrix) {
  const double omega = std::sqrt(mu);
  for (double sign : {1.0, -1.0}) {
    const cplx lambda(0.0, sign * omega);
    Eigen::VectorXcd y(2 * phi.size());
    y << phi.cast<cplx>() / lambda, phi.cast<cplx>();
    y.normalize();
    const double res = residual_matrix ? undamped_residual(*residual_matrix, y, lambda) : 0.0;
    out.push_back({lambda, std::move(y), Provenance::ClosedForm, res});
  }
}

}  // namespace detail

/// Undamped FD frequencies mu_k = (4c^2/h^2) sin^2((2k-1) pi h / (2(2L -+ h))),
/// k = 1..order, ascending.
inline std::vector<double> fd_frequencies(const PhysicalParams& params, const Mesh& mesh,
                                          FdSystem sys = FdSystem::Assembled) {
  params.validate();
  const double h = mesh.h();
  const double ratio = detail::fd_angle_ratio(mesh, sys);
  const int order = detail::fd_order(mesh, sys);
  std::vector<double> mu(order);
  for (int k = 1; k <= order; ++k) {
    const double s = std::sin((2 * k - 1) * std::numbers::pi * ratio / 2.0);
    mu[k - 1] = 4.0 * params.c * params.c / (h * h) * s * s;
  }
  return mu;
}

/// Sine eigenvector phi_{k,j} = sin((2k-1) j pi h / (2L -+ h)), j = 1..order.
inline Eigen::VectorXd fd_mode_shape(const Mesh& mesh, int k, FdSystem sys = FdSystem::Assembled) {
  const double ratio = detail::fd_angle_ratio(mesh, sys);
  const int order = detail::fd_order(mesh, sys);
  Eigen::VectorXd phi(order);
  for (int j = 1; j <= order; ++j) phi[j - 1] = std::sin((2 * k - 1) * j * std::numbers::pi * ratio);
  return phi;
}

/// Control-free FD spectrum of the first-order operator: +-i sqrt(mu_k).
inline Spectrum fd_undamped_spectrum(const PhysicalParams& params, const Mesh& mesh,
                                     FdSystem sys = FdSystem::Assembled) {
  const auto mu = fd_frequencies(params, mesh, sys);
  const int order = static_cast<int>(mu.size());
  const Tridiagonal a = detail::clamped_stencil(order, params.c * params.c / (mesh.h() * mesh.h()));
  std::vector<EigenPair> pairs;
  pairs.reserve(2 * mu.size());
  for (int k = 1; k <= order; ++k) detail::push_undamped_pair(pairs, mu[k - 1], fd_mode_shape(mesh, k, sys), &a);
  sort_by_imaginary(pairs);
  return Spectrum{Scheme::FD, params.with_gain(0.0), mesh, std::move(pairs)};
}

/// Angle used in the FEM closed forms.
///  AsPrinted:   theta_j = (2j-1) pi h / (2(L-h)), i.e. (2j-1) pi / (2N).
///  MatrixOrder: theta_j = (2j-1) pi h / (2L),     i.e. (2j-1) pi / (2(N+1)),
///               which is exact for the assembled order-(N+1) pencil.
enum class FemAngle { AsPrinted, MatrixOrder };

struct FemUndampedSpectrum {
  FemAngle angle;
  std::vector<double> sub_eigenvalues;   // K^{-1} A, (2c^2/h^2) sin^2(theta_j / 2)
  std::vector<double> mass_eigenvalues;  // K^{-1} M, (2 + cos theta_j) / 6
  std::vector<double> generalized;       // M^{-1} A, (c^2/h^2) (6 - 6 cos theta_j) / (2 + cos theta_j)
  std::vector<double> oracle;            // dense (A, M) generalized eigenvalues, ascending
  double max_rel_mismatch = 0.0;
  bool formula_validated = false;        // mismatch <= 1e-8
  Spectrum spectrum;
};

inline double fem_angle(const Mesh& mesh, int j, FemAngle angle) {
  const double h = mesh.h();
  const double denom = angle == FemAngle::AsPrinted ? 2.0 * (mesh.L() - h) : 2.0 * mesh.L();
  return (2 * j - 1) * std::numbers::pi * h / denom;
}

inline FemUndampedSpectrum fem_undamped_spectrum(const PhysicalParams& params, const Mesh& mesh,
                                                 FemAngle angle = FemAngle::AsPrinted) {
  params.validate();
  const double h = mesh.h();
  const double scale = params.c * params.c / (h * h);
  const int order = mesh.unknowns();

  FemUndampedSpectrum out{angle, {}, {}, {}, {}, 0.0, false,
                          Spectrum{Scheme::FEM, params.with_gain(0.0), mesh, {}}};
  for (int j = 1; j <= order; ++j) {
    const double theta = fem_angle(mesh, j, angle);
    const double s = std::sin(theta / 2.0);
    out.sub_eigenvalues.push_back(2.0 * scale * s * s);
    out.mass_eigenvalues.push_back((2.0 + std::cos(theta)) / 6.0);
    out.generalized.push_back(scale * (6.0 - 6.0 * std::cos(theta)) / (2.0 + std::cos(theta)));
  }

  const SemiDiscreteModel model(Scheme::FEM, params.with_gain(0.0), mesh);
  const Eigen::VectorXd dense = generalized_symmetric_eigenvalues(model.stiffness().dense(), model.mass().dense());
  out.oracle.assign(dense.data(), dense.data() + dense.size());
  std::vector<double> sorted = out.generalized;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 0; j < sorted.size(); ++j)
    out.max_rel_mismatch = std::max(out.max_rel_mismatch, std::abs(sorted[j] - out.oracle[j]) / std::abs(out.oracle[j]));
  out.formula_validated = out.max_rel_mismatch <= 1e-8;

  // Eigenvectors sin(j theta) of M^{-1}A; the first-order residual exposes a
  // wrong angle as clearly as the eigenvalue mismatch does.
  const Eigen::MatrixXd op = assemble_dense_operator(model);
  const Eigen::MatrixXcd opc = op.cast<cplx>();
  for (int j = 1; j <= order; ++j) {
    const double theta = fem_angle(mesh, j, angle);
    Eigen::VectorXd phi(order);
    for (int k = 1; k <= order; ++k) phi[k - 1] = std::sin(k * theta);
    detail::push_undamped_pair(out.spectrum.pairs, out.generalized[j - 1], phi, nullptr);
  }
  for (auto& p : out.spectrum.pairs) p.residual = (opc * p.vec - p.lambda * p.vec).norm();
  sort_by_imaginary(out.spectrum.pairs);
  return out;
}

/// Continuum eigenvalues -(c/2L) ln|(xi+c)/(xi-c)| + i (2k+1) pi c / (2L), k in [k_min, k_max].
inline std::vector<cplx> pde_spectrum(const PhysicalParams& params, int k_min, int k_max) {
  params.validate();
  if (params.xi >= params.c)
    throw DomainError("continuum spectrum formula needs xi < c (abscissa diverges at xi = c)");
  if (k_max < k_min) throw SizeError("empty k range");
  const double re = -params.c / (2.0 * params.L) *
                    std::log(std::abs((params.xi + params.c) / (params.xi - params.c)));
  std::vector<cplx> out;
  for (int k = k_min; k <= k_max; ++k)
    out.emplace_back(re, (2 * k + 1) * std::numbers::pi * params.c / (2.0 * params.L));
  return out;
}

}  // namespace dampwave
