#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dampwave/errors.hpp"
#include "dampwave/model.hpp"
#include "dampwave/spectrum.hpp"

namespace dampwave {

/// Degree 4N+6 of the FD characteristic polynomial in z, where
/// lambda = (c/h)(z - 1/z).
inline int char_poly_degree(const Mesh& mesh) { return 4 * mesh.N() + 6; }

/// p(z) = z^{4N+6} + (xi/c) z^{4N+5} - (xi/c) z + 1, Horner form on the two
/// nonzero leading coefficients: z^{4N+5} (z + r) + (1 - r z).
inline cplx char_poly_eval(const PhysicalParams& params, const Mesh& mesh, cplx z) {
  const double r = params.xi / params.c;
  cplx acc = 1.0;
  acc = acc * z + r;  // z + r
  for (int k = 0; k < 4 * mesh.N() + 5; ++k) acc *= z;
  return acc + (1.0 - r * z);
}

/// G(z) = (xi z - c) / (c z + xi); roots satisfy z^{4N+5} = G(z).
inline cplx char_poly_G(const PhysicalParams& params, cplx z) {
  return (params.xi * z - params.c) / (params.c * z + params.xi);
}

/// Fixed-point residual z^{4N+5} - G(z).
inline cplx fixed_point_residual(const PhysicalParams& params, const Mesh& mesh, cplx z) {
  return std::pow(z, 4 * mesh.N() + 5) - char_poly_G(params, z);
}

/// Arg G(z) taken in [pi/2, 3pi/2): the branch on which G sits near the
/// negative real axis for |z| ~ 1.
inline double sector_theta(cplx g) {
  double t = std::atan2(g.imag(), g.real());
  if (t < -std::numbers::pi / 2.0) t += 2.0 * std::numbers::pi;
  return t;
}

/// Branch T_j(z) = |G(z)|^{1/(4N+5)} exp(i (theta(z) + 2 j pi) / (4N+5)).
inline cplx sector_map(const PhysicalParams& params, const Mesh& mesh, int j, cplx z) {
  const double m = 4.0 * mesh.N() + 5.0;
  const cplx g = char_poly_G(params, z);
  return std::polar(std::pow(std::abs(g), 1.0 / m), (sector_theta(g) + 2.0 * j * std::numbers::pi) / m);
}

/// Arg range reachable by T_j: [(2j + 1/2) pi, (2j + 3/2) pi] / (4N+5).
/// The closed sector [2j pi, (2j+1) pi] / (4N+5) is reported separately,
/// since converged roots sit close to its upper edge.
struct SectorBounds {
  double lo;
  double hi;
};

inline SectorBounds branch_sector(const Mesh& mesh, int j) {
  const double m = 4.0 * mesh.N() + 5.0;
  return {(2.0 * j + 0.5) * std::numbers::pi / m, (2.0 * j + 1.5) * std::numbers::pi / m};
}

inline SectorBounds nominal_sector(const Mesh& mesh, int j) {
  const double m = 4.0 * mesh.N() + 5.0;
  return {2.0 * j * std::numbers::pi / m, (2.0 * j + 1.0) * std::numbers::pi / m};
}

struct RootSolveReport {
  std::vector<cplx> roots;       // first quadrant, one per sector
  std::vector<int> sector_index; // j = 0..N
  std::vector<double> residual;  // |p(z_j)|
  std::vector<int> iterations;
  double radius = 0.0;           // (xi + c) / (2 xi), outer radius of S
};

struct SectorIterationOptions {
  double step_tol = 1e-13;
  int max_iterations = 200;
  double residual_tol = 1e-10;
};

/// Fixed-point iteration of every branch T_j, j = 0..N, from the sector
/// midpoint on the unit circle.
inline RootSolveReport sector_roots(const PhysicalParams& params, const Mesh& mesh,
                                    const SectorIterationOptions& opt = {}) {
  params.validate();
  if (!(params.xi > 0.0) || params.xi >= params.c)
    throw DomainError("sector root iteration needs 0 < xi < c");

  const double m = 4.0 * mesh.N() + 5.0;
  RootSolveReport rep;
  rep.radius = (params.xi + params.c) / (2.0 * params.xi);
  for (int j = 0; j <= mesh.N(); ++j) {
    cplx z = std::polar(1.0, (2.0 * j + 0.5) * std::numbers::pi / m);
    int it = 0;
    bool converged = false;
    while (it < opt.max_iterations) {
      const cplx next = sector_map(params, mesh, j, z);
      ++it;
      const double step = std::abs(next - z);
      z = next;
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > rep.radius)
        throw ConvergenceError("sector " + std::to_string(j) + ": iterate left the sector region", j);
      if (step < opt.step_tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceError("sector " + std::to_string(j) + ": no convergence after " +
                                 std::to_string(opt.max_iterations) + " iterations",
                             j);
    const double res = std::abs(char_poly_eval(params, mesh, z));
    if (!(res <= opt.residual_tol))
      throw ConvergenceError("sector " + std::to_string(j) + ": residual " + std::to_string(res) +
                                 " above tolerance",
                             j);
    if (z.real() < 0.0 || z.imag() <= 0.0)
      throw ConvergenceError("sector " + std::to_string(j) + ": root outside the first quadrant", j);
    rep.roots.push_back(z);
    rep.sector_index.push_back(j);
    rep.residual.push_back(res);
    rep.iterations.push_back(it);
  }
  return rep;
}

/// Modulus envelope for the roots with M_G = 2 * max |G| sampled on the
/// boundary of S (two segments plus the quarter arc, 1000 points).
struct ModulusEnvelope {
  double M_G;
  double lower;
  double upper;
};

inline ModulusEnvelope root_modulus_envelope(const PhysicalParams& params, const Mesh& mesh) {
  params.validate();
  if (!(params.xi > 0.0) || params.xi >= params.c) throw DomainError("modulus envelope needs 0 < xi < c");
  const double c = params.c;
  const double xi = params.xi;
  const double radius = (xi + c) / (2.0 * xi);
  constexpr int samples = 1000;
  constexpr int per_piece = samples / 4;
  double gmax = 0.0;
  auto probe = [&](cplx z) { gmax = std::max(gmax, std::abs(char_poly_G(params, z))); };
  for (int k = 0; k <= per_piece; ++k) {
    const double s = static_cast<double>(k) / per_piece;
    probe({s * radius, 0.0});
    probe({0.0, s * radius});
  }
  const int arc = samples - 2 * (per_piece + 1);
  for (int k = 0; k < arc; ++k) probe(std::polar(radius, std::numbers::pi / 2.0 * k / (arc - 1)));

  const double m = 4.0 * mesh.N() + 5.0;
  const double mg = 2.0 * gmax;
  ModulusEnvelope env{mg, 0.0, 0.0};
  env.lower = std::pow((xi * c - xi * xi) / (2.0 * xi * xi + xi * c + c * c), 1.0 / m) -
              std::sqrt(2.0) * (1.0 + c / xi) * std::pow(mg, 1.0 / m) / m;
  env.upper = std::pow(c / xi, 1.0 / m) + (1.0 + c / xi) * std::pow(mg, 1.0 / (2.0 * m)) / m;
  return env;
}

/// Complex-valued operator application, split into real and imaginary parts.
inline Eigen::VectorXcd apply_operator(const SemiDiscreteModel& model, const Eigen::VectorXcd& y) {
  const State re = apply_operator(model, State::from_stacked(y.real()));
  const State im = apply_operator(model, State::from_stacked(y.imag()));
  return re.stacked().cast<cplx>() + cplx(0.0, 1.0) * im.stacked().cast<cplx>();
}

/// lambda_j = (c/h)(z_j - 1/z_j) and its conjugate, with eigenvectors
/// v_k = z^{2k} - z^{-2k}, k = 1..N+1, stacked as (v, lambda v).
inline Spectrum roots_to_eigenvalues(const RootSolveReport& report, const PhysicalParams& params,
                                     const Mesh& mesh) {
  const SemiDiscreteModel model(Scheme::FD, params, mesh);
  const int n = mesh.unknowns();
  std::vector<EigenPair> pairs;
  pairs.reserve(2 * report.roots.size());
  for (const cplx z : report.roots) {
    const cplx lambda = params.c / mesh.h() * (z - 1.0 / z);
    Eigen::VectorXcd y(2 * n);
    const cplx w = z * z;
    cplx wk = 1.0;
    for (int k = 0; k < n; ++k) {
      wk *= w;
      y[k] = wk - 1.0 / wk;
    }
    y.tail(n) = lambda * y.head(n);
    y.normalize();
    const double res = (apply_operator(model, y) - lambda * y).norm();
    pairs.push_back({lambda, y, Provenance::PolynomialRoot, res});
    pairs.push_back({std::conj(lambda), y.conjugate(), Provenance::PolynomialRoot, res});
  }
  sort_by_imaginary(pairs);
  return Spectrum{Scheme::FD, params, mesh, std::move(pairs)};
}

}  // namespace dampwave
