#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dampwave/closed_form.hpp"
#include "dampwave/energy.hpp"
#include "dampwave/errors.hpp"
#include "dampwave/model.hpp"

namespace dampwave {

/// Observation used in the denominator of the observability ratio.
///  BoundaryVelocity:       vdot_{N+1}(t)
///  ScaledNeighborVelocity: vdot_N(t) / h
enum class ObservationKind { BoundaryVelocity, ScaledNeighborVelocity };

inline std::string_view to_string(ObservationKind k) {
  return k == ObservationKind::BoundaryVelocity ? "boundary_velocity" : "scaled_neighbor_velocity";
}

inline ObservationKind parse_observation(std::string_view s) {
  if (s == "boundary_velocity") return ObservationKind::BoundaryVelocity;
  if (s == "scaled_neighbor_velocity") return ObservationKind::ScaledNeighborVelocity;
  throw ParameterError("unknown observation '" + std::string(s) + "'");
}

/// M-orthonormal modes of the undamped pencil (A, M), ascending frequency.
struct UndampedModes {
  Eigen::VectorXd mu;   // squared frequencies
  Eigen::MatrixXd phi;  // columns, phi^T M phi = I
};

inline UndampedModes undamped_modes(const SemiDiscreteModel& model) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      model.stiffness().dense(), model.mass().dense(), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw NumericalFailure("generalized eigensolver failed", {});
  UndampedModes m{solver.eigenvalues(), solver.eigenvectors()};
  // Fix the sign so that the largest-magnitude entry of each mode is positive.
  for (Eigen::Index k = 0; k < m.phi.cols(); ++k) {
    Eigen::Index i = 0;
    m.phi.col(k).cwiseAbs().maxCoeff(&i);
    if (m.phi(i, k) < 0.0) m.phi.col(k) *= -1.0;
  }
  return m;
}

/// Undamped mode k (1-based, ascending frequency) as displacement, zero velocity.
inline State mode_state(const SemiDiscreteModel& model, int k, double amplitude = 1.0) {
  const UndampedModes m = undamped_modes(model);
  if (k < 1 || k > m.phi.cols()) throw SizeError("mode index out of range");
  const Eigen::VectorXd v = amplitude * m.phi.col(k - 1) / m.phi.col(k - 1).cwiseAbs().maxCoeff();
  return {v, Eigen::VectorXd::Zero(v.size())};
}

inline State highest_mode_state(const SemiDiscreteModel& model) { return mode_state(model, model.unknowns()); }

/// Difference of the two highest modes, each scaled to unit value at x = L.
/// Their beat keeps the tip nearly still, which is what the top single mode
/// fails to do for FEM (its tip is an antinode).
inline State top_pair_state(const SemiDiscreteModel& model) {
  const UndampedModes m = undamped_modes(model);
  const Eigen::Index n = m.phi.cols();
  const Eigen::Index last = m.phi.rows() - 1;
  const double a = m.phi(last, n - 1);
  const double b = m.phi(last, n - 2);
  if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14) throw NumericalFailure("top modes vanish at the tip", {});
  const Eigen::VectorXd v = m.phi.col(n - 1) / a - m.phi.col(n - 2) / b;
  return {v, Eigen::VectorXd::Zero(v.size())};
}

struct ObservabilityResult {
  double ratio;        // E(0) / int_0^T |obs|^2 dt
  double energy0;
  double observed;     // the integral
  std::size_t samples;
};

/// Control-free (xi forced to 0) observability ratio from initial state s0,
/// propagated exactly in the undamped modes and integrated by the trapezoid
/// rule with dt = h / (20 c).
inline ObservabilityResult observability_ratio(const PhysicalParams& params, const Mesh& mesh, Scheme scheme,
                                               double T, const State& s0,
                                               ObservationKind kind = ObservationKind::BoundaryVelocity) {
  params.validate();
  if (!(T > 2.0 * params.L / params.c)) throw HorizonError("observation horizon must exceed 2L/c");
  const SemiDiscreteModel model(scheme, params.with_gain(0.0), mesh);
  const int n = model.unknowns();
  if (s0.v.size() != n || s0.vdot.size() != n) throw SizeError("state dimension does not match model");

  const UndampedModes m = undamped_modes(model);
  const Eigen::MatrixXd mass = model.mass().dense();
  const Eigen::VectorXd a = m.phi.transpose() * (mass * s0.v);
  const Eigen::VectorXd b = m.phi.transpose() * (mass * s0.vdot);
  const Eigen::VectorXd omega = m.mu.cwiseSqrt();

  // Row of phi that produces the observation.
  const double h = mesh.h();
  Eigen::RowVectorXd row = kind == ObservationKind::BoundaryVelocity ? Eigen::RowVectorXd(m.phi.row(n - 1))
                                                                     : Eigen::RowVectorXd(m.phi.row(n - 2) / h);

  const double dt = h / (20.0 * params.c);
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  const double step = T / static_cast<double>(steps);
  double integral = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = step * static_cast<double>(k);
    double obs = 0.0;
    for (Eigen::Index j = 0; j < omega.size(); ++j) {
      const double w = omega[j];
      obs += row[j] * (-a[j] * w * std::sin(w * t) + b[j] * std::cos(w * t));
    }
    const double weight = (k == 0 || k == steps) ? 0.5 : 1.0;
    integral += weight * obs * obs;
  }
  integral *= step;
  const double e0 = energy(model, s0);
  if (!(integral > 0.0)) throw NumericalFailure("observation vanishes identically", {});
  return {e0 / integral, e0, integral, steps + 1};
}

/// h^2 mu_top / c^2 from the exact closed form of the assembled matrix;
/// tends to 4 (FD) and 12 (FEM).
inline double top_mode_limit(const PhysicalParams& params, const Mesh& mesh, Scheme scheme) {
  const PhysicalParams p = params.with_gain(0.0);
  const double h = mesh.h();
  double top = 0.0;
  if (scheme == Scheme::FD) {
    const auto mu = fd_frequencies(p, mesh, FdSystem::Assembled);
    top = *std::max_element(mu.begin(), mu.end());
  } else {
    const double theta = fem_angle(mesh, mesh.unknowns(), FemAngle::MatrixOrder);
    top = p.c * p.c / (h * h) * (6.0 - 6.0 * std::cos(theta)) / (2.0 + std::cos(theta));
  }
  return h * h * top / (p.c * p.c);
}

}  // namespace dampwave
