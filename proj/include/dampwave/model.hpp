#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "dampwave/errors.hpp"
#include "dampwave/tridiagonal.hpp"

namespace dampwave {

enum class Scheme { FD, FEM };

inline std::string_view to_string(Scheme s) { return s == Scheme::FD ? "FD" : "FEM"; }

inline Scheme parse_scheme(std::string_view s) {
  if (s == "FD" || s == "fd") return Scheme::FD;
  if (s == "FEM" || s == "fem") return Scheme::FEM;
  throw ParameterError("unknown scheme '" + std::string(s) + "' (expected FD or FEM)");
}

/// Wave speed c, domain length L and boundary feedback gain xi.
struct PhysicalParams {
  double c = 1.0;
  double L = 1.0;
  double xi = 0.0;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("wave speed c must be positive");
    if (!(L > 0.0) || !std::isfinite(L)) throw ParameterError("domain length L must be positive");
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw ParameterError("feedback gain xi must be >= 0");
  }

  /// The decay results need 0 < xi < c.
  bool sub_characteristic() const noexcept { return xi < c; }

  PhysicalParams with_gain(double gain) const {
    PhysicalParams p = *this;
    p.xi = gain;
    return p;
  }
};

/// Uniform mesh 0 = x_0 < ... < x_{N+1} = L with N interior nodes.
class Mesh {
 public:
  Mesh(int interior_nodes, double length) : n_(interior_nodes), length_(length) {
    if (interior_nodes < 2) throw SizeError("mesh needs N >= 2 interior nodes");
    if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("mesh length must be positive");
  }

  int N() const noexcept { return n_; }
  double L() const noexcept { return length_; }
  double h() const noexcept { return length_ / (n_ + 1); }
  /// Unknowns v_1..v_{N+1}; v_0 = 0 is eliminated.
  int unknowns() const noexcept { return n_ + 1; }

  double node(int j) const noexcept { return j == n_ + 1 ? length_ : j * h(); }

 private:
  int n_;
  double length_;
};

/// Nodal displacement and velocity, entries 1..N+1 (v_0 = 0 is implicit).
struct State {
  Eigen::VectorXd v;
  Eigen::VectorXd vdot;

  static State zero(int unknowns) {
    return {Eigen::VectorXd::Zero(unknowns), Eigen::VectorXd::Zero(unknowns)};
  }

  static State from_stacked(const Eigen::VectorXd& y) {
    if (y.size() % 2 != 0) throw SizeError("stacked state must have even length");
    const Eigen::Index n = y.size() / 2;
    return {y.head(n), y.tail(n)};
  }

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd y(v.size() + vdot.size());
    y << v, vdot;
    return y;
  }

  Eigen::Index unknowns() const noexcept { return v.size(); }
};

class SemiDiscreteModel {
 public:
  SemiDiscreteModel(Scheme scheme, const PhysicalParams& params, const Mesh& mesh)
      : scheme_(scheme), params_(params), mesh_(mesh) {
    params_.validate();
    if (std::abs(mesh.L() - params.L) > 1e-14 * params.L)
      throw ParameterError("mesh length does not match params.L");

    const int n = mesh.unknowns();
    const double h = mesh.h();
    const double scale = params.c * params.c / (h * h);

    stiffness_.diag.assign(n, 2.0 * scale);
    stiffness_.diag[n - 1] = scale;
    stiffness_.lower.assign(n - 1, -scale);
    stiffness_.upper.assign(n - 1, -scale);

    if (scheme == Scheme::FD) {
      mass_.diag.assign(n, 1.0);
      mass_.lower.assign(n - 1, 0.0);
      mass_.upper.assign(n - 1, 0.0);
    } else {
      mass_.diag.assign(n, 2.0 / 3.0);
      mass_.diag[n - 1] = 1.0 / 3.0;
      mass_.lower.assign(n - 1, 1.0 / 6.0);
      mass_.upper.assign(n - 1, 1.0 / 6.0);
      mass_solver_ = std::make_shared<const TridiagonalSolver>(mass_);
    }
    damping_entry_ = -params.xi / h;
  }

  Scheme scheme() const noexcept { return scheme_; }
  const PhysicalParams& params() const noexcept { return params_; }
  const Mesh& mesh() const noexcept { return mesh_; }
  const Tridiagonal& stiffness() const noexcept { return stiffness_; }
  const Tridiagonal& mass() const noexcept { return mass_; }
  /// Entry (N+1, N+1) of the velocity block, -xi/h.
  double damping_entry() const noexcept { return damping_entry_; }
  int unknowns() const noexcept { return mesh_.unknowns(); }
  int state_dim() const noexcept { return 2 * mesh_.unknowns(); }

  /// M^{-1} x; identity for FD.
  Eigen::VectorXd solve_mass(const Eigen::VectorXd& x) const {
    if (!mass_solver_) {
      if (x.size() != unknowns()) throw SizeError("mass solve: dimension mismatch");
      return x;
    }
    return mass_solver_->solve(x);
  }

 private:
  Scheme scheme_;
  PhysicalParams params_;
  Mesh mesh_;
  Tridiagonal stiffness_;
  Tridiagonal mass_;
  std::shared_ptr<const TridiagonalSolver> mass_solver_;
  double damping_entry_ = 0.0;
};

inline SemiDiscreteModel build_model(Scheme scheme, const PhysicalParams& params, const Mesh& mesh) {
  return SemiDiscreteModel(scheme, params, mesh);
}

/// Time derivative of the closed-loop first-order system:
/// (vdot, M^{-1}(-A v + B vdot)), B = diag(0, ..., 0, -xi/h).
inline State apply_operator(const SemiDiscreteModel& model, const State& s) {
  const int n = model.unknowns();
  if (s.v.size() != n || s.vdot.size() != n) throw SizeError("state dimension does not match model");
  Eigen::VectorXd force = -model.stiffness().apply(s.v);
  force[n - 1] += model.damping_entry() * s.vdot[n - 1];
  return {s.vdot, model.solve_mass(force)};
}

/// Dense block form [[0, I], [-M^{-1}A, M^{-1}B]] of the first-order operator.
inline Eigen::MatrixXd assemble_dense_operator(const SemiDiscreteModel& model) {
  const int n = model.unknowns();
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  op.topRightCorner(n, n).setIdentity();
  const Eigen::MatrixXd a = model.stiffness().dense();
  Eigen::MatrixXd lower_left(n, n);
  for (int j = 0; j < n; ++j) lower_left.col(j) = -model.solve_mass(a.col(j));
  op.bottomLeftCorner(n, n) = lower_left;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[n - 1] = model.damping_entry();
  op.bottomRightCorner(n, n).col(n - 1) = model.solve_mass(e);
  return op;
}

}  // namespace dampwave
