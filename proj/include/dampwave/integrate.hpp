#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dampwave/dense_eigen.hpp"
#include "dampwave/energy.hpp"
#include "dampwave/errors.hpp"
#include "dampwave/modal.hpp"
#include "dampwave/model.hpp"

namespace dampwave {

enum class Integrator { RK4, ModalExact };

inline std::string_view to_string(Integrator m) { return m == Integrator::RK4 ? "rk4" : "modal-exact"; }

inline Integrator parse_integrator(std::string_view s) {
  if (s == "rk4") return Integrator::RK4;
  if (s == "modal-exact" || s == "modal") return Integrator::ModalExact;
  throw ParameterError("unknown integrator '" + std::string(s) + "' (expected rk4 or modal-exact)");
}

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  std::size_t size() const noexcept { return times.size(); }
};

/// dt = h / (10 c).
inline double default_dt(const SemiDiscreteModel& model) {
  return model.mesh().h() / (10.0 * model.params().c);
}

/// Samples at t_k = k dt, k = 0..floor(T/dt).
inline std::size_t sample_count(double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ParameterError("horizon T must be >= 0");
  return static_cast<std::size_t>(std::floor(T / dt + 1e-9)) + 1;
}

/// Classical four-stage Runge-Kutta on the first-order system.
inline Trajectory integrate_rk4(const SemiDiscreteModel& model, const State& s0, double T, double dt) {
  const std::size_t count = sample_count(T, dt);
  if (s0.v.size() != model.unknowns() || s0.vdot.size() != model.unknowns())
    throw SizeError("initial state dimension does not match model");

  auto add = [](const State& a, double f, const State& b) { return State{a.v + f * b.v, a.vdot + f * b.vdot}; };

  Trajectory tr;
  tr.times.reserve(count);
  tr.states.reserve(count);
  State s = s0;
  const double e0 = energy(model, s0);
  tr.times.push_back(0.0);
  tr.states.push_back(s);
  for (std::size_t k = 1; k < count; ++k) {
    const State k1 = apply_operator(model, s);
    const State k2 = apply_operator(model, add(s, 0.5 * dt, k1));
    const State k3 = apply_operator(model, add(s, 0.5 * dt, k2));
    const State k4 = apply_operator(model, add(s, dt, k3));
    s.v += dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    s.vdot += dt / 6.0 * (k1.vdot + 2.0 * k2.vdot + 2.0 * k3.vdot + k4.vdot);
    const double e = energy(model, s);
    if (!std::isfinite(e) || e > 10.0 * e0) {
      const double suggested = model.mesh().h() / (5.0 * model.params().c);
      throw StepSizeError("rk4 unstable: energy grew more than 10x; use dt <= " + std::to_string(suggested),
                          suggested);
    }
    tr.times.push_back(static_cast<double>(k) * dt);
    tr.states.push_back(s);
  }
  return tr;
}

/// Exact propagation of modal coefficients, y(t) = Re(V diag(e^{lambda t}) a),
/// a = W y0, optionally masked (filtered retention).
inline Trajectory integrate_modal(const ModalBasis& basis, const State& s0, double T, double dt,
                                  const Eigen::VectorXcd* mask = nullptr) {
  const std::size_t count = sample_count(T, dt);
  if (2 * s0.unknowns() != basis.dim()) throw SizeError("initial state dimension does not match basis");
  if (basis.condition > 1e12)
    throw ConditioningError("eigenbasis condition estimate exceeds 1e12", basis.condition);
  Eigen::VectorXcd a = basis.coefficients(s0.stacked());
  if (mask) a = a.cwiseProduct(*mask);

  Trajectory tr;
  tr.times.reserve(count);
  tr.states.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) * dt;
    tr.times.push_back(t);
    tr.states.push_back(k == 0 && !mask ? s0 : State::from_stacked(basis.evolve(a, t)));
  }
  return tr;
}

/// Dispatching entry point. Modal-exact builds the dense spectrum when no
/// basis is supplied.
inline Trajectory integrate(const SemiDiscreteModel& model, const State& s0, double T, double dt,
                            Integrator method, const ModalBasis* basis = nullptr) {
  if (method == Integrator::RK4) return integrate_rk4(model, s0, T, dt);
  if (basis) return integrate_modal(*basis, s0, T, dt);
  const ModalBasis own = ModalBasis::from_spectrum(dense_spectrum(model));
  return integrate_modal(own, s0, T, dt);
}

}  // namespace dampwave
