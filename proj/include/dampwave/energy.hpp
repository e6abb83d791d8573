#pragma once

#include <cmath>

#include "dampwave/errors.hpp"
#include "dampwave/model.hpp"

namespace dampwave {

/// FEM energy variants. Consistent includes the first cell (v_0 = 0), which
/// makes dE/dt = -xi |vdot_{N+1}|^2 exact; AsPrinted starts the sums at j = 1.
enum class FemEnergyForm { Consistent, AsPrinted };

/// Discrete energy (rho = 1).
///  FD:  (h/2) [sum_j vdot_j^2 + c^2 sum_{j=0}^{N} ((v_{j+1} - v_j)/h)^2]
///  FEM: (h/12)[vdot_{N+1}^2 + sum_j (2 vdot_j^2 + (vdot_j + vdot_{j+1})^2 + 6c^2 ((v_{j+1} - v_j)/h)^2)]
inline double energy(const SemiDiscreteModel& model, const State& s,
                     FemEnergyForm form = FemEnergyForm::Consistent) {
  const int n = model.unknowns();
  if (s.v.size() != n || s.vdot.size() != n) throw SizeError("state dimension does not match model");
  const double h = model.mesh().h();
  const double c2 = model.params().c * model.params().c;
  auto v = [&](int j) { return j == 0 ? 0.0 : s.v[j - 1]; };
  auto w = [&](int j) { return j == 0 ? 0.0 : s.vdot[j - 1]; };

  if (model.scheme() == Scheme::FD) {
    double kin = 0.0;
    double pot = 0.0;
    for (int j = 1; j <= n; ++j) kin += w(j) * w(j);
    for (int j = 0; j < n; ++j) {
      const double d = (v(j + 1) - v(j)) / h;
      pot += d * d;
    }
    return 0.5 * h * (kin + c2 * pot);
  }

  const int first = form == FemEnergyForm::Consistent ? 0 : 1;
  double acc = w(n) * w(n);
  for (int j = first; j < n; ++j) {
    const double d = (v(j + 1) - v(j)) / h;
    const double ws = w(j) + w(j + 1);
    acc += 2.0 * w(j) * w(j) + ws * ws + 6.0 * c2 * d * d;
  }
  return h / 12.0 * acc;
}

/// Multiplier cross term F; v_0 = vdot_0 = 0.
///  FD:  sum_{j=1}^N j h vdot_j (v_{j+1} - v_{j-1})/2 + (L/2)(v_{N+1} - v_N) vdot_{N+1}
///       - (L xi h / 4c^2) vdot_{N+1}^2
///  FEM: h sum_{j=1}^N (vdot_{j+1} + 4 vdot_j + vdot_{j-1})/6 * j (v_{j+1} - v_{j-1})/2
///       + (L/6)(2 vdot_{N+1} + vdot_N)(v_{N+1} - v_N)
inline double multiplier_term(const SemiDiscreteModel& model, const State& s) {
  const int n = model.unknowns();
  if (s.v.size() != n || s.vdot.size() != n) throw SizeError("state dimension does not match model");
  const int N = model.mesh().N();
  const double h = model.mesh().h();
  const double L = model.params().L;
  const double c = model.params().c;
  auto v = [&](int j) { return j == 0 ? 0.0 : s.v[j - 1]; };
  auto w = [&](int j) { return j == 0 ? 0.0 : s.vdot[j - 1]; };

  double f = 0.0;
  if (model.scheme() == Scheme::FD) {
    for (int j = 1; j <= N; ++j) f += j * h * w(j) * 0.5 * (v(j + 1) - v(j - 1));
    f += 0.5 * L * (v(N + 1) - v(N)) * w(N + 1);
    f -= L * model.params().xi * h / (4.0 * c * c) * w(N + 1) * w(N + 1);
  } else {
    for (int j = 1; j <= N; ++j) f += h * (w(j + 1) + 4.0 * w(j) + w(j - 1)) / 6.0 * j * 0.5 * (v(j + 1) - v(j - 1));
    f += L / 6.0 * (2.0 * w(N + 1) + w(N)) * (v(N + 1) - v(N));
  }
  return f;
}

struct LyapunovValue {
  double E;
  double F;
  double L;  // E + delta F
};

inline LyapunovValue lyapunov(const SemiDiscreteModel& model, const State& s, double delta) {
  const double cap = model.params().c / model.params().L;
  if (!(delta > 0.0) || !(delta < cap)) throw ParameterError("Lyapunov weight delta must lie in (0, c/L)");
  const double e = energy(model, s);
  const double f = multiplier_term(model, s);
  return {e, f, e + delta * f};
}

}  // namespace dampwave
