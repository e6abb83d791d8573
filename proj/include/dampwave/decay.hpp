#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dampwave/energy.hpp"
#include "dampwave/errors.hpp"
#include "dampwave/integrate.hpp"
#include "dampwave/model.hpp"

namespace dampwave {

struct DecayPrediction {
  double delta = 0.0;      // Lyapunov weight
  double sigma = 0.0;      // guaranteed exponent
  double overshoot = 1.0;  // M
  double gamma = 0.0;
  double kappa = 0.0;
  bool degenerate = false;         // sigma <= 0 (gamma >= 1)
  bool within_hypotheses = false;  // 0 < xi < c and 0 < gamma < 1
};

/// Semi-discrete prediction:
///   delta = (c/2L) min(1, 2 xi c / (c^2 + xi^2)),
///   sigma = delta (1 - L delta / c)(1 - gamma),  M = (c + delta L)/(c - delta L).
inline DecayPrediction decay_prediction(const PhysicalParams& params, double gamma, Scheme scheme) {
  params.validate();
  if (!(params.xi > 0.0)) throw DomainError("decay prediction needs xi > 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ParameterError("filter parameter gamma must be >= 0");
  const double c = params.c;
  const double L = params.L;
  const double xi = params.xi;
  DecayPrediction d;
  d.delta = c / (2.0 * L) * std::min(1.0, 2.0 * xi * c / (c * c + xi * xi));
  d.gamma = gamma;
  d.kappa = gamma * (scheme == Scheme::FD ? 4.0 : 12.0) * c * c;
  d.sigma = d.delta * (1.0 - L * d.delta / c) * (1.0 - gamma);
  d.overshoot = (c + d.delta * L) / (c - d.delta * L);
  d.degenerate = !(d.sigma > 0.0);
  d.within_hypotheses = xi < c && gamma > 0.0 && gamma < 1.0;
  return d;
}

/// Continuum reference: delta = (1/2) min(c/2L, xi c^2 / (L(c^2 + xi^2))),
/// sigma = 2 delta (1 - 2 L delta / c), M = (c + 2 L delta)/(c - 2 L delta).
inline DecayPrediction pde_decay(const PhysicalParams& params) {
  params.validate();
  if (!(params.xi > 0.0)) throw DomainError("decay prediction needs xi > 0");
  const double c = params.c;
  const double L = params.L;
  const double xi = params.xi;
  DecayPrediction d;
  d.delta = 0.5 * std::min(c / (2.0 * L), xi * c * c / (L * (c * c + xi * xi)));
  d.sigma = 2.0 * d.delta * (1.0 - 2.0 * L * d.delta / c);
  d.overshoot = (c + 2.0 * L * d.delta) / (c - 2.0 * L * d.delta);
  d.degenerate = !(d.sigma > 0.0);
  d.within_hypotheses = xi <= c;
  return d;
}

/// (c / 4L)(1 - gamma): the exponent at the optimal gain xi = c.
inline double sigma_max(const PhysicalParams& params, double gamma) {
  params.validate();
  return params.c / (4.0 * params.L) * (1.0 - gamma);
}

struct EnergyTrace {
  std::vector<double> t;
  std::vector<double> E;
  std::vector<double> v_tip;
  std::vector<double> vdot_tip;
  std::vector<double> L_delta;  // E + delta F (equals E when delta = 0)
  double delta = 0.0;

  std::size_t size() const noexcept { return t.size(); }
};

inline EnergyTrace energy_trace(const SemiDiscreteModel& model, const Trajectory& tr, double delta = 0.0,
                                FemEnergyForm form = FemEnergyForm::Consistent) {
  EnergyTrace et;
  et.delta = delta;
  const int n = model.unknowns();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const State& s = tr.states[k];
    const double e = energy(model, s, form);
    et.t.push_back(tr.times[k]);
    et.E.push_back(e);
    et.v_tip.push_back(s.v[n - 1]);
    et.vdot_tip.push_back(s.vdot[n - 1]);
    et.L_delta.push_back(delta > 0.0 ? e + delta * multiplier_term(model, s) : e);
  }
  return et;
}

namespace detail {

inline double uniform_step(const std::vector<double>& t) {
  if (t.size() < 2) throw SizeError("trace needs at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs(t[k] - t[k - 1] - dt) > 1e-9 * std::max(1.0, dt)) throw SizeError("trace is not uniformly sampled");
  return dt;
}

// Central-difference derivative of x at interior sample k (order 2 or 4).
inline double central_derivative(const std::vector<double>& x, std::size_t k, double dt, int order) {
  if (order == 2) return (x[k + 1] - x[k - 1]) / (2.0 * dt);
  return (-x[k + 2] + 8.0 * x[k + 1] - 8.0 * x[k - 1] + x[k - 2]) / (12.0 * dt);
}

}  // namespace detail

/// max_k |dE/dt + xi vdot_{N+1}^2| over interior samples, normalized by E(0)/T.
/// `stencil_order` selects the 3-point (2) or 5-point (4) central difference.
inline double dissipation_residual(const EnergyTrace& trace, double xi, int stencil_order = 4) {
  if (stencil_order != 2 && stencil_order != 4) throw ParameterError("stencil order must be 2 or 4");
  const double dt = detail::uniform_step(trace.t);
  const std::size_t w = stencil_order / 2;
  if (trace.size() < 2 * w + 1) throw SizeError("trace too short for the difference stencil");
  double worst = 0.0;
  for (std::size_t k = w; k + w < trace.size(); ++k) {
    const double r = detail::central_derivative(trace.E, k, dt, stencil_order) + xi * trace.vdot_tip[k] * trace.vdot_tip[k];
    worst = std::max(worst, std::abs(r));
  }
  const double T = trace.t.back() - trace.t.front();
  const double scale = trace.E.front() / T;
  return scale > 0.0 ? worst / scale : worst;
}

struct DecayFit {
  double sigma = 0.0;
  double residual = 0.0;  // RMS of log-envelope residuals
  std::size_t points = 0;
};

/// Least-squares slope of log E over [0.1T, 0.9T] on 20 block maxima.
inline DecayFit fit_decay_rate(const EnergyTrace& trace) {
  if (trace.size() < 2) throw SizeError("trace needs at least two samples");
  const double t0 = trace.t.front();
  const double T = trace.t.back() - t0;
  std::vector<std::size_t> window;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double s = trace.t[k] - t0;
    if (s >= 0.1 * T - 1e-12 && s <= 0.9 * T + 1e-12) window.push_back(k);
  }
  for (std::size_t k : window)
    if (!(trace.E[k] > 0.0)) throw DomainError("energy must be positive on the fit window");
  if (window.size() < 2) throw SizeError("fit window holds fewer than two samples");

  const std::size_t blocks = std::min<std::size_t>(20, window.size());
  const std::size_t base = window.size() / blocks;
  const std::size_t extra = window.size() % blocks;
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    std::size_t best = window[pos];
    for (std::size_t i = pos; i < pos + len; ++i)
      if (trace.E[window[i]] > trace.E[best]) best = window[i];
    xs.push_back(trace.t[best]);
    ys.push_back(std::log(trace.E[best]));
    pos += len;
  }

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw SizeError("fit window has no time spread");
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    rss += r * r;
  }
  return {-slope, std::sqrt(rss / n), xs.size()};
}

struct EnvelopeCheck {
  bool holds = false;
  double max_ratio = 0.0;  // max_k E(t_k) / (M E(0) e^{-sigma t_k})
};

inline EnvelopeCheck check_envelope(const EnergyTrace& trace, const DecayPrediction& pred) {
  EnvelopeCheck c;
  const double e0 = trace.E.front();
  if (!(e0 > 0.0)) return {true, 0.0};
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double bound = pred.overshoot * e0 * std::exp(-pred.sigma * (trace.t[k] - trace.t.front()));
    c.max_ratio = std::max(c.max_ratio, trace.E[k] / bound);
  }
  c.holds = c.max_ratio <= 1.0 + 1e-12;
  return c;
}

/// max_k L(t_k) / (L(0) e^{-sigma t_k}); <= 1 when the Lyapunov functional
/// decays at rate sigma.
inline double lyapunov_envelope_ratio(const EnergyTrace& trace, double sigma) {
  const double l0 = trace.L_delta.front();
  if (!(l0 > 0.0)) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k)
    worst = std::max(worst, trace.L_delta[k] / (l0 * std::exp(-sigma * (trace.t[k] - trace.t.front()))));
  return worst;
}

/// max_k (dL/dt + sigma L) / L over interior samples (5-point stencil);
/// nonpositive when the derivative bound holds.
inline double derivative_lemma_margin(const EnergyTrace& trace, double sigma) {
  const double dt = detail::uniform_step(trace.t);
  if (trace.size() < 5) throw SizeError("trace too short for the difference stencil");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k + 2 < trace.size(); ++k) {
    const double l = trace.L_delta[k];
    if (!(l > 0.0)) continue;
    worst = std::max(worst, (detail::central_derivative(trace.L_delta, k, dt, 4) + sigma * l) / l);
  }
  return worst;
}

}  // namespace dampwave
