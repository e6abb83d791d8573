#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dampwave/errors.hpp"
#include "dampwave/spectrum.hpp"

namespace dampwave {

/// Envelope constant K in h^2 |lambda_j|^2 <= K c^2 sin^2(2 j pi / (4N+5)) + O(h).
inline double modulus_bound_constant(Scheme s) { return s == Scheme::FD ? 4.0 : 12.0; }

/// Per-resolution measurements for the modulus envelope.
struct ModulusBoundSample {
  Scheme scheme;
  int N;
  double h;
  double max_excess;  // max_j h^2|lambda_j|^2 - K c^2 sin^2(...), may be negative
  double max_h_re;    // max_j h |Re lambda_j|
  std::vector<double> excess;  // per j = 1..N+1
};

/// Evaluates the envelope on the upper-half eigenvalues of `spectrum`,
/// indexed j = 1..N+1 by ascending imaginary part.
inline ModulusBoundSample check_modulus_bounds(const Spectrum& spectrum) {
  const int N = spectrum.mesh.N();
  const double h = spectrum.mesh.h();
  const double c = spectrum.params.c;
  const double K = modulus_bound_constant(spectrum.scheme);
  const auto upper = upper_half(spectrum.eigenvalues());
  if (static_cast<int>(upper.size()) != N + 1)
    throw SizeError("modulus bounds need N+1 eigenvalues in the upper half plane");

  ModulusBoundSample s{spectrum.scheme, N, h, -std::numeric_limits<double>::infinity(), 0.0, {}};
  for (int j = 1; j <= N + 1; ++j) {
    const cplx lam = upper[j - 1];
    const double sn = std::sin(2.0 * j * std::numbers::pi / (4.0 * N + 5.0));
    const double ex = h * h * std::norm(lam) - K * c * c * sn * sn;
    s.excess.push_back(ex);
    s.max_excess = std::max(s.max_excess, ex);
  }
  for (const auto& p : spectrum.pairs) s.max_h_re = std::max(s.max_h_re, h * std::abs(p.lambda.real()));
  return s;
}

struct ModulusBoundReport {
  double fitted_C = 0.0;             // from all but the finest resolution
  std::vector<double> min_slack;     // per sample: min_j K c^2 sin^2 + C h - h^2|lambda_j|^2
  std::vector<double> halving_ratio; // max_h_re(N_{k+1}) / max_h_re(N_k)
  bool slack_ok = false;             // finest resolution predicted by the coarse fit
  bool halving_ok = false;           // every ratio within 0.5 +- 30% (resolutions doubling)
};

/// Fits C = max(0, max excess / h) on the coarser resolutions and checks the
/// finest one against it; samples must be ordered by increasing N.
inline ModulusBoundReport fit_modulus_bounds(const std::vector<ModulusBoundSample>& samples) {
  if (samples.size() < 2) throw SizeError("modulus bound fit needs at least two resolutions");
  ModulusBoundReport r;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k)
    r.fitted_C = std::max(r.fitted_C, samples[k].max_excess / samples[k].h);
  for (const auto& s : samples) r.min_slack.push_back(r.fitted_C * s.h - s.max_excess);
  r.slack_ok = r.min_slack.back() >= -1e-12;
  r.halving_ok = true;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double ratio = samples[k + 1].max_h_re / samples[k].max_h_re;
    r.halving_ratio.push_back(ratio);
    r.halving_ok = r.halving_ok && std::abs(ratio - 0.5) <= 0.15;
  }
  return r;
}

}  // namespace dampwave
