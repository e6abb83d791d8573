#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "dampwave/errors.hpp"
#include "dampwave/model.hpp"

namespace dampwave {

/// Band of sines, v_j = vdot_j = amplitude * sum_{i=k_min}^{k_max} sin(i pi x_j / L).
inline State sine_band(const Mesh& mesh, int k_min, int k_max, double amplitude) {
  if (k_min < 1 || k_max < k_min) throw ParameterError("sine band needs 1 <= k_min <= k_max");
  const int n = mesh.unknowns();
  State s = State::zero(n);
  for (int j = 1; j <= n; ++j) {
    const double x = mesh.node(j) / mesh.L();
    double acc = 0.0;
    for (int i = k_min; i <= k_max; ++i) acc += std::sin(i * std::numbers::pi * x);
    s.v[j - 1] = amplitude * acc;
  }
  s.vdot = s.v;
  return s;
}

/// Band shifted so that its top wavenumber equals N: [k_min + N - k_max, N].
/// Identity when N = k_max.
inline State sine_band_top(const Mesh& mesh, int k_min, int k_max, double amplitude) {
  const int shift = mesh.N() - k_max;
  if (k_min + shift < 1) throw ParameterError("sine band wider than the mesh");
  return sine_band(mesh, k_min + shift, k_max + shift, amplitude);
}

/// Standard normal entries from a seeded Mersenne twister.
inline State random_state(int unknowns, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  State s = State::zero(unknowns);
  for (int i = 0; i < unknowns; ++i) s.v[i] = g(rng);
  for (int i = 0; i < unknowns; ++i) s.vdot[i] = g(rng);
  return s;
}

}  // namespace dampwave
