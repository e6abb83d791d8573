#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dampwave/errors.hpp"
#include "dampwave/modal.hpp"
#include "dampwave/model.hpp"
#include "dampwave/spectrum.hpp"

namespace dampwave {

/// Threshold on h^2|lambda|^2 / normalizer, normalizer = 4c^2 (FD) or 12c^2 (FEM).
struct FilterSpec {
  double gamma = 1.0;
  Scheme scheme = Scheme::FD;
  double normalizer = 4.0;

  static FilterSpec make(double gamma, Scheme scheme, const PhysicalParams& params) {
    if (!(gamma > 0.0) || !(gamma <= 1.0)) throw FilterError("filter parameter gamma must lie in (0, 1]");
    const double k = scheme == Scheme::FD ? 4.0 : 12.0;
    return {gamma, scheme, k * params.c * params.c};
  }

  bool retains_all() const noexcept { return gamma >= 1.0; }
};

/// h^2 |lambda|^2 / normalizer for every eigenvalue, in spectrum order.
inline std::vector<double> normalized_moduli(const Spectrum& spec, const FilterSpec& fs) {
  const double h = spec.mesh.h();
  std::vector<double> out;
  out.reserve(spec.size());
  for (const auto& p : spec.pairs) out.push_back(h * h * std::norm(p.lambda) / fs.normalizer);
  return out;
}

struct FilteredBasis {
  FilterSpec spec;
  std::shared_ptr<const ModalBasis> basis;
  std::vector<std::size_t> retained;  // indices into the spectrum, ascending
  std::size_t retained_pairs = 0;     // conjugate pairs (a real eigenvalue counts as one)
  double kappa = 0.0;                 // max retained h^2 |lambda|^2
  double gamma_effective = 0.0;       // kappa / normalizer
  bool identity = false;              // gamma = 1: nothing is removed
  Eigen::MatrixXd projector;          // Re(V_R W_R)
  Eigen::VectorXcd mask;              // 1 on retained modal coefficients, 0 elsewhere

  std::size_t total() const { return static_cast<std::size_t>(basis->dim()); }
};

/// Keeps every eigenvalue with normalized modulus <= gamma (equality retained).
inline FilteredBasis select_modes(const Spectrum& spectrum, const FilterSpec& fs) {
  const int dim = 2 * spectrum.mesh.unknowns();
  if (static_cast<int>(spectrum.size()) != dim)
    throw SizeError("filter needs the complete spectrum of " + std::to_string(dim) + " eigenvalues");
  if (spectrum.scheme != fs.scheme) throw FilterError("filter scheme does not match spectrum scheme");

  FilteredBasis fb;
  fb.spec = fs;
  fb.basis = std::make_shared<const ModalBasis>(ModalBasis::from_spectrum(spectrum));
  fb.identity = fs.retains_all();
  const auto mod = normalized_moduli(spectrum, fs);
  fb.mask = Eigen::VectorXcd::Zero(dim);
  for (std::size_t k = 0; k < mod.size(); ++k) {
    if (fb.identity || mod[k] <= fs.gamma) {
      fb.retained.push_back(k);
      fb.mask[static_cast<Eigen::Index>(k)] = 1.0;
      fb.kappa = std::max(fb.kappa, mod[k] * fs.normalizer);
      if (spectrum.pairs[k].lambda.imag() >= 0.0) ++fb.retained_pairs;
    }
  }
  if (fb.retained.empty())
    throw FilterError("filter too aggressive: no eigenvalue has normalized modulus <= " + std::to_string(fs.gamma));
  fb.gamma_effective = fb.kappa / fs.normalizer;

  if (fb.identity) {
    fb.projector = Eigen::MatrixXd::Identity(dim, dim);
  } else {
    const auto& b = *fb.basis;
    Eigen::MatrixXcd vr(dim, static_cast<Eigen::Index>(fb.retained.size()));
    Eigen::MatrixXcd wr(static_cast<Eigen::Index>(fb.retained.size()), dim);
    for (std::size_t r = 0; r < fb.retained.size(); ++r) {
      vr.col(static_cast<Eigen::Index>(r)) = b.V.col(static_cast<Eigen::Index>(fb.retained[r]));
      wr.row(static_cast<Eigen::Index>(r)) = b.W.row(static_cast<Eigen::Index>(fb.retained[r]));
    }
    fb.projector = (vr * wr).real();
  }
  return fb;
}

/// Component of `s` in the retained eigenvector span (oblique projection).
inline State project_state(const FilteredBasis& fb, const State& s) {
  const Eigen::Index dim = fb.basis->dim();
  if (2 * s.unknowns() != dim || s.v.size() != s.vdot.size()) throw SizeError("state dimension does not match filter");
  if (fb.basis->condition > 1e12)
    throw ConditioningError("eigenbasis condition estimate exceeds 1e12", fb.basis->condition);
  if (fb.identity) return s;
  return State::from_stacked(fb.projector * s.stacked());
}

/// Threshold midway between the m-th and (m+1)-th smallest normalized pair
/// moduli, so select_modes keeps exactly m pairs; m = N+1 gives gamma = 1.
inline double gamma_for_pair_count(const Spectrum& spectrum, int m, const FilterSpec& fs) {
  const int n_pairs = spectrum.mesh.unknowns();
  if (m < 1 || m > n_pairs) throw SizeError("pair count must lie in [1, N+1]");
  if (m == n_pairs) return 1.0;
  std::vector<double> mod;
  const double h = spectrum.mesh.h();
  for (const auto& p : spectrum.pairs)
    if (p.lambda.imag() >= 0.0) mod.push_back(h * h * std::norm(p.lambda) / fs.normalizer);
  if (static_cast<int>(mod.size()) != n_pairs)
    throw SizeError("spectrum does not consist of N+1 conjugate pairs");
  std::sort(mod.begin(), mod.end());
  const double g = 0.5 * (mod[m - 1] + mod[m]);
  if (!(g > 0.0) || g > 1.0)
    throw FilterError("pair count " + std::to_string(m) + " needs a threshold outside (0, 1]");
  return g;
}

}  // namespace dampwave
