#pragma once

#include <algorithm>
#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dampwave/model.hpp"

namespace dampwave {

using cplx = std::complex<double>;

enum class Provenance { ClosedForm, PolynomialRoot, DenseOracle };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed-form";
    case Provenance::PolynomialRoot: return "polynomial-root";
    case Provenance::DenseOracle: return "dense-oracle";
  }
  return "unknown";
}

struct EigenPair {
  cplx lambda;
  Eigen::VectorXcd vec;  // unit 2-norm, may be empty when only values are known
  Provenance provenance = Provenance::DenseOracle;
  double residual = 0.0;  // ||Op vec - lambda vec||
};

struct Spectrum {
  Scheme scheme;
  PhysicalParams params;
  Mesh mesh;
  std::vector<EigenPair> pairs;

  std::size_t size() const noexcept { return pairs.size(); }

  std::vector<cplx> eigenvalues() const {
    std::vector<cplx> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.lambda);
    return out;
  }

  bool has_vectors() const {
    return !pairs.empty() && std::all_of(pairs.begin(), pairs.end(),
                                         [](const EigenPair& p) { return p.vec.size() > 0; });
  }

  double max_residual() const {
    double r = 0.0;
    for (const auto& p : pairs) r = std::max(r, p.residual);
    return r;
  }
};

/// Ascending imaginary part, ties broken by real part.
inline void sort_by_imaginary(std::vector<EigenPair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
    return a.lambda.real() < b.lambda.real();
  });
}

/// Eigenvalues with Im > 0 (one representative per conjugate pair),
/// sorted by ascending |Im|.
inline std::vector<cplx> upper_half(const std::vector<cplx>& values) {
  std::vector<cplx> out;
  for (const auto& z : values)
    if (z.imag() > 0.0) out.push_back(z);
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
  return out;
}

}  // namespace dampwave
