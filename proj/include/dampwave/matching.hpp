#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dampwave/errors.hpp"
#include "dampwave/spectrum.hpp"

namespace dampwave {

struct MatchReport {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (index in a, index in b)
  double max_rel_gap = 0.0;
  bool used_assignment = false;  // true if the greedy pass conflicted
};

namespace detail {

inline double rel_gap(cplx a, cplx b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

// Minimum-cost perfect assignment on a square cost matrix (Kuhn-Munkres with
// potentials, O(n^3)). Returns assignment[row] = column.
inline std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

}  // namespace detail

/// One-to-one pairing of two eigenvalue lists of equal length. Greedy
/// nearest-neighbour first; if two entries of `a` claim the same entry of `b`
/// or a greedy gap exceeds `cap`, an optimal assignment is used instead.
inline MatchReport match_eigenvalues(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                     double cap = 1e-4) {
  if (a.size() != b.size())
    throw ConsistencyError("eigenvalue lists differ in length: " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
  MatchReport rep;
  std::vector<bool> taken(b.size(), false);
  bool conflict = false;
  for (std::size_t i = 0; i < a.size() && !conflict; ++i) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(a[i] - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == b.size() || taken[best] || detail::rel_gap(a[i], b[best]) > cap) {
      conflict = true;
      break;
    }
    taken[best] = true;
    rep.pairs.emplace_back(i, best);
  }

  if (conflict) {
    rep.pairs.clear();
    rep.used_assignment = true;
    std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = std::abs(a[i] - b[j]);
    const auto assignment = detail::hungarian(cost);
    for (std::size_t i = 0; i < a.size(); ++i) rep.pairs.emplace_back(i, assignment[i]);
  }

  for (const auto& [i, j] : rep.pairs) rep.max_rel_gap = std::max(rep.max_rel_gap, detail::rel_gap(a[i], b[j]));
  return rep;
}

/// Matches and throws ConsistencyError if any pair is farther apart than `tol`
/// (relative to the entry of `b`).
inline MatchReport require_match(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  MatchReport rep = match_eigenvalues(a, b, std::max(tol, 1e-4));
  if (!(rep.max_rel_gap <= tol))
    throw ConsistencyError("unmatched eigenvalue: relative gap " + std::to_string(rep.max_rel_gap) +
                           " exceeds " + std::to_string(tol));
  return rep;
}

}  // namespace dampwave
