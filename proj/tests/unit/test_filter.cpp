#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dampwave/dense_eigen.hpp"
#include "dampwave/energy.hpp"
#include "dampwave/filter.hpp"
#include "dampwave/initial_data.hpp"
#include "dampwave/integrate.hpp"

using namespace dampwave;

namespace {

struct Case {
  PhysicalParams p;
  Mesh mesh;
  SemiDiscreteModel model;
  Spectrum spec;
  Case(Scheme s, int N, double xi)
      : p{1.0, 1.0, xi}, mesh(N, 1.0), model(s, p, mesh), spec(dense_spectrum(model)) {}
};

FilteredBasis by_pairs(const Case& s, int m) {
  const FilterSpec full = FilterSpec::make(1.0, s.model.scheme(), s.p);
  return select_modes(s.spec, FilterSpec::make(gamma_for_pair_count(s.spec, m, full), s.model.scheme(), s.p));
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(FilterSpec, Range) {
  const PhysicalParams p{2.0, 1.0, 0.5};
  EXPECT_THROW(FilterSpec::make(0.0, Scheme::FD, p), FilterError);
  EXPECT_THROW(FilterSpec::make(1.1, Scheme::FD, p), FilterError);
  EXPECT_THROW(FilterSpec::make(-0.5, Scheme::FD, p), FilterError);
  EXPECT_DOUBLE_EQ(FilterSpec::make(0.5, Scheme::FD, p).normalizer, 16.0);
  EXPECT_DOUBLE_EQ(FilterSpec::make(0.5, Scheme::FEM, p).normalizer, 48.0);
  EXPECT_TRUE(FilterSpec::make(1.0, Scheme::FD, p).retains_all());
}

TEST(SelectModes, RetainAllIsIdentity) {
  const Case s(Scheme::FD, 8, 0.9);
  const auto fb = select_modes(s.spec, FilterSpec::make(1.0, Scheme::FD, s.p));
  EXPECT_TRUE(fb.identity);
  EXPECT_EQ(fb.retained.size(), s.spec.size());
  EXPECT_EQ(fb.retained_pairs, 9u);
  EXPECT_TRUE(fb.projector.isIdentity(0.0));
  const State x = sine_band(s.mesh, 1, 9, 0.3);
  const State y = project_state(fb, x);
  EXPECT_EQ((y.stacked() - x.stacked()).norm(), 0.0);
}

TEST(SelectModes, TooAggressive) {
  const Case s(Scheme::FEM, 8, 0.5);
  EXPECT_THROW(select_modes(s.spec, FilterSpec::make(1e-9, Scheme::FEM, s.p)), FilterError);
}

TEST(SelectModes, SchemeMismatchAndIncompleteSpectrum) {
  Case s(Scheme::FD, 6, 0.5);
  EXPECT_THROW(select_modes(s.spec, FilterSpec::make(0.5, Scheme::FEM, s.p)), FilterError);
  s.spec.pairs.pop_back();
  EXPECT_THROW(select_modes(s.spec, FilterSpec::make(0.5, Scheme::FD, s.p)), SizeError);
}

TEST(SelectModes, TenPairsAtN30) {
  for (Scheme sc : {Scheme::FD, Scheme::FEM}) {
    const Case s(sc, 30, 0.9);
    const auto fb = by_pairs(s, 10);
    EXPECT_EQ(fb.retained_pairs, 10u);
    EXPECT_EQ(fb.retained.size(), 20u);
    EXPECT_EQ(s.spec.size() - fb.retained.size(), 42u);
    EXPECT_GT(fb.gamma_effective, 0.0);
    EXPECT_LT(fb.gamma_effective, 1.0);
    EXPECT_LE(fb.gamma_effective, fb.spec.gamma);
    EXPECT_DOUBLE_EQ(fb.kappa / fb.spec.normalizer, fb.gamma_effective);
  }
}

TEST(GammaForPairCount, RoundTripAndRange) {
  const Case s(Scheme::FD, 15, 0.6);
  const FilterSpec full = FilterSpec::make(1.0, Scheme::FD, s.p);
  EXPECT_EQ(gamma_for_pair_count(s.spec, 16, full), 1.0);
  EXPECT_THROW(gamma_for_pair_count(s.spec, 0, full), SizeError);
  EXPECT_THROW(gamma_for_pair_count(s.spec, 17, full), SizeError);
  for (int m = 1; m <= 16; ++m) EXPECT_EQ(by_pairs(s, m).retained_pairs, static_cast<std::size_t>(m));
  const auto one = by_pairs(s, 1);
  for (std::size_t k : one.retained) EXPECT_LT(std::abs(s.spec.pairs[k].lambda), 3.0);
}

TEST(ProjectState, Annihilation) {
  const Case s(Scheme::FD, 20, 0.7);
  const auto fb = by_pairs(s, 3);
  // Real part of the top eigenvector (its conjugate is also filtered).
  const auto& top = s.spec.pairs.back();
  const State x = State::from_stacked(top.vec.real());
  EXPECT_LT(project_state(fb, x).stacked().norm(), 1e-10);
  EXPECT_THROW(project_state(fb, State::zero(5)), SizeError);
}

TEST(ProjectState, EnergyDecreasesForOrthogonalModes) {
  const Case s(Scheme::FD, 30, 0.0);
  const auto fb = by_pairs(s, 10);
  const State x = sine_band(s.mesh, 5, 25, 1e-3);
  const State y = project_state(fb, x);
  EXPECT_LE(energy(s.model, y), energy(s.model, x) * (1 + 1e-12));
  EXPECT_GT(energy(s.model, y), 0.0);
}

TEST(ProjectState, ConditioningGuard) {
  FilteredBasis fb = by_pairs(Case(Scheme::FD, 4, 0.5), 2);
  auto b = std::make_shared<ModalBasis>(*fb.basis);
  b->condition = 1e13;
  fb.basis = b;
  EXPECT_THROW(project_state(fb, State::zero(5)), ConditioningError);
}

// Properties over 100 random (scheme, N, xi, m) draws each.
class FilterProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{4242};
  Case draw() {
    std::uniform_int_distribution<int> n_dist(2, 24);
    std::uniform_real_distribution<double> xi_dist(0.05, 0.98);
    const Scheme sc = std::bernoulli_distribution(0.5)(rng) ? Scheme::FEM : Scheme::FD;
    return Case(sc, n_dist(rng), xi_dist(rng));
  }
  int pairs(const Case& s) { return std::uniform_int_distribution<int>(1, s.mesh.unknowns() - 1)(rng); }
};

TEST_F(FilterProperties, ProjectorIdempotentAndConjugateClosed) {
  for (int t = 0; t < 100; ++t) {
    const Case s = draw();
    const auto fb = by_pairs(s, pairs(s));
    const Eigen::MatrixXd& P = fb.projector;
    EXPECT_LE(max_abs(P * P - P), 1e-10 * std::max(1.0, max_abs(P))) << "N=" << s.mesh.N();
    // Conjugate closure: each retained eigenvalue has its conjugate retained.
    std::vector<cplx> kept;
    for (std::size_t k : fb.retained) kept.push_back(s.spec.pairs[k].lambda);
    for (const cplx z : kept) {
      const bool found = std::any_of(kept.begin(), kept.end(),
                                     [&](cplx w) { return std::abs(w - std::conj(z)) <= 1e-9 * std::abs(z); });
      EXPECT_TRUE(found);
    }
    EXPECT_LE(fb.gamma_effective, fb.spec.gamma);
  }
}

TEST_F(FilterProperties, Monotonicity) {
  for (int t = 0; t < 100; ++t) {
    const Case s = draw();
    std::uniform_real_distribution<double> g(0.01, 1.0);
    double g1 = g(rng), g2 = g(rng);
    if (g1 > g2) std::swap(g1, g2);
    const auto fs1 = FilterSpec::make(g1, s.model.scheme(), s.p);
    const auto fs2 = FilterSpec::make(g2, s.model.scheme(), s.p);
    std::vector<std::size_t> r1;
    try {
      r1 = select_modes(s.spec, fs1).retained;
    } catch (const FilterError&) {
      // empty set is a subset of anything
    }
    std::vector<std::size_t> r2;
    try {
      r2 = select_modes(s.spec, fs2).retained;
    } catch (const FilterError&) {
      EXPECT_TRUE(r1.empty());
    }
    EXPECT_TRUE(std::includes(r2.begin(), r2.end(), r1.begin(), r1.end())) << g1 << " " << g2;
  }
}

TEST_F(FilterProperties, SpanFixedAndFlowInvariant) {
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 100; ++t) {
    const Case s = draw();
    const auto fb = by_pairs(s, pairs(s));
    State x = State::zero(s.mesh.unknowns());
    for (int i = 0; i < x.unknowns(); ++i) {
      x.v[i] = gauss(rng);
      x.vdot[i] = gauss(rng);
    }
    const State px = project_state(fb, x);
    const State ppx = project_state(fb, px);
    EXPECT_LE((ppx.stacked() - px.stacked()).norm(), 1e-10 * std::max(1.0, px.stacked().norm()));
    const auto tr = integrate_modal(*fb.basis, px, 1.0, 0.5);
    const State& end = tr.states.back();
    EXPECT_LE((project_state(fb, end).stacked() - end.stacked()).norm(), 1e-8 * x.stacked().norm());
  }
}
