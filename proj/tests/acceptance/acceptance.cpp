// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every tolerance and runtime cap below is the published one; nothing is tuned.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dampwave/dampwave.hpp"
#include "dampwave/io/commands.hpp"

using namespace dampwave;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double runtime_cap;  // seconds; <= 0 means none
  std::function<void(Outcome&)> run;
};

const PhysicalParams kReference{1.0, 1.0, 0.9};

// Closed-form undamped frequencies against the dense symmetric eigensolve.
void closed_form_equivalence(Outcome& o) {
  double worst_fd = 0.0;
  for (int N : {2, 5, 10, 50, 100}) {
    const Mesh m(N, 1.0);
    const PhysicalParams p{1.0, 1.0, 0.0};
    const auto mu = fd_frequencies(p, m);
    const Eigen::VectorXd dense = symmetric_eigenvalues(SemiDiscreteModel(Scheme::FD, p, m).stiffness().dense());
    for (int k = 0; k <= N; ++k) worst_fd = std::max(worst_fd, std::abs(mu[k] - dense[k]) / dense[k]);
  }
  o.require(worst_fd <= 1e-9, "FD relative error <= 1e-9");
  o.detail << "FD max rel err " << worst_fd << "; FEM printed angle:";
  bool flags_consistent = true;
  double worst_matrix = 0.0;
  for (int N : {2, 5, 10, 50, 100}) {
    const Mesh m(N, 1.0);
    const auto printed = fem_undamped_spectrum({1.0, 1.0, 0.0}, m, FemAngle::AsPrinted);
    const auto exact = fem_undamped_spectrum({1.0, 1.0, 0.0}, m, FemAngle::MatrixOrder);
    o.detail << " N=" << N << (printed.formula_validated ? " ok" : " FLAGGED") << "(" << printed.max_rel_mismatch << ")";
    flags_consistent &= printed.formula_validated == (printed.max_rel_mismatch <= 1e-8);
    worst_matrix = std::max(worst_matrix, exact.max_rel_mismatch);
  }
  o.detail << "; FEM matrix-order angle max rel err " << worst_matrix;
  o.require(flags_consistent, "FEM mismatches flagged");
  o.require(worst_matrix <= 1e-9, "FEM matrix-order closed form <= 1e-9");
}

void observability_blowup(Outcome& o) {
  const PhysicalParams p{1.0, 1.0, 0.0};
  const double fd = top_mode_limit(p, Mesh(400, 1.0), Scheme::FD);
  const double fem = top_mode_limit(p, Mesh(400, 1.0), Scheme::FEM);
  o.detail << "N=400 limits FD " << fd << " FEM " << fem;
  o.require(std::abs(fd - 4.0) <= 0.05 * 4.0, "FD limit within 5% of 4");
  o.require(std::abs(fem - 12.0) <= 0.05 * 12.0, "FEM limit within 5% of 12");
  for (Scheme sc : {Scheme::FD, Scheme::FEM}) {
    // FEM uses the top-pair tip-cancelling combination (see README).
    o.detail << "; " << to_string(sc) << (sc == Scheme::FD ? " highest-mode ratios" : " top-pair ratios");
    double prev = 0.0;
    bool increasing = true;
    for (int N : {20, 40, 80}) {
      const Mesh m(N, 1.0);
      const SemiDiscreteModel model(sc, p, m);
      const State s0 = sc == Scheme::FD ? highest_mode_state(model) : top_pair_state(model);
      const double r = observability_ratio(kReference, m, sc, 3.0, s0).ratio;
      o.detail << " " << r;
      increasing &= r > prev;
      prev = r;
    }
    o.require(increasing, std::string(to_string(sc)) + " ratios strictly increasing");
  }
  o.detail << "; FEM highest-mode ratios (informational)";
  for (int N : {20, 40, 80}) {
    const Mesh m(N, 1.0);
    o.detail << " " << observability_ratio(kReference, m, Scheme::FEM, 3.0, highest_mode_state(SemiDiscreteModel(Scheme::FEM, p, m))).ratio;
  }
}

void triple_agreement(Outcome& o) {
  const Mesh m(30, 1.0);
  const auto rep = sector_roots(kReference, m);
  double res = 0.0;
  for (double r : rep.residual) res = std::max(res, r);
  const auto roots = roots_to_eigenvalues(rep, kReference, m);
  const auto dense = dense_spectrum(SemiDiscreteModel(Scheme::FD, kReference, m));
  const auto match = match_eigenvalues(roots.eigenvalues(), dense.eigenvalues());
  double max_re = -1e300;
  for (const auto& pr : dense.pairs) max_re = std::max(max_re, pr.lambda.real());
  for (const auto& pr : roots.pairs) max_re = std::max(max_re, pr.lambda.real());
  const double pde_re = pde_spectrum(kReference, 0, 0)[0].real();
  o.detail << rep.roots.size() << " first-quadrant roots, max residual " << res << ", max rel gap " << match.max_rel_gap
           << ", max Re " << max_re << ", continuum Re " << pde_re;
  o.require(rep.roots.size() == 31, "exactly 31 roots");
  o.require(res <= 1e-10, "root residual <= 1e-10");
  o.require(match.max_rel_gap <= 1e-6, "relative gap <= 1e-6");
  o.require(max_re < 0.0, "all real parts negative");
}

void modulus_bounds(Outcome& o) {
  for (Scheme sc : {Scheme::FD, Scheme::FEM}) {
    std::vector<ModulusBoundSample> samples;
    for (int N : {50, 100, 200}) samples.push_back(check_modulus_bounds(dense_spectrum(SemiDiscreteModel(sc, kReference, Mesh(N, 1.0)))));
    const auto r = fit_modulus_bounds(samples);
    o.detail << to_string(sc) << ": C=" << r.fitted_C << " halving ratios " << r.halving_ratio[0] << " " << r.halving_ratio[1] << "; ";
    o.require(r.slack_ok, std::string(to_string(sc)) + " slack");
    o.require(r.halving_ok, std::string(to_string(sc)) + " halving within 30%");
  }
}

void dissipation_identity(Outcome& o) {
  const Mesh m(30, 1.0);
  for (Scheme sc : {Scheme::FD, Scheme::FEM}) {
    const SemiDiscreteModel model(sc, kReference, m);
    const ModalBasis basis = ModalBasis::from_spectrum(dense_spectrum(model));
    const State smooth = mode_state(SemiDiscreteModel(sc, kReference.with_gain(0.0), m), 1, 1e-3);
    const double r = dissipation_residual(energy_trace(model, integrate_modal(basis, smooth, 10.0, 1e-3)), kReference.xi);
    const double r_ic1 = dissipation_residual(energy_trace(model, integrate_modal(basis, sine_band(m, 20, 30, 1e-3), 10.0, 1e-3)), kReference.xi);
    o.detail << to_string(sc) << " residual " << r << " (high-band data, informational: " << r_ic1 << "); ";
    o.require(r < 1e-5, std::string(to_string(sc)) + " residual < 1e-5");
  }
}

void decay_envelope(Outcome& o) {
  const Mesh m(30, 1.0);
  struct Printed {
    double gamma, sigma;
  };
  for (Scheme sc : {Scheme::FD, Scheme::FEM}) {
    const Printed printed = sc == Scheme::FD ? Printed{1.017, 0.1864} : Printed{1.4133, 0.2205};
    const SemiDiscreteModel model(sc, kReference, m);
    const Spectrum spec = dense_spectrum(model);
    const double g = gamma_for_pair_count(spec, 10, FilterSpec::make(1.0, sc, kReference));
    const auto fb = select_modes(spec, FilterSpec::make(g, sc, kReference));
    const auto pred = decay_prediction(kReference, fb.gamma_effective, sc);
    const auto et = energy_trace(model, integrate_modal(*fb.basis, sine_band(m, 20, 30, 1e-3), 20.0, 0.01, &fb.mask), pred.delta);
    const auto env = check_envelope(et, pred);
    const auto fit = fit_decay_rate(et);
    o.detail << to_string(sc) << ": pairs " << fb.retained_pairs << ", Gamma " << fb.gamma_effective << " (printed " << printed.gamma
             << "), sigma_pred " << pred.sigma << " (printed " << printed.sigma << "), sigma_fit " << fit.sigma
             << ", envelope max ratio " << env.max_ratio << "; ";
    o.require(fb.retained_pairs == 10, "10 pairs retained");
    o.require(env.holds, std::string(to_string(sc)) + " envelope at every sample");
    o.require(fit.sigma >= pred.sigma, std::string(to_string(sc)) + " sigma_fit >= sigma_pred");
  }
}

void lack_of_uniform_decay(Outcome& o) {
  double fit[2];
  int i = 0;
  for (int N : {30, 120}) {
    const Mesh m(N, 1.0);
    const SemiDiscreteModel model(Scheme::FD, kReference, m);
    const ModalBasis basis = ModalBasis::from_spectrum(dense_spectrum(model));
    // Band anchored at the top of each mesh's spectrum.
    const auto et = energy_trace(model, integrate_modal(basis, sine_band_top(m, 20, 30, 1e-3), 20.0, 0.01));
    fit[i++] = fit_decay_rate(et).sigma;
  }
  o.detail << "sigma_fit N=30 " << fit[0] << ", N=120 " << fit[1] << ", ratio " << fit[1] / fit[0];
  o.require(fit[1] < 0.5 * fit[0], "sigma_fit(120) < 0.5 sigma_fit(30)");
}

void pde_reference(Outcome& o) {
  const double re = pde_spectrum(kReference, 0, 10)[5].real();
  const double target = -0.5 * std::log(19.0);
  const double at_c = pde_decay({1.0, 1.0, 1.0}).sigma;
  const double smax = sigma_max({1.0, 1.0, 1.0}, 0.0);
  o.detail << "Re " << re << " vs " << target << "; sigma at xi=c " << at_c << ", sigma_max " << smax;
  o.require(std::abs(re - target) <= 1e-12, "real part within 1e-12");
  o.require(std::abs(at_c - 0.25) <= 1e-12 && std::abs(smax - 0.25) <= 1e-12, "sigma_max = c/4L = 0.25");
}

void property_suites(Outcome& o) {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> n_dist(2, 24);
  std::uniform_real_distribution<double> xi_dist(0.05, 0.98);
  auto scheme = [&] { return std::bernoulli_distribution(0.5)(rng) ? Scheme::FEM : Scheme::FD; };
  int fails[5] = {0, 0, 0, 0, 0};

  for (int t = 0; t < 100; ++t) {  // Lyapunov sandwich, delta in {0.1, 0.3, 0.9} c/L
    const Scheme sc = scheme();
    const PhysicalParams p{1.0, 1.0, xi_dist(rng)};
    const SemiDiscreteModel model(sc, p, Mesh(n_dist(rng), 1.0));
    const State s = random_state(model.unknowns(), rng);
    for (double d : {0.1, 0.3, 0.9}) {
      const auto l = lyapunov(model, s, d);
      if (l.L < (1 - d) * l.E - 1e-12 * l.E || l.L > (1 + d) * l.E + 1e-12 * l.E) ++fails[0];
    }
  }
  for (int t = 0; t < 100; ++t) {  // projector idempotence, monotonicity, conjugate symmetry
    const Scheme sc = scheme();
    const PhysicalParams p{1.0, 1.0, xi_dist(rng)};
    const Mesh m(n_dist(rng), 1.0);
    const Spectrum spec = dense_spectrum(SemiDiscreteModel(sc, p, m));
    const FilterSpec full = FilterSpec::make(1.0, sc, p);
    std::uniform_int_distribution<int> pairs(1, m.unknowns());
    int a = pairs(rng), b = pairs(rng);
    if (a > b) std::swap(a, b);
    const auto fa = select_modes(spec, FilterSpec::make(gamma_for_pair_count(spec, a, full), sc, p));
    const auto fb = select_modes(spec, FilterSpec::make(gamma_for_pair_count(spec, b, full), sc, p));
    const Eigen::MatrixXd& P = fa.projector;
    if ((P * P - P).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, P.cwiseAbs().maxCoeff())) ++fails[1];
    if (!std::includes(fb.retained.begin(), fb.retained.end(), fa.retained.begin(), fa.retained.end())) ++fails[2];
    const auto vals = spec.eigenvalues();
    std::vector<cplx> conj;
    for (const cplx z : vals) conj.push_back(std::conj(z));
    if (match_eigenvalues(vals, conj).max_rel_gap > 1e-10) ++fails[3];
  }
  for (int t = 0; t < 100; ++t) {  // CLI determinism (in-process)
    const io::Verb verbs[] = {io::Verb::Spectrum, io::Verb::Simulate, io::Verb::Observability, io::Verb::DecayReport};
    const io::Verb v = verbs[t % 4];
    io::json doc = {{"scheme", scheme() == Scheme::FD ? "FD" : "FEM"}, {"N", n_dist(rng) / 2 + 2}, {"xi", xi_dist(rng)},
                {"T", 2.0}, {"dt", 0.05}, {"seed", t}, {"ic", {{"kind", "random"}, {"amplitude", 0.01}}}};
    if (v == io::Verb::Observability) doc["observability"] = {{"n_list", {4, 6}}, {"limit_n", {8}}};
    if (v == io::Verb::DecayReport) doc["decay_report"] = {{"xi_grid", {0.5}}, {"gamma_grid", {0.5}}, {"reference_pairs", 1}};
    const auto x = io::run_verb(v, io::parse_config(doc), io::TableFormat::Csv);
    const auto y = io::run_verb(v, io::parse_config(doc), io::TableFormat::Csv);
    if (x.files != y.files) ++fails[4];
  }
  const char* names[] = {"lyapunov sandwich", "projector idempotence", "filter monotonicity", "conjugate symmetry",
                         "cli determinism"};
  for (int k = 0; k < 5; ++k) {
    o.detail << names[k] << " " << fails[k] << " failures; ";
    o.require(fails[k] == 0, names[k]);
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "closed-form/oracle spectral equivalence", 10.0, closed_form_equivalence},
      {2, "observability blow-up", 60.0, observability_blowup},
      {3, "damped spectrum triple agreement", 5.0, triple_agreement},
      {4, "modulus bounds", 30.0, modulus_bounds},
      {5, "dissipation identity", 0.0, dissipation_identity},
      {6, "decay envelope (filtered)", 30.0, decay_envelope},
      {7, "lack of uniform decay (unfiltered)", 120.0, lack_of_uniform_decay},
      {8, "continuum reference", 0.0, pde_reference},
      {9, "property suites", 0.0, property_suites},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.runtime_cap > 0.0 && secs >= c.runtime_cap) {
      o.pass = false;
      o.detail << " [failed: runtime cap " << c.runtime_cap << " s]";
    }
    std::printf("%s criterion %d: %s (%.2f s) -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
