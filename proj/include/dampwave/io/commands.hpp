#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dampwave/dampwave.hpp"
#include "dampwave/io/config.hpp"
#include "dampwave/io/svg.hpp"
#include "dampwave/io/table.hpp"

namespace dampwave::io {

/// Named in-memory outputs; nothing touches the disk until every artifact
/// of a run has been produced.
struct Artifacts {
  std::vector<std::pair<std::string, std::string>> files;

  void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& f : files) out.push_back(f.first);
    return out;
  }
};

inline const char* verb_name(Verb v) {
  switch (v) {
    case Verb::Spectrum: return "spectrum";
    case Verb::Simulate: return "simulate";
    case Verb::Observability: return "observability";
    case Verb::DecayReport: return "decay-report";
  }
  return "unknown";
}

namespace detail {

inline json prediction_json(const DecayPrediction& d) {
  return {{"delta", num(d.delta)},         {"sigma", num(d.sigma)},
          {"overshoot", num(d.overshoot)}, {"gamma", num(d.gamma)},
          {"kappa", num(d.kappa)},         {"degenerate", d.degenerate},
          {"within_hypotheses", d.within_hypotheses}};
}

inline json parameters_json(const ExperimentConfig& cfg) {
  return {{"scheme", std::string(to_string(cfg.scheme))},
          {"N", cfg.N},
          {"c", num(cfg.c)},
          {"L", num(cfg.L)},
          {"xi", num(cfg.xi)},
          {"h", num(cfg.L / (cfg.N + 1))}};
}

/// Adds the summary (if enabled) listing every artifact, itself included.
inline void finish(Artifacts& art, const ExperimentConfig& cfg, Verb verb, json results) {
  if (!cfg.outputs.json) return;
  std::vector<std::string> names = art.names();
  names.push_back("summary.json");
  json summary = {{"schema_version", 1},
                  {"verb", verb_name(verb)},
                  {"config", cfg.echo},
                  {"parameters", parameters_json(cfg)},
                  {"artifacts", names},
                  {"results", std::move(results)}};
  art.add("summary.json", summary.dump(2) + "\n");
}

inline State initial_state(const ExperimentConfig& cfg, const Mesh& mesh) {
  const IcConfig& ic = cfg.ic;
  switch (ic.kind) {
    case IcKind::SineBand:
      return ic.scale_top ? sine_band_top(mesh, ic.k_min, ic.k_max, ic.amplitude)
                          : sine_band(mesh, ic.k_min, ic.k_max, ic.amplitude);
    case IcKind::Mode: {
      const SemiDiscreteModel undamped(cfg.scheme, cfg.params().with_gain(0.0), mesh);
      return mode_state(undamped, ic.k, ic.amplitude);
    }
    case IcKind::File: {
      State s = State::zero(mesh.unknowns());
      for (int i = 0; i < mesh.unknowns(); ++i) {
        s.v[i] = ic.v[i];
        s.vdot[i] = ic.vdot[i];
      }
      return s;
    }
    case IcKind::Random: {
      std::mt19937_64 rng(cfg.seed);
      return random_state(mesh.unknowns(), rng, ic.amplitude);
    }
  }
  throw ConfigError("unknown initial data kind");
}

/// Threshold implied by the filter config on `spec`; nullopt when unfiltered.
inline std::optional<double> filter_threshold(const ExperimentConfig& cfg, const Spectrum& spec) {
  switch (cfg.filter.mode) {
    case FilterMode::None: return std::nullopt;
    case FilterMode::Gamma: return cfg.filter.value;
    case FilterMode::PairCount:
      return gamma_for_pair_count(spec, static_cast<int>(cfg.filter.value),
                                  FilterSpec::make(1.0, cfg.scheme, spec.params));
  }
  return std::nullopt;
}

struct SimulationOutcome {
  EnergyTrace trace;
  std::optional<DecayPrediction> prediction;
  double gamma_effective = 0.0;
  double kappa = 0.0;
  std::size_t retained_pairs = 0;
  std::size_t total_pairs = 0;
  std::optional<double> threshold;
};

/// model -> spectrum -> optional filter -> integrate -> energies.
inline SimulationOutcome run_simulation(const ExperimentConfig& cfg) {
  const PhysicalParams params = cfg.params();
  const Mesh mesh = cfg.mesh();
  const SemiDiscreteModel model(cfg.scheme, params, mesh);
  const Spectrum damped = dense_spectrum(model);

  SimulationOutcome out;
  out.total_pairs = static_cast<std::size_t>(mesh.unknowns());
  const State s0 = initial_state(cfg, mesh);

  std::optional<FilteredBasis> fb;
  std::shared_ptr<const ModalBasis> modal;
  if (cfg.filter.mode != FilterMode::None) {
    const bool undamped_basis = cfg.filter.basis == FilterBasisKind::Undamped;
    const Spectrum basis_spec =
        undamped_basis ? dense_spectrum(SemiDiscreteModel(cfg.scheme, params.with_gain(0.0), mesh)) : damped;
    out.threshold = filter_threshold(cfg, basis_spec);
    fb = select_modes(basis_spec, FilterSpec::make(*out.threshold, cfg.scheme, params));
    out.gamma_effective = fb->gamma_effective;
    out.kappa = fb->kappa;
    out.retained_pairs = fb->retained_pairs;
    if (!undamped_basis) modal = fb->basis;
  } else {
    const FilterSpec all = FilterSpec::make(1.0, cfg.scheme, params);
    const auto mod = normalized_moduli(damped, all);
    out.gamma_effective = *std::max_element(mod.begin(), mod.end());
    out.kappa = out.gamma_effective * all.normalizer;
    out.retained_pairs = out.total_pairs;
  }

  if (params.xi > 0.0) out.prediction = decay_prediction(params, out.gamma_effective, cfg.scheme);
  const double delta = out.prediction ? out.prediction->delta : 0.0;

  Trajectory tr;
  if (cfg.integrator == Integrator::ModalExact) {
    if (!modal) modal = std::make_shared<const ModalBasis>(ModalBasis::from_spectrum(damped));
    if (fb && !fb->identity && cfg.filter.basis == FilterBasisKind::Damped) {
      tr = integrate_modal(*modal, s0, cfg.T, cfg.step(), &fb->mask);
    } else {
      tr = integrate_modal(*modal, fb ? project_state(*fb, s0) : s0, cfg.T, cfg.step());
    }
  } else {
    tr = integrate_rk4(model, fb ? project_state(*fb, s0) : s0, cfg.T, cfg.step());
  }
  out.trace = energy_trace(model, tr, delta);
  return out;
}

inline json envelope_json(const EnergyTrace& trace, const std::optional<DecayPrediction>& pred) {
  if (!pred || pred->degenerate) return nullptr;
  const EnvelopeCheck env = check_envelope(trace, *pred);
  return {{"holds", env.holds}, {"max_ratio", num(env.max_ratio)}};
}

}  // namespace detail

inline Artifacts cmd_spectrum(const ExperimentConfig& cfg, TableFormat fmt) {
  validate_config(cfg, Verb::Spectrum);
  const PhysicalParams params = cfg.params();
  const Mesh mesh = cfg.mesh();
  const SemiDiscreteModel model(cfg.scheme, params, mesh);
  const Spectrum damped = dense_spectrum(model);

  const std::optional<double> threshold = detail::filter_threshold(cfg, damped);
  const FilterSpec fs = FilterSpec::make(threshold.value_or(1.0), cfg.scheme, params);
  const auto mod = normalized_moduli(damped, fs);
  auto keep = [&](double m) { return !threshold || *threshold >= 1.0 || m <= *threshold; };

  json poly = nullptr;
  std::optional<Spectrum> roots_spec;
  if (cfg.scheme == Scheme::FD && params.xi > 0.0 && params.xi < params.c) {
    const RootSolveReport rep = sector_roots(params, mesh);
    roots_spec = roots_to_eigenvalues(rep, params, mesh);
    const MatchReport match = require_match(roots_spec->eigenvalues(), damped.eigenvalues(), 1e-6);
    poly = {{"first_quadrant_roots", rep.roots.size()},
            {"max_residual", num(*std::max_element(rep.residual.begin(), rep.residual.end()))},
            {"max_iterations", *std::max_element(rep.iterations.begin(), rep.iterations.end())},
            {"max_relative_gap", num(match.max_rel_gap)}};
  }

  Table tab{{"index", "re", "im", "provenance", "residual", "normalized_modulus", "retained"}, {}};
  std::vector<ScatterPoint> pts;
  std::size_t retained = 0;
  double max_re = -INFINITY;
  double kappa = 0.0;
  for (std::size_t k = 0; k < damped.size(); ++k) {
    const auto& p = damped.pairs[k];
    const bool r = keep(mod[k]);
    retained += r;
    if (r) kappa = std::max(kappa, mod[k] * fs.normalizer);
    max_re = std::max(max_re, p.lambda.real());
    tab.add({static_cast<long long>(k), p.lambda.real(), p.lambda.imag(), std::string(to_string(p.provenance)),
             p.residual, mod[k], static_cast<long long>(r)});
    pts.push_back({p.lambda.real(), p.lambda.imag(), r});
  }
  if (roots_spec) {
    const auto rmod = normalized_moduli(*roots_spec, fs);
    for (std::size_t k = 0; k < roots_spec->size(); ++k) {
      const auto& p = roots_spec->pairs[k];
      tab.add({static_cast<long long>(k), p.lambda.real(), p.lambda.imag(), std::string(to_string(p.provenance)),
               p.residual, rmod[k], static_cast<long long>(keep(rmod[k]))});
    }
  }

  std::optional<double> pde_re;
  Table pde{{"k", "re", "im"}, {}};
  if (params.xi < params.c) {
    const auto lam = pde_spectrum(params, 0, mesh.N());
    pde_re = lam.front().real();
    for (std::size_t k = 0; k < lam.size(); ++k) pde.add({static_cast<long long>(k), lam[k].real(), lam[k].imag()});
  }

  Artifacts art;
  if (cfg.outputs.csv) {
    art.add(std::string("spectrum") + extension(fmt), tab.render(fmt));
    if (pde_re) art.add(std::string("pde_spectrum") + extension(fmt), pde.render(fmt));
  }
  if (cfg.outputs.svg)
    art.add("spectrum.svg", spectrum_svg(pts, pde_re,
                                         std::string(to_string(cfg.scheme)) + " spectrum, N=" + std::to_string(cfg.N)));

  const json results = {{"eigenvalue_count", damped.size()},
                        {"pair_count", mesh.unknowns()},
                        {"retained_count", retained},
                        {"filtered_count", damped.size() - retained},
                        {"threshold", threshold ? num(*threshold) : json(nullptr)},
                        {"gamma_effective", num(kappa / fs.normalizer)},
                        {"kappa", num(kappa)},
                        {"max_real_part", num(max_re)},
                        {"max_residual", num(damped.max_residual())},
                        {"polynomial_roots", poly},
                        {"pde_real_part", pde_re ? num(*pde_re) : json(nullptr)}};
  detail::finish(art, cfg, Verb::Spectrum, results);
  return art;
}

inline Artifacts cmd_simulate(const ExperimentConfig& cfg, TableFormat fmt) {
  validate_config(cfg, Verb::Simulate);
  const detail::SimulationOutcome run = detail::run_simulation(cfg);
  const EnergyTrace& et = run.trace;

  const DecayFit fit = fit_decay_rate(et);
  const double res4 = dissipation_residual(et, cfg.xi, 4);
  const double res2 = dissipation_residual(et, cfg.xi, 2);

  Artifacts art;
  if (cfg.outputs.csv) {
    Table tab{{"t", "E", "v_tip", "vdot_tip", "L_delta"}, {}};
    for (std::size_t k = 0; k < et.size(); ++k) tab.add({et.t[k], et.E[k], et.v_tip[k], et.vdot_tip[k], et.L_delta[k]});
    art.add(std::string("trace") + extension(fmt), tab.render(fmt));
  }
  if (cfg.outputs.svg) {
    std::optional<std::pair<double, double>> env;
    if (run.prediction && !run.prediction->degenerate) env = std::make_pair(run.prediction->overshoot, run.prediction->sigma);
    art.add("energy.svg", energy_svg(et.t, et.E, env, std::string(to_string(cfg.scheme)) + " energy, N=" + std::to_string(cfg.N)));
  }

  json pde = nullptr;
  if (cfg.xi > 0.0) pde = detail::prediction_json(pde_decay(cfg.params()));
  const json results = {
      {"sigma_fit", num(fit.sigma)},
      {"fit_residual", num(fit.residual)},
      {"prediction", run.prediction ? detail::prediction_json(*run.prediction) : json(nullptr)},
      {"continuum_prediction", pde},
      {"threshold", run.threshold ? num(*run.threshold) : json(nullptr)},
      {"gamma_effective", num(run.gamma_effective)},
      {"kappa", num(run.kappa)},
      {"retained_pairs", run.retained_pairs},
      {"total_pairs", run.total_pairs},
      {"dissipation_residual", num(res4)},
      {"dissipation_residual_3pt", num(res2)},
      {"envelope", detail::envelope_json(et, run.prediction)},
      {"energy_initial", num(et.E.front())},
      {"energy_final", num(et.E.back())},
      {"samples", et.size()}};
  detail::finish(art, cfg, Verb::Simulate, results);
  return art;
}

inline Artifacts cmd_observability(const ExperimentConfig& cfg, TableFormat fmt) {
  validate_config(cfg, Verb::Observability);
  const auto& o = cfg.observability;
  const PhysicalParams params = cfg.params().with_gain(0.0);
  const double target = cfg.scheme == Scheme::FD ? 4.0 : 12.0;

  Table tab{{"N", "h", "ratio", "energy0", "observed", "limit"}, {}};
  json rows = json::array();
  double prev = -INFINITY;
  bool increasing = true;
  for (int n : o.n_list) {
    const Mesh mesh(n, cfg.L);
    const SemiDiscreteModel model(cfg.scheme, params, mesh);
    State s0 = o.data == ObsData::HighestMode ? highest_mode_state(model)
             : o.data == ObsData::TopPair     ? top_pair_state(model)
                                              : mode_state(model, 1);
    const ObservabilityResult r = observability_ratio(params, mesh, cfg.scheme, o.T, s0, o.observation);
    const double lim = top_mode_limit(params, mesh, cfg.scheme);
    increasing = increasing && r.ratio > prev;
    prev = r.ratio;
    tab.add({static_cast<long long>(n), mesh.h(), r.ratio, r.energy0, r.observed, lim});
    rows.push_back({{"N", n}, {"ratio", num(r.ratio)}, {"limit", num(lim)}});
  }
  Table lim_tab{{"N", "limit", "target", "relative_error"}, {}};
  json limits = json::array();
  for (int n : o.limit_n) {
    const double lim = top_mode_limit(params, Mesh(n, cfg.L), cfg.scheme);
    const double rel = std::abs(lim - target) / target;
    lim_tab.add({static_cast<long long>(n), lim, target, rel});
    limits.push_back({{"N", n}, {"limit", num(lim)}, {"target", target}, {"relative_error", num(rel)}});
  }

  Artifacts art;
  if (cfg.outputs.csv) {
    art.add(std::string("observability") + extension(fmt), tab.render(fmt));
    art.add(std::string("limits") + extension(fmt), lim_tab.render(fmt));
  }
  const char* data = o.data == ObsData::HighestMode ? "highest_mode" : o.data == ObsData::TopPair ? "top_pair" : "fundamental";
  const json results = {{"observation", std::string(to_string(o.observation))},
                        {"data", data},
                        {"T", num(o.T)},
                        {"rows", rows},
                        {"strictly_increasing", increasing},
                        {"limits", limits}};
  detail::finish(art, cfg, Verb::Observability, results);
  return art;
}

inline Artifacts cmd_decay_report(const ExperimentConfig& cfg, TableFormat fmt) {
  validate_config(cfg, Verb::DecayReport);
  const auto& d = cfg.decay_report;

  struct Row {
    std::string kind;
    Scheme scheme;
    double xi, gamma, gamma_eff, delta, sigma_pred, sigma_fit, overshoot, sigma_max, reported_gamma, reported_sigma;
  };
  const double nan = std::nan("");

  // One worker per grid point, merged by index below.
  std::vector<std::future<Row>> jobs;
  for (double xi : d.xi_grid) {
    for (double g : d.gamma_grid) {
      jobs.push_back(std::async(std::launch::async, [cfg, xi, g, nan]() {
        ExperimentConfig run_cfg = cfg;
        run_cfg.xi = xi;
        run_cfg.filter = {FilterMode::Gamma, g, FilterBasisKind::Damped};
        const PhysicalParams p = run_cfg.params();
        const DecayPrediction pred = decay_prediction(p, g, cfg.scheme);
        Row r{"discrete", cfg.scheme, xi, g, nan, pred.delta, pred.sigma, nan, pred.overshoot, sigma_max(p, g), nan, nan};
        if (cfg.decay_report.simulate) {
          const detail::SimulationOutcome out = detail::run_simulation(run_cfg);
          r.gamma_eff = out.gamma_effective;
          r.sigma_fit = fit_decay_rate(out.trace).sigma;
        }
        return r;
      }));
    }
  }
  std::vector<Row> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  for (double xi : d.xi_grid) {
    const DecayPrediction pde = pde_decay(cfg.params().with_gain(xi));
    rows.push_back({"continuum", cfg.scheme, xi, 0.0, nan, pde.delta, pde.sigma, nan, pde.overshoot,
                    cfg.c / (4.0 * cfg.L), nan, nan});
  }
  for (const auto& ref : d.reference) {
    const PhysicalParams p = cfg.params();
    const Mesh mesh = cfg.mesh();
    const Spectrum spec = dense_spectrum(SemiDiscreteModel(ref.scheme, p, mesh));
    const FilterSpec all = FilterSpec::make(1.0, ref.scheme, p);
    const double g = gamma_for_pair_count(spec, d.reference_pairs, all);
    const FilteredBasis fb = select_modes(spec, FilterSpec::make(g, ref.scheme, p));
    const DecayPrediction pred = decay_prediction(p, fb.gamma_effective, ref.scheme);
    rows.push_back({"reference", ref.scheme, cfg.xi, g, fb.gamma_effective, pred.delta, pred.sigma, nan,
                    pred.overshoot, sigma_max(p, fb.gamma_effective), ref.gamma, ref.sigma});
  }

  Table tab{{"kind", "scheme", "xi", "gamma", "gamma_effective", "delta", "sigma_pred", "sigma_fit", "overshoot",
             "sigma_max", "reported_gamma", "reported_sigma", "sigma_gap"},
            {}};
  json jrows = json::array();
  for (const auto& r : rows) {
    const double gap = std::isnan(r.reported_sigma) ? nan : r.sigma_pred - r.reported_sigma;
    tab.add({r.kind, std::string(to_string(r.scheme)), r.xi, r.gamma, r.gamma_eff, r.delta, r.sigma_pred, r.sigma_fit,
             r.overshoot, r.sigma_max, r.reported_gamma, r.reported_sigma, gap});
    jrows.push_back({{"kind", r.kind},
                     {"scheme", std::string(to_string(r.scheme))},
                     {"xi", num(r.xi)},
                     {"gamma", num(r.gamma)},
                     {"gamma_effective", num(r.gamma_eff)},
                     {"delta", num(r.delta)},
                     {"sigma_pred", num(r.sigma_pred)},
                     {"sigma_fit", num(r.sigma_fit)},
                     {"overshoot", num(r.overshoot)},
                     {"sigma_max", num(r.sigma_max)},
                     {"reported_gamma", num(r.reported_gamma)},
                     {"reported_sigma", num(r.reported_sigma)},
                     {"sigma_gap", num(gap)}});
  }

  Artifacts art;
  if (cfg.outputs.csv) art.add(std::string("decay_report") + extension(fmt), tab.render(fmt));
  detail::finish(art, cfg, Verb::DecayReport, {{"rows", jrows}});
  return art;
}

inline Artifacts run_verb(Verb v, const ExperimentConfig& cfg, TableFormat fmt) {
  switch (v) {
    case Verb::Spectrum: return cmd_spectrum(cfg, fmt);
    case Verb::Simulate: return cmd_simulate(cfg, fmt);
    case Verb::Observability: return cmd_observability(cfg, fmt);
    case Verb::DecayReport: return cmd_decay_report(cfg, fmt);
  }
  throw ConfigError("unknown verb");
}

/// Writes every artifact to a staging directory and renames the files into
/// place only after all writes succeeded; on failure nothing is left behind.
inline void write_artifacts(const std::filesystem::path& out_dir, const Artifacts& art) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  const fs::path staging = out_dir / ".dampwave-staging";
  fs::remove_all(staging, ec);
  fs::create_directories(staging, ec);
  if (ec) throw ConfigError("cannot create staging directory in '" + out_dir.string() + "'");

  std::vector<fs::path> moved;
  try {
    for (const auto& [name, content] : art.files) {
      std::ofstream out(staging / name, std::ios::binary);
      out << content;
      out.close();
      if (!out) throw ConfigError("failed to write '" + name + "'");
    }
    for (const auto& [name, content] : art.files) {
      fs::rename(staging / name, out_dir / name);
      moved.push_back(out_dir / name);
    }
  } catch (...) {
    for (const auto& p : moved) fs::remove(p, ec);
    fs::remove_all(staging, ec);
    throw;
  }
  fs::remove_all(staging, ec);
}

}  // namespace dampwave::io
