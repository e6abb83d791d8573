#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dampwave/errors.hpp"
#include "dampwave/integrate.hpp"
#include "dampwave/model.hpp"
#include "dampwave/observability.hpp"

namespace dampwave::io {

using nlohmann::json;

enum class FilterMode { None, Gamma, PairCount };
enum class FilterBasisKind { Damped, Undamped };
enum class IcKind { SineBand, Mode, File, Random };
enum class ObsData { HighestMode, TopPair, Fundamental };

struct FilterConfig {
  FilterMode mode = FilterMode::None;
  double value = 0.0;
  FilterBasisKind basis = FilterBasisKind::Damped;
};

struct IcConfig {
  IcKind kind = IcKind::SineBand;
  int k_min = 20;
  int k_max = 30;
  double amplitude = 1e-3;
  bool scale_top = false;  // shift the band so that k_max = N
  int k = 1;               // mode index
  std::string path;        // file data, resolved against the config directory
  std::vector<double> v;   // loaded file data
  std::vector<double> vdot;
};

struct OutputFlags {
  bool csv = true;   // tabular artifacts (in the --format encoding)
  bool json = true;  // run summary
  bool svg = true;   // figures
};

struct ObservabilityConfig {
  std::vector<int> n_list{20, 40, 80};
  double T = 3.0;
  ObservationKind observation = ObservationKind::BoundaryVelocity;
  ObsData data = ObsData::HighestMode;
  std::vector<int> limit_n{100, 200, 400};
};

struct ReferenceValue {
  Scheme scheme = Scheme::FD;
  double gamma = 0.0;
  double sigma = 0.0;
};

struct DecayReportConfig {
  std::vector<double> xi_grid{0.3, 0.6, 0.9};
  std::vector<double> gamma_grid{0.25, 0.5, 0.75};
  bool simulate = true;
  int reference_pairs = 10;
  std::vector<ReferenceValue> reference;
};

struct ExperimentConfig {
  Scheme scheme = Scheme::FD;
  int N = 30;
  double c = 1.0;
  double L = 1.0;
  double xi = 0.9;
  FilterConfig filter;
  IcConfig ic;
  double T = 20.0;
  std::optional<double> dt;  // default h / (10 c)
  Integrator integrator = Integrator::ModalExact;
  OutputFlags outputs;
  std::uint64_t seed = 0;
  ObservabilityConfig observability;
  DecayReportConfig decay_report;
  json echo;  // normalized config as parsed

  PhysicalParams params() const { return {c, L, xi}; }
  Mesh mesh() const { return Mesh(N, L); }
  double step() const { return dt ? *dt : L / (N + 1) / (10.0 * c); }
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown field '" + it.key() + "'");
}

inline double get_number(const json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
  return d;
}

inline int get_int(const json& obj, const char* key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

inline bool get_bool(const json& obj, const char* key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
  return v.get<bool>();
}

inline std::string get_string(const json& obj, const char* key, const std::string& where, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

template <class T>
std::vector<T> get_list(const json& obj, const char* key, const std::string& where, std::vector<T> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(where + "." + key + ": expected a nonempty array");
  std::vector<T> out;
  for (const auto& e : v) {
    if constexpr (std::is_integral_v<T>) {
      if (!e.is_number_integer()) throw ConfigError(where + "." + key + ": expected integers");
    } else {
      if (!e.is_number() || !std::isfinite(e.get<double>())) throw ConfigError(where + "." + key + ": expected numbers");
    }
    out.push_back(e.get<T>());
  }
  return out;
}

inline std::vector<double> read_vector(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_array()) throw ConfigError(where + ": missing array '" + key + "'");
  std::vector<double> out;
  for (const auto& e : obj.at(key)) {
    if (!e.is_number()) throw ConfigError(where + ": '" + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace detail

/// Parses and validates a config document. `base_dir` resolves relative
/// paths of file-supplied initial data.
inline ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  reject_unknown(doc, "config",
                 {"scheme", "N", "c", "L", "xi", "filter", "ic", "T", "dt", "integrator", "outputs", "seed",
                  "observability", "decay_report", "description"});
  ExperimentConfig cfg;
  try {
    cfg.scheme = parse_scheme(get_string(doc, "scheme", "config", "FD"));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config.scheme: ") + e.what());
  }
  cfg.N = get_int(doc, "N", "config", cfg.N);
  cfg.c = get_number(doc, "c", "config", cfg.c);
  cfg.L = get_number(doc, "L", "config", cfg.L);
  cfg.xi = get_number(doc, "xi", "config", cfg.xi);
  cfg.T = get_number(doc, "T", "config", cfg.T);
  if (doc.contains("dt") && !doc.at("dt").is_null()) cfg.dt = get_number(doc, "dt", "config", 0.0);
  {
    const std::string m = get_string(doc, "integrator", "config", "modal-exact");
    if (m != "rk4" && m != "modal-exact") throw ConfigError("config.integrator: expected rk4 or modal-exact");
    cfg.integrator = parse_integrator(m);
  }
  if (doc.contains("seed")) {
    const json& seed = doc.at("seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
      throw ConfigError("config.seed: expected a nonnegative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }

  if (doc.contains("filter")) {
    const json& f = doc.at("filter");
    reject_unknown(f, "config.filter", {"mode", "value", "basis"});
    const std::string mode = get_string(f, "mode", "config.filter", "none");
    if (mode == "none") cfg.filter.mode = FilterMode::None;
    else if (mode == "gamma") cfg.filter.mode = FilterMode::Gamma;
    else if (mode == "pair_count") cfg.filter.mode = FilterMode::PairCount;
    else throw ConfigError("config.filter.mode: expected none, gamma or pair_count");
    cfg.filter.value = get_number(f, "value", "config.filter", 0.0);
    const std::string basis = get_string(f, "basis", "config.filter", "damped");
    if (basis == "damped") cfg.filter.basis = FilterBasisKind::Damped;
    else if (basis == "undamped") cfg.filter.basis = FilterBasisKind::Undamped;
    else throw ConfigError("config.filter.basis: expected damped or undamped");
  }

  if (doc.contains("ic")) {
    const json& ic = doc.at("ic");
    if (!ic.is_object()) throw ConfigError("config.ic: expected an object");
    const std::string kind = get_string(ic, "kind", "config.ic", "sine_band");
    if (kind == "sine_band") {
      reject_unknown(ic, "config.ic", {"kind", "k_min", "k_max", "amplitude", "scale"});
      cfg.ic.kind = IcKind::SineBand;
      cfg.ic.k_min = get_int(ic, "k_min", "config.ic", cfg.ic.k_min);
      cfg.ic.k_max = get_int(ic, "k_max", "config.ic", cfg.ic.k_max);
      cfg.ic.amplitude = get_number(ic, "amplitude", "config.ic", cfg.ic.amplitude);
      const std::string scale = get_string(ic, "scale", "config.ic", "none");
      if (scale != "none" && scale != "top") throw ConfigError("config.ic.scale: expected none or top");
      cfg.ic.scale_top = scale == "top";
    } else if (kind == "mode") {
      reject_unknown(ic, "config.ic", {"kind", "k", "amplitude"});
      cfg.ic.kind = IcKind::Mode;
      cfg.ic.k = get_int(ic, "k", "config.ic", 1);
      cfg.ic.amplitude = get_number(ic, "amplitude", "config.ic", cfg.ic.amplitude);
    } else if (kind == "file") {
      reject_unknown(ic, "config.ic", {"kind", "path"});
      cfg.ic.kind = IcKind::File;
      cfg.ic.path = get_string(ic, "path", "config.ic", "");
      if (cfg.ic.path.empty()) throw ConfigError("config.ic.path: required for file data");
      std::filesystem::path p(cfg.ic.path);
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) throw ConfigError("config.ic.path: cannot open '" + p.string() + "'");
      json data;
      try {
        in >> data;
      } catch (const json::exception& e) {
        throw ConfigError("config.ic.path: invalid JSON: " + std::string(e.what()));
      }
      reject_unknown(data, "initial data file", {"v", "vdot"});
      cfg.ic.v = read_vector(data, "v", "initial data file");
      cfg.ic.vdot = read_vector(data, "vdot", "initial data file");
    } else if (kind == "random") {
      reject_unknown(ic, "config.ic", {"kind", "amplitude"});
      cfg.ic.kind = IcKind::Random;
      cfg.ic.amplitude = get_number(ic, "amplitude", "config.ic", cfg.ic.amplitude);
    } else {
      throw ConfigError("config.ic.kind: expected sine_band, mode, file or random");
    }
  }

  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    reject_unknown(o, "config.outputs", {"csv", "json", "svg"});
    cfg.outputs.csv = get_bool(o, "csv", "config.outputs", true);
    cfg.outputs.json = get_bool(o, "json", "config.outputs", true);
    cfg.outputs.svg = get_bool(o, "svg", "config.outputs", true);
  }

  if (doc.contains("observability")) {
    const json& o = doc.at("observability");
    reject_unknown(o, "config.observability", {"n_list", "T", "observation", "data", "limit_n"});
    cfg.observability.n_list = get_list<int>(o, "n_list", "config.observability", cfg.observability.n_list);
    cfg.observability.limit_n = get_list<int>(o, "limit_n", "config.observability", cfg.observability.limit_n);
    cfg.observability.T = get_number(o, "T", "config.observability", cfg.observability.T);
    try {
      cfg.observability.observation = parse_observation(get_string(o, "observation", "config.observability", "boundary_velocity"));
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("config.observability.observation: ") + e.what());
    }
    const std::string data = get_string(o, "data", "config.observability", "highest_mode");
    if (data == "highest_mode") cfg.observability.data = ObsData::HighestMode;
    else if (data == "top_pair") cfg.observability.data = ObsData::TopPair;
    else if (data == "fundamental") cfg.observability.data = ObsData::Fundamental;
    else throw ConfigError("config.observability.data: expected highest_mode, top_pair or fundamental");
  }

  if (doc.contains("decay_report")) {
    const json& d = doc.at("decay_report");
    reject_unknown(d, "config.decay_report", {"xi_grid", "gamma_grid", "simulate", "reference_pairs", "reference"});
    cfg.decay_report.xi_grid = get_list<double>(d, "xi_grid", "config.decay_report", cfg.decay_report.xi_grid);
    cfg.decay_report.gamma_grid = get_list<double>(d, "gamma_grid", "config.decay_report", cfg.decay_report.gamma_grid);
    cfg.decay_report.simulate = get_bool(d, "simulate", "config.decay_report", true);
    cfg.decay_report.reference_pairs = get_int(d, "reference_pairs", "config.decay_report", 10);
    if (d.contains("reference")) {
      if (!d.at("reference").is_array()) throw ConfigError("config.decay_report.reference: expected an array");
      for (const auto& r : d.at("reference")) {
        reject_unknown(r, "config.decay_report.reference[]", {"scheme", "gamma", "sigma"});
        ReferenceValue rv;
        try {
          rv.scheme = parse_scheme(get_string(r, "scheme", "config.decay_report.reference[]", "FD"));
        } catch (const ParameterError& e) {
          throw ConfigError(e.what());
        }
        rv.gamma = get_number(r, "gamma", "config.decay_report.reference[]", 0.0);
        rv.sigma = get_number(r, "sigma", "config.decay_report.reference[]", 0.0);
        cfg.decay_report.reference.push_back(rv);
      }
    }
  }

  cfg.echo = doc;
  return cfg;
}

enum class Verb { Spectrum, Simulate, Observability, DecayReport };

/// Checks every precondition the verb's pipeline will rely on, so that no
/// work starts on an invalid configuration.
inline void validate_config(const ExperimentConfig& cfg, Verb verb) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (cfg.N < 2) fail("N must be >= 2");
  if (cfg.N > 2000) fail("N must be <= 2000 (dense spectrum limit)");
  if (!(cfg.c > 0.0)) fail("c must be positive");
  if (!(cfg.L > 0.0)) fail("L must be positive");
  if (!(cfg.xi >= 0.0)) fail("xi must be >= 0");

  if (verb == Verb::Spectrum || verb == Verb::Simulate) {
    if (cfg.filter.mode == FilterMode::Gamma && !(cfg.filter.value > 0.0 && cfg.filter.value <= 1.0))
      fail("filter.value must lie in (0, 1] for gamma mode");
    if (cfg.filter.mode == FilterMode::PairCount) {
      const double v = cfg.filter.value;
      if (v != std::floor(v) || v < 1.0 || v > cfg.N + 1) fail("filter.value must be an integer pair count in [1, N+1]");
    }
  }
  if (verb == Verb::Simulate || verb == Verb::DecayReport) {
    if (!(cfg.T > 0.0)) fail("T must be positive");
    if (cfg.dt && !(*cfg.dt > 0.0)) fail("dt must be positive");
    if (cfg.step() > cfg.T) fail("dt must not exceed T");
    const double samples = std::floor(cfg.T / cfg.step()) + 1.0;
    if (samples > 5e6) fail("T/dt exceeds 5e6 samples");
    if (samples < 3.0) fail("T/dt must give at least three samples");
    const IcConfig& ic = cfg.ic;
    switch (ic.kind) {
      case IcKind::SineBand: {
        if (ic.k_min < 1 || ic.k_max < ic.k_min) fail("ic: need 1 <= k_min <= k_max");
        if (ic.scale_top && ic.k_min + cfg.N - ic.k_max < 1) fail("ic: band wider than the mesh");
        break;
      }
      case IcKind::Mode:
        if (ic.k < 1 || ic.k > cfg.N + 1) fail("ic.k must lie in [1, N+1]");
        break;
      case IcKind::File:
        if (static_cast<int>(ic.v.size()) != cfg.N + 1 || static_cast<int>(ic.vdot.size()) != cfg.N + 1)
          fail("initial data file must hold N+1 values in v and vdot");
        break;
      case IcKind::Random: break;
    }
  }
  if (verb == Verb::Observability) {
    const auto& o = cfg.observability;
    if (!(o.T > 2.0 * cfg.L / cfg.c)) fail("observability.T must exceed 2L/c");
    for (int n : o.n_list)
      if (n < 3 || n > 2000) fail("observability.n_list entries must lie in [3, 2000]");
    for (int n : o.limit_n)
      if (n < 2) fail("observability.limit_n entries must be >= 2");
  }
  if (verb == Verb::DecayReport) {
    const auto& d = cfg.decay_report;
    for (double x : d.xi_grid)
      if (!(x > 0.0 && x < cfg.c)) fail("decay_report.xi_grid entries must lie in (0, c)");
    for (double g : d.gamma_grid)
      if (!(g > 0.0 && g < 1.0)) fail("decay_report.gamma_grid entries must lie in (0, 1)");
    if (d.reference_pairs < 1 || d.reference_pairs > cfg.N + 1) fail("decay_report.reference_pairs must lie in [1, N+1]");
    if (!d.reference.empty() && !(cfg.xi > 0.0 && cfg.xi < cfg.c))
      fail("decay_report.reference rows need 0 < xi < c");
  }
}

inline json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open config '" + p.string() + "'");
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + p.string() + "': " + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& p) {
  return parse_config(read_json_file(p), p.parent_path());
}

}  // namespace dampwave::io
