// Command-line runner: dampwave <verb> (--config FILE | --preset NAME) --out-dir DIR [--format csv|json]
//
// Exit status: 0 success, 2 configuration/input error, 3 numerical failure,
// 1 anything else (e.g. I/O).

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dampwave/io/commands.hpp"

#ifndef DAMPWAVE_PRESET_DIR
#define DAMPWAVE_PRESET_DIR "presets"
#endif

namespace {

namespace fs = std::filesystem;
using namespace dampwave;

fs::path resolve_preset(const std::string& name) {
  const std::string file = name.ends_with(".json") ? name : name + ".json";
  for (const fs::path& dir : {fs::path("presets"), fs::path(DAMPWAVE_PRESET_DIR)}) {
    const fs::path p = dir / file;
    if (fs::exists(p)) return p;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

struct Options {
  std::string config;
  std::string preset;
  std::string out_dir;
  std::string format = "csv";
  bool timing = false;
};

int run(io::Verb verb, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.config.empty() == opt.preset.empty()) throw ConfigError("give exactly one of --config or --preset");
  const fs::path path = opt.config.empty() ? resolve_preset(opt.preset) : fs::path(opt.config);
  const io::ExperimentConfig cfg = io::load_config(path);
  const io::TableFormat fmt = opt.format == "json" ? io::TableFormat::Json : io::TableFormat::Csv;
  const io::Artifacts art = io::run_verb(verb, cfg, fmt);
  io::write_artifacts(opt.out_dir, art);
  if (opt.timing) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << io::verb_name(verb) << ": " << secs << " s\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-discrete boundary-damped wave equation: spectra, filtering and decay experiments"};
  app.require_subcommand(1);

  Options opt;
  struct VerbDef {
    io::Verb verb;
    const char* name;
    const char* help;
  };
  const VerbDef verbs[] = {
      {io::Verb::Spectrum, "spectrum", "damped spectrum (dense + polynomial roots), continuum overlay, filter partition"},
      {io::Verb::Simulate, "simulate", "integrate, record energy trace, fit and compare the decay rate"},
      {io::Verb::Observability, "observability", "control-free observability ratios and top-mode limits"},
      {io::Verb::DecayReport, "decay-report", "predicted and fitted decay rates over gain/filter grids"},
  };
  std::vector<std::pair<CLI::App*, io::Verb>> subs;
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    sub->add_option("--config", opt.config, "JSON configuration file");
    sub->add_option("--preset", opt.preset, "named preset from the presets directory");
    sub->add_option("--out-dir", opt.out_dir, "output directory")->required();
    sub->add_option("--format", opt.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--timing", opt.timing, "report wall time on stderr");
    subs.emplace_back(sub, v.verb);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  io::Verb verb = io::Verb::Spectrum;
  for (const auto& [sub, v] : subs)
    if (sub->parsed()) verb = v;

  try {
    return run(verb, opt);
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
