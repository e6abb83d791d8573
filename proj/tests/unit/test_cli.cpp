#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "dampwave/io/commands.hpp"

using namespace dampwave;
using namespace dampwave::io;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("dampwave-test-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json small_config(std::mt19937_64& rng, Verb verb) {
  std::uniform_int_distribution<int> n(2, 10);
  std::uniform_real_distribution<double> xi(0.05, 0.95);
  json doc = {{"scheme", std::bernoulli_distribution(0.5)(rng) ? "FD" : "FEM"},
              {"N", n(rng)},
              {"xi", xi(rng)},
              {"T", 2.0},
              {"dt", 0.05},
              {"seed", std::uniform_int_distribution<int>(0, 1000)(rng)}};
  const int N = doc["N"];
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: doc["ic"] = {{"kind", "random"}, {"amplitude", 0.01}}; break;
    case 1: doc["ic"] = {{"kind", "mode"}, {"k", N + 1}, {"amplitude", 0.1}}; break;
    default: doc["ic"] = {{"kind", "sine_band"}, {"k_min", 1}, {"k_max", N}, {"amplitude", 0.01}};
  }
  if (std::bernoulli_distribution(0.5)(rng)) doc["filter"] = {{"mode", "pair_count"}, {"value", 1 + N / 2}};
  if (std::bernoulli_distribution(0.3)(rng)) doc["integrator"] = "rk4";
  if (verb == Verb::Observability)
    doc["observability"] = {{"n_list", {4, 6}}, {"T", 2.5}, {"limit_n", {8}}};
  if (verb == Verb::DecayReport)
    doc["decay_report"] = {{"xi_grid", {0.5}}, {"gamma_grid", {0.5}}, {"reference_pairs", 1}, {"simulate", true}};
  return doc;
}

}  // namespace

TEST(Config, Defaults) {
  const auto cfg = parse_config(json::object());
  EXPECT_EQ(cfg.scheme, Scheme::FD);
  EXPECT_EQ(cfg.N, 30);
  EXPECT_DOUBLE_EQ(cfg.xi, 0.9);
  EXPECT_EQ(cfg.integrator, Integrator::ModalExact);
  EXPECT_DOUBLE_EQ(cfg.step(), 1.0 / 31.0 / 10.0);
  EXPECT_EQ(cfg.filter.mode, FilterMode::None);
}

TEST(Config, RejectsUnknownAndMalformed) {
  EXPECT_THROW(parse_config({{"bogus", 1}}), ConfigError);
  EXPECT_THROW(parse_config({{"scheme", "FV"}}), ConfigError);
  EXPECT_THROW(parse_config({{"N", "thirty"}}), ConfigError);
  EXPECT_THROW(parse_config({{"N", 2.5}}), ConfigError);
  EXPECT_THROW(parse_config({{"filter", {{"mode", "lowpass"}}}}), ConfigError);
  EXPECT_THROW(parse_config({{"ic", {{"kind", "mode"}, {"k_min", 1}}}}), ConfigError);
  EXPECT_THROW(parse_config({{"integrator", "euler"}}), ConfigError);
  EXPECT_THROW(parse_config({{"seed", -4}}), ConfigError);
  EXPECT_THROW(parse_config({{"observability", {{"data", "all"}}}}), ConfigError);
  EXPECT_THROW(parse_config(json::array()), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, ValidationPerVerb) {
  auto cfg = parse_config({{"N", 1}});
  EXPECT_THROW(validate_config(cfg, Verb::Spectrum), ConfigError);
  cfg = parse_config({{"filter", {{"mode", "gamma"}, {"value", 1.5}}}});
  EXPECT_THROW(validate_config(cfg, Verb::Spectrum), ConfigError);
  EXPECT_NO_THROW(validate_config(cfg, Verb::Observability));
  cfg = parse_config({{"filter", {{"mode", "pair_count"}, {"value", 2.5}}}});
  EXPECT_THROW(validate_config(cfg, Verb::Simulate), ConfigError);
  cfg = parse_config({{"T", 0.01}, {"dt", 0.1}});
  EXPECT_THROW(validate_config(cfg, Verb::Simulate), ConfigError);
  cfg = parse_config({{"observability", {{"T", 2.0}}}});
  EXPECT_THROW(validate_config(cfg, Verb::Observability), ConfigError);
  cfg = parse_config({{"decay_report", {{"xi_grid", {1.0}}}}});
  EXPECT_THROW(validate_config(cfg, Verb::DecayReport), ConfigError);
  cfg = parse_config({{"decay_report", {{"gamma_grid", {1.0}}}}});
  EXPECT_THROW(validate_config(cfg, Verb::DecayReport), ConfigError);
  cfg = parse_config({{"ic", {{"kind", "mode"}, {"k", 40}}}});
  EXPECT_THROW(validate_config(cfg, Verb::Simulate), ConfigError);
}

TEST(Config, InitialDataFile) {
  const fs::path dir = temp_dir("icfile");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "ic.json") << R"({"v": [0.1, 0.2, 0.3], "vdot": [0, 0, 0]})";
    std::ofstream(dir / "cfg.json") << R"({"N": 2, "ic": {"kind": "file", "path": "ic.json"}, "T": 1, "dt": 0.1})";
  }
  const auto cfg = load_config(dir / "cfg.json");
  ASSERT_EQ(cfg.ic.v.size(), 3u);
  EXPECT_DOUBLE_EQ(cfg.ic.v[2], 0.3);
  EXPECT_NO_THROW(validate_config(cfg, Verb::Simulate));
  const auto bad = parse_config({{"N", 5}, {"ic", {{"kind", "file"}, {"path", (dir / "ic.json").string()}}}});
  EXPECT_THROW(validate_config(bad, Verb::Simulate), ConfigError);
  fs::remove_all(dir);
}

TEST(Table, Formatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(num(std::nan("")), json(nullptr));
  EXPECT_STREQ(extension(TableFormat::Json), ".json");
}

TEST(Commands, SpectrumSummary) {
  const auto cfg = parse_config({{"N", 6}, {"xi", 0.9}, {"filter", {{"mode", "pair_count"}, {"value", 3}}}});
  const Artifacts art = run_verb(Verb::Spectrum, cfg, TableFormat::Csv);
  const auto names = art.names();
  EXPECT_NE(std::find(names.begin(), names.end(), "summary.json"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "spectrum.csv"), names.end());
  for (const auto& [name, content] : art.files) {
    if (name != "summary.json") continue;
    const json s = json::parse(content);
    EXPECT_EQ(s["verb"], "spectrum");
    EXPECT_EQ(s["results"]["eigenvalue_count"], 14);
    EXPECT_EQ(s["results"]["retained_count"], 6);
    EXPECT_EQ(s["results"]["polynomial_roots"]["first_quadrant_roots"], 7);
  }
}

TEST(Commands, NumericalFailureSurfaces) {
  const auto cfg = parse_config({{"N", 30}, {"integrator", "rk4"}, {"dt", 0.1}, {"T", 5.0}});
  EXPECT_THROW(run_verb(Verb::Simulate, cfg, TableFormat::Csv), NumericalError);
}

TEST(Commands, RandomDataFollowsSeed) {
  auto run = [](int seed) {
    const auto cfg = parse_config({{"N", 5}, {"T", 1.0}, {"dt", 0.1}, {"seed", seed}, {"ic", {{"kind", "random"}}}});
    return run_verb(Verb::Simulate, cfg, TableFormat::Csv).files;
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7), run(8));
}

TEST(WriteArtifacts, AtomicAndFailClosed) {
  const fs::path dir = temp_dir("write");
  Artifacts ok;
  ok.add("a.csv", "x\n1\n");
  ok.add("summary.json", "{}\n");
  write_artifacts(dir, ok);
  EXPECT_EQ(slurp(dir / "a.csv"), "x\n1\n");
  EXPECT_FALSE(fs::exists(dir / ".dampwave-staging"));
  fs::remove_all(dir);

  Artifacts bad;
  bad.add("a.csv", "x\n");
  bad.add("missing/b.csv", "y\n");
  EXPECT_THROW(write_artifacts(dir, bad), std::exception);
  EXPECT_FALSE(fs::exists(dir / "a.csv"));
  EXPECT_FALSE(fs::exists(dir / ".dampwave-staging"));
  fs::remove_all(dir);
}

// Property: identical configs give byte-identical artifacts, for every verb.
TEST(CliProperties, Determinism) {
  std::mt19937_64 rng(555);
  const Verb verbs[] = {Verb::Spectrum, Verb::Simulate, Verb::Observability, Verb::DecayReport};
  for (int t = 0; t < 100; ++t) {
    const Verb verb = verbs[t % 4];
    const json doc = small_config(rng, verb);
    const auto fmt = t % 3 == 0 ? TableFormat::Json : TableFormat::Csv;
    const Artifacts a = run_verb(verb, parse_config(doc), fmt);
    const Artifacts b = run_verb(verb, parse_config(doc), fmt);
    ASSERT_EQ(a.files.size(), b.files.size()) << doc.dump();
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      EXPECT_EQ(a.files[i].first, b.files[i].first);
      EXPECT_TRUE(a.files[i].second == b.files[i].second) << verb_name(verb) << " " << a.files[i].first << " " << doc.dump();
    }
  }
}
