#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tdwave/suites.hpp"

using namespace tdwave;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / "tdwave-tests" / tag;
  fs::create_directories(dir);
  return dir.string();
}

KvConfig tiny_model_cfg() {
  KvConfig cfg;
  cfg.set_int("model.n_modes", 8);
  cfg.set_int("seed", 5);
  return cfg;
}

}  // namespace

TEST_CASE("config parsing, canonical serialization and hashing") {
  const std::string text =
      "# comment line\n"
      "model.alpha = 1.5\n"
      "  model.n_modes=16 \n"
      "\n"
      "scan.eps_grid = 0.5, 0.7, 0.9\n";
  KvConfig cfg = KvConfig::parse(text);
  CHECK(cfg.get_double("model.alpha", 0.0) == 1.5);
  CHECK(cfg.get_int("model.n_modes", 0) == 16);
  const auto grid = cfg.get_list("scan.eps_grid", {});
  CHECK(grid.size() == 3);
  CHECK(grid[1] == 0.7);

  // round trip is canonical
  KvConfig again = KvConfig::parse(cfg.serialize());
  CHECK(again.serialize() == cfg.serialize());
  CHECK(again.hash() == cfg.hash());

  // any change moves the hash
  again.set_double("model.alpha", 1.6);
  CHECK(again.hash() != cfg.hash());

  CHECK_THROWS_AS(KvConfig::parse("not a key value line\n"),
                  std::invalid_argument);
}

TEST_CASE("model and evolution assembly echoes defaults") {
  KvConfig cfg = tiny_model_cfg();
  const ModelConfig m = model_from_config(cfg);
  CHECK(m.n_modes == 8);
  CHECK(cfg.has("model.rho.kind"));
  CHECK(cfg.has("model.forcing.amp"));
  const EvolutionSpec spec = evolution_from_config(cfg);
  CHECK(spec.dt_base > 0);
  CHECK(cfg.has("evolve.dt_base"));
  CHECK_THROWS_AS(
      [] {
        KvConfig bad;
        bad.set("model.nonlinearity", "septic");
        model_from_config(bad);
      }(),
      std::invalid_argument);
}

TEST_CASE("unknown suite lists the available ones") {
  KvConfig cfg;
  cfg.set("suite", "frobnicate");
  CHECK_THROWS_WITH_AS(run_suite(cfg, ""), doctest::Contains("sandwich"),
                       std::invalid_argument);
}

TEST_CASE("sandwich suite passes and persists") {
  const std::string out = temp_dir("sandwich");
  KvConfig cfg = tiny_model_cfg();
  cfg.set("suite", "sandwich");
  cfg.set_int("sandwich.triples", 2000);
  const ResultRecord rec = run_suite(cfg, out);
  CHECK(rec.all_pass());
  CHECK(rec.metrics.at("max_upper_violation") <= 1e-12);

  const fs::path dir = fs::path(out) / ("run-" + rec.config_hash);
  CHECK(fs::exists(dir / "record.json"));
  CHECK(fs::exists(dir / "config.txt"));
}

TEST_CASE("replay reproduces metrics byte for byte") {
  const std::string out = temp_dir("replay");
  KvConfig cfg = tiny_model_cfg();
  cfg.set("suite", "cocycle");
  cfg.set_int("cocycle.states", 3);
  const ResultRecord rec = run_suite(cfg, out);
  const ResultRecord again = replay(rec.config_hash, out);
  bool has_verdict = false;
  for (const auto& v : again.verdicts)
    if (v.name == "replay_identical") {
      has_verdict = true;
      CHECK(v.pass);
    }
  CHECK(has_verdict);

  CHECK_THROWS_AS(replay("0000000000000000", out), std::invalid_argument);
}

TEST_CASE("changed seed moves metrics within suite reproducibility") {
  const std::string out = temp_dir("seeds");
  KvConfig a = tiny_model_cfg();
  a.set("suite", "sandwich");
  a.set_int("sandwich.triples", 2000);
  KvConfig b = a;
  b.set_int("seed", 99);
  const ResultRecord ra = run_suite(a, out);
  const ResultRecord rb = run_suite(b, out);
  CHECK(ra.config_hash != rb.config_hash);
  // both tiny violations, different draws
  CHECK(ra.all_pass());
  CHECK(rb.all_pass());
}

TEST_CASE("altered tolerance changes verdicts but not metrics") {
  const std::string out = temp_dir("tol");
  KvConfig a = tiny_model_cfg();
  a.set("suite", "sandwich");
  a.set_int("sandwich.triples", 1000);
  const ResultRecord ra = run_suite(a, out);

  KvConfig b = a;
  b.set_double("tol.sandwich_upper", -1.0);  // impossible threshold
  const ResultRecord rb = run_suite(b, out);
  CHECK(ra.metrics.at("max_upper_violation") ==
        rb.metrics.at("max_upper_violation"));
  CHECK(ra.all_pass());
  CHECK_FALSE(rb.all_pass());
}

TEST_CASE("csv emission writes one file per curve with headers") {
  const std::string out = temp_dir("csv");
  KvConfig cfg = tiny_model_cfg();
  cfg.set("suite", "cocycle");
  cfg.set_int("cocycle.states", 2);
  const ResultRecord rec = run_suite(cfg, out);
  const fs::path csv =
      fs::path(out) / ("run-" + rec.config_hash) / "cocycle.csv";
  REQUIRE(fs::exists(csv));
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "dt_base,cocycle_defect");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("section files round-trip through the structured format") {
  const std::string out = temp_dir("cloud");
  ModelConfig m;
  m.n_modes = 4;
  const PhaseMetric h = m.metric_eps1();
  PointCloud cloud = sample_ball(h, -1.5, 2.0, 6, 13);
  const std::string path = out + "/section.txt";
  save_cloud(path, cloud, {{"config_hash", "abc"}, {"seed", "13"}});
  std::map<std::string, std::string> header;
  const PointCloud back = load_cloud(path, h, &header);
  CHECK(header.at("config_hash") == "abc");
  REQUIRE(back.size() == cloud.size());
  CHECK(back.time == cloud.time);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    CHECK(h.dist(back.states[i], cloud.states[i], cloud.time) == 0.0);
}

TEST_CASE("simulate suite dumps the documented column order") {
  const std::string out = temp_dir("simulate");
  KvConfig cfg = tiny_model_cfg();
  cfg.set("suite", "simulate");
  cfg.set_double("simulate.tau", -2.0);
  const ResultRecord rec = run_suite(cfg, out);
  const auto& table = rec.tables.at("trajectory");
  REQUIRE(table.columns.size() == 7);
  CHECK(table.columns[0] == "time");
  CHECK(table.columns[1] == "norm_H_eps");
  CHECK(table.columns.back() == "lambda");
  CHECK(table.rows.size() >= 10);
}
