// Experiment driver for the time-dependent wave attractor lab.
//
// Exit codes: 0 every verdict passed, 1 some verdict failed,
// 2 usage or configuration error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "tdwave/suites.hpp"

using namespace tdwave;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "results";
  long long seed = -1;
  double t = std::nan("");
  std::string eps_list;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value configuration file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "RNG seed (recorded in the output)");
  cmd->add_option("--t", args.t, "section time t");
  cmd->add_option("--eps", args.eps_list, "comma-separated epsilon grid");
  cmd->add_option("--threads", args.threads, "worker thread count");
}

int run_named_suite(const std::string& suite, const CommonArgs& args) {
  KvConfig cfg;
  if (!args.config_path.empty()) cfg = KvConfig::load(args.config_path);
  cfg.set("suite", suite);
  if (args.seed >= 0) cfg.set_int("seed", args.seed);
  if (!std::isnan(args.t)) cfg.set_double("attractor.t", args.t);
  if (!args.eps_list.empty()) cfg.set("scan.eps_grid", args.eps_list);
#ifdef _OPENMP
  if (args.threads > 0) omp_set_num_threads(args.threads);
#endif
  const ResultRecord rec = run_suite(cfg, args.out_dir);
  std::printf("suite %-16s hash %s  wall %.2fs\n", rec.suite.c_str(),
              rec.config_hash.c_str(), rec.wall_seconds);
  for (const auto& v : rec.verdicts)
    std::printf("  [%s] %-28s value %.6g %s threshold %.6g\n",
                v.pass ? "PASS" : "FAIL", v.name.c_str(), v.value,
                v.relation.c_str(), v.threshold);
  return rec.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-dependent wave attractor experiments"};
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, CommonArgs>> cmds;
  cmds.reserve(suite_names().size());
  for (const auto& name : suite_names()) {
    auto* cmd = app.add_subcommand(name, "run the " + name + " suite");
    cmds.emplace_back(cmd, CommonArgs{});
    add_common(cmd, cmds.back().second);
  }

  CommonArgs replay_args;
  std::string replay_hash;
  auto* replay_cmd =
      app.add_subcommand("replay", "re-run a persisted config and compare");
  replay_cmd->add_option("hash", replay_hash, "config hash of the stored run")
      ->required();
  replay_cmd->add_option("--out", replay_args.out_dir, "output directory");
  replay_cmd->add_option("--threads", replay_args.threads, "worker thread count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (replay_cmd->parsed()) {
#ifdef _OPENMP
      if (replay_args.threads > 0) omp_set_num_threads(replay_args.threads);
#endif
      const ResultRecord rec = replay(replay_hash, replay_args.out_dir);
      for (const auto& v : rec.verdicts)
        std::printf("  [%s] %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str());
      return rec.all_pass() ? 0 : 1;
    }
    for (auto& [cmd, args] : cmds)
      if (cmd->parsed()) return run_named_suite(cmd->get_name(), args);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
