#pragma once

#include <map>
#include <string>
#include <vector>

#include "tdwave/cloud.hpp"
#include "tdwave/config.hpp"

namespace tdwave {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "in" ...
};

// One run's metrics, curve tables and pass/fail verdicts. Metrics and tables
// are deterministic for a fixed (config, seed); wall_seconds is excluded from
// comparisons.
struct ResultRecord {
  std::string suite;
  std::string config_hash;
  KvConfig config;
  std::map<std::string, double> metrics;
  std::map<std::string, Table> tables;
  std::map<std::string, PointCloud> clouds;  // sections, persisted with headers
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  bool all_pass() const;
  void add_verdict(const std::string& name, bool pass, double value,
                   double threshold, const std::string& relation);
  // verdict helper reading the threshold from config key `tol.<name>`
  void check_le(const std::string& name, double value, KvConfig& cfg,
                double default_threshold);
  void check_ge(const std::string& name, double value, KvConfig& cfg,
                double default_threshold);

  std::string to_json() const;
  // writes record.json, config.txt and one CSV per table into
  // out_dir/run-<hash>/
  std::string persist(const std::string& out_dir) const;
};

void write_csv(const std::string& path, const Table& table);

// Structured section file: '# key: value' provenance header plus one state
// per row (u_1..u_N, v_1..v_N).
void save_cloud(const std::string& path, const PointCloud& cloud,
                const std::map<std::string, std::string>& header);
PointCloud load_cloud(const std::string& path, const PhaseMetric& metric,
                      std::map<std::string, std::string>* header = nullptr);

ResultRecord load_record_metrics(const std::string& run_dir);

}  // namespace tdwave
