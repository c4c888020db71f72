#pragma once

#include <string>
#include <vector>

#include "tdwave/results.hpp"

namespace tdwave {

// Named experiment suites. Each one reads its parameters (with embedded
// defaults) from the key-value config, echoes the effective values back, runs
// deterministically for a fixed (config, seed) and records per-metric
// verdicts against configurable thresholds.
std::vector<std::string> suite_names();

// Runs the suite named by cfg["suite"] and persists the record plus CSV
// tables under out_dir/run-<hash>/. Unknown suites throw with the list of
// available names.
ResultRecord run_suite(KvConfig cfg, const std::string& out_dir);

// Re-runs a persisted config and compares raw metrics for byte-identical
// values. Throws when the stored config's hash does not match `config_hash`.
ResultRecord replay(const std::string& config_hash, const std::string& out_dir);

}  // namespace tdwave
