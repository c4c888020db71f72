#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tdwave/evolve.hpp"
#include "tdwave/model.hpp"

namespace tdwave {

// Human-editable key = value configuration. Serialization is canonical
// (sorted keys), so the hash identifies a run.
struct KvConfig {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  static KvConfig parse(const std::string& text);
  static KvConfig load(const std::string& path);
  std::string serialize() const;
  void save(const std::string& path) const;
  std::string hash() const;  // fnv1a-64 of the canonical serialization, hex
};

std::string format_double(double v);

// Model / evolution assembly with every default echoed back into the config.
ModelConfig model_from_config(KvConfig& cfg);
EvolutionSpec evolution_from_config(KvConfig& cfg);

}  // namespace tdwave
