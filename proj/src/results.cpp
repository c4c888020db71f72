#include "tdwave/results.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tdwave {

namespace fs = std::filesystem;
using nlohmann::json;

bool ResultRecord::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

void ResultRecord::add_verdict(const std::string& name, bool pass, double value,
                               double threshold, const std::string& relation) {
  verdicts.push_back({name, pass, value, threshold, relation});
}

void ResultRecord::check_le(const std::string& name, double value,
                            KvConfig& cfg, double default_threshold) {
  const double thr = cfg.get_double("tol." + name, default_threshold);
  cfg.set_double("tol." + name, thr);
  add_verdict(name, value <= thr, value, thr, "<=");
}

void ResultRecord::check_ge(const std::string& name, double value,
                            KvConfig& cfg, double default_threshold) {
  const double thr = cfg.get_double("tol." + name, default_threshold);
  cfg.set_double("tol." + name, thr);
  add_verdict(name, value >= thr, value, thr, ">=");
}

std::string ResultRecord::to_json() const {
  json j;
  j["suite"] = suite;
  j["config_hash"] = config_hash;
  j["wall_seconds"] = wall_seconds;
  json jm = json::object();
  for (const auto& [k, v] : metrics) jm[k] = v;
  j["metrics"] = jm;
  json jv = json::array();
  for (const auto& v : verdicts) {
    jv.push_back({{"name", v.name},
                  {"pass", v.pass},
                  {"value", v.value},
                  {"threshold", v.threshold},
                  {"relation", v.relation}});
  }
  j["verdicts"] = jv;
  j["all_pass"] = all_pass();
  return j.dump(2);
}

void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot write " + path);
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

std::string ResultRecord::persist(const std::string& out_dir) const {
  const fs::path dir = fs::path(out_dir) / ("run-" + config_hash);
  fs::create_directories(dir);
  {
    std::ofstream rec(dir / "record.json");
    rec << to_json() << '\n';
  }
  config.save((dir / "config.txt").string());
  for (const auto& [name, table] : tables)
    write_csv((dir / (name + ".csv")).string(), table);
  for (const auto& [name, cloud] : clouds)
    save_cloud((dir / (name + ".section")).string(), cloud,
               {{"config_hash", config_hash},
                {"suite", suite},
                {"seed", config.get("seed", "?")},
                {"tol", config.get("tol.cloud", "?")}});
  return dir.string();
}

void save_cloud(const std::string& path, const PointCloud& cloud,
                const std::map<std::string, std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_cloud: cannot write " + path);
  out << "# time: " << format_double(cloud.time) << '\n';
  out << "# modes: " << cloud.metric.eigenvalues.size() << '\n';
  for (const auto& [k, v] : header) out << "# " << k << ": " << v << '\n';
  const std::size_t n = cloud.metric.eigenvalues.size();
  for (std::size_t c = 0; c < n; ++c) out << (c ? "," : "") << "u" << (c + 1);
  for (std::size_t c = 0; c < n; ++c) out << ",v" << (c + 1);
  out << '\n';
  for (const auto& z : cloud.states) {
    for (std::size_t c = 0; c < n; ++c)
      out << (c ? "," : "") << format_double(z.u[c]);
    for (std::size_t c = 0; c < n; ++c) out << ',' << format_double(z.v[c]);
    out << '\n';
  }
}

PointCloud load_cloud(const std::string& path, const PhaseMetric& metric,
                      std::map<std::string, std::string>* header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_cloud: cannot open " + path);
  std::string line;
  double time = 0.0;
  bool saw_columns = false;
  PointCloud cloud;
  const std::size_t n = metric.eigenvalues.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        const std::string key = line.substr(2, colon - 2);
        const std::string val = line.substr(colon + 2);
        if (key == "time") time = std::stod(val);
        if (header) (*header)[key] = val;
      }
      continue;
    }
    if (!saw_columns) {  // column header row
      saw_columns = true;
      cloud = PointCloud(time, metric);
      continue;
    }
    ModalState z(n, time);
    std::stringstream ss(line);
    std::string tok;
    std::size_t c = 0;
    while (std::getline(ss, tok, ',')) {
      if (c < n)
        z.u[c] = std::stod(tok);
      else if (c < 2 * n)
        z.v[c - n] = std::stod(tok);
      ++c;
    }
    if (c != 2 * n) throw std::runtime_error("load_cloud: bad row width");
    cloud.states.push_back(std::move(z));
  }
  return cloud;
}

ResultRecord load_record_metrics(const std::string& run_dir) {
  std::ifstream in(fs::path(run_dir) / "record.json");
  if (!in)
    throw std::runtime_error("load_record_metrics: no record.json in " +
                             run_dir);
  json j;
  in >> j;
  ResultRecord rec;
  rec.suite = j.value("suite", "");
  rec.config_hash = j.value("config_hash", "");
  rec.wall_seconds = j.value("wall_seconds", 0.0);
  if (j.contains("metrics"))
    for (auto it = j["metrics"].begin(); it != j["metrics"].end(); ++it)
      rec.metrics[it.key()] = it.value().get<double>();
  if (j.contains("verdicts"))
    for (const auto& v : j["verdicts"])
      rec.verdicts.push_back({v.value("name", ""), v.value("pass", false),
                              v.value("value", 0.0), v.value("threshold", 0.0),
                              v.value("relation", "")});
  return rec;
}

}  // namespace tdwave
