#include "tdwave/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tdwave/rng.hpp"

namespace tdwave {

static std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void KvConfig::set(const std::string& key, const std::string& value) {
  kv[key] = value;
}

void KvConfig::set_double(const std::string& key, double value) {
  kv[key] = format_double(value);
}

void KvConfig::set_int(const std::string& key, long long value) {
  kv[key] = std::to_string(value);
}

std::string KvConfig::get(const std::string& key,
                          const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for key " + key + ": " +
                                it->second);
  }
}

long long KvConfig::get_int(const std::string& key, long long fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for key " + key);
  }
}

std::vector<double> KvConfig::get_list(
    const std::string& key, const std::vector<double>& fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

KvConfig KvConfig::parse(const std::string& text) {
  KvConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: missing '=' on line " +
                                  std::to_string(lineno));
    cfg.kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return cfg;
}

KvConfig KvConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KvConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void KvConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << serialize();
}

std::string KvConfig::hash() const {
  const std::uint64_t h = fnv1a64(serialize());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

ModelConfig model_from_config(KvConfig& cfg) {
  ModelConfig m;
  m.domain_length = cfg.get_double("model.domain_length", m.domain_length);
  m.n_modes = static_cast<int>(cfg.get_int("model.n_modes", m.n_modes));
  m.alpha = cfg.get_double("model.alpha", m.alpha);
  m.epsilon = cfg.get_double("model.epsilon", m.epsilon);
  m.rho_floor = cfg.get_double("model.rho_floor", m.rho_floor);

  const std::string rho_kind = cfg.get("model.rho.kind", "logistic");
  const std::vector<double> rho_params =
      cfg.get_list("model.rho.params", rho_kind == "logistic"
                                           ? std::vector<double>{1.0}
                                           : std::vector<double>{});
  const double Lb = cfg.get_double("model.rho.L_bound", 1.25);
  m.rho = make_rho(rho_kind, rho_params, Lb);

  const std::string nl = cfg.get("model.nonlinearity", "cubic");
  m.nonlinearity = make_nonlinearity(nl, cfg.get_list("model.nonlinearity.params", {}));
  if (cfg.has("model.nonlinearity.nu"))
    m.nonlinearity.nu = cfg.get_double("model.nonlinearity.nu", m.nonlinearity.nu);
  if (cfg.has("model.nonlinearity.c1"))
    m.nonlinearity.c1 = cfg.get_double("model.nonlinearity.c1", m.nonlinearity.c1);

  const std::string forcing = cfg.get("model.forcing", "single_mode");
  if (forcing == "single_mode") {
    const int k = static_cast<int>(cfg.get_int("model.forcing.mode", 1));
    const double amp = cfg.get_double("model.forcing.amp", 1.0);
    m.g_modes = single_mode_forcing(m, k, amp);
    cfg.set_int("model.forcing.mode", k);
    cfg.set_double("model.forcing.amp", amp);
  } else if (forcing == "zero") {
    m.g_modes.clear();
  } else {
    throw std::invalid_argument("config: unknown forcing " + forcing);
  }
  m.validate();

  // echo everything back so the hash pins the effective run
  cfg.set_double("model.domain_length", m.domain_length);
  cfg.set_int("model.n_modes", m.n_modes);
  cfg.set_double("model.alpha", m.alpha);
  cfg.set_double("model.epsilon", m.epsilon);
  cfg.set_double("model.rho_floor", m.rho_floor);
  cfg.set("model.rho.kind", m.rho.name());
  cfg.set_double("model.rho.L_bound", m.rho.L_bound);
  cfg.set("model.nonlinearity", m.nonlinearity.name());
  cfg.set("model.forcing", forcing);
  return m;
}

EvolutionSpec evolution_from_config(KvConfig& cfg) {
  EvolutionSpec spec;
  const std::string kind = cfg.get("evolve.integrator", "rk4");
  if (kind == "rk4") {
    spec.integrator = Integrator::rk4;
  } else if (kind == "trapezoid") {
    spec.integrator = Integrator::trapezoid;
  } else {
    throw std::invalid_argument("config: unknown integrator " + kind);
  }
  spec.dt_base = cfg.get_double("evolve.dt_base", spec.dt_base);
  spec.safety = cfg.get_double("evolve.safety", spec.safety);
  spec.stab_margin = cfg.get_double("evolve.stab_margin", spec.stab_margin);
  spec.record_stride = cfg.get_double("evolve.record_stride", spec.record_stride);
  spec.max_steps = cfg.get_int("evolve.max_steps", spec.max_steps);
  if (!(spec.dt_base > 0)) throw std::invalid_argument("config: dt_base <= 0");

  cfg.set("evolve.integrator", kind);
  cfg.set_double("evolve.dt_base", spec.dt_base);
  cfg.set_double("evolve.safety", spec.safety);
  cfg.set_double("evolve.stab_margin", spec.stab_margin);
  cfg.set_double("evolve.record_stride", spec.record_stride);
  cfg.set_int("evolve.max_steps", spec.max_steps);
  return spec;
}

}  // namespace tdwave
