// Run configuration: a small sectioned key = value text format, its
// canonical form (sorted keys, normalized numbers) and the stable FNV-1a
// digest of that form. The digest is what manifests record, so two configs
// that parse the same hash the same.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnlab/trajectory.hpp"

namespace urnlab {

inline constexpr const char* kToolVersion = "urnlab 0.1.0";

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Round-trip-exact double formatting (17 significant digits, trimmed by %g).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(strip_comment(line));
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']' || t.size() < 3) {
          throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
        }
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
      }
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  std::string get_string_or(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

  double get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  std::uint64_t get_u64(const std::string& key) const {
    const double v = get_double(key);
    if (v < 0.0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
      throw ConfigError("config key " + key + " must be a nonnegative integer");
    }
    return static_cast<std::uint64_t>(v);
  }

  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
  }

  std::vector<double> get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(get_string(key));
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (!t.empty()) out.push_back(to_double(key, t));
    }
    return out;
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  // Sorted, number-normalized form; the basis of the config hash.
  std::string canonical_text() const {
    std::ostringstream out;
    for (const auto& [key, value] : values_) {
      out << key << " = " << normalize_value(value) << "\n";
    }
    return out.str();
  }

  std::string hash_hex() const { return hex64(fnv1a64(canonical_text())); }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  static std::string strip_comment(const std::string& s) {
    const auto pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
  }

  static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

  static double to_double(const std::string& key, const std::string& value) {
    try {
      std::size_t consumed = 0;
      const double v = std::stod(value, &consumed);
      if (consumed != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + " is not a number: '" + value + "'");
    }
  }

  static std::string normalize_value(const std::string& value) {
    // Comma lists normalize element-wise; scalars normalize if numeric.
    if (value.find(',') != std::string::npos) {
      std::ostringstream out;
      std::istringstream ss(value);
      std::string item;
      bool first = true;
      while (std::getline(ss, item, ',')) {
        if (!first) out << ",";
        first = false;
        out << normalize_value(trim(item));
      }
      return out.str();
    }
    try {
      std::size_t consumed = 0;
      const double v = std::stod(value, &consumed);
      if (consumed == value.size()) return format_double(v);
    } catch (const std::exception&) {
    }
    return value;
  }

  std::map<std::string, std::string> values_;
};

namespace detail {

inline ReinforcementSpec load_reinforcement(const KeyValueConfig& cfg, const std::string& section) {
  const std::string kind = cfg.get_string_or(section + ".kind", "point");
  if (kind == "point") {
    return ReinforcementSpec::point_mass(cfg.get_double(section + ".value"));
  }
  if (kind == "two_point") {
    return ReinforcementSpec::two_point(cfg.get_double(section + ".low"),
                                        cfg.get_double(section + ".high"),
                                        cfg.get_double(section + ".p_high"));
  }
  if (kind == "uniform") {
    return ReinforcementSpec::uniform_interval(cfg.get_double(section + ".low"),
                                               cfg.get_double(section + ".high"));
  }
  if (kind == "scaled_beta") {
    return ReinforcementSpec::scaled_beta(
        cfg.get_double(section + ".low"), cfg.get_double(section + ".high"),
        cfg.get_double(section + ".alpha"), cfg.get_double(section + ".beta"));
  }
  throw ConfigError("unknown reinforcement kind: " + kind);
}

inline ThresholdPolicy load_policy(const KeyValueConfig& cfg, const ReinforcementSpec& r1,
                                   const ReinforcementSpec& r2) {
  const std::string kind = cfg.get_string_or("policy.kind", "fixed");
  const double rho_min = cfg.get_double_or("policy.rho_min", 0.05);
  const double rho_max = cfg.get_double_or("policy.rho_max", 0.95);
  if (kind == "fixed") {
    return ThresholdPolicy::fixed(cfg.get_double_or("policy.rho1_limit", 1.0),
                                  cfg.get_double_or("policy.rho2_limit", 0.0));
  }
  if (kind == "adaptive_mean_map") {
    return ThresholdPolicy::adaptive_mean_map(
        r1.mean(), r2.mean(), cfg.get_double_or("policy.map_offset", 0.3),
        cfg.get_double_or("policy.map_slope", 0.4), cfg.get_double_or("policy.map_gap", 0.2),
        rho_min, rho_max);
  }
  if (kind == "noisy_convergent") {
    return ThresholdPolicy::noisy_convergent(cfg.get_double("policy.rho1_limit"),
                                             cfg.get_double("policy.rho2_limit"), rho_min, rho_max);
  }
  if (kind == "adversarial_excursion") {
    return ThresholdPolicy::adversarial_excursion(
        cfg.get_double("policy.rho1_limit"), cfg.get_double("policy.rho2_limit"),
        cfg.get_double_or("policy.c_rho", 1.0), rho_min, rho_max);
  }
  throw ConfigError("unknown policy kind: " + kind);
}

inline std::vector<std::uint64_t> load_grid(const std::string& spec, std::uint64_t last) {
  if (spec == "pow2") return pow2_grid(last);
  if (spec.rfind("linear:", 0) == 0) {
    const std::string tail = spec.substr(7);
    try {
      return linear_grid(last, static_cast<std::uint64_t>(std::stoull(tail)));
    } catch (const std::exception&) {
      throw ConfigError("bad linear grid spacing: " + spec);
    }
  }
  // Explicit comma list of step indices.
  std::vector<std::uint64_t> g;
  std::istringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      g.push_back(static_cast<std::uint64_t>(std::stoull(item)));
    } catch (const std::exception&) {
      throw ConfigError("bad grid entry: " + item);
    }
  }
  if (g.empty()) throw ConfigError("empty grid spec");
  return g;
}

}  // namespace detail

// Builds the effective RunConfig from parsed config text. Grid specs are
// resolved against the extended horizon.
inline RunConfig load_run_config(const KeyValueConfig& cfg) {
  RunConfig rc;
  rc.r1 = detail::load_reinforcement(cfg, "reinforcement.red");
  rc.r2 = detail::load_reinforcement(cfg, "reinforcement.white");

  const std::string model = cfg.get_string_or("model.kind", "rru");
  if (model == "rru") {
    rc.model = ModelKind::rru();
  } else if (model == "mrru") {
    rc.model = ModelKind::mrru(cfg.get_double("model.rho1"), cfg.get_double("model.rho2"));
  } else if (model == "arru") {
    rc.model = ModelKind::arru();
    rc.policy = detail::load_policy(cfg, rc.r1, rc.r2);
  } else {
    throw ConfigError("unknown model kind: " + model);
  }

  rc.y1_0 = cfg.get_double_or("run.y1_0", 1.0);
  rc.y2_0 = cfg.get_double_or("run.y2_0", 1.0);
  rc.horizon = cfg.get_u64("run.horizon");
  rc.seed = cfg.get_u64_or("run.seed", 0);
  rc.proxy_multiplier = cfg.get_u64_or("run.proxy_multiplier", 1);
  rc.a_n_alpha = cfg.get_double_or("run.a_n_alpha", 0.25);
  rc.a_n_c = cfg.get_double_or("run.a_n_c", 1.0);
  rc.guard_epsilon = cfg.get_double_or("run.guard_epsilon", 0.05);
  rc.crossing_d = cfg.get_double_or("run.crossing_d", 0.4);
  rc.crossing_u = cfg.get_double_or("run.crossing_u", 0.6);
  rc.record_grid = detail::load_grid(cfg.get_string_or("run.grid", "pow2"), rc.total_steps());
  rc.validate();
  return rc;
}

// Serializes the effective RunConfig back to config text. Canonicalizing
// this is how batch manifests derive config_hash.
inline KeyValueConfig to_key_value(const RunConfig& rc, std::uint64_t replications) {
  KeyValueConfig cfg;
  const auto set_d = [&](const std::string& k, double v) { cfg.set(k, format_double(v)); };
  const auto set_u = [&](const std::string& k, std::uint64_t v) { cfg.set(k, std::to_string(v)); };

  const auto dump_reinf = [&](const std::string& sec, const ReinforcementSpec& r) {
    cfg.set(sec + ".kind", to_string(r.kind()));
    switch (r.kind()) {
      case ReinforcementKind::kPointMass:
        set_d(sec + ".value", r.support_low());
        break;
      case ReinforcementKind::kTwoPoint:
        set_d(sec + ".low", r.support_low());
        set_d(sec + ".high", r.support_high());
        set_d(sec + ".p_high", r.p_high());
        break;
      case ReinforcementKind::kUniformInterval:
        set_d(sec + ".low", r.support_low());
        set_d(sec + ".high", r.support_high());
        break;
      case ReinforcementKind::kScaledBeta:
        set_d(sec + ".low", r.support_low());
        set_d(sec + ".high", r.support_high());
        set_d(sec + ".alpha", r.beta_alpha());
        set_d(sec + ".beta", r.beta_beta());
        break;
    }
  };
  dump_reinf("reinforcement.red", rc.r1);
  dump_reinf("reinforcement.white", rc.r2);

  switch (rc.model.tag) {
    case ModelTag::kRru:
      cfg.set("model.kind", "rru");
      break;
    case ModelTag::kMrru:
      cfg.set("model.kind", "mrru");
      set_d("model.rho1", rc.model.rho1);
      set_d("model.rho2", rc.model.rho2);
      break;
    case ModelTag::kArru: {
      cfg.set("model.kind", "arru");
      cfg.set("policy.kind", to_string(rc.policy.kind));
      set_d("policy.rho1_limit", rc.policy.rho1_limit);
      set_d("policy.rho2_limit", rc.policy.rho2_limit);
      set_d("policy.rho_min", rc.policy.rho_min);
      set_d("policy.rho_max", rc.policy.rho_max);
      set_d("policy.c_rho", rc.policy.c_rho);
      set_d("policy.map_offset", rc.policy.map_offset);
      set_d("policy.map_slope", rc.policy.map_slope);
      set_d("policy.map_gap", rc.policy.map_gap);
      break;
    }
  }

  set_d("run.y1_0", rc.y1_0);
  set_d("run.y2_0", rc.y2_0);
  set_u("run.horizon", rc.horizon);
  set_u("run.seed", rc.seed);
  set_u("run.proxy_multiplier", rc.proxy_multiplier);
  set_u("run.replications", replications);
  set_d("run.a_n_alpha", rc.a_n_alpha);
  set_d("run.a_n_c", rc.a_n_c);
  set_d("run.guard_epsilon", rc.guard_epsilon);
  set_d("run.crossing_d", rc.crossing_d);
  set_d("run.crossing_u", rc.crossing_u);
  {
    std::ostringstream grid;
    for (std::size_t i = 0; i < rc.record_grid.size(); ++i) {
      if (i) grid << ",";
      grid << rc.record_grid[i];
    }
    cfg.set("run.grid", grid.str());
  }
  return cfg;
}

inline std::string config_hash(const RunConfig& rc, std::uint64_t replications) {
  return to_key_value(rc, replications).hash_hex();
}

}  // namespace urnlab
