// Output emission: trajectories CSV, summary and manifest JSON, all written
// atomically via temp-file rename. Numeric fields use 17 significant digits
// so doubles round-trip exactly.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "urnlab/batch.hpp"
#include "urnlab/config.hpp"

namespace urnlab {

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Column order is part of the format contract:
// n, rep, z, y, n1, w1, w2, rho1_hat, rho2_hat, in_A_n
inline std::string trajectories_csv(const std::vector<TrajectoryRecord>& records) {
  std::ostringstream out;
  out << "n,rep,z,y,n1,w1,w2,rho1_hat,rho2_hat,in_A_n\n";
  for (const auto& rec : records) {
    for (const auto& p : rec.grid) {
      out << p.n << ',' << rec.replication_index << ',' << format_double(p.z) << ','
          << format_double(p.y) << ',' << p.n1 << ',' << (p.w1 ? 1 : 0) << ',' << (p.w2 ? 1 : 0)
          << ',' << format_double(p.rho1_hat) << ',' << format_double(p.rho2_hat) << ','
          << (p.in_a_n ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

inline nlohmann::json crossing_json(const CrossingRecord& c) {
  nlohmann::json j;
  j["j"] = c.j;
  j["t"] = c.t_j == kNever ? nlohmann::json("inf") : nlohmann::json(c.t_j);
  j["tau"] = c.tau_j == kNever ? nlohmann::json("inf") : nlohmann::json(c.tau_j);
  j["d"] = c.d;
  j["u"] = c.u;
  return j;
}

inline std::string summary_json(const std::vector<TrajectoryRecord>& records) {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json r;
    r["rep"] = rec.replication_index;
    r["final_n"] = rec.final_state.n;
    r["final_z"] = rec.final_state.z;
    r["final_y"] = rec.final_state.y;
    r["final_n1"] = rec.final_state.n1;
    r["final_n2"] = rec.final_state.n2;
    r["reinforced_steps"] = rec.reinforced_steps;
    r["guard_violations"] = rec.guard_violations;
    r["growth_violations"] = rec.growth_violations;
    r["order_clamps"] = rec.order_clamps;
    r["m1_hat"] = rec.final_estimates.m1_hat;
    r["m2_hat"] = rec.final_estimates.m2_hat;
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto& c : rec.crossings) crossings.push_back(crossing_json(c));
    r["crossings"] = crossings;
    reps.push_back(r);
  }
  nlohmann::json j;
  j["replications"] = reps;
  return j.dump(2) + "\n";
}

inline std::string manifest_json(const Manifest& m) {
  nlohmann::json j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["replications"] = m.replications;
  j["tool_version"] = m.tool_version;
  j["wall_time_seconds"] = m.wall_time_seconds;  // outside the byte-identity contract
  return j.dump(2) + "\n";
}

}  // namespace urnlab
