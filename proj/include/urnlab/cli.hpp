// Command implementations behind the CLI front end. They are plain
// functions returning process exit codes so tests can drive them
// in-process.
//
// Exit codes: 0 pass, 1 verification criteria failed, 2 usage or malformed
// config, 3 runtime abort, 4 suite error.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "urnlab/batch.hpp"
#include "urnlab/config.hpp"
#include "urnlab/io.hpp"
#include "urnlab/verify.hpp"

namespace urnlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCriteriaFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitSuiteError = 4;

// --threads > URNLAB_THREADS > hardware concurrency.
inline unsigned resolve_thread_request(unsigned flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("URNLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;  // run_batch resolves to hardware concurrency
}

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replications;
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> multiplier;
  std::optional<std::string> grid;
  unsigned threads = 0;
};

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& err = std::cerr) {
  KeyValueConfig kv;
  std::uint64_t reps = 0;
  RunConfig cfg = RunConfig{};
  try {
    kv = KeyValueConfig::parse_file(opt.config_path);
    if (opt.seed) kv.set("run.seed", std::to_string(*opt.seed));
    if (opt.horizon) kv.set("run.horizon", std::to_string(*opt.horizon));
    if (opt.multiplier) kv.set("run.proxy_multiplier", std::to_string(*opt.multiplier));
    if (opt.grid) kv.set("run.grid", *opt.grid);
    if (opt.replications) kv.set("run.replications", std::to_string(*opt.replications));
    reps = kv.has("run.replications") ? kv.get_u64("run.replications") : 1;
    if (reps == 0) {
      err << "urnlab: --reps must be >= 1\n";
      return kExitUsage;
    }
    cfg = load_run_config(kv);
  } catch (const std::exception& e) {
    err << "urnlab: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const auto batch = run_batch(cfg, reps, resolve_thread_request(opt.threads));
    const std::filesystem::path out(opt.out_dir);
    std::filesystem::create_directories(out);
    atomic_write(out / "trajectories.csv", trajectories_csv(batch.records));
    atomic_write(out / "summary.json", summary_json(batch.records));
    atomic_write(out / "manifest.json", manifest_json(batch.manifest));
    return kExitPass;
  } catch (const std::exception& e) {
    err << "urnlab: runtime abort: " << e.what() << "\n";
    return kExitRuntime;
  }
}

struct VerifyOptions {
  std::string acceptance_path;
  std::string suite = "all";
  std::optional<std::uint64_t> seed;
  std::string out_dir;  // empty: report to stdout only
  unsigned threads = 0;
};

inline nlohmann::json report_json(const verify::Report& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : report.suites) {
    for (const auto& r : s.rows) {
      nlohmann::json row;
      row["suite"] = r.suite;
      row["criterion"] = r.name;
      row["observed"] = r.observed;
      if (r.comparison != "report") {
        row["threshold"] = r.threshold;
        row["margin"] = r.margin();
      }
      row["comparison"] = r.comparison;
      row["verdict"] = r.informational ? "informational" : (r.pass ? "pass" : "fail");
      rows.push_back(row);
    }
  }
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["acceptance_hash"] = report.acceptance_hash;
  j["seed"] = report.seed;
  j["rows"] = rows;
  j["overall"] = report.all_pass() ? "pass" : "fail";
  return j;
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  std::vector<std::string> ids;
  std::optional<verify::Acceptance> acc;
  try {
    acc = verify::Acceptance::load_file(opt.acceptance_path);
    if (opt.suite == "all") {
      ids = verify::all_suite_ids();
    } else {
      const auto& known = verify::all_suite_ids();
      if (std::find(known.begin(), known.end(), opt.suite) == known.end()) {
        err << "urnlab: unknown suite id: " << opt.suite << "\n";
        return kExitUsage;
      }
      ids = {opt.suite};
    }
  } catch (const std::exception& e) {
    err << "urnlab: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const std::uint64_t seed =
        opt.seed ? *opt.seed : static_cast<std::uint64_t>(acc->integer_or("global.seed", 1));
    const auto report = verify::run_suites(ids, *acc, seed, resolve_thread_request(opt.threads));
    out << report.to_text();
    if (!opt.out_dir.empty()) {
      const std::filesystem::path dir(opt.out_dir);
      std::filesystem::create_directories(dir);
      atomic_write(dir / "report.txt", report.to_text());
      atomic_write(dir / "report.json", report_json(report).dump(2) + "\n");
    }
    return report.all_pass() ? kExitPass : kExitCriteriaFailed;
  } catch (const verify::SuiteError& e) {
    err << "urnlab: suite error: " << e.what() << "\n";
    return kExitSuiteError;
  } catch (const BatchError& e) {
    err << "urnlab: suite error: " << e.what() << "\n";
    return kExitSuiteError;
  } catch (const std::exception& e) {
    err << "urnlab: runtime abort: " << e.what() << "\n";
    return kExitRuntime;
  }
}

struct SweepOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replications;
  unsigned threads = 0;
};

namespace detail {

struct SweepAxes {
  std::vector<double> horizon;
  std::vector<double> mean_gap;
  std::vector<double> a_n_alpha;
  std::vector<double> a_n_c;

  std::size_t product() const {
    const auto n = [](const std::vector<double>& v) { return v.empty() ? 1 : v.size(); };
    return n(horizon) * n(mean_gap) * n(a_n_alpha) * n(a_n_c);
  }
};

inline std::vector<double> axis_or_empty(const KeyValueConfig& kv, const std::string& key) {
  return kv.has(key) ? kv.get_double_list(key) : std::vector<double>{};
}

}  // namespace detail

// Cartesian-product batches over the declared axes; one output row per
// (axis point, statistic).
inline int cmd_sweep(const SweepOptions& opt, std::ostream& err = std::cerr) {
  KeyValueConfig kv;
  RunConfig base;
  detail::SweepAxes axes;
  std::uint64_t reps = 1;
  std::size_t cap = 256;
  try {
    kv = KeyValueConfig::parse_file(opt.config_path);
    if (opt.seed) kv.set("run.seed", std::to_string(*opt.seed));
    if (opt.replications) kv.set("run.replications", std::to_string(*opt.replications));
    base = load_run_config(kv);
    reps = kv.has("run.replications") ? kv.get_u64("run.replications") : 1;
    if (reps == 0) {
      err << "urnlab: replications must be >= 1\n";
      return kExitUsage;
    }
    axes.horizon = detail::axis_or_empty(kv, "sweep.horizon");
    axes.mean_gap = detail::axis_or_empty(kv, "sweep.mean_gap");
    axes.a_n_alpha = detail::axis_or_empty(kv, "sweep.a_n_alpha");
    axes.a_n_c = detail::axis_or_empty(kv, "sweep.a_n_c");
    cap = static_cast<std::size_t>(kv.has("sweep.cap") ? kv.get_u64("sweep.cap") : 256);
    if (axes.product() > cap) {
      err << "urnlab: sweep of " << axes.product() << " points exceeds cap " << cap << "\n";
      return kExitUsage;
    }
  } catch (const std::exception& e) {
    err << "urnlab: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::ostringstream csv;
    csv << "horizon,mean_gap,a_n_alpha,a_n_c,statistic,value\n";
    const auto points = [](const std::vector<double>& v) {
      return v.empty() ? std::vector<double>{std::nan("")} : v;
    };
    for (double h : points(axes.horizon)) {
      for (double gap : points(axes.mean_gap)) {
        for (double alpha : points(axes.a_n_alpha)) {
          for (double c : points(axes.a_n_c)) {
            RunConfig cfg = base;
            if (!std::isnan(h)) {
              cfg.horizon = static_cast<std::uint64_t>(h);
              cfg.record_grid = pow2_grid(cfg.total_steps());
            }
            if (!std::isnan(gap)) {
              // Shift r1 so mean(r1) - mean(r2) equals the axis value.
              cfg.r1 = base.r1.shifted(gap - (base.r1.mean() - base.r2.mean()));
            }
            if (!std::isnan(alpha)) cfg.a_n_alpha = alpha;
            if (!std::isnan(c)) cfg.a_n_c = c;
            const auto batch = run_batch(cfg, reps, resolve_thread_request(opt.threads));

            const double rho1 = cfg.effective_policy().rho1_limit;
            double dist = 0.0, y_over_n = 0.0, z_mean = 0.0;
            for (const auto& rec : batch.records) {
              dist += std::abs(rec.final_state.z - rho1);
              y_over_n += rec.final_state.y / static_cast<double>(rec.final_state.n);
              z_mean += rec.final_state.z;
            }
            const double n_recs = static_cast<double>(batch.records.size());
            const auto emit = [&](const std::string& stat, double value) {
              const auto cell = [](double v) {
                return std::isnan(v) ? std::string("-") : format_double(v);
              };
              csv << cell(h) << ',' << cell(gap) << ',' << cell(alpha) << ',' << cell(c) << ','
                  << stat << ',' << format_double(value) << '\n';
            };
            emit("final_mean_abs_dist_rho1", dist / n_recs);
            emit("final_mean_y_over_n", y_over_n / n_recs);
            emit("final_mean_z", z_mean / n_recs);
          }
        }
      }
    }
    const std::filesystem::path out(opt.out_dir);
    std::filesystem::create_directories(out);
    atomic_write(out / "results.csv", csv.str());
    return kExitPass;
  } catch (const std::exception& e) {
    err << "urnlab: runtime abort: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace urnlab::cli
