// Deterministic batch Monte Carlo: replication r derives its streams from
// (seed, r) alone, results land in a slot keyed by r, so output bytes do
// not depend on scheduling or worker count.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "urnlab/config.hpp"
#include "urnlab/trajectory.hpp"

namespace urnlab {

struct Manifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::uint64_t replications = 0;
  std::string tool_version = kToolVersion;
  double wall_time_seconds = 0.0;  // excluded from the byte-identity contract
};

class BatchError : public std::runtime_error {
 public:
  explicit BatchError(const std::string& what) : std::runtime_error(what) {}
};

struct BatchResult {
  std::vector<TrajectoryRecord> records;  // index == replication_index
  Manifest manifest;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

inline BatchResult run_batch(const RunConfig& config_template, std::uint64_t replications,
                             unsigned threads = 0) {
  if (replications < 1) throw std::invalid_argument("run_batch: replications must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();

  BatchResult out;
  out.records.resize(replications);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), replications));

  std::atomic<std::uint64_t> next{0};
  std::mutex err_mu;
  std::string first_error;

  const auto work = [&]() {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1);
      if (r >= replications) return;
      {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error.empty()) return;  // batch already failed
      }
      try {
        RunConfig cfg = config_template;
        cfg.replication_index = r;
        out.records[r] = run_trajectory(cfg);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (first_error.empty()) {
          first_error = "replication " + std::to_string(r) + ": " + e.what();
        }
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (!first_error.empty()) {
    throw BatchError("batch aborted, partial results are non-authoritative: " + first_error);
  }

  out.manifest.config_hash = config_hash(config_template, replications);
  out.manifest.seed = config_template.seed;
  out.manifest.replications = replications;
  out.manifest.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace urnlab
