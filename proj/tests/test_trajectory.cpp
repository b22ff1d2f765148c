#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "oracle_helpers.hpp"
#include "urnlab/trajectory.hpp"

using namespace urnlab;

namespace {

RunConfig rru_point_config(double c, std::uint64_t horizon, std::uint64_t seed) {
  RunConfig cfg;
  cfg.model = ModelKind::rru();
  cfg.r1 = ReinforcementSpec::point_mass(c);
  cfg.r2 = ReinforcementSpec::point_mass(c);
  cfg.horizon = horizon;
  cfg.seed = seed;
  return cfg;
}

std::string fingerprint(const TrajectoryRecord& rec) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& p : rec.grid) {
    out << p.n << "," << p.z << "," << p.y << "," << p.n1 << "," << p.in_a_n << "," << p.w1 << ","
        << p.w2 << "," << p.rho1_hat << "," << p.rho2_hat << ";";
  }
  for (const auto& c : rec.crossings) out << c.j << ":" << c.t_j << ":" << c.tau_j << ";";
  out << rec.final_state.y1 << "|" << rec.final_state.y2 << "|" << rec.final_state.n1 << "|"
      << rec.final_state.n2;
  return out.str();
}

}  // namespace

TEST_CASE("RRU with equal point masses adds c per step") {
  const auto rec = run_trajectory(rru_point_config(1.5, 500, 3));
  CHECK(rec.final_state.y == doctest::Approx(2.0 + 500 * 1.5).epsilon(1e-12));
  CHECK(rec.final_state.n == 500);
  CHECK(rec.reinforced_steps == 500);
  // Y lower bound: y0 + a * (reinforced steps), exact up to accumulation.
  CHECK(rec.final_state.y >= 2.0 + 1.5 * 500 * (1.0 - 1e-12));
}

TEST_CASE("horizon zero records only the initial state") {
  auto cfg = rru_point_config(1.0, 0, 1);
  const auto rec = run_trajectory(cfg);
  REQUIRE(rec.grid.size() == 1);
  CHECK(rec.grid[0].n == 0);
  CHECK(rec.grid[0].z == 0.5);
  CHECK(rec.final_state.n == 0);
}

TEST_CASE("two-step tiny urn matches exhaustive enumeration") {
  oracle::TinyUrn tiny{1.0, 1.0, 1.0, 1.0};
  const auto dist = oracle::enumerate_z_distribution(tiny, 2);
  // 4 paths: Z in {3/4, 1/2, 1/4} with probabilities {1/3, 1/3, 1/3}.
  REQUIRE(dist.size() == 3);
  for (const auto& [key, p] : dist) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const int reps = 20000;
  std::map<std::int64_t, int> counts;
  auto cfg = rru_point_config(1.0, 2, 77);
  cfg.record_grid = {0, 2};
  for (int r = 0; r < reps; ++r) {
    cfg.replication_index = static_cast<std::uint64_t>(r);
    const auto rec = run_trajectory(cfg);
    counts[std::llround(rec.final_state.z * 1e12)]++;
  }
  for (const auto& [key, p] : dist) {
    const double freq = static_cast<double>(counts[key]) / reps;
    const double se = std::sqrt(p * (1.0 - p) / reps);
    CHECK(std::abs(freq - p) <= 4.0 * se);
  }
}

TEST_CASE("three-step MRRU tiny urn matches enumeration") {
  // Thresholds bind at z = 3/4 > rho1 = 0.7: indicator suppression paths.
  oracle::TinyUrn tiny{1.0, 1.0, 2.0, 1.0, 0.7, 0.3};
  const auto dist = oracle::enumerate_z_distribution(tiny, 3);
  double total = 0.0;
  for (const auto& [k, p] : dist) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  RunConfig cfg;
  cfg.model = ModelKind::mrru(0.7, 0.3);
  cfg.r1 = ReinforcementSpec::point_mass(2.0);
  cfg.r2 = ReinforcementSpec::point_mass(1.0);
  cfg.horizon = 3;
  cfg.seed = 1234;
  cfg.record_grid = {0, 3};
  const int reps = 20000;
  std::map<std::int64_t, int> counts;
  for (int r = 0; r < reps; ++r) {
    cfg.replication_index = static_cast<std::uint64_t>(r);
    counts[std::llround(run_trajectory(cfg).final_state.z * 1e12)]++;
  }
  for (const auto& [key, p] : dist) {
    const double freq = static_cast<double>(counts[key]) / reps;
    const double se = std::sqrt(p * (1.0 - p) / reps);
    CHECK(std::abs(freq - p) <= 4.0 * se + 1e-9);
  }
}

TEST_CASE("detect_crossings: short paths and edge cases") {
  const auto recs = detect_crossings({0.5, 0.7, 0.3}, 0.4, 0.6);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].j == 0);
  CHECK(recs[0].t_j == 1);
  CHECK(recs[0].tau_j == 2);

  CHECK(detect_crossings({0.1, 0.2, 0.3, 0.4}, 0.4, 0.6).empty());

  const auto open_ended = detect_crossings({0.5, 0.7, 0.5}, 0.4, 0.6);
  REQUIRE(open_ended.size() == 1);
  CHECK(open_ended[0].tau_j == kNever);

  CHECK_THROWS_AS(detect_crossings({0.5}, 0.6, 0.4), std::invalid_argument);
}

TEST_CASE("detect_crossings agrees with the naive double-loop scan") {
  rng::Stream s{rng::mix64(2024)};
  std::vector<double> path(10000);
  double z = 0.5;
  for (std::size_t i = 0; i < path.size(); ++i) {
    z += (s.unit_at(i) - 0.5) * 0.08;
    z = std::min(0.99, std::max(0.01, z));
    path[i] = z;
  }
  const auto fast = detect_crossings(path, 0.45, 0.55);
  const auto slow = oracle::naive_crossings(path, 0.45, 0.55);
  REQUIRE(fast.size() == slow.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    CHECK(fast[i].t_j == slow[i].t_j);
    CHECK(fast[i].tau_j == slow[i].tau_j);
  }
  CHECK(fast.size() > 3);  // the path actually oscillates
}

TEST_CASE("reproducibility: identical (seed, replication) gives identical records") {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::noisy_convergent(0.7, 0.3);
  cfg.r1 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.r2 = ReinforcementSpec::scaled_beta(1.0, 3.0, 2.0, 3.0);
  cfg.horizon = 2000;
  cfg.seed = 99;
  cfg.replication_index = 17;
  const auto a = run_trajectory(cfg);
  const auto b = run_trajectory(cfg);
  CHECK(fingerprint(a) == fingerprint(b));

  cfg.replication_index = 18;
  CHECK(fingerprint(run_trajectory(cfg)) != fingerprint(a));
}

TEST_CASE("recorded in_A_n bits are consistent with recorded z, y") {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::fixed(0.7, 0.3);
  cfg.r1 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.r2 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.horizon = 4096;
  cfg.seed = 5;
  cfg.a_n_alpha = 0.25;
  cfg.a_n_c = 1.0;
  const auto rec = run_trajectory(cfg);
  for (const auto& p : rec.grid) {
    const double margin = cfg.a_n_c * std::pow(p.y, -cfg.a_n_alpha);
    const bool expect = p.z > 0.3 + margin && p.z < 0.7 - margin;
    CHECK(p.in_a_n == expect);
  }
}

TEST_CASE("grid rows carry the thresholds and indicators that drive the next step") {
  RunConfig cfg;
  cfg.model = ModelKind::mrru(0.6, 0.4);
  cfg.r1 = ReinforcementSpec::point_mass(2.0);
  cfg.r2 = ReinforcementSpec::point_mass(1.0);
  cfg.horizon = 64;
  cfg.seed = 21;
  cfg.record_grid = linear_grid(64, 1);
  const auto rec = run_trajectory(cfg);
  REQUIRE(rec.grid.size() == 65);
  for (const auto& p : rec.grid) {
    CHECK(p.rho1_hat == 0.6);
    CHECK(p.rho2_hat == 0.4);
    CHECK(p.w1 == (p.z <= 0.6));
    CHECK(p.w2 == (p.z >= 0.4));
  }
}

TEST_CASE("expected Y increment respects its conditional lower bound") {
  // E[Y_i - Y_{i-1} | F] >= a min(y10,y20) / (y0 + (i-1) b); checked
  // empirically at a handful of i with a 4 SE margin.
  RunConfig cfg;
  cfg.model = ModelKind::mrru(0.7, 0.3);
  cfg.r1 = ReinforcementSpec::uniform_interval(1.0, 2.0);
  cfg.r2 = ReinforcementSpec::uniform_interval(1.0, 2.0);
  cfg.y1_0 = 1.0;
  cfg.y2_0 = 3.0;
  cfg.horizon = 32;
  cfg.seed = 41;
  cfg.record_grid = linear_grid(32, 1);
  const int reps = 4000;
  std::vector<std::vector<double>> increments(33);
  for (int r = 0; r < reps; ++r) {
    cfg.replication_index = static_cast<std::uint64_t>(r);
    const auto rec = run_trajectory(cfg);
    for (std::size_t i = 1; i < rec.grid.size(); ++i) {
      increments[i].push_back(rec.grid[i].y - rec.grid[i - 1].y);
    }
  }
  for (std::uint64_t i : {1, 8, 32}) {
    double sum = 0, sum_sq = 0;
    for (double v : increments[i]) {
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum_sq / reps - mean * mean) / reps);
    const double bound =
        1.0 * std::min(cfg.y1_0, cfg.y2_0) / (cfg.y1_0 + cfg.y2_0 + double(i - 1) * 2.0);
    CHECK(mean >= bound - 4.0 * se);
  }
}

TEST_CASE("coupled run with never-binding thresholds never diverges") {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::fixed(1.0, 0.0);
  cfg.r1 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.r2 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.horizon = 1500;
  cfg.seed = 7;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    cfg.replication_index = rep;
    const auto res = run_coupled(cfg, 100);
    CHECK(!res.divergence_step.has_value());
    CHECK(res.arru.final_state.same_composition(res.rru.final_state));
    CHECK(res.arru.final_state.z == res.rru.final_state.z);
  }
}

TEST_CASE("coupled trajectories agree while the ARRU stays inside its thresholds") {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::fixed(0.62, 0.38);
  cfg.r1 = ReinforcementSpec::point_mass(2.0);
  cfg.r2 = ReinforcementSpec::point_mass(1.0);
  cfg.horizon = 400;
  cfg.seed = 11;
  cfg.record_grid = linear_grid(400, 1);
  const std::uint64_t n0 = 50;
  int diverged_runs = 0;
  for (std::uint64_t rep = 0; rep < 40; ++rep) {
    cfg.replication_index = rep;
    const auto res = run_coupled(cfg, n0);
    if (res.divergence_step.has_value()) {
      ++diverged_runs;
      REQUIRE(res.first_suppression_step.has_value());
      // Divergence only at suppression, never before.
      CHECK(*res.divergence_step >= *res.first_suppression_step);
    }
    // Exact agreement through every step strictly inside the thresholds.
    for (const auto& p : res.arru.grid) {
      if (p.n <= n0) continue;
      if (res.divergence_step && p.n >= *res.divergence_step) break;
      const auto* q = res.rru.at_step(p.n);
      REQUIRE(q != nullptr);
      CHECK(q->z == p.z);
      CHECK(q->y == p.y);
    }
  }
  CHECK(diverged_runs > 0);  // the tight band does get crossed
}

TEST_CASE("coupled divergence step matches the scalar replay oracle") {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::fixed(0.62, 0.38);
  cfg.r1 = ReinforcementSpec::uniform_interval(1.5, 2.5);
  cfg.r2 = ReinforcementSpec::point_mass(1.0);
  cfg.horizon = 600;
  cfg.seed = 23;
  const std::uint64_t n0 = 30;
  for (std::uint64_t rep = 0; rep < 25; ++rep) {
    cfg.replication_index = rep;
    const auto res = run_coupled(cfg, n0);
    const auto ref = oracle::replay_coupled_fixed(cfg, n0, 0.62, 0.38);
    const std::uint64_t got = res.divergence_step.value_or(kNever);
    CHECK(got == ref.divergence);
    CHECK(res.arru.final_state.y1 == ref.arru_y1);
    CHECK(res.arru.final_state.y2 == ref.arru_y2);
    CHECK(res.rru.final_state.y1 == ref.rru_y1);
    CHECK(res.rru.final_state.y2 == ref.rru_y2);
  }
}

TEST_CASE("geometric up-crossing growth holds along oscillating runs") {
  RunConfig cfg;
  cfg.model = ModelKind::mrru(0.55, 0.45);  // tight band forces oscillation
  cfg.r1 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.r2 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.horizon = 20000;
  cfg.crossing_d = 0.48;
  cfg.crossing_u = 0.52;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    cfg.seed = 1000 + rep;
    const auto rec = run_trajectory(cfg);
    CHECK(rec.growth_violations == 0);
    CHECK(rec.guard_violations == 0);
  }
}

TEST_CASE("run_coupled validates n0") {
  auto cfg = rru_point_config(1.0, 10, 1);
  CHECK_THROWS_AS(run_coupled(cfg, 10), std::invalid_argument);
}

TEST_CASE("crossing records alternate strictly: t_j < tau_j < t_{j+1}") {
  rng::Stream s{rng::mix64(404)};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> path(800);
    double z = 0.5;
    for (std::size_t i = 0; i < path.size(); ++i) {
      z += (s.unit_at(trial * 100000 + i) - 0.5) * 0.2;
      z = std::min(0.95, std::max(0.05, z));
      path[i] = z;
    }
    const auto recs = detect_crossings(path, 0.42, 0.58);
    for (std::size_t j = 0; j < recs.size(); ++j) {
      CHECK(recs[j].j == j);
      if (recs[j].tau_j != kNever) {
        CHECK(recs[j].t_j < recs[j].tau_j);
        CHECK(path[recs[j].t_j] > 0.58);
        CHECK(path[recs[j].tau_j] < 0.42);
        if (j + 1 < recs.size()) CHECK(recs[j].tau_j < recs[j + 1].t_j);
      } else {
        CHECK(j + 1 == recs.size());
      }
    }
  }
}

TEST_CASE("coupling invariants hold under random threshold policies too") {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::noisy_convergent(0.58, 0.42);
  cfg.r1 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.r2 = ReinforcementSpec::uniform_interval(1.0, 3.0);
  cfg.horizon = 500;
  cfg.seed = 90;
  cfg.record_grid = linear_grid(500, 1);
  const std::uint64_t n0 = 40;
  int diverged = 0;
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    cfg.replication_index = rep;
    const auto res = run_coupled(cfg, n0);
    if (res.divergence_step) {
      ++diverged;
      REQUIRE(res.first_suppression_step.has_value());
      CHECK(*res.divergence_step >= *res.first_suppression_step);
    }
    for (const auto& p : res.arru.grid) {
      if (p.n <= n0) continue;
      if (res.divergence_step && p.n >= *res.divergence_step) break;
      const auto* q = res.rru.at_step(p.n);
      REQUIRE(q != nullptr);
      CHECK(q->z == p.z);
    }
  }
  CHECK(diverged > 0);
}
