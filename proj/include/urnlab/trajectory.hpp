// Trajectory execution: single runs, coupled ARRU/RRU runs sharing uniform
// and reinforcement streams, online first-passage detection, and per-step
// guard assertions.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnlab/reinforcement.hpp"
#include "urnlab/rng.hpp"
#include "urnlab/thresholds.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

struct CrossingRecord {
  std::uint64_t j = 0;
  std::uint64_t t_j = kNever;    // first up-cross of u after tau_{j-1}
  std::uint64_t tau_j = kNever;  // first down-cross of d after t_j
  double d = 0.0;
  double u = 0.0;
};

struct RunConfig {
  ModelKind model = ModelKind::rru();
  ReinforcementSpec r1 = ReinforcementSpec::point_mass(1.0);
  ReinforcementSpec r2 = ReinforcementSpec::point_mass(1.0);
  ThresholdPolicy policy = ThresholdPolicy::fixed(1.0, 0.0);
  double y1_0 = 1.0;
  double y2_0 = 1.0;
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> record_grid;  // empty -> pow2 grid
  double a_n_alpha = 0.25;
  double a_n_c = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t replication_index = 0;
  // Plumbing beyond the core contract:
  std::uint64_t proxy_multiplier = 1;  // >= 2 extends the run for Z-infinity proxies
  double guard_epsilon = 0.05;         // eps at which the step-bound guard is asserted
  double crossing_d = 0.4;             // (d,u) pair for first-passage diagnostics
  double crossing_u = 0.6;

  std::uint64_t total_steps() const {
    return horizon * std::max<std::uint64_t>(1, proxy_multiplier);
  }

  // The policy actually driving indicators: RRU -> never-binding fixed
  // (1,0); MRRU -> its fixed pair; ARRU -> the configured policy.
  ThresholdPolicy effective_policy() const {
    switch (model.tag) {
      case ModelTag::kRru: return ThresholdPolicy::fixed(1.0, 0.0);
      case ModelTag::kMrru: return ThresholdPolicy::fixed(model.rho1, model.rho2);
      case ModelTag::kArru: return policy;
    }
    throw std::logic_error("unreachable model tag");
  }

  void validate() const {
    if (proxy_multiplier < 1) throw std::invalid_argument("proxy_multiplier must be >= 1");
    if (!(a_n_alpha > 0.0 && a_n_alpha < 0.5)) {
      throw std::invalid_argument("a_n_alpha must lie in (0, 1/2)");
    }
    if (!(a_n_c > 0.0)) throw std::invalid_argument("a_n_c must be > 0");
    if (!(crossing_d > 0.0 && crossing_d < crossing_u && crossing_u < 1.0)) {
      throw std::invalid_argument("crossing pair must satisfy 0 < d < u < 1");
    }
    if (!(guard_epsilon > 0.0 && guard_epsilon < 1.0)) {
      throw std::invalid_argument("guard_epsilon must lie in (0,1)");
    }
    for (std::uint64_t g : record_grid) {
      if (g > total_steps()) throw std::invalid_argument("record_grid entry beyond final step");
    }
  }
};

// Powers of two up to last, plus 0 and last itself.
inline std::vector<std::uint64_t> pow2_grid(std::uint64_t last) {
  std::vector<std::uint64_t> g{0};
  for (std::uint64_t n = 1; n < last && n != 0; n *= 2) g.push_back(n);
  if (last > 0) g.push_back(last);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

inline std::vector<std::uint64_t> linear_grid(std::uint64_t last, std::uint64_t spacing) {
  if (spacing == 0) throw std::invalid_argument("linear grid spacing must be >= 1");
  std::vector<std::uint64_t> g;
  for (std::uint64_t n = 0; n <= last; n += spacing) g.push_back(n);
  if (g.empty() || g.back() != last) g.push_back(last);
  return g;
}

struct GridPoint {
  std::uint64_t n = 0;
  double z = 0.0;
  double y = 0.0;
  std::uint64_t n1 = 0;
  bool in_a_n = false;
  bool w1 = true;
  bool w2 = true;
  double rho1_hat = 1.0;
  double rho2_hat = 0.0;
};

struct TrajectoryRecord {
  std::vector<GridPoint> grid;
  std::vector<CrossingRecord> crossings;
  std::uint64_t guard_violations = 0;   // engine throws instead; stays 0
  std::uint64_t growth_violations = 0;  // geometric up-crossing growth failures
  std::uint64_t order_clamps = 0;       // threshold pairs fixed up to rho2 <= rho1
  std::uint64_t reinforced_steps = 0;   // steps whose drawn color was reinforced
  UrnState final_state;
  AdaptiveEstimates final_estimates;
  std::uint64_t horizon = 0;           // statistic horizon
  std::uint64_t extended_horizon = 0;  // proxy horizon (== horizon when not extended)
  std::uint64_t replication_index = 0;

  const GridPoint* at_step(std::uint64_t n) const {
    const auto it = std::lower_bound(grid.begin(), grid.end(), n,
                                     [](const GridPoint& p, std::uint64_t v) { return p.n < v; });
    return (it != grid.end() && it->n == n) ? &*it : nullptr;
  }

  const GridPoint& require_step(std::uint64_t n) const {
    const GridPoint* p = at_step(n);
    if (!p) throw std::invalid_argument("record grid has no row at n=" + std::to_string(n));
    return *p;
  }
};

namespace detail {

// Alternating first-passage scan with strict inequalities (> u, then
// < d). When given real masses it also enforces the geometric lower
// bound on Y between consecutive up-crossings.
class CrossingScan {
 public:
  CrossingScan(double d, double u, bool check_growth = true)
      : d_(d), u_(u), check_growth_(check_growth) {
    growth_ratio_ = u * (1.0 - d) / (d * (1.0 - u));
  }

  void observe(std::uint64_t n, double z, double y) {
    if (waiting_up_) {
      if (z > u_) {
        CrossingRecord rec;
        rec.j = records_.size();
        rec.t_j = n;
        rec.d = d_;
        rec.u = u_;
        // FP slack: the bound is exact in real arithmetic.
        if (check_growth_ && !records_.empty() &&
            y < growth_ratio_ * y_at_last_up_ * (1.0 - 1e-12)) {
          ++growth_violations_;
        }
        y_at_last_up_ = y;
        records_.push_back(rec);
        waiting_up_ = false;
      }
    } else {
      if (z < d_) {
        records_.back().tau_j = n;
        waiting_up_ = true;
      }
    }
  }

  std::vector<CrossingRecord> take_records() { return std::move(records_); }
  std::uint64_t growth_violations() const { return growth_violations_; }

 private:
  double d_;
  double u_;
  bool check_growth_;
  double growth_ratio_;
  bool waiting_up_ = true;
  double y_at_last_up_ = 0.0;
  std::vector<CrossingRecord> records_;
  std::uint64_t growth_violations_ = 0;
};

inline bool in_a_n(double z, double y, const ThresholdPolicy& policy, double alpha, double c) {
  const double margin = c * std::pow(y, -alpha);
  return z > policy.rho2_limit + margin && z < policy.rho1_limit - margin;
}

}  // namespace detail

// Post-hoc scan of a stored proportion path; path[i] is Z_i.
inline std::vector<CrossingRecord> detect_crossings(const std::vector<double>& z_path, double d,
                                                    double u) {
  if (!(d > 0.0 && d < u && u < 1.0)) throw std::invalid_argument("detect_crossings: need 0 < d < u < 1");
  detail::CrossingScan scan(d, u, /*check_growth=*/false);
  for (std::size_t i = 0; i < z_path.size(); ++i) {
    scan.observe(static_cast<std::uint64_t>(i), z_path[i], 1.0);
  }
  return scan.take_records();
}

namespace detail {

// One process being advanced inside the step loop.
struct LiveProcess {
  UrnState state;
  AdaptiveEstimates estimates;
  ThresholdPolicy policy;
  CrossingScan scan;
  std::vector<GridPoint> grid_rows;
  std::uint64_t order_clamps = 0;
  std::uint64_t reinforced_steps = 0;

  LiveProcess(const RunConfig& cfg, const ThresholdPolicy& pol, UrnState init)
      : state(init),
        estimates(AdaptiveEstimates::prior(0.5 * (cfg.r1.support_low() + cfg.r1.support_high()),
                                           0.5 * (cfg.r2.support_low() + cfg.r2.support_high()))),
        policy(pol),
        scan(cfg.crossing_d, cfg.crossing_u) {}
};

// Advances proc through the transition n -> n+1 (absolute step index
// `step_idx` = n+1), recording a grid row at n first when requested.
inline void advance(LiveProcess& proc, const RunConfig& cfg, const rng::ReplicationStreams& streams,
                    bool record_pre_row, double b_max, double u, double d1, double d2) {
  const std::uint64_t n = proc.state.n;
  const ThresholdPair pair = emit(proc.policy, proc.estimates, n, streams.policy_aux_at(n));
  if (pair.clamped) ++proc.order_clamps;
  const auto [w1, w2] = indicators(proc.state.z, pair.rho1_hat, pair.rho2_hat);
  if (record_pre_row) {
    GridPoint row;
    row.n = n;
    row.z = proc.state.z;
    row.y = proc.state.y;
    row.n1 = proc.state.n1;
    row.in_a_n = in_a_n(proc.state.z, proc.state.y, proc.policy, cfg.a_n_alpha, cfg.a_n_c);
    row.w1 = w1;
    row.w2 = w2;
    row.rho1_hat = pair.rho1_hat;
    row.rho2_hat = pair.rho2_hat;
    proc.grid_rows.push_back(row);
  }
  const bool guard = step_bound_guard(proc.state.y, b_max, cfg.guard_epsilon);
  const double z_before = proc.state.z;
  proc.state = step(proc.state, w1, w2, u, d1, d2);
  if (!std::isfinite(proc.state.z) || !std::isfinite(proc.state.y)) {
    throw std::runtime_error("non-finite urn state at step " + std::to_string(proc.state.n));
  }
  if (guard && !(std::abs(proc.state.z - z_before) < cfg.guard_epsilon)) {
    throw std::logic_error("step-bound guard violated at step " + std::to_string(proc.state.n));
  }
  proc.scan.observe(proc.state.n, proc.state.z, proc.state.y);
}

}  // namespace detail

// Executes cfg.total_steps() transitions, recording diagnostics at grid
// points. Grid rows at n carry the thresholds and indicators that drive
// the n -> n+1 transition.
inline TrajectoryRecord run_trajectory(const RunConfig& cfg) {
  cfg.validate();
  const std::uint64_t last = cfg.total_steps();
  std::vector<std::uint64_t> grid = cfg.record_grid.empty() ? pow2_grid(last) : cfg.record_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto streams = rng::ReplicationStreams::make(cfg.seed, cfg.replication_index);
  const ThresholdPolicy pol = cfg.effective_policy();
  const double b_max = std::max(cfg.r1.support_high(), cfg.r2.support_high());

  detail::LiveProcess proc(cfg, pol, UrnState::initial(cfg.y1_0, cfg.y2_0));
  proc.scan.observe(0, proc.state.z, proc.state.y);

  std::size_t next_grid = 0;
  for (std::uint64_t step_idx = 1; step_idx <= last; ++step_idx) {
    const std::uint64_t n = proc.state.n;
    const bool record = next_grid < grid.size() && grid[next_grid] == n;
    if (record) ++next_grid;

    const double u = streams.color_uniform_at(step_idx);
    auto red_seq = streams.reinforce_red_at(step_idx);
    auto white_seq = streams.reinforce_white_at(step_idx);
    const double d1 = cfg.r1.sample(red_seq);
    const double d2 = cfg.r2.sample(white_seq);

    const bool drew_red = (u <= proc.state.z);
    detail::advance(proc, cfg, streams, record, b_max, u, d1, d2);

    // Estimator update only when the reinforcement was actually applied.
    if (drew_red && proc.state.last_w1) {
      proc.estimates = update_estimates(proc.estimates, Color::kRed, d1);
      ++proc.reinforced_steps;
    } else if (!drew_red && proc.state.last_w2) {
      proc.estimates = update_estimates(proc.estimates, Color::kWhite, d2);
      ++proc.reinforced_steps;
    }
  }

  // Final grid row, if requested, with the thresholds F_last would emit.
  if (next_grid < grid.size() && grid[next_grid] == last) {
    const ThresholdPair pair = emit(pol, proc.estimates, last, streams.policy_aux_at(last));
    const auto [w1, w2] = indicators(proc.state.z, pair.rho1_hat, pair.rho2_hat);
    GridPoint row;
    row.n = last;
    row.z = proc.state.z;
    row.y = proc.state.y;
    row.n1 = proc.state.n1;
    row.in_a_n = detail::in_a_n(proc.state.z, proc.state.y, pol, cfg.a_n_alpha, cfg.a_n_c);
    row.w1 = w1;
    row.w2 = w2;
    row.rho1_hat = pair.rho1_hat;
    row.rho2_hat = pair.rho2_hat;
    proc.grid_rows.push_back(row);
  }

  TrajectoryRecord rec;
  rec.grid = std::move(proc.grid_rows);
  rec.crossings = proc.scan.take_records();
  rec.growth_violations = proc.scan.growth_violations();
  rec.order_clamps = proc.order_clamps;
  rec.reinforced_steps = proc.reinforced_steps;
  rec.final_state = proc.state;
  rec.final_estimates = proc.estimates;
  rec.horizon = cfg.horizon;
  rec.extended_horizon = last;
  rec.replication_index = cfg.replication_index;
  return rec;
}

struct CoupledResult {
  TrajectoryRecord arru;
  TrajectoryRecord rru;
  std::optional<std::uint64_t> divergence_step;        // absolute step index, or none
  std::optional<std::uint64_t> first_suppression_step; // first post-n0 step with an indicator 0
};

// Runs the ARRU to n0, forks an RRU from its composition there, and drives
// both with the same color uniforms and reinforcement draws thereafter.
inline CoupledResult run_coupled(const RunConfig& cfg, std::uint64_t n0) {
  cfg.validate();
  const std::uint64_t last = cfg.total_steps();
  if (n0 >= last) throw std::invalid_argument("run_coupled: n0 must be below the horizon");

  std::vector<std::uint64_t> grid = cfg.record_grid.empty() ? pow2_grid(last) : cfg.record_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const auto on_grid = [&grid](std::uint64_t n) {
    return std::binary_search(grid.begin(), grid.end(), n);
  };

  const auto streams = rng::ReplicationStreams::make(cfg.seed, cfg.replication_index);
  const ThresholdPolicy pol = cfg.effective_policy();
  const ThresholdPolicy rru_pol = ThresholdPolicy::fixed(1.0, 0.0);
  const double b_max = std::max(cfg.r1.support_high(), cfg.r2.support_high());

  detail::LiveProcess arru(cfg, pol, UrnState::initial(cfg.y1_0, cfg.y2_0));
  arru.scan.observe(0, arru.state.z, arru.state.y);

  std::optional<detail::LiveProcess> rru;
  std::optional<std::uint64_t> divergence;
  std::optional<std::uint64_t> first_suppression;

  for (std::uint64_t step_idx = 1; step_idx <= last; ++step_idx) {
    if (!rru && arru.state.n == n0) {
      rru.emplace(cfg, rru_pol, arru.state);
      rru->scan.observe(arru.state.n, arru.state.z, arru.state.y);
    }
    const double u = streams.color_uniform_at(step_idx);
    auto red_seq = streams.reinforce_red_at(step_idx);
    auto white_seq = streams.reinforce_white_at(step_idx);
    const double d1 = cfg.r1.sample(red_seq);
    const double d2 = cfg.r2.sample(white_seq);
    const bool record = on_grid(arru.state.n);

    const bool arru_drew_red = (u <= arru.state.z);
    detail::advance(arru, cfg, streams, record, b_max, u, d1, d2);
    if (arru_drew_red && arru.state.last_w1) {
      arru.estimates = update_estimates(arru.estimates, Color::kRed, d1);
      ++arru.reinforced_steps;
    } else if (!arru_drew_red && arru.state.last_w2) {
      arru.estimates = update_estimates(arru.estimates, Color::kWhite, d2);
      ++arru.reinforced_steps;
    }
    if (rru && !first_suppression && (!arru.state.last_w1 || !arru.state.last_w2)) {
      first_suppression = arru.state.n;
    }

    if (rru) {
      const bool rru_drew_red = (u <= rru->state.z);
      detail::advance(*rru, cfg, streams, record, b_max, u, d1, d2);
      if (rru_drew_red) {
        rru->estimates = update_estimates(rru->estimates, Color::kRed, d1);
        ++rru->reinforced_steps;
      } else {
        rru->estimates = update_estimates(rru->estimates, Color::kWhite, d2);
        ++rru->reinforced_steps;
      }
      if (!divergence && !arru.state.same_composition(rru->state)) {
        divergence = arru.state.n;
      }
    }
  }

  const auto finish = [&](detail::LiveProcess& proc, const ThresholdPolicy& p) {
    if (on_grid(last)) {
      const ThresholdPair pair = emit(p, proc.estimates, last, streams.policy_aux_at(last));
      const auto [w1, w2] = indicators(proc.state.z, pair.rho1_hat, pair.rho2_hat);
      GridPoint row;
      row.n = last;
      row.z = proc.state.z;
      row.y = proc.state.y;
      row.n1 = proc.state.n1;
      row.in_a_n = detail::in_a_n(proc.state.z, proc.state.y, p, cfg.a_n_alpha, cfg.a_n_c);
      row.w1 = w1;
      row.w2 = w2;
      row.rho1_hat = pair.rho1_hat;
      row.rho2_hat = pair.rho2_hat;
      proc.grid_rows.push_back(row);
    }
    TrajectoryRecord rec;
    rec.grid = std::move(proc.grid_rows);
    rec.crossings = proc.scan.take_records();
    rec.growth_violations = proc.scan.growth_violations();
    rec.order_clamps = proc.order_clamps;
    rec.reinforced_steps = proc.reinforced_steps;
    rec.final_state = proc.state;
    rec.final_estimates = proc.estimates;
    rec.horizon = cfg.horizon;
    rec.extended_horizon = last;
    rec.replication_index = cfg.replication_index;
    return rec;
  };

  CoupledResult out;
  out.arru = finish(arru, pol);
  if (!rru) throw std::logic_error("run_coupled: fork point never reached");
  out.rru = finish(*rru, rru_pol);
  out.divergence_step = divergence;
  out.first_suppression_step = first_suppression;
  return out;
}

}  // namespace urnlab
