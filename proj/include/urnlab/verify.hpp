// Theorem-to-test orchestration: named suites T1-T10 bind run
// configurations, estimators and pre-registered thresholds from the
// acceptance file into a deterministic verdict report. Thresholds are pilot
// artifacts read from the file, never tuned here.
//
//   T1  weak consistency under in-probability thresholds
//   T2  strong consistency under a.s.-convergent adaptive thresholds
//   T3  Y_n / n -> m* and estimator consistency
//   T4  no atoms of Z-infinity inside (rho2, rho1)
//   T5  RRU CLT for the sampled fraction, studentized by Sigma
//   T6  ARRU CLT restricted to the A_n events
//   T7  proportion CLT studentized by Sigma_Z
//   T8  harmonic-moment plateaus
//   T9  negative drift of Delta_n at linearly increasing times
//   T10 exact ARRU/RRU coupling

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnlab/batch.hpp"
#include "urnlab/config.hpp"
#include "urnlab/stats.hpp"

namespace urnlab::verify {

struct CriterionRow {
  std::string suite;
  std::string name;
  double observed = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=", ">=", "==", "report"
  bool pass = true;
  bool informational = false;

  double margin() const {
    if (comparison == "<=") return threshold - observed;
    if (comparison == ">=") return observed - threshold;
    return 0.0;
  }
};

struct SuiteReport {
  std::string suite;
  std::vector<CriterionRow> rows;

  bool pass() const {
    for (const auto& r : rows) {
      if (!r.informational && !r.pass) return false;
    }
    return true;
  }
};

struct Report {
  std::string acceptance_hash;
  std::uint64_t seed = 0;
  std::vector<SuiteReport> suites;

  bool all_pass() const {
    for (const auto& s : suites) {
      if (!s.pass()) return false;
    }
    return true;
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "tool=" << kToolVersion << " acceptance=" << acceptance_hash << " seed=" << seed
        << "\n";
    for (const auto& s : suites) {
      for (const auto& r : s.rows) {
        out << "suite=" << r.suite << " criterion=" << r.name
            << " observed=" << format_double(r.observed);
        if (r.comparison == "report") {
          out << " threshold=none comparison=report";
        } else {
          out << " threshold=" << format_double(r.threshold) << " comparison=" << r.comparison
              << " margin=" << format_double(r.margin());
        }
        out << " verdict=" << (r.informational ? "informational" : (r.pass ? "pass" : "fail"))
            << "\n";
      }
    }
    out << "overall=" << (all_pass() ? "pass" : "fail") << "\n";
    return out.str();
  }
};

class SuiteError : public std::runtime_error {
 public:
  explicit SuiteError(const std::string& what) : std::runtime_error(what) {}
};

// The acceptance file: pre-registered thresholds and suite configuration,
// structured key-value text. Missing keys are suite errors, distinct from
// criterion failures.
class Acceptance {
 public:
  static Acceptance parse(const std::string& text) { return Acceptance(KeyValueConfig::parse(text)); }
  static Acceptance load_file(const std::string& path) {
    return Acceptance(KeyValueConfig::parse_file(path));
  }

  double num(const std::string& key) const {
    try {
      return cfg_.get_double(key);
    } catch (const ConfigError& e) {
      throw SuiteError(e.what());
    }
  }
  std::uint64_t integer(const std::string& key) const {
    try {
      return cfg_.get_u64(key);
    } catch (const ConfigError& e) {
      throw SuiteError(e.what());
    }
  }
  std::vector<double> list(const std::string& key) const {
    try {
      return cfg_.get_double_list(key);
    } catch (const ConfigError& e) {
      throw SuiteError(e.what());
    }
  }
  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const {
    return cfg_.has(key) ? integer(key) : fallback;
  }
  std::string hash() const { return cfg_.hash_hex(); }

 private:
  explicit Acceptance(KeyValueConfig cfg) : cfg_(std::move(cfg)) {}
  KeyValueConfig cfg_;
};

// Smallest R with sqrt(pilot_variance / R) <= target_margin / 4.
inline std::uint64_t plan_replications(double target_margin, double pilot_variance) {
  if (!(target_margin > 0.0)) throw std::invalid_argument("plan_replications: margin must be > 0");
  if (pilot_variance < 0.0) throw std::invalid_argument("plan_replications: variance < 0");
  if (pilot_variance == 0.0) return 1;
  const double r = 16.0 * pilot_variance / (target_margin * target_margin);
  if (r > 1e6) throw std::runtime_error("plan_replications: margin unreachable at the 1e6 cap");
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(r)));
}

// Indicator-mean criteria cross-check the SE plan against the Chernoff
// lower-tail exponent at failure probability beta.
inline std::uint64_t plan_replications_indicator(double p, double target_margin,
                                                 double beta = 1e-3) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("indicator mean must be in (0,1)");
  const std::uint64_t se_based = plan_replications(target_margin, p * (1.0 - p));
  // exp(-(margin/p)^2 R p / 2) <= beta  =>  R >= 2 p ln(1/beta) / margin^2
  const double chern = 2.0 * p * std::log(1.0 / beta) / (target_margin * target_margin);
  if (chern > 1e6) throw std::runtime_error("plan_replications: margin unreachable at the 1e6 cap");
  return std::max<std::uint64_t>(se_based, static_cast<std::uint64_t>(std::ceil(chern)));
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) throw SuiteError("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline CriterionRow row_le(const std::string& suite, const std::string& name, double observed,
                           double threshold) {
  return CriterionRow{suite, name, observed, threshold, "<=", observed <= threshold, false};
}

inline CriterionRow row_ge(const std::string& suite, const std::string& name, double observed,
                           double threshold) {
  return CriterionRow{suite, name, observed, threshold, ">=", observed >= threshold, false};
}

inline CriterionRow row_eq(const std::string& suite, const std::string& name, double observed,
                           double threshold) {
  return CriterionRow{suite, name, observed, threshold, "==", observed == threshold, false};
}

inline CriterionRow row_info(const std::string& suite, const std::string& name, double observed) {
  return CriterionRow{suite, name, observed, 0.0, "report", true, true};
}

// Per-suite seeds derived from the run seed so suites stay independent of
// ordering and of each other.
inline std::uint64_t suite_seed(std::uint64_t seed, int suite_number) {
  return rng::derive_key(rng::mix64(seed), static_cast<std::uint64_t>(suite_number));
}

inline std::vector<double> abs_dist_at(const std::vector<TrajectoryRecord>& recs, std::uint64_t n,
                                       double target) {
  std::vector<double> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(std::abs(r.require_step(n).z - target));
  return out;
}

// Consistency suites (T1 noisy thresholds, T2 adaptive a.s. thresholds):
// medians of |Z_n - rho1| strictly decreasing over the horizon list and the
// final median below its pinned maximum.
inline SuiteReport consistency_suite(const std::string& id, const ThresholdPolicy& policy,
                                     const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const std::string key = id == "T1" ? "t1" : "t2";
  const auto horizons_d = acc.list(key + ".horizons");
  std::vector<std::uint64_t> horizons(horizons_d.begin(), horizons_d.end());
  const std::uint64_t reps = acc.integer(key + ".replications");

  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = policy;
  cfg.r1 = ReinforcementSpec::point_mass(acc.num(key + ".m1"));
  cfg.r2 = ReinforcementSpec::point_mass(acc.num(key + ".m2"));
  cfg.horizon = horizons.back();
  cfg.seed = seed;
  cfg.record_grid = horizons;
  const auto batch = run_batch(cfg, reps, threads);

  SuiteReport rep;
  rep.suite = id;
  std::vector<double> medians;
  for (std::uint64_t n : horizons) {
    medians.push_back(median(abs_dist_at(batch.records, n, policy.rho1_limit)));
    rep.rows.push_back(row_info(id, "median_dist_n" + std::to_string(n), medians.back()));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i) decreasing &= medians[i] < medians[i - 1];
  rep.rows.push_back(row_eq(id, "medians_strictly_decreasing", decreasing ? 1.0 : 0.0, 1.0));
  rep.rows.push_back(row_le(id, "final_median_dist", medians.back(), acc.num(key + ".final_median_max")));
  return rep;
}

// Shared interior equal-means batch for T3 and T8.
inline BatchResult interior_batch(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  const double mean = 0.5 * (acc.num("t3.low") + acc.num("t3.high"));
  cfg.policy = ThresholdPolicy::adaptive_mean_map(mean, mean, acc.num("t3.map_offset"),
                                                  acc.num("t3.map_slope"), acc.num("t3.map_gap"));
  cfg.r1 = ReinforcementSpec::uniform_interval(acc.num("t3.low"), acc.num("t3.high"));
  cfg.r2 = ReinforcementSpec::uniform_interval(acc.num("t3.low"), acc.num("t3.high"));
  cfg.y1_0 = acc.num("t3.y1_0");
  cfg.y2_0 = acc.num("t3.y2_0");
  cfg.horizon = acc.integer("t3.horizon");
  cfg.seed = seed;
  cfg.record_grid = pow2_grid(cfg.horizon);
  return run_batch(cfg, acc.integer("t3.replications"), threads);
}

inline SuiteReport suite_t3(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const auto batch = interior_batch(acc, seed, threads);
  const double m = 0.5 * (acc.num("t3.low") + acc.num("t3.high"));
  const double tol = acc.num("t3.y_ratio_tol");
  const std::uint64_t n = acc.integer("t3.horizon");

  SuiteReport rep;
  rep.suite = "T3";
  std::uint64_t ok = 0, ok_m1 = 0, ok_m2 = 0;
  for (const auto& r : batch.records) {
    const auto& p = r.require_step(n);
    if (std::abs(p.y / static_cast<double>(n) - m) < tol) ++ok;
    if (std::abs(r.final_estimates.m1_hat - m) < acc.num("t3.mhat_tol")) ++ok_m1;
    if (std::abs(r.final_estimates.m2_hat - m) < acc.num("t3.mhat_tol")) ++ok_m2;
  }
  const double total = static_cast<double>(batch.records.size());
  rep.rows.push_back(
      row_ge("T3", "y_over_n_within_tol_fraction", ok / total, acc.num("t3.min_fraction")));
  rep.rows.push_back(
      row_ge("T3", "m1_hat_within_tol_fraction", ok_m1 / total, acc.num("t3.mhat_min_fraction")));
  rep.rows.push_back(
      row_ge("T3", "m2_hat_within_tol_fraction", ok_m2 / total, acc.num("t3.mhat_min_fraction")));
  // Exponential band concentration: by band_n nearly every trajectory sits
  // inside the wide band.
  const auto band = band_probability(batch.records, acc.integer("t3.band_n"),
                                     acc.num("t3.band_lo"), acc.num("t3.band_hi"));
  rep.rows.push_back(row_ge("T3", "wide_band_frequency", band.mean, acc.num("t3.band_min")));
  return rep;
}

inline SuiteReport suite_t8(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const auto batch = interior_batch(acc, seed, threads);
  const auto grid = pow2_grid(acc.integer("t3.horizon"));
  SuiteReport rep;
  rep.suite = "T8";
  for (double jd : acc.list("t8.j_list")) {
    const int j = static_cast<int>(jd);
    const auto curve = harmonic_moment_curve(batch.records, j, grid);
    double max_mean = 0.0;
    for (const auto& pt : curve) max_mean = std::max(max_mean, pt.estimate.mean);
    const double final_mean = curve.back().estimate.mean;
    const double ratio = final_mean > 0.0 ? max_mean / final_mean : 0.0;
    rep.rows.push_back(
        row_le("T8", "plateau_max_over_final_j" + std::to_string(j), ratio,
               acc.num("t8.plateau_ratio_max")));
  }
  return rep;
}

// CLT batch shared by T5 and T7: RRU, equal-mean uniforms, extended runs.
inline BatchResult rru_clt_batch(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  RunConfig cfg;
  cfg.model = ModelKind::rru();
  cfg.r1 = ReinforcementSpec::uniform_interval(acc.num("t5.low"), acc.num("t5.high"));
  cfg.r2 = ReinforcementSpec::uniform_interval(acc.num("t5.low"), acc.num("t5.high"));
  cfg.horizon = acc.integer("t5.horizon");
  cfg.proxy_multiplier = acc.integer("global.proxy_multiplier");
  cfg.seed = seed;
  cfg.record_grid = {cfg.horizon / 2, cfg.horizon, cfg.total_steps()};
  return run_batch(cfg, acc.integer("t5.replications"), threads);
}

inline void clt_rows(SuiteReport& rep, const std::string& id, const CltSummary& sum, double ks_max,
                     double var_ratio_tol) {
  std::vector<double> studentized, raw;
  double sigma_sum = 0.0;
  for (const auto& r : sum.rows) {
    studentized.push_back(r.studentized);
    raw.push_back(r.statistic);
    sigma_sum += r.sigma;
  }
  if (studentized.empty()) throw SuiteError(id + ": no included replications");
  rep.rows.push_back(row_le(id, "ks_studentized", ks_distance(studentized).d, ks_max));
  const auto raw_m = moment_estimate(raw);
  const double mean_sigma = sigma_sum / static_cast<double>(sum.rows.size());
  rep.rows.push_back(
      row_le(id, "variance_ratio_error", std::abs(raw_m.variance / mean_sigma - 1.0), var_ratio_tol));
  rep.rows.push_back(row_info(id, "included", static_cast<double>(sum.included())));
  rep.rows.push_back(row_info(id, "excluded_sigma_floor", static_cast<double>(sum.excluded)));
}

inline SuiteReport suite_t5(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const auto batch = rru_clt_batch(acc, seed, threads);
  const auto r = ReinforcementSpec::uniform_interval(acc.num("t5.low"), acc.num("t5.high"));
  SuiteReport rep;
  rep.suite = "T5";
  const auto sum = studentize(batch.records, r, r, CltStatistic::kSampledFraction,
                              acc.num("global.sigma_floor"));
  clt_rows(rep, "T5", sum, acc.num("t5.ks_max"), acc.num("t5.var_ratio_tol"));
  return rep;
}

inline SuiteReport suite_t7(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const auto batch = rru_clt_batch(acc, seed, threads);
  const auto r = ReinforcementSpec::uniform_interval(acc.num("t5.low"), acc.num("t5.high"));
  SuiteReport rep;
  rep.suite = "T7";
  const auto sum = studentize(batch.records, r, r, CltStatistic::kProportion,
                              acc.num("global.sigma_floor"));
  clt_rows(rep, "T7", sum, acc.num("t7.ks_max"), acc.num("t7.var_ratio_tol"));
  return rep;
}

// ARRU CLT batch for T6 (and T4's proxies at its own replication count).
inline BatchResult arru_clt_batch(const Acceptance& acc, std::uint64_t seed, unsigned threads,
                                  std::uint64_t reps, const std::vector<std::uint64_t>& grid) {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  const double mean = 0.5 * (acc.num("t6.low") + acc.num("t6.high"));
  cfg.policy = ThresholdPolicy::adaptive_mean_map(mean, mean, acc.num("t6.map_offset"),
                                                  acc.num("t6.map_slope"), acc.num("t6.map_gap"));
  cfg.r1 = ReinforcementSpec::uniform_interval(acc.num("t6.low"), acc.num("t6.high"));
  cfg.r2 = ReinforcementSpec::uniform_interval(acc.num("t6.low"), acc.num("t6.high"));
  cfg.y1_0 = acc.num("t6.y1_0");
  cfg.y2_0 = acc.num("t6.y2_0");
  cfg.horizon = acc.integer("t6.horizon");
  cfg.proxy_multiplier = acc.integer("global.proxy_multiplier");
  cfg.a_n_alpha = acc.num("t6.alpha");
  cfg.a_n_c = acc.num("t6.c");
  cfg.seed = seed;
  cfg.record_grid = grid;
  return run_batch(cfg, reps, threads);
}

// Boundary variant rho1 = rho2: hypotheses of the no-atoms lemma and the
// A_n construction are deliberately unmet; reported as informational.
inline BatchResult boundary_batch(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  const double rho = acc.num("t4.boundary_rho");
  cfg.policy = ThresholdPolicy::fixed(rho, rho);
  cfg.r1 = ReinforcementSpec::uniform_interval(acc.num("t6.low"), acc.num("t6.high"));
  cfg.r2 = ReinforcementSpec::uniform_interval(acc.num("t6.low"), acc.num("t6.high"));
  cfg.horizon = acc.integer("t4.boundary_horizon");
  cfg.proxy_multiplier = acc.integer("global.proxy_multiplier");
  cfg.seed = seed;
  cfg.record_grid = {cfg.horizon, cfg.total_steps()};
  return run_batch(cfg, acc.integer("t4.boundary_replications"), threads);
}

inline SuiteReport suite_t4(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const std::uint64_t horizon = acc.integer("t6.horizon");
  const std::uint64_t mult = acc.integer("global.proxy_multiplier");
  const auto batch = arru_clt_batch(acc, seed, threads, acc.integer("t4.replications"),
                                    {horizon, horizon * mult});
  std::vector<double> proxies;
  proxies.reserve(batch.records.size());
  for (const auto& r : batch.records) proxies.push_back(z_infinity_proxy(r, mult));
  SuiteReport rep;
  rep.suite = "T4";
  const double mass = atom_scan(proxies, acc.num("t4.window_lo"), acc.num("t4.window_hi"),
                                acc.num("t4.bin_width"));
  rep.rows.push_back(row_le("T4", "max_bin_mass", mass, acc.num("t4.max_bin_mass")));
  // Same scan away from the threshold neighborhoods, where the limit
  // law may legitimately carry point masses; context for the binding row.
  rep.rows.push_back(row_info(
      "T4", "interior_window_max_bin_mass",
      atom_scan(proxies, acc.num("t4.interior_lo"), acc.num("t4.interior_hi"),
                acc.num("t4.bin_width"))));

  const auto boundary = boundary_batch(acc, suite_seed(seed, 40), threads);
  std::vector<double> bproxies;
  for (const auto& r : boundary.records) bproxies.push_back(z_infinity_proxy(r, mult));
  const double bmass = atom_scan(bproxies, acc.num("t4.window_lo"), acc.num("t4.window_hi"),
                                 acc.num("t4.bin_width"));
  rep.rows.push_back(row_info("T4", "boundary_rho1_eq_rho2_max_bin_mass", bmass));
  return rep;
}

inline SuiteReport suite_t6(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const std::uint64_t horizon = acc.integer("t6.horizon");
  const std::uint64_t mult = acc.integer("global.proxy_multiplier");
  const auto batch = arru_clt_batch(acc, seed, threads, acc.integer("t6.replications"),
                                    {horizon / 2, horizon, horizon * mult});
  const auto r = ReinforcementSpec::uniform_interval(acc.num("t6.low"), acc.num("t6.high"));

  SuiteReport rep;
  rep.suite = "T6";
  for (const CltStatistic which : {CltStatistic::kSampledFraction, CltStatistic::kProportion}) {
    const auto sum = studentize(batch.records, r, r, which, acc.num("global.sigma_floor"));
    std::vector<double> on_a;
    for (const auto& row : sum.rows) {
      if (row.in_a_n_at_horizon) on_a.push_back(row.studentized);
    }
    const std::string tag =
        which == CltStatistic::kSampledFraction ? "ks_n1_on_A_n" : "ks_z_on_A_n";
    if (on_a.size() < acc.integer("t6.min_included")) {
      throw SuiteError("T6: too few replications inside A_n (" + std::to_string(on_a.size()) + ")");
    }
    rep.rows.push_back(row_le("T6", tag, ks_distance(on_a).d, acc.num("t6.ks_max")));
    if (which == CltStatistic::kSampledFraction) {
      rep.rows.push_back(row_info("T6", "included_on_A_n", static_cast<double>(on_a.size())));
    }
  }

  // Stabilization of the A_n membership sequence: {Z_n in A_n} settles to
  // {Z_inf in (rho2, rho1)}, so replications captured by A_n at the
  // horizon should still be inside at the proxy step. The raw fractions
  // keep drifting by construction (the margin shrinks like Y^-alpha) and
  // are reported for context.
  double frac_half = 0.0, frac_full = 0.0;
  std::uint64_t captured = 0, escaped = 0;
  for (const auto& rec : batch.records) {
    frac_half += rec.require_step(horizon / 2).in_a_n ? 1.0 : 0.0;
    const bool at_h = rec.require_step(horizon).in_a_n;
    frac_full += at_h ? 1.0 : 0.0;
    if (at_h) {
      ++captured;
      if (!rec.require_step(horizon * mult).in_a_n) ++escaped;
    }
  }
  frac_half /= static_cast<double>(batch.records.size());
  frac_full /= static_cast<double>(batch.records.size());
  if (captured == 0) throw SuiteError("T6: no replications captured by A_n at the horizon");
  rep.rows.push_back(row_info("T6", "in_A_n_fraction_at_half_horizon", frac_half));
  rep.rows.push_back(row_info("T6", "in_A_n_fraction_at_horizon", frac_full));
  rep.rows.push_back(row_le("T6", "escape_fraction_after_capture",
                            static_cast<double>(escaped) / static_cast<double>(captured),
                            acc.num("t6.escape_max")));

  // Boundary variant: A_n is empty when rho1 = rho2.
  const auto boundary = boundary_batch(acc, suite_seed(seed, 40), threads);
  double bfrac = 0.0;
  for (const auto& rec : boundary.records) {
    bfrac += rec.require_step(acc.integer("t4.boundary_horizon")).in_a_n ? 1.0 : 0.0;
  }
  bfrac /= static_cast<double>(boundary.records.size());
  rep.rows.push_back(row_info("T6", "boundary_rho1_eq_rho2_in_A_n_fraction", bfrac));
  return rep;
}

inline SuiteReport suite_t9(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  const std::uint64_t n = acc.integer("t9.horizon_n");
  const double delta = acc.num("t9.delta");
  const double b = acc.num("t9.m1");  // point masses: b = max reinforcement
  const auto window = s_delta_window(acc.num("t9.c1"), b, delta);
  const double s = window.chosen;
  const std::uint64_t n_plus = n + static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * s));

  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::noisy_convergent(acc.num("t9.rho1"), acc.num("t9.rho2"));
  cfg.r1 = ReinforcementSpec::point_mass(acc.num("t9.m1"));
  cfg.r2 = ReinforcementSpec::point_mass(acc.num("t9.m2"));
  cfg.y1_0 = acc.num("t9.y1_0");
  cfg.y2_0 = acc.num("t9.y2_0");
  cfg.horizon = n_plus;
  cfg.seed = seed;
  cfg.record_grid = {n, n_plus};
  const auto batch = run_batch(cfg, acc.integer("t9.replications"), threads);

  const auto diag = drift_diagnostic(batch.records, n, s, delta, acc.num("t9.rho1"));
  SuiteReport rep;
  rep.suite = "T9";
  rep.rows.push_back(row_info("T9", "s_delta_chosen", s));
  rep.rows.push_back(row_info("T9", "q_mass", diag.q_mass.mean));
  const bool gated = diag.q_mass.mean > acc.num("t9.q_mass_gate");
  const double lhs_upper = diag.lhs.mean + 2.0 * diag.lhs.standard_error;
  CriterionRow lhs_row{"T9", "lhs_mean_plus_2se_negative_when_gated", lhs_upper, 0.0, "<=",
                       !gated || lhs_upper < 0.0, false};
  rep.rows.push_back(lhs_row);
  rep.rows.push_back(row_le("T9", "complement_mean_minus_2se",
                            diag.lhs_complement.mean - 2.0 * diag.lhs_complement.standard_error,
                            acc.num("t9.complement_max")));
  return rep;
}

inline SuiteReport suite_t10(const Acceptance& acc, std::uint64_t seed, unsigned threads) {
  (void)threads;  // coupled runs are cheap; executed serially for simplicity
  const std::uint64_t reps = acc.integer("t10.replications");
  const std::uint64_t horizon = acc.integer("t10.horizon");
  const std::uint64_t n0 = acc.integer("t10.n0");

  SuiteReport rep;
  rep.suite = "T10";

  // Part 1: never-binding thresholds, trajectories bit-identical.
  RunConfig cfg;
  cfg.model = ModelKind::arru();
  cfg.policy = ThresholdPolicy::fixed(1.0, 0.0);
  cfg.r1 = ReinforcementSpec::uniform_interval(acc.num("t10.low"), acc.num("t10.high"));
  cfg.r2 = ReinforcementSpec::uniform_interval(acc.num("t10.low"), acc.num("t10.high"));
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.record_grid = linear_grid(horizon, std::max<std::uint64_t>(1, horizon / 50));
  std::uint64_t mismatches = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    cfg.replication_index = r;
    const auto res = run_coupled(cfg, n0);
    if (res.divergence_step.has_value()) ++mismatches;
    for (const auto& p : res.arru.grid) {
      if (p.n < n0) continue;
      const auto* q = res.rru.at_step(p.n);
      if (!q || q->z != p.z || q->y != p.y || q->n1 != p.n1) ++mismatches;
    }
    if (!res.arru.final_state.same_composition(res.rru.final_state)) ++mismatches;
  }
  rep.rows.push_back(row_eq("T10", "never_binding_trajectories_identical_mismatches",
                            static_cast<double>(mismatches), 0.0));

  // Part 2: interior thresholds, divergence only at indicator suppression.
  cfg.policy = ThresholdPolicy::fixed(acc.num("t10.interior_rho1"), acc.num("t10.interior_rho2"));
  std::uint64_t order_violations = 0;
  std::uint64_t diverged = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    cfg.replication_index = r;
    const auto res = run_coupled(cfg, n0);
    if (res.divergence_step.has_value()) {
      ++diverged;
      if (!res.first_suppression_step.has_value() ||
          *res.divergence_step < *res.first_suppression_step) {
        ++order_violations;
      }
    }
  }
  rep.rows.push_back(row_eq("T10", "divergence_before_suppression_count",
                            static_cast<double>(order_violations), 0.0));
  rep.rows.push_back(row_info("T10", "interior_diverged_replications",
                              static_cast<double>(diverged)));
  return rep;
}

}  // namespace detail

inline SuiteReport run_suite(const std::string& id, const Acceptance& acc, std::uint64_t seed,
                             unsigned threads) {
  using namespace detail;
  if (id == "T1") {
    return consistency_suite(
        "T1", ThresholdPolicy::noisy_convergent(acc.num("t1.rho1"), acc.num("t1.rho2")), acc,
        suite_seed(seed, 1), threads);
  }
  if (id == "T2") {
    return consistency_suite(
        "T2",
        ThresholdPolicy::adaptive_mean_map(acc.num("t2.m1"), acc.num("t2.m2"),
                                           acc.num("t2.map_offset"), acc.num("t2.map_slope"),
                                           acc.num("t2.map_gap")),
        acc, suite_seed(seed, 2), threads);
  }
  if (id == "T3") return suite_t3(acc, suite_seed(seed, 3), threads);
  if (id == "T4") return suite_t4(acc, suite_seed(seed, 4), threads);
  if (id == "T5") return suite_t5(acc, suite_seed(seed, 5), threads);
  if (id == "T6") return suite_t6(acc, suite_seed(seed, 6), threads);
  if (id == "T7") return suite_t7(acc, suite_seed(seed, 7), threads);
  if (id == "T8") return suite_t8(acc, suite_seed(seed, 8), threads);
  if (id == "T9") return suite_t9(acc, suite_seed(seed, 9), threads);
  if (id == "T10") return suite_t10(acc, suite_seed(seed, 10), threads);
  throw std::invalid_argument("unknown suite id: " + id);
}

inline const std::vector<std::string>& all_suite_ids() {
  static const std::vector<std::string> ids{"T1", "T2", "T3", "T4", "T5",
                                            "T6", "T7", "T8", "T9", "T10"};
  return ids;
}

inline Report run_suites(const std::vector<std::string>& ids, const Acceptance& acc,
                         std::uint64_t seed, unsigned threads) {
  Report report;
  report.acceptance_hash = acc.hash();
  report.seed = seed;
  for (const auto& id : ids) report.suites.push_back(run_suite(id, acc, seed, threads));
  return report;
}

}  // namespace urnlab::verify
