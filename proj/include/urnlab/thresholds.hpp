// Generators for the random threshold pair (rho1_hat_n, rho2_hat_n):
// fixed constants, an estimator-driven map, and two stress policies that
// perturb or briefly leave the declared range.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "urnlab/rng.hpp"

namespace urnlab {

enum class PolicyKind { kFixed, kAdaptiveMeanMap, kNoisyConvergent, kAdversarialExcursion };

enum class ConvergenceMode { kAlmostSure, kInProbabilityOnly, kNone };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::kFixed: return "fixed";
    case PolicyKind::kAdaptiveMeanMap: return "adaptive_mean_map";
    case PolicyKind::kNoisyConvergent: return "noisy_convergent";
    case PolicyKind::kAdversarialExcursion: return "adversarial_excursion";
  }
  return "?";
}

// Running per-color sample means of the observed reinforcements. The priors
// seed the adaptive map before any reinforcement has been seen.
struct AdaptiveEstimates {
  double m1_hat = 0.0;
  double m2_hat = 0.0;
  std::uint64_t count1 = 0;
  std::uint64_t count2 = 0;

  static AdaptiveEstimates prior(double m1_guess, double m2_guess) {
    return AdaptiveEstimates{m1_guess, m2_guess, 0, 0};
  }
};

enum class Color { kRed, kWhite };

// Updates the running mean for the drawn color; a step whose indicator was
// 0 observes nothing and leaves the estimates untouched.
inline AdaptiveEstimates update_estimates(AdaptiveEstimates est, Color drawn,
                                          std::optional<double> observed_reinforcement) {
  if (!observed_reinforcement.has_value()) return est;
  const double d = *observed_reinforcement;
  if (!std::isfinite(d) || d <= 0.0) {
    throw std::invalid_argument("update_estimates: reinforcement must be finite and > 0");
  }
  if (drawn == Color::kRed) {
    est.m1_hat = est.count1 == 0
                     ? d
                     : (est.m1_hat * static_cast<double>(est.count1) + d) /
                           static_cast<double>(est.count1 + 1);
    est.count1 += 1;
  } else {
    est.m2_hat = est.count2 == 0
                     ? d
                     : (est.m2_hat * static_cast<double>(est.count2) + d) /
                           static_cast<double>(est.count2 + 1);
    est.count2 += 1;
  }
  return est;
}

struct ThresholdPair {
  double rho1_hat = 1.0;
  double rho2_hat = 0.0;
  bool clamped = false;  // order violation fixed up and counted by the runner
};

struct ThresholdPolicy {
  PolicyKind kind = PolicyKind::kFixed;
  double rho1_limit = 1.0;
  double rho2_limit = 0.0;
  double rho_min = 0.05;
  double rho_max = 0.95;
  double c_rho = 1.0;
  ConvergenceMode convergence_mode = ConvergenceMode::kAlmostSure;
  // Affine estimator map: g1 = clamp(offset + slope * m1_hat/(m1_hat+m2_hat)),
  // g2 = clamp(g1 - gap). Defaults give limits (0.5, 0.3) at equal means.
  double map_offset = 0.3;
  double map_slope = 0.4;
  double map_gap = 0.2;

  static ThresholdPolicy fixed(double rho1, double rho2) {
    if (!(rho2 >= 0.0 && rho2 <= rho1 && rho1 <= 1.0)) {
      throw std::invalid_argument("fixed policy requires 0 <= rho2 <= rho1 <= 1");
    }
    ThresholdPolicy p;
    p.kind = PolicyKind::kFixed;
    p.rho1_limit = rho1;
    p.rho2_limit = rho2;
    p.convergence_mode = ConvergenceMode::kAlmostSure;
    return p;
  }

  // Declared limits are the map evaluated at the true means m1, m2.
  static ThresholdPolicy adaptive_mean_map(double m1, double m2, double offset = 0.3,
                                           double slope = 0.4, double gap = 0.2,
                                           double rho_min = 0.05, double rho_max = 0.95) {
    ThresholdPolicy p;
    p.kind = PolicyKind::kAdaptiveMeanMap;
    p.map_offset = offset;
    p.map_slope = slope;
    p.map_gap = gap;
    p.rho_min = rho_min;
    p.rho_max = rho_max;
    const double frac = m1 / (m1 + m2);
    p.rho1_limit = clamp_range(offset + slope * frac, rho_min, rho_max);
    p.rho2_limit = clamp_range(p.rho1_limit - gap, rho_min, rho_max);
    p.convergence_mode = ConvergenceMode::kAlmostSure;
    p.validate_bounded_range();
    return p;
  }

  static ThresholdPolicy noisy_convergent(double rho1, double rho2, double rho_min = 0.05,
                                          double rho_max = 0.95) {
    ThresholdPolicy p;
    p.kind = PolicyKind::kNoisyConvergent;
    p.rho1_limit = rho1;
    p.rho2_limit = rho2;
    p.rho_min = rho_min;
    p.rho_max = rho_max;
    p.convergence_mode = ConvergenceMode::kInProbabilityOnly;
    p.validate_bounded_range();
    return p;
  }

  static ThresholdPolicy adversarial_excursion(double rho1, double rho2, double c_rho,
                                               double rho_min = 0.05, double rho_max = 0.95) {
    if (!(c_rho > 0.0)) throw std::invalid_argument("adversarial policy requires c_rho > 0");
    ThresholdPolicy p;
    p.kind = PolicyKind::kAdversarialExcursion;
    p.rho1_limit = rho1;
    p.rho2_limit = rho2;
    p.rho_min = rho_min;
    p.rho_max = rho_max;
    p.c_rho = c_rho;
    p.convergence_mode = ConvergenceMode::kAlmostSure;
    p.validate_bounded_range();
    return p;
  }

  void validate_bounded_range() const {
    if (!(rho_min > 0.0 && rho_min <= rho2_limit && rho2_limit <= rho1_limit &&
          rho1_limit <= rho_max && rho_max < 1.0)) {
      throw std::invalid_argument(
          "policy requires 0 < rho_min <= rho2_limit <= rho1_limit <= rho_max < 1");
    }
  }

 private:
  static double clamp_range(double x, double lo, double hi) {
    return x < lo ? lo : (x > hi ? hi : x);
  }
};

// Emits the F_n-measurable threshold pair for step n. aux is the step's
// policy substream; fixed and adaptive policies consume nothing from it.
inline ThresholdPair emit(const ThresholdPolicy& policy, const AdaptiveEstimates& est,
                          std::uint64_t n, rng::Sequence aux) {
  const auto clamp01 = [&](double x) {
    return x < policy.rho_min ? policy.rho_min : (x > policy.rho_max ? policy.rho_max : x);
  };
  ThresholdPair out;
  switch (policy.kind) {
    case PolicyKind::kFixed:
      out.rho1_hat = policy.rho1_limit;
      out.rho2_hat = policy.rho2_limit;
      break;
    case PolicyKind::kAdaptiveMeanMap: {
      const double denom = est.m1_hat + est.m2_hat;
      const double frac = denom > 0.0 ? est.m1_hat / denom : 0.5;
      out.rho1_hat = clamp01(policy.map_offset + policy.map_slope * frac);
      out.rho2_hat = clamp01(out.rho1_hat - policy.map_gap);
      break;
    }
    case PolicyKind::kNoisyConvergent: {
      // Perturbation of magnitude (n+1)^{-1/4}, applied with probability
      // (n+1)^{-1/2}; signs independent per threshold.
      const double nn = static_cast<double>(n + 1);
      const double p_apply = 1.0 / std::sqrt(nn);
      const double magnitude = std::pow(nn, -0.25);
      out.rho1_hat = policy.rho1_limit;
      out.rho2_hat = policy.rho2_limit;
      if (aux.next_unit() < p_apply) {
        const double s1 = aux.next_unit() < 0.5 ? -1.0 : 1.0;
        const double s2 = aux.next_unit() < 0.5 ? -1.0 : 1.0;
        out.rho1_hat = clamp01(policy.rho1_limit + s1 * magnitude);
        out.rho2_hat = clamp01(policy.rho2_limit + s2 * magnitude);
      }
      break;
    }
    case PolicyKind::kAdversarialExcursion: {
      const double p_out = std::exp(-policy.c_rho * static_cast<double>(n));
      if (aux.next_unit() < p_out) {
        out.rho1_hat = 0.5 * (1.0 + policy.rho_max);
        out.rho2_hat = 0.5 * policy.rho_min;
      } else {
        out.rho1_hat = policy.rho1_limit;
        out.rho2_hat = policy.rho2_limit;
      }
      break;
    }
  }
  if (out.rho2_hat > out.rho1_hat) {
    out.rho2_hat = out.rho1_hat;
    out.clamped = true;
  }
  return out;
}

// True at step n iff the adversarial policy would emit outside
// [rho_min, rho_max]; used by the range-concentration diagnostics.
inline bool is_excursion(const ThresholdPolicy& policy, const ThresholdPair& pair) {
  return pair.rho1_hat > policy.rho_max || pair.rho2_hat < policy.rho_min;
}

}  // namespace urnlab
