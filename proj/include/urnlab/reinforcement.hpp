// Bounded reinforcement distributions on [a,b], 0 < a <= b, with exact
// first and second moments carried alongside the sampler.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "urnlab/rng.hpp"

namespace urnlab {

enum class ReinforcementKind { kPointMass, kTwoPoint, kUniformInterval, kScaledBeta };

inline const char* to_string(ReinforcementKind k) {
  switch (k) {
    case ReinforcementKind::kPointMass: return "point";
    case ReinforcementKind::kTwoPoint: return "two_point";
    case ReinforcementKind::kUniformInterval: return "uniform";
    case ReinforcementKind::kScaledBeta: return "scaled_beta";
  }
  return "?";
}

namespace detail {

// Marsaglia-Tsang for shape >= 1; boosted by u^(1/shape) below 1.
// Consumes a variable number of uniforms from seq; callers hand it a
// per-step sequence so consumption never leaks across steps.
inline double sample_gamma(double shape, rng::Sequence& seq) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(seq.next_unit_open(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (int iter = 0; iter < 10000; ++iter) {
    // Box-Muller normal from two open uniforms.
    const double u1 = seq.next_unit_open();
    const double u2 = seq.next_unit_open();
    const double x = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = seq.next_unit_open();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return boost * d * v;
    }
  }
  throw std::runtime_error("gamma sampler failed to accept");
}

inline double sample_beta(double alpha, double beta, rng::Sequence& seq) {
  const double g1 = sample_gamma(alpha, seq);
  const double g2 = sample_gamma(beta, seq);
  return g1 / (g1 + g2);
}

}  // namespace detail

class ReinforcementSpec {
 public:
  static ReinforcementSpec point_mass(double value) {
    require(value > 0.0 && std::isfinite(value), "point mass must be finite and > 0");
    ReinforcementSpec s(ReinforcementKind::kPointMass, value, value);
    s.mean_ = value;
    s.variance_ = 0.0;
    return s;
  }

  static ReinforcementSpec two_point(double low, double high, double p_high) {
    require(low > 0.0 && high >= low && std::isfinite(high), "two_point needs 0 < low <= high");
    require(p_high >= 0.0 && p_high <= 1.0, "two_point needs p_high in [0,1]");
    ReinforcementSpec s(ReinforcementKind::kTwoPoint, low, high);
    s.p_high_ = p_high;
    s.mean_ = low + p_high * (high - low);
    s.variance_ = p_high * (1.0 - p_high) * (high - low) * (high - low);
    return s;
  }

  static ReinforcementSpec uniform_interval(double low, double high) {
    require(low > 0.0 && high >= low && std::isfinite(high), "uniform needs 0 < low <= high");
    ReinforcementSpec s(ReinforcementKind::kUniformInterval, low, high);
    s.mean_ = 0.5 * (low + high);
    s.variance_ = (high - low) * (high - low) / 12.0;
    return s;
  }

  static ReinforcementSpec scaled_beta(double low, double high, double alpha, double beta) {
    require(low > 0.0 && high >= low && std::isfinite(high), "scaled_beta needs 0 < low <= high");
    require(alpha > 0.0 && beta > 0.0, "scaled_beta needs alpha, beta > 0");
    ReinforcementSpec s(ReinforcementKind::kScaledBeta, low, high);
    s.alpha_ = alpha;
    s.beta_ = beta;
    const double ab = alpha + beta;
    const double w = high - low;
    s.mean_ = low + w * alpha / ab;
    s.variance_ = w * w * alpha * beta / (ab * ab * (ab + 1.0));
    return s;
  }

  ReinforcementKind kind() const noexcept { return kind_; }
  double support_low() const noexcept { return low_; }
  double support_high() const noexcept { return high_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double p_high() const noexcept { return p_high_; }
  double beta_alpha() const noexcept { return alpha_; }
  double beta_beta() const noexcept { return beta_; }

  // Draws one reinforcement. Point masses consume no uniforms; the others
  // consume one or more from seq.
  double sample(rng::Sequence& seq) const {
    switch (kind_) {
      case ReinforcementKind::kPointMass:
        return low_;
      case ReinforcementKind::kTwoPoint:
        return seq.next_unit() < p_high_ ? high_ : low_;
      case ReinforcementKind::kUniformInterval:
        return low_ + (high_ - low_) * seq.next_unit();
      case ReinforcementKind::kScaledBeta: {
        const double t = detail::sample_beta(alpha_, beta_, seq);
        const double v = low_ + (high_ - low_) * t;
        return v < low_ ? low_ : (v > high_ ? high_ : v);
      }
    }
    throw std::logic_error("unreachable reinforcement kind");
  }

  // Shifts the support by delta, preserving shape. Used by sweeps over the
  // mean gap m1 - m2.
  ReinforcementSpec shifted(double delta) const {
    switch (kind_) {
      case ReinforcementKind::kPointMass:
        return point_mass(low_ + delta);
      case ReinforcementKind::kTwoPoint:
        return two_point(low_ + delta, high_ + delta, p_high_);
      case ReinforcementKind::kUniformInterval:
        return uniform_interval(low_ + delta, high_ + delta);
      case ReinforcementKind::kScaledBeta:
        return scaled_beta(low_ + delta, high_ + delta, alpha_, beta_);
    }
    throw std::logic_error("unreachable reinforcement kind");
  }

  bool operator==(const ReinforcementSpec& o) const noexcept {
    return kind_ == o.kind_ && low_ == o.low_ && high_ == o.high_ && p_high_ == o.p_high_ &&
           alpha_ == o.alpha_ && beta_ == o.beta_;
  }

 private:
  ReinforcementSpec(ReinforcementKind k, double low, double high)
      : kind_(k), low_(low), high_(high) {}

  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }

  ReinforcementKind kind_;
  double low_;
  double high_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double p_high_ = 0.0;  // two-point
  double alpha_ = 0.0;   // scaled beta
  double beta_ = 0.0;
};

}  // namespace urnlab
