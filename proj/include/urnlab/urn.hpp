// Exact single-step dynamics of the two-color reinforced urn and the
// closed-form quantities attached to it: the conditional drift Z(1-Z)B_n,
// the mixture CLT variance scales, the admissible s_delta window, the
// step-bound guard and the Chernoff lower-tail bound.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "urnlab/reinforcement.hpp"

namespace urnlab {

struct UrnState {
  std::uint64_t n = 0;
  double y1 = 1.0;  // red mass
  double y2 = 1.0;  // white mass
  double y = 2.0;   // stored sum y1 + y2
  double z = 0.5;   // y1 / y, recomputed every step
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  bool last_w1 = true;
  bool last_w2 = true;

  static UrnState initial(double y1_0, double y2_0) {
    if (!(y1_0 > 0.0) || !(y2_0 > 0.0) || !std::isfinite(y1_0) || !std::isfinite(y2_0)) {
      throw std::invalid_argument("initial masses must be finite and > 0");
    }
    UrnState s;
    s.y1 = y1_0;
    s.y2 = y2_0;
    s.y = y1_0 + y2_0;
    s.z = y1_0 / s.y;
    return s;
  }

  bool same_composition(const UrnState& o) const noexcept {
    return y1 == o.y1 && y2 == o.y2 && n1 == o.n1 && n2 == o.n2;
  }
};

enum class ModelTag { kRru, kMrru, kArru };

// RRU is the degenerate case whose indicators are always 1; MRRU carries
// its fixed threshold pair; ARRU defers to the run's ThresholdPolicy.
struct ModelKind {
  ModelTag tag = ModelTag::kRru;
  double rho1 = 1.0;
  double rho2 = 0.0;

  static ModelKind rru() { return ModelKind{ModelTag::kRru, 1.0, 0.0}; }

  static ModelKind mrru(double rho1, double rho2) {
    if (!(rho2 > 0.0 && rho2 <= rho1 && rho1 < 1.0)) {
      throw std::invalid_argument("MRRU requires 0 < rho2 <= rho1 < 1");
    }
    return ModelKind{ModelTag::kMrru, rho1, rho2};
  }

  static ModelKind arru() { return ModelKind{ModelTag::kArru, 0.0, 0.0}; }
};

struct CltVariances {
  double sigma_bar = 0.0;  // (1-Z)sigma1^2 + Z sigma2^2
  double sigma_big = 0.0;  // (1 + 2 sigma_bar / m^2) Z (1-Z)
  double sigma_z = 0.0;    // (1 + sigma_bar / m^2) Z (1-Z)
};

// One draw-and-replace transition. u is the color uniform, d1/d2 the
// reinforcements that would be applied to the drawn color, w1/w2 the
// indicator pair computed from the pre-step proportion.
inline UrnState step(UrnState s, bool w1, bool w2, double u, double d1, double d2) {
  if (!w1 && !w2) throw std::invalid_argument("step: w1 = w2 = 0 is not a valid indicator pair");
  if (!std::isfinite(u) || u < 0.0 || u > 1.0) throw std::invalid_argument("step: u outside [0,1]");
  if (!std::isfinite(d1) || !std::isfinite(d2) || d1 <= 0.0 || d2 <= 0.0) {
    throw std::invalid_argument("step: reinforcements must be finite and > 0");
  }
  const bool drew_red = (u <= s.z);
  if (drew_red) {
    if (w1) s.y1 += d1;
    s.n1 += 1;
  } else {
    if (w2) s.y2 += d2;
    s.n2 += 1;
  }
  s.n += 1;
  s.y = s.y1 + s.y2;
  s.z = s.y1 / s.y;
  s.last_w1 = w1;
  s.last_w2 = w2;
  return s;
}

// W1 = 1{z <= rho1_hat}, W2 = 1{z >= rho2_hat}; inclusive on ties.
inline std::pair<bool, bool> indicators(double z, double rho1_hat, double rho2_hat) {
  if (!(rho2_hat <= rho1_hat) || rho2_hat < 0.0 || rho1_hat > 1.0) {
    throw std::invalid_argument("indicators: need 0 <= rho2_hat <= rho1_hat <= 1");
  }
  return {z <= rho1_hat, z >= rho2_hat};
}

namespace detail {

// Adaptive Simpson with absolute tolerance handling done by the caller.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// E[D/(Y+D)] for a scaled-beta D. The beta density is integrated in the
// unit variable with power substitutions t = s^(1/alpha) on the left half
// and 1-t = s^(1/beta) on the right, which removes both endpoint
// singularities, then normalized by B(alpha, beta).
inline double beta_expectation_ratio(double y, const ReinforcementSpec& r, double rel_tol) {
  const double a = r.beta_alpha();
  const double bshape = r.beta_beta();
  const double lo = r.support_low();
  const double w = r.support_high() - lo;
  const auto h = [&](double t) {
    const double x = lo + w * t;
    return x / (y + x);
  };
  const double log_beta = std::lgamma(a) + std::lgamma(bshape) - std::lgamma(a + bshape);
  const double inv_beta = std::exp(-log_beta);
  // Left: t in (0, 1/2], t = s^(1/a): integrand (1/a)(1-t)^(b-1) h(t).
  const auto left = [&](double s) {
    const double t = std::pow(s, 1.0 / a);
    return (1.0 / a) * std::pow(1.0 - t, bshape - 1.0) * h(t);
  };
  // Right: t in [1/2, 1), 1-t = s^(1/b): integrand (1/b) t^(a-1) h(t).
  const auto right = [&](double s) {
    const double t = 1.0 - std::pow(s, 1.0 / bshape);
    return (1.0 / bshape) * std::pow(t, a - 1.0) * h(t);
  };
  const double scale = (r.support_high()) / (y + r.support_high());  // crude magnitude for tol
  const double tol = rel_tol * scale;
  const double i_left = integrate(left, 0.0, std::pow(0.5, a), tol);
  const double i_right = integrate(right, 0.0, std::pow(0.5, bshape), tol);
  return inv_beta * (i_left + i_right);
}

// E[D/(Y+D)]: closed form for point-mass and two-point, adaptive quadrature
// (relative error <= 1e-10) otherwise.
inline double expectation_ratio(double y, const ReinforcementSpec& r) {
  constexpr double kRelTol = 1e-10;
  switch (r.kind()) {
    case ReinforcementKind::kPointMass: {
      const double c = r.support_low();
      return c / (y + c);
    }
    case ReinforcementKind::kTwoPoint: {
      const double lo = r.support_low(), hi = r.support_high(), p = r.p_high();
      return p * hi / (y + hi) + (1.0 - p) * lo / (y + lo);
    }
    case ReinforcementKind::kUniformInterval: {
      const double lo = r.support_low(), hi = r.support_high();
      if (hi == lo) return lo / (y + lo);
      const auto f = [&](double x) { return x / (y + x) / (hi - lo); };
      const double scale = hi / (y + hi);
      return integrate(f, lo, hi, kRelTol * scale);
    }
    case ReinforcementKind::kScaledBeta: {
      if (r.support_high() == r.support_low()) {
        return r.support_low() / (y + r.support_low());
      }
      return beta_expectation_ratio(y, r, kRelTol);
    }
  }
  throw std::logic_error("unreachable reinforcement kind");
}

}  // namespace detail

// E[Z_{n+1} - Z_n | F_n] = Z(1-Z) B_n with
// B_n = E[D1 w1/(Y + D1 w1)] - E[D2 w2/(Y + D2 w2)].
inline double conditional_drift(const UrnState& s, bool w1, bool w2, const ReinforcementSpec& r1,
                                const ReinforcementSpec& r2) {
  if (!(s.y > 0.0) || !std::isfinite(s.y)) throw std::invalid_argument("conditional_drift: bad state");
  const double t1 = w1 ? detail::expectation_ratio(s.y, r1) : 0.0;
  const double t2 = w2 ? detail::expectation_ratio(s.y, r2) : 0.0;
  return s.z * (1.0 - s.z) * (t1 - t2);
}

// Sigma_bar, Sigma and Sigma_Z evaluated at a proportion limit.
inline CltVariances clt_variances(double z_inf, double m, double sigma1_sq, double sigma2_sq) {
  if (!(m > 0.0)) throw std::invalid_argument("clt_variances: m must be > 0");
  if (!(z_inf >= 0.0 && z_inf <= 1.0)) throw std::invalid_argument("clt_variances: z outside [0,1]");
  if (sigma1_sq < 0.0 || sigma2_sq < 0.0) throw std::invalid_argument("clt_variances: variance < 0");
  CltVariances v;
  v.sigma_bar = (1.0 - z_inf) * sigma1_sq + z_inf * sigma2_sq;
  const double zz = z_inf * (1.0 - z_inf);
  v.sigma_big = (1.0 + 2.0 * v.sigma_bar / (m * m)) * zz;
  v.sigma_z = (1.0 + v.sigma_bar / (m * m)) * zz;
  return v;
}

struct SDeltaWindow {
  double low = 0.0;
  double high = 0.0;
  double chosen = 0.0;  // midpoint of the open admissible interval
};

// Admissible window (0, exp(c1*delta/(2b)) - 1) for the linear-time
// increment comparisons.
inline SDeltaWindow s_delta_window(double c1, double b, double delta) {
  if (!(c1 > 0.0) || !(b > 0.0)) throw std::invalid_argument("s_delta_window: c1, b must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("s_delta_window: empty window, delta must be > 0");
  SDeltaWindow w;
  w.high = std::expm1(c1 * delta / (2.0 * b));
  w.chosen = 0.5 * w.high;
  return w;
}

// 1 iff Y > b(1-eps)/eps, in which case the next proportion increment is
// guaranteed below eps and the engine asserts it.
inline bool step_bound_guard(double y, double b, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("step_bound_guard: eps outside (0,1)");
  return y > b * (1.0 - epsilon) / epsilon;
}

// P(S <= c0 E[S]) <= exp(-(1-c0)^2 E[S] / 2) for sums of i.i.d. [0,1]
// variables; used as a replication-count planning bound.
inline double chernoff_lower_tail(double c0, double expected_sum) {
  if (!(c0 >= 0.0 && c0 < 1.0)) throw std::invalid_argument("chernoff_lower_tail: c0 outside [0,1)");
  if (!(expected_sum > 0.0)) throw std::invalid_argument("chernoff_lower_tail: expected_sum <= 0");
  const double d = 1.0 - c0;
  return std::exp(-0.5 * d * d * expected_sum);
}

}  // namespace urnlab
