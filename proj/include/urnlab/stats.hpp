// Estimation and test primitives over completed batches: moments with
// standard errors, harmonic-moment curves, studentized CLT samples,
// Kolmogorov-Smirnov distance against the standard normal, atom scans and
// the drift diagnostics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "urnlab/trajectory.hpp"
#include "urnlab/urn.hpp"

namespace urnlab {

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  std::uint64_t count = 0;
  double standard_error = 0.0;  // sqrt(variance / count)
};

inline MomentEstimate moment_estimate(std::span<const double> samples) {
  MomentEstimate m;
  m.count = samples.size();
  if (m.count == 0) return m;
  double sum = 0.0;
  for (double x : samples) sum += x;
  m.mean = sum / static_cast<double>(m.count);
  if (m.count > 1) {
    double ss = 0.0;
    for (double x : samples) {
      const double d = x - m.mean;
      ss += d * d;
    }
    m.variance = ss / static_cast<double>(m.count - 1);
  }
  m.standard_error = std::sqrt(m.variance / static_cast<double>(m.count));
  return m;
}

inline MomentEstimate moment_estimate(const std::vector<double>& samples) {
  return moment_estimate(std::span<const double>(samples));
}

// Standard normal CDF via erfc; absolute error well below the 1e-7 the
// distance tests assume.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

struct KsResult {
  double d = 0.0;
  std::uint64_t n = 0;
};

// D = sup_x |F_hat(x) - Phi(x)| evaluated at the sorted sample points.
inline KsResult ks_distance(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: empty input");
  for (double x : samples) {
    if (!std::isfinite(x)) throw std::invalid_argument("ks_distance: non-finite sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double phi = normal_cdf(samples[i]);
    const double hi = (static_cast<double>(i) + 1.0) / n - phi;
    const double lo = phi - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return KsResult{d, samples.size()};
}

// Z at multiplier x horizon, from a run extended past its statistic
// horizon.
inline double z_infinity_proxy(const TrajectoryRecord& record, std::uint64_t multiplier) {
  if (multiplier < 2) throw std::invalid_argument("z_infinity_proxy: multiplier must be >= 2");
  const std::uint64_t want = record.horizon * multiplier;
  if (record.extended_horizon < want) {
    throw std::invalid_argument("z_infinity_proxy: record not extended to multiplier x horizon");
  }
  return record.require_step(want).z;
}

enum class CltStatistic { kSampledFraction, kProportion };

struct CltRow {
  std::uint64_t replication = 0;
  double proxy = 0.0;
  double statistic = 0.0;    // sqrt(n) (N1n/n - proxy) or sqrt(n) (Zn - proxy)
  double sigma = 0.0;        // Sigma or Sigma_Z at the proxy
  double studentized = 0.0;  // statistic / sqrt(sigma)
  bool in_a_n_at_horizon = false;
};

struct CltSummary {
  CltStatistic which = CltStatistic::kSampledFraction;
  std::vector<CltRow> rows;         // included replications only
  std::uint64_t excluded = 0;       // sigma below floor
  double sigma_floor = 1e-6;
  std::uint64_t proxy_multiplier = 0;

  std::uint64_t included() const { return rows.size(); }
};

// Studentizes the chosen statistic at the Z-infinity proxies. The CLTs
// require equal reinforcement means, so callers pass the common m; the
// config-checking overload below rejects unequal means.
inline CltSummary studentize(std::span<const TrajectoryRecord> batch, double m, double sigma1_sq,
                             double sigma2_sq, CltStatistic which, double sigma_floor = 1e-6) {
  if (!(m > 0.0)) throw std::invalid_argument("studentize: m must be > 0");
  CltSummary out;
  out.which = which;
  out.sigma_floor = sigma_floor;
  for (const TrajectoryRecord& rec : batch) {
    if (rec.extended_horizon <= rec.horizon || rec.horizon == 0) {
      throw std::invalid_argument("studentize: records must come from extended runs");
    }
    const std::uint64_t mult = rec.extended_horizon / rec.horizon;
    out.proxy_multiplier = mult;
    const double proxy = z_infinity_proxy(rec, mult);
    const GridPoint& at_h = rec.require_step(rec.horizon);
    const double n = static_cast<double>(rec.horizon);
    const double stat =
        which == CltStatistic::kSampledFraction
            ? std::sqrt(n) * (static_cast<double>(at_h.n1) / n - proxy)
            : std::sqrt(n) * (at_h.z - proxy);
    const CltVariances v = clt_variances(proxy, m, sigma1_sq, sigma2_sq);
    const double sigma = which == CltStatistic::kSampledFraction ? v.sigma_big : v.sigma_z;
    if (sigma < sigma_floor) {
      ++out.excluded;
      continue;
    }
    CltRow row;
    row.replication = rec.replication_index;
    row.proxy = proxy;
    row.statistic = stat;
    row.sigma = sigma;
    row.studentized = stat / std::sqrt(sigma);
    row.in_a_n_at_horizon = at_h.in_a_n;
    out.rows.push_back(row);
  }
  return out;
}

inline CltSummary studentize(std::span<const TrajectoryRecord> batch, const ReinforcementSpec& r1,
                             const ReinforcementSpec& r2, CltStatistic which,
                             double sigma_floor = 1e-6) {
  if (r1.mean() != r2.mean()) {
    throw std::invalid_argument("studentize: generating config must have equal means");
  }
  return studentize(batch, r1.mean(), r1.variance(), r2.variance(), which, sigma_floor);
}

struct HarmonicPoint {
  std::uint64_t n = 0;
  MomentEstimate estimate;  // of (n / Y_n)^j
};

inline std::vector<HarmonicPoint> harmonic_moment_curve(std::span<const TrajectoryRecord> batch,
                                                        int j,
                                                        std::span<const std::uint64_t> grid) {
  if (j < 0) throw std::invalid_argument("harmonic_moment_curve: j must be >= 0");
  std::vector<HarmonicPoint> curve;
  curve.reserve(grid.size());
  std::vector<double> samples;
  for (std::uint64_t n : grid) {
    samples.clear();
    for (const TrajectoryRecord& rec : batch) {
      const GridPoint& p = rec.require_step(n);
      const double ratio = static_cast<double>(n) / p.y;
      samples.push_back(j == 0 ? 1.0 : std::pow(ratio, j));
    }
    curve.push_back(HarmonicPoint{n, moment_estimate(samples)});
  }
  return curve;
}

// Empirical frequency of z_lo <= Z_n <= z_hi with its standard error.
inline MomentEstimate band_probability(std::span<const TrajectoryRecord> batch, std::uint64_t n,
                                       double z_lo, double z_hi) {
  std::vector<double> samples;
  samples.reserve(batch.size());
  for (const TrajectoryRecord& rec : batch) {
    const GridPoint& p = rec.require_step(n);
    samples.push_back(p.z >= z_lo && p.z <= z_hi ? 1.0 : 0.0);
  }
  return moment_estimate(samples);
}

// Maximum bin mass of a histogram over (lo, hi); mass is relative to all
// samples, including those outside the window.
inline double atom_scan(std::span<const double> samples, double lo, double hi, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("atom_scan: bin_width must be > 0");
  if (!(lo < hi)) throw std::invalid_argument("atom_scan: need lo < hi");
  if (samples.empty()) return 0.0;
  const std::size_t bins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width));
  std::vector<std::uint64_t> counts(bins, 0);
  for (double x : samples) {
    if (x <= lo || x >= hi) continue;
    std::size_t idx = static_cast<std::size_t>((x - lo) / bin_width);
    if (idx >= bins) idx = bins - 1;
    ++counts[idx];
  }
  const std::uint64_t max_count = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(max_count) / static_cast<double>(samples.size());
}

struct DriftDiagnostic {
  MomentEstimate lhs;             // G(n,s) 1{Delta_n > delta}
  MomentEstimate lhs_complement;  // G(n,s) 1{Delta_n <= delta}
  MomentEstimate q_mass;          // 1{Delta_n > delta}
  std::uint64_t n = 0;
  std::uint64_t n_plus = 0;  // n + ceil(n s)
};

// Delta_n = |rho1 - Z_n|; G(n,s) = Delta_{n + ceil(ns)} - Delta_n.
inline DriftDiagnostic drift_diagnostic(std::span<const TrajectoryRecord> batch, std::uint64_t n,
                                        double s, double delta, double rho1) {
  if (!(s > 0.0)) throw std::invalid_argument("drift_diagnostic: s must be > 0");
  DriftDiagnostic out;
  out.n = n;
  out.n_plus = n + static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * s));
  std::vector<double> lhs, lhs_c, q;
  lhs.reserve(batch.size());
  lhs_c.reserve(batch.size());
  q.reserve(batch.size());
  for (const TrajectoryRecord& rec : batch) {
    const double z_n = rec.require_step(n).z;
    const double z_k = rec.require_step(out.n_plus).z;
    const double delta_n = std::abs(rho1 - z_n);
    const double g = std::abs(rho1 - z_k) - delta_n;
    const bool in_q = delta_n > delta;
    lhs.push_back(in_q ? g : 0.0);
    lhs_c.push_back(in_q ? 0.0 : g);
    q.push_back(in_q ? 1.0 : 0.0);
  }
  out.lhs = moment_estimate(lhs);
  out.lhs_complement = moment_estimate(lhs_c);
  out.q_mass = moment_estimate(q);
  return out;
}

}  // namespace urnlab
