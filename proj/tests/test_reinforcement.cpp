#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "urnlab/reinforcement.hpp"
#include "urnlab/rng.hpp"

using namespace urnlab;

namespace {

// Monte Carlo check that stored moments match the sampler: mean within
// 4 standard errors, second moment likewise; every draw inside [a,b].
void check_moments(const ReinforcementSpec& spec, std::uint64_t key, int n = 200000) {
  rng::Stream root{rng::mix64(key)};
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    rng::Sequence seq(root.child(static_cast<std::uint64_t>(i)));
    const double d = spec.sample(seq);
    REQUIRE(d >= spec.support_low());
    REQUIRE(d <= spec.support_high());
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double se_mean = std::sqrt(spec.variance() / n);
  CHECK(std::abs(mean - spec.mean()) <= 4.0 * se_mean + 1e-12);
  // SE of the sample variance ~ sqrt(2/n) * var for near-symmetric laws;
  // use a generous constant to keep the check honest but stable.
  const double se_var = 3.0 * (spec.variance() + 1e-12) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(var - spec.variance()) <= 4.0 * se_var + 1e-9);
}

}  // namespace

TEST_CASE("point mass: exact value, zero variance") {
  const auto r = ReinforcementSpec::point_mass(2.5);
  CHECK(r.mean() == 2.5);
  CHECK(r.variance() == 0.0);
  rng::Sequence seq(rng::Stream{1});
  CHECK(r.sample(seq) == 2.5);
  CHECK(seq.position() == 0);  // consumes nothing
}

TEST_CASE("two point moments") {
  const auto r = ReinforcementSpec::two_point(1.0, 3.0, 0.25);
  CHECK(r.mean() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(r.variance() == doctest::Approx(0.25 * 0.75 * 4.0).epsilon(1e-15));
  check_moments(r, 11);
}

TEST_CASE("uniform interval moments") {
  const auto r = ReinforcementSpec::uniform_interval(1.0, 3.0);
  CHECK(r.mean() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.variance() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  check_moments(r, 12);
}

TEST_CASE("scaled beta moments, assorted shapes") {
  check_moments(ReinforcementSpec::scaled_beta(1.0, 3.0, 2.0, 2.0), 13);
  check_moments(ReinforcementSpec::scaled_beta(0.5, 2.0, 0.5, 0.7), 14);
  check_moments(ReinforcementSpec::scaled_beta(1.0, 4.0, 5.0, 1.5), 15);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(ReinforcementSpec::point_mass(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ReinforcementSpec::point_mass(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(ReinforcementSpec::two_point(2.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ReinforcementSpec::two_point(1.0, 2.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(ReinforcementSpec::uniform_interval(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ReinforcementSpec::scaled_beta(1.0, 2.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("shifted support preserves shape and gap") {
  const auto r = ReinforcementSpec::uniform_interval(1.0, 3.0).shifted(0.5);
  CHECK(r.support_low() == 1.5);
  CHECK(r.support_high() == 3.5);
  CHECK(r.mean() == doctest::Approx(2.5));
  CHECK_THROWS_AS(ReinforcementSpec::point_mass(1.0).shifted(-1.0), std::invalid_argument);
}
