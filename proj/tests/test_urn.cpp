#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "urnlab/rng.hpp"
#include "urnlab/urn.hpp"

using namespace urnlab;

TEST_CASE("step: red draw reinforces red") {
  auto s = UrnState::initial(1.0, 1.0);
  s = step(s, true, true, 0.3, 1.0, 1.0);  // 0.3 <= 0.5 draws red
  CHECK(s.y1 == 2.0);
  CHECK(s.y2 == 1.0);
  CHECK(s.z == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(s.n1 == 1);
  CHECK(s.n2 == 0);
  CHECK(s.n == 1);
}

TEST_CASE("step: suppressed indicator leaves the composition unchanged") {
  auto s = UrnState::initial(9.0, 1.0);  // z = 0.9
  const auto [w1, w2] = indicators(s.z, 0.8, 0.2);
  CHECK(w1 == false);
  CHECK(w2 == true);
  const auto before_y1 = s.y1;
  s = step(s, w1, w2, 0.5, 1.0, 1.0);  // 0.5 <= 0.9 draws red, no replacement
  CHECK(s.y1 == before_y1);
  CHECK(s.y2 == 1.0);
  CHECK(s.n1 == 1);
}

TEST_CASE("step: white draw arithmetic") {
  auto s = UrnState::initial(2.0, 3.0);  // z = 0.4
  s = step(s, true, true, 0.9, 1.0, 2.0);  // 0.9 > 0.4 draws white
  CHECK(s.y2 == 5.0);
  CHECK(s.z == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("step rejects invalid input") {
  auto s = UrnState::initial(1.0, 1.0);
  CHECK_THROWS_AS(step(s, false, false, 0.5, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(step(s, true, true, 1.5, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(step(s, true, true, 0.5, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(step(s, true, true, std::nan(""), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("indicators: inclusive ties and ordering") {
  CHECK(indicators(0.5, 0.5, 0.5) == std::make_pair(true, true));
  CHECK(indicators(0.9, 0.8, 0.2) == std::make_pair(false, true));
  CHECK(indicators(0.1, 0.8, 0.2) == std::make_pair(true, false));
  CHECK_THROWS_AS(indicators(0.5, 0.2, 0.8), std::invalid_argument);
}

TEST_CASE("indicators never emit (0,0)") {
  rng::Stream s{rng::mix64(5)};
  for (int i = 0; i < 5000; ++i) {
    const double z = s.unit_at(3 * i);
    double r2 = s.unit_at(3 * i + 1);
    double r1 = s.unit_at(3 * i + 2);
    if (r2 > r1) std::swap(r1, r2);
    const auto [w1, w2] = indicators(z, r1, r2);
    CHECK((w1 || w2));
  }
}

TEST_CASE("conditional drift: identical point masses are a martingale") {
  const auto r = ReinforcementSpec::point_mass(1.7);
  auto s = UrnState::initial(3.0, 5.0);
  CHECK(conditional_drift(s, true, true, r, r) == 0.0);
}

TEST_CASE("conditional drift: point-mass arithmetic") {
  // Y = 10, z = 0.5, d1 = 2, d2 = 1: B = 2/12 - 1/11 = 5/66.
  auto s = UrnState::initial(5.0, 5.0);
  const double drift = conditional_drift(s, true, true, ReinforcementSpec::point_mass(2.0),
                                         ReinforcementSpec::point_mass(1.0));
  CHECK(drift == doctest::Approx(0.25 * 5.0 / 66.0).epsilon(1e-15));
}

TEST_CASE("conditional drift: one-sided signs") {
  const auto c = ReinforcementSpec::point_mass(1.0);
  auto s = UrnState::initial(4.0, 6.0);
  const double up = conditional_drift(s, true, false, c, c);
  CHECK(up == doctest::Approx(s.z * (1.0 - s.z) * 1.0 / (s.y + 1.0)).epsilon(1e-15));
  CHECK(up > 0.0);
  CHECK(conditional_drift(s, false, true, c, c) < 0.0);
}

TEST_CASE("conditional drift: quadrature matches the uniform closed form") {
  // E[D/(Y+D)] = 1 - Y ln((Y+b)/(Y+a)) / (b-a) for D ~ U[a,b].
  const auto r = ReinforcementSpec::uniform_interval(1.0, 3.0);
  const auto pm = ReinforcementSpec::point_mass(1.0);
  for (double y : {2.0, 10.0, 123.0, 9999.0}) {
    auto s = UrnState::initial(0.5 * y, 0.5 * y);
    const double expected_ratio = 1.0 - y * std::log((y + 3.0) / (y + 1.0)) / 2.0;
    const double drift = conditional_drift(s, true, false, r, pm);
    CHECK(drift == doctest::Approx(0.25 * expected_ratio).epsilon(1e-9));
  }
}

TEST_CASE("conditional drift: beta quadrature matches Monte Carlo") {
  const auto r = ReinforcementSpec::scaled_beta(1.0, 3.0, 0.6, 2.0);
  const auto pm = ReinforcementSpec::point_mass(1.0);
  const double y = 7.0;
  auto s = UrnState::initial(3.5, 3.5);
  const double drift = conditional_drift(s, true, false, r, pm);

  rng::Stream root{rng::mix64(77)};
  const int n = 400000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    rng::Sequence seq(root.child(static_cast<std::uint64_t>(i)));
    const double d = r.sample(seq);
    const double v = d / (y + d);
    sum += v;
    sum_sq += v * v;
  }
  const double mc = sum / n;
  const double se = std::sqrt((sum_sq / n - mc * mc) / n);
  CHECK(std::abs(drift - 0.25 * mc) <= 4.0 * 0.25 * se + 1e-12);
}

TEST_CASE("clt variances: closed-form values") {
  const auto v0 = clt_variances(0.5, 1.0, 0.0, 0.0);
  CHECK(v0.sigma_bar == 0.0);
  CHECK(v0.sigma_big == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(v0.sigma_z == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(v0.sigma_big == v0.sigma_z);  // degenerate case Sigma == Sigma_Z

  for (double z : {0.0, 1.0}) {
    const auto v = clt_variances(z, 2.0, 1.0, 0.5);
    CHECK(v.sigma_big == 0.0);
    CHECK(v.sigma_z == 0.0);
  }

  const auto v = clt_variances(0.5, 2.0, 1.0, 1.0);
  CHECK(v.sigma_bar == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.sigma_big == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(v.sigma_z == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(v.sigma_big >= v.sigma_z);

  CHECK_THROWS_AS(clt_variances(0.5, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("s_delta window") {
  const auto w = s_delta_window(2.0, 1.0, std::log(4.0));
  CHECK(w.high == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(w.chosen == doctest::Approx(1.5).epsilon(1e-14));

  const auto w2 = s_delta_window(1.0, 1.0, 2.0);
  CHECK(w2.high == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(w2.chosen == doctest::Approx(0.5 * (std::exp(1.0) - 1.0)).epsilon(1e-14));

  CHECK_THROWS_AS(s_delta_window(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(s_delta_window(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("step bound guard thresholds") {
  CHECK(step_bound_guard(2.0, 1.0, 0.5) == true);
  CHECK(step_bound_guard(0.5, 1.0, 0.5) == false);
  CHECK(step_bound_guard(16.0, 4.0, 0.2) == false);  // strict inequality at the boundary
  CHECK(step_bound_guard(16.0001, 4.0, 0.2) == true);
  CHECK_THROWS_AS(step_bound_guard(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step_bound_guard(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("chernoff lower tail") {
  CHECK(chernoff_lower_tail(0.9999999, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(chernoff_lower_tail(0.5, 8.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(chernoff_lower_tail(0.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(chernoff_lower_tail(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chernoff_lower_tail(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("mass conservation over random steps") {
  rng::Stream s{rng::mix64(31337)};
  auto urn = UrnState::initial(1.0, 1.0);
  std::uint64_t i = 0;
  for (int k = 0; k < 20000; ++k) {
    const double u = s.unit_at(i++);
    const double d1 = 1.0 + s.unit_at(i++);
    const double d2 = 1.0 + s.unit_at(i++);
    bool w1 = s.unit_at(i++) < 0.8;
    bool w2 = s.unit_at(i++) < 0.8;
    if (!w1 && !w2) w2 = true;
    const UrnState before = urn;
    urn = step(urn, w1, w2, u, d1, d2);
    const double delta = urn.y - before.y;
    const double ulp_scale = 8.0 * 2.220446049250313e-16 * urn.y;
    const bool drew_red = urn.n1 == before.n1 + 1;
    if (drew_red) {
      CHECK(urn.y2 == before.y2);
      CHECK((delta == 0.0 || std::abs(delta - d1) <= ulp_scale));
    } else {
      CHECK(urn.y1 == before.y1);
      CHECK((delta == 0.0 || std::abs(delta - d2) <= ulp_scale));
    }
    CHECK(urn.y1 >= 1.0);
    CHECK(urn.y2 >= 1.0);
    CHECK(urn.n1 + urn.n2 == urn.n);
    CHECK(urn.z == doctest::Approx(urn.y1 / (urn.y1 + urn.y2)).epsilon(1e-15));
  }
}
