#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "evitherm/core.hpp"

using namespace evitherm;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
const ModelConstants kDefaults{};
const QuadratureConfig kCfg{};
}  // namespace

TEST_CASE("log_lr values and conventions") {
  CHECK(log_lr(0.25, {4.0, 1.0}) ==
        doctest::Approx(0.5232481437645479).epsilon(1e-14));
  // theta = 1/2 always gives LR = 1
  CHECK(std::abs(log_lr(0.5, {7.0, 3.0})) <= 1e-13);
  // x = 0 keeps a finite value at theta = 0
  CHECK(log_lr(0.0, {5.0, 0.0}) ==
        doctest::Approx(5.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(log_lr(1.0, {5.0, 0.0}) == -kInf);
  CHECK(log_lr(0.0, {5.0, 2.0}) == -kInf);
  CHECK_THROWS_AS(log_lr(1.5, {5.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(log_lr(-0.1, {5.0, 2.0}), std::domain_error);
}

TEST_CASE("validate_point honors the side convention") {
  CHECK_NOTHROW(validate_point({10.0, 5.0}, kDefaults));
  CHECK_THROWS_AS(validate_point({10.0, 6.0}, kDefaults), std::domain_error);
  ModelConstants two = kDefaults;
  two.side = Side::two_sided;
  CHECK_NOTHROW(validate_point({10.0, 6.0}, two));
  CHECK_NOTHROW(validate_point({10.0, 10.0}, two));
  CHECK_THROWS_AS(validate_point({10.0, 10.5}, two), std::domain_error);
  CHECK_THROWS_AS(validate_point({-1.0, 0.0}, kDefaults), std::domain_error);
  CHECK_THROWS_AS(validate_point({kInf, 0.0}, kDefaults), std::domain_error);
}

TEST_CASE("one-sided log volume against frozen references") {
  struct Row {
    double n, x, want;
  };
  const Row rows[] = {
      {2.0, 0.0, 0.15415067982725830},     // = ln(7/6)
      {10.0, 3.0, -0.37414263697912324},
      {7.0, 2.5, -0.86994716610020018},
      {20.0, 5.0, 1.1561767279308274},
      {1.0, 0.0, -0.28768207245178093},
  };
  for (const Row& r : rows)
    CHECK(log_volume({r.n, r.x}, kDefaults, kCfg) ==
          doctest::Approx(r.want).epsilon(1e-13));
  CHECK(log_volume({1000.0, 100.0}, kDefaults, kCfg) ==
        doctest::Approx(364.32513834736552).epsilon(1e-12));
}

TEST_CASE("two-sided log volume") {
  ModelConstants two = kDefaults;
  two.side = Side::two_sided;
  CHECK(log_volume({50.0, 20.0}, two, kCfg) ==
        doctest::Approx(-0.75838074691644295).epsilon(1e-13));
  // symmetric in x about n/2
  CHECK(log_volume({50.0, 20.0}, two, kCfg) ==
        doctest::Approx(log_volume({50.0, 30.0}, two, kCfg)).epsilon(1e-14));
  // one-sided equals two-sided plus the half-interval mass factor, so it
  // is strictly smaller for x < n/2
  CHECK(log_volume({50.0, 20.0}, kDefaults, kCfg) <
        log_volume({50.0, 20.0}, two, kCfg));
}

TEST_CASE("volume route agrees with direct quadrature of the ratio curve") {
  for (double n : {3.0, 10.0, 47.5}) {
    for (double x : {0.0, 1.0, 0.31 * n, 0.5 * n}) {
      ObservationPoint pt{n, x};
      double direct = log_quadrature(
          [&](double t) { return log_lr(t, pt); }, 0.0, 0.5, kCfg);
      CHECK(log_volume(pt, kDefaults, kCfg) ==
            doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("entropy closed form") {
  CHECK(entropy({10.0, 2.0}, kDefaults) ==
        doctest::Approx(1.9274475702175747).epsilon(1e-14));
  CHECK(entropy({7.0, 3.5}, kDefaults) == doctest::Approx(0.0));
  CHECK(entropy({12.0, 0.0}, kDefaults) ==
        doctest::Approx(12.0 * std::log(2.0)).epsilon(1e-15));
  ModelConstants offset = kDefaults;
  offset.entropy_offset_k = 0.7;
  CHECK(entropy({10.0, 2.0}, offset) ==
        doctest::Approx(1.9274475702175747 + 0.7).epsilon(1e-14));
}

TEST_CASE("make_state evidence against frozen references") {
  struct Row {
    double n, x, want;
  };
  const Row rows[] = {
      {2.0, 0.0, 2.2737469759407953},
      {10.0, 3.0, 2.2210519789099242},
      {1.0, 0.0, 1.9229994270765445},
      {20.0, 5.0, 2.6468651935306699},
      {7.0, 2.5, 2.1665174165844555},
  };
  for (const Row& r : rows)
    CHECK(make_state({r.n, r.x}, kDefaults, kCfg).e() ==
          doctest::Approx(r.want).epsilon(1e-12));
}

TEST_CASE("state identities") {
  ModelConstants alt = kDefaults;
  alt.r = 2.3;
  alt.c_v = 0.9;
  for (double n : {4.0, 33.0}) {
    for (double x : {0.0, 0.2 * n, 0.5 * n}) {
      EvidentialState st = make_state({n, x}, alt, kCfg);
      CHECK(st.p_e * st.v_e() ==
            doctest::Approx(alt.r * st.e()).epsilon(1e-13));
      CHECK(st.log_e ==
            doctest::Approx((st.s_e - alt.r * st.log_v_e) / alt.c_v)
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("entropy offset rescales evidence by exp(k/c_v)") {
  ModelConstants offset = kDefaults;
  offset.entropy_offset_k = 0.9;
  EvidentialState base = make_state({10.0, 3.0}, kDefaults, kCfg);
  EvidentialState moved = make_state({10.0, 3.0}, offset, kCfg);
  CHECK(moved.log_e - base.log_e ==
        doctest::Approx(0.9 / kDefaults.c_v).epsilon(1e-13));
}

TEST_CASE("evidence never drops below 2^(r/c_v) at default constants") {
  double floor = std::pow(2.0, kDefaults.r / kDefaults.c_v);
  for (double n : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0})
    for (double x : {0.0, 0.25 * n, 0.5 * n})
      CHECK(make_state({n, x}, kDefaults, kCfg).e() >= floor - 1e-12);
}
