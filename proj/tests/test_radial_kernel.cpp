#include <doctest.h>

#include <cmath>

#include "skewgp/errors.hpp"
#include "skewgp/radial_kernel.hpp"

using namespace skewgp;
using doctest::Approx;

namespace {

std::vector<RadialKernel> sample_kernels() {
  return {RadialKernel::squared_exponential(0.5), RadialKernel::squared_exponential(1.7),
          RadialKernel::rational_quadratic(1.5, 2.0), RadialKernel::rational_quadratic(0.7, 0.5),
          RadialKernel::matern52(1.0), RadialKernel::matern52(0.8)};
}

}  // namespace

TEST_CASE("reference values from mpmath") {
  const auto se = RadialKernel::squared_exponential(2.0);
  CHECK(se.value(4.0) == Approx(0.36787944117144232).epsilon(1e-15));
  CHECK(se.d1(4.0) == Approx(-0.09196986029286058).epsilon(1e-14));
  CHECK(se.d2(4.0) == Approx(0.022992465073215145).epsilon(1e-14));

  const auto rq = RadialKernel::rational_quadratic(1.5, 2.0);
  CHECK(rq.value(0.7) == Approx(0.86087788287809545).epsilon(1e-14));
  CHECK(rq.d1(0.7) == Approx(-0.17750059440785473).epsilon(1e-14));
  CHECK(rq.d2(0.7) == Approx(0.054897091053975691).epsilon(1e-14));
  CHECK(RadialKernel::rational_quadratic(1.0, 3.0).d1(0.0) == Approx(-0.5).epsilon(1e-15));

  const auto m1 = RadialKernel::matern52(1.0);
  CHECK(m1.value(1.0) == Approx(0.52399410883182031).epsilon(1e-14));
  CHECK(m1.d1(1.0) == Approx(-0.28822019394264783).epsilon(1e-14));
  CHECK(m1.d2(1.0) == Approx(0.22266234512580365).epsilon(1e-14));
  const auto m2 = RadialKernel::matern52(0.8);
  CHECK(m2.value(0.3) == Approx(0.71653787103902836).epsilon(1e-14));
  CHECK(m2.d1(0.3) == Approx(-0.71292554505671107).epsilon(1e-14));
  CHECK(m2.d2(0.3) == Approx(1.1003323726267851).epsilon(1e-14));
}

TEST_CASE("values at the origin") {
  for (double l : {0.5, 1.0, 2.0}) {
    const auto se = RadialKernel::squared_exponential(l);
    CHECK(se.value(0.0) == 1.0);
    CHECK(std::abs(se.d1(0.0) + 1.0 / (l * l)) <= 1e-14);
    CHECK(std::abs(se.d2(0.0) - 1.0 / (l * l * l * l)) <= 1e-14);
  }
  const auto m = RadialKernel::matern52(1.0);
  CHECK(m.value(0.0) == 1.0);
  CHECK(m.d1(0.0) == Approx(-5.0 / 6.0).epsilon(1e-15));
  CHECK(m.d2(0.0) == Approx(25.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("derivatives agree with central differences") {
  for (const auto& k : sample_kernels()) {
    for (double tau : {0.05, 0.3, 1.0, 2.5, 6.0}) {
      const double step = 1e-5 * std::max(1.0, tau);
      const double fd1 = (k.value(tau + step) - k.value(tau - step)) / (2 * step);
      const double fd2 = (k.d1(tau + step) - k.d1(tau - step)) / (2 * step);
      CHECK(k.d1(tau) == Approx(fd1).epsilon(1e-7));
      CHECK(k.d2(tau) == Approx(fd2).epsilon(1e-7));
    }
  }
}

TEST_CASE("matern series branch is continuous at the switch") {
  const auto k = RadialKernel::matern52(1.3);
  const double t = k.series_threshold();
  for (int order = 0; order <= 2; ++order) {
    const double below = k.eval(t * (1 - 1e-12), order);
    const double above = k.eval(t, order);
    CHECK(std::abs(below - above) <= 1e-12 * std::abs(above));
  }
  CHECK(k.drop(t * (1 - 1e-12)) == Approx(k.drop(t)).epsilon(1e-9));
}

TEST_CASE("drop keeps relative precision near zero") {
  for (const auto& k : sample_kernels()) {
    for (double tau : {1e-14, 1e-10, 1e-6, 1e-3}) {
      // h(0) - h(tau) = -h'(0) tau - h''(0) tau^2 / 2 + O(tau^2.5)
      const double expect = -k.d1(0.0) * tau - 0.5 * k.d2(0.0) * tau * tau;
      CHECK(k.drop(tau) == Approx(expect).epsilon(tau < 1e-6 ? 1e-8 : 1e-4));
    }
    CHECK(k.drop(2.0) == Approx(1.0 - k.value(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("decay conditions hold for the built-in families") {
  for (const auto& k : sample_kernels()) {
    const auto r = monotonicity_check(k, 10.0, 2001);
    CHECK(r.all_pass());
    CHECK(r.conditions.size() == 6);
  }
}

TEST_CASE("decay check reports the first violation of a synthetic profile") {
  // cos-damped profile: h' changes sign, so "h' <= 0" must fail.
  const RadialProfile bad = [](double t, int order) {
    const double c = std::cos(t), s = std::sin(t), e = std::exp(-0.1 * t);
    switch (order) {
      case 0:
        return c * e;
      case 1:
        return (-s - 0.1 * c) * e;
      default:
        return (-c + 0.2 * s + 0.01 * c) * e;
    }
  };
  const auto r = monotonicity_check(bad, 10.0, 1001);
  CHECK_FALSE(r.all_pass());
  const auto* c = r.find("h' <= 0");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
  REQUIRE(c->first_violation.has_value());
  CHECK(c->violation_tau > 3.0);
  CHECK(r.find("h(0) > 0")->pass);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(RadialKernel::squared_exponential(0.0), InvalidArgument);
  CHECK_THROWS_AS(RadialKernel::squared_exponential(-1.0), InvalidArgument);
  CHECK_THROWS_AS(RadialKernel::rational_quadratic(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(RadialKernel::matern52(std::nan("")), InvalidArgument);
  const auto k = RadialKernel::squared_exponential(1.0);
  CHECK_THROWS_AS(k.eval(1.0, 3), UnsupportedOrder);
  CHECK_THROWS_AS(k.eval(-1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(monotonicity_check(k, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(parse_family("cauchy"), InvalidArgument);
  CHECK(parse_family(family_name(KernelFamily::Matern52)) == KernelFamily::Matern52);
}

TEST_CASE("injected negative h'' fails at the first grid point") {
  const auto se = RadialKernel::squared_exponential(1.0);
  const RadialProfile hooked = [&](double t, int order) {
    return order == 2 ? -1.0 : se.eval(t, order);
  };
  const auto r = monotonicity_check(hooked, 10.0, 1000);
  const auto* c = r.find("h'' >= 0");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
  CHECK(c->first_violation == 0u);
  CHECK(monotonicity_check(RadialKernel::rational_quadratic(1.0, 2.0), 10.0, 1000).all_pass());
}
