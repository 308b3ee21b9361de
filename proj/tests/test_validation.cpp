#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "skewgp/errors.hpp"
#include "skewgp/validation.hpp"
#include "support.hpp"

using namespace skewgp;
using doctest::Approx;

namespace {

const RadialKernel kSE = RadialKernel::squared_exponential(1.0);

PairedPoint pp1(double a, double b) { return {Vector::Constant(1, a), Vector::Constant(1, b)}; }

void check_same(const ValidationReport& a, const ValidationReport& b) {
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].empirical == b.checks[i].empirical);
    CHECK(a.checks[i].mc_standard_error == b.checks[i].mc_standard_error);
    CHECK(a.checks[i].pass == b.checks[i].pass);
  }
  CHECK(a.metrics == b.metrics);
}

}  // namespace

TEST_CASE("check rules") {
  auto c = make_check("a", 1.0, 1.3, 0.1, 4.0);
  CHECK(c.tolerance() == Approx(0.4));
  CHECK(c.pass);
  CHECK_FALSE(make_check("b", 1.0, 1.5, 0.1, 4.0).pass);
  CHECK(make_check("c", 1.0, 1.02, 0.0, 0.0, 0.0, 0.03).pass);
  CHECK(make_check("d", 0.9, 0.95, 0.0, 0.0, 0.0, 0.0, Sidedness::AtLeast).pass);
  CHECK_FALSE(make_check("e", 0.9, 0.85, 0.01, 4.0, 0.0, 0.0, Sidedness::AtLeast).pass);
  CHECK(make_check("f", 2.0, 2.0 + 1e-10, 0.0, 0.0, 1e-9, 0.0, Sidedness::AtMost).pass);
  CHECK_FALSE(make_check("g", 2.0, 2.1, 0.0, 0.0, 1e-9, 0.0, Sidedness::AtMost).pass);
  CHECK(c.rule().find("4*se") != std::string::npos);
}

TEST_CASE("ensemble campaign") {
  const auto r = run_ensemble_validation(kSE, 2, 20000, 1);
  CHECK(r.all_pass());
  CHECK(r.diagnostics.empty());
  REQUIRE(r.find("var[H11_0_0]") != nullptr);
  CHECK(r.find("var[H11_0_0]")->closed_form == 16.0);
  CHECK(r.find("var[H11_0_1]")->closed_form == 8.0);
  CHECK(r.find("var[g1]")->closed_form == 4.0);
  CHECK(r.find("corr[g0,H12_0_1]") != nullptr);
  check_same(r, run_ensemble_validation(kSE, 2, 20000, 1));
}

TEST_CASE("covariance campaign") {
  std::mt19937_64 rng(4);
  const Vector a = test_support::normal_vector(rng, 2);
  std::vector<PairedPoint> pts = {test_support::random_point(rng, 2), test_support::random_point(rng, 2),
                                  PairedPoint(a, a)};
  const auto r = run_covariance_validation(kSE, ExpansionPoint::origin(2), pts, 20000, 5);
  CHECK(r.all_pass());
  const auto* matched = r.find("joint[f2,f2]");
  REQUIRE(matched != nullptr);
  CHECK(matched->empirical == 0.0);
  CHECK(r.find("model[2,2]")->empirical == 0.0);

  omp_set_num_threads(3);
  check_same(r, run_covariance_validation(kSE, ExpansionPoint::origin(2), pts, 20000, 5));
  omp_set_num_threads(1);
}

TEST_CASE("standard errors shrink with N") {
  const std::vector<PairedPoint> pts = {pp1(0.7, -0.4)};
  const auto z = ExpansionPoint::origin(1);
  const auto small = run_covariance_validation(kSE, z, pts, 10000, 2, false, true);
  const auto large = run_covariance_validation(kSE, z, pts, 100000, 2, false, true);
  const double ratio = small.find("model[0,0]")->mc_standard_error /
                       large.find("model[0,0]")->mc_standard_error;
  CHECK(ratio == Approx(std::sqrt(10.0)).epsilon(0.1));
}

TEST_CASE("below the statistical floor nothing fails on noise") {
  const auto r = run_covariance_validation(kSE, ExpansionPoint::origin(2),
                                           {PairedPoint(Vector{{0.3, 1.0}}, Vector{{-0.5, 0.2}})}, 100, 9);
  CHECK(r.all_pass());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics.front().find("statistical floor") != std::string::npos);
}

TEST_CASE("error campaign") {
  const auto z = ExpansionPoint::origin(1);
  const auto r = run_error_validation(kSE, z, {pp1(1, -1), pp1(1e-3, 0), pp1(0.4, 1.3)}, 20000, 6);
  CHECK(r.all_pass());
  const auto* v = r.find("var_error[0]");
  REQUIRE(v != nullptr);
  CHECK(v->closed_form == Approx(13.668600011172589).epsilon(1e-12));
  CHECK(v->empirical == Approx(13.6686).epsilon(0.03));
  CHECK(r.find("var_error[1]")->empirical < 1e-4);
  CHECK(r.find("flip_var_error[2]") != nullptr);
  CHECK(r.metric("var_pointwise[0]") == v->closed_form);
  CHECK_THROWS_AS(run_error_validation(kSE, z, {pp1(0.5, 0.5)}, 100, 1), InvalidArgument);
}

TEST_CASE("bound campaign") {
  const BoundConfig cfg{0.95, 0.95, {0.05}, 2, std::nullopt};
  const auto z = ExpansionPoint::origin(2);
  const auto r = run_bound_validation(kSE, cfg, z, 10000, 8);
  CHECK(r.all_pass());
  CHECK(r.find("coverage")->empirical >= 0.9025);
  CHECK(r.find("dominance") != nullptr);
  CHECK(r.metric("b_uniform") > 0.0);
  CHECK(r.metric("coverage_paper_literal") >= 0.0);

  const auto serial = reference::run_bound_validation(kSE, cfg, z, 10000, 8);
  for (int t : {1, 2, 5}) {
    omp_set_num_threads(t);
    check_same(run_bound_validation(kSE, cfg, z, 10000, 8), serial);
  }
  omp_set_num_threads(1);
  check_same(r, serial);

  const BoundConfig median{0.5, 0.95, {0.05}, 2, std::nullopt};
  const auto m = run_bound_validation(kSE, median, z, 10000, 8);
  CHECK(m.metric("b_uniform") == 0.0);
  CHECK(m.find("coverage")->empirical == Approx(0.5).epsilon(0.05));
  CHECK(m.find("coverage")->pass);

  CHECK_THROWS_AS(run_bound_validation(kSE, cfg, ExpansionPoint::origin(3), 100, 1), DimensionMismatch);
}
