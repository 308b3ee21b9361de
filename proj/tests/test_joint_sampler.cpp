#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "skewgp/joint_sampler.hpp"
#include "support.hpp"

using namespace skewgp;
using doctest::Approx;

namespace {

PairedPoint pp1(double a, double b) { return {Vector::Constant(1, a), Vector::Constant(1, b)}; }

}  // namespace

TEST_CASE("cross covariances, D=1") {
  const auto k = RadialKernel::squared_exponential(1.0);
  const auto z = ExpansionPoint::origin(1);
  const auto c = cross_cov_derivatives(k, z, pp1(1, 2));
  CHECK(c.g(0) == Approx(-4 * std::exp(-5.0)).epsilon(1e-15));
  CHECK(c.g(0) == Approx(-0.026951787996341868).epsilon(1e-14));
  CHECK(c.h11(0, 0) == Approx(-0.16171072797805121).epsilon(1e-14));
  CHECK(c.h12(0, 0) == 0.0);
  const auto m = cross_cov_derivatives(k, z, pp1(0.7, 0.7));
  CHECK(m.g.norm() == 0.0);
  CHECK(m.h11.norm() == 0.0);
}

TEST_CASE("cross covariances match finite differences of the field covariance") {
  // g = grad_{x1} f, H11 = Hess_{x1 x1} f, H12 = Hess_{x1 x2} f at (z*, z*).
  std::mt19937_64 rng(21);
  for (const auto& k : {RadialKernel::squared_exponential(1.1), RadialKernel::matern52(1.4)}) {
    const int d = 2;
    const ExpansionPoint z(test_support::normal_vector(rng, d, 0.3));
    const auto y = test_support::random_point(rng, d);
    const auto c = cross_cov_derivatives(k, z, y);
    const double e = 1e-4;
    auto kf = [&](const Vector& u1, const Vector& u2) { return cov_skew(k, PairedPoint(u1, u2), y); };
    auto unit = [&](int i) { return Vector::Unit(d, i); };
    const Vector zs = z.zstar();
    for (int i = 0; i < d; ++i) {
      const double gi = (kf(zs + e * unit(i), zs) - kf(zs - e * unit(i), zs)) / (2 * e);
      CHECK(c.g(i) == Approx(gi).epsilon(1e-6));
      for (int j = 0; j < d; ++j) {
        const Vector ei = e * unit(i), ej = e * unit(j);
        const double h11 = (kf(zs + ei + ej, zs) - kf(zs + ei - ej, zs) - kf(zs - ei + ej, zs) +
                            kf(zs - ei - ej, zs)) / (4 * e * e);
        const double h12 = (kf(zs + ei, zs + ej) - kf(zs + ei, zs - ej) - kf(zs - ei, zs + ej) +
                            kf(zs - ei, zs - ej)) / (4 * e * e);
        CHECK(std::abs(c.h11(i, j) - h11) <= 1e-5);
        CHECK(std::abs(c.h12(i, j) - h12) <= 1e-5);
      }
    }
  }
}

TEST_CASE("gram without points is the derivative ensemble") {
  const auto g = build_joint_gram(RadialKernel::squared_exponential(1.0), ExpansionPoint::origin(2), {});
  Vector expect(6);
  expect << 4, 4, 16, 8, 16, 8;
  CHECK(g.matrix().rows() == 6);
  CHECK((Matrix(g.matrix().diagonal().asDiagonal()) - g.matrix()).norm() == 0.0);
  CHECK(g.matrix().diagonal() == expect);
  CHECK(g.jitter_used() == 0.0);
}

TEST_CASE("matched point gives an exact zero coordinate") {
  const auto k = RadialKernel::squared_exponential(1.0);
  const auto z = ExpansionPoint::origin(2);
  std::mt19937_64 rng(2);
  const Vector a = test_support::normal_vector(rng, 2);
  const std::vector<PairedPoint> pts = {test_support::random_point(rng, 2), PairedPoint(a, a)};
  const auto g = build_joint_gram(k, z, pts);
  CHECK(g.matrix().row(1).norm() == 0.0);
  CHECK(g.matrix().col(1).norm() == 0.0);
  CHECK(g.active().size() == static_cast<std::size_t>(g.layout().total() - 1));
  const RowMatrix draws = sample_joint(g, 5, 100);
  CHECK(draws.col(1).norm() == 0.0);
}

TEST_CASE("gram is symmetric positive semidefinite") {
  std::mt19937_64 rng(8);
  for (const auto& k : {RadialKernel::squared_exponential(0.9), RadialKernel::rational_quadratic(1.0, 2.0),
                        RadialKernel::matern52(1.0)}) {
    for (int d = 1; d <= 3; ++d) {
      std::vector<PairedPoint> pts;
      for (int i = 0; i < 5; ++i) pts.push_back(test_support::random_point(rng, d));
      const ExpansionPoint z(test_support::normal_vector(rng, d, 0.2));
      const auto g = build_joint_gram(k, z, pts);
      CHECK((g.matrix() - g.matrix().transpose()).norm() == 0.0);
      Eigen::SelfAdjointEigenSolver<Matrix> es(g.matrix());
      CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
    }
  }
}

TEST_CASE("duplicate points are handled by jitter") {
  const auto k = RadialKernel::squared_exponential(1.0);
  const auto x = pp1(0.5, -0.3);
  const auto g = build_joint_gram(k, ExpansionPoint::origin(1), {x, x});
  CHECK(g.jitter_used() > 0.0);
  const RowMatrix r = sample_joint(g, 1, 10);
  CHECK(std::abs(r(3, 0) - r(3, 1)) < 1e-4);
}

TEST_CASE("draws are deterministic and independent of threads") {
  const auto k = RadialKernel::squared_exponential(1.0);
  std::mt19937_64 rng(9);
  std::vector<PairedPoint> pts;
  for (int i = 0; i < 3; ++i) pts.push_back(test_support::random_point(rng, 2));
  const auto g = build_joint_gram(k, ExpansionPoint::origin(2), pts);

  CHECK(sample_joint(g, 17, 0).rows() == 0);
  CHECK(sample_joint(g, 17, 1) == sample_joint(g, 17, 1));
  const RowMatrix serial = reference::sample_joint(g, 17, 3000);
  for (int threads : {1, 2, 4, 7}) {
    omp_set_num_threads(threads);
    CHECK(sample_joint(g, 17, 3000) == serial);
  }
  CHECK(serial.row(123).transpose() == sample_joint_row(g, 17, 123));
  CHECK(sample_joint(g, 18, 10) != sample_joint(g, 17, 10));
}

TEST_CASE("model decoded from a joint draw reproduces f~") {
  const auto k = RadialKernel::squared_exponential(1.0);
  std::mt19937_64 rng(10);
  const auto x = test_support::random_point(rng, 3);
  const ExpansionPoint z(test_support::normal_vector(rng, 3, 0.1));
  const auto g = build_joint_gram(k, z, {x});
  const Vector row = sample_joint_row(g, 4, 0);
  const auto m = model_from_row(g, row);
  const Vector c = derivative_functional(x, z);
  CHECK(eval_model(m, x) == Approx(c.dot(row.tail(c.size()))).epsilon(1e-12));
}

TEST_CASE("layout names") {
  const GramLayout l{1, 2};
  const std::vector<std::string> expect = {"f0", "g0", "g1", "H11_0_0", "H11_0_1", "H11_1_1", "H12_0_1"};
  CHECK(l.names() == expect);
  CHECK(l.total() == 7);
}
