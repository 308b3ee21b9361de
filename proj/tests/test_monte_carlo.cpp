#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "skewgp/errors.hpp"
#include "skewgp/monte_carlo.hpp"
#include "skewgp/rng.hpp"

using namespace skewgp;
using doctest::Approx;

namespace {

void correlated_pair(std::uint64_t row, Eigen::Ref<Eigen::VectorXd> out) {
  Engine e = stream_for(77, row);
  const double a = standard_normal(e), b = standard_normal(e);
  out << a, 0.6 * a + 0.8 * b, 1.0 + a;
}

}  // namespace

TEST_CASE("moments of a known distribution") {
  const auto m = accumulate_moments(200000, 3, correlated_pair);
  CHECK(m.count == 200000);
  CHECK(std::abs(m.zero_mean_cov(0, 0) - 1.0) < 4 * m.zero_mean_cov_se(0, 0));
  CHECK(std::abs(m.zero_mean_cov(0, 1) - 0.6) < 4 * m.zero_mean_cov_se(0, 1));
  CHECK(m.zero_mean_cov_se(0, 0) == Approx(std::sqrt(2.0 / 200000)).epsilon(0.05));
  CHECK(std::abs(m.correlation(0, 1) - 0.6) < 0.01);
  CHECK(std::abs(m.centered_cov(2, 2) - 1.0) < 4 * m.centered_var_se(0));
  CHECK(std::abs(m.mean(2) - 1.0) < 0.01);
}

TEST_CASE("standard error shrinks like 1/sqrt(N)") {
  const auto small = accumulate_moments(10000, 3, correlated_pair);
  const auto large = accumulate_moments(100000, 3, correlated_pair);
  CHECK(small.zero_mean_cov_se(0, 1) / large.zero_mean_cov_se(0, 1) == Approx(std::sqrt(10.0)).epsilon(0.05));
}

TEST_CASE("parallel reduction is bitwise equal to the serial one") {
  const auto serial = reference::accumulate_moments(5000, 3, correlated_pair);
  for (int t : {1, 2, 3, 8}) {
    omp_set_num_threads(t);
    const auto par = accumulate_moments(5000, 3, correlated_pair);
    CHECK(par.mean == serial.mean);
    CHECK(par.cross == serial.cross);
    CHECK(par.cross_sq == serial.cross_sq);
  }
}

TEST_CASE("argument checks and seed derivation") {
  CHECK_THROWS_AS(accumulate_moments(0, 2, correlated_pair), InvalidArgument);
  CHECK_THROWS_AS(accumulate_moments(10, 0, correlated_pair), InvalidArgument);
  static_assert(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
}
