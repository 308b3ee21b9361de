#include "skewgp/chi_squared.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "skewgp/errors.hpp"

namespace skewgp {

void QuantileQuery::validate() const {
  if (dof < 1) throw InvalidArgument("degrees of freedom must be >= 1, got " + std::to_string(dof));
  if (!(prob > 0.0 && prob < 1.0)) {
    throw InvalidArgument("probability must lie in (0, 1), got " + std::to_string(prob));
  }
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("normal quantile needs p in (0, 1), got " + std::to_string(p));
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

namespace {

// log(x^a e^{-x} / Gamma(a)). For large a the Stirling form keeps the
// cancellation between a log x, x and lgamma(a) out of the result.
double log_gamma_prefactor(double a, double x) {
  if (a < 10.0) return a * std::log(x) - x - std::lgamma(a);
  const double t = (x - a) / a;
  const double inv = 1.0 / a;
  const double inv2 = inv * inv;
  const double stirling =
      inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
  return a * (std::log1p(t) - t) + 0.5 * std::log(a / (2.0 * std::numbers::pi)) - stirling;
}

constexpr int kMaxIterations = 100000;
constexpr double kEps = 1e-17;

double gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_gamma_prefactor(a, x));
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_gamma_prefactor(a, x)) * h;
}

}  // namespace

namespace {

void check_gamma_args(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgument("incomplete gamma needs a > 0");
  if (!(x >= 0.0)) throw InvalidArgument("incomplete gamma needs x >= 0");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double chi2_cdf(int dof, double x) {
  if (dof < 1) throw InvalidArgument("degrees of freedom must be >= 1");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_sf(int dof, double x) {
  if (dof < 1) throw InvalidArgument("degrees of freedom must be >= 1");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_pdf(int dof, double x) {
  if (dof < 1) throw InvalidArgument("degrees of freedom must be >= 1");
  if (x <= 0.0) return dof == 2 ? 0.5 : (dof == 1 ? std::numeric_limits<double>::infinity() : 0.0);
  return std::exp(log_gamma_prefactor(0.5 * dof, 0.5 * x)) / x;
}

double chi2_quantile(const QuantileQuery& q) {
  q.validate();
  const double k = q.dof;
  const double p = q.prob;

  // Work on the smaller tail so the residual keeps relative precision:
  // g(x) = P(x) - p below the median, p_upper - Q(x) above it. Both increase in x.
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;
  auto g = [&](double x) {
    return upper ? target - chi2_sf(q.dof, x) : chi2_cdf(q.dof, x) - target;
  };
  const double tol = 1e-15 * target;

  const double z = normal_quantile(p);
  const double c = 2.0 / (9.0 * k);
  double start = k * std::pow(std::max(1.0 - c + z * std::sqrt(c), 1e-3), 3.0);

  double lo = 0.0;
  double hi = std::max(start, k) * 2.0 + 10.0;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  if (!(start > lo && start < hi)) start = 0.5 * (lo + hi);

  // Coarse bisection keeps Newton inside the basin.
  for (int i = 0; i < 200 && (hi - lo) > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }

  double x = std::clamp(start, lo, hi);
  if (x == lo || x == hi) x = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    const double err = g(x);
    if (std::abs(err) <= tol) return x;
    (err < 0.0 ? lo : hi) = x;
    double next = x - err / chi2_pdf(q.dof, x);
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  // Newton stalled; finish by bisection to the floating-point limit.
  for (int i = 0; i < 2000 && hi > lo; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

double fisher_quantile(const QuantileQuery& q) {
  q.validate();
  const double s = normal_quantile(q.prob) + std::sqrt(2.0 * q.dof - 1.0);
  return 0.5 * s * s;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("slope fit needs two equally long series of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs at least two distinct abscissae");
  return sxy / sxx;
}

ScalingScan lambda1_scaling_scan(double pprime, double target_r_sq, const std::vector<int>& dims) {
  if (!(pprime > 0.0 && pprime < 1.0)) throw InvalidArgument("pprime must lie in (0, 1)");
  if (!(target_r_sq > 0.0)) throw InvalidArgument("target radius must be positive");
  if (dims.empty()) throw InvalidArgument("dimension list is empty");
  if (!std::is_sorted(dims.begin(), dims.end()) || dims.front() < 1) {
    throw InvalidArgument("dimensions must be sorted and >= 1");
  }

  ScalingScan scan{pprime, target_r_sq};
  const double prob = std::sqrt(pprime);
  std::vector<double> log_d, log_exact, log_fisher;
  for (const int d : dims) {
    const QuantileQuery q{d, prob};
    const ScalingRow row{d, target_r_sq / chi2_quantile(q), target_r_sq / fisher_quantile(q)};
    scan.rows.push_back(row);
    log_d.push_back(std::log(static_cast<double>(d)));
    log_exact.push_back(std::log(row.lambda1_exact));
    log_fisher.push_back(std::log(row.lambda1_fisher));
    if (d >= 30) {
      scan.max_fisher_rel_diff = std::max(
          scan.max_fisher_rel_diff,
          std::abs(row.lambda1_fisher - row.lambda1_exact) / row.lambda1_exact);
    }
  }
  if (dims.size() >= 2 && dims.front() != dims.back()) {
    scan.slope_exact = least_squares_slope(log_d, log_exact);
    scan.slope_fisher = least_squares_slope(log_d, log_fisher);
  }
  return scan;
}

std::vector<int> log_spaced_dims(int lo, int hi, int count) {
  if (lo < 1 || hi < lo || count < 1) throw InvalidArgument("invalid log-spaced range");
  std::vector<int> out;
  if (count == 1) return {lo};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (int i = 0; i < count; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    const int d = static_cast<int>(std::lround(std::exp(t)));
    if (out.empty() || out.back() != d) out.push_back(d);
  }
  return out;
}

}  // namespace skewgp
