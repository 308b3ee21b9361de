#include "skewgp/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "skewgp/chi_squared.hpp"
#include "skewgp/errors.hpp"
#include "skewgp/quad_approx.hpp"

namespace skewgp {

namespace {

struct DisplacedPair {
  PairedPoint dx;
  PairedPoint dy;
  double direct;   // <dx, dy>
  double flipped;  // <dx, flip dy>
};

DisplacedPair displaced(const PairedPoint& x, const PairedPoint& y, const ExpansionPoint& z) {
  PairedPoint dx = displacement(x, z);
  PairedPoint dy = displacement(y, z);
  const double direct = inner(dx, dy);
  const double flipped = dx.first().dot(dy.second()) + dx.second().dot(dy.first());
  return {std::move(dx), std::move(dy), direct, flipped};
}

double clamp_variance(double v) {
  if (v < -1e-10) {
    throw InternalInconsistency("error variance evaluated to " + std::to_string(v) +
                                ", below the rounding floor -1e-10");
  }
  return v < 0.0 ? 0.0 : v;
}

// Variance in terms of S = |d1|^2 + |d2|^2, M = |d1 - d2|^2 and MP = |d1 - d2|^2 |d1 + d2|^2.
double variance_terms(const RadialKernel& kernel, double s, double m, double mp) {
  const double term1 = 2.0 * kernel.drop(2.0 * m);
  const double term2 = 4.0 * (-kernel.d1(0.0) + 2.0 * kernel.d1(s)) * m;
  const double term3 = 4.0 * (kernel.d2(0.0) - 2.0 * kernel.d2(s)) * mp;
  return term1 + term2 + term3;
}

}  // namespace

double cov_cross(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y,
                 const ExpansionPoint& z) {
  const DisplacedPair d = displaced(x, y, z);
  const double s = d.dx.first().squaredNorm() + d.dx.second().squaredNorm();
  return -4.0 * kernel.d1(s) * (d.direct - d.flipped) +
         4.0 * kernel.d2(s) * (d.direct * d.direct - d.flipped * d.flipped);
}

ErrorCovariance cov_error(const RadialKernel& kernel, const PairedPoint& x,
                          const PairedPoint& y, const ExpansionPoint& z) {
  const double k_model = cov_model(kernel, x, y, z);
  const double k_field = cov_skew(kernel, x, y);

  ErrorCovariance out;
  out.value = k_model - cov_cross(kernel, x, y, z) - cov_cross(kernel, y, x, z) + k_field;

  const DisplacedPair d = displaced(x, y, z);
  const double sx = d.dx.first().squaredNorm() + d.dx.second().squaredNorm();
  const double sy = d.dy.first().squaredNorm() + d.dy.second().squaredNorm();
  const double linear = d.direct - d.flipped;
  const double quadratic = d.direct * d.direct - d.flipped * d.flipped;
  out.merged = k_field +
               4.0 * (kernel.d1(sx) + kernel.d1(sy) - kernel.d1(0.0)) * linear -
               4.0 * (kernel.d2(sx) + kernel.d2(sy) - kernel.d2(0.0)) * quadratic;

  out.scale = std::abs(k_model) + std::abs(k_field) + 1.0;
  out.consistent = std::abs(out.merged - out.value) <= 1e-8 * out.scale;
  return out;
}

double var_pointwise(const RadialKernel& kernel, const PairedPoint& x, const ExpansionPoint& z) {
  const PairedPoint dx = displacement(x, z);
  const double s = dx.first().squaredNorm() + dx.second().squaredNorm();
  const double m = (dx.first() - dx.second()).squaredNorm();
  const double p = (dx.first() + dx.second()).squaredNorm();
  return clamp_variance(variance_terms(kernel, s, m, m * p));
}

double var_polar(const RadialKernel& kernel, double r1, double r2, double theta) {
  if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw InvalidArgument("polar radii must be nonnegative");
  const double c = std::cos(theta);
  const double s = r1 * r1 + r2 * r2;
  const double m = std::max(0.0, s - 2.0 * r1 * r2 * c);
  const double mp = std::max(0.0, s * s - 4.0 * r1 * r1 * r2 * r2 * c * c);
  return clamp_variance(variance_terms(kernel, s, m, mp));
}

double quantile_bound(double sigma, double p) { return sigma * normal_quantile(p); }

double pointwise_bound(const RadialKernel& kernel, const PairedPoint& x,
                       const ExpansionPoint& z, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("pointwise bound needs p in (0, 1), got " + std::to_string(p));
  }
  return quantile_bound(std::sqrt(var_pointwise(kernel, x, z)), p);
}

namespace {

// Root of an increasing function with f(0) < 0 and f(inf) > 0.
double increasing_root(const std::function<double(double)>& f, double start, double residual_tol,
                       const char* what) {
  double lo = 0.0;
  double hi = start;
  int expansions = 0;
  while (!(f(hi) > 0.0)) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 200 || !std::isfinite(hi)) {
      throw NoCriticalRadius(std::string("no sign change of ") + what +
                             " found; the kernel violates the decay assumptions");
    }
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  const double root = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
  if (!(std::abs(f(root)) < residual_tol)) {
    throw NoCriticalRadius(std::string("bisection on ") + what +
                           " did not reach the residual tolerance");
  }
  return root;
}

}  // namespace

CriticalRadii critical_radii(const RadialKernel& kernel) {
  require_nondegenerate(kernel);
  const double h1_0 = kernel.d1(0.0);
  const double h2_0 = kernel.d2(0.0);
  const double start = kernel.lengthscale() * kernel.lengthscale();
  CriticalRadii out;
  out.rc1_sq = increasing_root([&](double t) { return -h1_0 + 2.0 * kernel.d1(t); }, start,
                               1e-10 * std::abs(h1_0), "-h'(0) + 2h'(t)");
  out.rc2_sq = increasing_root([&](double t) { return h2_0 - 2.0 * kernel.d2(t); }, start,
                               1e-10 * std::abs(h2_0), "h''(0) - 2h''(t)");
  return out;
}

std::string_view regime_name(Regime regime) {
  return regime == Regime::Local ? "local" : "far_or_transitional";
}

double local_variance_bound(const RadialKernel& kernel, double r_sq) {
  return 2.0 * kernel.drop(8.0 * r_sq);
}

double far_variance_bound(const RadialKernel& kernel, double r_sq) {
  const double t = 2.0 * r_sq;
  return 2.0 * kernel.drop(8.0 * r_sq) +
         4.0 * (-kernel.d1(0.0) + 2.0 * kernel.d1(t)) * 4.0 * r_sq +
         4.0 * (kernel.d2(0.0) - 2.0 * kernel.d2(t)) * 4.0 * r_sq * r_sq;
}

RegionBound region_bound(const RadialKernel& kernel, double r_region_sq) {
  return region_bound(kernel, r_region_sq, critical_radii(kernel));
}

RegionBound region_bound(const RadialKernel& kernel, double r_region_sq,
                         const CriticalRadii& radii) {
  if (!(r_region_sq > 0.0)) throw InvalidArgument("region radius must be positive");
  RegionBound out;
  if (2.0 * r_region_sq <= radii.min_sq()) {
    out.regime = Regime::Local;
    out.effective_r_sq = std::min({radii.rc1_sq, radii.rc2_sq, r_region_sq});
    out.variance_bound = local_variance_bound(kernel, out.effective_r_sq);
  } else {
    out.regime = Regime::FarOrTransitional;
    out.effective_r_sq = r_region_sq;
    out.variance_bound = far_variance_bound(kernel, r_region_sq);
  }
  return out;
}

void BoundConfig::validate() const {
  if (!(p >= 0.5 && p < 1.0)) {
    throw InvalidArgument("bound confidence p must lie in [0.5, 1), got " + std::to_string(p));
  }
  if (!(pprime > 0.0 && pprime < 1.0)) {
    throw InvalidArgument("region probability pprime must lie in (0, 1), got " +
                          std::to_string(pprime));
  }
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  if (r_region_sq && !(*r_region_sq > 0.0)) {
    throw InvalidArgument("supplied region radius must be positive");
  }
  if (!r_region_sq && sigma_eigs.empty()) {
    throw InvalidArgument("input covariance eigenvalues are required");
  }
  if (sigma_eigs.size() > static_cast<std::size_t>(dim)) {
    throw InvalidArgument("more covariance eigenvalues than dimensions");
  }
  for (std::size_t i = 0; i < sigma_eigs.size(); ++i) {
    if (!(sigma_eigs[i] > 0.0)) throw InvalidArgument("covariance eigenvalues must be positive");
    if (i > 0 && sigma_eigs[i] > sigma_eigs[i - 1]) {
      throw InvalidArgument("covariance eigenvalues must be sorted in descending order");
    }
  }
}

double region_radius_sq(const BoundConfig& config) {
  config.validate();
  if (config.r_region_sq) return *config.r_region_sq;
  return config.sigma_eigs.front() * chi2_quantile({config.dim, std::sqrt(config.pprime)});
}

BoundReport uniform_bound(const RadialKernel& kernel, const BoundConfig& config) {
  BoundReport out;
  out.r_region_sq = region_radius_sq(config);
  out.p = config.p;
  out.pprime = config.pprime;
  out.delta = config.delta();
  out.critical = critical_radii(kernel);
  const RegionBound region = region_bound(kernel, out.r_region_sq, out.critical);
  out.regime = region.regime;
  out.variance_bound = region.variance_bound;
  out.normal_quantile_p = normal_quantile(config.p);
  out.b_uniform = out.normal_quantile_p * std::sqrt(region.variance_bound);
  out.paper_literal_b = out.normal_quantile_p * region.variance_bound;
  return out;
}

Asymptotics asymptotics(const RadialKernel& kernel) {
  Asymptotics out;
  out.decay_coefficient = -16.0 * kernel.d1(0.0);
  out.far_profile = {2.0 * kernel.value(0.0), -16.0 * kernel.d1(0.0), 16.0 * kernel.d2(0.0)};
  return out;
}

}  // namespace skewgp
