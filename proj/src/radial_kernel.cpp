#include "skewgp/radial_kernel.hpp"

#include <cmath>

#include "skewgp/errors.hpp"

namespace skewgp {

std::string_view family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::SquaredExponential:
      return "se";
    case KernelFamily::RationalQuadratic:
      return "rq";
    case KernelFamily::Matern52:
      return "matern52";
  }
  return "unknown";
}

KernelFamily parse_family(std::string_view name) {
  if (name == "se") return KernelFamily::SquaredExponential;
  if (name == "rq") return KernelFamily::RationalQuadratic;
  if (name == "matern52") return KernelFamily::Matern52;
  throw InvalidArgument("unknown kernel family '" + std::string(name) +
                        "' (expected se, rq or matern52)");
}

RadialKernel RadialKernel::squared_exponential(double lengthscale) {
  return RadialKernel(KernelFamily::SquaredExponential, lengthscale);
}

RadialKernel RadialKernel::rational_quadratic(double lengthscale, double alpha) {
  return RadialKernel(KernelFamily::RationalQuadratic, lengthscale, alpha);
}

RadialKernel RadialKernel::matern52(double lengthscale) {
  return RadialKernel(KernelFamily::Matern52, lengthscale);
}

RadialKernel::RadialKernel(KernelFamily family, double lengthscale, double alpha)
    : family_(family), lengthscale_(lengthscale), alpha_(alpha) {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw InvalidArgument("kernel lengthscale must be positive and finite, got " +
                          std::to_string(lengthscale));
  }
  if (family == KernelFamily::RationalQuadratic &&
      (!(alpha > 0.0) || !std::isfinite(alpha))) {
    throw InvalidArgument("rational quadratic alpha must be positive and finite, got " +
                          std::to_string(alpha));
  }
}

namespace {

double se_eval(double tau, int order, double l2) {
  const double h = std::exp(-tau / l2);
  switch (order) {
    case 0:
      return h;
    case 1:
      return -h / l2;
    default:
      return h / (l2 * l2);
  }
}

double rq_eval(double tau, int order, double l2, double alpha) {
  const double u = tau / (2.0 * alpha * l2);
  const double log_base = std::log1p(u);
  switch (order) {
    case 0:
      return std::exp(-alpha * log_base);
    case 1:
      return -std::exp(-(alpha + 1.0) * log_base) / (2.0 * l2);
    default:
      return (alpha + 1.0) / (4.0 * alpha * l2 * l2) *
             std::exp(-(alpha + 2.0) * log_base);
  }
}

// In s = sqrt(5 tau) / l the chain rule gives
//   h'  = -(5 / 6 l^2) (1 + s) e^{-s}
//   h'' =  (25 / 12 l^4) e^{-s}
// The series branch keeps four terms of each expansion in s.
double matern_eval(double tau, int order, double l2, bool series) {
  const double s = std::sqrt(5.0 * tau / l2);
  const double c1 = 5.0 / (6.0 * l2);
  const double c2 = 25.0 / (12.0 * l2 * l2);
  if (series) {
    const double s2 = s * s;
    switch (order) {
      case 0:
        return 1.0 - s2 / 6.0 + s2 * s2 / 24.0 - s2 * s2 * s / 45.0;
      case 1:
        return -c1 * (1.0 - s2 / 2.0 + s2 * s / 3.0 - s2 * s2 / 8.0);
      default:
        return c2 * (1.0 - s + s2 / 2.0 - s2 * s / 6.0);
    }
  }
  const double e = std::exp(-s);
  switch (order) {
    case 0:
      return (1.0 + s + s * s / 3.0) * e;
    case 1:
      return -c1 * (1.0 + s) * e;
    default:
      return c2 * e;
  }
}

}  // namespace

double RadialKernel::eval(double tau, int order) const {
  if (order < 0 || order > 2) throw UnsupportedOrder(order);
  if (!(tau >= 0.0)) {
    throw InvalidArgument("radial kernel argument must be nonnegative, got " +
                          std::to_string(tau));
  }
  const double l2 = lengthscale_ * lengthscale_;
  switch (family_) {
    case KernelFamily::SquaredExponential:
      return se_eval(tau, order, l2);
    case KernelFamily::RationalQuadratic:
      return rq_eval(tau, order, l2, alpha_);
    case KernelFamily::Matern52:
      return matern_eval(tau, order, l2, tau < series_threshold());
  }
  return 0.0;
}

double RadialKernel::drop(double tau) const {
  if (!(tau >= 0.0)) {
    throw InvalidArgument("radial kernel argument must be nonnegative, got " +
                          std::to_string(tau));
  }
  const double l2 = lengthscale_ * lengthscale_;
  switch (family_) {
    case KernelFamily::SquaredExponential:
      return -std::expm1(-tau / l2);
    case KernelFamily::RationalQuadratic:
      return -std::expm1(-alpha_ * std::log1p(tau / (2.0 * alpha_ * l2)));
    case KernelFamily::Matern52: {
      const double s = std::sqrt(5.0 * tau / l2);
      if (tau < series_threshold()) {
        const double s2 = s * s;
        return s2 / 6.0 - s2 * s2 / 24.0 + s2 * s2 * s / 45.0;
      }
      return -std::expm1(-s) - s * std::exp(-s) * (1.0 + s / 3.0);
    }
  }
  return 0.0;
}

bool MonotonicityReport::all_pass() const {
  for (const auto& c : conditions) {
    if (!c.pass) return false;
  }
  return true;
}

const ConditionResult* MonotonicityReport::find(std::string_view name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

MonotonicityReport monotonicity_check(const RadialProfile& profile,
                                      double grid_max, std::size_t grid_points) {
  if (grid_points < 2 || !(grid_max > 0.0)) {
    throw InvalidArgument("monotonicity grid needs at least 2 points and a positive extent");
  }
  std::vector<double> tau(grid_points), h0(grid_points), h1(grid_points), h2(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    tau[i] = grid_max * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    h0[i] = profile(tau[i], 0);
    h1[i] = profile(tau[i], 1);
    h2[i] = profile(tau[i], 2);
  }

  MonotonicityReport report;
  auto pointwise = [&](std::string name, auto&& ok) {
    ConditionResult c{std::move(name)};
    for (std::size_t i = 0; i < grid_points; ++i) {
      if (!ok(i)) {
        c.pass = false;
        c.first_violation = i;
        c.violation_tau = tau[i];
        break;
      }
    }
    report.conditions.push_back(std::move(c));
  };

  {
    ConditionResult c{"h(0) > 0"};
    if (!(h0[0] > 0.0)) {
      c.pass = false;
      c.first_violation = 0;
    }
    report.conditions.push_back(c);
  }
  pointwise("h >= 0", [&](std::size_t i) { return h0[i] >= 0.0; });
  pointwise("h' <= 0", [&](std::size_t i) { return h1[i] <= 0.0; });
  pointwise("h'' >= 0", [&](std::size_t i) { return h2[i] >= 0.0; });
  pointwise("h' nondecreasing",
            [&](std::size_t i) { return i == 0 || h1[i] >= h1[i - 1]; });
  pointwise("h'' nonincreasing",
            [&](std::size_t i) { return i == 0 || h2[i] <= h2[i - 1]; });
  return report;
}

MonotonicityReport monotonicity_check(const RadialKernel& kernel,
                                      double grid_max, std::size_t grid_points) {
  return monotonicity_check(
      [&kernel](double tau, int order) { return kernel.eval(tau, order); },
      grid_max, grid_points);
}

}  // namespace skewgp
