#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skewgp {

enum class KernelFamily { SquaredExponential, RationalQuadratic, Matern52 };

std::string_view family_name(KernelFamily family);
KernelFamily parse_family(std::string_view name);

/// Radial profile h of an isotropic base covariance, k_u(x, y) = h(|x - y|^2).
///
/// All three families are normalized so that h(0) = 1:
///   squared exponential  h(t) = exp(-t / l^2)
///   rational quadratic   h(t) = (1 + t / (2 alpha l^2))^(-alpha)
///   Matern 5/2           h(t) = (1 + s + s^2 / 3) exp(-s),  s = sqrt(5 t) / l
class RadialKernel {
 public:
  static RadialKernel squared_exponential(double lengthscale);
  static RadialKernel rational_quadratic(double lengthscale, double alpha);
  static RadialKernel matern52(double lengthscale);

  /// Throws InvalidArgument for a nonpositive (or non-finite) lengthscale/alpha.
  RadialKernel(KernelFamily family, double lengthscale, double alpha = 1.0);

  KernelFamily family() const { return family_; }
  double lengthscale() const { return lengthscale_; }
  double alpha() const { return alpha_; }

  /// h(tau), h'(tau) or h''(tau). Throws UnsupportedOrder for order > 2.
  double eval(double tau, int order = 0) const;

  double value(double tau) const { return eval(tau, 0); }
  double d1(double tau) const { return eval(tau, 1); }
  double d2(double tau) const { return eval(tau, 2); }

  /// h(0) - h(tau) without the cancellation of the naive difference.
  double drop(double tau) const;

  /// Below this tau the Matern 5/2 profile switches to its series about 0.
  double series_threshold() const { return 1e-8 * lengthscale_ * lengthscale_; }

 private:
  KernelFamily family_;
  double lengthscale_;
  double alpha_;
};

/// Any evaluator (tau, order) -> h^(order)(tau); used to check synthetic profiles.
using RadialProfile = std::function<double(double, int)>;

struct ConditionResult {
  std::string name;
  bool pass = true;
  std::optional<std::size_t> first_violation;  // grid index
  double violation_tau = 0.0;
};

struct MonotonicityReport {
  std::vector<ConditionResult> conditions;

  bool all_pass() const;
  const ConditionResult* find(std::string_view name) const;
};

/// Checks h(0) > 0, sign and monotone direction of h' and h'', and the
/// alternating-sign conditions for n = 0, 1, 2 on a uniform grid [0, grid_max].
/// Violations are reported, never thrown.
MonotonicityReport monotonicity_check(const RadialProfile& profile,
                                      double grid_max, std::size_t grid_points);
MonotonicityReport monotonicity_check(const RadialKernel& kernel,
                                      double grid_max, std::size_t grid_points);

}  // namespace skewgp
