#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "skewgp/field_model.hpp"

namespace skewgp {

// Error process E = f~ - f of the quadratic approximation at (z*, z*). All
// positions enter as displacements from z*.

/// Cov(f(x), f~(y)) = -4 h'(|dx|^2) (<dx, dy> - <dx, flip dy>)
///                  + 4 h''(|dx|^2) (<dx, dy>^2 - <dx, flip dy>^2).
double cov_cross(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y,
                 const ExpansionPoint& z);

struct ErrorCovariance {
  double value = 0.0;   // k_f~ - Cov(f(x), f~(y)) - Cov(f~(x), f(y)) + k_f
  double merged = 0.0;  // single-expression closed form, for comparison
  double scale = 1.0;   // |k_f~| + |k_f| + 1
  bool consistent = true;  // |merged - value| <= 1e-8 * scale
};

ErrorCovariance cov_error(const RadialKernel& kernel, const PairedPoint& x,
                          const PairedPoint& y, const ExpansionPoint& z);

/// sigma_E^2(x) with S = |d1|^2 + |d2|^2, M = |d1 - d2|^2, P = |d1 + d2|^2:
///   2 (h(0) - h(2M)) + 4 (-h'(0) + 2h'(S)) M + 4 (h''(0) - 2h''(S)) M P.
/// Rounding negatives above -1e-10 are clamped to 0; lower values throw InternalInconsistency.
double var_pointwise(const RadialKernel& kernel, const PairedPoint& x, const ExpansionPoint& z);

/// The same variance in terms of |d1| = r1, |d2| = r2 and the angle theta between them.
double var_polar(const RadialKernel& kernel, double r1, double r2, double theta);

/// The p-quantile sigma * Q(p) of N(0, sigma^2).
double quantile_bound(double sigma, double p);

/// sigma_E(x) * Q(p). Throws InvalidArgument for p outside (0, 1).
double pointwise_bound(const RadialKernel& kernel, const PairedPoint& x,
                       const ExpansionPoint& z, double p);

struct CriticalRadii {
  double rc1_sq = 0.0;  // root of -h'(0) + 2h'(t)
  double rc2_sq = 0.0;  // root of  h''(0) - 2h''(t)

  double min_sq() const { return rc1_sq < rc2_sq ? rc1_sq : rc2_sq; }
  double max_sq() const { return rc1_sq < rc2_sq ? rc2_sq : rc1_sq; }
};

/// Bracketed bisection on the monotone sign changes; throws NoCriticalRadius when
/// no sign change turns up.
CriticalRadii critical_radii(const RadialKernel& kernel);

enum class Regime { Local, FarOrTransitional };
std::string_view regime_name(Regime regime);

/// phi(R) = 2 (h(0) - h(8R^2)), as a function of R^2.
double local_variance_bound(const RadialKernel& kernel, double r_sq);
/// psi(R) = phi(R) + 4 (-h'(0) + 2h'(2R^2)) 4R^2 + 4 (h''(0) - 2h''(2R^2)) 4R^4.
double far_variance_bound(const RadialKernel& kernel, double r_sq);

struct RegionBound {
  Regime regime = Regime::Local;
  double variance_bound = 0.0;
  double effective_r_sq = 0.0;  // R^2 at which phi or psi was evaluated
};

/// Local when 2 r_region_sq <= min(rc1, rc2); otherwise the far formula, which
/// also covers the transitional band.
RegionBound region_bound(const RadialKernel& kernel, double r_region_sq);
RegionBound region_bound(const RadialKernel& kernel, double r_region_sq,
                         const CriticalRadii& radii);

struct BoundConfig {
  double p = 0.95;       // pointwise confidence
  double pprime = 0.95;  // probability both inputs land in the region
  std::vector<double> sigma_eigs;  // descending eigenvalues of the input covariance
  int dim = 1;
  /// Supplies R_D(p')^2 directly instead of deriving it from sigma_eigs.
  std::optional<double> r_region_sq;

  double delta() const { return p * pprime; }
  /// p in [0.5, 1), pprime in (0, 1), eigenvalues positive and descending, 1 <= count <= dim.
  void validate() const;
};

struct BoundReport {
  double p = 0.0;
  double pprime = 0.0;
  double delta = 0.0;
  double normal_quantile_p = 0.0;
  double r_region_sq = 0.0;
  Regime regime = Regime::Local;
  double variance_bound = 0.0;
  double b_uniform = 0.0;        // Q(p) * sqrt(variance_bound)
  double paper_literal_b = 0.0;  // Q(p) * variance_bound
  CriticalRadii critical;
};

/// R_D(p')^2 = lambda1 * chi2_quantile(D, sqrt(p')).
double region_radius_sq(const BoundConfig& config);

BoundReport uniform_bound(const RadialKernel& kernel, const BoundConfig& config);

struct Asymptotics {
  double decay_coefficient = 0.0;             // phi(R) ~ c R^2 as R -> 0
  std::array<double, 3> far_profile{};        // psi(R) ~ a + b R^2 + c R^4 as R -> inf
};

Asymptotics asymptotics(const RadialKernel& kernel);

}  // namespace skewgp
