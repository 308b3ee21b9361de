#pragma once

#include <cstdint>
#include <vector>

namespace skewgp {

struct QuantileQuery {
  int dof = 1;
  double prob = 0.5;

  /// Throws InvalidArgument unless dof >= 1 and 0 < prob < 1.
  void validate() const;
};

/// Standard normal quantile Phi^{-1}(p).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x): series below x = a + 1,
/// Lentz continued fraction above.
double regularized_gamma_p(double a, double x);

/// Upper tail Q(a, x) = 1 - P(a, x), computed directly above x = a + 1.
double regularized_gamma_q(double a, double x);

double chi2_cdf(int dof, double x);
/// Survival function 1 - CDF without cancellation in the upper tail.
double chi2_sf(int dof, double x);
double chi2_pdf(int dof, double x);

/// Inverse chi-squared CDF: bracketed bisection from a Wilson-Hilferty start,
/// polished by Newton steps on the smaller tail to a relative residual of 1e-15.
double chi2_quantile(const QuantileQuery& q);

/// Fisher's closed form 1/2 (Phi^{-1}(p) + sqrt(2D - 1))^2.
double fisher_quantile(const QuantileQuery& q);

struct ScalingRow {
  int dim = 0;
  double lambda1_exact = 0.0;
  double lambda1_fisher = 0.0;
};

struct ScalingScan {
  double pprime = 0.0;
  double target_r_sq = 0.0;
  std::vector<ScalingRow> rows;
  double slope_exact = 0.0;   // least-squares slope of log lambda1 against log D
  double slope_fisher = 0.0;
  double max_fisher_rel_diff = 0.0;  // over rows with D >= 30
};

/// lambda1(D) = target_r_sq / chi2_quantile(D, sqrt(pprime)) for each D.
ScalingScan lambda1_scaling_scan(double pprime, double target_r_sq, const std::vector<int>& dims);

/// Rounded, de-duplicated integers spaced evenly in log between lo and hi.
std::vector<int> log_spaced_dims(int lo, int hi, int count);

/// Ordinary least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace skewgp
