#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skewgp/error_analysis.hpp"
#include "skewgp/field_model.hpp"

namespace skewgp {

/// Below this many samples a campaign still runs but its statistics are flagged.
inline constexpr std::size_t kStatisticalFloor = 10000;

enum class Sidedness { TwoSided, AtLeast, AtMost };

/// One closed-form-versus-Monte-Carlo comparison.
///
/// tolerance = max(abs_tol, rel_tol * |closed_form|, k * mc_standard_error)
///   TwoSided: |empirical - closed_form| <= tolerance
///   AtLeast:  empirical >= closed_form - tolerance
///   AtMost:   empirical <= closed_form + tolerance
struct CheckRecord {
  std::string name;
  double closed_form = 0.0;
  double empirical = 0.0;
  double mc_standard_error = 0.0;
  double k = 4.0;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  Sidedness sidedness = Sidedness::TwoSided;
  bool pass = false;

  double tolerance() const;
  std::string rule() const;
};

CheckRecord make_check(std::string name, double closed_form, double empirical, double se,
                       double k, double abs_tol = 0.0, double rel_tol = 0.0,
                       Sidedness sidedness = Sidedness::TwoSided);

struct ValidationReport {
  std::string campaign;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> diagnostics;
  double wall_time_s = 0.0;  // not serialized, so records stay byte-reproducible

  bool all_pass() const;
  std::size_t failures() const;
  const CheckRecord* find(const std::string& name) const;
  double metric(const std::string& name) const;
};

/// Sample variances of every g, H11 and H12 entry against -4h'(0), 16h''(0) (H11 diagonal)
/// and 8h''(0) (off-diagonal), each within `var_rel_tol`; every pairwise sample correlation
/// below `corr_abs_tol`.
ValidationReport run_ensemble_validation(const RadialKernel& kernel, int dim, std::size_t samples,
                                         std::uint64_t seed, double var_rel_tol = 0.03,
                                         double corr_abs_tol = 0.02);

/// Empirical joint covariance of (f at `points`, g, H11, H12) from joint draws against the
/// assembled Gram, and empirical covariance of f~ over independent model draws against
/// cov_model. Pass rule k = 4 standard errors.
ValidationReport run_covariance_validation(const RadialKernel& kernel, const ExpansionPoint& z,
                                           const std::vector<PairedPoint>& points,
                                           std::size_t samples, std::uint64_t seed,
                                           bool check_joint = true, bool check_model = true);

/// Per test point: Var(f~ - f) against var_pointwise and Cov(f, f~) against cov_cross,
/// passing at 3% relative or 4 standard errors, whichever is looser. With `check_flip`
/// the variance at flip(x) is compared with the one at x.
ValidationReport run_error_validation(const RadialKernel& kernel, const ExpansionPoint& z,
                                      const std::vector<PairedPoint>& test_points,
                                      std::size_t samples, std::uint64_t seed,
                                      bool check_flip = true);

/// Replicates draw x1, x2 ~ N(z*, Sigma) (Sigma diagonal with `config.sigma_eigs`, the last
/// eigenvalue repeated up to D), joint-sample (f, g, H) there and tally E <= b_uniform.
/// Coverage must reach delta = p p'. Inputs landing inside the concentration region must
/// also satisfy var_pointwise <= variance_bound.
ValidationReport run_bound_validation(const RadialKernel& kernel, const BoundConfig& config,
                                      const ExpansionPoint& z, std::size_t samples,
                                      std::uint64_t seed);

namespace reference {
/// Serial version of run_bound_validation; the report must match bit for bit.
ValidationReport run_bound_validation(const RadialKernel& kernel, const BoundConfig& config,
                                      const ExpansionPoint& z, std::size_t samples,
                                      std::uint64_t seed);
}  // namespace reference

}  // namespace skewgp
