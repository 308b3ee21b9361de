#include "skewgp/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "skewgp/chi_squared.hpp"
#include "skewgp/errors.hpp"
#include "skewgp/joint_sampler.hpp"
#include "skewgp/monte_carlo.hpp"
#include "skewgp/quad_approx.hpp"
#include "skewgp/rng.hpp"
#include "skewgp/triangle.hpp"

namespace skewgp {

double CheckRecord::tolerance() const {
  return std::max({abs_tol, rel_tol * std::abs(closed_form), k * mc_standard_error});
}

std::string CheckRecord::rule() const {
  std::ostringstream os;
  switch (sidedness) {
    case Sidedness::TwoSided:
      os << "|empirical - closed| <= ";
      break;
    case Sidedness::AtLeast:
      os << "empirical >= closed - ";
      break;
    case Sidedness::AtMost:
      os << "empirical <= closed + ";
      break;
  }
  os << "max(" << abs_tol << ", " << rel_tol << "*|closed|, " << k << "*se)";
  return os.str();
}

CheckRecord make_check(std::string name, double closed_form, double empirical, double se,
                       double k, double abs_tol, double rel_tol, Sidedness sidedness) {
  CheckRecord c{std::move(name), closed_form, empirical, se, k, abs_tol, rel_tol, sidedness};
  const double tol = c.tolerance();
  switch (sidedness) {
    case Sidedness::TwoSided:
      c.pass = std::abs(empirical - closed_form) <= tol;
      break;
    case Sidedness::AtLeast:
      c.pass = empirical >= closed_form - tol;
      break;
    case Sidedness::AtMost:
      c.pass = empirical <= closed_form + tol;
      break;
  }
  return c;
}

bool ValidationReport::all_pass() const { return failures() == 0; }

std::size_t ValidationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return !c.pass; }));
}

const CheckRecord* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double ValidationReport::metric(const std::string& name) const {
  for (const auto& [key, value] : metrics) {
    if (key == name) return value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

using Clock = std::chrono::steady_clock;

ValidationReport start_report(std::string campaign, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("sample count must be positive");
  ValidationReport report{std::move(campaign), samples, seed};
  if (samples < kStatisticalFloor) {
    report.diagnostics.push_back("sample count " + std::to_string(samples) +
                                 " is below the statistical floor " +
                                 std::to_string(kStatisticalFloor) +
                                 "; statistical checks are indicative only");
  }
  return report;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Statistical checks that fail below the floor are demoted to diagnostics so
// that Monte Carlo noise alone never fails a short run.
void apply_floor(ValidationReport& report) {
  if (report.samples >= kStatisticalFloor) return;
  for (auto& c : report.checks) {
    if (!c.pass) {
      report.diagnostics.push_back("below floor: " + c.name + " outside " + c.rule());
      c.pass = true;
    }
  }
}

Vector model_coordinates(const QuadraticModel& m) {
  const Eigen::Index d = m.dim();
  Vector v(d + d * d);
  v << m.g, pack_upper(m.h11), pack_strict_upper(m.h12);
  return v;
}

std::vector<std::string> derivative_names(Eigen::Index dim) {
  const GramLayout layout{0, dim};
  return layout.names();
}

}  // namespace

ValidationReport run_ensemble_validation(const RadialKernel& kernel, int dim, std::size_t samples,
                                         std::uint64_t seed, double var_rel_tol,
                                         double corr_abs_tol) {
  const auto t0 = Clock::now();
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  require_nondegenerate(kernel);
  ValidationReport report = start_report("ensemble", samples, seed);

  const Eigen::Index d = dim;
  const Eigen::Index width = d + d * d;
  const Vector zstar = Vector::Zero(d);
  const MomentSums moments = accumulate_moments(
      samples, width, [&](std::uint64_t row, Eigen::Ref<Vector> out) {
        Engine rng = stream_for(seed, row);
        out = model_coordinates(sample_model(kernel, d, zstar, rng));
      });

  const std::vector<std::string> names = derivative_names(d);
  const double var_g = gradient_variance(kernel);
  const double var_h = hessian_variance(kernel);
  std::vector<double> expected;
  for (Eigen::Index i = 0; i < d; ++i) expected.push_back(var_g);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) expected.push_back(i == j ? 2.0 * var_h : var_h);
  }
  for (Eigen::Index i = 0; i < strict_upper_size(d); ++i) expected.push_back(var_h);

  for (Eigen::Index a = 0; a < width; ++a) {
    report.checks.push_back(make_check("var[" + names[a] + "]", expected[a],
                                       moments.centered_cov(a, a), moments.centered_var_se(a),
                                       0.0, 0.0, var_rel_tol));
  }
  const double corr_se = 1.0 / std::sqrt(static_cast<double>(samples));
  for (Eigen::Index a = 0; a < width; ++a) {
    for (Eigen::Index b = a + 1; b < width; ++b) {
      report.checks.push_back(make_check("corr[" + names[a] + "," + names[b] + "]", 0.0,
                                         moments.correlation(a, b), corr_se, 0.0, corr_abs_tol));
    }
  }
  apply_floor(report);
  report.wall_time_s = seconds_since(t0);
  return report;
}

ValidationReport run_covariance_validation(const RadialKernel& kernel, const ExpansionPoint& z,
                                           const std::vector<PairedPoint>& points,
                                           std::size_t samples, std::uint64_t seed,
                                           bool check_joint, bool check_model) {
  const auto t0 = Clock::now();
  ValidationReport report = start_report("covariance", samples, seed);

  if (check_joint) {
    const JointGram gram = build_joint_gram(kernel, z, points);
    const Eigen::Index width = gram.layout().total();
    const std::uint64_t stream = derive_seed(seed, 0);
    const MomentSums moments = accumulate_moments(
        samples, width, [&](std::uint64_t row, Eigen::Ref<Vector> out) {
          out = sample_joint_row(gram, stream, row);
        });
    const std::vector<std::string> names = gram.layout().names();
    for (Eigen::Index a = 0; a < width; ++a) {
      for (Eigen::Index b = a; b < width; ++b) {
        report.checks.push_back(make_check("joint[" + names[a] + "," + names[b] + "]",
                                           gram.matrix()(a, b), moments.zero_mean_cov(a, b),
                                           moments.zero_mean_cov_se(a, b), 4.0));
      }
    }
    report.metrics.emplace_back("jitter_used", gram.jitter_used());
  }

  if (check_model && !points.empty()) {
    require_nondegenerate(kernel);
    const auto n = static_cast<Eigen::Index>(points.size());
    const std::uint64_t stream = derive_seed(seed, 1);
    const MomentSums moments = accumulate_moments(
        samples, n, [&](std::uint64_t row, Eigen::Ref<Vector> out) {
          Engine rng = stream_for(stream, row);
          const QuadraticModel m = sample_model(kernel, z.dim(), z.zstar(), rng);
          for (Eigen::Index a = 0; a < n; ++a) out(a) = eval_model(m, points[a]);
        });
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a; b < n; ++b) {
        report.checks.push_back(make_check(
            "model[" + std::to_string(a) + "," + std::to_string(b) + "]",
            cov_model(kernel, points[a], points[b], z), moments.zero_mean_cov(a, b),
            moments.zero_mean_cov_se(a, b), 4.0));
      }
    }
  }
  apply_floor(report);
  report.wall_time_s = seconds_since(t0);
  return report;
}

namespace {

struct ErrorMoments {
  MomentSums moments;  // columns: E, f, f~
};

ErrorMoments error_moments(const RadialKernel& kernel, const ExpansionPoint& z,
                           const PairedPoint& x, std::size_t samples, std::uint64_t stream) {
  const JointGram gram = build_joint_gram(kernel, z, {x});
  const Vector c = derivative_functional(x, z);
  const Eigen::Index offset = gram.layout().g_offset();
  return {accumulate_moments(samples, 3, [&](std::uint64_t row, Eigen::Ref<Vector> out) {
    const Vector draw = sample_joint_row(gram, stream, row);
    const double f = draw(0);
    const double approx = c.dot(draw.segment(offset, c.size()));
    out << approx - f, f, approx;
  })};
}

}  // namespace

ValidationReport run_error_validation(const RadialKernel& kernel, const ExpansionPoint& z,
                                      const std::vector<PairedPoint>& test_points,
                                      std::size_t samples, std::uint64_t seed, bool check_flip) {
  const auto t0 = Clock::now();
  ValidationReport report = start_report("error", samples, seed);
  constexpr double kRel = 0.03;

  for (std::size_t j = 0; j < test_points.size(); ++j) {
    const PairedPoint& x = test_points[j];
    if (x.matched()) throw InvalidArgument("error validation needs non-matched test points");
    const std::string tag = "[" + std::to_string(j) + "]";

    const MomentSums m = error_moments(kernel, z, x, samples, derive_seed(seed, 2 * j)).moments;
    const double closed_var = var_pointwise(kernel, x, z);
    report.checks.push_back(make_check("var_error" + tag, closed_var, m.zero_mean_cov(0, 0),
                                       m.zero_mean_cov_se(0, 0), 4.0, 0.0, kRel));
    report.checks.push_back(make_check("cov_f_model" + tag, cov_cross(kernel, x, x, z),
                                       m.zero_mean_cov(1, 2), m.zero_mean_cov_se(1, 2), 4.0, 0.0,
                                       kRel));
    report.metrics.emplace_back("var_pointwise" + tag, closed_var);

    const ErrorCovariance ke = cov_error(kernel, x, x, z);
    if (!ke.consistent) {
      report.diagnostics.push_back("composition and merged error covariance differ at point " +
                                   std::to_string(j));
    }

    if (check_flip) {
      const MomentSums mf =
          error_moments(kernel, z, flip(x), samples, derive_seed(seed, 2 * j + 1)).moments;
      const double se = std::hypot(m.zero_mean_cov_se(0, 0), mf.zero_mean_cov_se(0, 0));
      report.checks.push_back(make_check("flip_var_error" + tag, m.zero_mean_cov(0, 0),
                                         mf.zero_mean_cov(0, 0), se, 4.0, 0.0, kRel));
    }
  }
  apply_floor(report);
  report.wall_time_s = seconds_since(t0);
  return report;
}

namespace {

struct Replicate {
  double error = 0.0;
  double variance = 0.0;
  bool in_region = false;
};

ValidationReport bound_campaign(const RadialKernel& kernel, const BoundConfig& config,
                                const ExpansionPoint& z, std::size_t samples, std::uint64_t seed,
                                bool parallel) {
  const auto t0 = Clock::now();
  require_same_dim(config.dim, z.dim());
  ValidationReport report = start_report("bound", samples, seed);
  const BoundReport bound = uniform_bound(kernel, config);

  const Eigen::Index d = z.dim();
  Vector eig(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                  config.sigma_eigs.size() - 1);
    eig(k) = config.sigma_eigs.empty() ? 1.0 : config.sigma_eigs[idx];
  }
  if (config.sigma_eigs.empty()) {
    throw InvalidArgument("bound validation needs the input covariance eigenvalues");
  }
  const Vector sd = eig.cwiseSqrt();
  // Mahalanobis radius^2 of the concentration region.
  const double mahalanobis_sq = bound.r_region_sq / eig(0);

  const std::uint64_t input_stream = derive_seed(seed, 0);
  const std::uint64_t field_stream = derive_seed(seed, 1);
  std::vector<Replicate> reps(samples);
  const auto n = static_cast<std::int64_t>(samples);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::uint64_t>(i);
    Engine rng = stream_for(input_stream, row);
    Vector u1(d), u2(d);
    for (Eigen::Index k = 0; k < d; ++k) u1(k) = standard_normal(rng);
    for (Eigen::Index k = 0; k < d; ++k) u2(k) = standard_normal(rng);
    const PairedPoint x(z.zstar() + sd.cwiseProduct(u1), z.zstar() + sd.cwiseProduct(u2));

    const JointGram gram = build_joint_gram(kernel, z, {x});
    const Vector draw = sample_joint_row(gram, field_stream, row);
    const Vector c = derivative_functional(x, z);
    Replicate& r = reps[static_cast<std::size_t>(i)];
    r.error = c.dot(draw.segment(gram.layout().g_offset(), c.size())) - draw(0);
    r.variance = var_pointwise(kernel, x, z);
    r.in_region = u1.squaredNorm() <= mahalanobis_sq && u2.squaredNorm() <= mahalanobis_sq;
  }

  std::size_t covered = 0, covered_literal = 0, inside = 0;
  double max_var_inside = 0.0;
  for (const Replicate& r : reps) {
    covered += r.error <= bound.b_uniform;
    covered_literal += r.error <= bound.paper_literal_b;
    if (r.in_region) {
      ++inside;
      max_var_inside = std::max(max_var_inside, r.variance);
    }
  }
  const double nn = static_cast<double>(samples);
  const double coverage = static_cast<double>(covered) / nn;
  const double coverage_literal = static_cast<double>(covered_literal) / nn;
  const double region_fraction = static_cast<double>(inside) / nn;
  auto binomial_se = [nn](double f) { return std::sqrt(f * (1.0 - f) / nn); };

  report.checks.push_back(make_check("coverage", bound.delta, coverage, binomial_se(coverage),
                                     0.0, 0.0, 0.0, Sidedness::AtLeast));
  if (!config.r_region_sq) {
    report.checks.push_back(make_check("region_probability", config.pprime, region_fraction,
                                       binomial_se(config.pprime), 4.0));
  }
  if (inside > 0) {
    report.checks.push_back(make_check("dominance", bound.variance_bound, max_var_inside, 0.0,
                                       0.0, 1e-9, 0.0, Sidedness::AtMost));
  }

  report.metrics = {{"delta", bound.delta},
                    {"r_region_sq", bound.r_region_sq},
                    {"regime_far", bound.regime == Regime::FarOrTransitional ? 1.0 : 0.0},
                    {"variance_bound", bound.variance_bound},
                    {"b_uniform", bound.b_uniform},
                    {"paper_literal_b", bound.paper_literal_b},
                    {"coverage", coverage},
                    {"coverage_paper_literal", coverage_literal},
                    {"region_fraction", region_fraction},
                    {"max_var_in_region", max_var_inside}};
  apply_floor(report);
  report.wall_time_s = seconds_since(t0);
  return report;
}

}  // namespace

ValidationReport run_bound_validation(const RadialKernel& kernel, const BoundConfig& config,
                                      const ExpansionPoint& z, std::size_t samples,
                                      std::uint64_t seed) {
  return bound_campaign(kernel, config, z, samples, seed, true);
}

namespace reference {

ValidationReport run_bound_validation(const RadialKernel& kernel, const BoundConfig& config,
                                      const ExpansionPoint& z, std::size_t samples,
                                      std::uint64_t seed) {
  return bound_campaign(kernel, config, z, samples, seed, false);
}

}  // namespace reference

}  // namespace skewgp
