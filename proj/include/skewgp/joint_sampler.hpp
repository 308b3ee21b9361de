#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "skewgp/field_model.hpp"
#include "skewgp/quad_approx.hpp"

namespace skewgp {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Coordinate order of the joint vector
///   [ f(x_1) .. f(x_n) | g (D) | H11 upper with diagonal | H12 strict upper ].
struct GramLayout {
  Eigen::Index points = 0;
  Eigen::Index dim = 0;

  Eigen::Index g_offset() const { return points; }
  Eigen::Index h11_offset() const { return points + dim; }
  Eigen::Index h12_offset() const { return points + dim + dim * (dim + 1) / 2; }
  Eigen::Index derivative_count() const { return dim + dim * dim; }  // D + D(D+1)/2 + D(D-1)/2
  Eigen::Index total() const { return points + derivative_count(); }

  /// Column names: f0.., g0.., H11_i_j.., H12_i_j..
  std::vector<std::string> names() const;
};

/// Cov(g_i, f(y)), Cov(H11_ij, f(y)), Cov(H12_ij, f(y)) for derivatives taken at (z*, z*).
struct CrossCovariance {
  Vector g;
  Matrix h11;
  Matrix h12;
};

CrossCovariance cross_cov_derivatives(const RadialKernel& kernel, const ExpansionPoint& z,
                                      const PairedPoint& y);

/// Linear functional c(x) with f~(x) = c(x)^T (g, H11 upper, H12 strict upper).
Vector derivative_functional(const PairedPoint& x, const ExpansionPoint& z);

/// Joint covariance of field values and derivative coefficients, with its
/// Cholesky factor over the coordinates that are not identically zero.
class JointGram {
 public:
  const GramLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  double jitter_used() const { return jitter_used_; }

  /// Coordinates with a nonzero row; identically zero ones are sampled as exact 0.
  const std::vector<Eigen::Index>& active() const { return active_; }
  /// Lower-triangular factor of the (jittered) active block.
  const Matrix& factor() const { return factor_; }

  const ExpansionPoint& expansion() const { return expansion_; }
  const std::vector<PairedPoint>& points() const { return points_; }

 private:
  friend JointGram build_joint_gram(const RadialKernel&, const ExpansionPoint&,
                                    const std::vector<PairedPoint>&);
  JointGram(GramLayout layout, ExpansionPoint z, std::vector<PairedPoint> points)
      : layout_(layout), expansion_(std::move(z)), points_(std::move(points)) {}

  GramLayout layout_;
  ExpansionPoint expansion_;
  std::vector<PairedPoint> points_;
  Matrix matrix_;
  Matrix factor_;
  std::vector<Eigen::Index> active_;
  double jitter_used_ = 0.0;
};

/// Jitter ladder: 0, then 1e-12 * trace / dim escalating x10 up to 1e-6 * trace / dim.
/// Throws IllConditionedGram carrying the failing pivot (layout index) when every rung fails.
JointGram build_joint_gram(const RadialKernel& kernel, const ExpansionPoint& z,
                           const std::vector<PairedPoint>& points);

/// Row i is drawn from stream derive_seed(seed, i), whatever the thread count.
Vector sample_joint_row(const JointGram& gram, std::uint64_t seed, std::uint64_t row);

/// `count` iid rows N(0, gram), rows split across OpenMP threads.
RowMatrix sample_joint(const JointGram& gram, std::uint64_t seed, std::size_t count);

namespace reference {
/// Serial loop over sample_joint_row; the parallel version must match it bit for bit.
RowMatrix sample_joint(const JointGram& gram, std::uint64_t seed, std::size_t count);
}  // namespace reference

/// Builds the quadratic model encoded in the derivative part of a joint draw.
QuadraticModel model_from_row(const JointGram& gram, const Eigen::Ref<const Vector>& row);

}  // namespace skewgp
