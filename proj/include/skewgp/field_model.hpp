#pragma once

#include <Eigen/Dense>

#include "skewgp/radial_kernel.hpp"

namespace skewgp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point (x1, x2) of R^D x R^D.
class PairedPoint {
 public:
  /// Throws DimensionMismatch unless both halves have the same length D >= 1.
  PairedPoint(Vector first, Vector second);

  /// Splits a flat [x1..., x2...] array of even length.
  static PairedPoint from_flat(const Vector& flat);

  const Vector& first() const { return first_; }
  const Vector& second() const { return second_; }
  Eigen::Index dim() const { return first_.size(); }

  bool matched() const { return first_ == second_; }
  Vector flat() const;

 private:
  Vector first_;
  Vector second_;
};

/// The matched point z = (z*, z*) where local expansions are taken.
class ExpansionPoint {
 public:
  explicit ExpansionPoint(Vector zstar);
  static ExpansionPoint origin(Eigen::Index dim) { return ExpansionPoint(Vector::Zero(dim)); }

  const Vector& zstar() const { return zstar_; }
  Eigen::Index dim() const { return zstar_.size(); }
  PairedPoint as_paired() const { return PairedPoint(zstar_, zstar_); }

 private:
  Vector zstar_;
};

PairedPoint flip(const PairedPoint& x);

/// (x1 - z*, x2 - z*).
PairedPoint displacement(const PairedPoint& x, const ExpansionPoint& z);

/// Squared distance over the concatenated 2D vector.
double squared_distance(const PairedPoint& x, const PairedPoint& y);

/// Inner product over the concatenated 2D vector.
double inner(const PairedPoint& x, const PairedPoint& y);

/// Base field covariance k_u(x, y) = h(|x - y|^2).
double cov_base(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y);

/// Skew-symmetric field covariance k_f(x, y) = 2 (k_u(x, y) - k_u(x, flip(y))).
double cov_skew(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y);

/// Applies Q to both halves. Throws InvalidArgument unless Q^T Q = I within 1e-10.
PairedPoint apply_block_orthogonal(const Matrix& q, const PairedPoint& x);
ExpansionPoint apply_block_orthogonal(const Matrix& q, const ExpansionPoint& z);

void require_same_dim(Eigen::Index expected, Eigen::Index actual);

}  // namespace skewgp
