#pragma once

#include "skewgp/field_model.hpp"
#include "skewgp/rng.hpp"

namespace skewgp {

/// Random coefficients of the skew-symmetric quadratic approximation at (z*, z*):
///
///   f~(x) = g^T (d1 - d2) + 1/2 (d1^T H11 d1 - d2^T H11 d2) + d1^T H12 d2,
///   d1 = x1 - z*,  d2 = x2 - z*.
///
/// H11 is symmetric and H12 skew-symmetric; both are stored as full D x D matrices.
struct QuadraticModel {
  Vector zstar;
  Vector g;
  Matrix h11;
  Matrix h12;
  double sigma_g_sq = 0.0;  // -4 h'(0)
  double sigma_h_sq = 0.0;  //  8 h''(0)

  Eigen::Index dim() const { return zstar.size(); }
};

/// Variance of each gradient entry, -4 h'(0).
double gradient_variance(const RadialKernel& kernel);
/// Variance of the off-diagonal Hessian entries, 8 h''(0). Diagonal H11 entries have twice this.
double hessian_variance(const RadialKernel& kernel);

/// Throws DegenerateKernel unless h'(0) < 0 and h''(0) > 0.
void require_nondegenerate(const RadialKernel& kernel);

/// Draws (g, H11, H12) entrywise: g_i ~ N(0, -4h'(0)); H11 off-diagonal ~ N(0, 8h''(0)),
/// diagonal ~ N(0, 16h''(0)); H12 strict upper triangle ~ N(0, 8h''(0)), antisymmetrized.
QuadraticModel sample_model(const RadialKernel& kernel, Eigen::Index dim,
                            const Vector& zstar, Engine& rng);

double eval_model(const QuadraticModel& model, const PairedPoint& x);

/// Closed-form covariance of f~ at x and y:
///   -4 h'(0) (<dx, dy> - <dx, flip dy>) + 4 h''(0) (<dx, dy>^2 - <dx, flip dy>^2).
double cov_model(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y,
                 const ExpansionPoint& z);

/// Serialized form: {zstar, g, H11 upper triangle with diagonal, H12 strict upper triangle},
/// triangles in row-major order.
struct ModelRecord {
  Vector zstar;
  Vector g;
  Vector h11_upper;
  Vector h12_upper;
};

ModelRecord to_record(const QuadraticModel& model);
QuadraticModel from_record(const ModelRecord& record, double sigma_g_sq = 0.0,
                           double sigma_h_sq = 0.0);

}  // namespace skewgp
