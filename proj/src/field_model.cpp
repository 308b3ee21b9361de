#include "skewgp/field_model.hpp"

#include "skewgp/errors.hpp"

namespace skewgp {

void require_same_dim(Eigen::Index expected, Eigen::Index actual) {
  if (expected != actual) {
    throw DimensionMismatch(static_cast<std::size_t>(expected),
                            static_cast<std::size_t>(actual));
  }
}

PairedPoint::PairedPoint(Vector first, Vector second)
    : first_(std::move(first)), second_(std::move(second)) {
  require_same_dim(first_.size(), second_.size());
  if (first_.size() < 1) throw InvalidArgument("paired point needs dimension D >= 1");
}

PairedPoint PairedPoint::from_flat(const Vector& flat) {
  if (flat.size() < 2 || flat.size() % 2 != 0) {
    throw InvalidArgument("flat paired point must have even length >= 2, got " +
                          std::to_string(flat.size()));
  }
  const Eigen::Index d = flat.size() / 2;
  return PairedPoint(flat.head(d), flat.tail(d));
}

Vector PairedPoint::flat() const {
  Vector out(2 * dim());
  out << first_, second_;
  return out;
}

ExpansionPoint::ExpansionPoint(Vector zstar) : zstar_(std::move(zstar)) {
  if (zstar_.size() < 1) throw InvalidArgument("expansion point needs dimension D >= 1");
}

PairedPoint flip(const PairedPoint& x) { return PairedPoint(x.second(), x.first()); }

PairedPoint displacement(const PairedPoint& x, const ExpansionPoint& z) {
  require_same_dim(z.dim(), x.dim());
  return PairedPoint(x.first() - z.zstar(), x.second() - z.zstar());
}

double squared_distance(const PairedPoint& x, const PairedPoint& y) {
  require_same_dim(x.dim(), y.dim());
  return (x.first() - y.first()).squaredNorm() + (x.second() - y.second()).squaredNorm();
}

double inner(const PairedPoint& x, const PairedPoint& y) {
  require_same_dim(x.dim(), y.dim());
  return x.first().dot(y.first()) + x.second().dot(y.second());
}

double cov_base(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y) {
  return kernel.value(squared_distance(x, y));
}

double cov_skew(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y) {
  require_same_dim(x.dim(), y.dim());
  const double direct = squared_distance(x, y);
  const double flipped = (x.first() - y.second()).squaredNorm() +
                         (x.second() - y.first()).squaredNorm();
  // h(p) - h(q) = drop(q) - drop(p); exact zero when p == q.
  return 2.0 * (kernel.drop(flipped) - kernel.drop(direct));
}

namespace {

void require_orthogonal(const Matrix& q, Eigen::Index dim) {
  if (q.rows() != q.cols()) throw InvalidArgument("block-orthogonal map must be square");
  require_same_dim(dim, q.rows());
  const double defect = (q.transpose() * q - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) {
    throw InvalidArgument("matrix is not orthogonal (max |Q^T Q - I| = " +
                          std::to_string(defect) + ")");
  }
}

}  // namespace

PairedPoint apply_block_orthogonal(const Matrix& q, const PairedPoint& x) {
  require_orthogonal(q, x.dim());
  return PairedPoint(q * x.first(), q * x.second());
}

ExpansionPoint apply_block_orthogonal(const Matrix& q, const ExpansionPoint& z) {
  require_orthogonal(q, z.dim());
  return ExpansionPoint(q * z.zstar());
}

}  // namespace skewgp
