#include "skewgp/joint_sampler.hpp"

#include <cmath>
#include <optional>

#include "skewgp/errors.hpp"
#include "skewgp/triangle.hpp"

namespace skewgp {

std::vector<std::string> GramLayout::names() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(total()));
  for (Eigen::Index a = 0; a < points; ++a) out.push_back("f" + std::to_string(a));
  for (Eigen::Index i = 0; i < dim; ++i) out.push_back("g" + std::to_string(i));
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      out.push_back("H11_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      out.push_back("H12_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  return out;
}

CrossCovariance cross_cov_derivatives(const RadialKernel& kernel, const ExpansionPoint& z,
                                      const PairedPoint& y) {
  require_same_dim(z.dim(), y.dim());
  const Vector a = z.zstar() - y.first();
  const Vector b = z.zstar() - y.second();
  const double dist = a.squaredNorm() + b.squaredNorm();
  const double h1 = kernel.d1(dist);
  const double h2 = kernel.d2(dist);

  CrossCovariance out;
  out.g = 4.0 * h1 * (a - b);
  out.h11 = 8.0 * h2 * (a * a.transpose() - b * b.transpose());
  out.h12 = 8.0 * h2 * (a * b.transpose() - b * a.transpose());
  return out;
}

Vector derivative_functional(const PairedPoint& x, const ExpansionPoint& z) {
  require_same_dim(z.dim(), x.dim());
  const Eigen::Index d = x.dim();
  const Vector d1 = x.first() - z.zstar();
  const Vector d2 = x.second() - z.zstar();

  Vector c(d + d * d);
  c.head(d) = d1 - d2;
  Eigen::Index k = d;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      c(k++) = i == j ? 0.5 * (d1(i) * d1(i) - d2(i) * d2(i)) : d1(i) * d1(j) - d2(i) * d2(j);
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) c(k++) = d1(i) * d2(j) - d1(j) * d2(i);
  }
  return c;
}

namespace {

// In-place lower Cholesky of `a`; returns the failing pivot if one is not positive.
std::optional<Eigen::Index> cholesky_in_place(Matrix& a) {
  const Eigen::Index m = a.rows();
  for (Eigen::Index j = 0; j < m; ++j) {
    double diag = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) return j;
    const double ljj = std::sqrt(diag);
    a(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < m; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return std::nullopt;
}

}  // namespace

JointGram build_joint_gram(const RadialKernel& kernel, const ExpansionPoint& z,
                           const std::vector<PairedPoint>& points) {
  require_nondegenerate(kernel);
  const Eigen::Index d = z.dim();
  for (const auto& p : points) require_same_dim(d, p.dim());

  const GramLayout layout{static_cast<Eigen::Index>(points.size()), d};
  JointGram gram(layout, z, points);
  Matrix& k = gram.matrix_;
  k = Matrix::Zero(layout.total(), layout.total());

  const Eigen::Index n = layout.points;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const double v = cov_skew(kernel, points[a], points[b]);
      k(a, b) = v;
      k(b, a) = v;
    }
  }

  for (Eigen::Index a = 0; a < n; ++a) {
    const CrossCovariance c = cross_cov_derivatives(kernel, z, points[a]);
    Eigen::Index col = layout.g_offset();
    for (Eigen::Index i = 0; i < d; ++i, ++col) k(a, col) = c.g(i);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j, ++col) k(a, col) = c.h11(i, j);
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j, ++col) k(a, col) = c.h12(i, j);
    }
    for (Eigen::Index col2 = n; col2 < layout.total(); ++col2) k(col2, a) = k(a, col2);
  }

  const double var_g = gradient_variance(kernel);
  const double var_h = hessian_variance(kernel);
  for (Eigen::Index i = 0; i < d; ++i) k(layout.g_offset() + i, layout.g_offset() + i) = var_g;
  {
    Eigen::Index idx = layout.h11_offset();
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i; j < d; ++j, ++idx) k(idx, idx) = i == j ? 2.0 * var_h : var_h;
    }
    for (Eigen::Index i = layout.h12_offset(); i < layout.total(); ++i) k(i, i) = var_h;
  }

  for (Eigen::Index i = 0; i < layout.total(); ++i) {
    if ((k.row(i).array() != 0.0).any()) gram.active_.push_back(i);
  }
  const auto m = static_cast<Eigen::Index>(gram.active_.size());
  Matrix active_block(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) active_block(i, j) = k(gram.active_[i], gram.active_[j]);
  }

  const double scale = m > 0 ? active_block.trace() / static_cast<double>(m) : 0.0;
  std::optional<Eigen::Index> failed;
  double jitter = 0.0;
  constexpr double kJitterLadder[] = {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};
  for (const double rung : kJitterLadder) {
    jitter = rung * scale;
    Matrix attempt = active_block;
    attempt.diagonal().array() += jitter;
    failed = cholesky_in_place(attempt);
    if (!failed) {
      gram.factor_ = std::move(attempt);
      gram.jitter_used_ = jitter;
      return gram;
    }
  }
  throw IllConditionedGram(static_cast<std::size_t>(gram.active_[*failed]), jitter);
}

Vector sample_joint_row(const JointGram& gram, std::uint64_t seed, std::uint64_t row) {
  Engine rng = stream_for(seed, row);
  const auto m = static_cast<Eigen::Index>(gram.active().size());
  Vector w(m);
  for (Eigen::Index i = 0; i < m; ++i) w(i) = standard_normal(rng);
  const Vector y = gram.factor().triangularView<Eigen::Lower>() * w;
  Vector out = Vector::Zero(gram.layout().total());
  for (Eigen::Index i = 0; i < m; ++i) out(gram.active()[i]) = y(i);
  return out;
}

RowMatrix sample_joint(const JointGram& gram, std::uint64_t seed, std::size_t count) {
  RowMatrix out(static_cast<Eigen::Index>(count), gram.layout().total());
  const auto rows = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < rows; ++i) {
    out.row(i) = sample_joint_row(gram, seed, static_cast<std::uint64_t>(i)).transpose();
  }
  return out;
}

namespace reference {

RowMatrix sample_joint(const JointGram& gram, std::uint64_t seed, std::size_t count) {
  RowMatrix out(static_cast<Eigen::Index>(count), gram.layout().total());
  for (std::size_t i = 0; i < count; ++i) {
    out.row(static_cast<Eigen::Index>(i)) = sample_joint_row(gram, seed, i).transpose();
  }
  return out;
}

}  // namespace reference

QuadraticModel model_from_row(const JointGram& gram, const Eigen::Ref<const Vector>& row) {
  const GramLayout& layout = gram.layout();
  require_same_dim(layout.total(), row.size());
  const Eigen::Index d = layout.dim;
  QuadraticModel model;
  model.zstar = gram.expansion().zstar();
  model.g = row.segment(layout.g_offset(), d);
  model.h11 = unpack_symmetric(row.segment(layout.h11_offset(), upper_size(d)), d);
  model.h12 = unpack_skew(row.segment(layout.h12_offset(), strict_upper_size(d)), d);
  const double var_g = gram.matrix()(layout.g_offset(), layout.g_offset());
  model.sigma_g_sq = var_g;
  model.sigma_h_sq = d > 1 ? gram.matrix()(layout.h11_offset() + 1, layout.h11_offset() + 1)
                           : 0.5 * gram.matrix()(layout.h11_offset(), layout.h11_offset());
  return model;
}

}  // namespace skewgp
