#include "skewgp/quad_approx.hpp"

#include <cmath>

#include "skewgp/errors.hpp"
#include "skewgp/triangle.hpp"

namespace skewgp {

Eigen::VectorXd pack_upper(const Eigen::MatrixXd& m) {
  const Eigen::Index d = m.rows();
  Eigen::VectorXd out(upper_size(d));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) out(k++) = m(i, j);
  }
  return out;
}

Eigen::VectorXd pack_strict_upper(const Eigen::MatrixXd& m) {
  const Eigen::Index d = m.rows();
  Eigen::VectorXd out(strict_upper_size(d));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) out(k++) = m(i, j);
  }
  return out;
}

Eigen::MatrixXd unpack_symmetric(const Eigen::Ref<const Eigen::VectorXd>& packed,
                                 Eigen::Index dim) {
  if (packed.size() != upper_size(dim)) {
    throw DimensionMismatch(static_cast<std::size_t>(upper_size(dim)),
                            static_cast<std::size_t>(packed.size()));
  }
  Eigen::MatrixXd m(dim, dim);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      m(i, j) = packed(k);
      m(j, i) = packed(k);
      ++k;
    }
  }
  return m;
}

Eigen::MatrixXd unpack_skew(const Eigen::Ref<const Eigen::VectorXd>& packed, Eigen::Index dim) {
  if (packed.size() != strict_upper_size(dim)) {
    throw DimensionMismatch(static_cast<std::size_t>(strict_upper_size(dim)),
                            static_cast<std::size_t>(packed.size()));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      m(i, j) = packed(k);
      m(j, i) = -packed(k);
      ++k;
    }
  }
  return m;
}

double gradient_variance(const RadialKernel& kernel) { return -4.0 * kernel.d1(0.0); }

double hessian_variance(const RadialKernel& kernel) { return 8.0 * kernel.d2(0.0); }

void require_nondegenerate(const RadialKernel& kernel) {
  const double h1 = kernel.d1(0.0);
  const double h2 = kernel.d2(0.0);
  if (!(h1 < 0.0) || !(h2 > 0.0)) {
    throw DegenerateKernel("kernel needs h'(0) < 0 and h''(0) > 0, got h'(0) = " +
                           std::to_string(h1) + ", h''(0) = " + std::to_string(h2));
  }
}

QuadraticModel sample_model(const RadialKernel& kernel, Eigen::Index dim,
                            const Vector& zstar, Engine& rng) {
  if (dim < 1) throw InvalidArgument("model dimension must be >= 1");
  require_same_dim(dim, zstar.size());
  require_nondegenerate(kernel);

  QuadraticModel model;
  model.zstar = zstar;
  model.sigma_g_sq = gradient_variance(kernel);
  model.sigma_h_sq = hessian_variance(kernel);
  const double sd_g = std::sqrt(model.sigma_g_sq);
  const double sd_off = std::sqrt(model.sigma_h_sq);
  const double sd_diag = std::sqrt(2.0 * model.sigma_h_sq);

  model.g.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) model.g(i) = sd_g * standard_normal(rng);

  model.h11.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      const double v = (i == j ? sd_diag : sd_off) * standard_normal(rng);
      model.h11(i, j) = v;
      model.h11(j, i) = v;
    }
  }

  model.h12 = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double v = sd_off * standard_normal(rng);
      model.h12(i, j) = v;
      model.h12(j, i) = -v;
    }
  }
  return model;
}

double eval_model(const QuadraticModel& model, const PairedPoint& x) {
  require_same_dim(model.dim(), x.dim());
  const Vector d1 = x.first() - model.zstar;
  const Vector d2 = x.second() - model.zstar;
  const double linear = model.g.dot(d1 - d2);
  const double diagonal = 0.5 * (d1.dot(model.h11 * d1) - d2.dot(model.h11 * d2));
  // Strict upper triangle only, so the value is exactly odd under flip.
  double cross = 0.0;
  for (Eigen::Index i = 0; i < model.dim(); ++i) {
    for (Eigen::Index j = i + 1; j < model.dim(); ++j) {
      cross += model.h12(i, j) * (d1(i) * d2(j) - d1(j) * d2(i));
    }
  }
  return linear + diagonal + cross;
}

double cov_model(const RadialKernel& kernel, const PairedPoint& x, const PairedPoint& y,
                 const ExpansionPoint& z) {
  const PairedPoint dx = displacement(x, z);
  const PairedPoint dy = displacement(y, z);
  const double direct = inner(dx, dy);
  const double flipped = inner(dx, flip(dy));
  return -4.0 * kernel.d1(0.0) * (direct - flipped) +
         4.0 * kernel.d2(0.0) * (direct * direct - flipped * flipped);
}

ModelRecord to_record(const QuadraticModel& model) {
  return ModelRecord{model.zstar, model.g, pack_upper(model.h11), pack_strict_upper(model.h12)};
}

QuadraticModel from_record(const ModelRecord& record, double sigma_g_sq, double sigma_h_sq) {
  const Eigen::Index d = record.zstar.size();
  require_same_dim(d, record.g.size());
  QuadraticModel model;
  model.zstar = record.zstar;
  model.g = record.g;
  model.h11 = unpack_symmetric(record.h11_upper, d);
  model.h12 = unpack_skew(record.h12_upper, d);
  model.sigma_g_sq = sigma_g_sq;
  model.sigma_h_sq = sigma_h_sq;
  return model;
}

}  // namespace skewgp
