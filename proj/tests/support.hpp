#pragma once

#include <random>

#include "skewgp/field_model.hpp"

namespace test_support {

inline skewgp::Vector normal_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  skewgp::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

inline skewgp::PairedPoint random_point(std::mt19937_64& rng, Eigen::Index dim, double scale = 1.0) {
  return {normal_vector(rng, dim, scale), normal_vector(rng, dim, scale)};
}

/// Haar-ish orthogonal matrix from the QR of a Gaussian matrix.
inline skewgp::Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index dim) {
  skewgp::Matrix a(dim, dim);
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = nd(rng);
  Eigen::HouseholderQR<skewgp::Matrix> qr(a);
  return qr.householderQ() * skewgp::Matrix::Identity(dim, dim);
}

inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

}  // namespace test_support
