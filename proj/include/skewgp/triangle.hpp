#pragma once

#include <Eigen/Dense>

namespace skewgp {

// Row-major packing of the upper triangle of a D x D matrix.

constexpr Eigen::Index upper_size(Eigen::Index dim) { return dim * (dim + 1) / 2; }
constexpr Eigen::Index strict_upper_size(Eigen::Index dim) { return dim * (dim - 1) / 2; }

Eigen::VectorXd pack_upper(const Eigen::MatrixXd& m);
Eigen::VectorXd pack_strict_upper(const Eigen::MatrixXd& m);

Eigen::MatrixXd unpack_symmetric(const Eigen::Ref<const Eigen::VectorXd>& packed, Eigen::Index dim);
Eigen::MatrixXd unpack_skew(const Eigen::Ref<const Eigen::VectorXd>& packed, Eigen::Index dim);

}  // namespace skewgp
