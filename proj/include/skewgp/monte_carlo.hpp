#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace skewgp {

/// Rows per reduction chunk. Partial sums are formed per chunk and combined in
/// chunk order, so results do not depend on how chunks are spread over threads.
inline constexpr std::size_t kChunkRows = 1024;

/// Fills `out` (preallocated, length `width`) with the observation for row `row`.
using RowFunction = std::function<void(std::uint64_t row, Eigen::Ref<Eigen::VectorXd> out)>;

/// First and second moments of a vector-valued Monte Carlo sample.
struct MomentSums {
  std::size_t count = 0;
  Eigen::VectorXd mean;      // E[v_a]
  Eigen::MatrixXd cross;     // E[v_a v_b]
  Eigen::MatrixXd cross_sq;  // E[(v_a v_b)^2]

  /// Covariance estimate for a mean-zero vector, E[v_a v_b].
  double zero_mean_cov(Eigen::Index a, Eigen::Index b) const { return cross(a, b); }
  /// Standard error of zero_mean_cov.
  double zero_mean_cov_se(Eigen::Index a, Eigen::Index b) const;

  /// Sample covariance about the sample means.
  double centered_cov(Eigen::Index a, Eigen::Index b) const;
  /// Approximate standard error of the centered variance of v_a.
  double centered_var_se(Eigen::Index a) const;
  double correlation(Eigen::Index a, Eigen::Index b) const;
};

/// OpenMP over chunks.
MomentSums accumulate_moments(std::size_t count, Eigen::Index width, const RowFunction& row_fn);

namespace reference {
/// Same chunked reduction, executed on the calling thread.
MomentSums accumulate_moments(std::size_t count, Eigen::Index width, const RowFunction& row_fn);
}  // namespace reference

}  // namespace skewgp
