#include "skewgp/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "skewgp/errors.hpp"

namespace skewgp {

double MomentSums::zero_mean_cov_se(Eigen::Index a, Eigen::Index b) const {
  const double m = cross(a, b);
  const double var = std::max(0.0, cross_sq(a, b) - m * m);
  return std::sqrt(var / static_cast<double>(count));
}

double MomentSums::centered_cov(Eigen::Index a, Eigen::Index b) const {
  return cross(a, b) - mean(a) * mean(b);
}

double MomentSums::centered_var_se(Eigen::Index a) const {
  // sqrt(Var(v^2) / N), moments about zero; the mean correction is O(1/N).
  const double m2 = cross(a, a);
  const double spread = std::max(0.0, cross_sq(a, a) - m2 * m2);
  return std::sqrt(spread / static_cast<double>(count));
}

double MomentSums::correlation(Eigen::Index a, Eigen::Index b) const {
  const double va = centered_cov(a, a);
  const double vb = centered_cov(b, b);
  if (!(va > 0.0) || !(vb > 0.0)) return 0.0;
  return centered_cov(a, b) / std::sqrt(va * vb);
}

namespace {

struct ChunkSums {
  Eigen::VectorXd v;
  Eigen::MatrixXd vv;
  Eigen::MatrixXd vv2;
};

ChunkSums sum_chunk(std::size_t chunk, std::size_t count, Eigen::Index width,
                    const RowFunction& row_fn) {
  ChunkSums s{Eigen::VectorXd::Zero(width), Eigen::MatrixXd::Zero(width, width),
              Eigen::MatrixXd::Zero(width, width)};
  Eigen::VectorXd row(width);
  const std::size_t begin = chunk * kChunkRows;
  const std::size_t end = std::min(count, begin + kChunkRows);
  for (std::size_t i = begin; i < end; ++i) {
    row.setZero();
    row_fn(i, row);
    s.v += row;
    for (Eigen::Index b = 0; b < width; ++b) {
      for (Eigen::Index a = 0; a <= b; ++a) {
        const double p = row(a) * row(b);
        s.vv(a, b) += p;
        s.vv2(a, b) += p * p;
      }
    }
  }
  return s;
}

MomentSums combine(const std::vector<ChunkSums>& chunks, std::size_t count, Eigen::Index width) {
  MomentSums out;
  out.count = count;
  out.mean = Eigen::VectorXd::Zero(width);
  out.cross = Eigen::MatrixXd::Zero(width, width);
  out.cross_sq = Eigen::MatrixXd::Zero(width, width);
  for (const auto& c : chunks) {
    out.mean += c.v;
    out.cross += c.vv;
    out.cross_sq += c.vv2;
  }
  const double n = static_cast<double>(count);
  out.mean /= n;
  out.cross /= n;
  out.cross_sq /= n;
  for (Eigen::Index b = 0; b < width; ++b) {
    for (Eigen::Index a = 0; a < b; ++a) {
      out.cross(b, a) = out.cross(a, b);
      out.cross_sq(b, a) = out.cross_sq(a, b);
    }
  }
  return out;
}

void check_args(std::size_t count, Eigen::Index width) {
  if (count == 0) throw InvalidArgument("Monte Carlo sample count must be positive");
  if (width < 1) throw InvalidArgument("Monte Carlo observation width must be positive");
}

}  // namespace

MomentSums accumulate_moments(std::size_t count, Eigen::Index width, const RowFunction& row_fn) {
  check_args(count, width);
  const std::size_t chunks = (count + kChunkRows - 1) / kChunkRows;
  std::vector<ChunkSums> partial(chunks);
  const auto n_chunks = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    partial[static_cast<std::size_t>(c)] =
        sum_chunk(static_cast<std::size_t>(c), count, width, row_fn);
  }
  return combine(partial, count, width);
}

namespace reference {

MomentSums accumulate_moments(std::size_t count, Eigen::Index width, const RowFunction& row_fn) {
  check_args(count, width);
  const std::size_t chunks = (count + kChunkRows - 1) / kChunkRows;
  std::vector<ChunkSums> partial;
  partial.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) partial.push_back(sum_chunk(c, count, width, row_fn));
  return combine(partial, count, width);
}

}  // namespace reference

}  // namespace skewgp
