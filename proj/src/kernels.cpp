#include "cmlr/kernels.hpp"

#include <cmath>
#include <vector>

namespace cmlr::kernels {

using Eigen::Index;

namespace {

// Per-row partial sums are combined serially in row order so the total is
// identical for every thread count.
template <typename PairTerm>
double ordered_pair_sum(const Eigen::MatrixXd& zt, PairTerm term) {
  const Index m = zt.cols();
  std::vector<double> row_sum(static_cast<std::size_t>(m), 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < m; ++i) {
    double acc = 0.0;
    for (Index j = i + 1; j < m; ++j) acc += term((zt.col(i) - zt.col(j)).squaredNorm());
    row_sum[static_cast<std::size_t>(i)] = acc;
  }
  double total = 0.0;
  for (double s : row_sum) total += s;
  return 2.0 * total;
}

}  // namespace

double pairwise_distance_sum(const Eigen::MatrixXd& zt) {
  return ordered_pair_sum(zt, [](double sq) { return std::sqrt(sq); });
}

double smoothed_distance_sum(const Eigen::MatrixXd& zt, double delta) {
  return ordered_pair_sum(zt, [delta](double sq) { return std::sqrt(sq + delta); });
}

void reweight(const Eigen::MatrixXd& zt, double delta, Eigen::MatrixXd& w) {
  const Index m = zt.cols();
  w.resize(m, m);
#pragma omp parallel for schedule(dynamic, 8)
  for (Index j = 0; j < m; ++j) {
    w(j, j) = 0.0;
    for (Index i = j + 1; i < m; ++i) {
      w(i, j) = 1.0 / std::sqrt((zt.col(i) - zt.col(j)).squaredNorm() + delta);
    }
  }
  // mirror after the parallel pass so no two threads touch the same column
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < j; ++i) w(i, j) = w(j, i);
  }
}

void assemble_reduced_hessian(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& w,
                              Index block, Eigen::MatrixXd& h) {
  const Index m = w.rows();
  h.resize(m * block, m * block);
  if (block == 0) return;
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < m; ++j) {
    double degree = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (i == j) continue;
      degree += w(i, j);
      h.block(i * block, j * block, block, block) =
          -w(i, j) * gram.block(i * block, j * block, block, block);
    }
    h.block(j * block, j * block, block, block) =
        degree * gram.block(j * block, j * block, block, block);
  }
}

void assemble_reduced_rhs(const Eigen::MatrixXd& cross, const Eigen::MatrixXd& w,
                          Index block, Eigen::VectorXd& rhs) {
  const Index m = w.rows();
  rhs.setZero(m * block);
  if (block == 0) return;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < m; ++i) {
    auto out = rhs.segment(i * block, block);
    const auto own = cross.block(i * block, i, block, 1);
    for (Index j = 0; j < m; ++j) {
      if (j == i) continue;
      out += w(i, j) * (cross.block(i * block, j, block, 1) - own);
    }
  }
}

namespace serial {

double pairwise_distance_sum(const Eigen::MatrixXd& zt) {
  double total = 0.0;
  for (Index i = 0; i < zt.cols(); ++i) {
    for (Index j = 0; j < zt.cols(); ++j) {
      if (i != j) total += (zt.col(i) - zt.col(j)).norm();
    }
  }
  return total;
}

double smoothed_distance_sum(const Eigen::MatrixXd& zt, double delta) {
  double total = 0.0;
  for (Index i = 0; i < zt.cols(); ++i) {
    for (Index j = 0; j < zt.cols(); ++j) {
      if (i != j) total += std::sqrt((zt.col(i) - zt.col(j)).squaredNorm() + delta);
    }
  }
  return total;
}

void reweight(const Eigen::MatrixXd& zt, double delta, Eigen::MatrixXd& w) {
  const Index m = zt.cols();
  w.setZero(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      w(i, j) = 1.0 / std::sqrt((zt.col(i) - zt.col(j)).squaredNorm() + delta);
      w(j, i) = w(i, j);
    }
  }
}

void assemble_reduced_hessian(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& w,
                              Index block, Eigen::MatrixXd& h) {
  const Index m = w.rows();
  h.setZero(m * block, m * block);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (i == j) continue;
      for (Index r = 0; r < block; ++r) {
        for (Index c = 0; c < block; ++c) {
          const double g_ij = gram(i * block + r, j * block + c);
          const double g_ii = gram(i * block + r, i * block + c);
          h(i * block + r, j * block + c) -= w(i, j) * g_ij;
          h(i * block + r, i * block + c) += w(i, j) * g_ii;
        }
      }
    }
  }
}

void assemble_reduced_rhs(const Eigen::MatrixXd& cross, const Eigen::MatrixXd& w,
                          Index block, Eigen::VectorXd& rhs) {
  const Index m = w.rows();
  rhs.setZero(m * block);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (i == j) continue;
      for (Index r = 0; r < block; ++r) {
        rhs(i * block + r) += w(i, j) * (cross(i * block + r, j) - cross(i * block + r, i));
      }
    }
  }
}

}  // namespace serial

}  // namespace cmlr::kernels
