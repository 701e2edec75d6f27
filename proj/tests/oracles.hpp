#pragma once
// Reference computations for the tests. Nothing here calls into the library's
// kernels or solver, so agreement is a genuine cross-check.
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

// Sum over ordered pairs, rows of z are the points.
inline double objective(const Eigen::MatrixXd& z) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.rows(); ++j)
      if (i != j) s += (z.row(i) - z.row(j)).norm();
  return s;
}

// min sum_{i,j} w_ij ||z_i - z_j||^2  s.t. a_i^T z_i = b_i, by factoring the
// full (md + m) saddle-point system
//   [ 4 (L (x) I)  A^T ] [z]   [0]
//   [ A            0   ] [l] = [b]
// Throws if the system is singular (non-unique minimizer).
inline Eigen::MatrixXd kkt_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                 const Eigen::MatrixXd& w) {
  const Eigen::Index m = a.rows(), d = a.cols(), n = m * d + m;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      // gradient of w_ij ||z_i - z_j||^2 + w_ji ||z_j - z_i||^2 in z_i
      const double c = 2.0 * (w(i, j) + w(j, i));
      for (Eigen::Index r = 0; r < d; ++r) {
        k(i * d + r, i * d + r) += c;
        k(i * d + r, j * d + r) -= c;
      }
    }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index r = 0; r < d; ++r) {
      k(m * d + i, i * d + r) = a(i, r);
      k(i * d + r, m * d + i) = a(i, r);
    }
    rhs(m * d + i) = b(i);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (lu.rank() < n) throw std::runtime_error("kkt oracle: singular system");
  const Eigen::VectorXd x = lu.solve(rhs);
  Eigen::MatrixXd z(m, d);
  for (Eigen::Index i = 0; i < m; ++i) z.row(i) = x.segment(i * d, d).transpose();
  return z;
}

// Half-width of a box in the line parameters s_i (see grid_search) that holds
// every pairwise intersection of the lines, with a 50% margin.
inline double line_box(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::Vector2d ai = a.row(i).transpose();
    const Eigen::Vector2d zi = b(i) / ai.squaredNorm() * ai;
    const Eigen::Vector2d ni = Eigen::Vector2d(-ai(1), ai(0)).normalized();
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      if (i == j) continue;
      Eigen::Matrix2d m;
      m << a.row(i), a.row(j);
      if (std::abs(m.determinant()) < 1e-12 * ai.norm() * a.row(j).norm()) continue;
      const Eigen::Vector2d x = m.partialPivLu().solve(Eigen::Vector2d(b(i), b(j)));
      r = std::max(r, std::abs(ni.dot(x - zi)));
    }
  }
  return 1.5 * r + 1.0;
}

// d = 2 only. z_i = z0_i + s_i n_i on the line of point i. Exhaustive grid over
// s in [-radius, radius]^m with at most ~1e6 points, then repeated exhaustive
// grids on a shrinking box around the incumbent. Returns the best field found.
inline Eigen::MatrixXd grid_search(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                   double radius, int zoom_rounds = 60) {
  const int m = static_cast<int>(a.rows());
  if (a.cols() != 2 || m < 1 || m > 6) throw std::invalid_argument("grid oracle: d = 2, m <= 6");
  double z0[6][2], dir[6][2];
  for (int i = 0; i < m; ++i) {
    const double a0 = a(i, 0), a1 = a(i, 1), n2 = a0 * a0 + a1 * a1, n = std::sqrt(n2);
    z0[i][0] = b(i) * a0 / n2;
    z0[i][1] = b(i) * a1 / n2;
    dir[i][0] = -a1 / n;
    dir[i][1] = a0 / n;
  }
  auto value = [&](const double* s) {
    double p[6][2];
    for (int i = 0; i < m; ++i) {
      p[i][0] = z0[i][0] + s[i] * dir[i][0];
      p[i][1] = z0[i][1] + s[i] * dir[i][1];
    }
    double v = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) v += std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]);
    return 2.0 * v;
  };
  double best[6] = {0, 0, 0, 0, 0, 0};
  double best_val = std::numeric_limits<double>::infinity();
  auto search = [&](const double* centre, double half, int points) {
    int idx[6] = {0, 0, 0, 0, 0, 0};
    double s[6];
    const double step = 2.0 * half / (points - 1);
    const double c[6] = {centre[0], centre[1], centre[2], centre[3], centre[4], centre[5]};
    while (true) {
      for (int i = 0; i < m; ++i) s[i] = c[i] - half + step * idx[i];
      const double v = value(s);
      if (v < best_val) {
        best_val = v;
        std::copy(s, s + m, best);
      }
      int k = 0;
      while (k < m && ++idx[k] == points) idx[k++] = 0;
      if (k == m) break;
    }
  };
  static constexpr int per_axis[] = {0, 200, 200, 100, 31, 15, 10};
  static constexpr int zoom_axis[] = {0, 21, 21, 11, 9, 7, 5};
  const double origin[6] = {0, 0, 0, 0, 0, 0};
  search(origin, radius, per_axis[m]);
  double half = 2.0 * radius / (per_axis[m] - 1);
  for (int r = 0; r < zoom_rounds; ++r) {
    search(best, half, zoom_axis[m]);
    half *= 0.5;
  }
  Eigen::MatrixXd z(m, 2);
  for (int i = 0; i < m; ++i) {
    z(i, 0) = z0[i][0] + best[i] * dir[i][0];
    z(i, 1) = z0[i][1] + best[i] * dir[i][1];
  }
  return z;
}

}  // namespace oracle
