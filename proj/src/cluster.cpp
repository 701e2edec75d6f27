#include "cmlr/cluster.hpp"

#include "cmlr/error.hpp"
#include "cmlr/geometry.hpp"
#include "cmlr/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <limits>
#include <numeric>

namespace cmlr {

namespace {

// Index of the nearest center, lowest index on ties.
std::pair<int, double> nearest(const Eigen::MatrixXd& centers, const Eigen::VectorXd& x) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centers.rows(); ++c) {
    const double dist = (centers.row(c).transpose() - x).squaredNorm();
    if (dist < best_d) {
      best_d = dist;
      best = c;
    }
  }
  return {best, best_d};
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, int k, SplitMix64& rng) {
  const Index m = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  Index first = static_cast<Index>(rng.uniform() * static_cast<double>(m));
  centers.row(0) = points.row(std::min(first, m - 1));
  Eigen::VectorXd d2(m);
  for (Index i = 0; i < m; ++i) d2(i) = (points.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = m - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < m; ++i) {
        acc += d2(i);
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::min(static_cast<Index>(rng.uniform() * static_cast<double>(m)), m - 1);
    }
    centers.row(c) = points.row(pick);
    for (Index i = 0; i < m; ++i) d2(i) = std::min(d2(i), (points.row(i) - centers.row(c)).squaredNorm());
  }
  return centers;
}

ClusteringResult lloyd(const Eigen::MatrixXd& points, int k, SplitMix64& rng) {
  const Index m = points.rows();
  ClusteringResult out;
  out.centers = seed_plus_plus(points, k, rng);
  out.labels.assign(static_cast<std::size_t>(m), -1);
  std::vector<double> dist(static_cast<std::size_t>(m));

  for (int it = 0; it < kLloydIterations; ++it) {
    bool changed = false;
    for (Index i = 0; i < m; ++i) {
      const auto [c, d] = nearest(out.centers, points.row(i).transpose());
      if (c != out.labels[i]) changed = true;
      out.labels[i] = c;
      dist[i] = d;
    }
    if (!changed && it > 0) break;

    // repair empty clusters with the farthest point of a cluster that can spare one
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (int l : out.labels) ++counts[l];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      Index far = -1;
      for (Index i = 0; i < m; ++i) {
        if (counts[out.labels[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
      }
      if (far < 0) break;
      --counts[out.labels[far]];
      out.labels[far] = c;
      dist[far] = 0.0;
      ++counts[c];
    }

    out.centers.setZero();
    for (Index i = 0; i < m; ++i) out.centers.row(out.labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) out.centers.row(c) /= static_cast<double>(counts[c]);
    }
    out.iterations = it + 1;
    double inertia = 0.0;
    for (Index i = 0; i < m; ++i) inertia += (points.row(i) - out.centers.row(out.labels[i])).squaredNorm();
    out.inertia_history.push_back(inertia);
  }
  // final assignment is consistent with the final centers
  out.inertia = 0.0;
  for (Index i = 0; i < m; ++i) out.inertia += (points.row(i) - out.centers.row(out.labels[i])).squaredNorm();
  return out;
}

}  // namespace

ClusteringResult kmeans(const Eigen::MatrixXd& points, int k, int restarts, std::uint64_t seed) {
  if (points.rows() == 0 || points.cols() == 0) throw DataError("k-means on empty input");
  if (k < 1) throw DataError("k must be at least 1");
  if (k > points.rows()) throw DataError("k exceeds the number of points");
  if (restarts < 1) throw DataError("restarts must be at least 1");
  if (!points.allFinite()) throw DataError("k-means input must be finite");

  std::vector<ClusteringResult> runs(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    runs[r] = lloyd(points, k, rng);
    runs[r].restart = r;
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].inertia < runs[best].inertia) best = r;
  }
  return std::move(runs[best]);
}

RefitResult refit_regression(const Dataset& data, std::span<const int> labels, int k) {
  if (static_cast<Index>(labels.size()) != data.size()) throw DataError("one label per row is required");
  if (k < 1) throw DataError("k must be at least 1");
  RefitResult out;
  out.betas.resize(k, data.dim());
  out.per_class_residual.resize(k);
  out.underdetermined.assign(static_cast<std::size_t>(k), false);
  for (int p = 0; p < k; ++p) {
    std::vector<Index> rows;
    for (Index i = 0; i < data.size(); ++i) {
      const int l = labels[static_cast<std::size_t>(i)];
      if (l < 0 || l >= k) throw DataError("label out of range");
      if (l == p) rows.push_back(i);
    }
    if (rows.empty()) throw DataError("class " + std::to_string(p + 1) + " has no members");
    Eigen::MatrixXd a(static_cast<Index>(rows.size()), data.dim());
    Eigen::VectorXd b(static_cast<Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      a.row(static_cast<Index>(r)) = data.features().row(rows[r]);
      b(static_cast<Index>(r)) = data.response(rows[r]);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    cod.setThreshold(kRankTolerance);
    const Eigen::VectorXd beta = cod.solve(b);
    out.underdetermined[p] = cod.rank() < data.dim();
    out.betas.row(p) = beta.transpose();
    out.per_class_residual(p) = (a * beta - b).cwiseAbs().maxCoeff();
  }
  return out;
}

LabelMatch match_labels(std::span<const int> predicted, std::span<const int> truth, int k) {
  if (predicted.size() != truth.size()) throw DataError("label lists differ in length");
  if (k < 1) throw DataError("k must be at least 1");
  if (k > 8) throw DataError("label matching is exhaustive and limited to k <= 8");
  // agreement[p][t] = #points predicted p with true label t
  std::vector<std::vector<Index>> agreement(static_cast<std::size_t>(k), std::vector<Index>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0 || predicted[i] >= k || truth[i] < 0 || truth[i] >= k) {
      throw DataError("label out of range");
    }
    ++agreement[predicted[i]][truth[i]];
  }
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  LabelMatch best{perm, -1.0};
  Index best_hits = -1;
  do {
    Index hits = 0;
    for (int p = 0; p < k; ++p) hits += agreement[p][perm[p]];
    if (hits > best_hits) {
      best_hits = hits;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.accuracy = predicted.empty() ? 1.0
                                    : static_cast<double>(best_hits) / static_cast<double>(predicted.size());
  return best;
}

}  // namespace cmlr
