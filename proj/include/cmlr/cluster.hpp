#pragma once

#include "cmlr/model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace cmlr {

struct ClusteringResult {
  /// k x d
  Eigen::MatrixXd centers;
  /// 0-based cluster of each point
  std::vector<int> labels;
  /// sum of squared distances to the assigned centers
  double inertia = 0.0;
  int iterations = 0;
  /// restart that produced this result
  int restart = 0;
  /// inertia after every Lloyd update of the winning restart
  std::vector<double> inertia_history;
};

inline constexpr int kDefaultRestarts = 20;
inline constexpr int kLloydIterations = 300;

/// Lloyd's algorithm from k-means++ seeds, best of `restarts` runs by inertia.
///
/// Restart r draws from its own stream derive_seed(seed, {r}) and restarts run
/// concurrently; the winner is the lowest inertia, then the lowest restart
/// index, so the result depends only on the arguments. Nearest-center ties go
/// to the lowest center index; an empty cluster takes the point farthest from
/// its current center.
ClusteringResult kmeans(const Eigen::MatrixXd& points, int k, int restarts = kDefaultRestarts,
                        std::uint64_t seed = 0);

struct RefitResult {
  /// k x d, row p is the least-squares fit of class p
  Eigen::MatrixXd betas;
  /// max |a_i^T beta_p - b_i| over members of class p
  Eigen::VectorXd per_class_residual;
  /// classes whose rows do not span R^d (minimum-norm fit returned)
  std::vector<bool> underdetermined;
};

/// Separate least-squares regression per class. `labels` are 0-based.
RefitResult refit_regression(const Dataset& data, std::span<const int> labels, int k);

struct LabelMatch {
  /// permutation[predicted label] = matched true label
  std::vector<int> permutation;
  double accuracy = 0.0;
};

/// Best relabelling of `predicted` against `truth` over all permutations of
/// k labels. Refuses k > 8.
LabelMatch match_labels(std::span<const int> predicted, std::span<const int> truth, int k);

}  // namespace cmlr
