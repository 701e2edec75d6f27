#pragma once

#include "cmlr/model.hpp"
#include "cmlr/rng.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace cmlr {

/// Uniform sample from the Euclidean ball of `radius` in R^dim
/// (Gaussian direction times radius * U^(1/dim)). dim = 0 gives an empty vector.
Eigen::VectorXd sample_ball(Index dim, double radius, SplitMix64& rng);

/// Uniform sample from the sphere of `radius` in R^dim; requires dim >= 1.
Eigen::VectorXd sample_sphere(Index dim, double radius, SplitMix64& rng);

/// beta_p = e_p in R^d for p = 1..k.
Eigen::MatrixXd unit_betas(int k, Index d);

/// Balanced ensemble: for each class, half the rows are vhat_p + Q_p x and the
/// other half vhat_p - Q_p x with x uniform in the (d-1)-ball of radius alpha.
struct Sim1Config {
  int k = 3;
  Index d = 5;
  Index per_class = 16;
  double alpha = 0.1;
  std::uint64_t seed = 0;
};

/// k = 3; classes 1 and 2 as in Sim1, class 3 additionally shifted by Q_3 w
/// with one w drawn from the (d-1)-sphere of radius tau.
struct Sim2Config {
  Index d = 5;
  /// 0 selects 4 d
  Index per_class = 0;
  double alpha = 0.2;
  double tau = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticInstance {
  Dataset data;
  MixtureModel model;
};

SyntheticInstance gen_sim1(const Sim1Config& cfg);
SyntheticInstance gen_sim2(const Sim2Config& cfg);

}  // namespace cmlr
