#pragma once

#include "cmlr/certificate.hpp"
#include "cmlr/cluster.hpp"
#include "cmlr/geometry.hpp"
#include "cmlr/irls.hpp"
#include "cmlr/model.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace cmlr {

/// Centering and scaling applied to one feature column before solving.
struct Preprocess {
  Index column = 0;  // 0-based
  double alpha = 1.0;
};

struct FitOptions {
  SolverOptions solver;
  int restarts = kDefaultRestarts;
  std::uint64_t seed = 0;
  std::optional<Preprocess> preprocess;
};

struct FitReport {
  Dataset processed;
  EstimateField estimates;
  SolveTrace trace;
  ClusteringResult clustering;
  RefitResult refit;
  /// present when the input carried ground-truth labels
  std::optional<LabelMatch> match;
  double seconds = 0.0;
};

/// Solve, cluster the per-point estimates with k-means, then regress each class.
FitReport fit_mixture(const Dataset& data, int k, const FitOptions& opts = {});

struct CertifyReport {
  ConditionReport conditions;
  /// absent when the certificate is undefined (a row orthogonal to its direction)
  std::optional<CertificateVerdict> verdict;
  Index orthogonal_point = -1;
  std::string error;
};

/// Condition check plus certificate construction and verification.
CertifyReport certify_instance(const Dataset& data, const MixtureModel& model,
                               double tol = kCertificateTolerance);

/// Largest increase between consecutive entries of the smoothed objective
/// history (<= 0 for a monotone run).
double max_objective_increase(const SolveTrace& trace);

}  // namespace cmlr
