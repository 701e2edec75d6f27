#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace cmlr {

using Index = Eigen::Index;

/// Measurements (a_i, b_i) with optional class labels.
///
/// Row i of `features()` is a_i. Labels are 0-based internally; the CSV layer
/// converts from the 1-based convention used in files. Construction validates
/// everything, so a Dataset that exists is well-formed.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, Eigen::VectorXd responses,
          std::vector<int> labels = {});

  Index size() const noexcept { return features_.rows(); }
  Index dim() const noexcept { return features_.cols(); }

  const Eigen::MatrixXd& features() const noexcept { return features_; }
  const Eigen::VectorXd& responses() const noexcept { return responses_; }
  Eigen::VectorXd feature(Index i) const { return features_.row(i).transpose(); }
  double response(Index i) const { return responses_(i); }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  /// Number of classes implied by the labels (0 when unlabeled).
  int num_classes() const noexcept { return num_classes_; }
  /// Indices of the rows labelled `p`, in row order.
  std::vector<Index> members(int p) const;
  std::vector<Index> class_sizes() const;

  Dataset with_labels(std::vector<int> labels) const;
  Dataset without_labels() const;

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd responses_;
  std::vector<int> labels_;
  int num_classes_ = 0;
};

/// k pairwise-distinct coefficient vectors (rows of `betas()`) and class sizes.
class MixtureModel {
 public:
  MixtureModel(Eigen::MatrixXd betas, std::vector<Index> sizes);

  int num_classes() const noexcept { return static_cast<int>(betas_.rows()); }
  Index dim() const noexcept { return betas_.cols(); }
  const Eigen::MatrixXd& betas() const noexcept { return betas_; }
  Eigen::VectorXd beta(int p) const { return betas_.row(p).transpose(); }
  const std::vector<Index>& sizes() const noexcept { return sizes_; }
  Index size(int p) const { return sizes_[static_cast<std::size_t>(p)]; }
  Index total() const noexcept;

 private:
  Eigen::MatrixXd betas_;
  std::vector<Index> sizes_;
};

/// One estimate z_i per measurement, stored as the rows of an m x d matrix.
class EstimateField {
 public:
  EstimateField() = default;
  explicit EstimateField(Eigen::MatrixXd z) : z_(std::move(z)) {}

  Index size() const noexcept { return z_.rows(); }
  Index dim() const noexcept { return z_.cols(); }
  const Eigen::MatrixXd& values() const noexcept { return z_; }
  Eigen::VectorXd row(Index i) const { return z_.row(i).transpose(); }

 private:
  Eigen::MatrixXd z_;
};

/// Throws DataError unless `data` is labelled and agrees with `model` on
/// dimension, number of classes and per-class counts.
void require_consistent(const Dataset& data, const MixtureModel& model);

/// z_i = beta_{label(i)}.
EstimateField candidate_solution(const Dataset& data, const MixtureModel& model);

/// Sum over ordered pairs (i, j) of ||z_i - z_j||, i.e. twice the sum over i < j.
double objective(const EstimateField& z);

/// max_i |a_i^T z_i - b_i|.
double feasibility_residual(const EstimateField& z, const Dataset& data);

/// (1/sqrt(m)) ||Z_a - Z_b||_F.
double recovery_error(const EstimateField& za, const EstimateField& zb);

}  // namespace cmlr
