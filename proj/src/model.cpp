#include "cmlr/model.hpp"

#include "cmlr/error.hpp"
#include "cmlr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmlr {

Dataset::Dataset(Eigen::MatrixXd features, Eigen::VectorXd responses,
                 std::vector<int> labels)
    : features_(std::move(features)),
      responses_(std::move(responses)),
      labels_(std::move(labels)) {
  if (features_.cols() < 1) throw DataError("dataset dimension must be at least 1");
  if (features_.rows() < 1) throw DataError("dataset has no rows");
  if (responses_.size() != features_.rows()) {
    throw DataError("dataset has " + std::to_string(features_.rows()) + " feature rows but " +
                    std::to_string(responses_.size()) + " responses");
  }
  for (Index i = 0; i < features_.rows(); ++i) {
    if (!features_.row(i).allFinite() || !std::isfinite(responses_(i))) {
      throw DataError("row " + std::to_string(i) + " contains a non-finite value");
    }
    if ((features_.row(i).array() == 0.0).all()) {
      throw DataError("row " + std::to_string(i) + " has an all-zero feature vector");
    }
  }
  if (labels_.empty()) return;
  if (static_cast<Index>(labels_.size()) != features_.rows()) {
    throw DataError("label count does not match the number of rows");
  }
  const int max_label = *std::max_element(labels_.begin(), labels_.end());
  if (*std::min_element(labels_.begin(), labels_.end()) < 0) {
    throw DataError("labels must be non-negative");
  }
  num_classes_ = max_label + 1;
  std::vector<bool> seen(static_cast<std::size_t>(num_classes_), false);
  for (int l : labels_) seen[static_cast<std::size_t>(l)] = true;
  for (int p = 0; p < num_classes_; ++p) {
    if (!seen[static_cast<std::size_t>(p)]) {
      // reported 1-based, matching the file format
      throw DataError("class " + std::to_string(p + 1) + " has no members");
    }
  }
}

std::vector<Index> Dataset::members(int p) const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i) {
    if (labels_[static_cast<std::size_t>(i)] == p) out.push_back(i);
  }
  return out;
}

std::vector<Index> Dataset::class_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(num_classes_), 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

Dataset Dataset::with_labels(std::vector<int> labels) const {
  return Dataset(features_, responses_, std::move(labels));
}

Dataset Dataset::without_labels() const { return Dataset(features_, responses_); }

MixtureModel::MixtureModel(Eigen::MatrixXd betas, std::vector<Index> sizes)
    : betas_(std::move(betas)), sizes_(std::move(sizes)) {
  if (betas_.rows() < 1 || betas_.cols() < 1) throw ModelError("mixture model is empty");
  if (static_cast<Index>(sizes_.size()) != betas_.rows()) {
    throw ModelError("mixture model needs one size per coefficient vector");
  }
  if (!betas_.allFinite()) throw ModelError("coefficient vectors must be finite");
  for (Index s : sizes_) {
    if (s < 1) throw ModelError("every class size must be at least 1");
  }
  for (Index p = 0; p < betas_.rows(); ++p) {
    for (Index q = p + 1; q < betas_.rows(); ++q) {
      if (betas_.row(p) == betas_.row(q)) {
        throw ModelError("coefficient vectors " + std::to_string(p + 1) + " and " +
                         std::to_string(q + 1) + " are equal");
      }
    }
  }
}

Index MixtureModel::total() const noexcept {
  Index n = 0;
  for (Index s : sizes_) n += s;
  return n;
}

void require_consistent(const Dataset& data, const MixtureModel& model) {
  if (!data.has_labels()) throw DataError("labels are required");
  if (data.dim() != model.dim()) throw DataError("dataset and model dimensions differ");
  if (data.num_classes() != model.num_classes()) {
    throw DataError("dataset labels use " + std::to_string(data.num_classes()) +
                    " classes but the model has " + std::to_string(model.num_classes()));
  }
  if (data.class_sizes() != model.sizes()) {
    throw DataError("model class sizes do not match the label counts");
  }
}

EstimateField candidate_solution(const Dataset& data, const MixtureModel& model) {
  if (!data.has_labels()) throw DataError("candidate solution needs labels");
  if (data.dim() != model.dim()) throw DataError("dataset and model dimensions differ");
  Eigen::MatrixXd z(data.size(), data.dim());
  for (Index i = 0; i < data.size(); ++i) {
    const int l = data.labels()[static_cast<std::size_t>(i)];
    if (l >= model.num_classes()) {
      throw DataError("label " + std::to_string(l + 1) + " exceeds the model's class count");
    }
    z.row(i) = model.betas().row(l);
  }
  return EstimateField(std::move(z));
}

double objective(const EstimateField& z) {
  return kernels::pairwise_distance_sum(z.values().transpose());
}

double feasibility_residual(const EstimateField& z, const Dataset& data) {
  if (z.size() != data.size() || z.dim() != data.dim()) {
    throw DataError("estimate field shape does not match the dataset");
  }
  if (z.size() == 0) return 0.0;
  const Eigen::VectorXd fitted = (z.values().array() * data.features().array()).rowwise().sum();
  return (fitted - data.responses()).cwiseAbs().maxCoeff();
}

double recovery_error(const EstimateField& za, const EstimateField& zb) {
  if (za.size() != zb.size() || za.dim() != zb.dim()) {
    throw DataError("estimate fields have different shapes");
  }
  if (za.size() == 0) return 0.0;
  return (za.values() - zb.values()).norm() / std::sqrt(static_cast<double>(za.size()));
}

}  // namespace cmlr
