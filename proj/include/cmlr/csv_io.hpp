#pragma once

#include "cmlr/model.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cmlr {

/// Reads `a_1,...,a_d,b[,label]`. Labels in the file are 1-based.
/// Errors carry the offending line number.
Dataset load_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Dataset& data);

/// One coefficient vector per row under a `beta_1,...,beta_d` header.
Eigen::MatrixXd load_betas(const std::filesystem::path& path);
void write_betas(const std::filesystem::path& path, const Eigen::MatrixXd& betas);

/// `z_1,...,z_d[,label]`, one estimate per row.
void write_estimates(const std::filesystem::path& path, const EstimateField& z,
                     std::span<const int> labels = {});

/// A single `label` column, 1-based.
void write_labels(const std::filesystem::path& path, std::span<const int> labels);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Replaces column `column` (0-based) by alpha * (value - column mean).
Dataset preprocess_center_scale(const Dataset& data, double alpha, Index column);

}  // namespace cmlr
