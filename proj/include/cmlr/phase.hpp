#pragma once

#include "cmlr/irls.hpp"
#include "cmlr/synthetic.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cmlr {

enum class PhaseMode { aperture, imbalance };

const char* to_string(PhaseMode mode);
PhaseMode parse_phase_mode(const std::string& text);

struct PhaseConfig {
  PhaseMode mode = PhaseMode::aperture;
  std::vector<Index> dims;
  /// aperture values (aperture mode) or imbalance radii (imbalance mode)
  std::vector<double> sweep;
  int trials = 10;
  double success_tol = 1e-5;
  std::uint64_t base_seed = 0;
  SolverOptions solver;
  /// OpenMP threads for the sweep; 0 uses the runtime default
  int workers = 0;
  /// allow sweep values outside [0, 0.75] / [0, 0.062]
  bool unsafe = false;

  /// d = 3..15 and 16 evenly spaced values over the mode's range.
  static PhaseConfig defaults(PhaseMode mode);
  void validate() const;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double recovery_error = 0.0;
  int iterations = 0;
  bool converged = false;
  bool success = false;
  /// the solve threw; counted as unsuccessful
  bool failed = false;
  bool certified = false;
  /// largest step-to-step increase of the smoothed objective
  double max_objective_increase = 0.0;
  std::string error;
};

struct PhaseGrid {
  PhaseMode mode = PhaseMode::aperture;
  std::vector<Index> dims;
  std::vector<double> sweep;
  int trials = 0;
  /// dims.size() x sweep.size(), successes / trials
  Eigen::MatrixXd fractions;
  /// cell-major: ((dim index * sweep count) + sweep index) * trials + trial
  std::vector<TrialRecord> records;

  const TrialRecord& record(std::size_t dim_index, std::size_t sweep_index, int trial) const;
};

/// Seed of one trial, a pure function of its grid coordinates.
std::uint64_t trial_seed(std::uint64_t base_seed, Index d, std::size_t sweep_index, int trial);

/// Instance used for one cell: Sim1 with k = 3, 16 per class (m = 48) in
/// aperture mode; Sim2 with 4 d per class and aperture 0.2 in imbalance mode.
SyntheticInstance phase_instance(PhaseMode mode, Index d, double value, std::uint64_t seed);

/// Solves one instance and scores it against the candidate solution.
TrialRecord run_trial(const SyntheticInstance& instance, const SolverOptions& solver,
                      double success_tol);

/// Runs every (d, value, trial) concurrently; failures never abort the sweep.
PhaseGrid run_phase(const PhaseConfig& cfg);

/// `d,<value_1>,...` header, one row of fractions per dimension.
void write_phase_csv(const std::filesystem::path& path, const PhaseGrid& grid);
/// One row per trial with its seed, error, iteration count and flags.
void write_trials_csv(const std::filesystem::path& path, const PhaseGrid& grid);
/// Plain P2 image, one pixel per cell: columns are dimensions (ascending),
/// rows are sweep values with the largest at the top; value round(255 * fraction).
void write_phase_pgm(const std::filesystem::path& path, const PhaseGrid& grid);

}  // namespace cmlr
