#include "cmlr/phase.hpp"

#include "cmlr/certificate.hpp"
#include "cmlr/csv_io.hpp"
#include "cmlr/error.hpp"
#include "cmlr/pipeline.hpp"

#include <omp.h>

#include <cmath>
#include <fstream>

namespace cmlr {

const char* to_string(PhaseMode mode) {
  return mode == PhaseMode::aperture ? "aperture" : "imbalance";
}

PhaseMode parse_phase_mode(const std::string& text) {
  if (text == "aperture") return PhaseMode::aperture;
  if (text == "imbalance") return PhaseMode::imbalance;
  throw DataError("unknown phase mode '" + text + "'");
}

namespace {

constexpr double kMaxAperture = 0.75;
constexpr double kMaxImbalance = 0.062;
constexpr Index kApertureClassSize = 16;
constexpr double kImbalanceAperture = 0.2;

}  // namespace

PhaseConfig PhaseConfig::defaults(PhaseMode mode) {
  PhaseConfig cfg;
  cfg.mode = mode;
  for (Index d = 3; d <= 15; ++d) cfg.dims.push_back(d);
  const double top = mode == PhaseMode::aperture ? kMaxAperture : kMaxImbalance;
  for (int s = 0; s < 16; ++s) cfg.sweep.push_back(top * s / 15.0);
  return cfg;
}

void PhaseConfig::validate() const {
  if (dims.empty() || sweep.empty()) throw DataError("phase grid needs dimensions and sweep values");
  if (trials < 1) throw DataError("trials must be at least 1");
  if (!(success_tol > 0.0)) throw DataError("success tolerance must be positive");
  if (workers < 0) throw DataError("workers must be non-negative");
  solver.validate();
  for (Index d : dims) {
    // both ensembles use k = 3 unit coefficient vectors
    if (d < 3) throw DataError("phase dimensions must be at least 3");
  }
  const double top = mode == PhaseMode::aperture ? kMaxAperture : kMaxImbalance;
  for (double v : sweep) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("sweep values must be non-negative");
    if (!unsafe && v > top) {
      throw DataError(std::string(to_string(mode)) + " values must lie in [0, " + format_double(top) +
                      "] (use --unsafe to override)");
    }
  }
}

const TrialRecord& PhaseGrid::record(std::size_t dim_index, std::size_t sweep_index, int trial) const {
  return records[(dim_index * sweep.size() + sweep_index) * static_cast<std::size_t>(trials) +
                 static_cast<std::size_t>(trial)];
}

std::uint64_t trial_seed(std::uint64_t base_seed, Index d, std::size_t sweep_index, int trial) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(sweep_index),
                                 static_cast<std::uint64_t>(trial)});
}

SyntheticInstance phase_instance(PhaseMode mode, Index d, double value, std::uint64_t seed) {
  if (mode == PhaseMode::aperture) {
    return gen_sim1(Sim1Config{3, d, kApertureClassSize, value, seed});
  }
  return gen_sim2(Sim2Config{d, 0, kImbalanceAperture, value, seed});
}

TrialRecord run_trial(const SyntheticInstance& instance, const SolverOptions& solver, double success_tol) {
  TrialRecord rec;
  try {
    const SolveResult solved = irls_solve(instance.data, solver);
    rec.recovery_error = recovery_error(solved.estimates, candidate_solution(instance.data, instance.model));
    rec.iterations = solved.trace.iterations;
    rec.converged = solved.trace.converged;
    rec.max_objective_increase = max_objective_increase(solved.trace);
    rec.success = rec.recovery_error < success_tol;
  } catch (const Error& e) {
    rec.failed = true;
    rec.success = false;
    rec.error = e.what();
  }
  try {
    rec.certified = verify_certificate(build_certificate(instance.data, instance.model), instance.data,
                                       instance.model)
                        .certifies;
  } catch (const Error&) {
    rec.certified = false;
  }
  return rec;
}

PhaseGrid run_phase(const PhaseConfig& cfg) {
  cfg.validate();
  PhaseGrid grid;
  grid.mode = cfg.mode;
  grid.dims = cfg.dims;
  grid.sweep = cfg.sweep;
  grid.trials = cfg.trials;
  const std::size_t cells = cfg.dims.size() * cfg.sweep.size();
  const long total = static_cast<long>(cells) * cfg.trials;
  grid.records.resize(static_cast<std::size_t>(total));

  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long job = 0; job < total; ++job) {
    const std::size_t cell = static_cast<std::size_t>(job / cfg.trials);
    const int trial = static_cast<int>(job % cfg.trials);
    const std::size_t di = cell / cfg.sweep.size();
    const std::size_t si = cell % cfg.sweep.size();
    const Index d = cfg.dims[di];
    const std::uint64_t seed = trial_seed(cfg.base_seed, d, si, trial);
    TrialRecord rec;
    try {
      rec = run_trial(phase_instance(cfg.mode, d, cfg.sweep[si], seed), cfg.solver, cfg.success_tol);
    } catch (const Error& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    rec.seed = seed;
    grid.records[static_cast<std::size_t>(job)] = std::move(rec);
  }

  grid.fractions.setZero(static_cast<Index>(cfg.dims.size()), static_cast<Index>(cfg.sweep.size()));
  for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
    for (std::size_t si = 0; si < cfg.sweep.size(); ++si) {
      int successes = 0;
      for (int t = 0; t < cfg.trials; ++t) successes += grid.record(di, si, t).success ? 1 : 0;
      grid.fractions(static_cast<Index>(di), static_cast<Index>(si)) =
          static_cast<double>(successes) / static_cast<double>(cfg.trials);
    }
  }
  return grid;
}

void write_phase_csv(const std::filesystem::path& path, const PhaseGrid& grid) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << 'd';
  for (double v : grid.sweep) out << ',' << format_double(v);
  out << '\n';
  for (std::size_t di = 0; di < grid.dims.size(); ++di) {
    out << grid.dims[di];
    for (std::size_t si = 0; si < grid.sweep.size(); ++si) {
      out << ',' << format_double(grid.fractions(static_cast<Index>(di), static_cast<Index>(si)));
    }
    out << '\n';
  }
}

void write_trials_csv(const std::filesystem::path& path, const PhaseGrid& grid) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "d,value,trial,seed,recovery_error,iterations,converged,success,certified,failed\n";
  for (std::size_t di = 0; di < grid.dims.size(); ++di) {
    for (std::size_t si = 0; si < grid.sweep.size(); ++si) {
      for (int t = 0; t < grid.trials; ++t) {
        const TrialRecord& r = grid.record(di, si, t);
        out << grid.dims[di] << ',' << format_double(grid.sweep[si]) << ',' << t << ',' << r.seed << ','
            << format_double(r.recovery_error) << ',' << r.iterations << ',' << r.converged << ','
            << r.success << ',' << r.certified << ',' << r.failed << '\n';
      }
    }
  }
}

void write_phase_pgm(const std::filesystem::path& path, const PhaseGrid& grid) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  const Index width = static_cast<Index>(grid.dims.size());
  const Index height = static_cast<Index>(grid.sweep.size());
  out << "P2\n" << width << ' ' << height << "\n255\n";
  for (Index row = 0; row < height; ++row) {
    const Index si = height - 1 - row;
    for (Index di = 0; di < width; ++di) {
      out << (di ? " " : "") << static_cast<int>(std::lround(255.0 * grid.fractions(di, si)));
    }
    out << '\n';
  }
}

}  // namespace cmlr
