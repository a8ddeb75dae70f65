#pragma once

#include "thetanorm/groebner.hpp"
#include "thetanorm/solver.hpp"
#include "thetanorm/table.hpp"
#include "thetanorm/tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace thetanorm {

enum class ExperimentMode {
  sweep,   ///< every m in [m_min, m_max] with step m_step
  search,  ///< per trial, the minimal successful m by doubling then bisection
};

struct ExperimentConfig {
  Shape shape;
  int rank = 1;
  TensorKind kind = TensorKind::signed_entries;
  std::vector<PNorm> norms;
  int k = 1;
  ExperimentMode mode = ExperimentMode::sweep;
  std::size_t m_min = 1;
  std::size_t m_max = 0;  ///< 0 means N
  std::size_t m_step = 1;
  int trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  SolverSettings solver;

  std::size_t effective_m_max() const { return m_max == 0 ? shape.size() : m_max; }
  /// Throws std::invalid_argument on empty norms or invalid ranges.
  void validate() const;
};

struct ExperimentRow {
  int trial = 0;
  PNorm p = PNorm::finite(2);
  int k = 1;
  Shape shape;
  int rank = 1;
  TensorKind kind = TensorKind::signed_entries;
  std::size_t m = 0;
  bool success = false;
  double rel_error = 0.0;
  double norm_value = 0.0;
  int iterations = 0;
  double time_ms = 0.0;
  SolveStatus status = SolveStatus::optimal;
  /// Independent KKT residuals of optimal solves; not part of the CSV.
  std::optional<KktReport> kkt;
};

struct MinimalMeasurements {
  int trial = 0;
  PNorm p = PNorm::finite(2);
  /// Smallest probed m that succeeded; empty if even m_max failed.
  std::optional<std::size_t> m;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<MinimalMeasurements> minimal;  ///< search mode only
};

/// Ground truth and measurement ensemble of a trial are drawn from seeds
/// derived from (seed, trial), and are shared by all norms of that trial.
/// Smaller m use a prefix of the same ensemble.
ExperimentResult run_recovery_experiment(const ExperimentConfig& cfg);

/// Columns trial,p,k,shape,rank,kind,m,success,rel_error,norm_value,iters,time_ms.
Table experiment_table(const ExperimentResult& result);

/// Ground truth of a trial, as drawn by run_recovery_experiment.
Tensor experiment_truth(const ExperimentConfig& cfg, int trial);

}  // namespace thetanorm
