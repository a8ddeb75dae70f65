#include "thetanorm/experiment.hpp"

#include "thetanorm/parallel.hpp"
#include "thetanorm/random.hpp"
#include "thetanorm/recovery.hpp"

#include <stdexcept>

namespace thetanorm {

namespace {
constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kEnsembleStream = 2;
}  // namespace

void ExperimentConfig::validate() const {
  if (norms.empty()) throw std::invalid_argument("experiment needs at least one p");
  for (const auto& p : norms)
    if (!p.is_supported()) throw UnsupportedNorm("p = " + p.to_string() + " is not supported");
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (trials < 0) throw std::invalid_argument("trials must be nonnegative");
  if (m_min < 1) throw std::invalid_argument("m_min must be at least 1");
  if (m_step < 1) throw std::invalid_argument("m_step must be at least 1");
  if (effective_m_max() < m_min) throw std::invalid_argument("m_max is below m_min");
  solver.validate();
}

Tensor experiment_truth(const ExperimentConfig& cfg, int trial) {
  return random_low_rank(cfg.shape, cfg.rank, cfg.kind,
                         derive_seed(cfg.seed, kTruthStream, static_cast<std::uint64_t>(trial)));
}

ExperimentResult run_recovery_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  if (cfg.trials == 0) return result;

  std::vector<MomentLayout> layouts;
  for (const auto& p : cfg.norms) layouts.push_back(norm_layout(cfg.shape, p, cfg.k));

  const std::size_t m_max = cfg.effective_m_max();
  const std::size_t norm_count = cfg.norms.size();
  const std::size_t tasks = static_cast<std::size_t>(cfg.trials) * norm_count;
  std::vector<std::vector<ExperimentRow>> task_rows(tasks);
  std::vector<MinimalMeasurements> task_minimal(tasks);

  parallel_for(tasks, cfg.threads, [&](std::size_t task) {
    const int trial = static_cast<int>(task / norm_count);
    const std::size_t which = task % norm_count;
    const PNorm p = cfg.norms[which];
    const Tensor truth = experiment_truth(cfg, trial);
    const MeasurementEnsemble ensemble = gaussian_ensemble(
        truth, m_max, derive_seed(cfg.seed, kEnsembleStream, static_cast<std::uint64_t>(trial)));

    auto probe = [&](std::size_t m) {
      RecoveryResult r = recover(layouts[which], ensemble.first(m), cfg.solver, &truth);
      ExperimentRow row;
      row.trial = trial;
      row.p = p;
      row.k = cfg.k;
      row.shape = cfg.shape;
      row.rank = cfg.rank;
      row.kind = cfg.kind;
      row.m = m;
      row.success = r.success;
      row.rel_error = *r.rel_error;
      row.norm_value = r.norm_value;
      row.iterations = r.solution.iterations;
      row.time_ms = r.solution.solve_time_ms;
      row.status = r.solution.status;
      if (r.solution.is_optimal())
        row.kkt = kkt_check(assemble_recovery_sdp(layouts[which], ensemble.first(m)), r.solution);
      task_rows[task].push_back(row);
      return r.success;
    };

    if (cfg.mode == ExperimentMode::sweep) {
      for (std::size_t m = cfg.m_min; m <= m_max; m += cfg.m_step) probe(m);
      return;
    }
    // doubling bracket: lo is the largest failing probe, hi the first success
    std::size_t lo = cfg.m_min - 1, hi = 0;
    for (std::size_t m = cfg.m_min;; m = std::min(2 * m, m_max)) {
      if (probe(m)) {
        hi = m;
        break;
      }
      lo = m;
      if (m == m_max) break;
    }
    MinimalMeasurements& out = task_minimal[task];
    out.trial = trial;
    out.p = p;
    if (hi == 0) return;
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (probe(mid))
        hi = mid;
      else
        lo = mid;
    }
    out.m = hi;
  });

  for (std::size_t t = 0; t < tasks; ++t) {
    for (auto& row : task_rows[t]) result.rows.push_back(std::move(row));
    if (cfg.mode == ExperimentMode::search) result.minimal.push_back(task_minimal[t]);
  }
  return result;
}

Table experiment_table(const ExperimentResult& result) {
  Table t;
  t.header = {"trial", "p", "k", "shape", "rank", "kind", "m", "success", "rel_error", "norm_value", "iters", "time_ms"};
  for (const auto& r : result.rows)
    t.add_row({std::to_string(r.trial), r.p.to_string(), std::to_string(r.k), r.shape.to_string(),
               std::to_string(r.rank), to_string(r.kind), std::to_string(r.m), r.success ? "1" : "0",
               format_number(r.rel_error), format_number(r.norm_value), std::to_string(r.iterations),
               format_number(r.time_ms)});
  return t;
}

}  // namespace thetanorm
