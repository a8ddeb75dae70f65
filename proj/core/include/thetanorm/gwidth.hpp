#pragma once

#include "thetanorm/groebner.hpp"
#include "thetanorm/moment.hpp"
#include "thetanorm/recovery.hpp"
#include "thetanorm/solver.hpp"
#include "thetanorm/table.hpp"
#include "thetanorm/tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace thetanorm {

/// Partition of [n] around the anchor a0 = (1, ..., 1): I0 holds the indices
/// differing from a0 in exactly one coordinate, I the remaining ones.
struct ConeIndexSets {
  MultiIndex anchor;
  std::vector<MultiIndex> zero_set;  ///< I0
  std::vector<MultiIndex> rest;      ///< I
};

ConeIndexSets index_sets(const Shape& shape);

struct GaugeResult {
  double value = 0.0;
  /// Gram matrix over B_1 of r + r x_a0 + <g_I, x_I>, read from the dual.
  Eigen::MatrixXd gram;
  ConicSolution solution;

  bool decided() const { return solution.is_optimal(); }
};

/// Gauge of the normal-cone slice N_I at a0 for the theta-1 body of I_2: the
/// least r >= 0 with r + r x_a0 + <g_I, x_I> 1-sos modulo I_2. Holds the
/// Groebner basis and moment layout so repeated evaluations only solve.
///
/// evaluate() solves the Gram program through its conic dual,
///   minimize <g_I, y_I>  s.t.  W M(y) W^T PSD,  y_1 + y_a0 <= 1,
/// whose optimal value is -r. Every feasible Gram matrix Q satisfies
/// Q (e_1 - e_a0) = 0 because the form vanishes at -e_a0; W spans the
/// complement of that vector, and the Gram matrix is W^T Q' W for the PSD
/// multiplier Q'.
class NormalConeGauge {
 public:
  explicit NormalConeGauge(const Shape& shape, SolverSettings settings = {});

  const Shape& shape() const { return shape_; }
  const ConeIndexSets& sets() const { return sets_; }
  const GroebnerBasis& groebner() const { return groebner_; }
  const MomentLayout& layout() const { return layout_; }
  /// Position of x_a0 in the moment basis.
  std::size_t anchor_position() const;

  GaugeResult evaluate(const Eigen::VectorXd& g_i) const;
  /// The moment-side program solved by evaluate().
  ConicProblem moment_problem(const Eigen::VectorXd& g_i) const;
  /// The SOS system of r + r x_a0 + <g_I, x_I> with r as a parameter.
  SosSystem system(const Eigen::VectorXd& g_i) const;
  /// r + r x_a0 + <g_I, x_I> at a fixed r.
  Polynomial polynomial(const Eigen::VectorXd& g_i, double r) const;

 private:
  Shape shape_;
  SolverSettings settings_;
  ConeIndexSets sets_;
  GroebnerBasis groebner_;
  MomentLayout layout_;
};

double gauge_NI(const Eigen::VectorXd& g_i, const Shape& shape, const SolverSettings& settings = {});

struct WidthSample {
  std::size_t index = 0;
  double gamma_sq = 0.0;
  double bound = 0.0;
  SolveStatus status = SolveStatus::optimal;
  std::optional<KktReport> kkt;  ///< independent check, optimal solves only
};

struct WidthEstimate {
  Shape shape;
  std::size_t zero_set_size = 0;
  std::vector<WidthSample> samples;
  double mean_gamma_sq = 0.0;
  double stderr_gamma_sq = 0.0;  ///< standard error of the mean
  double bound_mean = 0.0;       ///< |I0| + 1 + mean gamma^2
  std::size_t undecided = 0;     ///< samples whose solve was not optimal
};

/// Monte-Carlo estimate of E[|I0| + 1 + gauge(g_I)^2] with g_I standard normal.
/// Sample i draws from a seed derived from (seed, i).
WidthEstimate estimate_width_bound(const Shape& shape, int samples, std::uint64_t seed,
                                   const SolverSettings& settings = {}, int threads = 1);

/// Columns shape,sample,gamma_sq,bound; one row per sample, then a summary
/// row per estimate with sample "mean" (gamma_sq = mean, bound = bound mean)
/// and one with sample "stderr".
Table width_table(const std::vector<WidthEstimate>& estimates);

}  // namespace thetanorm
