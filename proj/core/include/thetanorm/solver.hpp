#pragma once

#include "thetanorm/conic.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace thetanorm {

struct SolverSettings {
  int max_iterations = 100000;
  double eps_primal = 1e-6;
  double eps_dual = 1e-6;
  double eps_gap = 1e-6;
  /// Threshold on normalized infeasibility/unboundedness certificates.
  double eps_infeasible = 1e-7;
  /// Over-relaxation parameter in (0, 2).
  double alpha = 1.5;
  /// Weight of the x block in the linear-system metric.
  double rho = 1.0;
  /// Ruiz equilibration passes over the constraint matrix (0 disables).
  int equilibration_passes = 25;
  /// Residuals are evaluated every this many iterations.
  int check_interval = 10;
  /// Anderson acceleration memory (0 disables).
  int acceleration_memory = 10;
  /// Rescale b during the run when primal and dual residuals drift apart.
  bool adaptive_scale = true;

  void validate() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations };

std::string to_string(SolveStatus status);

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

/// Primal/dual pair for a ConicProblem. Slacks and duals are split per cone
/// and PSD parts are returned as symmetric matrices.
struct ConicSolution {
  SolveStatus status = SolveStatus::max_iterations;
  Eigen::VectorXd x;
  Eigen::VectorXd slack_zero, slack_nonnegative;
  std::vector<Eigen::MatrixXd> slack_psd;
  Eigen::VectorXd dual_zero, dual_nonnegative;
  std::vector<Eigen::MatrixXd> dual_psd;
  double objective = 0.0;
  Residuals residuals;
  int iterations = 0;
  double solve_time_ms = 0.0;

  bool is_optimal() const { return status == SolveStatus::optimal; }
};

/// Euclidean projection of a symmetric matrix onto the PSD cone.
/// Throws std::invalid_argument if s is not symmetric within 1e-12 (relative).
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s);

/// Operator-splitting solver on the homogeneous self-dual embedding. One
/// instance owns its factorization and iterates; distinct instances are
/// independent.
class ConicSolver {
 public:
  ConicSolver(const ConicProblem& problem, SolverSettings settings = {});
  ~ConicSolver();
  ConicSolver(ConicSolver&&) noexcept;
  ConicSolver& operator=(ConicSolver&&) noexcept;

  ConicSolution solve();

 private:
  struct Workspace;
  std::unique_ptr<Workspace> work_;
};

ConicSolution solve(const ConicProblem& problem, const SolverSettings& settings = {});

/// Residuals recomputed from the problem's affine expressions, independent of
/// the solver's internal standard form and scaling.
struct KktReport {
  Residuals residuals;
  double slack_cone_violation = 0.0;  ///< most negative slack eigenvalue / entry, as a magnitude
  double dual_cone_violation = 0.0;
  double zero_slack = 0.0;            ///< max |slack| on zero-cone rows

  bool passes(double tol) const;
};

KktReport kkt_check(const ConicProblem& problem, const ConicSolution& solution);

}  // namespace thetanorm
