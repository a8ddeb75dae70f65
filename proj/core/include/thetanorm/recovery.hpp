#pragma once

#include "thetanorm/groebner.hpp"
#include "thetanorm/moment.hpp"
#include "thetanorm/solver.hpp"
#include "thetanorm/tensor.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thetanorm {

/// Raised when a solve that must be optimal is not.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, ConicSolution solution)
      : std::runtime_error(what), solution_(std::move(solution)) {}
  const ConicSolution& solution() const { return solution_; }

 private:
  ConicSolution solution_;
};

struct MeasurementEnsemble {
  Shape shape;
  std::vector<LinearMeasurement> measurements;
  std::uint64_t seed = 0;

  std::size_t size() const { return measurements.size(); }
  /// The first m measurements.
  std::span<const LinearMeasurement> first(std::size_t m) const;
};

/// m measurement tensors with i.i.d. standard normal entries and b_i = <A_i, truth>.
MeasurementEnsemble gaussian_ensemble(const Tensor& truth, std::size_t m, std::uint64_t seed);

/// {"shape": [...], "measurements": [{"a": [...], "b": ...}, ...]}
MeasurementEnsemble parse_measurements(const std::string& text);
std::string format_measurements(const MeasurementEnsemble& e);

/// Theta-k layout for the nuclear p-norm ideal. Throws UnsupportedNorm for odd
/// p >= 3 and std::invalid_argument when 2k < p or k < 1.
MomentLayout norm_layout(const Shape& shape, PNorm p, int k);

struct NormResult {
  double value = 0.0;
  ConicSolution solution;
};

NormResult evaluate_theta_norm(const MomentLayout& layout, const Tensor& x,
                               const SolverSettings& settings = {});

/// Throws SolverFailure unless the solve is optimal.
double theta_norm(const Tensor& x, PNorm p, int k, const SolverSettings& settings = {});

/// Success threshold on the relative Frobenius error.
inline constexpr double kRecoveryTolerance = 1e-3;

struct RecoveryResult {
  Tensor recovered;
  double norm_value = 0.0;
  std::optional<double> rel_error;
  bool success = false;
  ConicSolution solution;
};

/// Minimizes the theta-norm subject to the measurements. A non-optimal solve
/// is reported through solution.status and never counts as a success.
RecoveryResult recover(const MomentLayout& layout, std::span<const LinearMeasurement> measurements,
                       const SolverSettings& settings = {}, const Tensor* truth = nullptr);
RecoveryResult recover(const MeasurementEnsemble& ensemble, PNorm p, int k,
                       const SolverSettings& settings = {}, const Tensor* truth = nullptr);

/// ||a - b||_F / ||b||_F (absolute error when b = 0).
double relative_error(const Tensor& a, const Tensor& b);

enum class SosVerdict { feasible, infeasible, undecided };
std::string to_string(SosVerdict v);

struct SosCertificate {
  SosVerdict verdict = SosVerdict::undecided;
  MonomialBasis basis;
  /// PSD Gram matrix over basis when feasible.
  Eigen::MatrixXd gram;
  /// Max coefficient mismatch of the reduced Gram form against the target.
  double coefficient_error = 0.0;
  ConicSolution solution;
};

/// Maximum coefficient mismatch accepted for a Gram witness.
inline constexpr double kWitnessTolerance = 1e-6;

SosCertificate certify_sos(const SosSystem& system, const SolverSettings& settings = {});
/// Is f k-sos modulo the ideal of the nuclear p-norm ball on `shape`?
SosCertificate certify_sos(const Polynomial& f, const Shape& shape, PNorm p, int k,
                           const SolverSettings& settings = {});

}  // namespace thetanorm
