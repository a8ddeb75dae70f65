#pragma once

#include "thetanorm/experiment.hpp"
#include "thetanorm/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace thetanorm::cli {

enum ExitCode : int { kOk = 0, kComputationFailed = 1, kUsageError = 2 };

/// Options shared by the subcommands, validated before any computation.
struct CliConfig {
  std::string subcommand;
  std::vector<std::string> shapes;  ///< one entry except for gwidth
  std::vector<std::string> norms{"2"};
  int k = 1;
  int rank = 1;
  std::string kind = "signed";
  std::size_t m = 0;
  std::size_t m_min = 1, m_max = 0, m_step = 1;
  std::string mode = "sweep";
  int trials = 1;
  int samples = 50;
  std::uint64_t seed = 0;
  int threads = 0;  ///< 0 means all logical cores
  std::string tensor_path, measurements_path, truth_path;
  std::string polynomial, polynomial_path;
  std::string output_path, svg_path, witness_path;
  bool check_buchberger = false;
  std::optional<int> max_iterations;
  std::optional<double> eps;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
  SolverSettings solver_settings() const;
  int thread_count() const;
};

/// Runs the command line; never throws. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thetanorm::cli
