#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace thetanorm {

struct LinearTerm {
  std::size_t var = 0;
  double coefficient = 0.0;
};

/// constant + sum_j coefficient_j * x_{var_j}
struct AffineExpr {
  double constant = 0.0;
  std::vector<LinearTerm> terms;

  AffineExpr() = default;
  explicit AffineExpr(double c) : constant(c) {}

  AffineExpr& add(std::size_t var, double coefficient) {
    if (coefficient != 0.0) terms.push_back({var, coefficient});
    return *this;
  }
  double evaluate(std::span<const double> x) const;
  /// Merges repeated variables and drops zero coefficients.
  void compress();
};

/// Symmetric matrix whose entries are affine in the decision variables.
/// Entries are stored for the lower triangle, column by column.
struct PsdBlock {
  std::size_t dim = 0;
  std::vector<AffineExpr> entries;

  PsdBlock() = default;
  explicit PsdBlock(std::size_t n) : dim(n), entries(n * (n + 1) / 2) {}

  static std::size_t packed_index(std::size_t i, std::size_t j, std::size_t n) {
    if (i < j) std::swap(i, j);
    return j * n - j * (j + 1) / 2 + i;
  }
  AffineExpr& at(std::size_t i, std::size_t j) { return entries[packed_index(i, j, dim)]; }
  const AffineExpr& at(std::size_t i, std::size_t j) const {
    return entries[packed_index(i, j, dim)];
  }
  Eigen::MatrixXd evaluate(std::span<const double> x) const;
};

/// minimize objective^T x subject to
///   zero rows        expr(x) == 0
///   nonnegative rows expr(x) >= 0
///   psd blocks       M(x) positive semidefinite
struct ConicProblem {
  std::size_t num_variables = 0;
  Eigen::VectorXd objective;
  std::vector<AffineExpr> zero;
  std::vector<AffineExpr> nonnegative;
  std::vector<PsdBlock> psd;

  explicit ConicProblem(std::size_t n = 0) : num_variables(n), objective(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))) {}

  std::size_t add_variable();

  /// Throws std::invalid_argument on out-of-range variables or sizes.
  void validate() const;

  std::size_t row_count() const;

  /// Plain-text dump; see docs/conic_dump.md.
  std::string dump() const;
};

struct ConeDims {
  std::size_t zero = 0;
  std::size_t nonnegative = 0;
  std::vector<std::size_t> psd;
};

/// min c'x s.t. Ax + s = b, s in K, with PSD blocks in scaled lower-triangular
/// vectorization (off-diagonals multiplied by sqrt(2)).
struct StandardForm {
  Eigen::SparseMatrix<double> a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  ConeDims cones;
};

StandardForm to_standard_form(const ConicProblem& problem);

/// Packed scaled vectorization of a symmetric matrix (lower triangle, columns).
Eigen::VectorXd svec(const Eigen::MatrixXd& m);
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, std::size_t dim);

}  // namespace thetanorm
