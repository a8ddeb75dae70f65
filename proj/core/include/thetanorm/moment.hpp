#pragma once

#include "thetanorm/conic.hpp"
#include "thetanorm/groebner.hpp"
#include "thetanorm/polynomial.hpp"
#include "thetanorm/tensor.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace thetanorm {

struct SlotTerm {
  std::size_t slot = 0;
  Rational coefficient;
};

/// Moment matrix indexed by B_k whose cells are linear in the moment variables
/// ("slots"), one slot per standard monomial reachable from B_k * B_k.
class MomentLayout {
 public:
  MomentLayout(Shape shape, MonomialBasis basis, std::vector<Monomial> slots,
               std::vector<std::vector<SlotTerm>> cells);

  const Shape& shape() const { return shape_; }
  const MonomialBasis& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }

  const std::vector<Monomial>& slots() const { return slots_; }
  std::size_t slot_count() const { return slots_.size(); }
  std::optional<std::size_t> slot_of(const Monomial& m) const;
  std::size_t constant_slot() const { return *slot_of(Monomial::one()); }
  /// Slot of x_a (offset a); degree-one monomials are always standard.
  std::size_t variable_slot(std::size_t offset) const;

  /// Expansion of cell (i, j); symmetric in its arguments.
  const std::vector<SlotTerm>& cell(std::size_t i, std::size_t j) const {
    return cells_[PsdBlock::packed_index(i, j, dim())];
  }
  /// Cells in packed lower-triangular, column-major order.
  const std::vector<std::vector<SlotTerm>>& cells() const { return cells_; }

  /// M(y) for a concrete moment vector.
  Eigen::MatrixXd evaluate(std::span<const double> y) const;
  /// The PSD block M(y) with slot s mapped to decision variable first_var + s.
  PsdBlock psd_block(std::size_t first_var = 0) const;

 private:
  Shape shape_;
  MonomialBasis basis_;
  std::vector<Monomial> slots_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> slot_index_;
  std::vector<std::vector<SlotTerm>> cells_;
};

/// Cell (a, b) holds the normal form of x^a x^b modulo G, written over slots.
MomentLayout build_moment_layout(const GroebnerBasis& g, int k);

/// The k = 1 layouts for p = 2 and p = inf written down directly from the
/// wedge/vee identifications, without polynomial division.
MomentLayout theta1_closed_form(const Shape& shape, PNorm p);

/// Same basis and, for every cell, the same expansion over slot monomials.
bool same_layout(const MomentLayout& a, const MomentLayout& b);

/// Gauge program: minimize M(1,1) subject to M(1, x_a) = x_a and M(y) PSD.
/// Decision variables are the slots.
ConicProblem assemble_norm_sdp(const MomentLayout& layout, const Tensor& x);

struct LinearMeasurement {
  Tensor a;
  double b = 0.0;
};

/// As assemble_norm_sdp, but the degree-one slots are free apart from
/// sum_a (A_i)_a y_a = b_i.
ConicProblem assemble_recovery_sdp(const MomentLayout& layout,
                                   std::span<const LinearMeasurement> measurements);

/// One linear equation on the Gram matrix: for a standard monomial, the
/// weighted Gram cells that reduce onto it must equal target + r * target_param.
struct SosRow {
  Monomial monomial;
  std::vector<std::pair<std::size_t, Rational>> gram;  ///< (packed Gram cell, weight)
  Rational target;
  Rational target_param;
};

/// Linear part of "f + r g is k-sos modulo I": Gram matrix over B_k.
struct SosSystem {
  MonomialBasis basis;
  std::vector<SosRow> rows;

  std::size_t gram_dim() const { return basis.size(); }
  std::size_t gram_cells() const { return basis.size() * (basis.size() + 1) / 2; }
};

/// Throws std::invalid_argument if reduce(f) or reduce(g) has degree > 2k.
SosSystem build_sos_system(const MomentLayout& layout, const GroebnerBasis& g,
                           const Polynomial& f, const Polynomial& f_param = Polynomial());

/// Gram variables come first (packed lower triangle). With a parametric
/// system, variable gram_cells() is r >= 0 and the objective minimizes it;
/// otherwise the program is a pure feasibility problem.
ConicProblem assemble_sos_program(const SosSystem& system, bool parametric);

/// Feasibility program "f is k-sos modulo the ideal of G".
ConicProblem assemble_sos_sdp(const Polynomial& f, const GroebnerBasis& g, int k);

/// Largest coefficient mismatch between reduce(sum_ij Q_ij x^a_i x^a_j) and
/// target + r * target_param, evaluated row by row.
double sos_residual(const SosSystem& system, const Eigen::MatrixXd& gram, double r = 0.0);

}  // namespace thetanorm
