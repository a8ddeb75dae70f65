#include "thetanorm/moment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace thetanorm {

namespace {

using MonomialTerms = std::vector<std::pair<Monomial, Rational>>;

bool grevlex_less(const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) < 0; }

// Interns the monomials appearing in the cells, sorted grevlex ascending.
MomentLayout make_layout(const Shape& shape, MonomialBasis basis,
                         const std::vector<MonomialTerms>& cell_terms) {
  std::vector<Monomial> slots;
  std::unordered_map<Monomial, std::size_t, MonomialHash> seen;
  slots.push_back(Monomial::one());
  seen.emplace(Monomial::one(), 0);
  for (const auto& b : basis.monomials)
    if (b.degree() == 1 && seen.emplace(b, slots.size()).second) slots.push_back(b);
  for (const auto& terms : cell_terms)
    for (const auto& [m, c] : terms)
      if (seen.emplace(m, slots.size()).second) slots.push_back(m);
  std::sort(slots.begin(), slots.end(), grevlex_less);
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  for (std::size_t i = 0; i < slots.size(); ++i) index.emplace(slots[i], i);

  std::vector<std::vector<SlotTerm>> cells(cell_terms.size());
  for (std::size_t c = 0; c < cell_terms.size(); ++c) {
    for (const auto& [m, coef] : cell_terms[c]) cells[c].push_back({index.at(m), coef});
    std::sort(cells[c].begin(), cells[c].end(),
              [](const SlotTerm& a, const SlotTerm& b) { return a.slot < b.slot; });
  }
  return MomentLayout(shape, std::move(basis), std::move(slots), std::move(cells));
}

void add_term(MonomialTerms& terms, const Monomial& m, const Rational& c) {
  for (auto& [mm, cc] : terms)
    if (mm == m) {
      cc += c;
      return;
    }
  terms.emplace_back(m, c);
}

}  // namespace

MomentLayout::MomentLayout(Shape shape, MonomialBasis basis, std::vector<Monomial> slots,
                           std::vector<std::vector<SlotTerm>> cells)
    : shape_(std::move(shape)), basis_(std::move(basis)), slots_(std::move(slots)),
      cells_(std::move(cells)) {
  const std::size_t n = basis_.size();
  if (cells_.size() != n * (n + 1) / 2) throw std::invalid_argument("moment layout cell count mismatch");
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (!slot_index_.emplace(slots_[i], i).second) throw std::invalid_argument("duplicate moment slot");
  if (!slot_of(Monomial::one())) throw std::invalid_argument("moment layout lacks the constant slot");
}

std::optional<std::size_t> MomentLayout::slot_of(const Monomial& m) const {
  auto it = slot_index_.find(m);
  if (it == slot_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MomentLayout::variable_slot(std::size_t offset) const {
  auto s = slot_of(Monomial::variable(static_cast<Variable>(offset)));
  if (!s) throw std::logic_error("variable x_" + std::to_string(offset) + " has no moment slot");
  return *s;
}

Eigen::MatrixXd MomentLayout::evaluate(std::span<const double> y) const {
  if (y.size() != slots_.size()) throw std::invalid_argument("moment vector has the wrong length");
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) {
      double v = 0.0;
      for (const auto& t : cell(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
        v += t.coefficient.get_d() * y[t.slot];
      m(i, j) = m(j, i) = v;
    }
  return m;
}

PsdBlock MomentLayout::psd_block(std::size_t first_var) const {
  PsdBlock blk(dim());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    AffineExpr& e = blk.entries[c];
    for (const auto& t : cells_[c]) e.add(first_var + t.slot, t.coefficient.get_d());
  }
  return blk;
}

MomentLayout build_moment_layout(const GroebnerBasis& g, int k) {
  if (k < 1) throw std::invalid_argument("moment layouts need k >= 1");
  MonomialBasis basis = monomial_basis(g, k);
  const std::size_t n = basis.size();
  std::vector<MonomialTerms> cell_terms(n * (n + 1) / 2);
  const auto max_degree = static_cast<std::uint32_t>(2 * k);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) {
      Polynomial r = reduce(Polynomial::monomial(basis[i] * basis[j]), g);
      auto& terms = cell_terms[PsdBlock::packed_index(i, j, n)];
      for (const auto& [m, c] : r.terms()) {
        if (m.degree() > max_degree)
          throw std::logic_error("normal form of a moment cell exceeds degree 2k");
        terms.emplace_back(m, c);
      }
    }
  return make_layout(g.shape(), std::move(basis), cell_terms);
}

MomentLayout theta1_closed_form(const Shape& shape, PNorm p) {
  if (p != PNorm::finite(2) && p != PNorm::infinity())
    throw std::invalid_argument("closed-form theta-1 layouts exist for p = 2 and p = inf only");
  const std::size_t count = shape.size();
  MonomialBasis basis;
  basis.monomials.push_back(Monomial::one());
  // degree-one monomials ascend as the offset descends
  for (std::size_t a = count; a-- > 0;) basis.monomials.push_back(Monomial::variable(static_cast<Variable>(a)));
  const std::size_t n = basis.size();
  auto offset_of = [&](std::size_t row) { return count - row; };

  std::vector<MonomialTerms> cell_terms(n * (n + 1) / 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) {
      auto& terms = cell_terms[PsdBlock::packed_index(i, j, n)];
      if (j == 0) {
        terms.emplace_back(basis[i], Rational(1));
        continue;
      }
      const std::size_t ai = offset_of(i), aj = offset_of(j);
      if (i == j) {
        if (p.is_infinite()) {
          terms.emplace_back(Monomial::one(), Rational(1));
        } else if (ai != 0) {
          terms.emplace_back(Monomial::variable(static_cast<Variable>(ai), 2), Rational(1));
        } else {
          // M_{00} = sum_a M_{aa}, solved for the largest variable's diagonal
          terms.emplace_back(Monomial::one(), Rational(1));
          for (std::size_t b = 1; b < count; ++b)
            add_term(terms, Monomial::variable(static_cast<Variable>(b), 2), Rational(-1));
        }
        continue;
      }
      MultiIndex a = shape.index(ai), b = shape.index(aj);
      auto [lo, hi] = p.is_infinite() ? bar_wedge_vee(a, b, shape) : wedge_vee(a, b);
      terms.emplace_back(Monomial::from_variables({variable_of(shape, lo), variable_of(shape, hi)}),
                         Rational(1));
    }
  return make_layout(shape, std::move(basis), cell_terms);
}

bool same_layout(const MomentLayout& a, const MomentLayout& b) {
  if (!(a.shape() == b.shape()) || a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (!(a.basis()[i] == b.basis()[i])) return false;
  auto labelled = [](const MomentLayout& l, const std::vector<SlotTerm>& cell) {
    std::map<Monomial, Rational, GrevlexGreater> out;
    for (const auto& t : cell) out[l.slots()[t.slot]] += t.coefficient;
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
  };
  for (std::size_t c = 0; c < a.cells().size(); ++c)
    if (labelled(a, a.cells()[c]) != labelled(b, b.cells()[c])) return false;
  return true;
}

ConicProblem assemble_norm_sdp(const MomentLayout& layout, const Tensor& x) {
  if (!(x.shape() == layout.shape()))
    throw std::invalid_argument("tensor shape " + x.shape().to_string() + " does not match layout shape " +
                                layout.shape().to_string());
  ConicProblem prob(layout.slot_count());
  prob.objective(static_cast<Eigen::Index>(layout.constant_slot())) = 1.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    AffineExpr e(-x.values()[a]);
    e.add(layout.variable_slot(a), 1.0);
    prob.zero.push_back(std::move(e));
  }
  prob.psd.push_back(layout.psd_block());
  return prob;
}

ConicProblem assemble_recovery_sdp(const MomentLayout& layout,
                                   std::span<const LinearMeasurement> measurements) {
  if (measurements.empty()) throw std::invalid_argument("recovery needs at least one measurement");
  ConicProblem prob(layout.slot_count());
  prob.objective(static_cast<Eigen::Index>(layout.constant_slot())) = 1.0;
  for (const auto& meas : measurements) {
    if (!(meas.a.shape() == layout.shape()))
      throw std::invalid_argument("measurement shape does not match layout shape");
    AffineExpr e(-meas.b);
    for (std::size_t a = 0; a < meas.a.size(); ++a) e.add(layout.variable_slot(a), meas.a.values()[a]);
    prob.zero.push_back(std::move(e));
  }
  prob.psd.push_back(layout.psd_block());
  return prob;
}

SosSystem build_sos_system(const MomentLayout& layout, const GroebnerBasis& g, const Polynomial& f,
                           const Polynomial& f_param) {
  const std::uint32_t max_degree = 2 * static_cast<std::uint32_t>(layout.basis().monomials.back().degree());
  Polynomial rf = reduce(f, g), rg = reduce(f_param, g);
  if ((!rf.is_zero() && rf.degree() > max_degree) || (!rg.is_zero() && rg.degree() > max_degree))
    throw std::invalid_argument("reduced polynomial has degree above 2k = " + std::to_string(max_degree));

  SosSystem sys;
  sys.basis = layout.basis();
  std::map<Monomial, std::size_t, GrevlexGreater> row_of;
  auto row_for = [&](const Monomial& m) -> SosRow& {
    auto [it, inserted] = row_of.emplace(m, sys.rows.size());
    if (inserted) sys.rows.push_back(SosRow{m, {}, 0, 0});
    return sys.rows[it->second];
  };
  const std::size_t n = layout.dim();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) {
      const std::size_t c = PsdBlock::packed_index(i, j, n);
      // x^a_i x^a_j appears twice in the quadratic form when i != j
      const Rational weight = i == j ? 1 : 2;
      for (const auto& t : layout.cells()[c]) row_for(layout.slots()[t.slot]).gram.emplace_back(c, weight * t.coefficient);
    }
  for (const auto& [m, c] : rf.terms()) row_for(m).target = c;
  for (const auto& [m, c] : rg.terms()) row_for(m).target_param = c;
  // deterministic order: grevlex descending, as a polynomial prints
  std::vector<SosRow> ordered;
  ordered.reserve(sys.rows.size());
  for (const auto& [m, idx] : row_of) ordered.push_back(std::move(sys.rows[idx]));
  sys.rows = std::move(ordered);
  return sys;
}

ConicProblem assemble_sos_program(const SosSystem& system, bool parametric) {
  const std::size_t cells = system.gram_cells();
  ConicProblem prob(cells + (parametric ? 1 : 0));
  for (const auto& row : system.rows) {
    AffineExpr e(-row.target.get_d());
    for (const auto& [c, w] : row.gram) e.add(c, w.get_d());
    if (parametric) e.add(cells, -row.target_param.get_d());
    e.compress();
    prob.zero.push_back(std::move(e));
  }
  PsdBlock gram(system.gram_dim());
  for (std::size_t c = 0; c < cells; ++c) gram.entries[c].add(c, 1.0);
  prob.psd.push_back(std::move(gram));
  if (parametric) {
    prob.objective(static_cast<Eigen::Index>(cells)) = 1.0;
    AffineExpr r;
    r.add(cells, 1.0);
    prob.nonnegative.push_back(std::move(r));
  }
  return prob;
}

ConicProblem assemble_sos_sdp(const Polynomial& f, const GroebnerBasis& g, int k) {
  MomentLayout layout = build_moment_layout(g, k);
  return assemble_sos_program(build_sos_system(layout, g, f), false);
}

double sos_residual(const SosSystem& system, const Eigen::MatrixXd& gram, double r) {
  const std::size_t n = system.gram_dim();
  if (static_cast<std::size_t>(gram.rows()) != n || static_cast<std::size_t>(gram.cols()) != n)
    throw std::invalid_argument("Gram matrix has the wrong size");
  std::vector<double> packed(system.gram_cells());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i)
      packed[PsdBlock::packed_index(i, j, n)] =
          0.5 * (gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                 gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
  double worst = 0.0;
  for (const auto& row : system.rows) {
    double v = -row.target.get_d() - r * row.target_param.get_d();
    for (const auto& [c, w] : row.gram) v += w.get_d() * packed[c];
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace thetanorm
