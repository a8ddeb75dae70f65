#include "thetanorm/groebner.hpp"

#include <algorithm>

namespace thetanorm {

PNorm PNorm::finite(int p) {
  if (p < 1) throw std::invalid_argument("p must be a positive integer or inf");
  return PNorm(p, false);
}

PNorm PNorm::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  int p = 0;
  try {
    p = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid p '" + text + "' (expected a positive integer or inf)");
  }
  if (used != text.size()) throw std::invalid_argument("invalid p '" + text + "'");
  return finite(p);
}

IdealSpec IdealSpec::for_norm(Shape shape, PNorm p) {
  if (p.is_infinite()) return {std::move(shape), IdealKind::infinity, 0};
  if (p.value() == 1) return {std::move(shape), IdealKind::one, 1};
  if (p.value() % 2 != 0)
    throw UnsupportedNorm("p = " + p.to_string() +
                          " is unsupported: for odd p the defining ideal has an unbounded real "
                          "variety; use p = 1, an even p, or inf");
  return {std::move(shape), IdealKind::even, p.value()};
}

std::string IdealSpec::name() const {
  switch (kind) {
    case IdealKind::rank_one: return "I_0";
    case IdealKind::one: return "I_1";
    case IdealKind::even: return "I_" + std::to_string(p);
    case IdealKind::infinity: return "I_inf";
    case IdealKind::custom: return "custom";
  }
  return "?";
}

GroebnerBasis::GroebnerBasis(IdealSpec spec, std::vector<Polynomial> elements)
    : spec_(std::move(spec)), elements_(std::move(elements)), buckets_(spec_.shape.size()) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].is_zero()) throw std::invalid_argument("Groebner basis element is zero");
    const Monomial& lm = elements_[i].leading_monomial();
    if (lm.is_one()) {
      // a nonzero constant generates the unit ideal; it divides everything
      if (!unit_element_) unit_element_ = i;
      continue;
    }
    Variable first = lm.factors().front().first;
    if (first >= buckets_.size()) throw std::invalid_argument("variable outside shape");
    buckets_[first].push_back(i);
  }
}

std::optional<std::size_t> GroebnerBasis::find_divisor(const Monomial& m) const {
  std::optional<std::size_t> best = unit_element_;
  for (const auto& [v, e] : m.factors()) {
    if (v >= spec_.shape.size()) continue;
    for (std::size_t idx : buckets_[v]) {
      if (best && idx > *best) break;
      if (elements_[idx].leading_monomial().divides(m)) {
        best = idx;
        break;
      }
    }
  }
  return best;
}

std::optional<std::size_t> MonomialBasis::find(const Monomial& m) const {
  auto it = std::lower_bound(monomials.begin(), monomials.end(), m,
                             [](const Monomial& a, const Monomial& b) {
                               return grevlex_compare(a, b) < 0;
                             });
  if (it != monomials.end() && *it == m) return static_cast<std::size_t>(it - monomials.begin());
  return std::nullopt;
}

namespace {

Polynomial binomial(Variable a, Variable b, Variable c, Variable d) {
  Polynomial p = Polynomial::monomial(Monomial::from_variables({a, b}));
  p.add_term(Monomial::from_variables({c, d}), -1);
  return p;
}

void make_monic(Polynomial& p) {
  Rational lc = p.leading_coefficient();
  if (lc != 1) p *= Rational(1 / lc);
}

std::vector<Polynomial> rank_one_binomials(const Shape& shape) {
  std::vector<Polynomial> out;
  const std::size_t n = shape.size();
  std::vector<MultiIndex> idx;
  for (std::size_t off = 0; off < n; ++off) idx.push_back(shape.index(off));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const MultiIndex& a = idx[i];
      const MultiIndex& b = idx[j];
      bool incomparable = false;
      for (int m = 0; m < shape.order(); ++m) incomparable = incomparable || a[m] > b[m];
      if (!incomparable) continue;
      auto [lo, hi] = wedge_vee(a, b);
      out.push_back(binomial(static_cast<Variable>(i), static_cast<Variable>(j),
                             variable_of(shape, lo), variable_of(shape, hi)));
    }
  }
  return out;
}

Polynomial power_sum_minus_one(const Shape& shape, std::uint32_t p) {
  Polynomial s(Rational(-1));
  for (std::size_t off = 0; off < shape.size(); ++off)
    s.add_term(Monomial::variable(static_cast<Variable>(off), p), 1);
  return s;
}

}  // namespace

GroebnerBasis build_groebner(const IdealSpec& spec) {
  const Shape& shape = spec.shape;
  const std::size_t n = shape.size();
  std::vector<Polynomial> elements;
  switch (spec.kind) {
    case IdealKind::rank_one:
      elements = rank_one_binomials(shape);
      break;
    case IdealKind::one: {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          elements.push_back(Polynomial::monomial(
              Monomial::from_variables({static_cast<Variable>(i), static_cast<Variable>(j)})));
      elements.push_back(power_sum_minus_one(shape, 2));
      for (std::size_t i = 1; i < n; ++i) {
        Polynomial cube = Polynomial::monomial(Monomial::variable(static_cast<Variable>(i), 3));
        cube.add_term(Monomial::variable(static_cast<Variable>(i)), -1);
        elements.push_back(std::move(cube));
      }
      break;
    }
    case IdealKind::even: {
      if (spec.p < 2 || spec.p % 2 != 0)
        throw UnsupportedNorm("I_p requires an even p >= 2, got " + std::to_string(spec.p));
      elements.push_back(power_sum_minus_one(shape, static_cast<std::uint32_t>(spec.p)));
      auto g0 = rank_one_binomials(shape);
      elements.insert(elements.end(), g0.begin(), g0.end());
      break;
    }
    case IdealKind::infinity: {
      for (std::size_t i = 0; i < n; ++i) {
        Polynomial sq = Polynomial::monomial(Monomial::variable(static_cast<Variable>(i), 2));
        sq.add_term(Monomial::one(), -1);
        elements.push_back(std::move(sq));
      }
      std::vector<MultiIndex> idx;
      for (std::size_t off = 0; off < n; ++off) idx.push_back(shape.index(off));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const MultiIndex& a = idx[i];
          const MultiIndex& b = idx[j];
          bool qualifies = false;
          for (int m = 0; m < shape.order(); ++m)
            qualifies = qualifies || a[m] > b[m] || (a[m] == b[m] && a[m] < shape.dim(m));
          if (!qualifies) continue;
          auto [lo, hi] = bar_wedge_vee(a, b, shape);
          elements.push_back(binomial(static_cast<Variable>(i), static_cast<Variable>(j),
                                      variable_of(shape, lo), variable_of(shape, hi)));
        }
      }
      break;
    }
    case IdealKind::custom:
      throw std::invalid_argument("custom ideals have no built-in basis");
  }
  for (auto& e : elements) make_monic(e);
  return GroebnerBasis(spec, std::move(elements));
}

Polynomial reduce(const Polynomial& f, const GroebnerBasis& g) {
  Polynomial remainder;
  Polynomial p = f;
  while (!p.is_zero()) {
    const auto& [m, c] = *p.terms().begin();
    Monomial lead = m;
    Rational coeff = c;
    if (auto idx = g.find_divisor(lead)) {
      const Polynomial& gi = g[*idx];
      Monomial q = gi.leading_monomial().cofactor_in(lead);
      p.add_multiple(-coeff / gi.leading_coefficient(), q, gi);
    } else {
      remainder.add_term(lead, coeff);
      p.add_term(lead, -coeff);
    }
  }
  return remainder;
}

Monomial normal_form_rank_one(const Monomial& m, const Shape& shape) {
  std::vector<Variable> vars = m.expanded();
  if (vars.empty()) return m;
  const int d = shape.order();
  std::vector<std::vector<int>> coords(static_cast<std::size_t>(d));
  for (Variable v : vars) {
    MultiIndex a = shape.index(v);
    for (int i = 0; i < d; ++i) coords[static_cast<std::size_t>(i)].push_back(a[i]);
  }
  for (auto& c : coords) std::sort(c.begin(), c.end());
  std::vector<Variable> out;
  out.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    std::vector<int> b(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)][j];
    out.push_back(variable_of(shape, MultiIndex(std::move(b))));
  }
  return Monomial::from_variables(std::move(out));
}

Monomial normal_form_infinity(const Monomial& m, const Shape& shape) {
  const int d = shape.order();
  // survivors[j] = S_j: mode-j coordinates occurring an odd number of times
  std::vector<std::vector<int>> survivors(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    std::vector<int> count(static_cast<std::size_t>(shape.dim(j)) + 1, 0);
    for (const auto& [v, e] : m.factors()) count[static_cast<std::size_t>(shape.index(v)[j])] += static_cast<int>(e);
    for (int i = 1; i <= shape.dim(j); ++i)
      if (count[static_cast<std::size_t>(i)] % 2 == 1) survivors[static_cast<std::size_t>(j)].push_back(i);
  }
  // l = k - min_j sum_i l_{i,j} = max_j |S_j|
  std::size_t length = 0;
  for (const auto& s : survivors) length = std::max(length, s.size());
  std::vector<Variable> out;
  out.reserve(length);
  for (std::size_t r = 0; r < length; ++r) {
    std::vector<int> b(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      const auto& s = survivors[static_cast<std::size_t>(j)];
      b[static_cast<std::size_t>(j)] = r < s.size() ? s[r] : shape.dim(j);
    }
    out.push_back(variable_of(shape, MultiIndex(std::move(b))));
  }
  return Monomial::from_variables(std::move(out));
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() || g.is_zero()) throw std::invalid_argument("S-polynomial of a zero polynomial");
  const Monomial& lf = f.leading_monomial();
  const Monomial& lg = g.leading_monomial();
  Monomial l = lf.lcm(lg);
  Polynomial s;
  s.add_multiple(Rational(1 / f.leading_coefficient()), lf.cofactor_in(l), f);
  s.add_multiple(Rational(-1 / g.leading_coefficient()), lg.cofactor_in(l), g);
  return s;
}

bool buchberger_check(const GroebnerBasis& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (!reduce(s_polynomial(g[i], g[j]), g).is_zero()) return false;
  return true;
}

bool buchberger_check(const std::vector<Polynomial>& polys, const Shape& shape) {
  return buchberger_check(GroebnerBasis(IdealSpec{shape, IdealKind::custom, 0}, polys));
}

bool is_reduced(const GroebnerBasis& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].leading_coefficient() != 1) return false;
    for (const auto& [m, c] : g[i].terms())
      for (std::size_t j = 0; j < g.size(); ++j)
        if (j != i && g[j].leading_monomial().divides(m)) return false;
  }
  return true;
}

MonomialBasis monomial_basis(const GroebnerBasis& g, int k) {
  if (k < 0) throw std::invalid_argument("degree bound must be nonnegative");
  const auto n = static_cast<Variable>(g.shape().size());
  MonomialBasis basis;
  if (!g.is_standard(Monomial::one())) return basis;
  std::vector<Monomial> level{Monomial::one()};
  basis.monomials.push_back(Monomial::one());
  for (int deg = 1; deg <= k && !level.empty(); ++deg) {
    std::vector<Monomial> next;
    for (const Monomial& m : level) {
      Variable start = m.is_one() ? 0 : m.factors().back().first;
      for (Variable v = start; v < n; ++v) {
        Monomial candidate = m * Monomial::variable(v);
        if (g.is_standard(candidate)) next.push_back(std::move(candidate));
      }
    }
    basis.monomials.insert(basis.monomials.end(), next.begin(), next.end());
    level = std::move(next);
  }
  std::sort(basis.monomials.begin(), basis.monomials.end(),
            [](const Monomial& a, const Monomial& b) { return grevlex_compare(a, b) < 0; });
  return basis;
}

}  // namespace thetanorm
