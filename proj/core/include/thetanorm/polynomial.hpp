#pragma once

#include "thetanorm/tensor.hpp"

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace thetanorm {

using Rational = mpq_class;

/// Variables are tensor entries x_a, identified by the row-major offset of a.
/// Offset 0 is x_{1...1}, the largest variable; larger offsets are smaller
/// variables, so x_{1..11} > x_{1..12} > ... > x_{n1..nd}.
using Variable = std::uint32_t;

/// Sparse exponent vector: (variable, exponent) pairs sorted by variable,
/// exponents strictly positive.
class Monomial {
 public:
  using Factor = std::pair<Variable, std::uint32_t>;

  Monomial() = default;
  static Monomial one() { return {}; }
  static Monomial variable(Variable v, std::uint32_t exponent = 1);
  /// Accepts unsorted input with repeats; zero exponents are dropped.
  static Monomial from_factors(std::vector<Factor> factors);
  /// Product of the listed variables (with repetition).
  static Monomial from_variables(std::vector<Variable> vars);

  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return factors_.empty(); }
  const std::vector<Factor>& factors() const { return factors_; }
  std::uint32_t exponent(Variable v) const;

  /// Variables with repetition, ascending.
  std::vector<Variable> expanded() const;

  bool divides(const Monomial& other) const;
  /// other / *this; requires divides(other).
  Monomial cofactor_in(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  bool coprime(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);

  bool operator==(const Monomial&) const = default;

  std::size_t hash() const;

 private:
  std::vector<Factor> factors_;
  std::uint32_t degree_ = 0;
};

/// Graded reverse lexicographic comparison: higher degree wins; ties are broken
/// at the smallest variable where the exponents differ, the monomial with the
/// smaller exponent there being the larger.
std::strong_ordering grevlex_compare(const Monomial& a, const Monomial& b);

struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return grevlex_compare(a, b) > 0;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// Polynomial with exact rational coefficients. Terms are kept in descending
/// grevlex order, so the first term is the leading term.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrevlexGreater>;

  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(implicit)
  static Polynomial monomial(const Monomial& m, const Rational& coefficient = 1);
  static Polynomial variable(Variable v);

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;
  std::uint32_t degree() const;
  Rational coefficient(const Monomial& m) const;

  void add_term(const Monomial& m, const Rational& coefficient);
  /// *this += scale * m * other
  void add_multiple(const Rational& scale, const Monomial& m, const Polynomial& other);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scale);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& s, Polynomial p) { return p *= s; }
  Polynomial operator-() const;

  bool operator==(const Polynomial& other) const { return terms_ == other.terms_; }

 private:
  TermMap terms_;
};

/// Text form `coeff * x[i1,...,id]^e * ...` joined by + and -, e.g.
/// "1 + 0.5*x[1,1] - x[1,2]^2*x[2,1]". Whitespace is ignored; coefficients
/// may be integers, decimals, fractions p/q, or scientific notation and are
/// converted exactly to rationals.
Polynomial parse_polynomial(const std::string& text, const Shape& shape);
std::string format_polynomial(const Polynomial& p, const Shape& shape);
std::string format_monomial(const Monomial& m, const Shape& shape);

/// Exact rational value of a decimal literal such as "-1.25e-3" or "3/4".
Rational parse_rational(const std::string& literal);

}  // namespace thetanorm
