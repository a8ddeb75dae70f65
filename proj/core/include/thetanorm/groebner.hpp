#pragma once

#include "thetanorm/polynomial.hpp"
#include "thetanorm/tensor.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace thetanorm {

/// Thrown for norm parameters without an algebraic description (odd finite p >= 3).
class UnsupportedNorm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The p of a nuclear p-norm: a positive integer or infinity.
class PNorm {
 public:
  static PNorm finite(int p);
  static PNorm infinity() { return PNorm(0, true); }
  /// "1", "2", "4", ..., "inf".
  static PNorm parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  int value() const { return p_; }
  /// p = 1, p even, or p = infinity.
  bool is_supported() const { return infinite_ || p_ == 1 || p_ % 2 == 0; }
  std::string to_string() const { return infinite_ ? "inf" : std::to_string(p_); }

  bool operator==(const PNorm&) const = default;

 private:
  PNorm(int p, bool infinite) : p_(p), infinite_(infinite) {}
  int p_ = 0;
  bool infinite_ = false;
};

enum class IdealKind {
  rank_one,  ///< I_0: 2x2 wedge/vee binomials
  one,       ///< I_1
  even,      ///< I_p, p even
  infinity,  ///< I_inf
  custom,    ///< caller-supplied generators
};

struct IdealSpec {
  Shape shape;
  IdealKind kind = IdealKind::rank_one;
  int p = 0;  ///< exponent for IdealKind::even

  static IdealSpec rank_one(Shape shape) { return {std::move(shape), IdealKind::rank_one, 0}; }
  /// Throws UnsupportedNorm for odd finite p >= 3.
  static IdealSpec for_norm(Shape shape, PNorm p);

  std::string name() const;
};

/// An explicit reduced Groebner basis under grevlex, with an index over the
/// leading monomials for fast divisor lookup.
class GroebnerBasis {
 public:
  GroebnerBasis(IdealSpec spec, std::vector<Polynomial> elements);

  const IdealSpec& spec() const { return spec_; }
  const Shape& shape() const { return spec_.shape; }
  const std::vector<Polynomial>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const Polynomial& operator[](std::size_t i) const { return elements_[i]; }

  /// Some element whose leading monomial divides m (first in stored order).
  std::optional<std::size_t> find_divisor(const Monomial& m) const;
  bool is_standard(const Monomial& m) const { return !find_divisor(m).has_value(); }

 private:
  IdealSpec spec_;
  std::vector<Polynomial> elements_;
  // bucket[v] = elements whose leading monomial has smallest variable v
  std::vector<std::vector<std::size_t>> buckets_;
  std::optional<std::size_t> unit_element_;
};

/// Standard monomials of bounded degree, sorted by grevlex ascending.
struct MonomialBasis {
  std::vector<Monomial> monomials;

  std::size_t size() const { return monomials.size(); }
  const Monomial& operator[](std::size_t i) const { return monomials[i]; }
  std::optional<std::size_t> find(const Monomial& m) const;
};

/// Emits the explicit reduced Groebner basis of the requested ideal.
GroebnerBasis build_groebner(const IdealSpec& spec);

/// Remainder of multivariate division of f by G (the normal form of f).
Polynomial reduce(const Polynomial& f, const GroebnerBasis& g);

/// Normal form modulo G_0: sort each coordinate's multiset of indices.
Monomial normal_form_rank_one(const Monomial& m, const Shape& shape);

/// Normal form modulo G_inf via per-mode occurrence parities.
Monomial normal_form_infinity(const Monomial& m, const Shape& shape);

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g);

/// Every pairwise S-polynomial reduces to zero modulo G.
bool buchberger_check(const GroebnerBasis& g);
/// Same criterion for an arbitrary polynomial list (given in the stored order).
bool buchberger_check(const std::vector<Polynomial>& polys, const Shape& shape);

/// Monic elements, and no monomial of an element divisible by another
/// element's leading monomial.
bool is_reduced(const GroebnerBasis& g);

/// All standard monomials of degree <= k.
MonomialBasis monomial_basis(const GroebnerBasis& g, int k);

/// x_a as a polynomial variable.
inline Variable variable_of(const Shape& shape, const MultiIndex& a) {
  return static_cast<Variable>(shape.offset(a));
}

}  // namespace thetanorm
