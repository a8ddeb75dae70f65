#pragma once

// Reference computations for the tests. None of these call the library code
// they are used to check: division scans the generator list directly, singular
// values come from one-sided Jacobi rotations, standard monomials from brute
// force, and the exact B_inf gauge from basic solutions of its linear program.

#include "thetanorm/groebner.hpp"
#include "thetanorm/polynomial.hpp"
#include "thetanorm/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using thetanorm::Monomial;
using thetanorm::MultiIndex;
using thetanorm::Polynomial;
using thetanorm::Shape;
using thetanorm::Tensor;
using thetanorm::Variable;

/// Textbook multivariate division: repeatedly cancel the leading term of f by
/// the first listed generator whose leading monomial divides it, otherwise
/// move that term into the remainder.
inline Polynomial naive_remainder(Polynomial f, const std::vector<Polynomial>& gens) {
  Polynomial remainder;
  while (!f.is_zero()) {
    const Monomial lm = f.leading_monomial();
    const thetanorm::Rational lc = f.leading_coefficient();
    bool divided = false;
    for (const auto& g : gens) {
      if (!g.leading_monomial().divides(lm)) continue;
      const Monomial q = g.leading_monomial().cofactor_in(lm);
      f.add_multiple(-lc / g.leading_coefficient(), q, g);
      divided = true;
      break;
    }
    if (!divided) {
      remainder.add_term(lm, lc);
      f.add_term(lm, -lc);
    }
  }
  return remainder;
}

inline std::vector<Polynomial> generators(const thetanorm::GroebnerBasis& g) {
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g[i]);
  return out;
}

/// Singular values by one-sided (Hestenes) Jacobi rotations, descending.
inline std::vector<double> jacobi_singular_values(Eigen::MatrixXd a) {
  if (a.rows() < a.cols()) a.transposeInPlace();
  const Eigen::Index n = a.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXd cp = a.col(p);
        a.col(p) = c * cp - s * a.col(q);
        a.col(q) = s * cp + c * a.col(q);
      }
    if (off < 1e-14) break;
  }
  std::vector<double> sv;
  for (Eigen::Index j = 0; j < n; ++j) sv.push_back(a.col(j).norm());
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

inline double nuclear_norm(const Eigen::MatrixXd& m) {
  double s = 0.0;
  for (double v : jacobi_singular_values(m)) s += v;
  return s;
}

inline Eigen::MatrixXd as_matrix(const Tensor& x) {
  const Shape& s = x.shape();
  Eigen::MatrixXd m(s.dim(0), s.dim(1));
  for (int i = 0; i < s.dim(0); ++i)
    for (int j = 0; j < s.dim(1); ++j) m(i, j) = x[static_cast<std::size_t>(i * s.dim(1) + j)];
  return m;
}

/// Every monomial of degree <= k in `num_vars` variables that no leading
/// monomial of `gens` divides.
inline std::vector<Monomial> brute_force_standard(const std::vector<Polynomial>& gens, std::size_t num_vars,
                                                  int k) {
  std::vector<Monomial> out;
  std::vector<Variable> vars;
  std::function<void(Variable)> rec = [&](Variable start) {
    const Monomial m = Monomial::from_variables(vars);
    bool standard = true;
    for (const auto& g : gens)
      if (g.leading_monomial().divides(m)) standard = false;
    if (!standard) return;  // multiples of a non-standard monomial are non-standard
    out.push_back(m);
    if (static_cast<int>(vars.size()) == k) return;
    for (Variable v = start; v < num_vars; ++v) {
      vars.push_back(v);
      rec(v);
      vars.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Signed rank-1 tensors, one representative per +/- pair.
inline std::vector<Tensor> signed_vertices(const Shape& shape) {
  int free_bits = 0;
  for (int d : shape.dims()) free_bits += d - 1;
  std::vector<Tensor> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_bits); ++mask) {
    std::vector<std::vector<double>> f;
    int bit = 0;
    for (int d : shape.dims()) {
      std::vector<double> v(static_cast<std::size_t>(d), 1.0);
      for (int i = 1; i < d; ++i, ++bit) v[static_cast<std::size_t>(i)] = (mask >> bit & 1) ? -1.0 : 1.0;
      f.push_back(v);
    }
    Tensor t(shape);
    for (std::size_t o = 0; o < shape.size(); ++o) {
      const MultiIndex a = shape.index(o);
      double v = 1.0;
      for (int i = 0; i < shape.order(); ++i) v *= f[static_cast<std::size_t>(i)][static_cast<std::size_t>(a[i] - 1)];
      t[o] = v;
    }
    out.push_back(t);
  }
  return out;
}

/// Gauge of conv(V(I_inf)) at x: min sum |lambda_v| subject to sum lambda_v v = x.
/// Some optimal solution is supported on a linearly independent set of
/// vertices, so enumerating column subsets of size rank(V) is exact.
inline double linf_gauge(const Tensor& x) {
  const auto verts = signed_vertices(x.shape());
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd v(n, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t j = 0; j < verts.size(); ++j) v.col(static_cast<Eigen::Index>(j)) = verts[j].vector();
  const Eigen::Index r = Eigen::FullPivLU<Eigen::MatrixXd>(v).rank();
  const Eigen::VectorXd target = x.vector();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> pick;
  std::function<void(Eigen::Index)> rec = [&](Eigen::Index start) {
    if (static_cast<Eigen::Index>(pick.size()) == r) {
      Eigen::MatrixXd sub(n, r);
      for (Eigen::Index j = 0; j < r; ++j) sub.col(j) = v.col(pick[static_cast<std::size_t>(j)]);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
      if (qr.rank() < r) return;
      const Eigen::VectorXd lambda = qr.solve(target);
      if ((sub * lambda - target).norm() > 1e-9 * (1 + target.norm())) return;
      best = std::min(best, lambda.lpNorm<1>());
      return;
    }
    for (Eigen::Index j = start; j < v.cols(); ++j) {
      pick.push_back(j);
      rec(j + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

// Hand-rolled generators for the property tests.

inline Shape random_shape(std::mt19937_64& rng, int max_order, int max_dim, std::size_t max_size) {
  for (;;) {
    const int d = std::uniform_int_distribution<int>(1, max_order)(rng);
    std::vector<int> dims;
    for (int i = 0; i < d; ++i) dims.push_back(std::uniform_int_distribution<int>(1, max_dim)(rng));
    Shape s(dims);
    if (s.size() <= max_size && s.size() >= 2) return s;
  }
}

inline MultiIndex random_index(std::mt19937_64& rng, const Shape& s) {
  std::vector<int> c;
  for (int d : s.dims()) c.push_back(std::uniform_int_distribution<int>(1, d)(rng));
  return MultiIndex(c);
}

inline Monomial random_monomial(std::mt19937_64& rng, const Shape& s, int max_degree) {
  const int deg = std::uniform_int_distribution<int>(0, max_degree)(rng);
  std::vector<Variable> vars;
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  for (int i = 0; i < deg; ++i) vars.push_back(static_cast<Variable>(pick(rng)));
  return Monomial::from_variables(vars);
}

inline Tensor random_tensor(std::mt19937_64& rng, const Shape& s) {
  std::normal_distribution<double> normal;
  Tensor t(s);
  for (double& v : t.values()) v = normal(rng);
  return t;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = normal(rng);
  return m;
}

}  // namespace oracle
