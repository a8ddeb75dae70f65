#include "thetanorm/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace thetanorm {

namespace {
const double kSqrt2 = std::sqrt(2.0);

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

double AffineExpr::evaluate(std::span<const double> x) const {
  double v = constant;
  for (const auto& t : terms) v += t.coefficient * x[t.var];
  return v;
}

void AffineExpr::compress() {
  std::sort(terms.begin(), terms.end(),
            [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  std::vector<LinearTerm> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coefficient += t.coefficient;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const LinearTerm& t) { return t.coefficient == 0.0; });
  terms = std::move(merged);
}

Eigen::MatrixXd PsdBlock::evaluate(std::span<const double> x) const {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd m(n, n);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = j; i < dim; ++i) {
      double v = at(i, j).evaluate(x);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  return m;
}

std::size_t ConicProblem::add_variable() {
  objective.conservativeResize(static_cast<Eigen::Index>(num_variables + 1));
  objective(static_cast<Eigen::Index>(num_variables)) = 0.0;
  return num_variables++;
}

void ConicProblem::validate() const {
  if (static_cast<std::size_t>(objective.size()) != num_variables)
    throw std::invalid_argument("objective length does not match variable count");
  auto check = [&](const AffineExpr& e) {
    for (const auto& t : e.terms)
      if (t.var >= num_variables) throw std::invalid_argument("constraint references unknown variable");
  };
  for (const auto& e : zero) check(e);
  for (const auto& e : nonnegative) check(e);
  for (const auto& blk : psd) {
    if (blk.entries.size() != blk.dim * (blk.dim + 1) / 2)
      throw std::invalid_argument("PSD block entry count does not match its dimension");
    for (const auto& e : blk.entries) check(e);
  }
}

std::size_t ConicProblem::row_count() const {
  std::size_t m = zero.size() + nonnegative.size();
  for (const auto& blk : psd) m += blk.entries.size();
  return m;
}

StandardForm to_standard_form(const ConicProblem& problem) {
  problem.validate();
  StandardForm sf;
  const std::size_t m = problem.row_count();
  const auto n = static_cast<Eigen::Index>(problem.num_variables);
  sf.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  sf.c = problem.objective;
  sf.cones.zero = problem.zero.size();
  sf.cones.nonnegative = problem.nonnegative.size();
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::Index row = 0;
  // s = expr(x) = constant + sum coef x  =>  A = -coef, b = constant
  auto emit = [&](const AffineExpr& e, double scale) {
    sf.b(row) = scale * e.constant;
    for (const auto& t : e.terms)
      triplets.emplace_back(row, static_cast<Eigen::Index>(t.var), -scale * t.coefficient);
    ++row;
  };
  for (const auto& e : problem.zero) emit(e, 1.0);
  for (const auto& e : problem.nonnegative) emit(e, 1.0);
  for (const auto& blk : problem.psd) {
    sf.cones.psd.push_back(blk.dim);
    for (std::size_t j = 0; j < blk.dim; ++j)
      for (std::size_t i = j; i < blk.dim; ++i) emit(blk.at(i, j), i == j ? 1.0 : kSqrt2);
  }
  sf.a.resize(static_cast<Eigen::Index>(m), n);
  sf.a.setFromTriplets(triplets.begin(), triplets.end());
  sf.a.makeCompressed();
  return sf;
}

Eigen::VectorXd svec(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd v(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) v(k++) = i == j ? m(i, j) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
  return v;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd m(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) {
      double x = v(k++);
      if (i == j) {
        m(i, i) = x;
      } else {
        m(i, j) = m(j, i) = x / kSqrt2;
      }
    }
  return m;
}

std::string ConicProblem::dump() const {
  StandardForm sf = to_standard_form(*this);
  std::ostringstream out;
  out << "conic-problem 1\n";
  out << "variables " << num_variables << "\n";
  out << "rows " << sf.b.size() << "\n";
  out << "cones zero " << sf.cones.zero << " nonneg " << sf.cones.nonnegative << " psd "
      << sf.cones.psd.size();
  for (auto d : sf.cones.psd) out << ' ' << d;
  out << "\n";
  std::size_t nnz_c = 0;
  for (Eigen::Index j = 0; j < sf.c.size(); ++j) nnz_c += sf.c(j) != 0.0;
  out << "c " << nnz_c << "\n";
  for (Eigen::Index j = 0; j < sf.c.size(); ++j)
    if (sf.c(j) != 0.0) out << j << ' ' << format_double(sf.c(j)) << "\n";
  out << "A " << sf.a.nonZeros() << "\n";
  for (Eigen::Index col = 0; col < sf.a.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sf.a, col); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << "\n";
  std::size_t nnz_b = 0;
  for (Eigen::Index i = 0; i < sf.b.size(); ++i) nnz_b += sf.b(i) != 0.0;
  out << "b " << nnz_b << "\n";
  for (Eigen::Index i = 0; i < sf.b.size(); ++i)
    if (sf.b(i) != 0.0) out << i << ' ' << format_double(sf.b(i)) << "\n";
  return out.str();
}

}  // namespace thetanorm
