#include "thetanorm/gwidth.hpp"

#include "thetanorm/parallel.hpp"
#include "thetanorm/random.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace thetanorm {

ConeIndexSets index_sets(const Shape& shape) {
  ConeIndexSets s;
  s.anchor = MultiIndex(std::vector<int>(static_cast<std::size_t>(shape.order()), 1));
  for (std::size_t a = 0; a < shape.size(); ++a) {
    MultiIndex idx = shape.index(a);
    int differing = 0;
    for (int i = 0; i < idx.order(); ++i) differing += idx[i] != 1;
    if (differing == 0) continue;
    (differing == 1 ? s.zero_set : s.rest).push_back(std::move(idx));
  }
  return s;
}

NormalConeGauge::NormalConeGauge(const Shape& shape, SolverSettings settings)
    : shape_(shape),
      settings_(settings),
      sets_(index_sets(shape)),
      groebner_(build_groebner(IdealSpec::for_norm(shape, PNorm::finite(2)))),
      layout_(build_moment_layout(groebner_, 1)) {}

Polynomial NormalConeGauge::polynomial(const Eigen::VectorXd& g_i, double r) const {
  if (static_cast<std::size_t>(g_i.size()) != sets_.rest.size())
    throw std::invalid_argument("g_I has " + std::to_string(g_i.size()) + " entries, I has " +
                                std::to_string(sets_.rest.size()));
  Polynomial f{Rational(r)};
  f.add_term(Monomial::variable(variable_of(shape_, sets_.anchor)), Rational(r));
  for (std::size_t b = 0; b < sets_.rest.size(); ++b)
    f.add_term(Monomial::variable(variable_of(shape_, sets_.rest[b])), Rational(g_i(static_cast<Eigen::Index>(b))));
  return f;
}

SosSystem NormalConeGauge::system(const Eigen::VectorXd& g_i) const {
  Polynomial target = polynomial(g_i, 0.0);
  Polynomial param{Rational(1)};
  param.add_term(Monomial::variable(variable_of(shape_, sets_.anchor)), Rational(1));
  return build_sos_system(layout_, groebner_, target, param);
}

namespace {

// Every Gram form r(1 + x_a0) + <g_I, x_I> vanishes at the variety point -e_a0,
// so every feasible Gram matrix annihilates v = x^B(-e_a0) = e_0 - e_p, where p
// is the basis position of x_a0. Rows of this matrix are an orthonormal basis
// of v's complement: (e_0 + e_p) / sqrt 2 first, then the remaining unit vectors.
Eigen::MatrixXd face_basis(std::size_t dim, std::size_t p) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim - 1), static_cast<Eigen::Index>(dim));
  w(0, 0) = w(0, static_cast<Eigen::Index>(p)) = 1.0 / std::sqrt(2.0);
  Eigen::Index row = 1;
  for (std::size_t i = 1; i < dim; ++i)
    if (i != p) w(row++, static_cast<Eigen::Index>(i)) = 1.0;
  return w;
}

}  // namespace

ConicProblem NormalConeGauge::moment_problem(const Eigen::VectorXd& g_i) const {
  if (static_cast<std::size_t>(g_i.size()) != sets_.rest.size())
    throw std::invalid_argument("g_I has " + std::to_string(g_i.size()) + " entries, I has " +
                                std::to_string(sets_.rest.size()));
  ConicProblem prob(layout_.slot_count());
  for (std::size_t b = 0; b < sets_.rest.size(); ++b)
    prob.objective(static_cast<Eigen::Index>(layout_.variable_slot(shape_.offset(sets_.rest[b])))) =
        g_i(static_cast<Eigen::Index>(b));
  AffineExpr budget(1.0);
  budget.add(layout_.constant_slot(), -1.0);
  budget.add(layout_.variable_slot(shape_.offset(sets_.anchor)), -1.0);
  prob.nonnegative.push_back(std::move(budget));

  // W M(y) W^T with W = face_basis: the Gram side restricted to its minimal
  // face, which keeps both sides strictly feasible
  const PsdBlock full = layout_.psd_block();
  const std::size_t n = full.dim;
  const std::size_t p = anchor_position();
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<std::size_t> rest;  // original index of reduced rows 1..n-2
  for (std::size_t i = 1; i < n; ++i)
    if (i != p) rest.push_back(i);
  PsdBlock blk(n - 1);
  auto accumulate = [](AffineExpr& out, const AffineExpr& in, double scale) {
    out.constant += scale * in.constant;
    for (const auto& t : in.terms) out.add(t.var, scale * t.coefficient);
  };
  AffineExpr& ww = blk.at(0, 0);
  accumulate(ww, full.at(0, 0), 0.5);
  accumulate(ww, full.at(p, 0), 1.0);
  accumulate(ww, full.at(p, p), 0.5);
  for (std::size_t r = 0; r < rest.size(); ++r) {
    AffineExpr& e = blk.at(r + 1, 0);
    accumulate(e, full.at(rest[r], 0), h);
    accumulate(e, full.at(rest[r], p), h);
    for (std::size_t c = 0; c <= r; ++c) blk.at(r + 1, c + 1) = full.at(rest[r], rest[c]);
  }
  for (auto& e : blk.entries) e.compress();
  prob.psd.push_back(std::move(blk));
  return prob;
}

GaugeResult NormalConeGauge::evaluate(const Eigen::VectorXd& g_i) const {
  GaugeResult out;
  out.solution = solve(moment_problem(g_i), settings_);
  out.value = -out.solution.objective;
  if (!out.solution.dual_psd.empty()) {
    const Eigen::MatrixXd w = face_basis(layout_.dim(), anchor_position());
    out.gram = w.transpose() * out.solution.dual_psd.front() * w;
  }
  return out;
}

std::size_t NormalConeGauge::anchor_position() const {
  return *layout_.basis().find(Monomial::variable(variable_of(shape_, sets_.anchor)));
}

double gauge_NI(const Eigen::VectorXd& g_i, const Shape& shape, const SolverSettings& settings) {
  GaugeResult r = NormalConeGauge(shape, settings).evaluate(g_i);
  if (!r.decided()) throw SolverFailure("gauge solve ended with status " + to_string(r.solution.status), r.solution);
  return r.value;
}

WidthEstimate estimate_width_bound(const Shape& shape, int samples, std::uint64_t seed,
                                   const SolverSettings& settings, int threads) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  NormalConeGauge gauge(shape, settings);
  WidthEstimate est;
  est.shape = shape;
  est.zero_set_size = gauge.sets().zero_set.size();
  est.samples.resize(static_cast<std::size_t>(samples));
  const auto dim = static_cast<Eigen::Index>(gauge.sets().rest.size());
  parallel_for(est.samples.size(), threads, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(seed, 0, i));
    std::normal_distribution<double> normal;
    Eigen::VectorXd g(dim);
    for (Eigen::Index j = 0; j < dim; ++j) g(j) = normal(rng);
    GaugeResult r = gauge.evaluate(g);
    WidthSample& s = est.samples[i];
    s.index = i;
    s.gamma_sq = r.value * r.value;
    s.bound = static_cast<double>(est.zero_set_size) + 1.0 + s.gamma_sq;
    s.status = r.solution.status;
    if (r.decided()) s.kkt = kkt_check(gauge.moment_problem(g), r.solution);
  });
  double sum = 0.0;
  for (const auto& s : est.samples) {
    sum += s.gamma_sq;
    est.undecided += s.status != SolveStatus::optimal;
  }
  const double n = static_cast<double>(samples);
  est.mean_gamma_sq = sum / n;
  double ss = 0.0;
  for (const auto& s : est.samples) ss += (s.gamma_sq - est.mean_gamma_sq) * (s.gamma_sq - est.mean_gamma_sq);
  est.stderr_gamma_sq = samples > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  est.bound_mean = static_cast<double>(est.zero_set_size) + 1.0 + est.mean_gamma_sq;
  return est;
}

Table width_table(const std::vector<WidthEstimate>& estimates) {
  Table t;
  t.header = {"shape", "sample", "gamma_sq", "bound"};
  for (const auto& e : estimates) {
    const std::string shape = e.shape.to_string();
    for (const auto& s : e.samples)
      t.add_row({shape, std::to_string(s.index), format_number(s.gamma_sq), format_number(s.bound)});
    t.add_row({shape, "mean", format_number(e.mean_gamma_sq), format_number(e.bound_mean)});
    t.add_row({shape, "stderr", format_number(e.stderr_gamma_sq), format_number(e.stderr_gamma_sq)});
  }
  return t;
}

}  // namespace thetanorm
