#include "thetanorm/solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>

namespace thetanorm {

void SolverSettings::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (!(eps_primal > 0 && eps_dual > 0 && eps_gap > 0 && eps_infeasible > 0))
    throw std::invalid_argument("solver tolerances must be positive");
  if (!(alpha > 0 && alpha < 2)) throw std::invalid_argument("alpha must lie in (0, 2)");
  if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
  if (check_interval < 1) throw std::invalid_argument("check_interval must be positive");
  if (acceleration_memory < 0) throw std::invalid_argument("acceleration_memory must be >= 0");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("PSD projection needs a square matrix");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("PSD projection needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
constexpr double kMinScale = 1e-4;
constexpr double kMaxScale = 1e4;
constexpr int kRebalanceInterval = 100;
constexpr double kRebalanceRatio = 5.0;
constexpr double kMaxRebalanceStep = 10.0;
constexpr double kMaxPrimalScale = 1e6;

// In-place projection of a packed scaled vectorization onto the PSD cone.
void project_svec_psd(Eigen::Ref<Vec> v, std::size_t dim, Eigen::MatrixXd& buffer,
                      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig) {
  const auto n = static_cast<Eigen::Index>(dim);
  if (n == 1) {
    v(0) = std::max(v(0), 0.0);
    return;
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  buffer.resize(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i, ++k) buffer(i, j) = i == j ? v(k) : v(k) * inv_sqrt2;
  eig.compute(buffer, Eigen::ComputeEigenvectors);
  const Vec& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  Eigen::Index first_pos = 0;
  while (first_pos < n && lambda(first_pos) <= 0.0) ++first_pos;
  const Eigen::Index npos = n - first_pos;
  if (npos == 0) {
    v.setZero();
    return;
  }
  if (npos == n) return;
  Eigen::MatrixXd vs = q.rightCols(npos) * lambda.tail(npos).cwiseSqrt().asDiagonal();
  buffer.noalias() = vs * vs.transpose();
  const double sqrt2 = std::sqrt(2.0);
  k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i, ++k) v(k) = i == j ? buffer(i, j) : buffer(i, j) * sqrt2;
}

// Type-II Anderson acceleration with a circular memory. Differences of
// iterates and of fixed-point residuals are stored column-wise and their Gram
// matrix is updated one column per push.
class Accelerator {
 public:
  Accelerator(Eigen::Index dim, int memory) : mem_(memory) {
    if (mem_ > 0) {
      s_.resize(dim, mem_);
      y_.resize(dim, mem_);
      gram_.resize(mem_, mem_);
    }
  }
  bool enabled() const { return mem_ > 0; }
  void reset() {
    count_ = 0;
    has_prev_ = false;
  }

  void push(const Vec& z, const Vec& residual) {
    if (has_prev_) {
      const int col = head_;
      s_.col(col) = z - prev_z_;
      y_.col(col) = residual - prev_r_;
      head_ = (head_ + 1) % mem_;
      count_ = std::min(count_ + 1, mem_);
      for (int j = 0; j < count_; ++j) {
        const double v = y_.col(j).dot(y_.col(col));
        gram_(j, col) = gram_(col, j) = v;
      }
    }
    prev_z_ = z;
    prev_r_ = residual;
    has_prev_ = true;
  }

  // z_next = fz - (S + Y) gamma with gamma = argmin ||residual - Y gamma||.
  bool extrapolate(const Vec& fz, const Vec& residual, Vec& z_next) {
    if (count_ == 0) return false;
    const Eigen::MatrixXd g = gram_.topLeftCorner(count_, count_);
    Eigen::MatrixXd reg = g;
    reg.diagonal().array() += 1e-10 * std::max(1.0, g.diagonal().maxCoeff());
    const Vec rhs = y_.leftCols(count_).transpose() * residual;
    const Vec gamma = reg.ldlt().solve(rhs);
    if (!gamma.allFinite()) return false;
    z_next = fz - s_.leftCols(count_) * gamma - y_.leftCols(count_) * gamma;
    return true;
  }

 private:
  int mem_ = 0;
  int count_ = 0;
  int head_ = 0;
  bool has_prev_ = false;
  Eigen::MatrixXd s_, y_, gram_;
  Vec prev_z_, prev_r_;
};

}  // namespace

struct ConicSolver::Workspace {
  SolverSettings settings;
  StandardForm sf;
  Eigen::Index n = 0, m = 0, l = 0;

  SpMat a_hat;
  Vec b_hat, c_hat;
  Vec row_scale, col_scale;  // D and E
  double b_scale = 1.0, c_scale = 1.0;

  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  Vec g;        // K^{-1} h
  double h_dot_g = 0.0;

  Vec w_buf, r_buf, p_buf, ur_buf;
  Eigen::MatrixXd eig_buffer;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;

  explicit Workspace(const ConicProblem& problem, SolverSettings s)
      : settings(s), sf(to_standard_form(problem)) {
    settings.validate();
    n = sf.a.cols();
    m = sf.a.rows();
    l = n + m + 1;
    equilibrate();
    factor();
    w_buf.resize(l);
    r_buf.resize(n + m);
    p_buf.resize(n + m);
    ur_buf.resize(l);
  }

  void equilibrate() {
    row_scale = Vec::Ones(m);
    col_scale = Vec::Ones(n);
    a_hat = sf.a;
    for (int pass = 0; pass < settings.equilibration_passes; ++pass) {
      Vec rn = Vec::Zero(m), cn = Vec::Zero(n);
      for (Eigen::Index col = 0; col < a_hat.outerSize(); ++col)
        for (SpMat::InnerIterator it(a_hat, col); it; ++it) {
          double v = std::abs(it.value());
          rn(it.row()) = std::max(rn(it.row()), v);
          cn(col) = std::max(cn(col), v);
        }
      // rows of one PSD block share a scale so the cone is preserved
      Eigen::Index r = static_cast<Eigen::Index>(sf.cones.zero + sf.cones.nonnegative);
      for (std::size_t d : sf.cones.psd) {
        auto len = static_cast<Eigen::Index>(d * (d + 1) / 2);
        double mx = rn.segment(r, len).maxCoeff();
        rn.segment(r, len).setConstant(mx);
        r += len;
      }
      Vec dr(m), dc(n);
      for (Eigen::Index i = 0; i < m; ++i)
        dr(i) = rn(i) > 0 ? 1.0 / std::sqrt(std::clamp(rn(i), kMinScale, kMaxScale)) : 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        dc(j) = cn(j) > 0 ? 1.0 / std::sqrt(std::clamp(cn(j), kMinScale, kMaxScale)) : 1.0;
      a_hat = dr.asDiagonal() * a_hat * dc.asDiagonal();
      row_scale.array() *= dr.array();
      col_scale.array() *= dc.array();
    }
    b_hat = row_scale.asDiagonal() * sf.b;
    c_hat = col_scale.asDiagonal() * sf.c;
    double nb = b_hat.norm(), nc = c_hat.norm();
    b_scale = nb > 1e-8 ? 1.0 / nb : 1.0;
    c_scale = nc > 1e-8 ? 1.0 / nc : 1.0;
    b_hat *= b_scale;
    c_hat *= c_scale;
    a_hat.makeCompressed();
  }

  void factor() {
    // quasi-definite KKT [[rho I, A'], [A, -I]], lower triangle
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(n + m + a_hat.nonZeros()));
    for (Eigen::Index j = 0; j < n; ++j) t.emplace_back(j, j, settings.rho);
    for (Eigen::Index i = 0; i < m; ++i) t.emplace_back(n + i, n + i, -1.0);
    for (Eigen::Index col = 0; col < a_hat.outerSize(); ++col)
      for (SpMat::InnerIterator it(a_hat, col); it; ++it) t.emplace_back(n + it.row(), col, it.value());
    SpMat kkt(n + m, n + m);
    kkt.setFromTriplets(t.begin(), t.end());
    ldlt.compute(kkt);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("KKT factorization failed");
    update_rhs();
  }

  // g = K^{-1} h depends on b and c but not on the factorization.
  void update_rhs() {
    Vec h(n + m);
    h << c_hat, b_hat;
    g = solve_k(h);
    h_dot_g = h.dot(g);
  }

  // Solves [[rho I, A'], [-A, I]] p = r.
  Vec solve_k(const Vec& r) const {
    Vec rhs = r;
    rhs.tail(m) = -rhs.tail(m);
    return ldlt.solve(rhs);
  }

  void project_dual_cone(Eigen::Ref<Vec> y) {
    auto z = static_cast<Eigen::Index>(sf.cones.zero);
    auto nl = static_cast<Eigen::Index>(sf.cones.nonnegative);
    // dual of the zero cone is free
    y.segment(z, nl) = y.segment(z, nl).cwiseMax(0.0);
    Eigen::Index r = z + nl;
    for (std::size_t d : sf.cones.psd) {
      auto len = static_cast<Eigen::Index>(d * (d + 1) / 2);
      project_svec_psd(y.segment(r, len), d, eig_buffer, eig);
      r += len;
    }
  }

  // One splitting step on the stacked iterate z = (u, v); writes T(z).
  void step(const Vec& z, Vec& out) {
    const double alpha = settings.alpha;
    auto u = z.head(l);
    auto v = z.tail(l);
    w_buf = u + v;
    r_buf.head(n) = settings.rho * w_buf.head(n);
    r_buf.tail(m) = w_buf.segment(n, m);
    r_buf.tail(m) = -r_buf.tail(m);
    p_buf = ldlt.solve(r_buf);
    const double tau =
        (w_buf(l - 1) + c_hat.dot(p_buf.head(n)) + b_hat.dot(p_buf.tail(m))) / (1.0 + h_dot_g);
    ur_buf.head(n + m) = alpha * (p_buf - g * tau) + (1.0 - alpha) * u.head(n + m);
    ur_buf(l - 1) = alpha * tau + (1.0 - alpha) * u(l - 1);
    auto u_out = out.head(l);
    auto v_out = out.tail(l);
    u_out = ur_buf - v;
    project_dual_cone(u_out.segment(n, m));
    u_out(l - 1) = std::max(u_out(l - 1), 0.0);
    v_out = v - ur_buf + u_out;
  }

  struct Unscaled {
    Vec x, s, y;
  };

  template <class U, class V>
  Unscaled unscale(const U& u, const V& v, double tau) const {
    Unscaled out;
    out.x = col_scale.cwiseProduct(u.head(n)) / (tau * b_scale);
    out.s = v.segment(n, m).cwiseQuotient(row_scale) / (tau * b_scale);
    out.y = row_scale.cwiseProduct(u.segment(n, m)) / (tau * c_scale);
    return out;
  }

  Residuals residuals(const Unscaled& z, double& objective) const {
    Residuals res;
    res.primal = (sf.a * z.x + z.s - sf.b).norm() / (1.0 + sf.b.norm());
    res.dual = (sf.a.transpose() * z.y + sf.c).norm() / (1.0 + sf.c.norm());
    double cx = sf.c.dot(z.x), by = sf.b.dot(z.y);
    res.gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
    objective = cx;
    return res;
  }

  ConicSolution package(const Unscaled& z, SolveStatus status, const Residuals& res,
                        double objective, int iterations) const {
    ConicSolution sol;
    sol.status = status;
    sol.x = z.x;
    sol.objective = objective;
    sol.residuals = res;
    sol.iterations = iterations;
    auto zc = static_cast<Eigen::Index>(sf.cones.zero);
    auto nl = static_cast<Eigen::Index>(sf.cones.nonnegative);
    sol.slack_zero = z.s.head(zc);
    sol.dual_zero = z.y.head(zc);
    sol.slack_nonnegative = z.s.segment(zc, nl);
    sol.dual_nonnegative = z.y.segment(zc, nl);
    Eigen::Index r = zc + nl;
    for (std::size_t d : sf.cones.psd) {
      auto len = static_cast<Eigen::Index>(d * (d + 1) / 2);
      sol.slack_psd.push_back(smat(z.s.segment(r, len), d));
      sol.dual_psd.push_back(smat(z.y.segment(r, len), d));
      r += len;
    }
    return sol;
  }

  // Rescales b by sigma, which maps the iterate's x and s by sigma as well.
  void rescale_primal(double sigma, Vec& z) {
    b_hat *= sigma;
    b_scale *= sigma;
    update_rhs();
    z.head(n) *= sigma;
    z.segment(l + n, m) *= sigma;
  }

  ConicSolution run() {
    const auto start = std::chrono::steady_clock::now();
    Vec z = Vec::Zero(2 * l);
    z(l - 1) = 1.0;      // tau
    z(2 * l - 1) = 1.0;  // kappa
    Vec fz(2 * l), residual(2 * l), plain(2 * l);
    Accelerator accel(2 * l, settings.acceleration_memory);
    double last_norm = std::numeric_limits<double>::infinity();
    bool extrapolated = false;
    int last_rebalance = 0;

    ConicSolution best;
    double best_score = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= settings.max_iterations; ++it) {
      step(z, fz);
      residual = fz - z;
      const double rnorm = residual.norm();
      if (extrapolated && rnorm > last_norm) {
        // the extrapolated point is worse than the plain step it replaced
        z = plain;
        accel.reset();
        extrapolated = false;
        step(z, fz);
        residual = fz - z;
        last_norm = residual.norm();
      } else {
        last_norm = rnorm;
      }
      extrapolated = false;
      plain = fz;
      if (accel.enabled()) {
        accel.push(z, residual);
        if (accel.extrapolate(fz, residual, z)) {
          extrapolated = true;
        } else {
          z = fz;
        }
      } else {
        z.swap(fz);
      }

      if (it % settings.check_interval != 0 && it != settings.max_iterations) continue;
      // evaluate the plain iterate, which always lies in the embedding's cones
      const Vec& cur = plain;
      auto u = cur.head(l);
      auto v = cur.tail(l);
      const double tau = u(l - 1), kappa = v(l - 1);
      if (tau > 1e-12 * std::max(1.0, kappa)) {
        Unscaled sol = unscale(u, v, tau);
        double objective = 0.0;
        Residuals res = residuals(sol, objective);
        if (res.primal <= settings.eps_primal && res.dual <= settings.eps_dual && res.gap <= settings.eps_gap) {
          auto out = package(sol, SolveStatus::optimal, res, objective, it);
          out.solve_time_ms = elapsed_ms(start);
          return out;
        }
        const double score = std::max(
            {res.primal / settings.eps_primal, res.dual / settings.eps_dual, res.gap / settings.eps_gap});
        if (score < best_score) {
          best_score = score;
          best = package(sol, SolveStatus::max_iterations, res, objective, it);
        }
        // keep primal and dual progress balanced; b's scale is free
        if (settings.adaptive_scale && it - last_rebalance >= kRebalanceInterval) {
          const double ratio = (res.primal / settings.eps_primal) / std::max(res.dual / settings.eps_dual, 1e-300);
          if (ratio > kRebalanceRatio || ratio < 1.0 / kRebalanceRatio) {
            const double sigma = std::clamp(std::sqrt(ratio), 1.0 / kMaxRebalanceStep, kMaxRebalanceStep);
            if (b_scale * sigma < kMaxPrimalScale && b_scale * sigma > 1.0 / kMaxPrimalScale) {
              z = plain;
              rescale_primal(sigma, z);
              plain = z;
              accel.reset();
              extrapolated = false;
              last_rebalance = it;
            }
          }
        }
      }
      if (auto status = certificate(u, v)) {
        auto out = package(unscale(u, v, 1.0), *status, {}, 0.0, it);
        out.solve_time_ms = elapsed_ms(start);
        return out;
      }
    }
    if (best.x.size() == 0)
      best = package(unscale(plain.head(l), plain.tail(l), 1.0), SolveStatus::max_iterations, {}, 0.0, 0);
    best.status = SolveStatus::max_iterations;
    best.iterations = settings.max_iterations;
    best.solve_time_ms = elapsed_ms(start);
    return best;
  }

  template <class U, class V>
  std::optional<SolveStatus> certificate(const U& u, const V& v) const {
    // primal infeasibility: y in K*, A'y = 0, b'y < 0
    Vec y = row_scale.cwiseProduct(u.segment(n, m));
    const double by = sf.b.dot(y);
    if (by < 0 && (sf.a.transpose() * y).norm() / -by <= settings.eps_infeasible)
      return SolveStatus::infeasible;
    // unboundedness: Ax + s = 0, s in K, c'x < 0
    Vec x = col_scale.cwiseProduct(u.head(n));
    const double cx = sf.c.dot(x);
    if (cx < 0) {
      Vec s = v.segment(n, m).cwiseQuotient(row_scale);
      if ((sf.a * x + s).norm() / -cx <= settings.eps_infeasible) return SolveStatus::unbounded;
    }
    return std::nullopt;
  }

  static double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

ConicSolver::ConicSolver(const ConicProblem& problem, SolverSettings settings)
    : work_(std::make_unique<Workspace>(problem, settings)) {}
ConicSolver::~ConicSolver() = default;
ConicSolver::ConicSolver(ConicSolver&&) noexcept = default;
ConicSolver& ConicSolver::operator=(ConicSolver&&) noexcept = default;

ConicSolution ConicSolver::solve() { return work_->run(); }

ConicSolution solve(const ConicProblem& problem, const SolverSettings& settings) {
  return ConicSolver(problem, settings).solve();
}

bool KktReport::passes(double tol) const {
  return residuals.primal <= tol && residuals.dual <= tol && residuals.gap <= tol &&
         slack_cone_violation <= tol && dual_cone_violation <= tol && zero_slack <= tol;
}

KktReport kkt_check(const ConicProblem& problem, const ConicSolution& sol) {
  problem.validate();
  KktReport report;
  const std::size_t nv = problem.num_variables;
  std::span<const double> x(sol.x.data(), static_cast<std::size_t>(sol.x.size()));
  if (x.size() != nv) throw std::invalid_argument("solution does not match problem size");

  // primal: || expr(x) - s ||, dual: || c - sum_i y_i grad expr_i ||, gap: c'x - sum_i y_i expr_i(0)
  double primal_sq = 0.0, b_sq = 0.0, dual_obj = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv));
  auto row = [&](const AffineExpr& e, double slack, double dual, double weight) {
    double r = e.evaluate(x) - slack;
    primal_sq += weight * r * r;
    b_sq += weight * e.constant * e.constant;
    dual_obj += weight * dual * e.constant;
    for (const auto& t : e.terms) grad(static_cast<Eigen::Index>(t.var)) += weight * dual * t.coefficient;
  };
  for (std::size_t i = 0; i < problem.zero.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    row(problem.zero[i], sol.slack_zero(k), sol.dual_zero(k), 1.0);
    report.zero_slack = std::max(report.zero_slack, std::abs(sol.slack_zero(k)));
  }
  for (std::size_t i = 0; i < problem.nonnegative.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    row(problem.nonnegative[i], sol.slack_nonnegative(k), sol.dual_nonnegative(k), 1.0);
    report.slack_cone_violation = std::max(report.slack_cone_violation, -sol.slack_nonnegative(k));
    report.dual_cone_violation = std::max(report.dual_cone_violation, -sol.dual_nonnegative(k));
  }
  for (std::size_t b = 0; b < problem.psd.size(); ++b) {
    const PsdBlock& blk = problem.psd[b];
    const Eigen::MatrixXd& s = sol.slack_psd[b];
    const Eigen::MatrixXd& y = sol.dual_psd[b];
    for (std::size_t j = 0; j < blk.dim; ++j)
      for (std::size_t i = j; i < blk.dim; ++i) {
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        // trace inner product counts off-diagonal cells twice
        row(blk.at(i, j), s(ii, jj), y(ii, jj), i == j ? 1.0 : 2.0);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly), ey(y, Eigen::EigenvaluesOnly);
    report.slack_cone_violation = std::max(report.slack_cone_violation, -es.eigenvalues().minCoeff());
    report.dual_cone_violation = std::max(report.dual_cone_violation, -ey.eigenvalues().minCoeff());
  }
  report.residuals.primal = std::sqrt(primal_sq) / (1.0 + std::sqrt(b_sq));
  report.residuals.dual = (problem.objective - grad).norm() / (1.0 + problem.objective.norm());
  const double cx = problem.objective.dot(sol.x);
  // s = b - Ax with b = expr(0), so the dual objective is -sum_i y_i expr_i(0)
  report.residuals.gap = std::abs(cx + dual_obj) / (1.0 + std::abs(cx) + std::abs(dual_obj));
  return report;
}

}  // namespace thetanorm
