// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// `thetanorm_acceptance 4,5,12` runs a subset (criterion 12 then audits only
// the solves of the selected criteria).

#include "oracles.hpp"

#include "thetanorm/experiment.hpp"
#include "thetanorm/gwidth.hpp"
#include "thetanorm/parallel.hpp"
#include "thetanorm/recovery.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace thetanorm;

namespace {

// Pinned tolerances and budgets.
constexpr double kNormTol = 1e-4;
constexpr double kKktTol = 1e-5;
constexpr double kGroebnerSeconds = 60;
constexpr double kNormalFormSeconds = 30;
constexpr double kSearchSeconds = 7200;
constexpr double kMajority = 0.8;
constexpr int kSearchIterations = 20000;

struct Verdict {
  bool pass = false;
  std::string detail;
};

/// Independent KKT checks of every optimal solve made by criteria 4 to 11.
struct KktAudit {
  std::size_t checked = 0, failed = 0;
  double worst = 0.0;
  std::string worst_where;

  void add(const KktReport& r, const std::string& where) {
    ++checked;
    const double m = std::max({r.residuals.primal, r.residuals.dual, r.residuals.gap, r.slack_cone_violation,
                               r.dual_cone_violation, r.zero_slack});
    if (!r.passes(kKktTol)) ++failed;
    if (m > worst) {
      worst = m;
      worst_where = where;
    }
  }
  void add(const ConicProblem& p, const ConicSolution& s, const std::string& where) {
    if (s.is_optimal()) add(kkt_check(p, s), where);
  }
};

KktAudit audit;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

GroebnerBasis groebner_for(const Shape& s, const std::string& p) {
  return build_groebner(p == "rank1" ? IdealSpec::rank_one(s) : IdealSpec::for_norm(s, PNorm::parse(p)));
}

const std::vector<Shape>& groebner_shapes() {
  static const std::vector<Shape> shapes{{2, 2}, {3, 2}, {2, 2, 2}, {3, 3}, {2, 2, 2, 2}};
  return shapes;
}

/// Theta-1 norm with its KKT check recorded; nullopt if the solve was not optimal.
std::optional<double> audited_norm(const Tensor& x, PNorm p, const std::string& where) {
  const MomentLayout layout = norm_layout(x.shape(), p, 1);
  NormResult r = evaluate_theta_norm(layout, x);
  if (!r.solution.is_optimal()) return std::nullopt;
  audit.add(assemble_norm_sdp(layout, x), r.solution, where);
  return r.value;
}

/// Random shape of order 2 or 3 with every dimension in [2, 3].
Shape small_shape(std::mt19937_64& rng) {
  std::vector<int> dims(2 + rng() % 2);
  for (int& d : dims) d = 2 + static_cast<int>(rng() % 2);
  return Shape(dims);
}

Verdict groebner_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0, total = 0;
  std::string bad;
  for (const Shape& s : groebner_shapes())
    for (const char* p : {"rank1", "1", "2", "4", "inf"}) {
      ++total;
      const GroebnerBasis g = groebner_for(s, p);
      if (buchberger_check(g) && is_reduced(g))
        ++ok;
      else
        bad += " " + g.spec().name() + "@" + s.to_string();
    }
  const double secs = seconds_since(t0);
  return {ok == total && secs < kGroebnerSeconds,
          std::to_string(ok) + "/" + std::to_string(total) + " bases pass, " + fmt("%.1f", secs) + " s" + bad};
}

Verdict normal_form_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2002);
  std::size_t mismatches = 0, compared = 0;
  for (const Shape& s : groebner_shapes()) {
    const GroebnerBasis g0 = groebner_for(s, "rank1"), ginf = groebner_for(s, "inf");
    const auto gens0 = oracle::generators(g0), gensinf = oracle::generators(ginf);
    for (int i = 0; i < 1000; ++i) {
      const Monomial m = oracle::random_monomial(rng, s, 6);
      const Polynomial pm = Polynomial::monomial(m);
      const Polynomial f0 = Polynomial::monomial(normal_form_rank_one(m, s));
      const Polynomial finf = Polynomial::monomial(normal_form_infinity(m, s));
      mismatches += f0 != oracle::naive_remainder(pm, gens0);
      mismatches += f0 != reduce(pm, g0);
      mismatches += finf != oracle::naive_remainder(pm, gensinf);
      mismatches += finf != reduce(pm, ginf);
      compared += 4;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kNormalFormSeconds,
          std::to_string(mismatches) + " mismatches in " + std::to_string(compared) + " comparisons, " +
              fmt("%.1f", secs) + " s"};
}

Verdict worked_example_structure() {
  const Shape s{2, 2};
  const GroebnerBasis g = groebner_for(s, "inf");
  auto mono = [&](const std::string& t) { return parse_polynomial(t, s).leading_monomial(); };

  std::vector<Monomial> expect;
  for (const char* t : {"1", "x[1,1]", "x[1,2]", "x[2,1]", "x[2,2]", "x[1,1]*x[2,2]", "x[1,2]*x[2,2]",
                        "x[2,1]*x[2,2]"})
    expect.push_back(mono(t));
  const MonomialBasis b2 = monomial_basis(g, 2);
  bool basis_ok = b2.size() == expect.size();
  for (const auto& m : expect) basis_ok = basis_ok && b2.find(m).has_value();

  const MomentLayout l = build_moment_layout(g, 1);
  const Polynomial f = parse_polynomial("1 + 2*x[1,1] - 3*x[1,2] + 5*x[2,1] + 7*x[2,2]", s);
  const SosSystem sys = build_sos_system(l, g, f);
  auto cell = [&](const std::string& a, const std::string& c) {
    auto idx = [&](const std::string& m) { return *l.basis().find(mono(m)); };
    return PsdBlock::packed_index(idx(a), idx(c), l.dim());
  };
  using Entry = std::set<std::pair<std::size_t, Rational>>;
  std::set<std::pair<Entry, Rational>> rows;
  for (const auto& r : sys.rows) rows.insert({Entry(r.gram.begin(), r.gram.end()), r.target});

  const std::string xs[] = {"x[1,1]", "x[1,2]", "x[2,1]", "x[2,2]"};
  std::set<std::pair<Entry, Rational>> expected_rows;
  Entry trace{{cell("1", "1"), 1}};
  for (const auto& x : xs) trace.insert({cell(x, x), 1});
  expected_rows.insert({trace, 1});
  const int u[] = {2, -3, 5, 7};
  for (int i = 0; i < 4; ++i) expected_rows.insert({Entry{{cell("1", xs[i]), 2}}, u[i]});
  for (auto [a, b, c, d] : {std::array{0, 1, 2, 3}, std::array{0, 2, 1, 3}, std::array{0, 3, 1, 2}})
    expected_rows.insert({Entry{{cell(xs[a], xs[b]), 2}, {cell(xs[c], xs[d]), 2}}, 0});
  const bool rows_ok = sys.rows.size() == 8 && rows == expected_rows;
  return {basis_ok && rows_ok, std::string("basis ") + (basis_ok ? "matches" : "differs") + ", " +
                                   std::to_string(sys.rows.size()) + " sos rows " +
                                   (rows_ok ? "match" : "differ")};
}

Verdict l1_exactness() {
  std::mt19937_64 rng(2004);
  double worst = 0;
  int undecided = 0;
  for (int t = 0; t < 20; ++t) {
    const Tensor x = oracle::random_tensor(rng, small_shape(rng));
    const auto v = audited_norm(x, PNorm::finite(1), "l1 exactness");
    if (!v) {
      ++undecided;
      continue;
    }
    worst = std::max(worst, std::abs(*v - x.l1_norm()));
  }
  return {undecided == 0 && worst <= kNormTol,
          "max |theta - l1| = " + fmt("%.2e", worst) + ", undecided " + std::to_string(undecided)};
}

Verdict matrix_nuclear_norm() {
  std::mt19937_64 rng(2005);
  double worst = 0;
  int undecided = 0;
  for (int t = 0; t < 20; ++t) {
    const Shape s{2 + static_cast<int>(rng() % 3), 2 + static_cast<int>(rng() % 3)};
    const Tensor x = oracle::random_tensor(rng, s);
    const auto v = audited_norm(x, PNorm::finite(2), "matrix nuclear norm");
    if (!v) {
      ++undecided;
      continue;
    }
    worst = std::max(worst, std::abs(*v - oracle::nuclear_norm(oracle::as_matrix(x))));
  }
  return {undecided == 0 && worst <= kNormTol,
          "max |theta - sum sigma| = " + fmt("%.2e", worst) + ", undecided " + std::to_string(undecided)};
}

Verdict extreme_points() {
  std::mt19937_64 rng(2006);
  double worst2 = 0, worstinf = 0;
  int undecided = 0;
  for (int t = 0; t < 20; ++t) {
    const Shape s = small_shape(rng);
    Tensor u = random_low_rank(s, 1, TensorKind::gaussian, rng());
    u *= 1.0 / u.frobenius_norm();
    const auto v2 = audited_norm(u, PNorm::finite(2), "extreme points p=2");
    Tensor h = random_low_rank(s, 1, TensorKind::signed_entries, rng());
    h *= 1.0 / h.max_abs();
    const auto vinf = audited_norm(h, PNorm::infinity(), "extreme points p=inf");
    undecided += !v2 + !vinf;
    if (v2) worst2 = std::max(worst2, std::abs(*v2 - 1));
    if (vinf) worstinf = std::max(worstinf, std::abs(*vinf - 1));
  }
  return {undecided == 0 && worst2 <= kNormTol && worstinf <= kNormTol,
          "max |theta - 1|: p=2 " + fmt("%.2e", worst2) + ", p=inf " + fmt("%.2e", worstinf) + ", undecided " +
              std::to_string(undecided)};
}

Verdict symmetry() {
  std::mt19937_64 rng(2007);
  double worst2 = 0, worstinf = 0;
  int undecided = 0;
  for (int t = 0; t < 50; ++t) {
    const Shape s = small_shape(rng);
    const Tensor x = oracle::random_tensor(rng, s);
    const auto a = audited_norm(x, PNorm::finite(2), "symmetry p=2");
    const auto b = audited_norm(mode_transform(x, random_orthogonal_transform(s, rng())), PNorm::finite(2),
                                "symmetry p=2");
    const auto c = audited_norm(x, PNorm::infinity(), "symmetry p=inf");
    const auto d = audited_norm(mode_transform(x, random_signed_permutation(s, rng())), PNorm::infinity(),
                                "symmetry p=inf");
    if (!a || !b || !c || !d) {
      ++undecided;
      continue;
    }
    worst2 = std::max(worst2, std::abs(*a - *b) / *a);
    worstinf = std::max(worstinf, std::abs(*c - *d) / *c);
  }
  return {undecided == 0 && worst2 <= kNormTol && worstinf <= kNormTol,
          "max relative change: orthogonal p=2 " + fmt("%.2e", worst2) + ", signed permutation p=inf " +
              fmt("%.2e", worstinf) + ", undecided cases " + std::to_string(undecided)};
}

void audit_rows(const ExperimentResult& r, const std::string& where) {
  for (const auto& row : r.rows)
    if (row.kkt) audit.add(*row.kkt, where);
}

Verdict signed_search_ordering() {
  ExperimentConfig cfg;
  cfg.shape = Shape{4, 4, 4};
  cfg.rank = 3;
  cfg.kind = TensorKind::signed_entries;
  cfg.norms = {PNorm::infinity(), PNorm::finite(2)};
  cfg.mode = ExperimentMode::search;
  cfg.trials = 20;
  cfg.seed = 1;
  cfg.threads = default_thread_count();
  cfg.solver.max_iterations = kSearchIterations;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult r = run_recovery_experiment(cfg);
  const double secs = seconds_since(t0);
  audit_rows(r, "signed (4,4,4) search");

  // a missing minimum means no probed m up to N succeeded; it ranks above every m
  std::map<int, std::optional<std::size_t>> inf, two;
  for (const auto& mm : r.minimal) (mm.p.is_infinite() ? inf : two)[mm.trial] = mm.m;
  auto rank_of = [&](const std::optional<std::size_t>& m) { return m ? *m : cfg.shape.size() + 1; };
  int ordered = 0;
  std::ostringstream pairs;
  for (int t = 0; t < cfg.trials; ++t) {
    ordered += rank_of(inf[t]) <= rank_of(two[t]);
    pairs << (t ? " " : "") << (inf[t] ? std::to_string(*inf[t]) : "-") << "/"
          << (two[t] ? std::to_string(*two[t]) : "-");
  }
  return {ordered >= kMajority * cfg.trials && secs < kSearchSeconds,
          "m_inf <= m_2 in " + std::to_string(ordered) + "/" + std::to_string(cfg.trials) + " trials, " +
              fmt("%.0f", secs) + " s; minimal m (inf/2): " + pairs.str()};
}

Verdict generic_rank_one_gap() {
  ExperimentConfig cfg;
  cfg.shape = Shape{3, 3, 3};
  cfg.rank = 1;
  cfg.kind = TensorKind::gaussian;
  cfg.norms = {PNorm::infinity(), PNorm::finite(2)};
  cfg.mode = ExperimentMode::sweep;
  cfg.m_min = cfg.m_max = (cfg.shape.size() + 1) / 2;
  cfg.trials = 10;
  cfg.seed = 2;
  cfg.threads = default_thread_count();
  const ExperimentResult r = run_recovery_experiment(cfg);
  audit_rows(r, "generic (3,3,3) sweep");
  int inf_fail = 0, two_ok = 0;
  for (const auto& row : r.rows) (row.p.is_infinite() ? inf_fail += !row.success : two_ok += row.success);
  return {inf_fail >= kMajority * cfg.trials && two_ok >= kMajority * cfg.trials,
          "m = " + std::to_string(cfg.m_min) + ": p=inf fails " + std::to_string(inf_fail) + "/10, p=2 succeeds " +
              std::to_string(two_ok) + "/10"};
}

/// Coefficient of determination of the least-squares line y ~ a + b t.
double r_squared(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double mt = 0, my = 0;
  for (std::size_t i = 0; i < t.size(); ++i) mt += t[i] / n, my += y[i] / n;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  return syy == 0 ? 1.0 : sty * sty / (stt * syy);
}

Verdict width_trend() {
  std::vector<double> n, n3, mean;
  std::size_t undecided = 0;
  std::ostringstream means;
  for (int d = 2; d <= 5; ++d) {
    const WidthEstimate e = estimate_width_bound(Shape{d, d, d}, 50, 10, {}, default_thread_count());
    for (const auto& s : e.samples)
      if (s.kkt) audit.add(*s.kkt, "gaussian width " + e.shape.to_string());
    undecided += e.undecided;
    n.push_back(d);
    n3.push_back(static_cast<double>(d) * d * d);
    mean.push_back(e.mean_gamma_sq);
    means << (d > 2 ? " " : "") << fmt("%.3f", e.mean_gamma_sq);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < mean.size(); ++i) monotone = monotone && mean[i] >= mean[i - 1];
  const double r_lin = r_squared(n, mean), r_cub = r_squared(n3, mean);
  return {undecided == 0 && monotone && r_lin > r_cub,
          "mean gamma^2 for n=2..5: " + means.str() + "; R^2 linear " + fmt("%.4f", r_lin) + " vs cubic " +
              fmt("%.4f", r_cub) + ", undecided " + std::to_string(undecided)};
}

Verdict gauge_soundness() {
  const Shape s{2, 2, 2};
  const NormalConeGauge gauge(s);
  const GroebnerBasis& g = gauge.groebner();
  std::mt19937_64 rng(2011);
  int sound = 0, undecided = 0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd gi = oracle::random_vector(rng, static_cast<Eigen::Index>(gauge.sets().rest.size()));
    const GaugeResult r = gauge.evaluate(gi);
    if (!r.decided()) {
      ++undecided;
      continue;
    }
    audit.add(gauge.moment_problem(gi), r.solution, "gauge");
    auto certify = [&](double radius) {
      const SosSystem sys = build_sos_system(gauge.layout(), g, gauge.polynomial(gi, radius));
      const SosCertificate c = certify_sos(sys);
      audit.add(assemble_sos_program(sys, false), c.solution, "gauge certificate");
      return c.verdict;
    };
    const bool above = certify(r.value * (1 + 1e-3)) == SosVerdict::feasible;
    const bool below = certify(r.value * (1 - 5e-2)) != SosVerdict::feasible;
    sound += above && below;
  }
  return {sound == 20, std::to_string(sound) + "/20 gauges sound, undecided " + std::to_string(undecided)};
}

Verdict solver_health() {
  return {audit.checked > 0 && audit.failed == 0,
          std::to_string(audit.checked - audit.failed) + "/" + std::to_string(audit.checked) +
              " optimal solves pass at " + fmt("%.0e", kKktTol) + ", worst " + fmt("%.2e", audit.worst) +
              (audit.worst_where.empty() ? "" : " (" + audit.worst_where + ")")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

std::set<int> parse_selection(const char* arg) {
  std::set<int> out;
  std::stringstream in(arg);
  for (std::string item; std::getline(in, item, ',');) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "groebner bases pass Buchberger and are reduced", groebner_correctness},
      {2, "fast normal forms equal multivariate division", normal_form_equivalence},
      {3, "2x2 G_inf worked example structure", worked_example_structure},
      {4, "theta-1 of I_1 equals the l1 norm", l1_exactness},
      {5, "theta-1 of I_2 equals the matrix nuclear norm", matrix_nuclear_norm},
      {6, "rank-one extreme points have norm one", extreme_points},
      {7, "norms are invariant under the symmetry groups", symmetry},
      {8, "signed (4,4,4) rank-3: inf needs no more measurements than 2", signed_search_ordering},
      {9, "generic (3,3,3) rank-1 at m = N/2: inf fails, 2 succeeds", generic_rank_one_gap},
      {10, "gaussian width grows monotonically and linearly in n", width_trend},
      {11, "gauge values are certified from above and not from below", gauge_soundness},
      {12, "every optimal solve passes the KKT check", solver_health},
  };
  std::set<int> selected;
  if (argc > 1) selected = parse_selection(argv[1]);

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s criterion %2d: %s [%s] (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
