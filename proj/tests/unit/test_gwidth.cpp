#include "oracles.hpp"

#include "thetanorm/gwidth.hpp"
#include "thetanorm/recovery.hpp"

#include <doctest.h>

#include <set>

using namespace thetanorm;

TEST_SUITE("gwidth") {
  TEST_CASE("index_sets examples") {
    ConeIndexSets s = index_sets(Shape{2, 2, 2});
    CHECK(s.anchor == MultiIndex{1, 1, 1});
    CHECK(std::set<MultiIndex>(s.zero_set.begin(), s.zero_set.end()) ==
          std::set<MultiIndex>{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}});
    CHECK(s.rest.size() == 4);
    CHECK(index_sets(Shape{4, 4, 4}).zero_set.size() == 9);
    ConeIndexSets v = index_sets(Shape{2});
    CHECK(v.zero_set == std::vector<MultiIndex>{MultiIndex{2}});
    CHECK(v.rest.empty());
  }

  TEST_CASE("property: index sets partition the indices") {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 50; ++t) {
      const Shape s = oracle::random_shape(rng, 4, 5, 400);
      ConeIndexSets c = index_sets(s);
      std::size_t expect_zero = 0;
      for (int d : s.dims()) expect_zero += static_cast<std::size_t>(d - 1);
      CHECK(c.zero_set.size() == expect_zero);
      CHECK(c.rest.size() == s.size() - 1 - expect_zero);
      std::set<MultiIndex> all(c.zero_set.begin(), c.zero_set.end());
      all.insert(c.rest.begin(), c.rest.end());
      all.insert(c.anchor);
      CHECK(all.size() == s.size());
    }
  }

  TEST_CASE("gauge examples") {
    const Shape s{2, 2, 2};
    NormalConeGauge gauge(s);
    const Eigen::Index n = static_cast<Eigen::Index>(gauge.sets().rest.size());
    GaugeResult zero = gauge.evaluate(Eigen::VectorXd::Zero(n));
    REQUIRE(zero.decided());
    CHECK(std::abs(zero.value) <= 1e-5);
    for (Eigen::Index b = 0; b < n; ++b)
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(b) = sign;
        GaugeResult r = gauge.evaluate(e);
        REQUIRE(r.decided());
        CHECK(r.value <= 1 + 1e-4);
      }
    std::mt19937_64 rng(52);
    for (int t = 0; t < 3; ++t) {
      const Eigen::VectorXd g = oracle::random_vector(rng, n);
      const double one = gauge_NI(g, s), two = gauge_NI(2 * g, s);
      CHECK(std::abs(two - 2 * one) <= 1e-4 * (2 * one));
    }
    CHECK_THROWS_AS(gauge.evaluate(Eigen::VectorXd::Zero(n + 1)), std::invalid_argument);
  }

  TEST_CASE("gauge values certify and the Gram dual is a witness") {
    const Shape s{2, 2, 2};
    NormalConeGauge gauge(s);
    std::mt19937_64 rng(53);
    for (int t = 0; t < 4; ++t) {
      const Eigen::VectorXd g = oracle::random_vector(rng, static_cast<Eigen::Index>(gauge.sets().rest.size()));
      GaugeResult r = gauge.evaluate(g);
      REQUIRE(r.decided());
      CHECK(sos_residual(gauge.system(g), r.gram, r.value) <= 1e-4);
      SosCertificate above = certify_sos(gauge.polynomial(g, r.value * (1 + 1e-3)), s, PNorm::finite(2), 1);
      CHECK(above.verdict == SosVerdict::feasible);
      SosCertificate below = certify_sos(gauge.polynomial(g, r.value * (1 - 5e-2)), s, PNorm::finite(2), 1);
      CHECK(below.verdict != SosVerdict::feasible);
    }
  }

  TEST_CASE("normal-cone elements vanish on I0") {
    for (const Shape& s : {Shape{2, 2, 2}, Shape{3, 2}}) {
      ConeIndexSets c = index_sets(s);
      const Variable a0 = variable_of(s, c.anchor);
      for (const auto& b : c.zero_set) {
        Polynomial f{Rational(1)};
        f.add_term(Monomial::variable(a0), 1);
        f.add_term(Monomial::variable(variable_of(s, b)), Rational(1, 2));
        CHECK(certify_sos(f, s, PNorm::finite(2), 1).verdict == SosVerdict::infeasible);
      }
      Polynomial f{Rational(1)};
      f.add_term(Monomial::variable(a0), 1);
      CHECK(certify_sos(f, s, PNorm::finite(2), 1).verdict == SosVerdict::feasible);
      CHECK(theta_norm(Tensor::basis(s, c.anchor), PNorm::finite(2), 1) == doctest::Approx(1.0).epsilon(1e-4));
    }
  }

  TEST_CASE("width estimates are reproducible and bounded below") {
    const Shape s{2, 2, 2};
    WidthEstimate a = estimate_width_bound(s, 1, 3);
    WidthEstimate b = estimate_width_bound(s, 1, 3, {}, 2);
    CHECK(a.samples[0].gamma_sq == b.samples[0].gamma_sq);
    CHECK(a.stderr_gamma_sq == 0.0);

    WidthEstimate e = estimate_width_bound(s, 6, 4, {}, 2);
    CHECK(e.zero_set_size == 3);
    CHECK(e.bound_mean >= 4.0);
    double mean = 0;
    for (const auto& x : e.samples) {
      CHECK(x.bound == doctest::Approx(4.0 + x.gamma_sq));
      mean += x.gamma_sq / 6;
    }
    CHECK(e.mean_gamma_sq == doctest::Approx(mean));
    CHECK(estimate_width_bound(s, 6, 4, {}, 1).mean_gamma_sq == e.mean_gamma_sq);
    CHECK_THROWS_AS(estimate_width_bound(s, 0, 1), std::invalid_argument);

    Table t = width_table({e});
    CHECK(t.header == std::vector<std::string>{"shape", "sample", "gamma_sq", "bound"});
    CHECK(t.rows.size() == 8);
    CHECK(t.rows[6][1] == "mean");
    CHECK(t.rows[7][1] == "stderr");
    CHECK(t.rows[0][0] == "2x2x2");
  }
}
