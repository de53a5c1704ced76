#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "wavefront/charroots.hpp"

using namespace wavefront;

TEST_CASE("zero-state roots") {
  auto [l, m] = zero_state_roots(ModelParams::from_hc(0.0, 1.0 / std::sqrt(0.24)));
  CHECK(l == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(m == doctest::Approx(5.0 / 2.0).epsilon(1e-14));
  auto [l2, m2] = zero_state_roots(ModelParams::from_hc(0.0, 2.0));
  CHECK(l2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(l2 * m2 == doctest::Approx(1.0 / 0.25));
}

TEST_CASE("critical delays and curves") {
  CHECK(std::abs(h1_constant() - 0.5607711602124871) < 1e-13);
  CHECK(std::abs(h0_constant() - 0.5336619208260838) < 1e-13);
  CHECK(std::abs(eps_star(h1_constant()) - 0.25) < 1e-10);
  CHECK(std::abs(eps_sharp(h0_constant()) - 0.25) < 1e-10);
  CHECK(eps_star(0.5) == doctest::Approx(0.1581615422220488).epsilon(1e-12));
  CHECK(c_star(0.5) == doctest::Approx(2.514487925252848).epsilon(1e-12));
  CHECK(eps_star(0.56) == doctest::Approx(0.24875506698821284).epsilon(1e-12));
  CHECK(c_star(0.56) == doctest::Approx(2.0049984078621828).epsilon(1e-12));
  CHECK(eps_sharp(0.45) == doctest::Approx(0.12196704921318821).epsilon(1e-12));
  CHECK(std::isinf(c_star(0.3)));
  CHECK(std::isinf(c_sharp(0.3)));
  CHECK(c_sharp(0.55) == 2.0);
}

TEST_CASE("eps_star monotone in h") {
  double prev = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double h = std::exp(-1.0) + 1e-6 +
                     (h1_constant() - std::exp(-1.0) - 2e-6) * i / 40.0;
    const double e = eps_star(h);
    CHECK(e > prev);
    prev = e;
  }
  CHECK(prev <= 0.25 + 1e-12);
}

TEST_CASE("negative roots: frozen values and residuals") {
  {
    auto r = negative_roots(ModelParams::from_hc(0.56, 2.0));
    REQUIRE(r.has_value());
    CHECK(r->first == doctest::Approx(-2.61153735168673).epsilon(1e-12));
    CHECK(r->second == doctest::Approx(-2.327298516796817).epsilon(1e-12));
  }
  {
    auto r = negative_roots(ModelParams::from_hc(0.3, 2.5));
    REQUIRE(r.has_value());
    CHECK(r->first == doctest::Approx(-11.7289205).epsilon(1e-6));
    CHECK(r->second == doctest::Approx(-1.20306972).epsilon(1e-6));
  }
  CHECK(!negative_roots(ModelParams::from_hc(0.6, 2.0)).has_value());
  {
    // h = 0: lambda1 = -inf sentinel, lambda2 from the quadratic.
    auto r = negative_roots(ModelParams::from_hc(0.0, 1.0 / std::sqrt(0.24)));
    REQUIRE(r.has_value());
    CHECK(std::isinf(r->first));
    CHECK(r->first < 0);
    CHECK(r->second == doctest::Approx(-5.0 / 6.0).epsilon(1e-14));
  }
  // psi residuals vanish at reported roots.
  for (auto [h, c] : std::vector<std::pair<double, double>>{
           {0.56, 2.0}, {0.3, 2.5}, {std::exp(-1.0), 2.0}, {0.2, 3.0}}) {
    const ModelParams p = ModelParams::from_hc(h, c);
    auto r = negative_roots(p);
    REQUIRE(r.has_value());
    CHECK(std::abs(psi(r->first, p.epsilon, p.h)) < 1e-11);
    CHECK(std::abs(psi(r->second, p.epsilon, p.h)) < 1e-11);
    CHECK(r->first <= r->second);
    CHECK(r->second < 0.0);
  }
}

TEST_CASE("positive root") {
  const ModelParams p = ModelParams::from_hc(0.0, 1.0 / std::sqrt(0.24));
  CHECK(positive_root(p) == doctest::Approx(5.0).epsilon(1e-13));
  for (auto [h, c] : std::vector<std::pair<double, double>>{
           {0.3, 2.0}, {0.56, 2.5}, {0.7, 4.0}}) {
    const ModelParams q = ModelParams::from_hc(h, c);
    const double z = positive_root(q);
    CHECK(z > 0.0);
    CHECK(std::abs(psi(z, q.epsilon, q.h)) < 1e-10);
  }
}

TEST_CASE("presence of negative roots vs grid-scan of psi maximum") {
  // Independent oracle: roots exist iff the interior maximum of psi on
  // (-inf, 0) reaches the axis.  Configurations within 1e-4 of tangency are
  // skipped (scan resolution).
  for (double h : {0.1, 0.3, std::exp(-1.0), 0.45, 0.5, 0.56, 0.6, 0.7}) {
    for (double c : {2.0, 2.2, 2.5, 3.0, 4.0}) {
      const ModelParams p = ModelParams::from_hc(h, c);
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 300000; ++i) {
        const double z = -30.0 * i / 300000.0;
        best = std::max(best, psi(z, p.epsilon, p.h));
      }
      if (std::abs(best) < 1e-4) continue;
      CHECK(negative_roots(p).has_value() == (best >= 0.0));
    }
  }
}

TEST_CASE("classify: existence region and regimes") {
  {
    const RegimeReport r = classify(ModelParams::from_hc(0.0, 1.0 / std::sqrt(0.24)));
    CHECK(r.existence == Existence::EXISTS);
    CHECK(r.minus_regime == MinusRegime::TWO_TERM);
    CHECK(r.plus_regime == PlusRegime::CLEAN);
    CHECK(!r.critical_c2);
    CHECK(!r.critical_speed);
  }
  CHECK(classify(ModelParams::from_hc(0.6, 2.0)).existence ==
        Existence::NOT_EXISTS);
  CHECK(classify(ModelParams::from_hc(0.5, 2.6)).existence ==
        Existence::NOT_EXISTS);
  CHECK(classify(ModelParams::from_hc(0.5, 2.5)).existence ==
        Existence::EXISTS);
  {
    const RegimeReport r = classify(ModelParams::from_hc(0.56, 2.0));
    CHECK(r.existence == Existence::EXISTS);
    CHECK(r.critical_c2);
    CHECK(!r.critical_speed);
    CHECK(r.minus_regime == MinusRegime::CRITICAL_C2);
    CHECK(r.plus_regime == PlusRegime::TWO_EXP);  // lambda1 > 2 lambda2 here
  }
  {
    const RegimeReport r = classify(ModelParams::from_hc(h1_constant(), 2.0));
    CHECK(r.existence == Existence::EXISTS);
    CHECK(r.critical_c2);
    CHECK(r.critical_speed);
    CHECK(r.plus_regime == PlusRegime::DOUBLE_ROOT);
  }
  {
    const RegimeReport r = classify(ModelParams::from_hc(0.0, 3.0));
    CHECK(r.minus_regime == MinusRegime::ONE_TERM);
    CHECK(r.plus_regime == PlusRegime::CLEAN);
  }
}

TEST_CASE("classify plus regime agrees with the (h, c) band of Lemma 2.2") {
  for (double h : {0.05, 0.2, 0.4, 0.5, 0.52, 0.54, 0.555}) {
    for (double c : {2.0, 2.05, 2.2, 2.5, 3.0, 4.0}) {
      const ModelParams p = ModelParams::from_hc(h, c);
      const RegimeReport r = classify(p);
      if (r.existence != Existence::EXISTS || r.critical_speed) continue;
      const bool band = h <= h0_constant() + 1e-12 && c <= c_sharp(h) + 1e-9;
      CHECK((r.plus_regime == PlusRegime::CLEAN) == band);
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(ModelParams::from_hc(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::from_hc(0.3, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(eps_star(0.3), std::invalid_argument);
  CHECK_THROWS_AS(eps_sharp(0.6), std::invalid_argument);
}
