#include "lzeta/cutoff.hpp"
#include "lzeta/errors.hpp"
#include "lzeta/polynomial.hpp"
#include "lzeta/smooth_expr.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lzeta;

namespace {

Rational Q(long p, long q) { return Rational(Integer(p), Integer(q)); }

const CutoffProfile kStep = CutoffProfile::step(Q(1, 2), Rational(1));

}  // namespace

TEST_CASE("step profile plateaus and transition") {
  CHECK(kStep.derivative(0.25, 0) == 1.0);
  CHECK(kStep.derivative(1.5, 0) == 0.0);
  double mid = kStep.derivative(0.75, 0);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // u(3/4) = 0 at the midpoint, so b = 1/2 exactly.
  CHECK(mid == doctest::Approx(0.5));
  double prev = 1.0;
  for (int i = 1; i < 100; ++i) {
    double v = kStep.derivative(0.5 + 0.005 * i, 0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(CutoffProfile::step(Rational(1), Q(1, 2)), SemanticError);
}

TEST_CASE("jet derivatives match finite differences") {
  for (double t : {0.55, 0.7, 0.9}) {
    for (int k = 1; k <= 3; ++k) {
      double h = 1e-6;
      double fd = (kStep.derivative(t + h, k - 1) - kStep.derivative(t - h, k - 1)) / (2 * h);
      double d = kStep.derivative(t, k);
      CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
    // Euler form t^k b^(k).
    CHECK(kStep.euler(t, 2) == doctest::Approx(t * t * kStep.derivative(t, 2)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(Jet(Jet::kMaxOrder + 1, 0.0), ResourceError);
}

TEST_CASE("B-kind support lies in the transition band") {
  CHECK(kStep.derivative(0.4, 1) == 0.0);
  CHECK(kStep.derivative(1.1, 1) == 0.0);
  CHECK(kStep.derivative(0.75, 1) < 0.0);
  // Band edges carry a small safety margin, so test intervals stay clear of them.
  CHECK(kStep.vanishes_on({1.01, 2.0}, 0));
  CHECK(!kStep.vanishes_on({1.0, 2.0}, 0));
  CHECK(kStep.vanishes_on({0.1, 0.49}, 1));
  CHECK(!kStep.vanishes_on({0.1, 0.49}, 0));
  CHECK(kStep.is_one_on({0.1, 0.49}));
  CutoffProfile comp = CutoffProfile::complement(Q(1, 2), Rational(1));
  CHECK(comp.derivative(0.6, 0) + kStep.derivative(0.6, 0) == doctest::Approx(1.0));
}

TEST_CASE("alpha(y) + alpha(1/y) = 1 on a log grid") {
  for (const auto& a : {CutoffProfile::alpha(Q(1, 2), Rational(2)), CutoffProfile::alpha(Q(1, 3), Q(2, 3))}) {
    double worst = 0.0;
    for (int k = -300; k <= 300; ++k) {
      double y = std::pow(10.0, k / 100.0);
      worst = std::max(worst, std::abs(a.derivative(y, 0) + a.derivative(1.0 / y, 0) - 1.0));
    }
    CHECK(worst <= 1e-12);
    CHECK(a.derivative(1.0, 0) == doctest::Approx(0.5));
  }
}

TEST_CASE("smooth expressions differentiate like functions") {
  std::vector<std::string> names{"x", "y"};
  Polynomial q = Polynomial::parse("1 + x^2*y", names);
  // (x + y) * (1 + x^2 y)^-2 times z
  SmoothExpr e = (SmoothExpr::from_polynomial(Polynomial::parse("x + y", names)) * SmoothExpr::power(q, -2)).times_z();
  SmoothExpr dx = e.diff(0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  for (int i = 0; i < 20; ++i) {
    double p[2] = {u(rng), u(rng)};
    double h = 1e-6;
    double a[2] = {p[0] + h, p[1]}, b[2] = {p[0] - h, p[1]};
    double fd = (e.eval(a)[1] - e.eval(b)[1]) / (2 * h);
    CHECK(dx.eval(p)[1] == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("compiled and banked evaluators agree with the tree") {
  std::vector<std::string> names{"x", "y"};
  Polynomial q = Polynomial::parse("2 + x*y^3", names);
  std::vector<SmoothExpr> exprs{
      SmoothExpr::constant(2, Q(3, 7)),
      SmoothExpr::monomial({3, -1}, Q(-2, 1)) * SmoothExpr::power(q, -3),
      (SmoothExpr::from_polynomial(Polynomial::parse("x - 4*y^2", names)) * SmoothExpr::power(q, 2)).times_z() +
          SmoothExpr::monomial({0, 2}),
      SmoothExpr::power(q, -1).diff(1).diff(0),
  };
  SmoothBank bank(2);
  std::vector<int> ids;
  for (const auto& e : exprs) ids.push_back(bank.add(e));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 25; ++i) {
    double p[2] = {u(rng), u(rng)};
    bank.prepare(p);
    for (size_t k = 0; k < exprs.size(); ++k) {
      auto want = exprs[k].eval(p);
      CompiledSmooth cs(exprs[k]);
      std::vector<double> got(cs.z_degree() + 1), banked(bank.z_degree(ids[k]) + 1);
      cs.eval(p, got.data());
      bank.eval(ids[k], banked.data());
      REQUIRE(got.size() == want.size());
      REQUIRE(banked.size() == want.size());
      for (size_t d = 0; d < want.size(); ++d) {
        CHECK(got[d] == doctest::Approx(want[d]).epsilon(1e-12));
        CHECK(banked[d] == doctest::Approx(want[d]).epsilon(1e-12));
      }
    }
  }
}
