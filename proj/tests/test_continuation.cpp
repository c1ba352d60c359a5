#include "lzeta/continuation.hpp"
#include "lzeta/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace lzeta;

namespace {

Rational Q(long p, long q) { return Rational(Integer(p), Integer(q)); }

const CutoffProfile kStep = CutoffProfile::step(Q(1, 2), Rational(1));

PieceIntegrand plain_piece(size_t n, std::vector<Rational> a) {
  PieceIntegrand p;
  p.n = n;
  p.a = std::move(a);
  p.beta.assign(n, Rational(0));
  p.unit = {Polynomial::constant(n, Rational(1)), 1};
  p.smooth = SmoothExpr::constant(n, Rational(1));
  p.lo.assign(n, 0.0);
  p.hi.assign(n, 1.0);
  p.label = "test";
  return p;
}

CutoffFactor record(size_t n, Exponents ratio, int order, SmoothExpr scale = {}) {
  if (scale.nvars() == 0) scale = SmoothExpr::constant(n, Rational(1));
  return {kStep, order, true, std::move(scale), Monomial(std::move(ratio))};
}

// Everything but the monomial x^{a z + beta}: unit^z * smooth * records.
std::complex<double> rest(const PieceIntegrand& p, const double* x, std::complex<double> z) {
  std::span<const double> xs(x, p.n);
  std::complex<double> v = std::pow(std::complex<double>(p.unit.base.eval(xs)), z) * p.smooth.eval(xs, z);
  for (const auto& c : p.cutoffs) v *= c.eval(x);
  return v;
}

// Hand-written step profile for oracles that must not share library code.
double step_profile(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  double u = 1.0 / (1.0 - t) - 1.0 / (t - 0.5);
  return u > 0.0 ? std::exp(-u) / (1.0 + std::exp(-u)) : 1.0 / (1.0 + std::exp(u));
}

}  // namespace

TEST_CASE("prefactor evaluation and multiplicity") {
  Prefactor pf;
  pf.add(Rational(2), Rational(1));
  pf.add(Rational(2), Rational(1));
  pf.add(Rational(1), Rational(1));
  std::complex<double> z(0.3, -0.2);
  CHECK(std::abs(pf.eval(z) - 1.0 / ((2.0 * z + 1.0) * (2.0 * z + 1.0) * (z + 1.0))) < 1e-14);
  CHECK(pf.multiplicity(Q(-1, 2)) == 2);
  CHECK(pf.multiplicity(Rational(-1)) == 1);
  CHECK(pf.multiplicity(Rational(-2)) == 0);
}

TEST_CASE("derivative split reproduces -x_j d/dx_j pointwise") {
  std::vector<std::string> names{"x", "y"};
  PieceIntegrand p = plain_piece(2, {Rational(2), Rational(1)});
  p.unit.base = Polynomial::parse("1 + x + y^2", names);
  p.smooth = SmoothExpr::from_polynomial(Polynomial::parse("1 + x*y", names));
  p.cutoffs.push_back(record(2, {2, -1}, 0, SmoothExpr::from_polynomial(Polynomial::parse("1 + x", names))));
  p.cutoffs.push_back(record(2, {1, 0}, 1));
  std::vector<std::string> tags;
  auto terms = derivative_split(p, 0, &tags);
  // One term each for the unit, the smooth factor and the order-0 record;
  // the order-1 record splits into k E_k + E_{k+1}.
  CHECK(terms.size() == 5);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.4, 0.95);
  std::complex<double> z(0.7, 0.4);
  int hits = 0;
  for (int i = 0; i < 200; ++i) {
    double x[2] = {u(rng), u(rng)};
    double h = 1e-6 * x[0];
    double a[2] = {x[0] + h, x[1]}, b[2] = {x[0] - h, x[1]};
    std::complex<double> want = -x[0] * (rest(p, a, z) - rest(p, b, z)) / (2 * h);
    std::complex<double> got = 0.0;
    // Terms from Euler records keep beta_j because their 1/x_j cancels the
    // raised exponent; the others carry the extra power explicitly.
    for (const auto& t : terms) got += std::pow(x[0], (t.beta[0] - p.beta[0]).to_double()) * rest(t, x, z);
    CHECK(std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    if (std::abs(want) > 1e-3) ++hits;
  }
  CHECK(hits > 20);
}

TEST_CASE("integration by parts in one variable keeps the integral") {
  // The single split term, divided by z + 1, must reproduce int_0^1 x^z b(x) dx.
  PieceIntegrand p = plain_piece(1, {Rational(1)});
  p.cutoffs.push_back(record(1, {1}, 0));
  IbpResult r = ibp_step(p, 0);
  CHECK(r.factor == Prefactor::Factor{Rational(1), Rational(1)});
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms[0].cutoffs[0].is_B());
  for (std::complex<double> z : {std::complex<double>(1.0, 0.0), std::complex<double>(0.5, 1.0)}) {
    std::complex<double> zs[1] = {z};
    QuadConfig qc;
    qc.rel_tol = 1e-12;
    std::complex<double> after = quad_piece(r.terms[0], zs, qc).value[0] / (z + 1.0);
    auto re = [&](double x) { return (std::pow(std::complex<double>(x), z) * step_profile(x)).real(); };
    auto im = [&](double x) { return (std::pow(std::complex<double>(x), z) * step_profile(x)).imag(); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    std::complex<double> want(GK::integrate(re, 0.0, 0.5, 10, 1e-14) + GK::integrate(re, 0.5, 1.0, 10, 1e-14),
                              GK::integrate(im, 0.0, 0.5, 10, 1e-14) + GK::integrate(im, 0.5, 1.0, 10, 1e-14));
    CHECK(std::abs(after - want) <= 1e-8 * std::abs(want));
  }
}

TEST_CASE("a piece without x-dependence integrates by parts to nothing") {
  PieceIntegrand p = plain_piece(1, {Rational(1)});
  IbpResult r = ibp_step(p, 0);
  CHECK(r.terms.empty());
  CHECK(r.factor == Prefactor::Factor{Rational(1), Rational(1)});
}

TEST_CASE("wedge classification") {
  auto with = [](Exponents ratio) {
    PieceIntegrand p = plain_piece(2, {Rational(1), Rational(1)});
    p.cutoffs.push_back(record(2, std::move(ratio), 1));
    return p;
  };
  SUBCASE("q = xy is case 1") {
    auto p = with({-1, -1});
    auto idx = first_wedge_record(p);
    REQUIRE(idx);
    CHECK(classify_wedge(p, *idx).kind == CaseKind::Case1);
  }
  SUBCASE("q = x is case 2 in x") {
    auto p = with({-1, 0});
    auto tag = classify_wedge(p, *first_wedge_record(p));
    CHECK(tag.kind == CaseKind::Case2);
    CHECK(tag.J == std::vector<size_t>{0});
  }
  SUBCASE("p = x, q = y is case 3") {
    auto p = with({1, -1});
    auto tag = classify_wedge(p, *first_wedge_record(p));
    CHECK(tag.kind == CaseKind::Case3);
    CHECK(tag.l == 0);
    CHECK(tag.m == 1);
  }
  SUBCASE("undifferentiated records are not wedges") {
    PieceIntegrand p = plain_piece(2, {Rational(1), Rational(1)});
    p.cutoffs.push_back(record(2, {1, -1}, 0));
    CHECK(!first_wedge_record(p));
  }
}

TEST_CASE("case 1 lower bound follows from the band") {
  // The record B(1/x) is supported where 1/2 <= 1/x <= 1, which forces x >= 1.
  PieceIntegrand p = plain_piece(1, {Rational(1)});
  p.hi = {4.0};
  p.cutoffs.push_back(record(1, {-1}, 1));
  auto idx = first_wedge_record(p);
  REQUIRE(idx);
  auto tag = classify_wedge(p, *idx);
  CHECK(tag.kind == CaseKind::Case1);
  auto bounds = case_lower_bounds(p, *idx, tag.J);
  REQUIRE(bounds.size() == 1);
  CHECK(bounds[0] == doctest::Approx(1.0));
  REQUIRE(freeze_wedge(p, *idx, tag));
  CHECK(!p.active(0));
  CHECK(!threshold(p));
}

TEST_CASE("power equalization") {
  PieceIntegrand p = plain_piece(2, {Rational(1), Rational(1)});
  p.cutoffs.push_back(record(2, {1, -2}, 1));
  std::vector<int> M;
  PieceIntegrand q = equalize_powers(p, 0, &M);
  CHECK(M == std::vector<int>{2, 1});
  CHECK(q.cutoffs[0].ratio.exponents() == Exponents{2, -2});
  // x -> x^2 turns x^z dx into 2 x^{2z+1} dx.
  CHECK(q.a[0] == Rational(2));
  CHECK(q.beta[0] == Rational(1));
  std::vector<int> same;
  equalize_powers(q, 0, &same);
  CHECK(same == std::vector<int>{1, 1});
}

TEST_CASE("case 3 split eliminates one variable from the ratio") {
  PieceIntegrand p = plain_piece(2, {Rational(1), Rational(1)});
  p.cutoffs.push_back(record(2, {1, -1}, 1));
  auto [p1, p2] = case3_split(p, 0, 1, CutoffProfile::alpha(Q(1, 2), Rational(2)));
  CHECK(p1.cutoffs[0].ratio.exponents() == Exponents{1, 0});
  CHECK(p2.cutoffs[0].ratio.exponents() == Exponents{0, -1});
  CHECK(p1.a[1] == Rational(2));
  CHECK(p1.beta[1] == Rational(1));
}

TEST_CASE("threshold and depth target of x^{2z}") {
  PieceIntegrand p = plain_piece(1, {Rational(2)});
  p.cutoffs.push_back(record(1, {1}, 0));
  CHECK(threshold(p) == Q(-1, 2));
  CHECK(depth_target({p}, 0) == Rational(-1));
  CHECK(depth_target({p}, 3) == Q(-5, 2));
  PieceIntegrand unit = plain_piece(1, {Rational(0)});
  CHECK(!threshold(unit));
}

TEST_CASE("continuation of the 1D plateau piece") {
  PieceIntegrand p = plain_piece(1, {Rational(1)});
  p.cutoffs.push_back(record(1, {1}, 0));
  MeromorphicRep rep = continue_to({p}, Rational(-4));
  PoleCatalog cat = pole_catalog(rep, 1);
  std::vector<Rational> locs;
  for (const auto& e : cat.entries) locs.push_back(e.location);
  // b is 1 near 0, so the B-term is frozen at once and -1 is the only candidate.
  CHECK(locs == std::vector<Rational>{Rational(-1)});
  // The continued value at z = -1.5 against two manual integrations by parts:
  // F = 1/((z+1)(z+2)) int x^{z+2} b''(x) dx.
  std::complex<double> zs[1] = {std::complex<double>(-1.5, 0.0)};
  QuadConfig qc;
  qc.rel_tol = 1e-11;
  double got = integrate_terms(rep.terms, zs, qc).value[0].real();
  double h = 1e-4;
  auto b2 = [&](double x) { return (step_profile(x + h) - 2 * step_profile(x) + step_profile(x - h)) / (h * h); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double I = GK::integrate([&](double x) { return std::pow(x, 0.5) * b2(x); }, 0.5, 1.0, 12, 1e-12);
  double want = I / ((-0.5) * 0.5);
  CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("double pole candidate of x^{2z} y^{2z}") {
  PieceIntegrand p = plain_piece(2, {Rational(2), Rational(2)});
  p.cutoffs.push_back(record(2, {1, 0}, 0));
  p.cutoffs.push_back(record(2, {0, 1}, 0));
  MeromorphicRep rep = continue_to({p}, Rational(-1));
  PoleCatalog cat = pole_catalog(rep, 2);
  REQUIRE(!cat.entries.empty());
  CHECK(cat.entries.front().location == Q(-1, 2));
  CHECK(cat.entries.front().order_bound == 2);
}

TEST_CASE("entire pieces contribute no candidates") {
  PieceIntegrand p = plain_piece(1, {Rational(0)});
  MeromorphicRep rep = continue_to({p}, std::nullopt);
  CHECK(rep.terms.size() == 1);
  CHECK(rep.terms[0].prefactor.empty());
  CHECK(pole_catalog(rep, 1).entries.empty());
}
