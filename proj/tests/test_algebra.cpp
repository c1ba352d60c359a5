#include "lzeta/errors.hpp"
#include "lzeta/geometry.hpp"
#include "lzeta/polynomial.hpp"
#include "lzeta/rational.hpp"
#include "lzeta/roots.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lzeta;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kX{"x"};

Polynomial P(const char* text, const std::vector<std::string>& names = kXY) { return Polynomial::parse(text, names); }

Rational Q(long p, long q) { return Rational(Integer(p), Integer(q)); }

}  // namespace

TEST_CASE("rationals stay in lowest terms") {
  CHECK(Q(2, 4) == Q(1, 2));
  CHECK(Q(1, 3) + Q(1, 6) == Q(1, 2));
  CHECK(Rational::parse("-10/4") == Q(-5, 2));
  CHECK(Q(-5, 6).str() == "-5/6");
  CHECK(Q(3, 1).is_integer());
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
}

TEST_CASE("polynomial parsing and exponents") {
  Polynomial m = P("x^2*y^2");
  REQUIRE(m.is_monomial());
  CHECK(m.coeff({2, 2}) == Rational(1));
  CHECK(P("(x + y)^2") == P("x^2 + 2*x*y + y^2"));
  CHECK(P("1/2*x - 2/4*x").is_zero());
  CHECK_THROWS_AS(P("x/2"), ParseError);
  double pt[2] = {1.0, 2.0};
  CHECK(P("x + y").eval(std::span<const double>(pt, 2)) == doctest::Approx(3.0));
  CHECK_THROWS_AS(P("x^"), ParseError);
  CHECK_THROWS_AS(P("z + 1"), ParseError);
}

TEST_CASE("derivative of (2+x)^3 matches a central difference") {
  Polynomial p = P("(2 + x)^3", kX);
  Polynomial d = p.diff(0);
  CHECK(d == P("3*(2 + x)^2", kX));
  double one = 1.0, h = 1e-5, a = 1.0 + h, b = 1.0 - h;
  double fd = (p.eval(std::span<const double>(&a, 1)) - p.eval(std::span<const double>(&b, 1))) / (2 * h);
  CHECK(d.eval(std::span<const double>(&one, 1)) == doctest::Approx(27.0));
  CHECK(std::abs(fd - 27.0) < 1e-8);
}

TEST_CASE("composition with monomial maps") {
  // x^2 + y^2 under y -> x*y factors as x^2 (1 + y^2).
  std::vector<Polynomial> img{Polynomial::variable(2, 0), P("x*y")};
  Polynomial g = P("x^2 + y^2").compose(img);
  auto e = g.min_exponents();
  CHECK(e == Exponents{2, 0});
  CHECK(g.divide_monomial(e) == P("1 + y^2"));
  std::vector<Polynomial> sq{P("x^2", kX)};
  CHECK(P("x", kX).compose(sq) == P("x^2", kX));
}

TEST_CASE("real root isolation and square-free factorization") {
  // x^3 (x - 1)^2 (x^2 - 2)
  UPoly p = UPoly({Rational(0), Rational(0), Rational(0), Rational(-2), Rational(4), Rational(-1), Rational(-2),
                   Rational(1)});
  auto sf = square_free_factorization(p);
  int total = 0;
  for (const auto& [f, k] : sf) total += f.degree() * k;
  CHECK(total == 7);
  auto roots = real_roots(p, Rational(-3), Rational(3));
  REQUIRE(roots.size() == 4);
  CHECK(roots[0].approx() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));
  CHECK(roots[1].exact == Rational(0));
  CHECK(roots[1].multiplicity == 3);
  CHECK(roots[2].exact == Rational(1));
  CHECK(roots[2].multiplicity == 2);
  CHECK(!roots[3].exact);
  CHECK(roots[3].approx() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("Newton polygon of the cusp") {
  NewtonPolygon np = newton_polygon(P("x^2 + y^3"));
  REQUIRE(np.edges.size() == 1);
  CHECK(np.edges[0].normal == Vec2{3, 2});
  // Consecutive rays of the refined fan span unimodular cones.
  auto fan = unimodular_fan({np.edges[0].normal});
  CHECK(fan.front() == Vec2{1, 0});
  CHECK(fan.back() == Vec2{0, 1});
  for (size_t i = 0; i + 1 < fan.size(); ++i)
    CHECK(std::abs(fan[i][0] * fan[i + 1][1] - fan[i][1] * fan[i + 1][0]) == 1);
}

TEST_CASE("toric chart of the cusp leaves the unit 1 + t") {
  // Cone spanned by (3,2) and (1,1): x = s^3 t, y = s^2 t.
  auto map = toric_map({3, 2}, {1, 1});
  Polynomial g = P("x^2 + y^3").compose(map);
  auto e = g.min_exponents();
  CHECK(e == Exponents{6, 2});
  CHECK(g.divide_monomial(e) == P("1 + y"));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 10; ++i) {
    double st[2] = {u(rng), u(rng)};
    double xy[2] = {std::pow(st[0], 3) * st[1], st[0] * st[0] * st[1]};
    double lhs = xy[0] * xy[0] + std::pow(xy[1], 3);
    double rhs = std::pow(st[0], 6) * st[1] * st[1] * (1 + st[1]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("degenerate edge polynomials are rejected with the edge named") {
  Polynomial f = P("(y - x^2)^2");
  try {
    check_nondegenerate(newton_polygon(f), {f});
    FAIL("expected a degeneracy error");
  } catch (const DegeneracyError& e) {
    CHECK(std::string(e.what()).find("edge") != std::string::npos);
  }
  Polynomial g = P("x^2 + y^3");
  CHECK_NOTHROW(check_nondegenerate(newton_polygon(g), {g}));
}

TEST_CASE("one-variable monomialization") {
  auto charts = monomialize_1d(P("x*(x - 1)", kX), Rational(-2), Rational(2));
  int at0 = 0, at1 = 0;
  for (const auto& c : charts) {
    if (c.multiplicity == 0) continue;
    if (c.center == Rational(0)) ++at0;
    if (c.center == Rational(1)) ++at1;
    if (c.center == Rational(0) && c.side == 1) CHECK(c.sign == -1);
  }
  CHECK(at0 == 2);
  CHECK(at1 == 2);
  auto sq = monomialize_1d(P("x^2*(1 - x)", kX), Q(-1, 2), Q(1, 2));
  for (const auto& c : sq)
    if (c.multiplicity > 0) CHECK(c.multiplicity == 2);
}
