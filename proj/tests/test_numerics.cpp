#include "lzeta/errors.hpp"
#include "lzeta/numerics.hpp"
#include "lzeta/oracle.hpp"
#include "lzeta/pipeline.hpp"
#include "lzeta/problem_io.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>

using namespace lzeta;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

PieceIntegrand bare_piece(size_t n, double hi) {
  PieceIntegrand p;
  p.n = n;
  p.a.assign(n, Rational(1));
  p.beta.assign(n, Rational(0));
  p.unit = {Polynomial::constant(n, Rational(1)), 1};
  p.smooth = SmoothExpr::constant(n, Rational(1));
  p.lo.assign(n, 0.0);
  p.hi.assign(n, hi);
  p.label = "bare";
  return p;
}

// The default step profile on (1/2, 1), written out independently.
double b(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  double u = 1.0 / (1.0 - t) - 1.0 / (t - 0.5);
  return u > 0.0 ? std::exp(-u) / (1.0 + std::exp(-u)) : 1.0 / (1.0 + std::exp(u));
}

double b2(double t) {
  if (t <= 0.5 || t >= 1.0) return 0.0;
  double u1 = 1.0 / ((1.0 - t) * (1.0 - t)) + 1.0 / ((t - 0.5) * (t - 0.5));
  double u2 = 2.0 / std::pow(1.0 - t, 3) - 2.0 / std::pow(t - 0.5, 3);
  double s = b(t);
  double s1 = -s * (1.0 - s) * u1;
  return -s1 * (1.0 - 2.0 * s) * u1 - s * (1.0 - s) * u2;
}

double integral(const std::function<double(double)>& f, double lo, double hi) {
  double mid = 0.5 * (lo + hi);
  return GK::integrate(f, lo, mid, 15, 1e-14) + GK::integrate(f, mid, hi, 15, 1e-14);
}

Complex value_at(const Analysis& a, const Problem& p, Complex z, double tol = 1e-10) {
  QuadConfig qc = quad_config(p);
  qc.rel_tol = tol;
  std::vector<Complex> zs{z};
  return eval_F(a.rep, a.catalog, zs, qc).front().value;
}

const char* kLinear = "[function]\nf = x\n[domain]\nwindow_x = 0, 1\n[cutoff]\neta = 1\n[run]\ndepth = 2\n";

}  // namespace

TEST_CASE("quadrature of bare monomials") {
  PieceIntegrand p = bare_piece(1, 1.0);
  std::vector<Complex> zs{Complex(2.0, 0.0), Complex(-0.5, 1.0)};
  QuadConfig qc;
  qc.rel_tol = 1e-12;
  auto r = quad_piece(p, zs, qc);
  CHECK(std::abs(r.value[0] - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(r.value[1] - 1.0 / (zs[1] + 1.0)) < 1e-8);
  CHECK(r.error[1] < 1e-8);
}

TEST_CASE("2D plateau piece at z = 0 gives the box volume") {
  PieceIntegrand p = bare_piece(2, 0.25);
  CutoffProfile step = CutoffProfile::step(Rational(Integer(1), Integer(2)), Rational(1));
  for (size_t j = 0; j < 2; ++j)
    p.cutoffs.push_back({step, 0, true, SmoothExpr::constant(2, Rational(1)), Monomial::variable(2, j)});
  std::vector<Complex> zs{Complex(0.0, 0.0)};
  CHECK(std::abs(quad_piece(p, zs, {}).value[0] - 1.0 / 16.0) < 1e-12);
}

TEST_CASE("f = x continued to z = -1.5 against two integrations by parts") {
  Problem p = parse_problem(kLinear);
  Analysis a = analyze(p);
  CHECK(a.geometry.eta == Rational(1));
  // F = 1/((z+1)(z+2)) int x^{z+2} b''(x) dx
  double z = -1.5;
  double want = integral([&](double x) { return std::pow(x, z + 2) * b2(x); }, 0.5, 1.0) / ((z + 1) * (z + 2));
  CHECK(std::abs(value_at(a, p, z) - want) <= 1e-7 * std::abs(want));
  // Right of zero the continuation is the integral itself.
  Complex direct = direct_oracle(p, a.geometry.eta, Complex(1.0, 0.0));
  CHECK(std::abs(value_at(a, p, 1.0) - direct) <= 1e-8 * std::abs(direct));
  CHECK(direct.real() > 0.125);
  CHECK(direct.real() < 0.5);
}

TEST_CASE("unit f has an entire representation") {
  Problem p = parse_problem("[function]\nf = 1 + x^2\n");
  Analysis a = analyze(p);
  CHECK(a.catalog.entries.empty());
  for (const auto& t : a.rep.terms) CHECK(t.prefactor.empty());
  double eta = a.geometry.eta.to_double();
  double mass = 2.0 * eta * integral(b, 0.0, 1.0);
  CHECK(std::abs(value_at(a, p, 0.0) - mass) < 1e-9);
  Complex z(1.3, 1.0), direct = direct_oracle(p, a.geometry.eta, z);
  CHECK(std::abs(value_at(a, p, z) - direct) <= 1e-8 * std::abs(direct));
}

TEST_CASE("a negative constraint drops every piece") {
  Problem p = parse_problem("[function]\nf = x^2\n[domain]\nconstraint = -1\n");
  Analysis a = analyze(p);
  CHECK(a.rep.terms.empty());
  CHECK(std::abs(value_at(a, p, Complex(0.5, 1.0))) == 0.0);
}

TEST_CASE("direct oracle on a radial problem") {
  Problem p = parse_problem("[function]\nf = x^2 + y^2\n[cutoff]\nkind = radial\neta = 1\n");
  // 2 pi int_0^1 r^3 b(r^2) dr
  double want = 2.0 * M_PI * integral([](double r) { return r * r * r * b(r * r); }, 0.0, 1.0);
  Complex got = direct_oracle(p, Rational(1), Complex(1.0, 0.0));
  CHECK(std::abs(got - want) < 1e-9);
}

TEST_CASE("branch phase on the negative half line") {
  Problem p = parse_problem("[function]\nf = x\n[cutoff]\neta = 1/2\n");
  double A = integral([](double x) { return std::sqrt(x) * b(2.0 * x); }, 0.0, 0.5);
  Complex up = direct_oracle(p, Rational(Integer(1), Integer(2)), Complex(0.5, 0.0));
  CHECK(std::abs(up - Complex(A, A)) < 1e-9);
  OracleConfig lower;
  lower.branch = -1;
  Complex down = direct_oracle(p, Rational(Integer(1), Integer(2)), Complex(0.5, 0.0), lower);
  CHECK(std::abs(down - std::conj(up)) < 1e-12);

  // The continued values obey the same conjugation.
  Analysis a = analyze(p);
  Problem q = p;
  q.run.branch = -1;
  Complex cu = value_at(a, p, -0.3), cd = value_at(a, q, -0.3);
  CHECK(std::abs(cd - std::conj(cu)) < 1e-10 * std::abs(cu));
  CHECK(std::abs(cu.imag()) > 1e-3);
}

TEST_CASE("residue of the 1/(2z+1) model") {
  Problem p = parse_problem("[function]\nf = x^2\n[domain]\nwindow_x = 0, 1\n[cutoff]\neta = 1\n");
  Analysis a = analyze(p);
  QuadConfig qc = quad_config(p);
  LaurentData L = residue_extract(a.rep, a.catalog, Rational(Integer(-1), Integer(2)), 1, qc, 1e-9);
  CHECK(std::abs(L.coeffs[0] - 0.5) < 1e-9);
  CHECK(L.radius == doctest::Approx(0.125));
  // Whatever else the catalog lists, only -1/2 is a pole of this F.
  auto scan = pole_scan(a.rep, a.catalog, qc, 1e-9);
  for (const auto& s : scan)
    CHECK((s.status == PoleStatus::Confirmed) == (s.entry.location == Rational(Integer(-1), Integer(2))));
}

TEST_CASE("points near candidates are refused") {
  Problem p = parse_problem("[function]\nf = x^2\n[domain]\nwindow_x = 0, 1\n[cutoff]\neta = 1\n");
  Analysis a = analyze(p);
  std::vector<Complex> near{Complex(-0.5 + 1e-7, 0.0)};
  CHECK_THROWS_AS(eval_F(a.rep, a.catalog, near, {}), PoleProximityError);
  std::vector<Complex> far{Complex(-9.0, 0.0)};
  CHECK_THROWS_AS(eval_F(a.rep, a.catalog, far, {}), SemanticError);
}
