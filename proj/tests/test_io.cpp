#include "lzeta/errors.hpp"
#include "lzeta/problem_io.hpp"
#include "lzeta/report.hpp"

#include <doctest.h>

#include <sstream>

using namespace lzeta;

namespace {

Rational Q(long p, long q) { return Rational(Integer(p), Integer(q)); }

// Line number carried by the ParseError that `text` raises, or -1.
int parse_error_line(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("minimal problem gets the documented defaults") {
  Problem p = parse_problem("[function]\nf = x^2 + y^3\n[run]\ndepth = 2\n");
  CHECK(p.dimension == 2);
  CHECK(p.run.depth == 2);
  CHECK(p.run.branch == 1);
  CHECK(p.run.tol == 1e-8);
  CHECK(p.cutoff.kind == CutoffKind::Product);
  CHECK(p.cutoff.c0 == Q(1, 2));
  CHECK(p.cutoff.c1 == Rational(1));
  CHECK(!p.cutoff.eta);
  CHECK(p.constraints.empty());
  CHECK(p.base == std::vector<Rational>{Rational(0), Rational(0)});
}

TEST_CASE("monomials and constraints") {
  Problem p = parse_problem("[function]\nf = x^2*y^2\n[domain]\nconstraint = x\n");
  REQUIRE(p.f.is_monomial());
  CHECK(p.f.coeff({2, 2}) == Rational(1));
  REQUIRE(p.constraints.size() == 1);
  CHECK(p.constraints[0] == Polynomial::variable(2, 0));
  Problem one = parse_problem("; comment\n[function]\nf = x^3  # trailing\n");
  CHECK(one.dimension == 1);
}

TEST_CASE("all keys survive a round trip") {
  const char* text =
      "[function]\nf = x^2 - y^2\n"
      "[domain]\nconstraint = x - y\nconstraint = x + y\nwindow_x = -1, 1\nwindow_y = -1/2, 1\nbase = 0, 0\n"
      "[cutoff]\nkind = radial\neta = 1/4\nc0 = 1/3\nc1 = 3/4\nmultiplier = 1 + x\npartition_c0 = 1/3\n"
      "partition_c1 = 2/3\n"
      "[run]\nbranch = lower\ndepth = 4\ntol = 1e-9\norder = 15\nmax_subdivisions = 5000\nabs_floor = 1e-10\n"
      "max_terms = 777\n";
  Problem p = parse_problem(text);
  CHECK(p.run.branch == -1);
  CHECK(p.run.order == 15);
  CHECK(p.cutoff.eta == Q(1, 4));
  CHECK(p.window_lo[1] == Q(-1, 2));
  std::string once = emit_problem(p);
  Problem q = parse_problem(once);
  CHECK(emit_problem(q) == once);
  CHECK(q.f == p.f);
  CHECK(q.constraints == p.constraints);
  CHECK(q.cutoff.multiplier == p.cutoff.multiplier);
  CHECK(q.run.tol == p.run.tol);
  CHECK(q.run.max_terms == 777);
}

TEST_CASE("malformed files report the offending line") {
  CHECK(parse_error_line("[function]\nf = x\n[colour]\n") == 3);
  CHECK(parse_error_line("[function]\nf = x\ng = y\n") == 3);
  CHECK(parse_error_line("[function]\nf = x\nf = x^2\n") == 3);
  CHECK(parse_error_line("[function]\nf = x +\n") == 2);
  CHECK(parse_error_line("[function]\nf = x\n[run]\n\ndepth = many\n") == 5);
  CHECK(parse_error_line("[function]\nf = x\n[run]\ntol = 0.1.2\n") == 4);
  CHECK(parse_error_line("[function]\nf = x\n[run]\nbranch = sideways\n") == 4);
  CHECK(parse_error_line("f = x\n") == 1);
  CHECK_THROWS_AS(parse_problem("[run]\ndepth = 1\n"), ParseError);
}

TEST_CASE("well-formed but unsupported content is a semantic error") {
  CHECK_THROWS_AS(parse_problem("[function]\nf = x\ndimension = 1\n[domain]\nwindow_y = 0, 1\n"), Error);
  CHECK_THROWS_AS(parse_problem("[function]\nf = x*y\ndimension = 1\n"), SemanticError);
  CHECK_THROWS_AS(parse_problem("[function]\nf = x - x\n"), SemanticError);
  CHECK_THROWS_AS(parse_problem("[function]\nf = x\n[domain]\nwindow_x = 1, 0\n"), SemanticError);
  CHECK_THROWS_AS(parse_problem("[function]\nf = x\n[cutoff]\nc0 = 1\nc1 = 1/2\n"), SemanticError);
  CHECK_THROWS_AS(parse_problem("[function]\nf = x\n[domain]\nwindow_x = 0, 1\nbase = 2\n"), SemanticError);
}

TEST_CASE("catalog table layout") {
  PoleCatalog empty;
  std::ostringstream a;
  write_catalog(a, empty);
  CHECK(a.str() == "location_num,location_den,order_bound,status,residue_re,residue_im,residue_err\n# ENTIRE\n");

  PoleCatalog cat;
  cat.N = 6;
  cat.entries.push_back({Q(-5, 6), 1, 1});
  std::ostringstream b;
  write_catalog(b, cat);
  CHECK(b.str().find("\n-5,6,1,CANDIDATE,,,\n") != std::string::npos);

  ScannedPole s;
  s.entry = cat.entries[0];
  s.status = PoleStatus::Confirmed;
  s.detected_order = 1;
  s.laurent.coeffs = {Complex(0.5, -0.25)};
  s.laurent.error = 1e-12;
  std::vector<ScannedPole> scan{s};
  std::ostringstream c;
  write_catalog(c, cat, &scan);
  CHECK(c.str().find("\n-5,6,1,CONFIRMED,5.000000000000000e-01,-2.500000000000000e-01,1.000000000000000e-12\n") !=
        std::string::npos);
}

TEST_CASE("value and verify tables") {
  std::ostringstream v;
  write_values(v, {{Complex(1.0, 0.0), Complex(0.25, 0.0), 1e-12}});
  CHECK(v.str() ==
        "z_re,z_im,F_re,F_im,err_est\n"
        "1.000000000000000e+00,0.000000000000000e+00,2.500000000000000e-01,0.000000000000000e+00,"
        "1.000000000000000e-12\n");
  VerifyReport r;
  r.points.push_back({Complex(0.6, 1.0), Complex(1.0), Complex(1.0), 0.0, ""});
  r.tolerance = 1e-6;
  r.pass = true;
  std::ostringstream w;
  write_verify(w, r);
  CHECK(w.str().find(",OK\n# max_deviation=0.000000000000000e+00 tolerance=1.000000000000000e-06 PASS\n") !=
        std::string::npos);
}
