#include "lzeta/oracle.hpp"

#include "lzeta/errors.hpp"
#include "lzeta/geometry.hpp"
#include "lzeta/roots.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>

namespace lzeta {

namespace {

using boost::math::quadrature::tanh_sinh;

// p as a polynomial in the last variable whose coefficients are
// polynomials in the first: p = sum_k c_k(x) y^k.
std::vector<std::vector<double>> y_coefficients(const Polynomial& p) {
  std::vector<std::vector<double>> c(p.degree_in(1) + 1);
  for (const auto& [e, v] : p.terms()) {
    auto& ck = c[e[1]];
    if (ck.size() < static_cast<size_t>(e[0] + 1)) ck.resize(e[0] + 1, 0.0);
    ck[e[0]] += v.to_double();
  }
  return c;
}

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

// Real roots of sum_k c_k y^k, approximately.
std::vector<double> real_roots_double(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  std::vector<double> out;
  if (c.size() <= 1) return out;
  if (c.size() == 2) return {-c[0] / c[1]};
  Eigen::VectorXd coeffs(c.size());
  for (size_t i = 0; i < c.size(); ++i) coeffs[static_cast<Eigen::Index>(i)] = c[i];
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
  for (const auto& r : solver.roots()) {
    double mag = std::max(1.0, std::abs(r));
    if (std::abs(r.imag()) <= 1e-7 * mag) out.push_back(r.real());
  }
  return out;
}

std::vector<double> rational_breaks(const Polynomial& univariate_in_0, double lo, double hi) {
  std::vector<double> out;
  if (univariate_in_0.is_zero() || univariate_in_0.is_constant()) return out;
  UPoly u(univariate_in_0.univariate(0));
  Rational a = Rational::from_double(lo), b = Rational::from_double(hi);
  for (const auto& r : real_roots(u, a, b)) out.push_back(r.approx());
  return out;
}

class Oracle {
public:
  Oracle(const Problem& pb, const Rational& eta, Complex z, const OracleConfig& cfg)
      : pb_(pb), eta_(eta.to_double()), z_(z), cfg_(cfg), phi_(pb, eta) {
    n_ = static_cast<size_t>(pb.dimension);
    const auto& cs = pb.cutoff;
    double ext = cs.kind == CutoffKind::Product ? cs.c1.to_double() * eta_ : std::sqrt(cs.c1.to_double()) * eta_;
    for (size_t j = 0; j < n_; ++j) {
      double b = pb.base[j].to_double();
      lo_.push_back(std::max(pb.window_lo[j].to_double(), b - ext));
      hi_.push_back(std::min(pb.window_hi[j].to_double(), b + ext));
    }
    polys_.push_back(pb.f);
    for (const auto& g : pb.constraints) polys_.push_back(g);
    if (n_ == 2)
      for (const auto& p : polys_) ycoef_.push_back(y_coefficients(p));
  }

  Complex run() {
    if (n_ == 1) return integrate_1d();
    return integrate_2d();
  }

private:
  Complex integrand(const double* x) const {
    double fv = pb_.f.eval(std::span<const double>(x, n_));
    if (fv == 0.0) return Complex(0.0);
    double phi = phi_(std::span<const double>(x, n_));
    if (phi == 0.0) return Complex(0.0);
    double l = std::log(std::abs(fv));
    if (cfg_.magnitude) return std::exp(z_.real() * l) * std::abs(phi);
    Complex v = std::exp(z_ * l) * phi;
    if (fv < 0.0) v *= std::exp(Complex(0.0, M_PI * cfg_.branch) * z_);
    return v;
  }

  bool inside_M(const double* x) const {
    for (const auto& g : pb_.constraints)
      if (!(g.eval(std::span<const double>(x, n_)) > 0.0)) return false;
    return true;
  }

  // Breakpoints along one coordinate from the cutoff profile.
  void cutoff_breaks(size_t j, double offset_sq, std::vector<double>& out) const {
    const auto& cs = pb_.cutoff;
    double b = pb_.base[j].to_double();
    out.push_back(b);
    for (const Rational* c : {&cs.c0, &cs.c1}) {
      double t = c->to_double();
      double r;
      if (cs.kind == CutoffKind::Product) {
        r = t * eta_;
      } else {
        double r2 = t * eta_ * eta_ - offset_sq;
        if (r2 <= 0.0) continue;
        r = std::sqrt(r2);
      }
      out.push_back(b - r);
      out.push_back(b + r);
    }
  }

  // tanh-sinh on [0, 1] with an affine map: endpoint clustering then stays
  // well resolved even for tiny segments far from the origin.
  template <class F>
  Complex unit_integral(F&& f, double a, double b) const {
    double w = b - a;
    return ts_.integrate([&](double t) { return f(a + w * t) * w; }, 0.0, 1.0, cfg_.tol);
  }

  template <class F>
  Complex segments(std::vector<double> pts, double lo, double hi, F&& f) const {
    pts.push_back(lo);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    std::vector<double> clean;
    for (double p : pts) {
      if (p < lo || p > hi) continue;
      if (!clean.empty() && p - clean.back() <= 1e-14 * std::max(1.0, std::abs(p))) continue;
      clean.push_back(p);
    }
    Complex total(0.0);
    for (size_t i = 0; i + 1 < clean.size(); ++i) total += f(clean[i], clean[i + 1]);
    return total;
  }

  Complex integrate_1d() const {
    std::vector<double> pts;
    cutoff_breaks(0, 0.0, pts);
    for (const auto& p : polys_)
      for (double r : rational_breaks(p, lo_[0], hi_[0])) pts.push_back(r);
    return segments(pts, lo_[0], hi_[0], [&](double a, double b) {
      double mid = 0.5 * (a + b);
      if (!inside_M(&mid)) return Complex(0.0);
      return unit_integral([&](double x) { return integrand(&x); }, a, b);
    });
  }

  Complex inner(double x) const {
    std::vector<double> pts;
    double dx = x - pb_.base[0].to_double();
    cutoff_breaks(1, dx * dx, pts);
    for (const auto& c : ycoef_) {
      std::vector<double> cy;
      for (const auto& ck : c) cy.push_back(horner(ck, x));
      for (double r : real_roots_double(cy)) pts.push_back(r);
    }
    return segments(pts, lo_[1], hi_[1], [&](double a, double b) {
      double mid[2] = {x, 0.5 * (a + b)};
      if (!inside_M(mid)) return Complex(0.0);
      return unit_integral(
          [&](double y) {
            double p[2] = {x, y};
            return integrand(p);
          },
          a, b);
    });
  }

  Complex integrate_2d() const {
    std::vector<double> pts;
    cutoff_breaks(0, 0.0, pts);
    const auto& cs = pb_.cutoff;
    if (cs.kind == CutoffKind::Radial) {
      // Circles are tangent to vertical lines at base_x +- radius.
      double b = pb_.base[0].to_double();
      for (const Rational* c : {&cs.c0, &cs.c1}) {
        double r = std::sqrt(c->to_double()) * eta_;
        pts.push_back(b - r);
        pts.push_back(b + r);
      }
    }
    // Points where a zero curve meets a horizontal edge or the base line.
    for (const auto& p : polys_)
      for (double ye : {lo_[1], hi_[1], pb_.base[1].to_double()}) {
        Polynomial q = p.restrict(1, Rational::from_double(ye));
        for (double r : rational_breaks(q, lo_[0], hi_[0])) pts.push_back(r);
      }
    return segments(pts, lo_[0], hi_[0],
                    [&](double a, double b) { return unit_integral([&](double x) { return inner(x); }, a, b); });
  }

  const Problem& pb_;
  double eta_;
  Complex z_;
  OracleConfig cfg_;
  PhiFunction phi_;
  size_t n_ = 1;
  std::vector<double> lo_, hi_;
  std::vector<Polynomial> polys_;
  std::vector<std::vector<std::vector<double>>> ycoef_;
  mutable tanh_sinh<double> ts_;
};

}  // namespace

Complex direct_oracle(const Problem& problem, const Rational& eta, Complex z, const OracleConfig& cfg) {
  if (!(z.real() > 0.0)) throw SemanticError("the direct oracle needs Re z > 0");
  return Oracle(problem, eta, z, cfg).run();
}

std::vector<Complex> verify_grid() {
  std::vector<Complex> g;
  for (double re : {0.6, 0.95, 1.3, 1.65, 2.0})
    for (double im : {-1.0, 0.0, 1.0}) g.emplace_back(re, im);
  return g;
}

VerifyReport verify_consistency(const Problem& problem, const Rational& eta, const MeromorphicRep& rep,
                                const PoleCatalog& catalog, const QuadConfig& qcfg, double tolerance) {
  VerifyReport rep_out;
  rep_out.tolerance = tolerance;
  auto grid = verify_grid();
  std::vector<FValue> cont;
  std::string batch_failure;
  try {
    cont = eval_F(rep, catalog, grid, qcfg);
  } catch (const Error& e) {
    batch_failure = e.what();
  }
  bool ok = true;
  for (size_t i = 0; i < grid.size(); ++i) {
    VerifyPoint p;
    p.z = grid[i];
    if (!batch_failure.empty()) {
      p.failure = batch_failure;
    } else {
      p.continued = cont[i].value;
      try {
        p.direct = direct_oracle(problem, eta, grid[i], {1e-11, qcfg.branch});
        double scale = std::abs(p.direct);
        // The magnitude integral costs a second oracle run, so only pay for
        // it when the value is small enough for the floor to matter.
        if (scale < 1e-2) {
          OracleConfig mc{1e-11, qcfg.branch, true};
          double mass = direct_oracle(problem, eta, Complex(grid[i].real(), 0.0), mc).real();
          scale = std::max(scale, 1e-3 * mass);
        }
        double d = std::abs(p.continued - p.direct);
        p.deviation = scale > 0.0 ? d / scale : d;
      } catch (const std::exception& e) {
        p.failure = e.what();
      }
    }
    if (!p.failure.empty() || !(p.deviation <= tolerance)) ok = false;
    rep_out.max_deviation = std::max(rep_out.max_deviation, p.failure.empty() ? p.deviation : INFINITY);
    rep_out.points.push_back(std::move(p));
  }
  rep_out.pass = ok;
  return rep_out;
}

}  // namespace lzeta
