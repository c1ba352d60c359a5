#include "lzeta/geometry.hpp"

#include "lzeta/errors.hpp"
#include "lzeta/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace lzeta {

namespace {

std::string vec_str(const Vec2& v) {
  return "(" + std::to_string(v[0]) + "," + std::to_string(v[1]) + ")";
}

long cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return static_cast<long>(a[0] - o[0]) * (b[1] - o[1]) - static_cast<long>(a[1] - o[1]) * (b[0] - o[0]);
}

// Dense coefficients of p(x, 1) for a polynomial in two variables.
UPoly dehomogenize(const Polynomial& p) {
  std::vector<Rational> c(static_cast<size_t>(p.degree_in(0)) + 1, Rational(0));
  for (const auto& [e, v] : p.terms()) c[e[0]] += v;
  return UPoly(std::move(c));
}

Rational cauchy_bound(const UPoly& p) {
  Rational b(1);
  for (const auto& c : p.coeffs()) b = std::max(b, (c / p.lead()).abs());
  return b + Rational(1);
}

}  // namespace

NewtonPolygon newton_polygon(const Polynomial& f) {
  if (f.nvars() != 2) throw InternalError("newton_polygon expects two variables");
  if (f.is_zero()) throw SemanticError("Newton polygon of the zero polynomial");
  std::map<int, int> lowest;  // x-exponent -> smallest y-exponent
  for (const auto& [e, c] : f.terms()) {
    auto it = lowest.find(e[0]);
    if (it == lowest.end() || e[1] < it->second) lowest[e[0]] = e[1];
  }
  // Keep the staircase of points not dominated from the lower left.
  std::vector<Vec2> pts;
  int best_y = INT32_MAX;
  for (const auto& [x, y] : lowest)
    if (y < best_y) {
      pts.push_back({x, y});
      best_y = y;
    }
  NewtonPolygon np;
  for (const auto& p : pts) {
    while (np.vertices.size() >= 2 &&
           cross(np.vertices[np.vertices.size() - 2], np.vertices.back(), p) <= 0)
      np.vertices.pop_back();
    np.vertices.push_back(p);
  }
  for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
    Vec2 a = np.vertices[i], b = np.vertices[i + 1];
    int p = a[1] - b[1], q = b[0] - a[0];
    int g = std::gcd(p, q);
    np.edges.push_back({a, b, {p / g, q / g}});
  }
  return np;
}

Polynomial initial_form(const Polynomial& p, const Vec2& w) {
  long best = 0;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    long v = static_cast<long>(w[0]) * e[0] + static_cast<long>(w[1]) * e[1];
    if (first || v < best) best = v;
    first = false;
  }
  Polynomial out(p.nvars());
  for (const auto& [e, c] : p.terms())
    if (static_cast<long>(w[0]) * e[0] + static_cast<long>(w[1]) * e[1] == best)
      out += Polynomial::term(e, c);
  return out;
}

std::vector<Vec2> unimodular_fan(const std::vector<Vec2>& normals) {
  std::vector<Vec2> rays{{1, 0}, {0, 1}};
  // Angle order of primitive vectors in the first quadrant is the order of q/p.
  auto before = [](const Vec2& a, const Vec2& b) {
    return static_cast<long>(a[1]) * b[0] < static_cast<long>(b[1]) * a[0];
  };
  for (const auto& r : normals) {
    if (std::find(rays.begin(), rays.end(), r) != rays.end()) continue;
    size_t i = 0;
    while (!before(r, rays[i + 1])) ++i;
    Vec2 lo = rays[i], hi = rays[i + 1];
    for (;;) {
      Vec2 m{lo[0] + hi[0], lo[1] + hi[1]};
      auto pos = std::find(rays.begin(), rays.end(), hi);
      rays.insert(pos, m);
      if (m == r) break;
      if (before(r, m)) hi = m;
      else lo = m;
    }
  }
  return rays;
}

void check_nondegenerate(const NewtonPolygon& product, const std::vector<Polynomial>& factors) {
  for (const auto& edge : product.edges) {
    for (const auto& p : factors) {
      Polynomial in = initial_form(p, edge.normal);
      if (in.terms().size() < 2) continue;
      UPoly u = dehomogenize(in);
      // Roots at x = 0 are not in the open quadrant.
      std::vector<Rational> c = u.coeffs();
      size_t k = 0;
      while (k < c.size() && c[k].is_zero()) ++k;
      UPoly v(std::vector<Rational>(c.begin() + static_cast<long>(k), c.end()));
      if (v.degree() < 1) continue;
      for (const auto& r : real_roots(v, Rational(0), cauchy_bound(v))) {
        if (r.multiplicity < 2) continue;
        std::ostringstream os;
        os << "degenerate Newton polygon: edge " << vec_str(edge.from) << "-" << vec_str(edge.to)
           << " with normal " << vec_str(edge.normal) << ": edge polynomial " << in.str()
           << " has a root of multiplicity " << r.multiplicity << " at x = ";
        if (r.exact) os << r.exact->str();
        else os << r.approx();
        os << ", y = 1";
        throw DegeneracyError(os.str());
      }
    }
  }
}

std::vector<Polynomial> toric_map(const Vec2& v, const Vec2& w) {
  return {Polynomial::term({v[0], w[0]}, Rational(1)), Polynomial::term({v[1], w[1]}, Rational(1))};
}

std::vector<Chart1D> monomialize_1d(const Polynomial& f, const Rational& lo, const Rational& hi) {
  if (f.nvars() != 1) throw InternalError("monomialize_1d expects one variable");
  if (f.is_zero()) throw SemanticError("f is identically zero");
  UPoly u(f.univariate(0));
  std::vector<std::pair<Rational, int>> roots;
  for (const auto& r : real_roots(u, lo, hi)) {
    if (!r.exact)
      throw DegeneracyError("irrational root near " + std::to_string(r.approx()) +
                            " cannot be used as a chart center");
    roots.emplace_back(*r.exact, r.multiplicity);
  }
  // Roots sitting on the window edges count too.
  for (const Rational& e : {lo, hi}) {
    if (u.sign_at(e) != 0) continue;
    int m = 0;
    UPoly d = u;
    while (d.sign_at(e) == 0) {
      d = d.derivative();
      ++m;
    }
    roots.emplace_back(e, m);
  }
  std::sort(roots.begin(), roots.end());

  auto local = [&](const Rational& c, int side) {
    std::vector<Polynomial> img{Polynomial::constant(1, c) +
                                Polynomial::variable(1, 0) * Rational(side)};
    return f.compose(img);
  };
  std::vector<Chart1D> out;
  for (const auto& [rho, m] : roots) {
    for (int side : {-1, 1}) {
      if ((side < 0 && rho == lo) || (side > 0 && rho == hi)) continue;
      Chart1D c{rho, side, m, {}, 1};
      Exponents e{m};
      c.unit = local(rho, side).divide_monomial(e);
      c.sign = c.unit.constant_term().sign();
      out.push_back(std::move(c));
    }
  }
  // Root-free gaps: f itself is the unit there.
  std::vector<Rational> cuts{lo};
  for (const auto& [rho, m] : roots) cuts.push_back(rho);
  cuts.push_back(hi);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    Rational mid = (cuts[i] + cuts[i + 1]) * Rational(Integer(1), Integer(2));
    Chart1D c{cuts[i], 1, 0, local(cuts[i], 1), u.sign_at(mid)};
    out.push_back(std::move(c));
  }
  return out;
}

double CutoffSpec::extent(double eta_value) const {
  return kind == CutoffKind::Product ? c1.to_double() * eta_value
                                     : std::sqrt(c1.to_double()) * eta_value;
}

PhiFunction::PhiFunction(const Problem& problem, const Rational& eta)
    : multiplier_(&problem.cutoff.multiplier),
      b_(CutoffProfile::step(problem.cutoff.c0, problem.cutoff.c1)),
      radial_(problem.cutoff.kind == CutoffKind::Radial),
      eta_(eta.to_double()) {
  for (const auto& v : problem.base) base_.push_back(v.to_double());
}

double PhiFunction::operator()(std::span<const double> x) const {
  double v = multiplier_->eval(x);
  if (!radial_) {
    for (size_t j = 0; j < x.size(); ++j) v *= b_.value(std::abs(x[j] - base_[j]) / eta_);
    return v;
  }
  double r2 = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    double d = x[j] - base_[j];
    r2 += d * d;
  }
  return v * b_.value(r2 / (eta_ * eta_));
}

double phi_value(const Problem& problem, const Rational& eta, std::span<const double> x) {
  return PhiFunction(problem, eta)(x);
}

namespace {

// A piece under construction: orthant coordinates as polynomials in the
// local variables, the cutoff records in local variables, and the box.
struct Proto {
  std::vector<Polynomial> map;
  std::vector<CutoffFactor> records;
  std::vector<double> lo, hi;
  std::string label;
};

class Builder {
public:
  Builder(const Problem& pr, Rational eta, Rational delta_scale, const GeometryConfig& cfg)
      : pr_(pr), n_(static_cast<size_t>(pr.dimension)), eta_(std::move(eta)),
        delta_scale_(std::move(delta_scale)), cfg_(cfg) {
    pc0_ = pr.cutoff.partition_c0;
    pc1_ = pr.cutoff.partition_c1;
    alpha_bound_ = std::sqrt(pc1_.to_double() / pc0_.to_double());
    extent_ = pr.cutoff.extent(eta_.to_double());
  }

  Geometry run();

private:
  void orthant(const std::vector<int>& sigma);
  std::vector<Proto> charts_for(const std::vector<int>& sigma, const std::vector<CutoffFactor>& base);
  double pure_power_bound(const Proto& p, size_t k) const;
  std::vector<Proto> split(const Proto& p, size_t j) const;
  void finalize(const Proto& p);
  int certified_sign(const Polynomial& u, const Proto& p, const std::string& what) const;

  const Problem& pr_;
  size_t n_;
  Rational eta_, delta_scale_;
  const GeometryConfig& cfg_;
  Rational pc0_, pc1_;
  double alpha_bound_ = 2.0;
  double extent_ = 1.0;

  // Current orthant data, in orthant coordinates (all x_j >= 0).
  Polynomial f_, mult_, product_;
  std::vector<Polynomial> g_;
  Geometry out_;
};

Geometry Builder::run() {
  out_.eta = eta_;
  out_.delta_scale = delta_scale_;
  std::vector<int> dirs_lo(n_), dirs_hi(n_);
  for (size_t j = 0; j < n_; ++j) {
    Rational dl = pr_.base[j] - pr_.window_lo[j];
    Rational dh = pr_.window_hi[j] - pr_.base[j];
    if (dl.sign() < 0 || dh.sign() < 0) throw SemanticError("base point lies outside the window");
    for (const Rational* d : {&dl, &dh})
      if (d->sign() > 0 && d->to_double() < extent_ * (1.0 - 1e-12))
        throw SemanticError("window edge at distance " + d->str() +
                            " from the base point cuts the support of phi (extent " +
                            std::to_string(extent_) + "); lower eta");
    dirs_lo[j] = dl.sign() > 0;
    dirs_hi[j] = dh.sign() > 0;
  }
  std::vector<int> sigma(n_, 1);
  // Enumerate orthants in a fixed order: + before -, first variable slowest.
  std::function<void(size_t)> rec = [&](size_t j) {
    if (j == n_) {
      orthant(sigma);
      return;
    }
    for (int s : {1, -1}) {
      if ((s > 0 && !dirs_hi[j]) || (s < 0 && !dirs_lo[j])) continue;
      sigma[j] = s;
      rec(j + 1);
    }
  };
  rec(0);
  return std::move(out_);
}

void Builder::orthant(const std::vector<int>& sigma) {
  std::vector<Polynomial> shift_orth(n_);
  for (size_t j = 0; j < n_; ++j)
    shift_orth[j] = Polynomial::constant(n_, pr_.base[j]) + Polynomial::variable(n_, j) * Rational(sigma[j]);
  f_ = pr_.f.compose(shift_orth);
  mult_ = pr_.cutoff.multiplier.compose(shift_orth);
  g_.clear();
  product_ = f_;
  for (const auto& g : pr_.constraints) {
    g_.push_back(g.compose(shift_orth));
    product_ = product_ * g_.back();
  }
  if (f_.is_zero()) throw SemanticError("f is identically zero");
  if (mult_.is_zero()) return;

  std::vector<CutoffFactor> base;
  CutoffProfile b = CutoffProfile::step(pr_.cutoff.c0, pr_.cutoff.c1);
  Rational inv_eta = Rational(1) / eta_;
  if (pr_.cutoff.kind == CutoffKind::Product) {
    for (size_t j = 0; j < n_; ++j)
      base.push_back({b, 0, true, SmoothExpr::constant(n_, inv_eta), Monomial::variable(n_, j)});
  } else {
    Polynomial r2(n_);
    for (size_t j = 0; j < n_; ++j) r2 += Polynomial::variable(n_, j).pow(2);
    base.push_back({b, 0, false, SmoothExpr::from_polynomial(r2 * (inv_eta * inv_eta)), Monomial(n_)});
  }

  std::vector<Proto> work = charts_for(sigma, base);
  for (size_t j = 0; j < n_; ++j) {
    std::vector<Proto> next;
    for (const auto& p : work)
      for (auto& q : split(p, j)) next.push_back(std::move(q));
    work = std::move(next);
  }
  for (const auto& p : work) finalize(p);
}

double Builder::pure_power_bound(const Proto& p, size_t k) const {
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& img : p.map) {
    if (!img.is_monomial()) continue;
    const auto& e = img.terms().begin()->first;
    bool only_k = true;
    for (size_t i = 0; i < e.size(); ++i)
      if (i != k && e[i] != 0) only_k = false;
    if (only_k && e[k] > 0) bound = std::min(bound, std::pow(extent_, 1.0 / e[k]));
  }
  for (const auto& r : p.records) {
    if (r.profile.kind() != ProfileKind::Alpha || !r.euler || r.order != 0) continue;
    if (r.ratio == Monomial::variable(n_, k) && r.scale == SmoothExpr::constant(n_, Rational(1)))
      bound = std::min(bound, alpha_bound_);
  }
  return bound;
}

std::vector<Proto> Builder::charts_for(const std::vector<int>& sigma, const std::vector<CutoffFactor>& base) {
  std::string olabel = "o";
  for (int s : sigma) olabel += s > 0 ? '+' : '-';
  std::vector<Proto> out;
  if (n_ == 1) {
    Proto p{{Polynomial::variable(1, 0)}, base, {0.0}, {0.0}, olabel};
    p.hi[0] = pure_power_bound(p, 0);
    out.push_back(std::move(p));
  } else {
    NewtonPolygon np = newton_polygon(product_);
    std::vector<Polynomial> factors{f_};
    factors.insert(factors.end(), g_.begin(), g_.end());
    check_nondegenerate(np, factors);
    std::vector<Vec2> normals;
    for (const auto& e : np.edges) normals.push_back(e.normal);
    std::vector<Vec2> fan = unimodular_fan(normals);
    size_t K = fan.size() - 2;  // interior rays fan[1..K]
    CutoffProfile alpha = CutoffProfile::alpha(pc0_, pc1_);
    SmoothExpr one = SmoothExpr::constant(2, Rational(1));
    for (size_t i = 0; i + 1 < fan.size(); ++i) {
      const Vec2 v = fan[i], w = fan[i + 1];
      Proto p;
      p.map = toric_map(v, w);
      p.label = olabel + "/c" + std::to_string(i);
      for (const auto& r : base) p.records.push_back(r.substituted(p.map));
      // Telescoping alpha partition: chart i keeps the directions after
      // every interior ray up to fan[i] and before fan[i+1].
      if (i + 1 <= K) p.records.push_back({alpha, 0, true, one, Monomial::variable(2, 0)});
      if (i >= 1) p.records.push_back({alpha, 0, true, one, Monomial::variable(2, 1)});
      for (size_t j = 1; j < i; ++j) {
        const Vec2 r = fan[j];  // 1/rho_r = y^p / x^q
        Exponents e{r[0] * v[1] - r[1] * v[0], r[0] * w[1] - r[1] * w[0]};
        p.records.push_back({alpha, 0, true, one, Monomial(e)});
      }
      p.lo = {0.0, 0.0};
      p.hi = {pure_power_bound(p, 0), pure_power_bound(p, 1)};
      if (!std::isfinite(p.hi[0]) || !std::isfinite(p.hi[1]))
        throw InternalError("chart " + p.label + " has an unbounded box");
      ChartInfo info;
      info.label = p.label;
      info.map = p.map;
      info.jacobian = jacobian_determinant(p.map);
      auto ct = f_.compose(p.map).content();
      info.f_monomial = ct.mono;
      out_.charts.push_back(std::move(info));
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Proto> Builder::split(const Proto& p, size_t j) const {
  if (p.lo[j] != 0.0) return {p};
  for (size_t k = 0; k < n_; ++k)
    if (k != j && p.lo[k] != 0.0) return {p};
  Polynomial pull = product_.compose(p.map);
  Polynomial core = pull.content().core;
  for (size_t k = 0; k < n_; ++k)
    if (k != j) core = core.restrict(k, Rational(0));
  if (core.degree_in(j) < 1) return {p};
  UPoly u(core.univariate(j));
  Rational hi = Rational::from_double(p.hi[j] * (1.0 + 1e-9));
  auto found = real_roots(u, Rational(0), hi);
  if (found.empty()) return {p};

  std::vector<Rational> roots;
  for (const auto& r : found) {
    if (!r.exact)
      throw DegeneracyError("piece " + p.label + ": the exceptional divisor meets the zero set at an irrational point (" +
                            std::to_string(r.approx()) + "); only rational crossing points are supported");
    roots.push_back(*r.exact);
  }
  Rational spacing = roots.front();
  for (size_t i = 0; i + 1 < roots.size(); ++i) spacing = std::min(spacing, roots[i + 1] - roots[i]);
  Rational delta = delta_scale_ * spacing / (Rational(2) * pc1_);

  auto vname = default_var_names(n_)[j];
  CutoffProfile step = CutoffProfile::step(pc0_, pc1_);
  CutoffProfile comp = CutoffProfile::complement(pc0_, pc1_);
  std::vector<Proto> out;
  for (size_t i = 0; i < roots.size(); ++i) {
    const Rational& rho = roots[i];
    for (int side : {1, -1}) {
      std::vector<Polynomial> img(n_);
      for (size_t k = 0; k < n_; ++k) img[k] = Polynomial::variable(n_, k);
      img[j] = Polynomial::constant(n_, rho) + Polynomial::variable(n_, j) * Rational(side);
      Proto q;
      for (const auto& m : p.map) q.map.push_back(m.compose(img));
      for (const auto& r : p.records) q.records.push_back(r.substituted(img));
      q.records.push_back({step, 0, true, SmoothExpr::constant(n_, Rational(1) / delta), Monomial::variable(n_, j)});
      q.lo = p.lo;
      q.hi = p.hi;
      double reach = (pc1_ * delta).to_double();
      q.hi[j] = side > 0 ? std::min(reach, p.hi[j] - rho.to_double()) : std::min(reach, rho.to_double());
      q.label = p.label + "/" + vname + "=" + rho.str() + (side > 0 ? "+" : "-");
      if (q.hi[j] > 0.0) out.push_back(std::move(q));
    }
  }
  // Gaps between consecutive roots, and before the first and after the last.
  Rational inner = pc0_ * delta;
  for (size_t i = 0; i <= roots.size(); ++i) {
    Proto q = p;
    Polynomial xj = Polynomial::variable(n_, j);
    if (i > 0) {
      q.lo[j] = (roots[i - 1] + inner).to_double();
      Polynomial arg = (xj - Polynomial::constant(n_, roots[i - 1])) * (Rational(1) / delta);
      q.records.push_back({comp, 0, false, SmoothExpr::from_polynomial(arg), Monomial(n_)});
    }
    if (i < roots.size()) {
      q.hi[j] = std::min(p.hi[j], (roots[i] - inner).to_double());
      Polynomial arg = (Polynomial::constant(n_, roots[i]) - xj) * (Rational(1) / delta);
      q.records.push_back({comp, 0, false, SmoothExpr::from_polynomial(arg), Monomial(n_)});
    }
    q.label = p.label + "/" + vname + "-gap" + std::to_string(i);
    if (q.lo[j] < q.hi[j]) out.push_back(std::move(q));
  }
  return out;
}

int Builder::certified_sign(const Polynomial& u, const Proto& p, const std::string& what) const {
  Box box(n_);
  for (size_t k = 0; k < n_; ++k) box[k] = Interval(p.lo[k], p.hi[k]);
  try {
    return certify_unit(u, box, p.records, cfg_.certify);
  } catch (const CertificationError& e) {
    throw CertificationError("piece " + p.label + " (" + what + "): " + e.what());
  }
}

void Builder::finalize(const Proto& p) {
  bool corner = std::all_of(p.lo.begin(), p.lo.end(), [](double v) { return v == 0.0; });
  Box box(n_);
  for (size_t k = 0; k < n_; ++k) box[k] = Interval(p.lo[k], p.hi[k]);
  for (const auto& r : p.records)
    if (r.vanishes_on(box)) return;

  auto factor = [&](const Polynomial& poly, const std::string& what) {
    Polynomial pull = poly.compose(p.map);
    Content ct = pull.content();
    if (corner && ct.core.constant_term().is_zero())
      throw DegeneracyError("piece " + p.label + ": " + what + " is not a monomial times a unit after translation (" +
                            ct.core.str() + ")");
    return ct;
  };

  // Membership: every constraint must be positive on the piece.
  for (size_t k = 0; k < g_.size(); ++k) {
    if (g_[k].compose(p.map).is_zero()) {
      ++out_.dropped;
      return;
    }
    Content ct = factor(g_[k], "constraint " + std::to_string(k + 1));
    if (certified_sign(ct.core * ct.scale, p, "constraint " + std::to_string(k + 1)) < 0) {
      ++out_.dropped;
      return;
    }
  }

  Content cf = factor(f_, "f");
  Polynomial unit = cf.core * cf.scale;
  int sf = certified_sign(unit, p, "unit of f");

  Polynomial jac = jacobian_determinant(p.map);
  Content cj = jac.content();
  Polynomial jcore = cj.core * cj.scale;
  int sj = certified_sign(jcore, p, "jacobian");

  Polynomial a_poly = mult_.compose(p.map) * (jcore * Rational(sj));
  if (a_poly.is_zero()) return;

  PieceIntegrand piece;
  piece.n = n_;
  for (size_t k = 0; k < n_; ++k) {
    piece.a.push_back(Rational(cf.mono[k]));
    piece.beta.push_back(Rational(cj.mono[k]));
  }
  piece.unit = {unit * Rational(sf), sf};
  piece.smooth = SmoothExpr::from_polynomial(a_poly);
  for (const auto& r : p.records)
    if (!(r.order == 0 && r.profile.is_one_on(r.argument(box)))) piece.cutoffs.push_back(r);
  piece.lo = p.lo;
  piece.hi = p.hi;
  piece.label = p.label;
  if (piece.trivially_zero()) return;
  out_.pieces.push_back(std::move(piece));
}

}  // namespace

Geometry build_pieces_at(const Problem& problem, const Rational& eta, const GeometryConfig& cfg) {
  Rational scale(1);
  for (int attempt = 0;; ++attempt) {
    try {
      return Builder(problem, eta, scale, cfg).run();
    } catch (const CertificationError&) {
      if (attempt >= cfg.max_delta_halvings) throw;
      scale *= Rational(Integer(1), Integer(2));
    }
  }
}

Geometry build_pieces(const Problem& problem, const GeometryConfig& cfg) {
  if (problem.cutoff.eta) return build_pieces_at(problem, *problem.cutoff.eta, cfg);
  // Largest eta = 2^-k whose support fits inside the window.
  double dmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < problem.dimension; ++j)
    for (const Rational& d : {problem.base[j] - problem.window_lo[j], problem.window_hi[j] - problem.base[j]})
      if (d.sign() > 0) dmin = std::min(dmin, d.to_double());
  Rational eta(1);
  const Rational half(Integer(1), Integer(2));
  while (problem.cutoff.extent(eta.to_double()) > dmin * (1.0 + 1e-12)) eta *= half;
  for (int attempt = 0;; ++attempt) {
    try {
      return build_pieces_at(problem, eta, cfg);
    } catch (const CertificationError&) {
      if (attempt >= cfg.max_eta_halvings) throw;
      eta *= half;
    }
  }
}

}  // namespace lzeta
