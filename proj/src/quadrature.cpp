#include "lzeta/errors.hpp"
#include "lzeta/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>

namespace lzeta {

namespace {

// Kronrod nodes on [-1, 1] with both weight sets; wg is 0 at the nodes
// that only the Kronrod extension uses.
struct Rule {
  std::vector<double> x, wk, wg;
};

template <unsigned G>
Rule make_rule() {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& kx = gauss_kronrod<double, 2 * G + 1>::abscissa();
  const auto& kw = gauss_kronrod<double, 2 * G + 1>::weights();
  const auto& gx = gauss<double, G>::abscissa();
  const auto& gw = gauss<double, G>::weights();
  auto gauss_weight = [&](double v) {
    for (size_t i = 0; i < gx.size(); ++i)
      if (std::abs(gx[i] - v) < 1e-14) return static_cast<double>(gw[i]);
    return 0.0;
  };
  Rule r;
  for (size_t i = kx.size(); i-- > 0;) {
    if (kx[i] == 0.0) continue;
    r.x.push_back(-kx[i]);
    r.wk.push_back(kw[i]);
    r.wg.push_back(gauss_weight(kx[i]));
  }
  for (size_t i = 0; i < kx.size(); ++i) {
    r.x.push_back(kx[i]);
    r.wk.push_back(kw[i]);
    r.wg.push_back(gauss_weight(kx[i]));
  }
  return r;
}

const Rule& rule_for(int order) {
  static const Rule r7 = make_rule<7>(), r10 = make_rule<10>(), r15 = make_rule<15>(), r20 = make_rule<20>(),
                    r25 = make_rule<25>(), r30 = make_rule<30>();
  switch (order) {
    case 7: return r7;
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    case 25: return r25;
    case 30: return r30;
    default:
      throw SemanticError("quadrature order must be one of 7, 10, 15, 20, 25, 30 (got " + std::to_string(order) +
                          ")");
  }
}

// A cutoff argument shared by every record of the group that differs only
// in derivative order: one jet per node serves all of them.
struct ArgEval {
  CutoffProfile profile;
  int scale = 0;  // bank id
  std::vector<int> ratio;
  bool has_ratio = false;
  int max_order = 0;
};

struct RecordEval {
  int arg = 0;
  int order = 0;
  bool euler = true;
};

struct Part {
  int pf = 0;
  int smooth = 0;  // bank id
  int zdeg = 0;
};

struct Shape {
  int beta = 0;  // index into Group::betas
  std::vector<int> records;
  std::vector<Part> parts;
};

// Terms that share a box, the vector a and the unit: one mesh for all.
struct Group {
  size_t n = 0;
  std::vector<double> a, lo, hi;
  std::vector<Rational> a_exact;
  SmoothBank bank;
  int base = -1;  // bank id, -1 when the base is 1
  int sign = 1;
  std::vector<ArgEval> args;
  std::vector<RecordEval> records;
  // Distinct exponent vectors beta + 1; integral ones use the power tables.
  std::vector<std::vector<double>> betas;
  std::vector<std::vector<int>> beta_int;
  std::vector<bool> beta_is_int;
  std::vector<Shape> shapes;
  std::vector<Prefactor> prefactors;
  int zdeg = 0;
};

std::string hexd(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::vector<Group> build_groups(std::span<const RepTerm> terms) {
  struct Builder {
    Group g;
    std::map<CutoffFactor, int> rec;
    std::map<std::string, int> arg;
    std::map<std::string, int> beta;
    std::map<std::string, int> shape;
    std::map<std::string, int> pf;
    std::vector<std::map<int, SmoothExpr>> smooth;  // per shape, per prefactor
  };
  std::map<std::string, Builder> by_key;
  for (const auto& t : terms) {
    const auto& p = t.piece;
    if (p.smooth.is_zero() || p.trivially_zero()) continue;
    std::string key = p.unit.base.str() + "|" + std::to_string(p.unit.sign);
    for (size_t j = 0; j < p.n; ++j) key += "|" + p.a[j].str() + "," + hexd(p.lo[j]) + "," + hexd(p.hi[j]);
    Builder& b = by_key[key];
    Group& g = b.g;
    if (g.n == 0) {
      g.n = p.n;
      g.bank = SmoothBank(p.n);
      g.lo = p.lo;
      g.hi = p.hi;
      g.a_exact = p.a;
      for (const auto& v : p.a) g.a.push_back(v.to_double());
      g.sign = p.unit.sign;
      if (!(p.unit.base.is_constant() && p.unit.base.constant_term() == Rational(1)))
        g.base = g.bank.add(SmoothExpr::from_polynomial(p.unit.base));
    }
    std::vector<int> recs;
    for (const auto& r : p.cutoffs) {
      auto [it, fresh] = b.rec.try_emplace(r, static_cast<int>(b.rec.size()));
      if (fresh) {
        std::string akey = r.profile.str() + "|" + r.scale.str() + "|" + r.ratio.str();
        auto [ait, afresh] = b.arg.try_emplace(akey, static_cast<int>(g.args.size()));
        if (afresh) {
          ArgEval a;
          a.profile = r.profile;
          a.scale = g.bank.add(r.scale);
          a.ratio = r.ratio.exponents();
          a.has_ratio = !r.ratio.is_constant();
          for (size_t j = 0; j < a.ratio.size(); ++j) g.bank.reserve_powers(j, a.ratio[j], a.ratio[j]);
          g.args.push_back(std::move(a));
        }
        ArgEval& a = g.args[ait->second];
        a.max_order = std::max(a.max_order, r.order);
        g.records.push_back({ait->second, r.order, r.euler});
      }
      recs.push_back(it->second);
    }
    std::sort(recs.begin(), recs.end());
    std::string bkey;
    for (const auto& v : p.beta) bkey += v.str() + ",";
    auto [bit, bfresh] = b.beta.try_emplace(bkey, static_cast<int>(g.betas.size()));
    if (bfresh) {
      std::vector<double> bd;
      std::vector<int> bi;
      bool integral = true;
      for (size_t j = 0; j < p.n; ++j) {
        Rational e = p.beta[j] + Rational(1);
        bd.push_back(e.to_double());
        integral = integral && e.is_integer() && std::abs(e.to_double()) < 64.0;
        bi.push_back(integral ? static_cast<int>(e.to_double()) : 0);
      }
      if (integral)
        for (size_t j = 0; j < p.n; ++j) g.bank.reserve_powers(j, bi[j], bi[j]);
      g.betas.push_back(std::move(bd));
      g.beta_int.push_back(std::move(bi));
      g.beta_is_int.push_back(integral);
    }
    std::string skey = bkey;
    for (int r : recs) skey += "r" + std::to_string(r);
    auto [sit, sfresh] = b.shape.try_emplace(skey, static_cast<int>(g.shapes.size()));
    if (sfresh) {
      Shape s;
      s.beta = bit->second;
      s.records = recs;
      g.shapes.push_back(std::move(s));
      b.smooth.emplace_back();
    }
    auto [pit, pfresh] = b.pf.try_emplace(t.prefactor.str(), static_cast<int>(g.prefactors.size()));
    if (pfresh) g.prefactors.push_back(t.prefactor);
    auto& slot = b.smooth[sit->second];
    auto f = slot.find(pit->second);
    if (f == slot.end())
      slot.emplace(pit->second, p.smooth);
    else
      f->second += p.smooth;
  }
  std::vector<Group> out;
  for (auto& [key, b] : by_key) {
    for (size_t s = 0; s < b.g.shapes.size(); ++s)
      for (auto& [pf, expr] : b.smooth[s]) {
        if (expr.is_zero()) continue;
        Part part{pf, b.g.bank.add(expr), expr.z_degree()};
        b.g.zdeg = std::max(b.g.zdeg, part.zdeg);
        b.g.shapes[s].parts.push_back(part);
      }
    out.push_back(std::move(b.g));
  }
  return out;
}

struct Cell {
  std::vector<double> ul, uh;
  std::vector<Complex> value;
  std::vector<double> err, l1;
  std::vector<double> err_dim;  // n * Z
};

class GroupIntegrator {
public:
  GroupIntegrator(const Group& g, std::span<const Complex> zs, const QuadConfig& cfg)
      : g_(g), zs_(zs), cfg_(cfg), rule_(rule_for(cfg.order)), bank_(g.bank) {
    Z_ = zs.size();
    rv_.assign(g.records.size(), 0.0);
    sv_.assign(static_cast<size_t>(g.zdeg) + 2, 0.0);
    arg_.assign(g.args.size(), 0.0);
    deriv_.assign(g.args.size() * kStride, 0.0);
    bw_.assign(g.betas.size(), 0.0);
    bw_ready_.assign(g.betas.size(), 0);
    for (const auto& a : g.args)
      if (a.max_order > Jet::kMaxOrder)
        throw ResourceError("cutoff derivative order " + std::to_string(a.max_order) + " exceeds " +
                            std::to_string(Jet::kMaxOrder));
    D_ = g.zdeg + 1;
    K_ = g.prefactors.size() * D_;
    coef_.assign(Z_ * K_, Complex(0.0));
    // The branch phase of a negative unit is applied by the caller, so the
    // integral here is real on the real axis and symmetric under z -> conj z.
    for (size_t iz = 0; iz < Z_; ++iz) {
      Complex z = zs[iz];
      for (size_t p = 0; p < g.prefactors.size(); ++p) {
        Complex c = g.prefactors[p].eval(z);
        for (size_t d = 0; d < D_; ++d) {
          coef_[iz * K_ + p * D_ + d] = c;
          c *= z;
        }
      }
    }
  }

  // Initial mesh; afterwards total() and l1() hold rough estimates.
  void init() {
    size_t n = g_.n;
    total_.assign(Z_, Complex(0.0));
    err_.assign(Z_, 0.0);
    l1_.assign(Z_, 0.0);
    ul_.assign(n, 0.0);
    uh_.assign(n, 0.0);
    std::vector<std::vector<std::pair<double, double>>> chunks(n);
    std::vector<bool> active(n, false);
    for (size_t j = 0; j < n; ++j) {
      uh_[j] = std::log(g_.hi[j]);
      if (g_.lo[j] > 0.0) {
        ul_[j] = std::log(g_.lo[j]);
        if (!(uh_[j] > ul_[j])) return;
        int m = std::max(1, static_cast<int>(std::ceil((uh_[j] - ul_[j]) / kChunk)));
        for (int i = 0; i < m; ++i)
          chunks[j].push_back(
              {ul_[j] + (uh_[j] - ul_[j]) * i / m, i + 1 == m ? uh_[j] : ul_[j] + (uh_[j] - ul_[j]) * (i + 1) / m});
        continue;
      }
      double sigma = INFINITY;
      for (const auto& s : g_.shapes)
        for (const auto& z : zs_) sigma = std::min(sigma, g_.a[j] * z.real() + g_.betas[s.beta][j] - 1.0);
      if (!(sigma > -0.999))
        throw SemanticError("integrand is not integrable at this z; evaluate right of the representation threshold");
      active[j] = true;
      ul_[j] = uh_[j] - kChunk;
      chunks[j].push_back({ul_[j], uh_[j]});
    }
    // Every cell of the tensor grid; later cells only for new slabs.
    auto add_product = [&](size_t fixed, size_t which) {
      std::vector<size_t> idx(n, 0);
      while (true) {
        Cell c;
        for (size_t j = 0; j < n; ++j) {
          auto ch = j == fixed ? chunks[j][which] : chunks[j][idx[j]];
          c.ul.push_back(ch.first);
          c.uh.push_back(ch.second);
        }
        add(std::move(c));
        size_t j = 0;
        while (j < n && (j == fixed || ++idx[j] == chunks[j].size())) {
          if (j != fixed) idx[j] = 0;
          ++j;
        }
        if (j == n) break;
      }
    };
    add_product(n, 0);

    // Towards an active face the integrand is O(x^(sigma+1)) only once the
    // cutoff supports stop moving, which can be far below hi (the mass may
    // follow a curve like x y^2 = const). Grow the mesh one slab at a time
    // until two consecutive slabs are negligible.
    double tail = std::clamp(1e-3 * cfg_.rel_tol, 1e-16, 1e-10);
    std::vector<int> quiet(n, 0);
    while (true) {
      bool grew = false;
      for (size_t j = 0; j < n; ++j) {
        if (!active[j] || quiet[j] >= 2) continue;
        double bottom = ul_[j];
        double worst = 0.0;
        for (size_t iz = 0; iz < Z_; ++iz) {
          double slab = 0.0;
          for (const auto& c : cells_)
            if (!c.value.empty() && c.ul[j] == bottom) slab += c.l1[iz];
          worst = std::max(worst, slab / std::max(l1_[iz], 1e-300));
        }
        quiet[j] = worst <= tail ? quiet[j] + 1 : 0;
        if (quiet[j] >= 2) continue;
        if (uh_[j] - ul_[j] > 700.0)
          throw AccuracyError("integrand does not decay towards a coordinate face", worst);
        chunks[j].insert(chunks[j].begin(), {ul_[j] - kChunk, ul_[j]});
        ul_[j] -= kChunk;
        add_product(j, 0);
        grew = true;
      }
      if (!grew) break;
    }
  }

  const std::vector<Complex>& total() const { return total_; }
  const std::vector<double>& l1() const { return l1_; }

  /// Refines until every z meets max(rel_tol |value|, abs_tol[z]).
  QuadResult refine(const std::vector<double>& abs_tol) {
    abs_tol_ = abs_tol;
    QuadResult res;
    res.value.assign(Z_, Complex(0.0));
    res.error.assign(Z_, 0.0);
    long splits = 0;
    while (true) {
      bool done = true;
      double worst = 0.0;
      for (size_t iz = 0; iz < Z_; ++iz) {
        double tz = tolerance(iz);
        if (err_[iz] > tz) done = false;
        worst = std::max(worst, err_[iz] / std::max(std::abs(total_[iz]), 1e-300));
      }
      if (done || queue_.empty()) break;
      if (splits >= cfg_.max_subdivisions) {
        throw AccuracyError("quadrature did not converge within " + std::to_string(cfg_.max_subdivisions) +
                                " subdivisions",
                            worst);
      }
      auto [metric, id] = queue_.top();
      queue_.pop();
      Cell parent = std::move(cells_[id]);
      cells_[id].value.clear();
      remove(parent);
      size_t d = split_dim(parent);
      double mid = 0.5 * (parent.ul[d] + parent.uh[d]);
      Cell left, right;
      left.ul = right.ul = parent.ul;
      left.uh = right.uh = parent.uh;
      left.uh[d] = mid;
      right.ul[d] = mid;
      add(std::move(left));
      add(std::move(right));
      ++splits;
    }
    // Deterministic final sum over live cells.
    for (const auto& c : cells_) {
      if (c.value.empty()) continue;
      for (size_t iz = 0; iz < Z_; ++iz) {
        res.value[iz] += c.value[iz];
        res.error[iz] += c.err[iz];
      }
    }
    res.cells = static_cast<long>(cells_.size());
    return res;
  }

private:
  double tolerance(size_t iz) const {
    double a = abs_tol_.empty() ? 0.0 : abs_tol_[iz];
    return std::max(cfg_.rel_tol * std::max(std::abs(total_[iz]), 1e-3 * l1_[iz]), a);
  }

  size_t split_dim(const Cell& c) const {
    size_t best = 0;
    double bv = -1.0;
    for (size_t d = 0; d < g_.n; ++d) {
      double v = 0.0;
      for (size_t iz = 0; iz < Z_; ++iz) v = std::max(v, c.err_dim[d * Z_ + iz] / tolerance(iz));
      if (v > bv) {
        bv = v;
        best = d;
      }
    }
    return best;
  }

  void remove(const Cell& c) {
    for (size_t iz = 0; iz < Z_; ++iz) {
      total_[iz] -= c.value[iz];
      err_[iz] -= c.err[iz];
      l1_[iz] -= c.l1[iz];
    }
  }

  void add(Cell&& c) {
    evaluate(c);
    double metric = 0.0;
    for (size_t iz = 0; iz < Z_; ++iz) {
      total_[iz] += c.value[iz];
      err_[iz] += c.err[iz];
      l1_[iz] += c.l1[iz];
    }
    for (size_t iz = 0; iz < Z_; ++iz) metric = std::max(metric, c.err[iz] / std::max(tolerance(iz), 1e-300));
    cells_.push_back(std::move(c));
    if (metric > 0.0) queue_.push({metric, cells_.size() - 1});
  }

  // Integrand in log coordinates u_j = ln x_j at one node: fills U with
  // the z-free coefficient sums and returns Lambda = sum a_j u_j + ln base.
  bool node(const double* u, const double* x, double& lambda) {
    size_t n = g_.n;
    SmoothBank& bank = bank_;
    bank.prepare(x);
    for (size_t i = 0; i < g_.args.size(); ++i) {
      const ArgEval& a = g_.args[i];
      double t = 0.0;
      bank.eval(a.scale, &t);
      if (a.has_ratio)
        for (size_t j = 0; j < n; ++j) t *= bank.xpow(j, a.ratio[j]);
      double* d = &deriv_[i * kStride];
      arg_[i] = t;
      Interval tr = a.profile.transition();
      if (t <= tr.lo || t >= tr.hi) {
        std::fill(d, d + a.max_order + 1, 0.0);
        d[0] = t <= tr.lo ? a.profile.left_value() : 1.0 - a.profile.left_value();
        continue;
      }
      Jet jet = a.profile.apply(Jet::variable(a.max_order, t));
      double fact = 1.0;
      for (int k = 0; k <= a.max_order; ++k) {
        if (k > 1) fact *= k;
        d[k] = jet[k] * fact;
      }
    }
    for (size_t r = 0; r < g_.records.size(); ++r) {
      const RecordEval& rec = g_.records[r];
      double v = deriv_[rec.arg * kStride + rec.order];
      if (rec.euler && rec.order > 0 && v != 0.0) v *= std::pow(arg_[rec.arg], rec.order);
      rv_[r] = v;
    }
    std::fill(U_.begin(), U_.end(), 0.0);
    std::fill(bw_ready_.begin(), bw_ready_.end(), 0);
    bool any = false;
    for (const auto& s : g_.shapes) {
      double w = 1.0;
      for (int r : s.records) w *= rv_[r];
      if (w == 0.0) continue;
      if (!bw_ready_[s.beta]) {
        double e;
        if (g_.beta_is_int[s.beta]) {
          e = 1.0;
          for (size_t j = 0; j < n; ++j) e *= bank.xpow(j, g_.beta_int[s.beta][j]);
        } else {
          double l = 0.0;
          for (size_t j = 0; j < n; ++j) l += g_.betas[s.beta][j] * u[j];
          e = std::exp(l);
        }
        bw_[s.beta] = e;
        bw_ready_[s.beta] = 1;
      }
      w *= bw_[s.beta];
      for (const auto& part : s.parts) {
        bank.eval(part.smooth, sv_.data());
        for (int d = 0; d <= part.zdeg; ++d) U_[part.pf * D_ + d] += w * sv_[d];
      }
      any = true;
    }
    if (!any) return false;
    lambda = 0.0;
    for (size_t j = 0; j < n; ++j) lambda += g_.a[j] * u[j];
    if (g_.base >= 0) {
      double b = 0.0;
      bank.eval(g_.base, &b);
      lambda += std::log(b);
    }
    return true;
  }

  void evaluate(Cell& c) {
    size_t n = g_.n, m = rule_.x.size();
    U_.assign(K_, 0.0);
    c.value.assign(Z_, Complex(0.0));
    c.l1.assign(Z_, 0.0);
    std::vector<Complex> gd(n * Z_, Complex(0.0));
    std::vector<double> half(n), mid(n);
    for (size_t j = 0; j < n; ++j) {
      half[j] = 0.5 * (c.uh[j] - c.ul[j]);
      mid[j] = 0.5 * (c.uh[j] + c.ul[j]);
    }
    std::vector<size_t> idx(n, 0);
    double u[2], x[2];
    while (true) {
      double wk = 1.0;
      for (size_t j = 0; j < n; ++j) {
        u[j] = mid[j] + half[j] * rule_.x[idx[j]];
        x[j] = std::exp(u[j]);
        wk *= rule_.wk[idx[j]] * half[j];
      }
      double lambda = 0.0;
      if (node(u, x, lambda)) {
        double wg[2];
        for (size_t d = 0; d < n; ++d) wg[d] = wk * rule_.wg[idx[d]] / rule_.wk[idx[d]];
        for (size_t iz = 0; iz < Z_; ++iz) {
          const Complex* cz = &coef_[iz * K_];
          double vr = 0.0, vi = 0.0;
          for (size_t k = 0; k < K_; ++k) {
            vr += cz[k].real() * U_[k];
            vi += cz[k].imag() * U_[k];
          }
          Complex z = zs_[iz];
          double mag = std::exp(z.real() * lambda);
          Complex f;
          if (z.imag() == 0.0) {
            f = Complex(vr * mag, vi * mag);
          } else {
            double sn = std::sin(z.imag() * lambda), cs = std::cos(z.imag() * lambda);
            f = Complex(mag * (vr * cs - vi * sn), mag * (vr * sn + vi * cs));
          }
          c.value[iz] += wk * f;
          c.l1[iz] += wk * mag * std::sqrt(vr * vr + vi * vi);
          for (size_t d = 0; d < n; ++d)
            if (wg[d] != 0.0) gd[d * Z_ + iz] += wg[d] * f;
        }
      }
      size_t j = 0;
      while (j < n && ++idx[j] == m) idx[j++] = 0;
      if (j == n) break;
    }
    c.err.assign(Z_, 0.0);
    c.err_dim.assign(n * Z_, 0.0);
    for (size_t d = 0; d < n; ++d)
      for (size_t iz = 0; iz < Z_; ++iz) {
        // Raw |K - G|. The QUADPACK rescaling underestimates here because
        // the cutoffs are smooth but not analytic.
        double e = std::abs(c.value[iz] - gd[d * Z_ + iz]);
        c.err_dim[d * Z_ + iz] = e;
        c.err[iz] += e;
      }
  }

  const Group& g_;
  std::span<const Complex> zs_;
  const QuadConfig& cfg_;
  const Rule& rule_;
  std::vector<double> abs_tol_;
  std::vector<double> ul_, uh_;
  static constexpr double kChunk = 2.0;
  size_t Z_ = 0, D_ = 1, K_ = 0;
  std::vector<Complex> coef_;
  static constexpr size_t kStride = Jet::kMaxOrder + 1;
  SmoothBank bank_;
  std::vector<double> U_, rv_, sv_, arg_, deriv_, bw_;
  std::vector<char> bw_ready_;
  std::vector<Cell> cells_;
  std::priority_queue<std::pair<double, size_t>> queue_;
  std::vector<Complex> total_;
  std::vector<double> err_, l1_;
};

}  // namespace

QuadResult integrate_terms(std::span<const RepTerm> terms, std::span<const Complex> zs, const QuadConfig& cfg) {
  if (!(cfg.rel_tol > 0.0)) throw SemanticError("quadrature tolerance must be positive");
  QuadResult out;
  out.value.assign(zs.size(), Complex(0.0));
  out.error.assign(zs.size(), 0.0);
  if (zs.empty()) return out;
  std::vector<Group> groups = build_groups(terms);
  if (groups.empty()) return out;

  // Without the phase every group integral satisfies I(conj z) = conj I(z),
  // so only one z of each exactly conjugate pair is integrated.
  std::vector<Complex> uniq;
  std::vector<size_t> source(zs.size());
  std::vector<bool> mirrored(zs.size(), false);
  std::map<std::pair<double, double>, size_t> seen;
  for (size_t iz = 0; iz < zs.size(); ++iz) {
    auto it = seen.find({zs[iz].real(), -zs[iz].imag()});
    if (it != seen.end()) {
      source[iz] = it->second;
      mirrored[iz] = zs[iz].imag() != 0.0;
      continue;
    }
    it = seen.find({zs[iz].real(), zs[iz].imag()});
    if (it != seen.end()) {
      source[iz] = it->second;
      continue;
    }
    source[iz] = uniq.size();
    seen.emplace(std::make_pair(zs[iz].real(), zs[iz].imag()), uniq.size());
    uniq.push_back(zs[iz]);
  }
  auto phase = [&](const Group& g, Complex z) {
    return g.sign < 0 ? std::exp(Complex(0.0, M_PI * cfg.branch) * z) : Complex(1.0);
  };

  std::vector<GroupIntegrator> integrators;
  integrators.reserve(groups.size());
  size_t U = uniq.size();
  std::vector<Complex> rough(U, Complex(0.0));
  std::vector<double> mass(U, 0.0);
  for (const auto& g : groups) {
    integrators.emplace_back(g, uniq, cfg);
    integrators.back().init();
    for (size_t iu = 0; iu < U; ++iu) {
      double scale = std::abs(phase(g, uniq[iu]));
      rough[iu] += phase(g, uniq[iu]) * integrators.back().total()[iu];
      mass[iu] += scale * integrators.back().l1()[iu];
    }
  }
  // Groups far below the size of F only need an absolute accuracy that is
  // a fraction of the overall tolerance.
  double share = 1.0 / static_cast<double>(groups.size());
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    std::vector<double> abs_tol(U);
    for (size_t iu = 0; iu < U; ++iu) {
      double want = share * std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * std::max(std::abs(rough[iu]), 1e-6 * mass[iu]));
      abs_tol[iu] = want / std::abs(phase(groups[gi], uniq[iu]));
    }
    QuadResult r = integrators[gi].refine(abs_tol);
    for (size_t iz = 0; iz < zs.size(); ++iz) {
      Complex v = r.value[source[iz]];
      if (mirrored[iz]) v = std::conj(v);
      Complex ph = phase(groups[gi], zs[iz]);
      out.value[iz] += ph * v;
      out.error[iz] += std::abs(ph) * r.error[source[iz]];
    }
    out.cells += r.cells;
  }
  return out;
}

QuadResult quad_piece(const PieceIntegrand& piece, std::span<const Complex> zs, const QuadConfig& cfg) {
  RepTerm t{Prefactor{}, piece, 0};
  return integrate_terms(std::span<const RepTerm>(&t, 1), zs, cfg);
}

}  // namespace lzeta
