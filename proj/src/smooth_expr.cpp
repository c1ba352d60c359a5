#include "lzeta/smooth_expr.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lzeta {

// -------------------------------------------------------------------- ZPoly

void ZPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

ZPoly& ZPoly::operator+=(const ZPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

ZPoly& ZPoly::operator*=(const Rational& s) {
  if (s.is_zero()) c_.clear();
  for (auto& v : c_) v *= s;
  return *this;
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
  ZPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  r.trim();
  return r;
}

ZPoly ZPoly::times_z() const {
  ZPoly r;
  if (is_zero()) return r;
  r.c_.reserve(c_.size() + 1);
  r.c_.push_back(Rational(0));
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

std::complex<double> ZPoly::eval(std::complex<double> z) const {
  std::complex<double> s = 0.0;
  for (size_t i = c_.size(); i-- > 0;) s = s * z + c_[i].to_double();
  return s;
}

std::string ZPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t d = 0; d < c_.size(); ++d) {
    if (c_[d].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[d].str();
    if (d == 1) os << "*z";
    if (d > 1) os << "*z^" << d;
  }
  return os.str();
}

// --------------------------------------------------------------- SmoothExpr

void SmoothExpr::add_term(const Key& k, const ZPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SmoothExpr SmoothExpr::constant(size_t n, const Rational& c) {
  SmoothExpr e(n);
  e.add_term(Key{Exponents(n, 0), {}}, ZPoly(c));
  return e;
}

SmoothExpr SmoothExpr::from_polynomial(const Polynomial& p) {
  SmoothExpr e(p.nvars());
  for (const auto& [ex, c] : p.terms()) e.add_term(Key{ex, {}}, ZPoly(c));
  return e;
}

SmoothExpr SmoothExpr::monomial(const Exponents& ex, const Rational& c) {
  SmoothExpr e(ex.size());
  e.add_term(Key{ex, {}}, ZPoly(c));
  return e;
}

SmoothExpr SmoothExpr::power(const Polynomial& q, int k) {
  if (q.is_zero()) {
    if (k < 0) throw InternalError("SmoothExpr::power: inverse of zero");
    return SmoothExpr(q.nvars());
  }
  size_t n = q.nvars();
  if (k == 0) return constant(n, Rational(1));
  auto ct = q.content();
  Exponents vars(n);
  for (size_t j = 0; j < n; ++j) vars[j] = ct.mono[j] * k;
  SmoothExpr e(n);
  if (ct.core.is_constant()) {
    e.add_term(Key{vars, {}}, ZPoly(ct.scale.pow(k) * ct.core.constant_term().pow(k)));
  } else {
    e.add_term(Key{vars, {{ct.core, k}}}, ZPoly(ct.scale.pow(k)));
  }
  return e;
}

int SmoothExpr::z_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, c.degree());
  return d;
}

std::vector<Polynomial> SmoothExpr::atoms() const {
  std::vector<Polynomial> out;
  for (const auto& [k, c] : terms_)
    for (const auto& [q, p] : k.atoms) out.push_back(q);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SmoothExpr SmoothExpr::operator-() const {
  SmoothExpr r(*this);
  for (auto& [k, c] : r.terms_) c *= Rational(-1);
  return r;
}

SmoothExpr& SmoothExpr::operator+=(const SmoothExpr& o) {
  if (n_ == 0 && terms_.empty()) n_ = o.n_;
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

SmoothExpr& SmoothExpr::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

SmoothExpr::AtomPowers SmoothExpr::merge_atoms(const AtomPowers& a, const AtomPowers& b) {
  AtomPowers out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      int p = a[i].second + b[j].second;
      if (p != 0) out.emplace_back(a[i].first, p);
      ++i;
      ++j;
    }
  }
  return out;
}

SmoothExpr operator*(const SmoothExpr& a, const SmoothExpr& b) {
  SmoothExpr r(std::max(a.n_, b.n_));
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      SmoothExpr::Key k;
      k.vars.resize(r.n_);
      for (size_t j = 0; j < r.n_; ++j) k.vars[j] = ka.vars[j] + kb.vars[j];
      k.atoms = SmoothExpr::merge_atoms(ka.atoms, kb.atoms);
      r.add_term(k, ca * cb);
    }
  return r;
}

SmoothExpr SmoothExpr::times_z() const {
  SmoothExpr r(n_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, c.times_z());
  return r;
}

SmoothExpr SmoothExpr::diff(size_t j) const {
  SmoothExpr out(n_);
  for (const auto& [k, c] : terms_) {
    // Derivative of the monomial part.
    if (k.vars[j] != 0) {
      Key d = k;
      d.vars[j] -= 1;
      ZPoly cc = c;
      cc *= Rational(k.vars[j]);
      out.add_term(d, cc);
    }
    // Derivative of each atom power: k_i Q_i^{k_i-1} dQ_i.
    for (size_t i = 0; i < k.atoms.size(); ++i) {
      const auto& [q, p] = k.atoms[i];
      Polynomial dq = q.diff(j);
      if (dq.is_zero()) continue;
      Key rest = k;
      if (p - 1 == 0) rest.atoms.erase(rest.atoms.begin() + static_cast<long>(i));
      else rest.atoms[i].second = p - 1;
      SmoothExpr base(n_);
      ZPoly cc = c;
      cc *= Rational(p);
      base.add_term(rest, cc);
      out += base * from_polynomial(dq);
    }
  }
  return out;
}

SmoothExpr SmoothExpr::subst(std::span<const Polynomial> images) const {
  if (images.size() != n_) throw InternalError("SmoothExpr::subst: arity mismatch");
  size_t m = images.empty() ? 0 : images[0].nvars();
  SmoothExpr out(m);
  std::map<std::pair<size_t, int>, SmoothExpr> var_cache;
  std::map<std::pair<Polynomial, int>, SmoothExpr> atom_cache;
  for (const auto& [k, c] : terms_) {
    SmoothExpr t(m);
    t.add_term(Key{Exponents(m, 0), {}}, c);
    for (size_t j = 0; j < n_; ++j) {
      int e = k.vars[j];
      if (e == 0) continue;
      auto it = var_cache.find({j, e});
      if (it == var_cache.end()) {
        SmoothExpr f = e > 0 ? from_polynomial(images[j].pow(static_cast<unsigned>(e)))
                             : power(images[j], e);
        it = var_cache.emplace(std::make_pair(j, e), std::move(f)).first;
      }
      t = t * it->second;
    }
    for (const auto& [q, p] : k.atoms) {
      auto key = std::make_pair(q, p);
      auto it = atom_cache.find(key);
      if (it == atom_cache.end())
        it = atom_cache.emplace(key, power(q.compose(images), p)).first;
      t = t * it->second;
    }
    out += t;
  }
  return out;
}

SmoothExpr SmoothExpr::inverse() const {
  if (terms_.size() == 1 && terms_.begin()->second.degree() == 0) {
    const auto& [k, c] = *terms_.begin();
    Key inv = k;
    for (int& e : inv.vars) e = -e;
    for (auto& a : inv.atoms) a.second = -a.second;
    SmoothExpr r(n_);
    r.add_term(inv, ZPoly(Rational(1) / c[0]));
    return r;
  }
  if (is_polynomial()) return power(to_polynomial(), -1);
  throw InternalError("SmoothExpr::inverse: unsupported form " + str());
}

std::vector<double> SmoothExpr::eval(std::span<const double> x) const {
  std::vector<double> out(static_cast<size_t>(std::max(0, z_degree() + 1)), 0.0);
  for (const auto& [k, c] : terms_) {
    double v = 1.0;
    for (size_t j = 0; j < n_; ++j)
      if (k.vars[j] != 0) v *= std::pow(x[j], k.vars[j]);
    for (const auto& [q, p] : k.atoms) v *= std::pow(q.eval(x), p);
    for (size_t d = 0; d < c.coeffs().size(); ++d) out[d] += v * c.coeffs()[d].to_double();
  }
  return out;
}

std::complex<double> SmoothExpr::eval(std::span<const double> x, std::complex<double> z) const {
  auto v = eval(x);
  std::complex<double> s = 0.0;
  for (size_t d = v.size(); d-- > 0;) s = s * z + v[d];
  return s;
}

Interval SmoothExpr::eval(const Box& box) const {
  Interval sum(0.0);
  std::map<Polynomial, Interval> cache;
  for (const auto& [k, c] : terms_) {
    if (c.degree() > 0) throw InternalError("interval evaluation of a z-dependent expression");
    Interval v = Interval(c[0].to_double()).widened();
    for (size_t j = 0; j < n_; ++j)
      if (k.vars[j] != 0) v = v * ipow(box[j], k.vars[j]);
    for (const auto& [q, p] : k.atoms) {
      auto it = cache.find(q);
      if (it == cache.end()) it = cache.emplace(q, q.eval(box)).first;
      v = v * ipow(it->second, p);
    }
    sum = sum + v;
  }
  return sum;
}

bool SmoothExpr::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& [k, c] = *terms_.begin();
  if (!k.atoms.empty() || c.degree() > 0) return false;
  for (int e : k.vars)
    if (e != 0) return false;
  return true;
}

Rational SmoothExpr::constant_value() const {
  if (!is_constant()) throw InternalError("SmoothExpr::constant_value: not constant");
  return terms_.empty() ? Rational(0) : terms_.begin()->second[0];
}

bool SmoothExpr::is_polynomial() const {
  for (const auto& [k, c] : terms_) {
    if (!k.atoms.empty() || c.degree() > 0) return false;
    for (int e : k.vars)
      if (e < 0) return false;
  }
  return true;
}

Polynomial SmoothExpr::to_polynomial() const {
  if (!is_polynomial()) throw InternalError("SmoothExpr::to_polynomial: not a polynomial");
  Polynomial p(n_);
  for (const auto& [k, c] : terms_) p += Polynomial::term(k.vars, c[0]);
  return p;
}

std::string SmoothExpr::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  auto names = default_var_names(n_);
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    Monomial m(k.vars);
    if (!m.is_constant()) os << "*" << m.str(names);
    for (const auto& [q, p] : k.atoms) os << "*(" << q.str(names) << ")^" << p;
  }
  return os.str();
}

bool operator<(const SmoothExpr& a, const SmoothExpr& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  return std::lexicographical_compare(
      a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
      [](const auto& x, const auto& y) {
        if (x.first < y.first) return true;
        if (y.first < x.first) return false;
        return x.second.coeffs() < y.second.coeffs();
      });
}

// ----------------------------------------------------------- CompiledSmooth

CompiledSmooth::CompiledSmooth(const SmoothExpr& e) : n_(e.nvars()), zdeg_(std::max(0, e.z_degree())) {
  std::map<Polynomial, int> index;
  for (const auto& q : e.atoms()) {
    index.emplace(q, static_cast<int>(atoms_.size()));
    FlatPoly f;
    for (const auto& [ex, c] : q.terms()) {
      f.coeff.push_back(c.to_double());
      f.exps.insert(f.exps.end(), ex.begin(), ex.end());
    }
    atoms_.push_back(std::move(f));
  }
  for (const auto& [k, c] : e.terms()) {
    Term t;
    t.vars = k.vars;
    for (const auto& [q, p] : k.atoms) t.atoms.emplace_back(index.at(q), p);
    for (const auto& r : c.coeffs()) t.coeff.push_back(r.to_double());
    terms_.push_back(std::move(t));
  }
  atom_vals_.resize(atoms_.size());
}

static inline double ipow_d(double x, int e) {
  if (e == 0) return 1.0;
  bool neg = e < 0;
  unsigned u = static_cast<unsigned>(neg ? -e : e);
  double r = 1.0, b = x;
  while (u) {
    if (u & 1u) r *= b;
    u >>= 1u;
    if (u) b *= b;
  }
  return neg ? 1.0 / r : r;
}

void CompiledSmooth::eval(const double* x, double* out) const {
  for (int d = 0; d <= zdeg_; ++d) out[d] = 0.0;
  for (size_t a = 0; a < atoms_.size(); ++a) {
    const auto& f = atoms_[a];
    double s = 0.0;
    for (size_t t = 0; t < f.coeff.size(); ++t) {
      double v = f.coeff[t];
      const int* ex = &f.exps[t * n_];
      for (size_t j = 0; j < n_; ++j) v *= ipow_d(x[j], ex[j]);
      s += v;
    }
    atom_vals_[a] = s;
  }
  for (const auto& t : terms_) {
    double v = 1.0;
    for (size_t j = 0; j < n_; ++j) v *= ipow_d(x[j], t.vars[j]);
    for (const auto& [a, p] : t.atoms) v *= ipow_d(atom_vals_[a], p);
    for (size_t d = 0; d < t.coeff.size(); ++d) out[d] += v * t.coeff[d];
  }
}

void SmoothBank::reserve_powers(size_t var, int lo, int hi) {
  xmin_[var] = std::min(xmin_[var], lo);
  xmax_[var] = std::max(xmax_[var], hi);
}

int SmoothBank::add(const SmoothExpr& e) {
  if (e.nvars() != n_ || n_ > 2) throw InternalError("smooth bank holds expressions in one fixed set of <= 2 variables");
  Expr out;
  out.zdeg = std::max(0, e.z_degree());
  for (const auto& q : e.atoms()) {
    auto [it, fresh] = atom_index_.try_emplace(q, static_cast<int>(atoms_.size()));
    if (!fresh) continue;
    Atom a;
    for (const auto& [ex, c] : q.terms()) {
      a.coeff.push_back(c.to_double());
      a.exps.insert(a.exps.end(), ex.begin(), ex.end());
      for (size_t j = 0; j < n_; ++j) reserve_powers(j, ex[j], ex[j]);
    }
    atoms_.push_back(std::move(a));
  }
  for (const auto& [k, c] : e.terms()) {
    Term t;
    for (size_t j = 0; j < n_; ++j) {
      t.e[j] = k.vars[j];
      reserve_powers(j, k.vars[j], k.vars[j]);
    }
    t.atom_begin = static_cast<int>(atom_refs_.size());
    for (const auto& [q, p] : k.atoms) {
      int ai = atom_index_.at(q);
      atom_refs_.emplace_back(ai, p);
      atoms_[ai].pmin = std::min(atoms_[ai].pmin, p);
      atoms_[ai].pmax = std::max(atoms_[ai].pmax, p);
    }
    t.atom_end = static_cast<int>(atom_refs_.size());
    t.coeff_begin = static_cast<int>(coeffs_.size());
    const auto& cs = c.coeffs();
    for (int d = 0; d <= out.zdeg; ++d) coeffs_.push_back(d < static_cast<int>(cs.size()) ? cs[d].to_double() : 0.0);
    out.terms.push_back(t);
  }
  exprs_.push_back(std::move(out));
  return static_cast<int>(exprs_.size()) - 1;
}

namespace {

// table[e - lo] = v^e for e in [lo, hi], lo <= 0 <= hi.
void power_table(double v, int lo, int hi, std::vector<double>& table) {
  table.resize(static_cast<size_t>(hi - lo + 1));
  double* zero = &table[static_cast<size_t>(-lo)];
  zero[0] = 1.0;
  for (int e = 1; e <= hi; ++e) zero[e] = zero[e - 1] * v;
  double inv = 1.0 / v;
  for (int e = -1; e >= lo; --e) zero[e] = zero[e + 1] * inv;
}

}  // namespace

void SmoothBank::prepare(const double* x) {
  for (size_t j = 0; j < n_; ++j) power_table(x[j], xmin_[j], xmax_[j], xpow_[j]);
  apow_.resize(atoms_.size());
  for (size_t a = 0; a < atoms_.size(); ++a) {
    const auto& f = atoms_[a];
    double s = 0.0;
    for (size_t t = 0; t < f.coeff.size(); ++t) {
      double v = f.coeff[t];
      for (size_t j = 0; j < n_; ++j) v *= xpow(j, f.exps[t * n_ + j]);
      s += v;
    }
    power_table(s, f.pmin, f.pmax, apow_[a]);
  }
}

void SmoothBank::eval(int id, double* out) const {
  const Expr& e = exprs_[id];
  for (int d = 0; d <= e.zdeg; ++d) out[d] = 0.0;
  for (const auto& t : e.terms) {
    double v = 1.0;
    for (size_t j = 0; j < n_; ++j) v *= xpow(j, t.e[j]);
    for (int r = t.atom_begin; r < t.atom_end; ++r) {
      const auto& [a, p] = atom_refs_[r];
      v *= apow_[a][p - atoms_[a].pmin];
    }
    const double* c = &coeffs_[t.coeff_begin];
    for (int d = 0; d <= e.zdeg; ++d) out[d] += v * c[d];
  }
}

}  // namespace lzeta
