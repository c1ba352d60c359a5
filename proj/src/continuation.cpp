#include "lzeta/continuation.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace lzeta {

// ---------------------------------------------------------------- Prefactor

void Prefactor::add(const Rational& a, const Rational& b) {
  Factor f{a, b};
  f_.insert(std::upper_bound(f_.begin(), f_.end(), f), f);
}

std::complex<double> Prefactor::eval(std::complex<double> z) const {
  std::complex<double> v = 1.0;
  for (const auto& [a, b] : f_) v /= a.to_double() * z + b.to_double();
  return v;
}

int Prefactor::multiplicity(const Rational& loc) const {
  int m = 0;
  for (const auto& [a, b] : f_)
    if (-b / a == loc) ++m;
  return m;
}

std::string Prefactor::str() const {
  std::string s;
  for (const auto& [a, b] : f_) s += "(" + a.str() + "," + b.str() + ")";
  return s.empty() ? "1" : s;
}

// ------------------------------------------------------------ wedge records

namespace {

std::vector<Polynomial> identity_images(size_t n) {
  std::vector<Polynomial> img;
  for (size_t j = 0; j < n; ++j) img.push_back(Polynomial::variable(n, j));
  return img;
}

// Pulls every factor except the x-monomial back along a polynomial map.
PieceIntegrand substitute(const PieceIntegrand& p, std::span<const Polynomial> images) {
  PieceIntegrand q = p;
  q.unit.base = p.unit.base.compose(images);
  q.smooth = p.smooth.subst(images);
  q.cutoffs.clear();
  for (const auto& r : p.cutoffs) q.cutoffs.push_back(r.substituted(images));
  return q;
}

}  // namespace

std::optional<size_t> first_wedge_record(const PieceIntegrand& p) {
  for (size_t i = 0; i < p.cutoffs.size(); ++i) {
    const auto& r = p.cutoffs[i];
    if (!r.is_B()) continue;
    for (size_t j = 0; j < p.n; ++j)
      if (r.ratio[j] != 0 && p.active(j)) return i;
  }
  return std::nullopt;
}

CaseTag classify_wedge(const PieceIntegrand& p, size_t record) {
  const auto& r = p.cutoffs.at(record);
  std::vector<size_t> pos, neg;
  size_t active = 0;
  for (size_t j = 0; j < p.n; ++j) {
    if (!p.active(j)) continue;
    ++active;
    if (r.ratio[j] > 0) pos.push_back(j);
    if (r.ratio[j] < 0) neg.push_back(j);
  }
  CaseTag tag;
  if (!pos.empty() && !neg.empty()) {
    tag.kind = CaseKind::Case3;
    tag.l = pos.front();
    tag.m = neg.front();
    return tag;
  }
  tag.J = pos.empty() ? neg : pos;
  tag.kind = tag.J.size() == active ? CaseKind::Case1 : CaseKind::Case2;
  return tag;
}

std::vector<double> case_lower_bounds(const PieceIntegrand& p, size_t record, const std::vector<size_t>& J) {
  const auto& r = p.cutoffs.at(record);
  Box box = p.box();
  Exponents outside = r.ratio.exponents();
  for (size_t j : J) outside[j] = 0;
  Interval K = r.scale.eval(box) * Monomial(outside).eval(box);
  Interval band = r.profile.transition();
  bool positive = r.ratio[J.front()] > 0;
  // With positive exponents the argument is at least the band's lower end on
  // the support, with negative ones at most its upper end.
  double need = positive ? band.lo / K.hi : K.lo / band.hi;
  if (!(need > 0.0) || !std::isfinite(need))
    throw InternalError("cannot bound the wedge of record " + r.str() + " on piece " + p.label);
  std::vector<double> out;
  for (size_t j : J) {
    double others = 1.0;
    for (size_t i : J)
      if (i != j) others *= std::pow(p.hi[i], std::abs(r.ratio[i]));
    double c = std::pow(need / others, 1.0 / std::abs(r.ratio[j]));
    out.push_back(c * (1.0 - 1e-12));
  }
  return out;
}

bool freeze_wedge(PieceIntegrand& p, size_t record, const CaseTag& tag) {
  auto bounds = case_lower_bounds(p, record, tag.J);
  for (size_t k = 0; k < tag.J.size(); ++k) {
    size_t j = tag.J[k];
    p.lo[j] = std::max(p.lo[j], bounds[k]);
    if (!(p.lo[j] < p.hi[j])) return false;
  }
  return true;
}

PieceIntegrand equalize_powers(const PieceIntegrand& p, size_t record, std::vector<int>* Mout) {
  const auto& r = p.cutoffs.at(record);
  int L = 1;
  for (size_t j = 0; j < p.n; ++j)
    if (p.active(j) && r.ratio[j] != 0) L = std::lcm(L, std::abs(r.ratio[j]));
  std::vector<int> M(p.n, 1);
  for (size_t j = 0; j < p.n; ++j)
    if (p.active(j) && r.ratio[j] != 0) M[j] = L / std::abs(r.ratio[j]);
  if (Mout) *Mout = M;
  if (std::all_of(M.begin(), M.end(), [](int v) { return v == 1; })) return p;

  std::vector<Polynomial> img = identity_images(p.n);
  for (size_t j = 0; j < p.n; ++j)
    if (M[j] != 1) img[j] = Polynomial::variable(p.n, j).pow(static_cast<unsigned>(M[j]));
  PieceIntegrand q = substitute(p, img);
  Rational jac(1);
  for (size_t j = 0; j < p.n; ++j) {
    if (M[j] == 1) continue;
    Rational Mj(M[j]);
    q.a[j] = Mj * p.a[j];
    q.beta[j] = Mj * p.beta[j] + Mj - Rational(1);
    q.hi[j] = std::pow(p.hi[j], 1.0 / M[j]);
    q.lo[j] = std::pow(p.lo[j], 1.0 / M[j]);
    jac *= Mj;
  }
  q.smooth *= jac;
  return q;
}

std::pair<PieceIntegrand, PieceIntegrand> case3_split(const PieceIntegrand& p, size_t l, size_t m,
                                                      const CutoffProfile& alpha) {
  auto make = [&](size_t keep, size_t absorb, const std::string& tag) {
    // alpha(x_keep / x_absorb), then x_keep -> x_keep * x_absorb.
    PieceIntegrand q = p;
    Exponents e(p.n, 0);
    e[keep] = 1;
    e[absorb] = -1;
    q.cutoffs.push_back({alpha, 0, true, SmoothExpr::constant(p.n, Rational(1)), Monomial(e)});
    std::vector<Polynomial> img = identity_images(p.n);
    img[keep] = Polynomial::variable(p.n, keep) * Polynomial::variable(p.n, absorb);
    PieceIntegrand r = substitute(q, img);
    r.a[absorb] = p.a[absorb] + p.a[keep];
    r.beta[absorb] = p.beta[absorb] + p.beta[keep] + Rational(1);
    r.hi[keep] = alpha.transition().hi;
    r.label = p.label + "/" + tag;
    return r;
  };
  auto names = default_var_names(p.n);
  return {make(l, m, names[l] + "<" + names[m]), make(m, l, names[m] + "<" + names[l])};
}

// --------------------------------------------------- integration by parts

std::vector<PieceIntegrand> derivative_split(const PieceIntegrand& p, size_t j, std::vector<std::string>* tags) {
  std::vector<PieceIntegrand> out;
  auto emit = [&](PieceIntegrand&& q, const char* tag) {
    if (q.smooth.is_zero()) return;
    out.push_back(std::move(q));
    if (tags) tags->push_back(tag);
  };
  PieceIntegrand raised = p;
  raised.beta[j] += Rational(1);

  Polynomial du = p.unit.base.diff(j);
  if (!du.is_zero()) {
    PieceIntegrand q = raised;
    q.smooth = -(p.smooth * SmoothExpr::from_polynomial(du) * SmoothExpr::power(p.unit.base, -1)).times_z();
    emit(std::move(q), "D-UNIT");
  }
  {
    PieceIntegrand q = raised;
    q.smooth = -p.smooth.diff(j);
    emit(std::move(q), "D-SMOOTH");
  }
  for (size_t i = 0; i < p.cutoffs.size(); ++i) {
    const auto& r = p.cutoffs[i];
    SmoothExpr dc = r.scale.diff(j);
    if (r.euler) {
      if (r.ratio[j] == 0 && dc.is_zero()) continue;
      // x_j d_j E_k = (x_j d_j c / c + e_j) (k E_k + E_{k+1}); the 1/x_j
      // cancels the raised exponent, so beta_j is unchanged here.
      SmoothExpr factor = SmoothExpr::constant(p.n, Rational(r.ratio[j]));
      if (!dc.is_zero()) {
        Exponents ej(p.n, 0);
        ej[j] = 1;
        factor += SmoothExpr::monomial(ej) * dc * r.scale.inverse();
      }
      if (factor.is_zero()) continue;
      SmoothExpr base = -(p.smooth * factor);
      if (r.order >= 1) {
        PieceIntegrand q = p;
        q.smooth = base * Rational(r.order);
        emit(std::move(q), "D-CUTOFF");
      }
      PieceIntegrand q = p;
      q.smooth = base;
      q.cutoffs[i].order += 1;
      emit(std::move(q), "D-CUTOFF");
    } else {
      if (dc.is_zero()) continue;
      PieceIntegrand q = raised;
      q.smooth = -(p.smooth * dc);
      q.cutoffs[i].order += 1;
      emit(std::move(q), "D-CUTOFF");
    }
  }
  return out;
}

IbpResult ibp_step(const PieceIntegrand& p, size_t j) {
  if (!p.active(j)) throw InternalError("ibp_step on a frozen variable");
  if (p.a[j].sign() <= 0) throw InternalError("ibp_step needs a_j > 0");
  IbpResult r;
  r.factor = {p.a[j], p.beta[j] + Rational(1)};
  r.terms = derivative_split(p, j, &r.tags);
  return r;
}

std::optional<Rational> threshold(const PieceIntegrand& p) {
  std::optional<Rational> t;
  for (size_t j = 0; j < p.n; ++j) {
    if (!p.active(j) || p.a[j].sign() <= 0) continue;
    Rational v = -(p.beta[j] + Rational(1)) / p.a[j];
    if (!t || v > *t) t = v;
  }
  return t;
}

std::optional<Rational> depth_target(const std::vector<PieceIntegrand>& pieces, int L) {
  std::optional<Rational> t;
  for (const auto& p : pieces)
    for (size_t j = 0; j < p.n; ++j) {
      if (!p.active(j) || p.a[j].sign() <= 0) continue;
      Rational v = -(p.beta[j] + Rational(1) + Rational(L + 1)) / p.a[j];
      if (!t || v > *t) t = v;
    }
  return t;
}

// ------------------------------------------------------------ the rewrite loop

namespace {

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

// Everything except the smooth factor and the label: terms with equal keys
// are integrals of the same shape and can be merged by adding smooth factors.
std::string merge_key(const RepTerm& t) {
  const auto& p = t.piece;
  std::ostringstream os;
  os << t.prefactor.str() << '|' << t.cycle << '|';
  for (size_t j = 0; j < p.n; ++j) os << p.a[j] << ',' << p.beta[j] << ',' << hex(p.lo[j]) << ',' << hex(p.hi[j]) << ';';
  os << '|' << p.unit.sign << p.unit.base.str() << '|';
  for (const auto& r : p.cutoffs) os << r.str() << ';';
  return os.str();
}

class Rewriter {
public:
  Rewriter(const std::optional<Rational>& target, const ContinuationConfig& cfg) : target_(target), cfg_(cfg) {}

  MeromorphicRep run(const std::vector<PieceIntegrand>& pieces) {
    std::map<std::string, RepTerm> wave;
    for (const auto& p : pieces) insert(wave, RepTerm{Prefactor{}, p, 0});
    while (!wave.empty()) {
      std::map<std::string, RepTerm> next;
      for (auto& [key, term] : wave) step(std::move(term), next);
      wave = std::move(next);
    }
    MeromorphicRep rep;
    rep.target = target_;
    rep.rewrites = created_;
    for (auto& [key, term] : done_) rep.terms.push_back(std::move(term));
    rep.trace = std::move(trace_);
    return rep;
  }

private:
  void insert(std::map<std::string, RepTerm>& into, RepTerm&& t) {
    if (t.piece.smooth.is_zero()) return;
    if (++created_ > cfg_.max_terms)
      throw ResourceError("continuation exceeded the term budget of " + std::to_string(cfg_.max_terms) +
                          "; lower the depth or raise max_terms");
    std::string key = merge_key(t);
    auto it = into.find(key);
    if (it == into.end()) {
      into.emplace(std::move(key), std::move(t));
      return;
    }
    it->second.piece.smooth += t.piece.smooth;
    if (it->second.piece.smooth.is_zero()) into.erase(it);
  }

  void note(const RepTerm& t, const std::string& what) {
    if (!cfg_.trace) return;
    if (trace_.size() >= kTraceCap) {
      if (trace_.size() == kTraceCap) trace_.push_back("... trace truncated");
      return;
    }
    trace_.push_back(std::string(2 * t.prefactor.factors().size(), ' ') + what + " [" + t.piece.label + "]");
  }

  bool needs(const PieceIntegrand& p, size_t j) const {
    if (!target_ || !p.active(j) || p.a[j].sign() <= 0) return false;
    return p.a[j] * *target_ + p.beta[j] < Rational(cfg_.margin);
  }

  void step(RepTerm&& t, std::map<std::string, RepTerm>& next) {
    auto names = default_var_names(t.piece.n);
    // Resolve wedge records first: an undifferentiated exponent never
    // improves while such a record still involves an active variable.
    while (auto idx = first_wedge_record(t.piece)) {
      CaseTag tag = classify_wedge(t.piece, *idx);
      if (tag.kind == CaseKind::Case3) {
        std::vector<int> M;
        PieceIntegrand eq = equalize_powers(t.piece, *idx, &M);
        if (!std::all_of(M.begin(), M.end(), [](int v) { return v == 1; })) note(t, "EQUALIZE");
        note(t, "CASE3-SPLIT " + names[tag.l] + "," + names[tag.m]);
        auto [p1, p2] = case3_split(eq, tag.l, tag.m, cfg_.alpha);
        for (auto* p : {&p1, &p2}) {
          if (p->trivially_zero()) continue;
          insert(next, RepTerm{t.prefactor, std::move(*p), t.cycle});
        }
        return;
      }
      std::string vars;
      for (size_t j : tag.J) vars += names[j];
      note(t, (tag.kind == CaseKind::Case1 ? "CASE1 " : "CASE2 ") + vars);
      if (!freeze_wedge(t.piece, *idx, tag)) return;
    }
    if (t.piece.trivially_zero()) return;

    size_t n = t.piece.n;
    for (size_t k = 0; k < n; ++k) {
      size_t j = (static_cast<size_t>(t.cycle) + k) % n;
      if (!needs(t.piece, j)) continue;
      IbpResult r = ibp_step(t.piece, j);
      note(t, "IBP " + names[j] + " (" + r.factor.first.str() + "," + r.factor.second.str() + ")");
      Prefactor pf = t.prefactor;
      pf.add(r.factor.first, r.factor.second);
      for (size_t i = 0; i < r.terms.size(); ++i) {
        RepTerm child{pf, std::move(r.terms[i]), static_cast<int>((j + 1) % n)};
        note(child, r.tags[i]);
        insert(next, std::move(child));
      }
      return;
    }
    std::string key = merge_key(t);
    auto it = done_.find(key);
    if (it == done_.end()) {
      done_.emplace(std::move(key), std::move(t));
    } else {
      it->second.piece.smooth += t.piece.smooth;
      if (it->second.piece.smooth.is_zero()) done_.erase(it);
    }
  }

  static constexpr size_t kTraceCap = 200000;
  std::optional<Rational> target_;
  const ContinuationConfig& cfg_;
  std::map<std::string, RepTerm> done_;
  std::vector<std::string> trace_;
  long created_ = 0;
};

}  // namespace

MeromorphicRep continue_to(const std::vector<PieceIntegrand>& pieces, const std::optional<Rational>& target,
                           const ContinuationConfig& cfg) {
  return Rewriter(target, cfg).run(pieces);
}

PoleCatalog pole_catalog(const MeromorphicRep& rep, size_t dimension) {
  PoleCatalog cat;
  cat.target = rep.target;
  cat.dimension = dimension;
  std::map<Rational, int> mult;
  for (const auto& t : rep.terms) {
    std::map<Rational, int> here;
    for (const auto& [a, b] : t.prefactor.factors()) {
      Rational loc = -b / a;
      Integer d = (a.is_integer() && b.is_integer()) ? a.num() : loc.den();
      cat.N = lcm(cat.N, d);
      if (loc.sign() < 0 && (!rep.target || loc > *rep.target)) ++here[loc];
    }
    for (const auto& [loc, m] : here) mult[loc] = std::max(mult[loc], m);
  }
  for (auto it = mult.rbegin(); it != mult.rend(); ++it) {
    PoleEntry e;
    e.location = it->first;
    e.max_multiplicity = it->second;
    e.order_bound = std::min<int>(it->second, static_cast<int>(dimension));
    cat.entries.push_back(e);
  }
  return cat;
}

}  // namespace lzeta
