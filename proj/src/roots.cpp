#include "lzeta/roots.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>

namespace lzeta {

UPoly::UPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational UPoly::eval(const Rational& x) const {
  Rational s(0);
  for (size_t i = c_.size(); i-- > 0;) s = s * x + c_[i];
  return s;
}

double UPoly::eval(double x) const {
  double s = 0.0;
  for (size_t i = c_.size(); i-- > 0;) s = s * x + c_[i].to_double();
  return s;
}

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long>(i)));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  UPoly r(*this);
  Rational l = lead();
  for (auto& v : r.c_) v /= l;
  return r;
}

UPoly UPoly::operator-() const {
  UPoly r(*this);
  for (auto& v : r.c_) v = -v;
  return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(c));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw InternalError("UPoly::divmod by zero");
  std::vector<Rational> rem = a.c_;
  int db = b.degree();
  std::vector<Rational> quo(std::max(0, a.degree() - db + 1), Rational(0));
  for (int i = a.degree(); i >= db; --i) {
    if (rem[i].is_zero()) continue;
    Rational f = rem[i] / b.lead();
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.c_[j];
  }
  return {UPoly(std::move(quo)), UPoly(std::move(rem))};
}

UPoly UPoly::gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<std::pair<UPoly, int>> square_free_factorization(const UPoly& p) {
  std::vector<std::pair<UPoly, int>> out;
  if (p.degree() < 1) return out;
  UPoly dp = p.derivative();
  UPoly a = UPoly::gcd(p, dp);
  UPoly b = UPoly::divmod(p, a).first;
  UPoly c = UPoly::divmod(dp, a).first;
  UPoly d = c - b.derivative();
  for (int i = 1; b.degree() >= 1; ++i) {
    UPoly g = UPoly::gcd(b, d);
    if (g.degree() >= 1) out.emplace_back(g, i);
    b = UPoly::divmod(b, g).first;
    c = UPoly::divmod(d, g).first;
    d = c - b.derivative();
  }
  return out;
}

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain{p, p.derivative()};
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    UPoly r = UPoly::divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  if (chain.back().is_zero()) chain.pop_back();
  return chain;
}

static int variations(const std::vector<UPoly>& chain, const Rational& x) {
  int v = 0, prev = 0;
  for (const auto& q : chain) {
    int s = q.sign_at(x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

int sturm_count(const std::vector<UPoly>& chain, const Rational& a, const Rational& b) {
  return variations(chain, a) - variations(chain, b);
}

double RealRoot::approx() const {
  if (exact) return exact->to_double();
  return ((lo + hi) * Rational(Integer(1), Integer(2))).to_double();
}

namespace {

std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<Integer> small, large;
  if (n > Integer("1000000000000")) return {Integer(1)};  // too expensive; only test q = 1
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Leading coefficient of the primitive integer multiple of p.
Integer integer_lead(const UPoly& p) {
  Integer l = 1;
  for (const auto& c : p.coeffs()) l = lzeta::lcm(l, c.den());
  Integer g = 0;
  for (const auto& c : p.coeffs()) g = lzeta::gcd(g, Integer(c.num() * (l / c.den())));
  Rational lead = p.lead() * Rational(l, Integer(1)) / Rational(g, Integer(1));
  return lead.num();
}

// Roots of a square-free polynomial in the open interval (a, b).
void isolate(const UPoly& s, const Rational& a, const Rational& b, const Rational& width,
             int multiplicity, std::vector<RealRoot>& out) {
  auto chain = sturm_chain(s);
  auto open_count = [&](const Rational& lo, const Rational& hi) {
    return sturm_count(chain, lo, hi) - (s.sign_at(hi) == 0 ? 1 : 0);
  };
  Integer lead_abs = abs(integer_lead(s));
  auto qs = divisors(lead_abs);
  Rational sep = Rational(Integer(1), Integer(2 * lead_abs * lead_abs));
  Rational target = std::min(width, sep);
  const Rational half(Integer(1), Integer(2));

  std::vector<std::pair<Rational, Rational>> stack{{a, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    int n = open_count(lo, hi);
    if (n == 0) continue;
    Rational mid = (lo + hi) * half;
    if (n > 1) {
      if (s.sign_at(mid) == 0) out.push_back({mid, mid, mid, multiplicity});
      stack.push_back({mid, hi});
      stack.push_back({lo, mid});
      continue;
    }
    // Exactly one root: refine with Sturm counts, catching exact hits.
    RealRoot r{lo, hi, std::nullopt, multiplicity};
    while (r.hi - r.lo > target) {
      Rational m = (r.lo + r.hi) * half;
      if (s.sign_at(m) == 0) {
        r = {m, m, m, multiplicity};
        break;
      }
      if (open_count(r.lo, m) == 1) r.hi = m;
      else r.lo = m;
    }
    if (!r.exact) {
      // A rational root p/q has q dividing the leading coefficient, and the
      // interval is narrower than the spacing of such fractions.
      for (const auto& q : qs) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), Integer(r.lo.num() * q).get_mpz_t(), r.lo.den().get_mpz_t());
        for (int k = 0; k <= 1; ++k) {
          Rational cand(Integer(fl + k), q);
          if (cand > r.lo && cand < r.hi && s.sign_at(cand) == 0) {
            r = {cand, cand, cand, multiplicity};
            break;
          }
        }
        if (r.exact) break;
      }
    }
    out.push_back(r);
  }
}

}  // namespace

std::vector<RealRoot> real_roots(const UPoly& p, const Rational& a, const Rational& b,
                                 const Rational& width) {
  std::vector<RealRoot> out;
  if (p.is_zero()) throw InternalError("real_roots of the zero polynomial");
  for (const auto& [f, m] : square_free_factorization(p)) isolate(f, a, b, width, m, out);
  std::sort(out.begin(), out.end(), [](const RealRoot& x, const RealRoot& y) { return x.lo < y.lo; });
  return out;
}

std::vector<Rational> rational_roots(const UPoly& p) {
  if (p.degree() < 1) return {};
  // Cauchy bound: every root satisfies |x| < 1 + max |c_i / c_n|.
  Rational bound(1);
  for (const auto& c : p.coeffs()) bound = std::max(bound, (c / p.lead()).abs());
  bound += Rational(1);
  std::vector<Rational> out;
  for (const auto& r : real_roots(p, -bound, bound))
    if (r.exact) out.push_back(*r.exact);
  return out;
}

}  // namespace lzeta
