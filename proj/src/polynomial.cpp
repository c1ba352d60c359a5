#include "lzeta/polynomial.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace lzeta {

std::vector<std::string> default_var_names(size_t n) {
  static const char* base[] = {"x", "y", "z", "w"};
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i)
    out.push_back(i < 4 ? std::string(base[i]) : "x" + std::to_string(i));
  return out;
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(size_t n, size_t j, int power) {
  Monomial m(n);
  m.exps_[j] = power;
  return m;
}

bool Monomial::is_constant() const {
  return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
}

Monomial Monomial::numerator() const {
  Monomial m(nvars());
  for (size_t j = 0; j < nvars(); ++j) m.exps_[j] = std::max(0, exps_[j]);
  return m;
}

Monomial Monomial::denominator() const {
  Monomial m(nvars());
  for (size_t j = 0; j < nvars(); ++j) m.exps_[j] = std::max(0, -exps_[j]);
  return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m(*this);
  for (size_t j = 0; j < nvars(); ++j) m.exps_[j] += o.exps_[j];
  return m;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial m(*this);
  for (size_t j = 0; j < nvars(); ++j) m.exps_[j] -= o.exps_[j];
  return m;
}

Monomial Monomial::inverse() const { return pow(-1); }

Monomial Monomial::pow(int e) const {
  Monomial m(*this);
  for (int& v : m.exps_) v *= e;
  return m;
}

double Monomial::eval(std::span<const double> x) const {
  double r = 1.0;
  for (size_t j = 0; j < nvars(); ++j)
    if (exps_[j] != 0) r *= std::pow(x[j], exps_[j]);
  return r;
}

Interval Monomial::eval(const Box& box) const {
  Interval r(1.0);
  for (size_t j = 0; j < nvars(); ++j)
    if (exps_[j] != 0) r = r * ipow(box[j], exps_[j]);
  return r;
}

std::string Monomial::str(std::span<const std::string> names) const {
  std::ostringstream os;
  bool first = true;
  for (size_t j = 0; j < nvars(); ++j) {
    if (exps_[j] == 0) continue;
    if (!first) os << '*';
    first = false;
    os << names[j];
    if (exps_[j] != 1) os << '^' << exps_[j];
  }
  return first ? "1" : os.str();
}

std::string Monomial::str() const { return str(default_var_names(nvars())); }

// -------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(size_t n, const Rational& c) {
  Polynomial p(n);
  p.add_term(Exponents(n, 0), c);
  return p;
}

Polynomial Polynomial::variable(size_t n, size_t j) {
  Exponents e(n, 0);
  e[j] = 1;
  return term(e, Rational(1));
}

Polynomial Polynomial::term(const Exponents& e, const Rational& c) {
  Polynomial p(e.size());
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::from_monomial(const Monomial& m) {
  for (int e : m.exponents())
    if (e < 0) throw InternalError("from_monomial: negative exponent");
  return term(m.exponents(), Rational(1));
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(),
                                            terms_.begin()->first.end(),
                                            [](int e) { return e == 0; }));
}

Rational Polynomial::constant_term() const { return coeff(Exponents(n_, 0)); }

Rational Polynomial::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::degree_in(size_t j) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[j]);
  return d;
}

Polynomial Polynomial::operator-() const {
  Polynomial p(*this);
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (n_ == 0 && terms_.empty()) n_ = o.n_;
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (n_ == 0 && terms_.empty()) n_ = o.n_;
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial p(std::max(a.n_, b.n_));
  Exponents e(p.n_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (size_t j = 0; j < p.n_; ++j) e[j] = ea[j] + eb[j];
      p.add_term(e, ca * cb);
    }
  return p;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(n_, Rational(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::diff(size_t j) const {
  Polynomial p(n_);
  for (const auto& [e, c] : terms_) {
    if (e[j] == 0) continue;
    Exponents d = e;
    d[j] -= 1;
    p.add_term(d, c * Rational(e[j]));
  }
  return p;
}

Polynomial Polynomial::compose(std::span<const Polynomial> images) const {
  if (images.size() != n_) throw InternalError("compose: arity mismatch");
  size_t m = images.empty() ? 0 : images[0].nvars();
  // Power caches keep repeated exponents cheap.
  std::vector<std::vector<Polynomial>> powers(n_);
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Polynomial t = constant(m, c);
    for (size_t j = 0; j < n_; ++j) {
      auto& cache = powers[j];
      if (cache.empty()) cache.push_back(constant(m, Rational(1)));
      while (static_cast<int>(cache.size()) <= e[j]) cache.push_back(cache.back() * images[j]);
      if (e[j] > 0) t = t * cache[e[j]];
    }
    out += t;
  }
  return out;
}

Polynomial Polynomial::restrict(size_t j, const Rational& value) const {
  Polynomial p(n_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d[j] = 0;
    p.add_term(d, c * value.pow(e[j]));
  }
  return p;
}

Exponents Polynomial::min_exponents() const {
  Exponents m(n_, 0);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (first) {
      m = e;
      first = false;
    } else {
      for (size_t j = 0; j < n_; ++j) m[j] = std::min(m[j], e[j]);
    }
  }
  return m;
}

Polynomial Polynomial::divide_monomial(const Exponents& d) const {
  Polynomial p(n_);
  for (const auto& [e, c] : terms_) {
    Exponents q = e;
    for (size_t j = 0; j < n_; ++j) {
      q[j] -= d[j];
      if (q[j] < 0) throw InternalError("divide_monomial: not divisible");
    }
    p.terms_.emplace(std::move(q), c);
  }
  return p;
}

std::vector<Rational> Polynomial::univariate(size_t j) const {
  std::vector<Rational> out(static_cast<size_t>(degree_in(j)) + 1, Rational(0));
  for (const auto& [e, c] : terms_) {
    for (size_t k = 0; k < n_; ++k)
      if (k != j && e[k] != 0) throw InternalError("univariate: other variable present");
    out[e[j]] = c;
  }
  return out;
}

Polynomial Polynomial::from_univariate(size_t n, size_t j, std::span<const Rational> coeffs) {
  Polynomial p(n);
  Exponents e(n, 0);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    e[j] = static_cast<int>(k);
    p.add_term(e, coeffs[k]);
  }
  return p;
}

Content Polynomial::content() const {
  if (is_zero()) throw InternalError("content of zero polynomial");
  Content out;
  out.mono = min_exponents();
  Polynomial core = divide_monomial(out.mono);
  Integer g = 0, l = 1;
  for (const auto& [e, c] : core.terms_) {
    g = gcd(g, c.num());
    l = lcm(l, c.den());
  }
  Rational s(g, l);
  // Leading term is the last in map order; its sign fixes the normalization.
  if (core.terms_.rbegin()->second.sign() < 0) s = -s;
  core *= Rational(1) / s;
  out.scale = s;
  out.core = std::move(core);
  return out;
}

double Polynomial::eval(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.to_double();
    for (size_t j = 0; j < n_; ++j)
      for (int k = 0; k < e[j]; ++k) t *= x[j];
    sum += t;
  }
  return sum;
}

Rational Polynomial::eval(std::span<const Rational> x) const {
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (size_t j = 0; j < n_; ++j)
      if (e[j] > 0) t *= x[j].pow(e[j]);
    sum += t;
  }
  return sum;
}

Interval Polynomial::eval(const Box& box) const {
  Interval sum(0.0);
  for (const auto& [e, c] : terms_) {
    double cd = c.to_double();
    Interval t = c.is_integer() && std::abs(cd) < 9e15 ? Interval(cd) : Interval(cd).widened();
    for (size_t j = 0; j < n_; ++j)
      if (e[j] > 0) t = t * ipow(box[j], e[j]);
    sum = sum + t;
  }
  return sum;
}

std::string Polynomial::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest total degree first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Monomial m(e);
    bool unit = m.is_constant();
    Rational a = c.abs();
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (unit) {
      os << a.str();
    } else {
      if (a != Rational(1)) os << a.str() << '*';
      os << m.str(names);
    }
  }
  return os.str();
}

std::string Polynomial::str() const { return str(default_var_names(n_)); }

Polynomial jacobian_determinant(std::span<const Polynomial> images) {
  size_t n = images.size();
  if (n == 1) return images[0].diff(0);
  if (n == 2)
    return images[0].diff(0) * images[1].diff(1) - images[0].diff(1) * images[1].diff(0);
  throw SemanticError("jacobian_determinant: only dimensions 1 and 2 are supported");
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
public:
  Parser(std::string_view text, std::span<const std::string> names)
      : text_(normalize(text)), names_(names) {}

  Polynomial run() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

private:
  // Accepts the Unicode minus sign and "**" for powers.
  static std::string normalize(std::string_view in) {
    std::string out;
    for (size_t i = 0; i < in.size(); ++i) {
      if (in.substr(i, 3) == "\xE2\x88\x92") {
        out += '-';
        i += 2;
      } else if (in.substr(i, 2) == "**") {
        out += '^';
        i += 1;
      } else {
        out += in[i];
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial '" + text_ + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept('+')) p += term();
      else if (accept('-')) p -= term();
      else return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (accept('*')) p = p * unary();
    return p;
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (accept('^')) {
      skip_ws();
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a nonnegative integer exponent");
      unsigned long e = std::stoul(text_.substr(start, pos_ - start));
      if (e > 4096) fail("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  std::string digits() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Polynomial atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      Rational value(Integer(num), Integer(1));
      // A slash is only meaningful between integer literals.
      size_t save = pos_;
      if (accept('/')) {
        skip_ws();
        std::string den = digits();
        if (den.empty()) {
          pos_ = save;
          fail("division is only allowed between integer literals");
        }
        if (Integer(den) == 0) fail("zero denominator");
        value = Rational(Integer(num), Integer(den));
      }
      return Polynomial::constant(names_.size(), value);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string id = text_.substr(start, pos_ - start);
      for (size_t j = 0; j < names_.size(); ++j)
        if (names_[j] == id) return Polynomial::variable(names_.size(), j);
      pos_ = start;
      fail("unknown variable '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  std::span<const std::string> names_;
  size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, std::span<const std::string> names) {
  Polynomial p = Parser(text, names).run();
  if (p.nvars() != names.size()) {
    Polynomial q(names.size());
    q += p;
    return q;
  }
  return p;
}

}  // namespace lzeta
