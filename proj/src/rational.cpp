#include "lzeta/rational.hpp"

#include "lzeta/errors.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

namespace lzeta {

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw SemanticError("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty rational literal");
  auto valid_int = [](std::string_view t) {
    size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string a = s.substr(0, slash);
  std::string b = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(a) || !valid_int(b) || b[0] == '-' || b[0] == '+')
    throw ParseError("invalid rational literal '" + std::string(text) + "'");
  if (a[0] == '+') a.erase(0, 1);
  Integer num(a), den(b);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

Rational Rational::from_double(double v) {
  if (!std::isfinite(v)) throw SemanticError("non-finite value cannot be made rational");
  return Rational(mpq_class(v));
}

long Rational::to_long() const {
  if (!is_integer() || !q_.get_num().fits_slong_p())
    throw InternalError("rational " + str() + " is not a machine integer");
  return q_.get_num().get_si();
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InternalError("division by zero rational");
  q_ /= o.q_;
  return *this;
}

Rational Rational::pow(int e) const {
  if (e < 0) return Rational(1) / pow(-e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

}  // namespace lzeta
