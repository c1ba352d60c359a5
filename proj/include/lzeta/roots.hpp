#pragma once

#include "lzeta/rational.hpp"

#include <optional>
#include <span>
#include <vector>

namespace lzeta {

/// Dense univariate polynomial with rational coefficients, index = degree.
class UPoly {
public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& lead() const { return c_.back(); }

  Rational eval(const Rational& x) const;
  double eval(double x) const;
  int sign_at(const Rational& x) const { return eval(x).sign(); }

  UPoly derivative() const;
  UPoly monic() const;
  UPoly operator-() const;
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  /// Quotient and remainder; b must be nonzero.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
  static UPoly gcd(UPoly a, UPoly b);

  friend bool operator==(const UPoly&, const UPoly&) = default;

private:
  void trim();
  std::vector<Rational> c_;
};

/// Yun's algorithm: p = lead * prod f_i^i with f_i square-free and pairwise coprime.
/// Returns (f_i, i) for every nonconstant f_i.
std::vector<std::pair<UPoly, int>> square_free_factorization(const UPoly& p);

/// Sturm chain of a square-free polynomial.
std::vector<UPoly> sturm_chain(const UPoly& p);
/// Number of distinct real roots in the half-open interval (a, b].
int sturm_count(const std::vector<UPoly>& chain, const Rational& a, const Rational& b);

struct RealRoot {
  Rational lo, hi;               // isolating interval (lo == hi when exact)
  std::optional<Rational> exact; // set when the root is rational
  int multiplicity = 1;
  double approx() const;
};

/// Distinct real roots in the open interval (a, b), sorted, with
/// multiplicities, rational roots found exactly and irrational ones isolated
/// to width below `width`.
std::vector<RealRoot> real_roots(const UPoly& p, const Rational& a, const Rational& b,
                                 const Rational& width = Rational(Integer(1), Integer("1000000000000")));

/// Rational roots of p (rational root theorem), sorted, without multiplicity.
std::vector<Rational> rational_roots(const UPoly& p);

}  // namespace lzeta
