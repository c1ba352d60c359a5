#pragma once

#include "lzeta/interval.hpp"
#include "lzeta/rational.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lzeta {

using Exponents = std::vector<int>;

/// Default variable names by dimension: x, y, z, w...
std::vector<std::string> default_var_names(size_t n);

/// Laurent monomial prod x_j^{e_j}; an absent index means exponent 0.
/// Holds ratios p/q of monomials with p, q coprime by construction.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(size_t n) : exps_(n, 0) {}
  explicit Monomial(Exponents e) : exps_(std::move(e)) {}
  static Monomial variable(size_t n, size_t j, int power = 1);

  size_t nvars() const { return exps_.size(); }
  const Exponents& exponents() const { return exps_; }
  int operator[](size_t j) const { return exps_[j]; }
  bool is_constant() const;
  bool involves(size_t j) const { return exps_[j] != 0; }
  /// Numerator p (positive exponents) and denominator q (negated negative ones).
  Monomial numerator() const;
  Monomial denominator() const;

  Monomial operator*(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const;
  Monomial inverse() const;
  Monomial pow(int e) const;

  double eval(std::span<const double> x) const;
  Interval eval(const Box& box) const;
  std::string str(std::span<const std::string> names) const;
  std::string str() const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
  Exponents exps_;
};

/// Multivariate polynomial with exact rational coefficients. Terms are kept
/// in a sorted map, so iteration order (and printing) is deterministic.
class Polynomial {
public:
  using TermMap = std::map<Exponents, Rational>;

  Polynomial() = default;
  explicit Polynomial(size_t nvars) : n_(nvars) {}
  static Polynomial constant(size_t n, const Rational& c);
  static Polynomial variable(size_t n, size_t j);
  static Polynomial term(const Exponents& e, const Rational& c);
  static Polynomial from_monomial(const Monomial& m);  // requires nonnegative exponents

  /// Grammar: sums/differences of products of rational literals (p or p/q),
  /// variables, parenthesised subexpressions, and nonnegative integer powers.
  static Polynomial parse(std::string_view text, std::span<const std::string> names);

  size_t nvars() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_term() const;
  Rational coeff(const Exponents& e) const;
  int total_degree() const;
  int degree_in(size_t j) const;
  bool involves(size_t j) const { return degree_in(j) > 0; }

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial pow(unsigned e) const;

  Polynomial diff(size_t j) const;
  /// Substitutes x_j -> images[j]; all images share one variable count.
  Polynomial compose(std::span<const Polynomial> images) const;
  /// Sets x_j to a rational value (the variable count is kept).
  Polynomial restrict(size_t j, const Rational& value) const;

  /// Componentwise minimum exponent over all terms (the monomial content).
  Exponents min_exponents() const;
  /// Exact division by x^e; every term must be divisible.
  Polynomial divide_monomial(const Exponents& e) const;
  /// Dense coefficient list in x_j when no other variable appears.
  std::vector<Rational> univariate(size_t j) const;
  static Polynomial from_univariate(size_t n, size_t j, std::span<const Rational> coeffs);

  /// this = scale * x^mono * core, core primitive with integer coefficients
  /// and a positive leading (largest) term.
  struct Content content() const;

  double eval(std::span<const double> x) const;
  Rational eval(std::span<const Rational> x) const;
  Interval eval(const Box& box) const;

  std::string str(std::span<const std::string> names) const;
  std::string str() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.terms_ < b.terms_;
  }

private:
  void add_term(const Exponents& e, const Rational& c);

  size_t n_ = 0;
  TermMap terms_;
};

struct Content {
  Rational scale;
  Exponents mono;
  Polynomial core;
};

/// Determinant of the Jacobian matrix of a polynomial map (n images in n variables).
Polynomial jacobian_determinant(std::span<const Polynomial> images);

}  // namespace lzeta
