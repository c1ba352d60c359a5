#pragma once

#include "lzeta/polynomial.hpp"

#include <complex>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lzeta {

/// Polynomial in z with rational coefficients, index = degree.
class ZPoly {
public:
  ZPoly() = default;
  ZPoly(const Rational& c) { if (!c.is_zero()) c_.push_back(c); }  // NOLINT
  static ZPoly z() { ZPoly p; p.c_ = {Rational(0), Rational(1)}; return p; }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational operator[](size_t d) const { return d < c_.size() ? c_[d] : Rational(0); }

  ZPoly& operator+=(const ZPoly& o);
  ZPoly& operator*=(const Rational& s);
  friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
  friend ZPoly operator*(const ZPoly& a, const ZPoly& b);
  ZPoly times_z() const;
  std::complex<double> eval(std::complex<double> z) const;
  std::string str() const;

  friend bool operator==(const ZPoly&, const ZPoly&) = default;

private:
  void trim();
  std::vector<Rational> c_;
};

/// A smooth factor in canonical form:
///   sum over terms of  p_t(z) * x^{e_t} * prod_i Q_i(x)^{k_i},
/// where each atom Q_i is a primitive non-monomial polynomial with positive
/// leading coefficient and no monomial content, and k_i is a nonzero integer.
/// Negative atom powers only occur for atoms that are nonvanishing units on
/// the domain box. Terms with equal (e_t, atoms) are merged.
class SmoothExpr {
public:
  using AtomPowers = std::vector<std::pair<Polynomial, int>>;
  struct Key {
    Exponents vars;
    AtomPowers atoms;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.vars != b.vars) return a.vars < b.vars;
      return a.atoms < b.atoms;
    }
    friend bool operator==(const Key&, const Key&) = default;
  };
  using TermMap = std::map<Key, ZPoly>;

  SmoothExpr() = default;
  explicit SmoothExpr(size_t nvars) : n_(nvars) {}
  static SmoothExpr constant(size_t n, const Rational& c);
  static SmoothExpr from_polynomial(const Polynomial& p);
  static SmoothExpr monomial(const Exponents& e, const Rational& c = Rational(1));
  /// Q^k for an arbitrary nonzero polynomial Q (normalized on the way in).
  static SmoothExpr power(const Polynomial& q, int k);

  size_t nvars() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  int z_degree() const;
  /// Distinct atoms in sorted order.
  std::vector<Polynomial> atoms() const;

  SmoothExpr operator-() const;
  SmoothExpr& operator+=(const SmoothExpr& o);
  SmoothExpr& operator*=(const Rational& c);
  friend SmoothExpr operator+(SmoothExpr a, const SmoothExpr& b) { return a += b; }
  friend SmoothExpr operator-(SmoothExpr a, const SmoothExpr& b) { return a += -b; }
  friend SmoothExpr operator*(const SmoothExpr& a, const SmoothExpr& b);
  friend SmoothExpr operator*(SmoothExpr a, const Rational& c) { return a *= c; }
  SmoothExpr times_z() const;

  SmoothExpr diff(size_t j) const;
  /// Substitutes x_j -> images[j] (polynomials in the new variables).
  SmoothExpr subst(std::span<const Polynomial> images) const;
  /// Multiplicative inverse; defined for a single term with constant
  /// coefficient or for a polynomial (which then becomes an atom power).
  SmoothExpr inverse() const;

  /// Values of the z-coefficients at a point: result[d] multiplies z^d.
  std::vector<double> eval(std::span<const double> x) const;
  std::complex<double> eval(std::span<const double> x, std::complex<double> z) const;
  /// Enclosure of the z^0 coefficient over a box (z-free expressions).
  Interval eval(const Box& box) const;
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()
  /// Polynomial form when the expression has no atoms and no z.
  bool is_polynomial() const;
  Polynomial to_polynomial() const;

  std::string str() const;

  friend bool operator==(const SmoothExpr& a, const SmoothExpr& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator<(const SmoothExpr& a, const SmoothExpr& b);

private:
  void add_term(const Key& k, const ZPoly& c);
  static AtomPowers merge_atoms(const AtomPowers& a, const AtomPowers& b);

  size_t n_ = 0;
  TermMap terms_;
};

/// Flattened evaluator for repeated evaluation of a SmoothExpr at many
/// points: atoms are evaluated once per point and shared across terms.
class CompiledSmooth {
public:
  CompiledSmooth() = default;
  explicit CompiledSmooth(const SmoothExpr& e);
  int z_degree() const { return zdeg_; }
  /// out[d] receives the z^d coefficient value; out must hold z_degree()+1.
  void eval(const double* x, double* out) const;

private:
  struct FlatPoly {
    std::vector<double> coeff;
    std::vector<int> exps;  // n per term
  };
  struct Term {
    std::vector<int> vars;
    std::vector<std::pair<int, int>> atoms;  // atom index, power
    std::vector<double> coeff;               // by z-degree
  };
  size_t n_ = 0;
  int zdeg_ = 0;
  std::vector<FlatPoly> atoms_;
  std::vector<Term> terms_;
  mutable std::vector<double> atom_vals_;
};

/// Many smooth expressions in the same variables evaluated at a common
/// point. prepare() tabulates the integer powers of every variable and
/// every atom once, after which eval() of any member is a few products
/// per term.
class SmoothBank {
public:
  explicit SmoothBank(size_t nvars = 0) : n_(nvars), xpow_(nvars), xmin_(nvars, 0), xmax_(nvars, 0) {}

  int add(const SmoothExpr& e);
  /// Makes x^e for e in [lo, hi] available through xpow after prepare().
  void reserve_powers(size_t var, int lo, int hi);
  int z_degree(int id) const { return exprs_[id].zdeg; }
  size_t size() const { return exprs_.size(); }

  void prepare(const double* x);
  double xpow(size_t var, int e) const { return xpow_[var][e - xmin_[var]]; }
  /// out[d] receives the z^d coefficient of member id.
  void eval(int id, double* out) const;

private:
  struct Term {
    int e[2] = {0, 0};
    int atom_begin = 0, atom_end = 0;  // into atom_refs_
    int coeff_begin = 0;               // zdeg+1 values in coeffs_
  };
  struct Expr {
    int zdeg = 0;
    std::vector<Term> terms;
  };
  struct Atom {
    std::vector<double> coeff;
    std::vector<int> exps;  // n per term
    int pmin = 0, pmax = 0;
  };
  size_t n_;
  std::vector<Expr> exprs_;
  std::vector<Atom> atoms_;
  std::map<Polynomial, int> atom_index_;
  std::vector<std::pair<int, int>> atom_refs_;  // atom, power
  std::vector<double> coeffs_;
  std::vector<std::vector<double>> xpow_;
  std::vector<int> xmin_, xmax_;
  std::vector<std::vector<double>> apow_;
};

}  // namespace lzeta
