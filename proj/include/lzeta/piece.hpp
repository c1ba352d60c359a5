#pragma once

#include "lzeta/cutoff.hpp"
#include "lzeta/interval.hpp"
#include "lzeta/polynomial.hpp"
#include "lzeta/smooth_expr.hpp"

#include <string>
#include <vector>

namespace lzeta {

/// One cutoff factor of a piece, evaluated at the argument t = c(x) * m(x).
///
/// Euler records carry E_k(t) = t^k f^(k)(t), so that E_0 = f and
/// x_j d/dx_j E_k(t) = (x_j d_j c / c + e_j) (k E_k + E_{k+1}). The factor
/// 1/x_j produced by differentiation cancels the exponent raised by the
/// integration by parts. The ratio m is a Laurent monomial and c a positive
/// unit on the box.
///
/// Plain records (euler == false) carry D_k(t) = f^(k)(t) with the whole
/// argument stored in c and m = 1. They arise from translated coordinates and
/// from radial cutoffs, and are smooth on the whole closed box.
struct CutoffFactor {
  CutoffProfile profile;
  int order = 0;
  bool euler = true;
  SmoothExpr scale;
  Monomial ratio;

  /// B-kind in the sense of the continuation cycle: a differentiated
  /// Euler record, supported where its argument is in the transition band.
  bool is_B() const { return euler && order >= 1; }

  double argument(const double* x) const;
  double eval(const double* x) const;
  Interval argument(const Box& box) const;
  /// True when the factor is identically zero on the box.
  bool vanishes_on(const Box& box) const;
  CutoffFactor substituted(std::span<const Polynomial> images) const;
  std::string str() const;

  friend bool operator==(const CutoffFactor&, const CutoffFactor&) = default;
  friend bool operator<(const CutoffFactor& a, const CutoffFactor& b);
};

/// base(x)^z times the branch phase of the sign of f on the piece. The base
/// is a polynomial that is positive on the piece's support.
struct UnitPower {
  Polynomial base;
  int sign = 1;

  friend bool operator==(const UnitPower&, const UnitPower&) = default;
};

/// One monomialized term of the integral:
///   int_box prod_j x_j^{a_j z + beta_j} * base^z * phase * A(z, x) * prod cutoffs dx.
/// Variables with lo_j == 0 are "active": the monomial may be singular there.
struct PieceIntegrand {
  size_t n = 0;
  std::vector<Rational> a;
  std::vector<Rational> beta;
  UnitPower unit;
  SmoothExpr smooth;
  std::vector<CutoffFactor> cutoffs;
  std::vector<double> lo, hi;
  std::string label;

  bool active(size_t j) const { return lo[j] == 0.0; }
  Box box() const;
  /// True when some record vanishes on the whole box or the box is empty.
  bool trivially_zero() const;
  /// Product of all cutoff factors at a point.
  double cutoff_value(const double* x) const;
  std::string str() const;
};

struct CertifyConfig {
  int max_depth = 30;      // bisection depth per branch
  long max_boxes = 200000; // total boxes examined
};

/// Proves that `u` has a constant nonzero sign on the part of `box` where
/// the records do not vanish, returning that sign. Throws CertificationError
/// when the sign cannot be established within the budget.
int certify_unit(const Polynomial& u, const Box& box, const std::vector<CutoffFactor>& records,
                 const CertifyConfig& cfg = {});

/// Same as certify_unit but returns 0 instead of throwing.
int try_certify_unit(const Polynomial& u, const Box& box, const std::vector<CutoffFactor>& records,
                     const CertifyConfig& cfg = {});

}  // namespace lzeta
