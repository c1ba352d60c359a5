#pragma once

#include "lzeta/polynomial.hpp"
#include "lzeta/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lzeta {

enum class CutoffKind { Product, Radial };

/// phi(x) = multiplier(x) * prod_j b(|x_j - base_j| / eta)          (product)
/// phi(x) = multiplier(x) * b(|x - base|^2 / eta^2)                 (radial)
/// with b the step profile on (c0, c1). The partition parameters shape the
/// alpha profiles that split phi between charts; F does not depend on them.
struct CutoffSpec {
  CutoffKind kind = CutoffKind::Product;
  std::optional<Rational> eta;  // empty means automatic
  Rational c0{Integer(1), Integer(2)};
  Rational c1{1};
  std::string multiplier_text = "1";
  Polynomial multiplier;
  Rational partition_c0{Integer(1), Integer(2)};
  Rational partition_c1{2};

  /// Support radius of phi along a coordinate for a given eta.
  double extent(double eta_value) const;
};

struct RunConfig {
  int branch = 1;  // +1: log(-1) = +i pi, -1: log(-1) = -i pi
  int depth = 3;
  double tol = 1e-8;
  std::optional<int> order;  // Gauss-Legendre points per side
  long max_subdivisions = 20000;
  double abs_floor = 1e-9;
  long max_terms = 100000;
};

struct Problem {
  int dimension = 1;
  std::string f_text;
  Polynomial f;
  std::vector<std::string> constraint_texts;  // each means g_k > 0
  std::vector<Polynomial> constraints;
  std::vector<Rational> window_lo, window_hi;
  std::vector<Rational> base;
  CutoffSpec cutoff;
  RunConfig run;

  std::vector<std::string> var_names() const { return default_var_names(dimension); }
};

}  // namespace lzeta
