#pragma once

#include "lzeta/continuation.hpp"

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lzeta {

using Complex = std::complex<double>;

struct QuadConfig {
  int order = 10;  // Gauss points per side; the Kronrod extension has 2*order+1
  long max_subdivisions = 20000;
  double rel_tol = 1e-8;
  double abs_tol = 0.0;  // absolute error accepted per z regardless of the value
  int branch = 1;        // +1: log(-1) = +i pi, -1: log(-1) = -i pi
};

struct QuadResult {
  std::vector<Complex> value;
  std::vector<double> error;
  long cells = 0;
};

/// sum_t prefactor_t(z) * integral of piece_t at every z of a batch.
/// Terms sharing a box, exponent vector a and unit are integrated on one
/// adaptive mesh. Every z must lie right of every piece's threshold.
QuadResult integrate_terms(std::span<const RepTerm> terms, std::span<const Complex> zs, const QuadConfig& cfg);

QuadResult quad_piece(const PieceIntegrand& piece, std::span<const Complex> zs, const QuadConfig& cfg);

/// Exclusion radius around candidate poles for plain evaluation.
inline constexpr double kPoleExclusion = 1e-6;

struct FValue {
  Complex z;
  Complex value;
  double error = 0.0;
};

/// Continued F at each z. Throws PoleProximityError within the exclusion
/// radius of a candidate and SemanticError left of the representation's
/// target.
std::vector<FValue> eval_F(const MeromorphicRep& rep, const PoleCatalog& catalog, std::span<const Complex> zs,
                           const QuadConfig& cfg);

/// Principal part at a candidate: coeffs[j-1] = c_{-j}, j = 1..order.
struct LaurentData {
  Rational center;
  std::vector<Complex> coeffs;
  double radius = 0.0;
  double error = 0.0;
  int nodes = 0;
};

/// Radius used for the contour around `location`.
double contour_radius(const PoleCatalog& catalog, const Rational& location);

LaurentData residue_extract(const MeromorphicRep& rep, const PoleCatalog& catalog, const Rational& location,
                            int order, const QuadConfig& cfg, double floor = 1e-9);

enum class PoleStatus { Confirmed, Undetected };

struct ScannedPole {
  PoleEntry entry;
  PoleStatus status = PoleStatus::Undetected;
  int detected_order = 0;
  LaurentData laurent;
};

/// Residue extraction for every catalog entry. Coefficients below `floor`
/// or below the extraction's error estimate count as zero; the detected
/// order is the largest j with |c_{-j}| above both.
std::vector<ScannedPole> pole_scan(const MeromorphicRep& rep, const PoleCatalog& catalog, const QuadConfig& cfg,
                                   double floor = 1e-9);

/// Representation valid right of the given target. A contour only needs F
/// slightly left of its candidate, and a shallower representation has
/// fewer terms and far less cancellation between them.
using RepProvider = std::function<MeromorphicRep(const Rational& target)>;

/// pole_scan that asks `shallow` for a representation continued to
/// max(s0 - 1/(2N), catalog target) for each candidate s0.
std::vector<ScannedPole> pole_scan(const RepProvider& shallow, const PoleCatalog& catalog, const QuadConfig& cfg,
                                   double floor = 1e-9);

}  // namespace lzeta
