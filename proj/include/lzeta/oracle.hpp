#pragma once

#include "lzeta/numerics.hpp"
#include "lzeta/problem.hpp"

#include <string>
#include <vector>

namespace lzeta {

struct OracleConfig {
  double tol = 1e-11;
  int branch = 1;
  bool magnitude = false;  // integrate |f|^Re(z) |phi| instead
};

/// F(z) for Re z > 0 by direct quadrature of |f|^z * phase * phi over M in
/// the original coordinates. Segments break at the zeros of f and of the
/// constraints, at the base point and at the cutoff transitions, so each
/// tanh-sinh call only sees singularities at its endpoints.
Complex direct_oracle(const Problem& problem, const Rational& eta, Complex z, const OracleConfig& cfg = {});

/// The 15-point check grid: Re z in {0.6, 0.95, 1.3, 1.65, 2}, Im z in {-1, 0, 1}.
std::vector<Complex> verify_grid();

struct VerifyPoint {
  Complex z;
  Complex continued, direct;
  double deviation = 0.0;
  std::string failure;  // empty when both evaluations succeeded
};

struct VerifyReport {
  std::vector<VerifyPoint> points;
  double max_deviation = 0.0;
  double tolerance = 1e-6;
  bool pass = false;
};

/// Compares the continued F against the oracle D on the grid. The deviation
/// is |F - D| / max(|D|, 1e-3 M) with M = integral of |f|^Re(z) |phi| over M;
/// the floor only matters where cancellation makes D tiny compared with the
/// integrand (x^2 - y^2 at z = 1 integrates to exactly zero).
VerifyReport verify_consistency(const Problem& problem, const Rational& eta, const MeromorphicRep& rep,
                                const PoleCatalog& catalog, const QuadConfig& qcfg, double tolerance = 1e-6);

}  // namespace lzeta
