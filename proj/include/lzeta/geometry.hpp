#pragma once

#include "lzeta/piece.hpp"
#include "lzeta/problem.hpp"

#include <array>
#include <string>
#include <vector>

namespace lzeta {

using Vec2 = std::array<int, 2>;

/// Lower boundary of the Newton polygon of a bivariate polynomial at the
/// origin: vertices ordered by increasing x-exponent, and the compact edges
/// between consecutive vertices with their primitive inward normals.
struct NewtonPolygon {
  struct Edge {
    Vec2 from, to;
    Vec2 normal;  // primitive, both entries positive
  };
  std::vector<Vec2> vertices;
  std::vector<Edge> edges;
};

NewtonPolygon newton_polygon(const Polynomial& f);

/// Terms of p lying on the face of its Newton polygon selected by weight w.
Polynomial initial_form(const Polynomial& p, const Vec2& w);

/// Rays (1,0), the given normals and (0,1), refined by Stern-Brocot mediants
/// so that consecutive rays span unimodular cones. Sorted by angle.
std::vector<Vec2> unimodular_fan(const std::vector<Vec2>& normals);

/// Throws DegeneracyError when, for some compact edge of the polygon of the
/// product, one of the factors has an edge polynomial with a multiple root in
/// the open quadrant.
void check_nondegenerate(const NewtonPolygon& product, const std::vector<Polynomial>& factors);

/// Toric chart of the cone (v, w): x = s^{v1} t^{w1}, y = s^{v2} t^{w2}.
std::vector<Polynomial> toric_map(const Vec2& v, const Vec2& w);

/// One-variable monomialization of f on an interval: the roots with their
/// multiplicities, and the local unit on either side.
struct Chart1D {
  Rational center;
  int side = 1;          // +1: x = center + t, -1: x = center - t
  int multiplicity = 0;  // 0 for a root-free gap chart
  Polynomial unit;       // f(center + side*t) / t^multiplicity
  int sign = 1;          // sign of the unit near t = 0
};
std::vector<Chart1D> monomialize_1d(const Polynomial& f, const Rational& lo, const Rational& hi);

struct GeometryConfig {
  CertifyConfig certify;
  int max_eta_halvings = 20;
  int max_delta_halvings = 6;
};

/// Record of one chart used to build pieces, for reports.
struct ChartInfo {
  std::string label;
  std::vector<Polynomial> map;  // original coordinates as polynomials in chart variables
  Polynomial jacobian;
  std::vector<int> f_monomial;
};

struct Geometry {
  Rational eta;
  Rational delta_scale{1};
  std::vector<ChartInfo> charts;
  std::vector<PieceIntegrand> pieces;
  int dropped = 0;  // pieces removed by a negative constraint
};

/// Full pipeline: orthants at the base point, toric charts of the product
/// f * prod g_k, alpha partition, root translations, and pullback.
Geometry build_pieces(const Problem& problem, const GeometryConfig& cfg = {});

/// Same as build_pieces for a fixed eta (no retries on eta).
Geometry build_pieces_at(const Problem& problem, const Rational& eta, const GeometryConfig& cfg = {});

/// phi in the original coordinates with every constant converted once.
class PhiFunction {
public:
  PhiFunction(const Problem& problem, const Rational& eta);
  double operator()(std::span<const double> x) const;

private:
  const Polynomial* multiplier_;
  CutoffProfile b_;
  bool radial_;
  double eta_;
  std::vector<double> base_;
};

/// phi evaluated in the original coordinates, for oracles and partition checks.
double phi_value(const Problem& problem, const Rational& eta, std::span<const double> x);

}  // namespace lzeta
