#pragma once

#include "lzeta/geometry.hpp"
#include "lzeta/numerics.hpp"
#include "lzeta/problem.hpp"

namespace lzeta {

/// Pieces, continued representation and candidate catalog of one problem,
/// at the depth and budgets of its [run] section.
struct Analysis {
  Geometry geometry;
  MeromorphicRep rep;
  PoleCatalog catalog;
};

Analysis analyze(const Problem& problem, bool trace = false);

/// pole_scan over the analysis catalog, each contour on a representation
/// continued only as far as that contour needs.
std::vector<ScannedPole> scan_poles(const Problem& problem, const Analysis& analysis);

/// Quadrature settings derived from the problem's [run] section.
QuadConfig quad_config(const Problem& problem);

}  // namespace lzeta
