#pragma once

#include <span>
#include <vector>

namespace lzeta {

/// Closed interval of doubles with outward rounding after every operation.
/// Rounding is emulated by stepping one ulp outward, which is conservative
/// for the round-to-nearest default.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}  // NOLINT(google-explicit-constructor)
  Interval(double l, double h) : lo(l), hi(h) {}

  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
  bool positive() const { return lo > 0.0; }
  bool negative() const { return hi < 0.0; }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  Interval widened() const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  Interval operator-() const { return {-hi, -lo}; }
};

Interval ipow(const Interval& x, int e);
Interval hull(const Interval& a, const Interval& b);

/// Axis-aligned box, one interval per variable.
using Box = std::vector<Interval>;

/// Splits a box in half along its widest side.
std::pair<Box, Box> bisect(const Box& box);

}  // namespace lzeta
