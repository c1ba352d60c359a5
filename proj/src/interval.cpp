#include "lzeta/interval.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lzeta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double v) { return std::nextafter(v, -kInf); }
double up(double v) { return std::nextafter(v, kInf); }

// Sums and products with an exact zero operand are exact, so they are not
// widened. This keeps [0, h] * [0, h] nonnegative.
double add_lo(double a, double b) { return a == 0.0 ? b : (b == 0.0 ? a : down(a + b)); }
double add_hi(double a, double b) { return a == 0.0 ? b : (b == 0.0 ? a : up(a + b)); }

}  // namespace

Interval Interval::widened() const { return {down(lo), up(hi)}; }

Interval operator+(const Interval& a, const Interval& b) {
  return {add_lo(a.lo, b.lo), add_hi(a.hi, b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {add_lo(a.lo, -b.hi), add_hi(a.hi, -b.lo)};
}

Interval operator*(const Interval& a, const Interval& b) {
  const double u[4] = {a.lo, a.lo, a.hi, a.hi};
  const double w[4] = {b.lo, b.hi, b.lo, b.hi};
  double lo = kInf, hi = -kInf;
  for (int i = 0; i < 4; ++i) {
    if (u[i] == 0.0 || w[i] == 0.0) {  // exact, and covers 0 * inf
      lo = std::min(lo, 0.0);
      hi = std::max(hi, 0.0);
      continue;
    }
    double v = u[i] * w[i];
    lo = std::min(lo, down(v));
    hi = std::max(hi, up(v));
  }
  return {lo, hi};
}

Interval operator/(const Interval& a, const Interval& b) {
  // One-sided reciprocals keep monomials like x/y bounded below on [0, h].
  if (b.lo == 0.0 && b.hi > 0.0) return a * Interval(down(1.0 / b.hi), kInf);
  if (b.hi == 0.0 && b.lo < 0.0) return a * Interval(-kInf, up(1.0 / b.lo));
  if (b.contains_zero()) return {-kInf, kInf};
  return a * Interval(down(1.0 / b.hi), up(1.0 / b.lo));
}

Interval ipow(const Interval& x, int e) {
  if (e == 0) return Interval(1.0);
  if (e < 0) return Interval(1.0) / ipow(x, -e);
  double a = std::pow(x.lo, e), b = std::pow(x.hi, e);
  auto dn = [](double v) { return v == 0.0 ? 0.0 : down(v); };
  auto upr = [](double v) { return v == 0.0 ? 0.0 : up(v); };
  if (e % 2 == 1) return {dn(a), upr(b)};
  if (x.lo >= 0.0) return {dn(a), upr(b)};
  if (x.hi <= 0.0) return {dn(b), upr(a)};
  return {0.0, upr(std::max(a, b))};
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::pair<Box, Box> bisect(const Box& box) {
  if (box.empty()) throw InternalError("bisect on empty box");
  size_t k = 0;
  for (size_t i = 1; i < box.size(); ++i)
    if (box[i].width() > box[k].width()) k = i;
  Box a = box, b = box;
  double m = box[k].mid();
  a[k].hi = m;
  b[k].lo = m;
  return {a, b};
}

}  // namespace lzeta
