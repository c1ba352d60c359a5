#include "lzeta/cutoff.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lzeta {

Jet::Jet(int order, double value) : order_(order) {
  if (order < 0 || order > kMaxOrder)
    throw ResourceError("cutoff derivative order " + std::to_string(order) + " exceeds " + std::to_string(kMaxOrder));
  std::fill(c_.begin(), c_.begin() + order + 1, 0.0);
  c_[0] = value;
}

Jet Jet::variable(int order, double at) {
  Jet j(order, at);
  if (order >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet::derivative(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return c_[k] * f;
}

Jet Jet::operator+(const Jet& o) const {
  Jet r(*this);
  for (size_t i = 0; i < static_cast<size_t>(order_ + 1); ++i) r.c_[i] += o.c_[i];
  return r;
}

Jet Jet::operator-(const Jet& o) const {
  Jet r(*this);
  for (size_t i = 0; i < static_cast<size_t>(order_ + 1); ++i) r.c_[i] -= o.c_[i];
  return r;
}

Jet Jet::operator*(const Jet& o) const {
  Jet r(order(), 0.0);
  for (size_t k = 0; k < static_cast<size_t>(order_ + 1); ++k) {
    double s = 0.0;
    for (size_t i = 0; i <= k; ++i) s += c_[i] * o.c_[k - i];
    r.c_[k] = s;
  }
  return r;
}

Jet Jet::operator+(double s) const {
  Jet r(*this);
  r.c_[0] += s;
  return r;
}

Jet Jet::operator*(double s) const {
  Jet r(*this);
  for (int i = 0; i <= order_; ++i) r.c_[i] *= s;
  return r;
}

Jet Jet::recip() const {
  Jet r(order(), 1.0 / c_[0]);
  for (size_t k = 1; k < static_cast<size_t>(order_ + 1); ++k) {
    double s = 0.0;
    for (size_t i = 1; i <= k; ++i) s += c_[i] * r.c_[k - i];
    r.c_[k] = -s / c_[0];
  }
  return r;
}

Jet Jet::exp() const {
  Jet r(order(), std::exp(c_[0]));
  for (size_t k = 1; k < static_cast<size_t>(order_ + 1); ++k) {
    double s = 0.0;
    for (size_t i = 1; i <= k; ++i) s += static_cast<double>(i) * c_[i] * r.c_[k - i];
    r.c_[k] = s / static_cast<double>(k);
  }
  return r;
}

CutoffProfile::CutoffProfile(ProfileKind kind, Rational c0, Rational c1)
    : kind_(kind), c0_(std::move(c0)), c1_(std::move(c1)) {
  if (!(c0_.sign() > 0 && c0_ < c1_))
    throw SemanticError("cutoff profile needs 0 < c0 < c1, got c0=" + c0_.str() + ", c1=" + c1_.str());
  d0_ = c0_.to_double();
  d1_ = c1_.to_double();
}

// b(t) = 1/(1 + exp(u)), u = 1/(c1-t) - 1/(t-c0), on the open transition.
// The two algebraically equal branches keep exp from overflowing.
Jet CutoffProfile::step_jet(const Jet& t, double c0, double c1) const {
  int K = t.order();
  double t0 = t[0];
  if (t0 <= c0) return Jet(K, 1.0);
  if (t0 >= c1) return Jet(K, 0.0);
  Jet u = (-(t + (-c1))).recip() - (t + (-c0)).recip();
  if (u[0] <= 0.0) {
    Jet e = u.exp();
    return (e + 1.0).recip();
  }
  Jet e = (-u).exp();
  return e * (e + 1.0).recip();
}

Jet CutoffProfile::apply(const Jet& t) const {
  switch (kind_) {
    case ProfileKind::Step:
      return step_jet(t, d0_, d1_);
    case ProfileKind::Complement:
      return -step_jet(t, d0_, d1_) + 1.0;
    case ProfileKind::Alpha: {
      int K = t.order();
      double C = std::sqrt(d1_ / d0_);
      if (t[0] <= 1.0 / C) return Jet(K, 1.0);
      if (t[0] >= C) return Jet(K, 0.0);
      double g = std::sqrt(d0_ * d1_);
      Jet a = step_jet(t * g, d0_, d1_);
      Jet b = step_jet(t.recip() * g, d0_, d1_);
      return a * (a + b).recip();
    }
  }
  throw InternalError("unknown profile kind");
}

double CutoffProfile::derivative(double t, int k) const {
  // Fast paths on the plateaus.
  Interval tr = transition();
  if (t <= tr.lo) return k == 0 ? left_value() : 0.0;
  if (t >= tr.hi) return k == 0 ? 1.0 - left_value() : 0.0;
  return apply(Jet::variable(k, t)).derivative(k);
}

double CutoffProfile::euler(double t, int k) const {
  if (k == 0) return derivative(t, 0);
  return std::pow(t, k) * derivative(t, k);
}

Interval CutoffProfile::transition() const {
  if (kind_ == ProfileKind::Alpha) {
    double C = std::sqrt(d1_ / d0_);
    return {1.0 / C, C};
  }
  return {d0_, d1_};
}

bool CutoffProfile::vanishes_on(const Interval& arg, int k) const {
  // A relative margin keeps rounding in the transition bounds conservative.
  Interval tr = transition();
  double lo = tr.lo * (1.0 - 1e-12);
  double hi = tr.hi * (1.0 + 1e-12);
  bool right = arg.lo >= hi;
  bool left = arg.hi <= lo;
  if (k >= 1) return right || left;
  return kind_ == ProfileKind::Complement ? left : right;
}

bool CutoffProfile::is_one_on(const Interval& arg) const {
  Interval tr = transition();
  double lo = tr.lo * (1.0 - 1e-12);
  double hi = tr.hi * (1.0 + 1e-12);
  return kind_ == ProfileKind::Complement ? arg.lo >= hi : arg.hi <= lo;
}

std::string CutoffProfile::str() const {
  const char* name = kind_ == ProfileKind::Step ? "b" : kind_ == ProfileKind::Complement ? "bc" : "alpha";
  return std::string(name) + "[" + c0_.str() + "," + c1_.str() + "]";
}

std::strong_ordering operator<=>(const CutoffProfile& a, const CutoffProfile& b) {
  if (auto c = static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_); c != 0) return c;
  if (auto c = a.c0_ <=> b.c0_; c != 0) return c;
  return a.c1_ <=> b.c1_;
}

}  // namespace lzeta
