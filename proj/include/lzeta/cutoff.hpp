#pragma once

#include "lzeta/interval.hpp"
#include "lzeta/rational.hpp"

#include <array>
#include <compare>
#include <string>

namespace lzeta {

/// Truncated Taylor series a_0 + a_1 h + ... + a_K h^K about a point.
/// Used to get exact-to-rounding higher derivatives of the cutoff profiles.
class Jet {
public:
  static constexpr int kMaxOrder = 31;

  Jet(int order, double value);
  static Jet variable(int order, double at);  // t0 + h

  int order() const { return order_; }
  double operator[](int k) const { return c_[k]; }
  /// k-th derivative at the expansion point.
  double derivative(int k) const;

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator+(double s) const;
  Jet operator*(double s) const;
  Jet operator-() const { return *this * -1.0; }
  Jet recip() const;
  Jet exp() const;

private:
  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_;
};

enum class ProfileKind {
  Step,        // 1 below c0, 0 above c1
  Complement,  // 1 - Step
  Alpha,       // alpha(y) = beta(y)/(beta(y)+beta(1/y)), beta from the step on (c0, c1)
};

/// Smooth monotone profile built from exp(-1/s). The step is
///   b(t) = g(c1 - t) / (g(c1 - t) + g(t - c0)),  g(s) = exp(-1/s) for s > 0,
/// which is flat to every order at c0 and c1.
class CutoffProfile {
public:
  CutoffProfile() = default;
  CutoffProfile(ProfileKind kind, Rational c0, Rational c1);
  static CutoffProfile step(Rational c0, Rational c1) { return {ProfileKind::Step, c0, c1}; }
  static CutoffProfile complement(Rational c0, Rational c1) {
    return {ProfileKind::Complement, c0, c1};
  }
  static CutoffProfile alpha(Rational c0, Rational c1) { return {ProfileKind::Alpha, c0, c1}; }

  ProfileKind kind() const { return kind_; }
  const Rational& c0() const { return c0_; }
  const Rational& c1() const { return c1_; }

  double value(double t) const { return derivative(t, 0); }
  /// f^(k)(t).
  double derivative(double t, int k) const;
  /// Taylor jet of the profile composed with an argument jet.
  Jet apply(const Jet& t) const;
  /// t^k f^(k)(t), the Euler-operator companion used after differentiation.
  double euler(double t, int k) const;

  /// Interval outside of which the profile is locally constant.
  Interval transition() const;
  /// Value on the left plateau (argument below the transition).
  double left_value() const { return kind_ == ProfileKind::Complement ? 0.0 : 1.0; }
  /// True when f^(k) is identically zero for every argument in `arg`.
  bool vanishes_on(const Interval& arg, int k) const;
  /// True when the undifferentiated profile equals 1 for every argument in `arg`.
  bool is_one_on(const Interval& arg) const;

  std::string str() const;

  friend bool operator==(const CutoffProfile&, const CutoffProfile&) = default;
  friend std::strong_ordering operator<=>(const CutoffProfile& a, const CutoffProfile& b);

private:
  Jet step_jet(const Jet& t, double c0, double c1) const;

  ProfileKind kind_ = ProfileKind::Step;
  Rational c0_{1, 2};
  Rational c1_{1};
  double d0_ = 0.5, d1_ = 1.0;
};

}  // namespace lzeta
