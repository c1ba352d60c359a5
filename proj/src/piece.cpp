#include "lzeta/piece.hpp"

#include "lzeta/errors.hpp"

#include <cmath>
#include <sstream>

namespace lzeta {

double CutoffFactor::argument(const double* x) const {
  std::span<const double> xs(x, scale.nvars());
  auto c = scale.eval(xs);
  double v = c.empty() ? 0.0 : c[0];
  return ratio.is_constant() ? v : v * ratio.eval(xs);
}

double CutoffFactor::eval(const double* x) const {
  double t = argument(x);
  return euler ? profile.euler(t, order) : profile.derivative(t, order);
}

Interval CutoffFactor::argument(const Box& box) const {
  Interval c = scale.eval(box);
  return ratio.is_constant() ? c : c * ratio.eval(box);
}

bool CutoffFactor::vanishes_on(const Box& box) const {
  return profile.vanishes_on(argument(box), order);
}

CutoffFactor CutoffFactor::substituted(std::span<const Polynomial> images) const {
  CutoffFactor r = *this;
  size_t m = images.empty() ? 0 : images[0].nvars();
  SmoothExpr c = scale.subst(images);
  bool monomial_images = true;
  for (size_t j = 0; j < ratio.nvars(); ++j)
    if (ratio[j] != 0 && !images[j].is_monomial()) monomial_images = false;
  if (!euler || !monomial_images) {
    // The argument stops being a monomial ratio. Only undifferentiated
    // records may switch form, since E_0 and D_0 coincide.
    if (euler && order != 0)
      throw InternalError("differentiated Euler record pulled back along a non-monomial map");
    SmoothExpr arg = c * SmoothExpr::monomial(ratio.exponents()).subst(images);
    r.euler = false;
    r.scale = std::move(arg);
    r.ratio = Monomial(m);
    return r;
  }
  Exponents e(m, 0);
  Rational coeff(1);
  for (size_t j = 0; j < ratio.nvars(); ++j) {
    if (ratio[j] == 0) continue;
    const auto& [ex, cf] = *images[j].terms().begin();
    for (size_t k = 0; k < m; ++k) e[k] += ex[k] * ratio[j];
    coeff *= cf.pow(ratio[j]);
  }
  r.scale = c * coeff;
  r.ratio = Monomial(e);
  return r;
}

std::string CutoffFactor::str() const {
  std::ostringstream os;
  os << (euler ? "E" : "D") << order << "." << profile.str() << "(";
  if (!euler || !scale.is_constant() || scale.constant_value() != Rational(1)) {
    os << "(" << scale.str() << ")";
    if (!ratio.is_constant()) os << "*";
  }
  if (!ratio.is_constant()) os << ratio.str();
  os << ")";
  return os.str();
}

bool operator<(const CutoffFactor& a, const CutoffFactor& b) {
  if (a.profile != b.profile) return a.profile < b.profile;
  if (a.order != b.order) return a.order < b.order;
  if (a.euler != b.euler) return a.euler < b.euler;
  if (a.scale != b.scale) return a.scale < b.scale;
  return a.ratio < b.ratio;
}

Box PieceIntegrand::box() const {
  Box b(n);
  for (size_t j = 0; j < n; ++j) b[j] = Interval(lo[j], hi[j]);
  return b;
}

bool PieceIntegrand::trivially_zero() const {
  for (size_t j = 0; j < n; ++j)
    if (!(lo[j] < hi[j])) return true;
  if (smooth.is_zero()) return true;
  Box b = box();
  for (const auto& c : cutoffs)
    if (c.vanishes_on(b)) return true;
  return false;
}

double PieceIntegrand::cutoff_value(const double* x) const {
  double v = 1.0;
  for (const auto& c : cutoffs) {
    v *= c.eval(x);
    if (v == 0.0) break;
  }
  return v;
}

std::string PieceIntegrand::str() const {
  std::ostringstream os;
  auto names = default_var_names(n);
  os << "[" << label << "] ";
  for (size_t j = 0; j < n; ++j)
    os << names[j] << "^(" << a[j].str() << "z+" << beta[j].str() << ") ";
  os << "unit(" << unit.base.str() << (unit.sign < 0 ? ", -" : ", +") << ") ";
  os << "A=" << smooth.str();
  for (const auto& c : cutoffs) os << " " << c.str();
  os << " box=";
  for (size_t j = 0; j < n; ++j) os << "[" << lo[j] << "," << hi[j] << "]";
  return os.str();
}

namespace {

struct CertifyResult {
  int sign = 0;
  bool ok = true;
  std::string why;
};

CertifyResult run_certify(const Polynomial& u, const Box& box, const std::vector<CutoffFactor>& records,
                          const CertifyConfig& cfg) {
  CertifyResult res;
  std::vector<std::pair<Box, int>> stack{{box, 0}};
  long examined = 0;
  while (!stack.empty()) {
    auto [b, depth] = std::move(stack.back());
    stack.pop_back();
    if (++examined > cfg.max_boxes) {
      res.ok = false;
      res.why = "box budget exhausted";
      return res;
    }
    bool outside = false;
    for (const auto& r : records)
      if (r.vanishes_on(b)) {
        outside = true;
        break;
      }
    if (outside) continue;
    Interval v = u.eval(b);
    int s = v.positive() ? 1 : (v.negative() ? -1 : 0);
    if (s != 0) {
      if (res.sign != 0 && s != res.sign) {
        res.ok = false;
        res.why = "unit changes sign on the support";
        return res;
      }
      res.sign = s;
      continue;
    }
    if (depth >= cfg.max_depth) {
      res.ok = false;
      res.why = "unit may vanish near (";
      for (size_t j = 0; j < b.size(); ++j) res.why += (j ? ", " : "") + std::to_string(b[j].mid());
      res.why += ")";
      return res;
    }
    auto [l, r] = bisect(b);
    stack.push_back({std::move(r), depth + 1});
    stack.push_back({std::move(l), depth + 1});
  }
  if (res.sign == 0) res.sign = 1;  // empty support: any sign is consistent
  return res;
}

}  // namespace

int certify_unit(const Polynomial& u, const Box& box, const std::vector<CutoffFactor>& records,
                 const CertifyConfig& cfg) {
  auto r = run_certify(u, box, records, cfg);
  if (!r.ok) throw CertificationError("cannot certify unit " + u.str() + ": " + r.why);
  return r.sign;
}

int try_certify_unit(const Polynomial& u, const Box& box, const std::vector<CutoffFactor>& records,
                     const CertifyConfig& cfg) {
  auto r = run_certify(u, box, records, cfg);
  return r.ok ? r.sign : 0;
}

}  // namespace lzeta
