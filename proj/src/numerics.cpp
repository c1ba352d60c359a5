#include "lzeta/numerics.hpp"

#include "lzeta/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lzeta {

std::vector<FValue> eval_F(const MeromorphicRep& rep, const PoleCatalog& catalog, std::span<const Complex> zs,
                           const QuadConfig& cfg) {
  for (const auto& z : zs) {
    if (rep.target && !(z.real() > rep.target->to_double()))
      throw SemanticError("z = " + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) +
                          "i lies left of the continuation target " + rep.target->str() + "; raise the depth");
    for (const auto& e : catalog.entries)
      if (std::abs(z - e.location.to_double()) < kPoleExclusion)
        throw PoleProximityError("z is within " + std::to_string(kPoleExclusion) + " of the candidate pole " +
                                 e.location.str() + "; use the residues command instead");
  }
  QuadResult q = integrate_terms(rep.terms, zs, cfg);
  std::vector<FValue> out;
  for (size_t i = 0; i < zs.size(); ++i) out.push_back({zs[i], q.value[i], q.error[i]});
  return out;
}

double contour_radius(const PoleCatalog& catalog, const Rational& location) {
  double s0 = location.to_double();
  double r = 1.0 / (4.0 * catalog.N.get_d());
  for (const auto& e : catalog.entries)
    if (e.location != location) r = std::min(r, 0.5 * std::abs(e.location.to_double() - s0));
  if (catalog.target) r = std::min(r, 0.5 * (s0 - catalog.target->to_double()));
  return r;
}

LaurentData residue_extract(const MeromorphicRep& rep, const PoleCatalog& catalog, const Rational& location,
                            int order, const QuadConfig& cfg, double floor) {
  if (order < 1) throw SemanticError("Laurent extraction needs an order of at least 1");
  LaurentData out;
  out.center = location;
  out.radius = contour_radius(catalog, location);
  if (!(out.radius > kPoleExclusion))
    throw AccuracyError("contour around " + location.str() + " would enter another candidate's exclusion zone",
                        out.radius);
  double s0 = location.to_double(), r = out.radius;
  QuadConfig qc = cfg;
  qc.rel_tol = std::min(cfg.rel_tol, 1e-10);

  // Trapezoid rule: c_{-j} = (1/M) sum_k F(z_k) (z_k - s0)^j. The 2M-node
  // batch contains the M-node rule, so each level costs one evaluation.
  auto coefficients = [&](const std::vector<Complex>& F, size_t stride) {
    std::vector<Complex> c(order, Complex(0.0));
    size_t M = F.size() / stride;
    for (size_t k = 0; k < F.size(); k += stride) {
      Complex w = std::polar(r, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(F.size()));
      Complex p = w;
      for (int j = 0; j < order; ++j) {
        c[j] += F[k] * p;
        p *= w;
      }
    }
    for (auto& v : c) v /= static_cast<double>(M);
    return c;
  };

  for (size_t M = 64; M <= 1024; M *= 2) {
    std::vector<Complex> zs(2 * M);
    // Nodes k and 2M - k are exact conjugates, which halves the quadrature.
    for (size_t k = 0; k <= M; ++k) zs[k] = s0 + std::polar(r, 2.0 * M_PI * static_cast<double>(k) / (2.0 * M));
    zs[M] = Complex(s0 - r, 0.0);
    for (size_t k = M + 1; k < 2 * M; ++k) zs[k] = std::conj(zs[2 * M - k]);
    QuadResult q = integrate_terms(rep.terms, zs, qc);
    auto coarse = coefficients(q.value, 2);
    auto fine = coefficients(q.value, 1);
    double diff = 0.0, scale = 0.0, qerr = 0.0;
    for (int j = 0; j < order; ++j) {
      diff = std::max(diff, std::abs(fine[j] - coarse[j]));
      scale = std::max(scale, std::abs(fine[j]));
    }
    for (double e : q.error) qerr = std::max(qerr, e);
    // Once the levels differ by no more than the quadrature noise carried
    // into the coefficients, more nodes cannot improve them.
    if (diff <= std::max({1e-8 * scale, 0.1 * floor, 2.0 * qerr * r})) {
      out.coeffs = fine;
      out.nodes = static_cast<int>(2 * M);
      out.error = diff + qerr * r;
      return out;
    }
  }
  throw AccuracyError("contour integral around " + location.str() + " did not settle with 2048 nodes", 0.0);
}

namespace {

ScannedPole scan_one(const MeromorphicRep& rep, const PoleCatalog& catalog, const PoleEntry& e, const QuadConfig& cfg,
                     double floor) {
  ScannedPole s;
  s.entry = e;
  s.laurent = residue_extract(rep, catalog, e.location, e.order_bound, cfg, floor);
  // A coefficient inside its own error bar is not evidence of a pole.
  double cut = std::max(floor, s.laurent.error);
  for (int j = e.order_bound; j >= 1; --j)
    if (std::abs(s.laurent.coeffs[j - 1]) > cut) {
      s.detected_order = j;
      break;
    }
  s.status = s.detected_order > 0 ? PoleStatus::Confirmed : PoleStatus::Undetected;
  return s;
}

}  // namespace

std::vector<ScannedPole> pole_scan(const MeromorphicRep& rep, const PoleCatalog& catalog, const QuadConfig& cfg,
                                   double floor) {
  std::vector<ScannedPole> out;
  for (const auto& e : catalog.entries) out.push_back(scan_one(rep, catalog, e, cfg, floor));
  return out;
}

std::vector<ScannedPole> pole_scan(const RepProvider& shallow, const PoleCatalog& catalog, const QuadConfig& cfg,
                                   double floor) {
  std::vector<ScannedPole> out;
  Rational step(Integer(1), Integer(2) * catalog.N);
  for (const auto& e : catalog.entries) {
    Rational target = e.location - step;
    if (catalog.target && target < *catalog.target) target = *catalog.target;
    out.push_back(scan_one(shallow(target), catalog, e, cfg, floor));
  }
  return out;
}

}  // namespace lzeta
