#include "lzeta/pipeline.hpp"

namespace lzeta {

namespace {

ContinuationConfig continuation_config(const Problem& problem) {
  ContinuationConfig cc;
  cc.max_terms = problem.run.max_terms;
  cc.alpha = CutoffProfile::alpha(problem.cutoff.partition_c0, problem.cutoff.partition_c1);
  return cc;
}

}  // namespace

Analysis analyze(const Problem& problem, bool trace) {
  Analysis a;
  a.geometry = build_pieces(problem);
  ContinuationConfig cc = continuation_config(problem);
  cc.trace = trace;
  a.rep = continue_to(a.geometry.pieces, depth_target(a.geometry.pieces, problem.run.depth), cc);
  a.catalog = pole_catalog(a.rep, static_cast<size_t>(problem.dimension));
  return a;
}

std::vector<ScannedPole> scan_poles(const Problem& problem, const Analysis& analysis) {
  ContinuationConfig cc = continuation_config(problem);
  auto shallow = [&](const Rational& target) { return continue_to(analysis.geometry.pieces, target, cc); };
  return pole_scan(shallow, analysis.catalog, quad_config(problem), problem.run.abs_floor);
}

QuadConfig quad_config(const Problem& problem) {
  QuadConfig q;
  if (problem.run.order) q.order = *problem.run.order;
  q.max_subdivisions = problem.run.max_subdivisions;
  q.rel_tol = problem.run.tol;
  q.branch = problem.run.branch;
  return q;
}

}  // namespace lzeta
