#pragma once

#include "lzeta/piece.hpp"

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lzeta {

/// prod 1/(a z + b) over a sorted multiset of (a, b) with a > 0.
class Prefactor {
public:
  using Factor = std::pair<Rational, Rational>;

  const std::vector<Factor>& factors() const { return f_; }
  bool empty() const { return f_.empty(); }
  void add(const Rational& a, const Rational& b);
  std::complex<double> eval(std::complex<double> z) const;
  /// Number of factors vanishing at z = loc.
  int multiplicity(const Rational& loc) const;
  std::string str() const;

  friend bool operator==(const Prefactor&, const Prefactor&) = default;

private:
  std::vector<Factor> f_;
};

enum class CaseKind { Case1, Case2, Case3 };

/// Classification of a differentiated Euler record against the active
/// variables of its piece. Case1/Case2 hold the variables that get a lower
/// bound; Case3 holds the split pair (l from the numerator, m from the denominator).
struct CaseTag {
  CaseKind kind = CaseKind::Case1;
  std::vector<size_t> J;
  size_t l = 0, m = 0;
};

/// Index of the first B-kind record whose ratio still involves an active
/// variable, if any. Records that only involve frozen variables are smooth.
std::optional<size_t> first_wedge_record(const PieceIntegrand& p);

CaseTag classify_wedge(const PieceIntegrand& p, size_t record);

/// Lower bounds C_j > 0 for the variables in J implied by the support of
/// the record (its argument lies in the transition band there).
std::vector<double> case_lower_bounds(const PieceIntegrand& p, size_t record, const std::vector<size_t>& J);

/// Case 1 and Case 2: raises lo_j to the bounds above, freezing those
/// variables. The piece becomes entire in them. Returns false when the
/// support becomes empty.
bool freeze_wedge(PieceIntegrand& p, size_t record, const CaseTag& tag);

/// x_j -> x_j^{M_j} so that the active part of the record's ratio has equal
/// exponent magnitudes. Returns the substituted piece and the M vector.
PieceIntegrand equalize_powers(const PieceIntegrand& p, size_t record, std::vector<int>* M = nullptr);

/// alpha(x_l/x_m) + alpha(x_m/x_l) = 1 split, followed by x_l -> x_l x_m in
/// the first piece and x_m -> x_m x_l in the second.
std::pair<PieceIntegrand, PieceIntegrand> case3_split(const PieceIntegrand& p, size_t l, size_t m,
                                                      const CutoffProfile& alpha);

/// Product-rule terms of d/dx_j applied to everything but x_j^{a_j z + b_j},
/// already multiplied by -x_j (the IBP sign and exponent raise). Tags name
/// the rule that produced each term.
std::vector<PieceIntegrand> derivative_split(const PieceIntegrand& p, size_t j,
                                             std::vector<std::string>* tags = nullptr);

struct IbpResult {
  Prefactor::Factor factor;
  std::vector<PieceIntegrand> terms;
  std::vector<std::string> tags;
};

/// One integration by parts in x_j: returns the factor (a_j, beta_j + 1)
/// and the new integrands. Requires a_j > 0 and x_j active.
IbpResult ibp_step(const PieceIntegrand& p, size_t j);

/// max over active j with a_j > 0 of -(beta_j + 1)/a_j; empty when entire.
std::optional<Rational> threshold(const PieceIntegrand& p);

/// Depth target: the largest threshold over the pieces after L+1 further
/// integrations by parts in every active variable.
std::optional<Rational> depth_target(const std::vector<PieceIntegrand>& pieces, int L);

struct ContinuationConfig {
  long max_terms = 100000;
  int margin = 0;  // every active exponent a_j T + beta_j must reach this value
  bool trace = false;
  CutoffProfile alpha = CutoffProfile::alpha(Rational(Integer(1), Integer(2)), Rational(2));
};

struct RepTerm {
  Prefactor prefactor;
  PieceIntegrand piece;
  int cycle = 0;
};

/// F(z) = sum over terms of prefactor(z) * integral(piece)(z), each integral
/// analytic for Re z > target.
struct MeromorphicRep {
  std::vector<RepTerm> terms;
  std::optional<Rational> target;  // empty: every term is entire
  long rewrites = 0;
  std::vector<std::string> trace;
};

MeromorphicRep continue_to(const std::vector<PieceIntegrand>& pieces, const std::optional<Rational>& target,
                           const ContinuationConfig& cfg = {});

struct PoleEntry {
  Rational location;
  int order_bound = 1;     // clamped to the dimension
  int max_multiplicity = 1;  // raw count before clamping
};

struct PoleCatalog {
  std::vector<PoleEntry> entries;  // sorted by decreasing location
  Integer N = 1;
  std::optional<Rational> target;
  size_t dimension = 1;
};

/// Candidate poles strictly between the target and 0.
PoleCatalog pole_catalog(const MeromorphicRep& rep, size_t dimension);

}  // namespace lzeta
