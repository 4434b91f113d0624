#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polyinc/cayley.hpp"
#include "polyinc/polyspace.hpp"
#include "polyinc/random.hpp"
#include "polyinc/verdict.hpp"

namespace polyinc {

using SpacePtr = std::shared_ptr<const PolySpace>;

/// A deduplicated set of points of F_q^{m+1}. A point v is encoded base q with
/// v_1 least significant, so v = alpha + q^m v_{m+1} for alpha in F_q^m.
class PointSet {
 public:
  PointSet(SpacePtr space, std::vector<std::uint64_t> points);
  static PointSet all(SpacePtr space);

  const PolySpace& space() const { return *space_; }
  const std::vector<std::uint64_t>& points() const { return points_; }
  std::uint64_t size() const { return points_.size(); }
  /// q^{m+1}.
  std::uint64_t universe() const;

 private:
  SpacePtr space_;
  std::vector<std::uint64_t> points_;
};

/// A deduplicated set of members of a polynomial space (encoded indices).
class PolySet {
 public:
  PolySet(SpacePtr space, std::vector<std::uint64_t> members);
  static PolySet all(SpacePtr space);

  const PolySpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<std::uint64_t>& members() const { return members_; }
  std::uint64_t size() const { return members_.size(); }

 private:
  SpacePtr space_;
  std::vector<std::uint64_t> members_;
};

/// c(f) = N_q(f) over the additive group of V, with trace-form characters.
ConnectionFunction incidence_connection(const PolySpace& space);

/// The polynomial incidence graph Cay(V, N_q): the connection table plus a
/// lazily computed exact spectrum.
class IncidenceGraph {
 public:
  explicit IncidenceGraph(SpacePtr space);

  const PolySpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const ConnectionFunction& connection() const { return connection_; }
  /// Thread-safe; computed once.
  const SpectrumReport& spectrum() const;

 private:
  SpacePtr space_;
  ConnectionFunction connection_;
  mutable std::once_flag spectrum_once_;
  mutable std::optional<SpectrumReport> spectrum_;
};

struct PairSum {
  std::int64_t direct = 0;
  std::int64_t via_graph = 0;
  bool agree() const { return direct == via_graph; }
};

/// sum_{f in L, f' in L'} N_q(f - f') by a direct double loop over evaluations.
std::int64_t pp_incidence_sum_direct(const PolySet& L, const PolySet& Lp);
/// Same quantity as e_{N_q}(L, L') on the incidence graph.
std::int64_t pp_incidence_sum_via_graph(const IncidenceGraph& graph, const PolySet& L,
                                        const PolySet& Lp);
PairSum pp_incidence_sum(const IncidenceGraph& graph, const PolySet& L, const PolySet& Lp);

/// I(P, L) = |{(v, f) : f(v_1..v_m) = v_{m+1}}|.
std::int64_t point_poly_incidences(const PointSet& P, const PolySet& L);

struct IncidenceProfile {
  /// i_L(v) for every v of F_q^{m+1}, in point-index order.
  std::vector<std::int64_t> counts;
  std::int64_t first_moment = 0;   // sum_v i(v)
  std::int64_t second_moment = 0;  // sum_v i(v)^2
  /// sum_v (q i(v) - |L|)^2, i.e. q^2 times the variance sum.
  std::int64_t scaled_variance = 0;

  double variance_sum(std::uint64_t q) const {
    return static_cast<double>(scaled_variance) / static_cast<double>(q * q);
  }
};

IncidenceProfile incidence_profile(const PolySet& L);

struct SpectrumVerdict {
  bool property_star = false;
  std::vector<std::pair<std::int64_t, std::uint64_t>> expected;  // value -> multiplicity
  std::vector<SpectrumClass> actual;
  bool multiset_matches = false;
  bool eigencharacters_match = false;
  bool holds = false;
  std::string diagnostic;

  nlohmann::ordered_json to_json() const;
};

/// Compares the computed spectrum with the closed form without checking
/// hypotheses; on spaces lacking property (*) a mismatch is expected.
SpectrumVerdict check_spectrum_formula(const IncidenceGraph& graph);
/// As above, but throws HypothesisError when property (*) fails.
SpectrumVerdict verify_spectrum_theorem(const IncidenceGraph& graph);

struct KeyLemmaVerdict {
  bool vanishing_sizes = false;       // |V_alpha| = q^{dim-1} for all alpha
  bool annihilators = false;          // V_alpha^perp = {chi_{p_{C,alpha}}}
  bool trivial_intersections = false; // V_alpha^perp and V_beta^perp meet in chi_0
  bool holds = false;
  /// Encoded alphas where the vanishing count deviates.
  std::vector<std::uint64_t> failing_alphas;
  std::string diagnostic;

  nlohmann::ordered_json to_json() const;
};

KeyLemmaVerdict verify_key_lemma(const PolySpace& space);

/// |sum N_q(f-f') - q^{m-1}|L||L'|| <= q^{dim-1} sqrt(|L||L'|), decided exactly.
BoundVerdict verify_cross_version(const IncidenceGraph& graph, const PolySet& L,
                                  const PolySet& Lp);

struct SubspaceBounds {
  BoundVerdict lower;  // q^{m-1}|L|^2 <= sum
  BoundVerdict upper;  // sum <= q^{m-1}|L|^2 + q^{dim-1}|L|
  BoundVerdict full_space_upper;  // same upper bound with dim V_{m,r}
};

SubspaceBounds verify_subspace_bounds(const PolySet& L);

struct PointPolyBounds {
  BoundVerdict subspace;    // with dim V, needs property (*)
  BoundVerdict full_space;  // with dim V_{m,r}, r = max total degree
};

PointPolyBounds verify_point_poly_bound(const PointSet& P, const PolySet& L);

struct CauchySchwarzReport {
  double polys_branch = 0.0;   // |L| + q^{D/2-1}|P||L|^{1/2}
  double points_branch = 0.0;  // |P| + r^{1/2} q^{(m-1)/2}|P|^{1/2}|L|
  double bound = 0.0;
  std::int64_t incidences = 0;
  bool holds = false;
  /// q^{(dim-1)/2} sqrt(|P||L|) and |P||L|/q plus it.
  double spectral_rhs = 0.0;
  double spectral_upper = 0.0;
  bool spectral_rhs_smaller = false;
  bool spectral_upper_smaller = false;
  /// |P| > q and |L| > q^{dim-m}/r.
  bool in_regime = false;

  BoundVerdict verdict() const;
};

/// Needs the space to be a full V_{m,r}.
CauchySchwarzReport cauchy_schwarz_bound(const PointSet& P, const PolySet& L);

struct CounterexampleReport {
  std::uint64_t q = 0;
  std::uint32_t m = 0;
  std::uint32_t r = 0;
  std::int64_t points = 0;
  std::int64_t polys = 0;
  std::int64_t incidences = 0;
  /// q I = (2q - 1) q^{m-1} |L_0|.
  bool identity_holds = false;
  /// I / (q^{m-1} |L_0|), exactly (2q-1)/q when the identity holds.
  Rational ratio_to_main_term;
  /// |P_0||L_0|/q + q^{(dim L_0 - 1)/2} sqrt(|P_0||L_0|).
  double naive_bound = 0.0;
  double ratio_to_naive_bound = 0.0;
  bool naive_bound_violated = false;
  /// The bound with dim V_{m,r} in place of dim L_0 still holds.
  bool full_space_bound_holds = false;
  /// sum_{f,f' in L_0} N_q(f-f') and whether q times it equals (2q-1)q^{m-1}|L_0|^2.
  std::int64_t pair_sum = 0;
  bool pair_sum_identity_holds = false;

  BoundVerdict verdict() const;
};

CounterexampleReport example_counterexample(FieldPtr field, std::uint32_t m, std::uint32_t r,
                                            Budget budget = {});

enum class TauStrategy { uniform, linear_subspace, coset, x1_shifted };

std::string to_string(TauStrategy s);
TauStrategy parse_tau_strategy(const std::string& name);

struct TauRow {
  TauStrategy strategy = TauStrategy::uniform;
  std::uint64_t requested_size = 0;
  std::uint64_t size = 0;
  std::uint64_t trials = 0;
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  /// 1 + q^{dim-1} / (q^{m-1}|L|); meaningful under property (*).
  double upper_bound = 0.0;
  bool property_star = false;
  /// Every trial had q^{m-1}|L|^2 <= sum, and sum <= the upper bound under (*).
  bool within_bounds = false;
  std::uint64_t seed = 0;

  nlohmann::ordered_json to_json() const;
};

/// Concentration ratio sum N_q(f-f') / (q^{m-1}|L|^2) over sampled families.
std::vector<TauRow> tau_scan(const SpacePtr& space, const std::vector<TauStrategy>& strategies,
                             const std::vector<std::uint64_t>& sizes, std::uint64_t trials,
                             std::uint64_t seed);

/// sum_{f,f' in L} N_q(f-f') through the second-moment identity.
std::int64_t pp_self_sum_by_profile(const PolySet& L);

struct AlonBoppanaReport {
  double lambda = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // lambda / bound
  bool holds = false;
  /// Var_{f ~ V} N_q(f), exactly.
  Rational variance;
  /// Equals (q-1) q^{m-2} (checked only under property (*)).
  bool variance_matches_closed_form = false;

  BoundVerdict verdict() const;
};

AlonBoppanaReport alon_boppana_report(const IncidenceGraph& graph);

/// Random family of polynomials drawn with a strategy; used by the harness.
PolySet sample_family(const SpacePtr& space, TauStrategy strategy, std::uint64_t size,
                      SeededRng& rng);

}  // namespace polyinc
