#include "polyinc/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "polyinc/errors.hpp"

namespace polyinc {

namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt big_pow(std::uint64_t base, std::uint64_t exp) {
  BigInt out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) out *= base;
  return out;
}

std::uint64_t pow_or_throw(std::uint64_t base, std::uint64_t exp, const char* what) {
  const auto v = checked_pow(base, exp);
  if (!v) throw OverflowError(std::string(what) + " overflows 64 bits");
  return *v;
}

std::int64_t to_i64(std::uint64_t v) {
  if (v > static_cast<std::uint64_t>(INT64_MAX)) throw OverflowError("count exceeds int64");
  return static_cast<std::int64_t>(v);
}

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

nlohmann::ordered_json space_params(const PolySpace& space) {
  nlohmann::ordered_json j;
  j["field"] = space.field().name();
  j["support"] = space.support().descriptor();
  j["q"] = space.q();
  j["m"] = space.m();
  j["dim"] = space.dim();
  return j;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

/// dim V_{m,r} for the smallest full space containing `space`.
std::uint64_t enclosing_full_dim(const PolySpace& space) {
  return binomial(space.m() + space.max_total_degree(), space.m());
}

/// Evaluations of every listed polynomial, row-major (member, point).
std::vector<FieldElem> evaluation_rows(const PolySpace& space,
                                       const std::vector<std::uint64_t>& members) {
  const std::uint64_t n = space.num_points();
  std::vector<FieldElem> out;
  out.reserve(members.size() * n);
  for (auto idx : members) {
    const auto vals = space.evaluations(space.decode(idx));
    out.insert(out.end(), vals.begin(), vals.end());
  }
  return out;
}

/// Exactly decides x <= y * sqrt(z) for x, y, z >= 0 integers.
bool le_sqrt(const BigInt& x, const BigInt& y, const BigInt& z) {
  return x * x <= y * y * z;
}

/// Random F_q-independent vectors of V; k <= dim.
std::vector<Poly> random_independent(const PolySpace& space, std::size_t k, SeededRng& rng) {
  const auto& F = space.field();
  for (;;) {
    std::vector<Poly> picked;
    std::vector<Poly> echelon;  // reduced copies
    std::vector<std::size_t> pivots;
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) {
      Poly v = space.decode(rng.below(space.size()));
      Poly red = v;
      for (std::size_t e = 0; e < echelon.size(); ++e) {
        const FieldElem c = red.coeffs[pivots[e]];
        if (c.index == 0) continue;
        for (std::size_t i = 0; i < space.dim(); ++i) {
          red.coeffs[i] = F.sub(red.coeffs[i], F.mul(c, echelon[e].coeffs[i]));
        }
      }
      auto it = std::find_if(red.coeffs.begin(), red.coeffs.end(),
                             [](FieldElem x) { return x.index != 0; });
      if (it == red.coeffs.end()) {
        ok = false;
        break;
      }
      const std::size_t piv = static_cast<std::size_t>(it - red.coeffs.begin());
      const FieldElem inv = F.inv(*it);
      for (auto& x : red.coeffs) x = F.mul(x, inv);
      for (std::size_t e = 0; e < echelon.size(); ++e) {
        const FieldElem c = echelon[e].coeffs[piv];
        if (c.index == 0) continue;
        for (std::size_t i = 0; i < space.dim(); ++i) {
          echelon[e].coeffs[i] = F.sub(echelon[e].coeffs[i], F.mul(c, red.coeffs[i]));
        }
      }
      echelon.push_back(std::move(red));
      pivots.push_back(piv);
      picked.push_back(std::move(v));
    }
    if (ok) return picked;
  }
}

std::vector<std::uint64_t> span_of(const PolySpace& space, const std::vector<Poly>& basis,
                                   const Poly& shift) {
  const auto& F = space.field();
  const std::uint64_t q = space.q();
  const std::uint64_t count = pow_or_throw(q, basis.size(), "span size");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  std::vector<std::uint32_t> digits(basis.size(), 0);
  for (std::uint64_t n = 0; n < count; ++n) {
    if (n != 0) {
      for (auto& d : digits) {
        if (++d < q) break;
        d = 0;
      }
    }
    Poly f = shift;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (digits[j] == 0) continue;
      const FieldElem c{digits[j]};
      for (std::size_t i = 0; i < space.dim(); ++i) {
        f.coeffs[i] = F.add(f.coeffs[i], F.mul(c, basis[j].coeffs[i]));
      }
    }
    out.push_back(space.encode(f));
  }
  return out;
}

std::size_t floor_log(std::uint64_t q, std::uint64_t n) {
  std::size_t k = 0;
  std::uint64_t v = q;
  while (v <= n) {
    ++k;
    if (v > UINT64_MAX / q) break;
    v *= q;
  }
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------

PointSet::PointSet(SpacePtr space, std::vector<std::uint64_t> points)
    : space_(std::move(space)), points_(sorted_unique(std::move(points))) {
  if (!space_) throw ConfigError("point set needs a space");
  const auto n = universe();
  if (!points_.empty() && points_.back() >= n) throw ConfigError("point index out of range");
}

PointSet PointSet::all(SpacePtr space) {
  const std::uint64_t n = space->num_points() * space->q();
  std::vector<std::uint64_t> pts(n);
  std::iota(pts.begin(), pts.end(), std::uint64_t{0});
  return PointSet(std::move(space), std::move(pts));
}

std::uint64_t PointSet::universe() const { return space_->num_points() * space_->q(); }

PolySet::PolySet(SpacePtr space, std::vector<std::uint64_t> members)
    : space_(std::move(space)), members_(sorted_unique(std::move(members))) {
  if (!space_) throw ConfigError("polynomial set needs a space");
  if (!members_.empty() && members_.back() >= space_->size()) {
    throw ConfigError("polynomial index out of range");
  }
}

PolySet PolySet::all(SpacePtr space) {
  std::vector<std::uint64_t> members(space->size());
  std::iota(members.begin(), members.end(), std::uint64_t{0});
  return PolySet(std::move(space), std::move(members));
}

// ---------------------------------------------------------------------------

ConnectionFunction incidence_connection(const PolySpace& space) {
  const std::uint64_t n = space.num_points();
  const std::size_t dim = space.dim();
  const auto& F = space.field();
  const std::uint64_t q = space.q();

  // partial[k] holds the evaluations of sum_{i >= k} f_i x^{I_i}, so an
  // odometer step that changes digits 0..k only recomputes those levels.
  std::vector<std::vector<FieldElem>> partial(dim + 1, std::vector<FieldElem>(n, F.zero()));
  std::vector<std::uint32_t> digits(dim, 0);
  std::vector<std::int64_t> table(space.size());

  auto rebuild = [&](std::size_t top) {
    for (std::size_t k = top + 1; k-- > 0;) {
      const FieldElem c{digits[k]};
      auto& dst = partial[k];
      const auto& src = partial[k + 1];
      if (c.index == 0) {
        dst = src;
        continue;
      }
      for (std::uint64_t a = 0; a < n; ++a) {
        dst[a] = F.add(src[a], F.mul(c, space.monomial_row(a)[k]));
      }
    }
  };

  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    if (idx != 0) {
      std::size_t k = 0;
      while (++digits[k] == q) {
        digits[k] = 0;
        ++k;
      }
      rebuild(k);
    }
    const auto& vals = partial[0];
    table[idx] = std::count(vals.begin(), vals.end(), F.zero());
  }
  return ConnectionFunction(GroupDesc::vector_over_field(space.field_ptr(),
                                                         static_cast<std::uint32_t>(dim)),
                            std::move(table));
}

IncidenceGraph::IncidenceGraph(SpacePtr space)
    : space_(std::move(space)), connection_(incidence_connection(*space_)) {}

const SpectrumReport& IncidenceGraph::spectrum() const {
  std::call_once(spectrum_once_, [this] {
    SpectrumOptions opts;
    opts.method = TransformMethod::fast;
    spectrum_ = polyinc::spectrum(connection_, opts);
  });
  return *spectrum_;
}

// ---------------------------------------------------------------------------

std::int64_t pp_incidence_sum_direct(const PolySet& L, const PolySet& Lp) {
  if (&L.space() != &Lp.space() && !(L.space().support() == Lp.space().support() &&
                                     L.space().q() == Lp.space().q())) {
    throw ConfigError("polynomial sets live in different spaces");
  }
  const auto& space = L.space();
  const std::uint64_t n = space.num_points();
  const auto A = evaluation_rows(space, L.members());
  const auto B = evaluation_rows(space, Lp.members());
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const FieldElem* a = A.data() + i * n;
    for (std::size_t j = 0; j < Lp.size(); ++j) {
      const FieldElem* b = B.data() + j * n;
      std::int64_t agree = 0;
      for (std::uint64_t k = 0; k < n; ++k) agree += a[k] == b[k];
      acc = checked::add(acc, agree);
    }
  }
  return acc;
}

std::int64_t pp_incidence_sum_via_graph(const IncidenceGraph& graph, const PolySet& L,
                                        const PolySet& Lp) {
  return edge_weight_exact(graph.connection(), L.members(), Lp.members());
}

PairSum pp_incidence_sum(const IncidenceGraph& graph, const PolySet& L, const PolySet& Lp) {
  return PairSum{pp_incidence_sum_direct(L, Lp), pp_incidence_sum_via_graph(graph, L, Lp)};
}

std::int64_t point_poly_incidences(const PointSet& P, const PolySet& L) {
  const auto& space = L.space();
  if (P.space().q() != space.q() || P.space().m() != space.m()) {
    throw ConfigError("point set and polynomial set disagree on q or m");
  }
  if (P.size() == 0 || L.size() == 0) return 0;
  const std::uint64_t n = space.num_points();
  std::vector<char> present(n * space.q(), 0);
  for (auto v : P.points()) present[v] = 1;
  std::int64_t acc = 0;
  for (auto idx : L.members()) {
    const auto vals = space.evaluations(space.decode(idx));
    for (std::uint64_t a = 0; a < n; ++a) acc += present[a + n * vals[a].index];
  }
  return acc;
}

IncidenceProfile incidence_profile(const PolySet& L) {
  const auto& space = L.space();
  const std::uint64_t n = space.num_points();
  const std::uint64_t q = space.q();
  IncidenceProfile prof;
  prof.counts.assign(n * q, 0);
  for (auto idx : L.members()) {
    const auto vals = space.evaluations(space.decode(idx));
    for (std::uint64_t a = 0; a < n; ++a) ++prof.counts[a + n * vals[a].index];
  }
  const std::int64_t size = to_i64(L.size());
  const std::int64_t qq = to_i64(q);
  for (auto c : prof.counts) {
    prof.first_moment = checked::add(prof.first_moment, c);
    prof.second_moment = checked::add(prof.second_moment, checked::mul(c, c));
    const std::int64_t d = checked::sub(checked::mul(qq, c), size);
    prof.scaled_variance = checked::add(prof.scaled_variance, checked::mul(d, d));
  }
  return prof;
}

std::int64_t pp_self_sum_by_profile(const PolySet& L) {
  return incidence_profile(L).second_moment;
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json SpectrumVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["property_star"] = property_star;
  auto& exp = j["expected"] = nlohmann::ordered_json::array();
  for (const auto& [v, mult] : expected) exp.push_back({{"value", v}, {"multiplicity", mult}});
  auto& act = j["actual"] = nlohmann::ordered_json::array();
  for (const auto& cls : actual) {
    act.push_back({{"value", cls.value.to_json()}, {"multiplicity", cls.multiplicity}});
  }
  j["multiset_matches"] = multiset_matches;
  j["eigencharacters_match"] = eigencharacters_match;
  j["holds"] = holds;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j;
}

SpectrumVerdict check_spectrum_formula(const IncidenceGraph& graph) {
  const auto& space = graph.space();
  const auto& report = graph.spectrum();
  SpectrumVerdict out;
  out.property_star = space.property_star().holds;
  out.actual = report.classes;

  const std::uint64_t q = space.q();
  const std::uint64_t size = space.size();
  const std::int64_t top = to_i64(pow_or_throw(q, space.dim() + space.m() - 1, "top eigenvalue"));
  const std::int64_t mid = to_i64(pow_or_throw(q, space.dim() - 1, "eigenvalue"));
  const std::uint64_t mid_mult = (q - 1) * pow_or_throw(q, space.m(), "multiplicity");
  out.expected.emplace_back(top, 1);
  out.expected.emplace_back(mid, mid_mult);
  if (size >= mid_mult + 1) {
    out.expected.emplace_back(0, size - mid_mult - 1);
  } else {
    out.diagnostic = "closed form needs |V| >= (q-1)q^m + 1";
  }

  std::map<std::int64_t, std::uint64_t> actual;
  bool all_integers = true;
  for (const auto& cls : report.classes) {
    const auto n = cls.value.exact ? cls.value.exact->as_integer() : std::nullopt;
    if (!n) {
      all_integers = false;
      continue;
    }
    actual[*n] += cls.multiplicity;
  }
  std::map<std::int64_t, std::uint64_t> expected;
  for (const auto& [v, mult] : out.expected) {
    if (mult > 0) expected[v] += mult;
  }
  out.multiset_matches = all_integers && actual == expected && out.diagnostic.empty();
  if (!out.multiset_matches && out.diagnostic.empty()) {
    out.diagnostic = all_integers ? "eigenvalue multiset differs from the closed form"
                                  : "spectrum has non-integer eigenvalues";
  }

  // Eigencharacters of q^{dim-1} against {p_{C,alpha} : C != 0}.
  std::vector<std::uint64_t> predicted;
  const auto& F = space.field();
  const std::uint64_t n = space.num_points();
  for (std::uint64_t a = 0; a < n; ++a) {
    const auto alpha = space.decode_point(a, space.m());
    for (std::uint32_t c = 1; c < q; ++c) {
      predicted.push_back(space.encode(space.annihilator_poly(F.from_index(c), alpha)));
    }
  }
  predicted = sorted_unique(std::move(predicted));
  auto found = report.characters_with_integer(mid);
  std::sort(found.begin(), found.end());
  out.eigencharacters_match = found == predicted && predicted.size() == mid_mult;
  if (out.multiset_matches && !out.eigencharacters_match) {
    out.diagnostic = "eigencharacters of q^{dim-1} are not the annihilator polynomials";
  }
  out.holds = out.multiset_matches && out.eigencharacters_match;
  return out;
}

SpectrumVerdict verify_spectrum_theorem(const IncidenceGraph& graph) {
  const auto star = graph.space().property_star();
  if (!star.holds) {
    throw HypothesisError("spectrum theorem needs property (*): " + star.reason);
  }
  return check_spectrum_formula(graph);
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json KeyLemmaVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["vanishing_sizes"] = vanishing_sizes;
  j["annihilators"] = annihilators;
  j["trivial_intersections"] = trivial_intersections;
  j["holds"] = holds;
  j["failing_alphas"] = failing_alphas;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j;
}

KeyLemmaVerdict verify_key_lemma(const PolySpace& space) {
  const auto& F = space.field();
  const std::uint64_t q = space.q();
  const std::uint32_t s = F.s();
  const std::uint64_t n = space.num_points();
  const std::size_t dim = space.dim();
  const std::uint64_t expected = space.size() / q;

  KeyLemmaVerdict out;
  out.vanishing_sizes = true;
  out.annihilators = true;

  std::vector<FieldElem> basis(s);
  for (std::uint32_t k = 0; k < s; ++k) basis[k] = F.pow(F.generator_t(), k);

  // Decoded character labels, shared by every alpha.
  std::vector<Poly> chars;
  chars.reserve(space.size());
  for (std::uint64_t g = 0; g < space.size(); ++g) chars.push_back(space.decode(g));

  std::vector<std::vector<std::uint64_t>> annihilators(n);
  for (std::uint64_t a = 0; a < n; ++a) {
    const auto alpha = space.decode_point(a, space.m());
    const auto row = space.monomial_row(a);

    // 1) |V_alpha| by enumeration.
    const std::uint64_t count = space.vanishing_count(alpha);
    if (count != expected) {
      out.vanishing_sizes = false;
      out.failing_alphas.push_back(a);
    }

    // 2) F_p-generators of V_alpha = ker(f -> f(alpha)).
    std::vector<Poly> gens;
    auto pivot = std::find_if(row.begin(), row.end(), [](FieldElem x) { return x.index != 0; });
    for (std::size_t i = 0; i < dim; ++i) {
      Poly g = space.zero_poly();
      if (pivot == row.end()) {
        g.coeffs[i] = F.one();
      } else {
        const std::size_t j = static_cast<std::size_t>(pivot - row.begin());
        if (i == j) continue;
        g.coeffs[i] = F.one();
        g.coeffs[j] = F.neg(F.mul(row[i], F.inv(row[j])));
      }
      for (auto t : basis) {
        Poly h = space.zero_poly();
        for (std::size_t k = 0; k < dim; ++k) h.coeffs[k] = F.mul(t, g.coeffs[k]);
        if (space.evaluate(h, alpha) != F.zero()) {
          out.annihilators = false;
          out.diagnostic = "generator does not vanish at alpha";
        }
        gens.push_back(std::move(h));
      }
    }
    auto& ann = annihilators[a];
    for (std::uint64_t g = 0; g < space.size(); ++g) {
      bool trivial = true;
      for (const auto& h : gens) {
        if (space.trace_pairing(chars[g], h) != 0) {
          trivial = false;
          break;
        }
      }
      if (trivial) ann.push_back(g);
    }
    std::vector<std::uint64_t> predicted;
    for (std::uint32_t c = 0; c < q; ++c) {
      predicted.push_back(space.encode(space.annihilator_poly(F.from_index(c), alpha)));
    }
    predicted = sorted_unique(std::move(predicted));
    if (ann != predicted) out.annihilators = false;
  }

  // 3) Pairwise intersections of the annihilators.
  out.trivial_intersections = true;
  std::vector<std::uint64_t> common;
  for (std::uint64_t a = 0; a < n && out.trivial_intersections; ++a) {
    for (std::uint64_t b = a + 1; b < n; ++b) {
      common.clear();
      std::set_intersection(annihilators[a].begin(), annihilators[a].end(),
                            annihilators[b].begin(), annihilators[b].end(),
                            std::back_inserter(common));
      if (common != std::vector<std::uint64_t>{0}) {
        out.trivial_intersections = false;
        break;
      }
    }
  }

  out.holds = out.vanishing_sizes && out.annihilators && out.trivial_intersections;
  if (!out.holds && out.diagnostic.empty()) {
    if (!out.vanishing_sizes) {
      out.diagnostic = std::to_string(out.failing_alphas.size()) +
                       " points with |V_alpha| != q^{dim-1}";
    } else if (!out.annihilators) {
      out.diagnostic = "annihilator differs from the p_{C,alpha} characters";
    } else {
      out.diagnostic = "two annihilators share a non-trivial character";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

BoundVerdict verify_cross_version(const IncidenceGraph& graph, const PolySet& L,
                                  const PolySet& Lp) {
  const auto& space = graph.space();
  const std::uint64_t q = space.q();
  const std::int64_t sum = pp_incidence_sum_via_graph(graph, L, Lp);
  const BigInt main = big_pow(q, space.m() - 1) * L.size() * Lp.size();
  BigInt dev = BigInt(sum) - main;
  if (dev < 0) dev = -dev;
  const BigInt scale = big_pow(q, space.dim() - 1);

  BoundVerdict v;
  v.theorem = "cross-version";
  v.lhs = dev.convert_to<std::int64_t>();
  v.rhs = scale.convert_to<double>() *
          std::sqrt(static_cast<double>(L.size()) * static_cast<double>(Lp.size()));
  v.main_term = main.convert_to<double>();
  v.holds = le_sqrt(dev, scale, BigInt(L.size()) * Lp.size());
  v.params = space_params(space);
  v.params["property_star"] = space.property_star().holds;
  v.params["L"] = L.size();
  v.params["L_prime"] = Lp.size();
  v.params["sum"] = sum;
  return v;
}

SubspaceBounds verify_subspace_bounds(const PolySet& L) {
  const auto& space = L.space();
  const std::uint64_t q = space.q();
  const std::int64_t sum = pp_self_sum_by_profile(L);
  const BigInt main = big_pow(q, space.m() - 1) * L.size() * L.size();
  const BigInt err = big_pow(q, space.dim() - 1) * L.size();
  const BigInt err_full = big_pow(q, enclosing_full_dim(space) - 1) * L.size();

  auto params = space_params(space);
  params["property_star"] = space.property_star().holds;
  params["L"] = L.size();

  SubspaceBounds out;
  out.lower.theorem = "subspace-incidence-lower";
  out.lower.lhs = main.convert_to<std::int64_t>();
  out.lower.rhs = static_cast<double>(sum);
  out.lower.main_term = main.convert_to<double>();
  out.lower.holds = main <= sum;
  out.lower.params = params;

  out.upper.theorem = "subspace-incidence-upper";
  out.upper.lhs = sum;
  out.upper.rhs = (main + err).convert_to<double>();
  out.upper.main_term = main.convert_to<double>();
  out.upper.holds = BigInt(sum) <= main + err;
  out.upper.params = params;

  out.full_space_upper.theorem = "incidence-bound-multi-poly";
  out.full_space_upper.lhs = sum;
  out.full_space_upper.rhs = (main + err_full).convert_to<double>();
  out.full_space_upper.main_term = main.convert_to<double>();
  out.full_space_upper.holds = main <= sum && BigInt(sum) <= main + err_full;
  out.full_space_upper.params = params;
  out.full_space_upper.params["full_dim"] = enclosing_full_dim(space);
  return out;
}

PointPolyBounds verify_point_poly_bound(const PointSet& P, const PolySet& L) {
  const auto& space = L.space();
  const std::uint64_t q = space.q();
  const std::int64_t I = point_poly_incidences(P, L);
  const BigInt PL = BigInt(P.size()) * L.size();
  BigInt dev = BigInt(I) * q - PL;  // q times the deviation
  if (dev < 0) dev = -dev;
  const auto dev_rational =
      Rational::make(dev.convert_to<std::int64_t>(), static_cast<std::int64_t>(q));
  const double root = std::sqrt(PL.convert_to<double>());

  auto make = [&](const char* name, std::uint64_t d) {
    BoundVerdict v;
    v.theorem = name;
    v.lhs = dev_rational;
    v.rhs = std::pow(static_cast<double>(q), (static_cast<double>(d) - 1.0) / 2.0) * root;
    v.main_term = PL.convert_to<double>() / static_cast<double>(q);
    // (q I - |P||L|)^2 <= q^{d+1} |P||L|
    v.holds = dev * dev <= big_pow(q, d + 1) * PL;
    v.params = space_params(space);
    v.params["property_star"] = space.property_star().holds;
    v.params["P"] = P.size();
    v.params["L"] = L.size();
    v.params["incidences"] = I;
    v.params["bound_dim"] = d;
    return v;
  };
  return PointPolyBounds{make("subspace-point-multi-poly", space.dim()),
                         make("point-multi-poly", enclosing_full_dim(space))};
}

BoundVerdict CauchySchwarzReport::verdict() const {
  BoundVerdict v;
  v.theorem = "point-multi-poly-cs";
  v.lhs = incidences;
  v.rhs = bound;
  v.holds = holds;
  v.params["polys_branch"] = polys_branch;
  v.params["points_branch"] = points_branch;
  v.params["spectral_rhs"] = spectral_rhs;
  v.params["spectral_upper"] = spectral_upper;
  v.params["spectral_rhs_smaller"] = spectral_rhs_smaller;
  v.params["spectral_upper_smaller"] = spectral_upper_smaller;
  v.params["in_regime"] = in_regime;
  return v;
}

CauchySchwarzReport cauchy_schwarz_bound(const PointSet& P, const PolySet& L) {
  const auto& space = L.space();
  const std::uint32_t m = space.m();
  const std::uint32_t r = space.max_total_degree();
  if (!(space.support() == MonomialSupport::full(m, r))) {
    throw HypothesisError("Cauchy-Schwarz bound needs a full space V_{m,r}");
  }
  const std::uint64_t q = space.q();
  const std::uint64_t D = space.dim();
  const double qd = static_cast<double>(q);
  const double p_sz = static_cast<double>(P.size());
  const double l_sz = static_cast<double>(L.size());

  CauchySchwarzReport out;
  out.incidences = point_poly_incidences(P, L);
  out.polys_branch = l_sz + std::pow(qd, static_cast<double>(D) / 2.0 - 1.0) * p_sz * std::sqrt(l_sz);
  out.points_branch = p_sz + std::sqrt(static_cast<double>(r)) *
                                 std::pow(qd, (static_cast<double>(m) - 1.0) / 2.0) *
                                 std::sqrt(p_sz) * l_sz;
  out.bound = std::min(out.polys_branch, out.points_branch);

  const BigInt I = out.incidences;
  const BigInt Pb = P.size(), Lb = L.size();
  // I <= |L| + q^{D/2-1}|P||L|^{1/2}, squared after multiplying by q.
  const bool a = I <= Lb || (I - Lb) * (I - Lb) * q * q <= big_pow(q, D) * Pb * Pb * Lb;
  // I <= |P| + r^{1/2} q^{(m-1)/2} |P|^{1/2} |L|.
  const bool b = I <= Pb || (I - Pb) * (I - Pb) <= BigInt(r) * big_pow(q, m - 1) * Pb * Lb * Lb;
  out.holds = a && b;

  out.spectral_rhs = std::pow(qd, (static_cast<double>(D) - 1.0) / 2.0) * std::sqrt(p_sz * l_sz);
  out.spectral_upper = p_sz * l_sz / qd + out.spectral_rhs;
  out.spectral_rhs_smaller = out.spectral_rhs < out.bound;
  out.spectral_upper_smaller = out.spectral_upper < out.bound;
  out.in_regime = p_sz > qd && l_sz * r > std::pow(qd, static_cast<double>(D - m));
  return out;
}

// ---------------------------------------------------------------------------

BoundVerdict CounterexampleReport::verdict() const {
  BoundVerdict v;
  v.theorem = "counterexample-identity";
  v.lhs = static_cast<std::int64_t>(q) * incidences;
  const std::int64_t rhs = static_cast<std::int64_t>(2 * q - 1) *
                           to_i64(pow_or_throw(q, m - 1, "q^{m-1}")) * polys;
  v.rhs = static_cast<double>(rhs);
  v.main_term = static_cast<double>(rhs) / static_cast<double>(q);
  v.holds = identity_holds && pair_sum_identity_holds;
  v.params["q"] = q;
  v.params["m"] = m;
  v.params["r"] = r;
  v.params["P0"] = points;
  v.params["L0"] = polys;
  v.params["incidences"] = incidences;
  v.params["ratio_to_main_term"] = ratio_to_main_term.to_string();
  v.params["naive_bound"] = naive_bound;
  v.params["ratio_to_naive_bound"] = ratio_to_naive_bound;
  v.params["naive_bound_violated"] = naive_bound_violated;
  v.params["full_space_bound_holds"] = full_space_bound_holds;
  v.params["pair_sum"] = pair_sum;
  return v;
}

CounterexampleReport example_counterexample(FieldPtr field, std::uint32_t m, std::uint32_t r,
                                            Budget budget) {
  if (m < 1 || r < 1) throw ConfigError("counterexample needs m >= 1 and r >= 1");
  auto space = std::make_shared<const PolySpace>(field, MonomialSupport::x1_shifted(m, r), budget);
  const std::uint64_t q = space->q();
  const std::uint64_t n = space->num_points();

  std::vector<std::uint64_t> pts(n);
  std::iota(pts.begin(), pts.end(), std::uint64_t{0});  // (alpha, 0)
  const PointSet P0(space, std::move(pts));
  const PolySet L0 = PolySet::all(space);

  CounterexampleReport out;
  out.q = q;
  out.m = m;
  out.r = r;
  out.points = to_i64(P0.size());
  out.polys = to_i64(L0.size());
  out.incidences = point_poly_incidences(P0, L0);

  const BigInt main = big_pow(q, m - 1) * L0.size();
  out.identity_holds = BigInt(out.incidences) * q == BigInt(2 * q - 1) * main;
  out.ratio_to_main_term = Rational::make(out.incidences, main.convert_to<std::int64_t>());

  const auto bounds = verify_point_poly_bound(P0, L0);
  const double pl = static_cast<double>(P0.size()) * static_cast<double>(L0.size());
  out.naive_bound = pl / static_cast<double>(q) + bounds.subspace.rhs;
  out.ratio_to_naive_bound = static_cast<double>(out.incidences) / out.naive_bound;
  // I > |P||L|/q here, so the deviation bound failing means I exceeds the naive bound.
  out.naive_bound_violated = !bounds.subspace.holds && BigInt(out.incidences) * q > BigInt(pl);
  out.full_space_bound_holds = bounds.full_space.holds;

  out.pair_sum = pp_self_sum_by_profile(L0);
  out.pair_sum_identity_holds =
      BigInt(out.pair_sum) * q == BigInt(2 * q - 1) * big_pow(q, m - 1) * L0.size() * L0.size();
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(TauStrategy s) {
  switch (s) {
    case TauStrategy::uniform: return "uniform";
    case TauStrategy::linear_subspace: return "linear-subspace";
    case TauStrategy::coset: return "coset";
    case TauStrategy::x1_shifted: return "x1-shifted";
  }
  return "uniform";
}

TauStrategy parse_tau_strategy(const std::string& name) {
  for (auto s : {TauStrategy::uniform, TauStrategy::linear_subspace, TauStrategy::coset,
                 TauStrategy::x1_shifted}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown tau-scan strategy: " + name);
}

PolySet sample_family(const SpacePtr& space, TauStrategy strategy, std::uint64_t size,
                      SeededRng& rng) {
  const std::uint64_t q = space->q();
  switch (strategy) {
    case TauStrategy::uniform:
      return PolySet(space, rng.sample(space->size(), std::min(size, space->size())));
    case TauStrategy::linear_subspace:
    case TauStrategy::coset: {
      const std::size_t k = std::min(floor_log(q, size), space->dim());
      const auto basis = random_independent(*space, k, rng);
      Poly shift = space->zero_poly();
      if (strategy == TauStrategy::coset) shift = space->decode(rng.below(space->size()));
      return PolySet(space, span_of(*space, basis, shift));
    }
    case TauStrategy::x1_shifted: {
      std::vector<std::size_t> slots;
      for (std::size_t i = 0; i < space->dim(); ++i) {
        if (space->support()[i][0] >= 1) slots.push_back(i);
      }
      const std::uint64_t sub = pow_or_throw(q, slots.size(), "subspace size");
      std::vector<std::uint64_t> members;
      for (auto local : rng.sample(sub, std::min(size, sub))) {
        Poly f = space->zero_poly();
        for (auto slot : slots) {
          f.coeffs[slot] = FieldElem{static_cast<std::uint32_t>(local % q)};
          local /= q;
        }
        members.push_back(space->encode(f));
      }
      return PolySet(space, std::move(members));
    }
  }
  throw ConfigError("unknown tau-scan strategy");
}

nlohmann::ordered_json TauRow::to_json() const {
  nlohmann::ordered_json j;
  j["strategy"] = to_string(strategy);
  j["requested_size"] = requested_size;
  j["size"] = size;
  j["trials"] = trials;
  j["mean_ratio"] = mean_ratio;
  j["max_ratio"] = max_ratio;
  j["min_ratio"] = min_ratio;
  j["upper_bound"] = upper_bound;
  j["property_star"] = property_star;
  j["within_bounds"] = within_bounds;
  j["seed"] = seed;
  return j;
}

std::vector<TauRow> tau_scan(const SpacePtr& space, const std::vector<TauStrategy>& strategies,
                             const std::vector<std::uint64_t>& sizes, std::uint64_t trials,
                             std::uint64_t seed) {
  if (trials == 0) throw ConfigError("tau-scan needs at least one trial");
  const std::uint64_t q = space->q();
  const bool star = space->property_star().holds;
  const BigInt qm1 = big_pow(q, space->m() - 1);
  const BigInt qd1 = big_pow(q, space->dim() - 1);

  std::vector<TauRow> rows;
  std::uint64_t stream = 0;
  for (auto strategy : strategies) {
    for (auto size : sizes) {
      TauRow row;
      row.strategy = strategy;
      row.requested_size = size;
      row.trials = trials;
      row.property_star = star;
      row.seed = derive_seed(seed, stream++);
      row.within_bounds = true;
      row.min_ratio = INFINITY;
      SeededRng rng(row.seed);
      double total = 0.0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        const auto L = sample_family(space, strategy, size, rng);
        row.size = std::max<std::uint64_t>(row.size, L.size());
        if (L.size() == 0) {
          row.min_ratio = std::min(row.min_ratio, 0.0);
          continue;
        }
        const BigInt sum = pp_self_sum_by_profile(L);
        const BigInt main = qm1 * L.size() * L.size();
        const double ratio = sum.convert_to<double>() / main.convert_to<double>();
        total += ratio;
        row.max_ratio = std::max(row.max_ratio, ratio);
        row.min_ratio = std::min(row.min_ratio, ratio);
        if (sum < main) row.within_bounds = false;
        if (star && sum > main + qd1 * L.size()) row.within_bounds = false;
      }
      row.mean_ratio = total / static_cast<double>(trials);
      if (row.size > 0) {
        row.upper_bound = 1.0 + qd1.convert_to<double>() /
                                    (qm1.convert_to<double>() * static_cast<double>(row.size));
      }
      if (std::isinf(row.min_ratio)) row.min_ratio = 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

BoundVerdict AlonBoppanaReport::verdict() const {
  BoundVerdict v;
  v.theorem = "alon-boppana";
  v.lhs = bound;
  v.rhs = lambda;
  v.holds = holds;
  v.params["ratio"] = ratio;
  v.params["variance"] = variance.to_string();
  v.params["variance_matches_closed_form"] = variance_matches_closed_form;
  return v;
}

AlonBoppanaReport alon_boppana_report(const IncidenceGraph& graph) {
  const auto& c = graph.connection();
  const auto& space = graph.space();
  AlonBoppanaReport out;
  out.lambda = graph.spectrum().lambda;
  out.bound = variance_lower_bound(c);
  out.ratio = out.bound > 0.0 ? out.lambda / out.bound : INFINITY;
  const double slack = 1e-9 * std::max(1.0, static_cast<double>(c.group().order()) * c.max_abs());
  out.holds = out.bound <= out.lambda + slack;

  BigInt sum = 0, sum_sq = 0;
  for (auto v : c.int_values()) {
    sum += v;
    sum_sq += BigInt(v) * v;
  }
  const BigInt G = c.group().order();
  const BigInt num = G * sum_sq - sum * sum;
  const BigInt den = G * G;
  const BigInt g = boost::multiprecision::gcd(num, den);
  out.variance = Rational{(num / g).convert_to<std::int64_t>(), (den / g).convert_to<std::int64_t>()};
  const std::uint64_t q = space.q();
  out.variance_matches_closed_form =
      space.property_star().holds && num * q * q == den * (q - 1) * big_pow(q, space.m());
  return out;
}

}  // namespace polyinc
