// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "polyinc/cayley.hpp"
#include "polyinc/errors.hpp"
#include "polyinc/incidence.hpp"
#include "polyinc/lab.hpp"
#include "polyinc/random.hpp"

namespace {

using namespace polyinc;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct GridSpace {
  std::string label;
  SpacePtr space;
};

std::vector<GridSpace> make_grid() {
  struct Entry { std::uint32_t p, s, m, r; };
  const std::vector<Entry> entries = {
      {2, 1, 1, 2}, {2, 1, 2, 1}, {2, 1, 1, 3}, {2, 1, 2, 2},
      {3, 1, 1, 2}, {3, 1, 2, 1}, {3, 1, 1, 3},
      {2, 2, 1, 1}, {2, 2, 1, 2},
      {5, 1, 1, 1}, {5, 1, 1, 2}};
  std::vector<GridSpace> out;
  for (const auto& e : entries) {
    auto V = std::make_shared<const PolySpace>(make_full_space(FieldCtx::make(e.p, e.s), e.m, e.r));
    out.push_back({V->describe_name(), V});
  }
  return out;
}

const std::vector<GridSpace>& grid() {
  static const auto g = make_grid();
  return g;
}

/// Collects failures for one criterion; `detail` is printed after the verdict.
struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "first failure: " << what;
      ok = false;
    }
  }
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail << " exception: " << e.what();
  }
  const double secs = seconds_since(t0);
  std::cout << "AC" << number << ' ' << (c.ok ? "PASS" : "FAIL") << "  " << title << "  ["
            << secs << " s] " << c.detail.str() << std::endl;
  failures += !c.ok;
}

std::uint64_t seed_for(int criterion, std::size_t space, std::uint64_t trial) {
  return derive_seed(42, (static_cast<std::uint64_t>(criterion) << 40) ^ (space << 20) ^ trial);
}

void ac1() {
  criterion(1, "spectrum multiset equals the closed form exactly", [](Check& c) {
    for (const auto& g : grid()) {
      const auto t0 = Clock::now();
      const IncidenceGraph graph(g.space);
      const auto v = verify_spectrum_theorem(graph);
      const double secs = seconds_since(t0);
      c.expect(v.multiset_matches && v.eigencharacters_match, g.label + ": " + v.diagnostic);
      c.expect(secs <= 10.0, g.label + " took " + std::to_string(secs) + " s");
    }
    c.detail << grid().size() << " spaces";
  });
}

void ac2() {
  criterion(2, "eigenvector check for every character", [](Check& c) {
    const auto t0 = Clock::now();
    std::uint64_t checked = 0;
    for (const auto& [p, r] : {std::pair{2u, 2u}, std::pair{3u, 2u}}) {
      const auto V = make_full_space(FieldCtx::make(p, 1), 1, r);
      const auto conn = incidence_connection(V);
      for (GroupElem g = 0; g < V.size(); ++g) {
        c.expect(oracle_eigencheck(conn, g), V.describe_name() + " character " + std::to_string(g));
        ++checked;
      }
    }
    const double secs = seconds_since(t0);
    c.expect(secs <= 5.0, "took " + std::to_string(secs) + " s");
    c.detail << checked << " characters";
  });
}

void ac3() {
  criterion(3, "key lemma parts 1-3, with negative control", [](Check& c) {
    for (const auto& g : grid()) {
      const auto k = verify_key_lemma(*g.space);
      c.expect(k.vanishing_sizes && k.annihilators && k.trivial_intersections, g.label + ": " + k.diagnostic);
    }
    const PolySpace shifted(FieldCtx::make(3, 1), MonomialSupport::x1_shifted(2, 2));
    const auto k = verify_key_lemma(shifted);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t a = 0; a < shifted.num_points(); ++a) {
      if (shifted.decode_point(a, 2)[0] == FieldElem{0}) expected.push_back(a);
    }
    c.expect(!k.vanishing_sizes, "negative control passed part 1");
    c.expect(k.failing_alphas == expected, "negative control fails at a different alpha set");
    c.detail << "negative control fails part 1 at " << k.failing_alphas.size() << " points";
  });
}

void ac4() {
  criterion(4, "expander mixing inequality", [](Check& c) {
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < grid().size(); ++i) {
      const IncidenceGraph graph(grid()[i].space);
      const auto n = graph.space().size();
      for (std::uint64_t t = 0; t < 200; ++t) {
        SeededRng rng(seed_for(4, i, t));
        const auto S = rng.sample(n, rng.between(0, n));
        const auto T = rng.sample(n, rng.between(0, n));
        c.expect(verify_mixing(graph.connection(), graph.spectrum(), S, T).holds,
                 grid()[i].label + " trial " + std::to_string(t));
        ++pairs;
      }
    }
    // Z_4 x Z_6 with a random hermitian complex connection function.
    const auto group = GroupDesc::product({4, 6});
    SeededRng rng(seed_for(4, 99, 0));
    std::vector<std::complex<double>> table(group.order());
    for (GroupElem g = 0; g < group.order(); ++g) {
      const GroupElem ng = group.neg(g);
      if (ng < g) continue;
      const std::complex<double> z{rng.unit() * 2 - 1, rng.unit() * 2 - 1};
      table[g] = ng == g ? std::complex<double>(z.real(), 0.0) : z;
      table[ng] = std::conj(table[g]);
    }
    const ConnectionFunction conn(group, table);
    c.expect(conn.hermitian(), "product-group table is not hermitian");
    const auto spec = spectrum(conn);
    for (int t = 0; t < 50; ++t) {
      const auto S = rng.sample(24, rng.between(0, 24));
      const auto T = rng.sample(24, rng.between(0, 24));
      const auto mb = mixing_bound(conn, spec.lambda, S.size(), T.size());
      const double dev = std::abs(edge_weight(conn, S, T) - mb.main_term);
      c.expect(dev <= mb.error_term + 1e-6, "product group trial " + std::to_string(t));
      ++pairs;
    }
    c.detail << pairs << " pairs";
  });
}

void ac5() {
  criterion(5, "cross-version and subspace bounds", [](Check& c) {
    std::uint64_t checks = 0;
    for (std::size_t i = 0; i < grid().size(); ++i) {
      const IncidenceGraph graph(grid()[i].space);
      const auto& V = grid()[i].space;
      const auto all = PolySet::all(V);
      const auto eq = verify_cross_version(graph, all, all);
      c.expect(eq.holds && to_double(eq.lhs) == 0.0, grid()[i].label + " equality case");
      for (std::uint64_t t = 0; t < 200; ++t) {
        SeededRng rng(seed_for(5, i, t));
        const PolySet L(V, rng.sample(V->size(), rng.between(1, V->size())));
        const PolySet Lp(V, rng.sample(V->size(), rng.between(1, V->size())));
        const auto cross = verify_cross_version(graph, L, Lp);
        const auto sub = verify_subspace_bounds(L);
        c.expect(cross.holds && sub.lower.holds && sub.upper.holds && sub.full_space_upper.holds,
                 grid()[i].label + " trial " + std::to_string(t));
        ++checks;
      }
    }
    c.detail << checks << " random pairs";
  });
}

void ac6() {
  criterion(6, "point-polynomial bound", [](Check& c) {
    std::uint64_t checks = 0;
    for (std::size_t i = 0; i < grid().size(); ++i) {
      const auto& V = grid()[i].space;
      const auto full = verify_point_poly_bound(PointSet::all(V), PolySet::all(V));
      c.expect(full.subspace.holds && to_double(full.subspace.lhs) == 0.0,
               grid()[i].label + " full-grid case");
      const auto universe = PointSet::all(V).universe();
      for (std::uint64_t t = 0; t < 100; ++t) {
        SeededRng rng(seed_for(6, i, t));
        const PointSet P(V, rng.sample(universe, rng.between(0, universe)));
        const PolySet L(V, rng.sample(V->size(), rng.between(0, V->size())));
        const auto b = verify_point_poly_bound(P, L);
        c.expect(b.subspace.holds && b.full_space.holds, grid()[i].label + " trial " + std::to_string(t));
        ++checks;
      }
    }
    c.detail << checks << " random instances";
  });
}

void ac7() {
  criterion(7, "counterexample identity q I = (2q-1) q^(m-1) |L0|", [](Check& c) {
    const std::vector<std::array<std::uint32_t, 3>> cases = {
        {2, 1, 1}, {2, 2, 2}, {3, 1, 2}, {3, 2, 2}, {5, 2, 2}};
    for (const auto& [q, m, r] : cases) {
      const auto rep = example_counterexample(parse_field(nlohmann::json(q)), m, r);
      c.expect(rep.identity_holds, "(" + std::to_string(q) + "," + std::to_string(m) + "," +
                                       std::to_string(r) + ")");
      if (q == 5) {
        c.expect(rep.ratio_to_main_term == Rational::make(9, 5), "ratio for q = 5 is not 9/5");
        c.detail << "q=5: I=" << rep.incidences << " ratio " << rep.ratio_to_main_term.to_string()
                 << ", naive bound " << rep.naive_bound << " exceeded by "
                 << rep.ratio_to_naive_bound << "x";
      }
    }
  });
}

void ac8() {
  criterion(8, "Cauchy-Schwarz bound and the spectral comparison", [](Check& c) {
    std::uint64_t checks = 0;
    for (std::size_t i = 0; i < grid().size(); ++i) {
      const auto& V = grid()[i].space;
      const auto universe = PointSet::all(V).universe();
      for (std::uint64_t t = 0; t < 100; ++t) {
        SeededRng rng(seed_for(8, i, t));
        const PointSet P(V, rng.sample(universe, rng.between(0, universe)));
        const PolySet L(V, rng.sample(V->size(), rng.between(0, V->size())));
        c.expect(cauchy_schwarz_bound(P, L).holds, grid()[i].label + " trial " + std::to_string(t));
        ++checks;
      }
    }
    const auto V = std::make_shared<const PolySpace>(make_full_space(FieldCtx::make(3, 1), 1, 2));
    const auto rep = cauchy_schwarz_bound(PointSet::all(V), PolySet::all(V));
    c.expect(rep.holds, "GF(3) V_{1,2} full instance");
    c.expect(rep.spectral_rhs < rep.bound, "spectral rhs is not below the CS bound");
    c.detail << checks << " instances; GF(3) full:1,2: I=" << rep.incidences
             << " spectral rhs " << rep.spectral_rhs << " < CS bound " << rep.bound
             << " (|P||L|/q + rhs = " << rep.spectral_upper << ")";
  });
}

void ac9() {
  criterion(9, "Alon-Boppana variance bound", [](Check& c) {
    for (const auto& g : grid()) {
      const auto ab = alon_boppana_report(IncidenceGraph(g.space));
      c.expect(ab.holds, g.label + " lambda below bound");
      c.expect(ab.variance_matches_closed_form, g.label + " variance " + ab.variance.to_string());
      c.detail << g.label << " ratio " << ab.ratio << "; ";
    }
  });
}

void ac10() {
  criterion(10, "oracle equivalence", [](Check& c) {
    for (std::size_t i = 0; i < grid().size(); ++i) {
      const IncidenceGraph graph(grid()[i].space);
      const auto& V = grid()[i].space;
      for (std::uint64_t t = 0; t < 100; ++t) {
        SeededRng rng(seed_for(10, i, t));
        const PolySet L(V, rng.sample(V->size(), rng.between(0, V->size())));
        const PolySet Lp(V, rng.sample(V->size(), rng.between(0, V->size())));
        c.expect(pp_incidence_sum(graph, L, Lp).agree(), grid()[i].label + " trial " + std::to_string(t));
      }
    }
    for (std::uint32_t n = 1; n <= 6; ++n) {
      const auto group = GroupDesc::vector(3, n);
      SeededRng rng(seed_for(10, 100 + n, 0));
      std::vector<std::int64_t> table(group.order());
      for (auto& v : table) v = static_cast<std::int64_t>(rng.below(21)) - 10;
      const ConnectionFunction conn(group, table);
      const auto naive = fourier_transform_naive(conn);
      const auto fast = fourier_transform_fast(conn);
      bool same = naive.size() == fast.size();
      for (std::size_t k = 0; same && k < fast.size(); ++k) same = *naive[k].exact == fast[k];
      c.expect(same, "naive and fast transforms differ on 3^" + std::to_string(n));
    }
    c.detail << "pair sums on " << grid().size() << " spaces, transforms up to 3^6";
  });
}

void ac11() {
  criterion(11, "default config is deterministic and fast", [](Check& c) {
    const auto t0 = Clock::now();
    auto cfg = ExperimentConfig::default_config();
    cfg.seed = 42;
    std::ostringstream a, b;
    const auto first = run_experiment(cfg);
    write_jsonl(a, first.records);
    const double secs = seconds_since(t0);
    write_jsonl(b, run_experiment(cfg).records);
    c.expect(a.str() == b.str(), "reports differ between runs");
    c.expect(first.all_hold(), "default config has a violated verdict");
    c.expect(secs < 300.0, "default run took " + std::to_string(secs) + " s");
    c.detail << first.records.size() << " verdicts, " << a.str().size() << " bytes, one run "
             << secs << " s";
  });
}

}  // namespace

int main() {
  ac1();
  ac2();
  ac3();
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  ac9();
  ac10();
  ac11();
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria pass") << std::endl;
  return failures ? 1 : 0;
}
