#include "polyinc/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "polyinc/errors.hpp"

namespace polyinc {

namespace {

using ojson = nlohmann::ordered_json;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("unresolvable field descriptor \"" + what + "\"");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigError("unresolvable field descriptor \"" + what + "\"");
  }
}

FieldPtr field_of_order(std::uint64_t q, const std::string& what) {
  for (std::uint64_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    std::uint32_t s = 0;
    std::uint64_t rest = q;
    while (rest % p == 0) {
      rest /= p;
      ++s;
    }
    if (rest != 1) break;
    return FieldCtx::make(static_cast<std::uint32_t>(p), s);
  }
  throw ConfigError("unresolvable field descriptor \"" + what + "\": not a prime power");
}

std::string monomial_name(const Exponent& e) {
  std::string out;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(j + 1);
    if (e[j] > 1) out += "^" + std::to_string(e[j]);
  }
  return out.empty() ? "1" : out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number_text(double x) {
  return ojson(x).dump();
}

/// Adds the space columns to a verdict's params.
ojson with_space(const PolySpace& space, ojson params) {
  ojson out;
  out["field"] = space.field().name();
  out["support"] = space.support().descriptor();
  out["q"] = space.q();
  out["m"] = space.m();
  out["dim"] = space.dim();
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!out.contains(it.key())) out[it.key()] = it.value();
  }
  return out;
}

std::vector<std::uint64_t> default_tau_sizes(const PolySpace& space) {
  const std::uint64_t q = space.q();
  std::vector<std::uint64_t> sizes{q, space.size() / q};
  if (space.dim() + 1 >= space.m()) {
    if (auto v = checked_pow(q, space.dim() + 1 - space.m()); v && *v <= space.size()) {
      sizes.push_back(*v);
    }
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  sizes.erase(std::remove(sizes.begin(), sizes.end(), 0), sizes.end());
  return sizes;
}

std::vector<TauStrategy> strategies_of(const ExperimentConfig& cfg) {
  std::vector<TauStrategy> out;
  if (cfg.tau_strategies.empty()) {
    return {TauStrategy::uniform, TauStrategy::linear_subspace, TauStrategy::coset,
            TauStrategy::x1_shifted};
  }
  for (const auto& s : cfg.tau_strategies) out.push_back(parse_tau_strategy(s));
  return out;
}

// ---------------------------------------------------------------------------
// Suites. Each returns its verdicts in a fixed order.

struct CellContext {
  const ExperimentConfig& cfg;
  SpacePtr space;
  std::shared_ptr<IncidenceGraph> graph;
  bool star = false;
  std::uint64_t seed = 0;  // per-space stream base
};

std::int64_t spectrum_deviation(const SpectrumVerdict& v) {
  std::map<std::int64_t, std::int64_t> diff;
  for (const auto& [value, mult] : v.expected) diff[value] += static_cast<std::int64_t>(mult);
  std::int64_t non_integer = 0;
  for (const auto& cls : v.actual) {
    const auto n = cls.value.exact ? cls.value.exact->as_integer() : std::nullopt;
    if (n) {
      diff[*n] -= static_cast<std::int64_t>(cls.multiplicity);
    } else {
      non_integer += static_cast<std::int64_t>(cls.multiplicity);
    }
  }
  std::int64_t total = non_integer;
  for (const auto& [value, d] : diff) total += std::abs(d);
  return total;
}

void suite_spectrum(CellContext& ctx, std::vector<BoundVerdict>& out) {
  const auto& space = *ctx.space;
  const auto sv = check_spectrum_formula(*ctx.graph);
  const std::int64_t dev = spectrum_deviation(sv) + (sv.eigencharacters_match ? 0 : 1);
  BoundVerdict v;
  v.params = with_space(space, sv.to_json());
  if (ctx.star) {
    v.theorem = "spectrum";
    v.lhs = dev;
    v.rhs = 0.0;
    v.holds = sv.holds;
  } else {
    // Without (*) at least one deviation from the closed form must show up.
    v.theorem = "spectrum-negative-control";
    v.lhs = std::int64_t{1};
    v.rhs = static_cast<double>(dev);
    v.holds = !sv.holds;
  }
  v.main_term = static_cast<double>(ctx.graph->connection().int_total());
  out.push_back(std::move(v));

  if (ctx.star) {
    const auto& c = ctx.graph->connection();
    const auto expected = checked_pow(space.q(), space.dim() + space.m() - 1);
    BoundVerdict row;
    row.theorem = "row-sum";
    row.lhs = expected ? std::abs(c.int_total() - static_cast<std::int64_t>(*expected))
                       : std::int64_t{-1};
    row.rhs = 0.0;
    row.main_term = expected ? static_cast<double>(*expected) : 0.0;
    row.holds = expected && c.int_total() == static_cast<std::int64_t>(*expected);
    row.params = with_space(space, ojson::object());
    row.params["sum"] = c.int_total();
    out.push_back(std::move(row));
  }

  if (space.size() <= 81) {
    std::int64_t failures = 0;
    for (GroupElem g = 0; g < space.size(); ++g) {
      if (!oracle_eigencheck(ctx.graph->connection(), g)) ++failures;
    }
    BoundVerdict e;
    e.theorem = "eigenvector-check";
    e.lhs = failures;
    e.rhs = 0.0;
    e.holds = failures == 0;
    e.params = with_space(space, ojson::object());
    e.params["characters"] = space.size();
    out.push_back(std::move(e));
  }
}

void suite_key_lemma(CellContext& ctx, std::vector<BoundVerdict>& out) {
  const auto kl = verify_key_lemma(*ctx.space);
  const std::int64_t failed_parts =
      !kl.vanishing_sizes + !kl.annihilators + !kl.trivial_intersections;
  BoundVerdict v;
  v.params = with_space(*ctx.space, kl.to_json());
  if (ctx.star) {
    v.theorem = "key-lemma";
    v.lhs = failed_parts;
    v.rhs = 0.0;
    v.holds = kl.holds;
  } else {
    v.theorem = "key-lemma-negative-control";
    v.lhs = std::int64_t{1};
    v.rhs = static_cast<double>(failed_parts);
    v.holds = !kl.holds;
  }
  out.push_back(std::move(v));
}

void suite_mixing(CellContext& ctx, std::vector<BoundVerdict>& out) {
  const auto& c = ctx.graph->connection();
  const auto& spec = ctx.graph->spectrum();
  const std::uint64_t n = ctx.space->size();
  for (std::uint64_t t = 0; t < ctx.cfg.trials.mixing; ++t) {
    const std::uint64_t seed = derive_seed(ctx.seed, 1000000 + t);
    SeededRng rng(seed);
    const auto S = rng.sample(n, rng.between(1, n));
    const auto T = rng.sample(n, rng.between(1, n));
    auto v = verify_mixing(c, spec, S, T);
    v.params = with_space(*ctx.space, v.params);
    v.params["trial"] = t;
    v.seed = seed;
    out.push_back(std::move(v));
  }
}

void suite_bounds(CellContext& ctx, std::vector<BoundVerdict>& out) {
  const auto& space = *ctx.space;
  const std::uint64_t n = space.size();
  const std::uint64_t universe = space.num_points() * space.q();
  const bool full = space.support() == MonomialSupport::full(space.m(), space.max_total_degree());

  auto emit = [&](BoundVerdict v, std::uint64_t seed, const char* kase) {
    v.params = with_space(space, v.params);
    v.params["case"] = kase;
    v.seed = seed;
    out.push_back(std::move(v));
  };

  // Equality cases.
  const auto V = PolySet::all(ctx.space);
  if (ctx.star) emit(verify_cross_version(*ctx.graph, V, V), 0, "equality");
  {
    const auto P = PointSet::all(ctx.space);
    const auto pb = verify_point_poly_bound(P, V);
    if (ctx.star) emit(pb.subspace, 0, "equality");
    emit(pb.full_space, 0, "equality");
    if (full) emit(cauchy_schwarz_bound(P, V).verdict(), 0, "equality");
  }

  for (std::uint64_t t = 0; t < ctx.cfg.trials.bounds; ++t) {
    const std::uint64_t seed = derive_seed(ctx.seed, 2000000 + t);
    SeededRng rng(seed);
    const PolySet L(ctx.space, rng.sample(n, rng.between(1, n)));
    const PolySet Lp(ctx.space, rng.sample(n, rng.between(1, n)));

    const auto pair = pp_incidence_sum(*ctx.graph, L, Lp);
    BoundVerdict eq;
    eq.theorem = "crucial-equality";
    eq.lhs = std::abs(pair.direct - pair.via_graph);
    eq.rhs = 0.0;
    eq.holds = pair.agree();
    eq.params["direct"] = pair.direct;
    eq.params["via_graph"] = pair.via_graph;
    emit(std::move(eq), seed, "random");

    const auto prof = incidence_profile(L);
    const auto self = pp_incidence_sum_direct(L, L);
    BoundVerdict sm;
    sm.theorem = "second-moment";
    sm.lhs = std::abs(prof.second_moment - self);
    sm.rhs = 0.0;
    sm.holds = prof.second_moment == self &&
               prof.first_moment == static_cast<std::int64_t>(space.num_points() * L.size());
    sm.params["second_moment"] = prof.second_moment;
    sm.params["pair_sum"] = self;
    emit(std::move(sm), seed, "random");

    if (ctx.star) emit(verify_cross_version(*ctx.graph, L, Lp), seed, "random");
    auto sb = verify_subspace_bounds(L);
    if (ctx.star) {
      emit(std::move(sb.lower), seed, "random");
      emit(std::move(sb.upper), seed, "random");
    }
    emit(std::move(sb.full_space_upper), seed, "random");
  }

  for (std::uint64_t t = 0; t < ctx.cfg.trials.points; ++t) {
    const std::uint64_t seed = derive_seed(ctx.seed, 3000000 + t);
    SeededRng rng(seed);
    const PointSet P(ctx.space, rng.sample(universe, rng.between(1, universe)));
    const PolySet L(ctx.space, rng.sample(n, rng.between(1, n)));
    const auto pb = verify_point_poly_bound(P, L);
    if (ctx.star) emit(pb.subspace, seed, "random");
    emit(pb.full_space, seed, "random");
    if (full) emit(cauchy_schwarz_bound(P, L).verdict(), seed, "random");
  }
}

void suite_tau(CellContext& ctx, std::vector<BoundVerdict>& out) {
  auto sizes = ctx.cfg.tau_sizes.empty() ? default_tau_sizes(*ctx.space) : ctx.cfg.tau_sizes;
  const auto rows = tau_scan(ctx.space, strategies_of(ctx.cfg), sizes, ctx.cfg.trials.tau,
                             derive_seed(ctx.seed, 4000000));
  for (const auto& row : rows) {
    BoundVerdict v;
    v.theorem = "tau-scan";
    v.lhs = row.max_ratio;
    v.rhs = row.upper_bound;
    v.main_term = 1.0;
    v.holds = row.within_bounds;
    v.params = with_space(*ctx.space, row.to_json());
    v.seed = row.seed;
    out.push_back(std::move(v));
  }
}

void suite_alon_boppana(CellContext& ctx, std::vector<BoundVerdict>& out) {
  const auto ab = alon_boppana_report(*ctx.graph);
  auto v = ab.verdict();
  v.holds = ab.holds && (!ctx.star || ab.variance_matches_closed_form);
  v.params = with_space(*ctx.space, v.params);
  v.params["property_star"] = ctx.star;
  out.push_back(std::move(v));
}

std::vector<Record> run_space_cell(const ExperimentConfig& cfg, std::size_t index) {
  const auto& spec = cfg.spaces[index];
  CellContext ctx{cfg, spec.resolve(cfg.budget), nullptr};
  ctx.star = ctx.space->property_star().holds;
  ctx.seed = derive_seed(cfg.seed.value_or(0), index);
  ctx.graph = std::make_shared<IncidenceGraph>(ctx.space);

  std::vector<Record> records;
  for (const auto& suite : cfg.suites) {
    std::vector<BoundVerdict> verdicts;
    if (suite == "spectrum") suite_spectrum(ctx, verdicts);
    else if (suite == "key-lemma") suite_key_lemma(ctx, verdicts);
    else if (suite == "mixing") suite_mixing(ctx, verdicts);
    else if (suite == "bounds") suite_bounds(ctx, verdicts);
    else if (suite == "tau-scan") suite_tau(ctx, verdicts);
    else if (suite == "alon-boppana") suite_alon_boppana(ctx, verdicts);
    else continue;  // counterexample runs on its own cells
    for (auto& v : verdicts) {
      if (v.seed == 0) v.seed = cfg.seed.value_or(0);
      records.push_back(Record{ctx.space->field().name(), ctx.space->support().descriptor(),
                               suite, std::move(v)});
    }
  }
  return records;
}

std::vector<Record> run_counterexample_cell(const ExperimentConfig& cfg, std::size_t index) {
  const auto [q, m, r] = cfg.counterexamples[index];
  const auto field = field_of_order(q, std::to_string(q));
  const auto rep = example_counterexample(field, m, r, cfg.budget);
  auto v = rep.verdict();
  v.seed = cfg.seed.value_or(0);
  const std::string support = "x1-shifted:" + std::to_string(m) + "," + std::to_string(r);
  return {Record{field->name(), support, "counterexample", std::move(v)}};
}

}  // namespace

// ---------------------------------------------------------------------------

FieldPtr parse_field(const nlohmann::json& j) {
  if (j.is_object()) return FieldCtx::from_json(j);
  if (j.is_number_integer()) {
    const auto q = j.get<std::int64_t>();
    if (q < 2) throw ConfigError("unresolvable field descriptor \"" + j.dump() + "\"");
    return field_of_order(static_cast<std::uint64_t>(q), j.dump());
  }
  if (!j.is_string()) throw ConfigError("unresolvable field descriptor " + j.dump());
  const std::string text = trim(j.get<std::string>());
  std::string body = text;
  if (body.rfind("GF(", 0) == 0 && body.size() > 4 && body.back() == ')') {
    body = body.substr(3, body.size() - 4);
  }
  const auto caret = body.find('^');
  if (caret == std::string::npos) {
    const auto q = parse_uint(body, text);
    if (q < 2) throw ConfigError("unresolvable field descriptor \"" + text + "\"");
    return field_of_order(q, text);
  }
  const auto p = parse_uint(body.substr(0, caret), text);
  const auto s = parse_uint(body.substr(caret + 1), text);
  nlohmann::json desc{{"p", p}, {"s", s}};
  return FieldCtx::from_json(desc);
}

SpacePtr SpaceSpec::resolve(const Budget& budget) const {
  auto space = std::make_shared<const PolySpace>(parse_field(field), MonomialSupport::parse(support),
                                                 budget);
  space->num_points();  // point budget
  return space;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "jsonl") return OutputFormat::jsonl;
  if (name == "csv") return OutputFormat::csv;
  throw ConfigError("unknown output format \"" + name + "\" (expected jsonl or csv)");
}

ExperimentConfig ExperimentConfig::default_config() {
  ExperimentConfig cfg;
  for (const char* f : {"GF(2)", "GF(3)"}) {
    for (const char* s : {"full:1,2", "full:2,1"}) cfg.spaces.push_back({f, s});
  }
  cfg.suites = known_suites();
  cfg.seed = 42;
  cfg.counterexamples = {{2, 1, 1}, {2, 2, 2}, {3, 1, 2}, {3, 2, 2}, {5, 2, 2}};
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> keys = {"spaces", "suites", "trials", "seed",
                                                "budgets", "output", "counterexamples",
                                                "tau_scan", "workers"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigError("unknown config key \"" + it.key() + "\"");
    }
  }
  ExperimentConfig cfg = default_config();
  try {
    if (j.contains("spaces")) {
      cfg.spaces.clear();
      for (const auto& s : j.at("spaces")) {
        if (!s.is_object() || !s.contains("field") || !s.contains("support")) {
          throw ConfigError("each space needs \"field\" and \"support\"");
        }
        cfg.spaces.push_back({s.at("field"), s.at("support")});
      }
    }
    if (j.contains("suites")) cfg.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("trials")) {
      const auto& t = j.at("trials");
      if (t.is_number_unsigned()) {
        const auto n = t.get<std::uint64_t>();
        cfg.trials = TrialCounts{n, n, n, std::max<std::uint64_t>(1, n)};
      } else {
        cfg.trials.mixing = t.value("mixing", cfg.trials.mixing);
        cfg.trials.bounds = t.value("bounds", cfg.trials.bounds);
        cfg.trials.points = t.value("points", cfg.trials.points);
        cfg.trials.tau = t.value("tau", cfg.trials.tau);
      }
    }
    cfg.seed.reset();
    if (j.contains("seed") && !j.at("seed").is_null()) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("budgets")) {
      const auto& b = j.at("budgets");
      cfg.budget.max_elements = b.value("max_elements", cfg.budget.max_elements);
      cfg.budget.max_points = b.value("max_points", cfg.budget.max_points);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.is_string()) {
        cfg.output = o.get<std::string>();
      } else {
        cfg.output = o.value("path", cfg.output);
        cfg.format = parse_format(o.value("format", std::string("jsonl")));
        cfg.summary = o.value("summary", std::string{});
      }
    }
    if (j.contains("counterexamples")) {
      cfg.counterexamples = j.at("counterexamples").get<std::vector<std::array<std::uint32_t, 3>>>();
    }
    if (j.contains("tau_scan")) {
      const auto& t = j.at("tau_scan");
      cfg.tau_strategies = t.value("strategies", std::vector<std::string>{});
      cfg.tau_sizes = t.value("sizes", std::vector<std::uint64_t>{});
    }
    if (j.contains("workers")) cfg.workers = j.at("workers").get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  ojson j;
  auto& sp = j["spaces"] = ojson::array();
  for (const auto& s : spaces) sp.push_back({{"field", s.field}, {"support", s.support}});
  j["suites"] = suites;
  j["trials"] = {{"mixing", trials.mixing}, {"bounds", trials.bounds},
                 {"points", trials.points}, {"tau", trials.tau}};
  j["seed"] = seed ? ojson(*seed) : ojson(nullptr);
  j["budgets"] = {{"max_elements", budget.max_elements}, {"max_points", budget.max_points}};
  j["output"] = {{"path", output}, {"format", format == OutputFormat::jsonl ? "jsonl" : "csv"},
                 {"summary", summary}};
  j["counterexamples"] = counterexamples;
  j["tau_scan"] = {{"strategies", tau_strategies}, {"sizes", tau_sizes}};
  j["workers"] = workers;
  return j;
}

bool ExperimentConfig::samples_randomly() const {
  for (const auto& s : suites) {
    if (s == "mixing" || s == "bounds" || s == "tau-scan") return true;
  }
  return false;
}

void ExperimentConfig::validate() const {
  if (suites.empty()) throw ConfigError("no suites requested");
  for (const auto& s : suites) {
    if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end()) {
      throw ConfigError("unknown suite \"" + s + "\"");
    }
  }
  if (samples_randomly() && !seed) throw ConfigError("a seed is required for randomized suites");
  for (const auto& s : tau_strategies) parse_tau_strategy(s);
  for (const auto& s : spaces) s.resolve(budget);
  if (std::find(suites.begin(), suites.end(), "counterexample") != suites.end()) {
    for (const auto& [q, m, r] : counterexamples) {
      if (m < 1 || r < 1) throw ConfigError("counterexample needs m >= 1 and r >= 1");
      PolySpace(field_of_order(q, std::to_string(q)), MonomialSupport::x1_shifted(m, r), budget)
          .num_points();
    }
  }
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json Record::to_json() const {
  ojson params;
  params["suite"] = suite;
  params["field"] = field;
  params["support"] = support;
  const auto base = verdict.to_json();
  for (auto it = base["params"].begin(); it != base["params"].end(); ++it) {
    if (!params.contains(it.key())) params[it.key()] = it.value();
  }
  ojson out;
  out["theorem"] = base["theorem"];
  out["params"] = std::move(params);
  out["lhs"] = base["lhs"];
  out["rhs"] = base["rhs"];
  out["holds"] = base["holds"];
  out["seed"] = base["seed"];
  return out;
}

bool RunResult::all_hold() const {
  return std::all_of(records.begin(), records.end(),
                     [](const Record& r) { return r.verdict.holds; });
}

RunResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  const bool counter =
      std::find(config.suites.begin(), config.suites.end(), "counterexample") != config.suites.end();
  const bool space_suites = std::any_of(config.suites.begin(), config.suites.end(),
                                        [](const std::string& s) { return s != "counterexample"; });
  const std::size_t n_spaces = space_suites ? config.spaces.size() : 0;
  const std::size_t n_cells = n_spaces + (counter ? config.counterexamples.size() : 0);

  std::vector<std::vector<Record>> results(n_cells);
  std::vector<std::exception_ptr> errors(n_cells);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_cells) return;
      std::string label;
      try {
        if (i < n_spaces) {
          results[i] = run_space_cell(config, i);
        } else {
          results[i] = run_counterexample_cell(config, i - n_spaces);
        }
        if (!results[i].empty()) label = results[i].front().field + " " + results[i].front().support;
      } catch (...) {
        errors[i] = std::current_exception();
        label = "failed";
      }
      const std::size_t k = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress("[" + std::to_string(k) + "/" + std::to_string(n_cells) + "] " + label);
      }
    }
  };

  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, n_cells))));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunResult out;
  for (std::size_t i = 0; i < n_cells; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    for (auto& r : results[i]) out.records.push_back(std::move(r));
  }
  return out;
}

void write_jsonl(std::ostream& os, const std::vector<Record>& records) {
  for (const auto& r : records) os << r.to_json().dump() << '\n';
}

void write_csv(std::ostream& os, const std::vector<Record>& records) {
  struct Row {
    const Record* worst = nullptr;
    double score = -INFINITY;
    bool holds = true;
  };
  std::vector<std::string> order;
  std::map<std::string, Row> rows;
  for (const auto& r : records) {
    const std::string key = r.field + '\x1f' + r.support + '\x1f' + r.suite + '\x1f' + r.verdict.theorem;
    auto [it, fresh] = rows.try_emplace(key);
    if (fresh) order.push_back(key);
    const double lhs = to_double(r.verdict.lhs);
    double score = lhs - r.verdict.rhs;
    if (r.verdict.rhs > 0.0) score = lhs / r.verdict.rhs;
    if (!r.verdict.holds) score = INFINITY;
    if (it->second.worst == nullptr || score > it->second.score) {
      it->second.worst = &r;
      it->second.score = score;
    }
    it->second.holds = it->second.holds && r.verdict.holds;
  }
  os << "field,support,suite,theorem,lhs,rhs,holds,seed\n";
  for (const auto& key : order) {
    const auto& row = rows.at(key);
    const auto& r = *row.worst;
    os << csv_field(r.field) << ',' << csv_field(r.support) << ',' << csv_field(r.suite) << ','
       << csv_field(r.verdict.theorem) << ',' << csv_field(value_to_string(r.verdict.lhs)) << ','
       << number_text(r.verdict.rhs) << ',' << (row.holds ? "true" : "false") << ','
       << r.verdict.seed << '\n';
  }
}

void write_report(const ExperimentConfig& config, const RunResult& result) {
  auto emit = [&](std::ostream& os) {
    if (config.format == OutputFormat::jsonl) {
      write_jsonl(os, result.records);
    } else {
      write_csv(os, result.records);
    }
  };
  if (config.output == "-" || config.output.empty()) {
    emit(std::cout);
    std::cout.flush();
  } else {
    std::ofstream f(config.output, std::ios::binary);
    if (!f) throw ConfigError("cannot write report to " + config.output);
    emit(f);
  }
  if (!config.summary.empty()) {
    std::ofstream f(config.summary, std::ios::binary);
    if (!f) throw ConfigError("cannot write summary to " + config.summary);
    write_csv(f, result.records);
  }
}

std::string describe_space(const PolySpace& space) {
  std::ostringstream os;
  const auto& F = space.field();
  os << "space        " << space.describe_name() << '\n';
  os << "q            " << F.q() << '\n';
  os << "p            " << F.p() << '\n';
  os << "s            " << F.s() << '\n';
  os << "m            " << space.m() << '\n';
  os << "support      {";
  for (std::size_t i = 0; i < space.dim(); ++i) {
    os << (i ? ", " : "") << monomial_name(space.support()[i]);
  }
  os << "}\n";
  os << "exponents    " << space.support().to_json()["exponents"].dump() << '\n';
  os << "dim V        " << space.dim() << '\n';
  os << "|V|          " << space.size() << '\n';
  const auto star = space.property_star();
  if (star.holds) {
    os << "property (*) true (k = " << nlohmann::json(star.k).dump() << ")\n";
    const auto top = checked_pow(space.q(), space.dim() + space.m() - 1);
    const auto mid = checked_pow(space.q(), space.dim() - 1);
    const auto mult = (space.q() - 1) * *checked_pow(space.q(), space.m());
    os << "spectrum     {" << *top << " x1, " << *mid << " x" << mult << ", 0 x"
       << space.size() - mult - 1 << "}\n";
  } else {
    os << "property (*) false (" << star.reason << ")\n";
  }
  return os.str();
}

}  // namespace polyinc
