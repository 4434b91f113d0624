#include "polyinc/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "polyinc/errors.hpp"

namespace polyinc {

namespace {

std::complex<double> unit_root(std::uint64_t k, std::uint64_t n) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::uint64_t checked_product(const std::vector<std::uint64_t>& radices) {
  std::uint64_t order = 1;
  for (auto r : radices) {
    if (r == 0) throw ConfigError("group component order must be positive");
    if (__builtin_mul_overflow(order, r, &order)) throw SizeLimitError("group order overflows 64 bits");
  }
  return order;
}

// Roots of unity exp(2 pi i k / n) for k in [0, n).
std::vector<std::complex<double>> root_table(std::uint64_t n) {
  std::vector<std::complex<double>> out(n);
  for (std::uint64_t k = 0; k < n; ++k) out[k] = unit_root(k, n);
  return out;
}

// All element coordinates, row-major.
std::vector<std::uint32_t> coordinate_table(const GroupDesc& g) {
  const std::size_t len = g.num_coordinates();
  std::vector<std::uint32_t> out(g.order() * len);
  for (GroupElem h = 0; h < g.order(); ++h) {
    g.coordinates(h, std::span<std::uint32_t>(out.data() + h * len, len));
  }
  return out;
}

}  // namespace

GroupDesc GroupDesc::vector(std::uint32_t p, std::uint32_t n) {
  if (!is_prime(p)) throw ConfigError("vector group exponent must be prime");
  GroupDesc g;
  g.kind_ = Kind::vector;
  g.p_ = p;
  g.radices_.assign(n, p);
  g.order_ = checked_product(g.radices_);
  g.lcm_ = p;
  return g;
}

GroupDesc GroupDesc::vector_over_field(FieldPtr field, std::uint32_t dim) {
  if (!field) throw ConfigError("field-backed group needs a field");
  GroupDesc g;
  g.kind_ = Kind::vector;
  g.p_ = field->p();
  g.s_ = field->s();
  g.radices_.assign(dim, field->q());
  g.order_ = checked_product(g.radices_);
  g.lcm_ = g.p_;
  if (field->q() <= 256) {
    const std::uint32_t q = field->q();
    auto table = std::make_shared<std::vector<std::uint32_t>>(std::size_t{q} * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        (*table)[std::size_t{a} * q + b] = field->trace(field->mul(FieldElem{a}, FieldElem{b}));
      }
    }
    g.trace_product_ = std::move(table);
  }
  g.field_ = std::move(field);
  return g;
}

GroupDesc GroupDesc::product(std::vector<std::uint64_t> orders) {
  if (orders.empty()) throw ConfigError("product group needs at least one component");
  GroupDesc g;
  g.kind_ = Kind::product;
  g.radices_ = std::move(orders);
  g.order_ = checked_product(g.radices_);
  g.lcm_ = 1;
  for (auto r : g.radices_) {
    g.lcm_ = std::lcm(g.lcm_, r);
  }
  return g;
}

GroupDesc GroupDesc::from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "vector") {
      return vector(j.at("p").get<std::uint32_t>(), j.at("n").get<std::uint32_t>());
    }
    if (kind == "product") return product(j.at("orders").get<std::vector<std::uint64_t>>());
    throw ConfigError("unknown group kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed group descriptor: ") + e.what());
  }
}

nlohmann::json GroupDesc::to_json() const {
  if (kind_ == Kind::product) return {{"kind", "product"}, {"orders", radices_}};
  nlohmann::json j{{"kind", "vector"}, {"p", p_}, {"n", n()}};
  if (field_) j["field"] = field_->to_json();
  return j;
}

GroupElem GroupDesc::add(GroupElem a, GroupElem b) const {
  if (kind_ == Kind::vector) {
    if (p_ == 2) return a ^ b;
    GroupElem out = 0, place = 1;
    for (std::uint32_t i = 0; i < n(); ++i) {
      out += ((a % p_ + b % p_) % p_) * place;
      a /= p_;
      b /= p_;
      place *= p_;
    }
    return out;
  }
  GroupElem out = 0, place = 1;
  for (auto r : radices_) {
    out += ((a % r + b % r) % r) * place;
    a /= r;
    b /= r;
    place *= r;
  }
  return out;
}

GroupElem GroupDesc::neg(GroupElem a) const {
  if (kind_ == Kind::vector) {
    if (p_ == 2) return a;
    GroupElem out = 0, place = 1;
    for (std::uint32_t i = 0; i < n(); ++i) {
      out += ((p_ - a % p_) % p_) * place;
      a /= p_;
      place *= p_;
    }
    return out;
  }
  GroupElem out = 0, place = 1;
  for (auto r : radices_) {
    out += ((r - a % r) % r) * place;
    a /= r;
    place *= r;
  }
  return out;
}

void GroupDesc::coordinates(GroupElem a, std::span<std::uint32_t> out) const {
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(a % radices_[i]);
    a /= radices_[i];
  }
}

std::vector<std::uint32_t> GroupDesc::coordinates(GroupElem a) const {
  std::vector<std::uint32_t> out(radices_.size());
  coordinates(a, out);
  return out;
}

std::uint32_t GroupDesc::pairing_coords(std::span<const std::uint32_t> g,
                                        std::span<const std::uint32_t> h) const {
  if (kind_ != Kind::vector) throw Error("exact pairing is only defined on vector groups");
  std::uint64_t acc = 0;
  if (field_) {
    const std::uint32_t q = field_->q();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] == 0 || h[i] == 0) continue;
      acc += trace_product_ ? (*trace_product_)[std::size_t{g[i]} * q + h[i]]
                            : field_->trace(field_->mul(FieldElem{g[i]}, FieldElem{h[i]}));
    }
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) acc += std::uint64_t{g[i]} * h[i];
  }
  return static_cast<std::uint32_t>(acc % p_);
}

std::uint32_t GroupDesc::pairing(GroupElem g, GroupElem h) const {
  const auto a = coordinates(g);
  const auto b = coordinates(h);
  return pairing_coords(a, b);
}

std::uint64_t GroupDesc::phase_numerator(std::span<const std::uint32_t> g,
                                         std::span<const std::uint32_t> h) const {
  if (kind_ == Kind::vector) return pairing_coords(g, h);
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::uint64_t r = radices_[i];
    acc += static_cast<unsigned __int128>((std::uint64_t{g[i]} * h[i]) % r) * (lcm_ / r);
  }
  return static_cast<std::uint64_t>(acc % lcm_);
}

ConnectionFunction::ConnectionFunction(GroupDesc group, std::vector<std::int64_t> values)
    : group_(std::move(group)), ints_(std::move(values)) {
  if (ints_.size() != group_.order()) throw ConfigError("connection table length must equal |G|");
  complex_.reserve(ints_.size());
  for (auto v : ints_) complex_.emplace_back(static_cast<double>(v), 0.0);
  check_hermitian();
}

ConnectionFunction::ConnectionFunction(GroupDesc group, std::vector<std::complex<double>> values)
    : group_(std::move(group)), complex_(std::move(values)) {
  if (complex_.size() != group_.order()) throw ConfigError("connection table length must equal |G|");
  check_hermitian();
}

ConnectionFunction ConnectionFunction::from_json(const nlohmann::json& group,
                                                 const nlohmann::json& table) {
  auto g = GroupDesc::from_json(group);
  if (!table.is_array()) throw ConfigError("connection table must be a JSON array");
  bool all_int = true;
  for (const auto& v : table) {
    if (!v.is_number_integer()) all_int = false;
  }
  if (all_int) return ConnectionFunction(std::move(g), table.get<std::vector<std::int64_t>>());
  std::vector<std::complex<double>> vals;
  vals.reserve(table.size());
  for (const auto& v : table) {
    if (v.is_number()) {
      vals.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2) {
      vals.emplace_back(v[0].get<double>(), v[1].get<double>());
    } else {
      throw ConfigError("connection table entries must be numbers or [re, im] pairs");
    }
  }
  return ConnectionFunction(std::move(g), std::move(vals));
}

void ConnectionFunction::check_hermitian() {
  hermitian_ = true;
  for (GroupElem g = 0; g < group_.order() && hermitian_; ++g) {
    const GroupElem ng = group_.neg(g);
    if (is_integer()) {
      hermitian_ = ints_[g] == ints_[ng];
    } else {
      const auto diff = std::abs(complex_[g] - std::conj(complex_[ng]));
      hermitian_ = diff <= 1e-12 * std::max(1.0, std::abs(complex_[g]));
    }
  }
}

std::int64_t ConnectionFunction::int_value(GroupElem g) const {
  if (!is_integer()) throw Error("connection function is not integer-valued");
  return ints_[g];
}

std::complex<double> ConnectionFunction::total() const {
  if (is_integer()) return {static_cast<double>(int_total()), 0.0};
  std::complex<double> acc{0.0, 0.0};
  for (const auto& v : complex_) acc += v;
  return acc;
}

std::int64_t ConnectionFunction::int_total() const {
  if (!is_integer()) throw Error("connection function is not integer-valued");
  std::int64_t acc = 0;
  for (auto v : ints_) acc = checked::add(acc, v);
  return acc;
}

double ConnectionFunction::max_abs() const {
  double best = 0.0;
  for (const auto& v : complex_) best = std::max(best, std::abs(v));
  return best;
}

SpectralValue SpectralValue::of(CycInt z) {
  SpectralValue v;
  v.approx = z.to_complex();
  v.exact = std::move(z);
  return v;
}

SpectralValue SpectralValue::of(std::complex<double> z) {
  SpectralValue v;
  v.approx = z;
  return v;
}

std::string SpectralValue::to_string() const {
  if (exact) return exact->to_string();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", approx.real(), approx.imag());
  return buf;
}

nlohmann::ordered_json SpectralValue::to_json() const {
  if (exact) {
    if (auto n = exact->as_integer()) return *n;
    return exact->to_string();
  }
  if (approx.imag() == 0.0) return approx.real();
  return nlohmann::ordered_json::array({approx.real(), approx.imag()});
}

std::vector<GroupElem> SpectrumReport::characters_with_integer(std::int64_t n) const {
  std::vector<GroupElem> out;
  for (GroupElem g = 0; g < coefficients.size(); ++g) {
    const auto& v = coefficients[g];
    if (v.exact && v.exact->as_integer() == n) out.push_back(g);
  }
  return out;
}

nlohmann::ordered_json SpectrumReport::to_json(bool include_entries) const {
  nlohmann::ordered_json j;
  j["exact"] = exact;
  j["order"] = coefficients.size();
  j["lambda"] = lambda;
  auto& cls = j["multiset"] = nlohmann::ordered_json::array();
  for (const auto& c : classes) {
    cls.push_back({{"value", c.value.to_json()}, {"multiplicity", c.multiplicity}});
  }
  if (include_entries) {
    auto& e = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& v : coefficients) e.push_back(v.to_json());
  }
  return j;
}

SpectralValue character_value(const GroupDesc& group, GroupElem g, GroupElem h) {
  const auto a = group.coordinates(g);
  const auto b = group.coordinates(h);
  if (group.is_vector()) return SpectralValue::of(CycInt::root(group.p(), group.pairing_coords(a, b)));
  return SpectralValue::of(unit_root(group.phase_numerator(a, b), group.phase_denominator()));
}

SpectralValue fourier_coefficient(const ConnectionFunction& c, GroupElem g) {
  const auto& group = c.group();
  if (g >= group.order()) throw ConfigError("character label out of range");
  const auto a = group.coordinates(g);
  std::vector<std::uint32_t> b(group.num_coordinates());
  if (c.is_exact()) {
    const std::uint32_t p = group.p();
    std::vector<std::int64_t> buckets(p, 0);
    for (GroupElem h = 0; h < group.order(); ++h) {
      group.coordinates(h, b);
      const std::uint32_t e = group.pairing_coords(a, b);
      auto& slot = buckets[(p - e) % p];  // conj(chi_g(h)) = zeta^{-e}
      slot = checked::add(slot, c.int_value(h));
    }
    return SpectralValue::of(CycInt::from_exponent_buckets(p, buckets));
  }
  const std::uint64_t den = group.phase_denominator();
  std::complex<double> acc{0.0, 0.0};
  for (GroupElem h = 0; h < group.order(); ++h) {
    group.coordinates(h, b);
    acc += c.value(h) * std::conj(unit_root(group.phase_numerator(a, b), den));
  }
  return SpectralValue::of(acc);
}

std::vector<SpectralValue> fourier_transform_naive(const ConnectionFunction& c) {
  const auto& group = c.group();
  const std::uint64_t order = group.order();
  const std::size_t len = group.num_coordinates();
  const auto coords = coordinate_table(group);
  auto row = [&](GroupElem h) { return std::span<const std::uint32_t>(coords.data() + h * len, len); };
  std::vector<SpectralValue> out(order);
  if (c.is_exact()) {
    const std::uint32_t p = group.p();
    std::vector<std::int64_t> buckets(p);
    for (GroupElem g = 0; g < order; ++g) {
      std::fill(buckets.begin(), buckets.end(), 0);
      for (GroupElem h = 0; h < order; ++h) {
        const std::int64_t v = c.int_value(h);
        if (v == 0) continue;
        auto& slot = buckets[(p - group.pairing_coords(row(g), row(h))) % p];
        slot = checked::add(slot, v);
      }
      out[g] = SpectralValue::of(CycInt::from_exponent_buckets(p, buckets));
    }
    return out;
  }
  const std::uint64_t den = group.phase_denominator();
  const auto roots = root_table(den);
  for (GroupElem g = 0; g < order; ++g) {
    std::complex<double> acc{0.0, 0.0};
    for (GroupElem h = 0; h < order; ++h) {
      acc += c.value(h) * std::conj(roots[group.phase_numerator(row(g), row(h))]);
    }
    out[g] = SpectralValue::of(acc);
  }
  return out;
}

std::vector<CycInt> fourier_transform_fast(const ConnectionFunction& c) {
  if (!c.is_exact()) throw Error("fast transform needs an integer table on a vector group");
  const auto& group = c.group();
  const std::uint32_t p = group.p();
  const std::uint32_t n = group.n();
  const std::uint64_t order = group.order();

  std::vector<CycInt> data;
  data.reserve(order);
  for (GroupElem h = 0; h < order; ++h) data.emplace_back(p, c.int_value(h));

  // One size-p DFT per digit: out[a] = sum_b in[b] zeta^{-a b}.
  std::vector<CycInt> scratch(p, CycInt(p));
  std::uint64_t stride = 1;
  for (std::uint32_t d = 0; d < n; ++d) {
    const std::uint64_t block = stride * p;
    for (std::uint64_t base = 0; base < order; base += block) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        for (std::uint32_t a = 0; a < p; ++a) {
          CycInt acc(p);
          for (std::uint32_t b = 0; b < p; ++b) {
            const auto& v = data[base + off + b * stride];
            const std::uint64_t e = (p - (std::uint64_t{a} * b) % p) % p;
            acc += e == 0 ? v : v.times_root(static_cast<std::int64_t>(e));
          }
          scratch[a] = std::move(acc);
        }
        for (std::uint32_t a = 0; a < p; ++a) data[base + off + a * stride] = std::move(scratch[a]);
        scratch.assign(p, CycInt(p));
      }
    }
    stride = block;
  }

  const FieldCtx* field = group.field();
  if (!field) return data;

  // Trace-form labels: chi_a(h) = zeta^{sum_{i,k} h_{ik} Tr(a_i t^k)}, so the
  // trace-labelled coefficient of a is the standard coefficient of a' with
  // a'_{ik} = Tr(a_i t^k).
  const std::uint32_t s = field->s();
  std::vector<FieldElem> basis(s);
  for (std::uint32_t k = 0; k < s; ++k) {
    std::uint32_t idx = 1;
    for (std::uint32_t i = 0; i < k; ++i) idx *= p;
    basis[k] = FieldElem{idx};
  }
  std::vector<CycInt> out;
  out.reserve(order);
  for (GroupElem a = 0; a < order; ++a) {
    const auto coords = group.coordinates(a);
    GroupElem std_label = 0, place = 1;
    for (auto ai : coords) {
      for (std::uint32_t k = 0; k < s; ++k) {
        std_label += place * field->trace(field->mul(FieldElem{ai}, basis[k]));
        place *= p;
      }
    }
    out.push_back(data[std_label]);
  }
  return out;
}

SpectrumReport spectrum(const ConnectionFunction& c, SpectrumOptions options) {
  const auto& group = c.group();
  SpectrumReport report;
  report.exact = c.is_exact();
  if (options.method == TransformMethod::fast) {
    for (auto& z : fourier_transform_fast(c)) report.coefficients.push_back(SpectralValue::of(std::move(z)));
  } else {
    if (group.order() > options.max_naive_order) {
      throw SizeLimitError("|G| = " + std::to_string(group.order()) +
                           " exceeds the naive transform budget of " +
                           std::to_string(options.max_naive_order));
    }
    report.coefficients = fourier_transform_naive(c);
  }
  for (GroupElem g = 1; g < report.coefficients.size(); ++g) {
    report.lambda = std::max(report.lambda, report.coefficients[g].abs());
  }

  auto by_value = [](const SpectralValue& a, const SpectralValue& b) {
    if (a.approx.real() != b.approx.real()) return a.approx.real() > b.approx.real();
    if (a.approx.imag() != b.approx.imag()) return a.approx.imag() > b.approx.imag();
    if (a.exact && b.exact) return a.exact->coeffs() < b.exact->coeffs();
    return false;
  };

  if (report.exact) {
    std::unordered_map<CycInt, std::uint64_t, CycIntHash> counts;
    for (const auto& v : report.coefficients) ++counts[*v.exact];
    for (auto& [z, n] : counts) report.classes.push_back({SpectralValue::of(z), n});
    std::sort(report.classes.begin(), report.classes.end(),
              [&](const SpectrumClass& a, const SpectrumClass& b) { return by_value(a.value, b.value); });
    return report;
  }

  // Numeric: greedy clustering in (real, imag) order.
  const double radius = options.cluster_tolerance *
                        std::max(1.0, static_cast<double>(group.order()) * c.max_abs());
  std::vector<std::size_t> order(report.coefficients.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return by_value(report.coefficients[a], report.coefficients[b]);
  });
  for (auto idx : order) {
    const auto& v = report.coefficients[idx];
    bool placed = false;
    for (auto it = report.classes.rbegin(); it != report.classes.rend(); ++it) {
      if (std::abs(it->value.approx - v.approx) <= radius) {
        ++it->multiplicity;
        placed = true;
        break;
      }
      if (it->value.approx.real() - v.approx.real() > radius) break;
    }
    if (!placed) report.classes.push_back({v, 1});
  }
  return report;
}

std::int64_t edge_weight_exact(const ConnectionFunction& c, std::span<const GroupElem> S,
                               std::span<const GroupElem> T) {
  const auto& group = c.group();
  std::int64_t acc = 0;
  for (auto x : S) {
    for (auto y : T) acc = checked::add(acc, c.int_value(group.sub(x, y)));
  }
  return acc;
}

std::complex<double> edge_weight(const ConnectionFunction& c, std::span<const GroupElem> S,
                                 std::span<const GroupElem> T) {
  if (c.is_integer()) return {static_cast<double>(edge_weight_exact(c, S, T)), 0.0};
  const auto& group = c.group();
  std::complex<double> acc{0.0, 0.0};
  for (auto x : S) {
    for (auto y : T) acc += c.value(group.sub(x, y));
  }
  return acc;
}

MixingBound mixing_bound(const ConnectionFunction& c, double lambda, std::uint64_t s_size,
                         std::uint64_t t_size) {
  const double n = static_cast<double>(c.group().order());
  const double s = static_cast<double>(s_size), t = static_cast<double>(t_size);
  MixingBound b;
  b.main_term = c.total() * (s * t / n);
  const double inner = s * t * (1.0 - s / n) * (1.0 - t / n);
  b.error_term = lambda * std::sqrt(std::max(0.0, inner));
  return b;
}

BoundVerdict verify_mixing(const ConnectionFunction& c, const SpectrumReport& spec,
                           std::span<const GroupElem> S, std::span<const GroupElem> T,
                           double rel_slack) {
  const auto bound = mixing_bound(c, spec.lambda, S.size(), T.size());
  BoundVerdict v;
  v.theorem = "expander-mixing";
  const double lhs = std::abs(edge_weight(c, S, T) - bound.main_term);
  const double scale = static_cast<double>(c.group().order()) * c.max_abs();
  v.lhs = lhs;
  v.rhs = bound.error_term;
  v.main_term = bound.main_term.real();
  v.holds = lhs <= bound.error_term + rel_slack * scale;
  v.params["order"] = c.group().order();
  v.params["S"] = S.size();
  v.params["T"] = T.size();
  v.params["lambda"] = spec.lambda;
  return v;
}

double variance_lower_bound(const ConnectionFunction& c) {
  if (!c.hermitian()) throw HypothesisError("variance bound needs a hermitian connection function");
  const double n = static_cast<double>(c.group().order());
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& v : c.values()) {
    const double a = std::abs(v);
    sum += a;
    sum_sq += a * a;
  }
  const double var = sum_sq / n - (sum / n) * (sum / n);
  return std::sqrt(std::max(0.0, n * var));
}

bool oracle_eigencheck(const ConnectionFunction& c, GroupElem g) {
  const auto& group = c.group();
  const std::uint64_t order = group.order();
  if (order > 2048) throw SizeLimitError("oracle eigencheck is limited to |G| <= 2048");
  const std::size_t len = group.num_coordinates();
  const auto coords = coordinate_table(group);
  auto row = [&](GroupElem h) { return std::span<const std::uint32_t>(coords.data() + h * len, len); };
  const auto eig = fourier_coefficient(c, g);

  if (c.is_exact()) {
    const std::uint32_t p = group.p();
    std::vector<std::int64_t> buckets(p);
    for (GroupElem x = 0; x < order; ++x) {
      std::fill(buckets.begin(), buckets.end(), 0);
      for (GroupElem y = 0; y < order; ++y) {
        auto& slot = buckets[group.pairing_coords(row(g), row(y))];
        slot = checked::add(slot, c.int_value(group.sub(x, y)));
      }
      const auto lhs = CycInt::from_exponent_buckets(p, buckets);
      const auto rhs = eig.exact->times_root(group.pairing_coords(row(g), row(x)));
      if (lhs != rhs) return false;
    }
    return true;
  }
  const std::uint64_t den = group.phase_denominator();
  const auto roots = root_table(den);
  const double tol = 1e-9 * std::max(1.0, static_cast<double>(order) * c.max_abs());
  for (GroupElem x = 0; x < order; ++x) {
    std::complex<double> lhs{0.0, 0.0};
    for (GroupElem y = 0; y < order; ++y) {
      lhs += c.value(group.sub(x, y)) * roots[group.phase_numerator(row(g), row(y))];
    }
    const auto rhs = eig.approx * roots[group.phase_numerator(row(g), row(x))];
    if (std::abs(lhs - rhs) > tol) return false;
  }
  return true;
}

}  // namespace polyinc
