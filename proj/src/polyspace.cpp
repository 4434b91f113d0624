#include "polyinc/polyspace.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include "polyinc/errors.hpp"

namespace polyinc {

namespace {

std::uint32_t total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

// Graded order, x_1 > x_2 > ... within a degree.
bool graded_less(const Exponent& a, const Exponent& b) {
  const auto da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

void all_exponents(std::uint32_t m, std::uint32_t r, Exponent& cur, std::size_t pos,
                   std::vector<Exponent>& out) {
  if (pos == m) {
    out.push_back(cur);
    return;
  }
  const std::uint32_t used = std::accumulate(cur.begin(), cur.begin() + pos, std::uint32_t{0});
  for (std::uint32_t k = 0; used + k <= r; ++k) {
    cur[pos] = k;
    all_exponents(m, r, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

std::pair<std::uint32_t, std::uint32_t> parse_pair(std::string_view text, std::string_view what) {
  const auto comma = text.find(',');
  std::uint32_t a = 0, b = 0;
  auto bad = [&] {
    return ConfigError("unresolvable support preset \"" + std::string(what) +
                       "\": expected <name>:m,r");
  };
  if (comma == std::string_view::npos) throw bad();
  auto r1 = std::from_chars(text.data(), text.data() + comma, a);
  auto r2 = std::from_chars(text.data() + comma + 1, text.data() + text.size(), b);
  if (r1.ec != std::errc{} || r1.ptr != text.data() + comma || r2.ec != std::errc{} ||
      r2.ptr != text.data() + text.size()) {
    throw bad();
  }
  return {a, b};
}

}  // namespace

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) return std::nullopt;
  }
  return r;
}

MonomialSupport::MonomialSupport(std::uint32_t m, std::vector<Exponent> exponents)
    : m_(m), exponents_(std::move(exponents)) {
  if (m_ == 0) throw ConfigError("support needs at least one variable");
  if (exponents_.empty()) throw ConfigError("support must contain at least one monomial");
  for (const auto& e : exponents_) {
    if (e.size() != m_) throw ConfigError("exponent vector length does not match m");
  }
  std::sort(exponents_.begin(), exponents_.end(), graded_less);
  if (std::adjacent_find(exponents_.begin(), exponents_.end()) != exponents_.end()) {
    throw ConfigError("support exponents must be distinct");
  }
}

MonomialSupport MonomialSupport::full(std::uint32_t m, std::uint32_t r) {
  if (m == 0) throw ConfigError("support needs at least one variable");
  std::vector<Exponent> out;
  Exponent cur(m, 0);
  all_exponents(m, r, cur, 0, out);
  MonomialSupport s(m, std::move(out));
  s.preset_ = "full:" + std::to_string(m) + "," + std::to_string(r);
  return s;
}

MonomialSupport MonomialSupport::x1_shifted(std::uint32_t m, std::uint32_t r) {
  if (r == 0) throw ConfigError("x1-shifted support requires r >= 1");
  auto base = full(m, r - 1);
  std::vector<Exponent> out = base.exponents();
  for (auto& e : out) e[0] += 1;
  MonomialSupport s(m, std::move(out));
  s.preset_ = "x1-shifted:" + std::to_string(m) + "," + std::to_string(r);
  return s;
}

MonomialSupport MonomialSupport::parse(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("unresolvable support \"" + text + "\"");
    }
    const auto name = text.substr(0, colon);
    const auto [m, r] = parse_pair(std::string_view(text).substr(colon + 1), text);
    if (name == "full") return full(m, r);
    if (name == "x1-shifted") return x1_shifted(m, r);
    throw ConfigError("unresolvable support preset \"" + name + "\"");
  }
  if (j.is_object()) {
    try {
      const auto m = j.at("m").get<std::uint32_t>();
      auto exps = j.at("exponents").get<std::vector<Exponent>>();
      return MonomialSupport(m, std::move(exps));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed support descriptor: ") + e.what());
    }
  }
  throw ConfigError("support descriptor must be a preset string or an object");
}

std::optional<std::size_t> MonomialSupport::index_of(const Exponent& e) const {
  auto it = std::lower_bound(exponents_.begin(), exponents_.end(), e, graded_less);
  if (it == exponents_.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - exponents_.begin());
}

nlohmann::json MonomialSupport::to_json() const {
  return {{"m", m_}, {"exponents", exponents_}};
}

std::string MonomialSupport::descriptor() const {
  return preset_.empty() ? to_json().dump() : preset_;
}

PolySpace::PolySpace(FieldPtr field, MonomialSupport support, Budget budget)
    : field_(std::move(field)), support_(std::move(support)), budget_(budget) {
  if (!field_) throw ConfigError("polynomial space needs a field");
  const auto size = checked_pow(field_->q(), support_.dim());
  if (!size || *size > budget_.max_elements) {
    throw SizeLimitError("polynomial space " + describe_name() + " has more than " +
                         std::to_string(budget_.max_elements) + " elements");
  }
  size_ = *size;
  const auto pts = checked_pow(field_->q(), support_.m());
  if (pts && *pts <= budget_.max_points) {
    points_ = *pts;
    monomials_.resize(points_ * dim());
    for (std::uint64_t a = 0; a < points_; ++a) {
      const auto alpha = decode_point(a, m());
      for (std::size_t i = 0; i < dim(); ++i) {
        monomials_[a * dim() + i] = monomial_value(support_[i], alpha);
      }
    }
  }
}

std::string PolySpace::describe_name() const {
  return support_.descriptor() + " over " + field_->name();
}

std::uint64_t PolySpace::num_points() const {
  if (points_ == 0) {
    throw SizeLimitError("q^m for " + describe_name() + " exceeds the point budget of " +
                         std::to_string(budget_.max_points));
  }
  return points_;
}

Poly PolySpace::decode(std::uint64_t index) const {
  if (index >= size_) throw ConfigError("polynomial index out of range");
  Poly f{std::vector<FieldElem>(dim())};
  const std::uint64_t qq = q();
  for (auto& c : f.coeffs) {
    c = FieldElem{static_cast<std::uint32_t>(index % qq)};
    index /= qq;
  }
  return f;
}

std::uint64_t PolySpace::encode(const Poly& f) const {
  if (f.coeffs.size() != dim()) throw ConfigError("polynomial length does not match support");
  std::uint64_t v = 0;
  for (std::size_t i = dim(); i-- > 0;) v = v * q() + f.coeffs[i].index;
  return v;
}

Poly PolySpace::zero_poly() const { return Poly{std::vector<FieldElem>(dim())}; }

Poly PolySpace::add(const Poly& a, const Poly& b) const {
  Poly out = zero_poly();
  for (std::size_t i = 0; i < dim(); ++i) out.coeffs[i] = field_->add(a.coeffs[i], b.coeffs[i]);
  return out;
}

Poly PolySpace::sub(const Poly& a, const Poly& b) const {
  Poly out = zero_poly();
  for (std::size_t i = 0; i < dim(); ++i) out.coeffs[i] = field_->sub(a.coeffs[i], b.coeffs[i]);
  return out;
}

std::uint64_t PolySpace::sub_index(std::uint64_t f, std::uint64_t g) const {
  const std::uint64_t qq = q();
  std::uint64_t out = 0, place = 1;
  for (std::size_t i = 0; i < dim(); ++i) {
    const FieldElem a{static_cast<std::uint32_t>(f % qq)};
    const FieldElem b{static_cast<std::uint32_t>(g % qq)};
    out += place * field_->sub(a, b).index;
    f /= qq;
    g /= qq;
    place *= qq;
  }
  return out;
}

std::vector<FieldElem> PolySpace::decode_point(std::uint64_t index, std::uint32_t len) const {
  std::vector<FieldElem> pt(len);
  const std::uint64_t qq = q();
  for (auto& c : pt) {
    c = FieldElem{static_cast<std::uint32_t>(index % qq)};
    index /= qq;
  }
  return pt;
}

std::uint64_t PolySpace::encode_point(std::span<const FieldElem> point) const {
  std::uint64_t v = 0;
  for (std::size_t i = point.size(); i-- > 0;) v = v * q() + point[i].index;
  return v;
}

PropertyStar PolySpace::property_star() const {
  PropertyStar out;
  if (!support_.index_of(Exponent(m(), 0))) {
    out.reason = "no constant monomial";
    return out;
  }
  out.k.assign(m(), 0);
  for (std::uint32_t axis = 0; axis < m(); ++axis) {
    for (const auto& e : support_.exponents()) {
      bool pure = e[axis] >= 1;
      for (std::uint32_t j = 0; j < m() && pure; ++j) {
        if (j != axis && e[j] != 0) pure = false;
      }
      if (pure && field_->is_unit_exponent(e[axis])) {
        out.k[axis] = e[axis];
        break;
      }
    }
    if (out.k[axis] == 0) {
      out.k.clear();
      out.reason = "no pure power x_" + std::to_string(axis + 1) +
                   "^k with gcd(k, q-1) = 1";
      return out;
    }
  }
  out.holds = true;
  return out;
}

std::uint32_t PolySpace::max_total_degree() const {
  std::uint32_t best = 0;
  for (const auto& e : support_.exponents()) best = std::max(best, total_degree(e));
  return best;
}

FieldElem PolySpace::monomial_value(const Exponent& e, std::span<const FieldElem> point) const {
  FieldElem v = field_->one();
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] != 0) v = field_->mul(v, field_->pow(point[j], e[j]));
  }
  return v;
}

std::span<const FieldElem> PolySpace::monomial_row(std::uint64_t point_index) const {
  if (point_index >= num_points()) throw ConfigError("point index out of range");
  return {monomials_.data() + point_index * dim(), dim()};
}

FieldElem PolySpace::evaluate(const Poly& f, std::span<const FieldElem> point) const {
  if (point.size() != m()) throw ConfigError("evaluation point must have length m");
  if (f.coeffs.size() != dim()) throw ConfigError("polynomial length does not match support");
  FieldElem acc = field_->zero();
  for (std::size_t i = 0; i < dim(); ++i) {
    if (f.coeffs[i].index == 0) continue;
    acc = field_->add(acc, field_->mul(f.coeffs[i], monomial_value(support_[i], point)));
  }
  return acc;
}

std::vector<FieldElem> PolySpace::evaluations(const Poly& f) const {
  const std::uint64_t n = num_points();
  std::vector<FieldElem> out(n);
  for (std::uint64_t a = 0; a < n; ++a) {
    const FieldElem* row = monomials_.data() + a * dim();
    FieldElem acc = field_->zero();
    for (std::size_t i = 0; i < dim(); ++i) {
      if (f.coeffs[i].index != 0) acc = field_->add(acc, field_->mul(f.coeffs[i], row[i]));
    }
    out[a] = acc;
  }
  return out;
}

std::uint64_t PolySpace::count_zeros(const Poly& f) const {
  const auto vals = evaluations(f);
  return static_cast<std::uint64_t>(
      std::count(vals.begin(), vals.end(), field_->zero()));
}

std::uint64_t PolySpace::vanishing_count(std::span<const FieldElem> alpha) const {
  if (alpha.size() != m()) throw ConfigError("evaluation point must have length m");
  std::vector<FieldElem> mono(dim());
  for (std::size_t i = 0; i < dim(); ++i) mono[i] = monomial_value(support_[i], alpha);
  std::uint64_t count = 0;
  Poly f = zero_poly();
  for (std::uint64_t idx = 0; idx < size_; ++idx) {
    // odometer step
    if (idx != 0) {
      for (auto& c : f.coeffs) {
        if (++c.index < q()) break;
        c.index = 0;
      }
    }
    FieldElem acc = field_->zero();
    for (std::size_t i = 0; i < dim(); ++i) {
      if (f.coeffs[i].index != 0) acc = field_->add(acc, field_->mul(f.coeffs[i], mono[i]));
    }
    if (acc == field_->zero()) ++count;
  }
  return count;
}

Poly PolySpace::annihilator_poly(FieldElem c, std::span<const FieldElem> alpha) const {
  if (alpha.size() != m()) throw ConfigError("evaluation point must have length m");
  Poly out = zero_poly();
  for (std::size_t i = 0; i < dim(); ++i) {
    out.coeffs[i] = field_->mul(c, monomial_value(support_[i], alpha));
  }
  return out;
}

FieldElem PolySpace::inner(const Poly& f, const Poly& g) const {
  FieldElem acc = field_->zero();
  for (std::size_t i = 0; i < dim(); ++i) acc = field_->add(acc, field_->mul(f.coeffs[i], g.coeffs[i]));
  return acc;
}

std::uint32_t PolySpace::trace_pairing(const Poly& f, const Poly& g) const {
  return field_->trace(inner(f, g));
}

PolySpace make_full_space(FieldPtr field, std::uint32_t m, std::uint32_t r, Budget budget) {
  return PolySpace(std::move(field), MonomialSupport::full(m, r), budget);
}

}  // namespace polyinc
