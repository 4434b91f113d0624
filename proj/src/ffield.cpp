#include "polyinc/ffield.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "polyinc/errors.hpp"

namespace polyinc {

namespace {

using Coeffs = std::vector<std::uint32_t>;

constexpr std::uint32_t kFullTableLimit = 256;
constexpr std::uint32_t kLogTableLimit = 65536;

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  // p prime, a != 0
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = static_cast<std::uint32_t>(
          (out[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  }
  trim(out);
  return out;
}

// Remainder of a modulo b (b nonzero, arbitrary leading coefficient).
Coeffs poly_mod(Coeffs a, const Coeffs& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod_p(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = factor * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Coeffs poly_gcd(Coeffs a, Coeffs b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Coeffs poly_powmod(Coeffs base, std::uint64_t e, const Coeffs& mod,
                   std::uint32_t p) {
  Coeffs result{1};
  base = poly_mod(std::move(base), mod, p);
  while (e) {
    if (e & 1) result = poly_mod(poly_mul(result, base, p), mod, p);
    base = poly_mod(poly_mul(base, base, p), mod, p);
    e >>= 1;
  }
  return result;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Conway polynomials, constant term first.
const std::map<std::pair<std::uint32_t, std::uint32_t>, Coeffs>& conway_table() {
  static const std::map<std::pair<std::uint32_t, std::uint32_t>, Coeffs> table = {
      {{2, 1}, {1, 1}},           {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},     {{2, 4}, {1, 1, 0, 0, 1}},
      {{3, 1}, {1, 1}},           {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},     {{3, 4}, {2, 0, 0, 2, 1}},
      {{5, 1}, {3, 1}},           {{5, 2}, {2, 4, 1}},
      {{5, 3}, {3, 3, 0, 1}},     {{5, 4}, {2, 4, 4, 0, 1}},
      {{7, 1}, {4, 1}},           {{7, 2}, {3, 6, 1}},
      {{7, 3}, {4, 0, 6, 1}},     {{7, 4}, {3, 4, 5, 0, 1}},
      {{11, 1}, {9, 1}},          {{11, 2}, {2, 7, 1}},
      {{11, 3}, {9, 2, 0, 1}},    {{11, 4}, {2, 10, 8, 0, 1}},
      {{13, 1}, {11, 1}},         {{13, 2}, {2, 12, 1}},
      {{13, 3}, {11, 2, 0, 1}},   {{13, 4}, {2, 12, 3, 0, 1}},
  };
  return table;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p) {
  Coeffs f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  if (f[0] == 0) return false;
  // A root check is exact for degree <= 3; the gcd sweep below covers all degrees.
  if (deg <= 3) {
    for (std::uint32_t x = 0; x < p; ++x) {
      std::uint64_t acc = 0;
      for (std::size_t i = deg + 1; i-- > 0;) acc = (acc * x + f[i]) % p;
      if (acc == 0) return false;
    }
  }
  // f has no factor of degree i iff gcd(f, x^{p^i} - x) = 1.
  Coeffs xpow{0, 1};
  for (std::size_t i = 1; i <= deg / 2; ++i) {
    xpow = poly_powmod(xpow, p, f, p);
    Coeffs diff = xpow;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(f, diff, p).size() > 1) return false;
  }
  return true;
}

std::optional<std::vector<std::uint32_t>> conway_polynomial(std::uint32_t p,
                                                            std::uint32_t s) {
  const auto& table = conway_table();
  auto it = table.find({p, s});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

FieldCtx::FieldCtx(std::uint32_t p, std::uint32_t s,
                   std::optional<std::vector<std::uint32_t>> modulus)
    : p_(p), s_(s), q_(1) {
  if (!is_prime(p)) {
    throw ConfigError("invalid characteristic: " + std::to_string(p) +
                      " is not prime");
  }
  if (s == 0) throw ConfigError("invalid extension degree: s must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < s; ++i) {
    q *= p;
    if (q > (std::uint64_t{1} << 31)) {
      throw SizeLimitError("field order " + std::to_string(p) + "^" +
                           std::to_string(s) + " exceeds 2^31");
    }
  }
  q_ = static_cast<std::uint32_t>(q);

  if (modulus) {
    modulus_ = std::move(*modulus);
  } else if (auto c = conway_polynomial(p, s)) {
    modulus_ = std::move(*c);
  } else if (s == 1) {
    modulus_ = {0, 1};
  } else {
    throw ConfigError("no built-in modulus for GF(" + std::to_string(p) + "^" +
                      std::to_string(s) + "); supply one explicitly");
  }
  if (modulus_.size() != s + 1 || modulus_.back() != 1) {
    throw ConfigError("modulus must be monic of degree s with s+1 coefficients");
  }
  for (auto c : modulus_) {
    if (c >= p) throw ConfigError("modulus coefficient out of range [0, p)");
  }
  if (!is_irreducible_mod_p(modulus_, p)) {
    throw ConfigError("modulus is reducible over GF(" + std::to_string(p) + ")");
  }

  if (q_ <= kFullTableLimit) {
    add_table_.resize(std::size_t{q_} * q_);
    mul_table_.resize(std::size_t{q_} * q_);
    for (std::uint32_t a = 0; a < q_; ++a) {
      for (std::uint32_t b = 0; b < q_; ++b) {
        add_table_[std::size_t{a} * q_ + b] = static_cast<std::uint16_t>(
            add_digits(FieldElem{a}, FieldElem{b}).index);
        mul_table_[std::size_t{a} * q_ + b] = static_cast<std::uint16_t>(
            mul_polynomial_basis(FieldElem{a}, FieldElem{b}).index);
      }
    }
  } else if (q_ <= kLogTableLimit) {
    const std::uint64_t order = q_ - 1;
    const auto factors = prime_factors(order);
    auto slow_pow = [&](FieldElem a, std::uint64_t e) {
      FieldElem r = one();
      while (e) {
        if (e & 1) r = mul_polynomial_basis(r, a);
        a = mul_polynomial_basis(a, a);
        e >>= 1;
      }
      return r;
    };
    FieldElem gen{0};
    for (std::uint32_t g = 2; g < q_ && gen.index == 0; ++g) {
      bool primitive = true;
      for (auto r : factors) {
        if (slow_pow(FieldElem{g}, order / r) == one()) {
          primitive = false;
          break;
        }
      }
      if (primitive) gen = FieldElem{g};
    }
    exp_.resize(2 * order);
    log_.assign(q_, 0);
    FieldElem cur = one();
    for (std::uint64_t i = 0; i < order; ++i) {
      exp_[i] = exp_[i + order] = cur.index;
      log_[cur.index] = static_cast<std::uint32_t>(i);
      cur = mul_polynomial_basis(cur, gen);
    }
  }
  if (q_ <= kLogTableLimit) {
    trace_table_.resize(q_);
    for (std::uint32_t a = 0; a < q_; ++a) trace_table_[a] = trace_slow(FieldElem{a});
  }
}

std::shared_ptr<const FieldCtx> FieldCtx::make(
    std::uint32_t p, std::uint32_t s,
    std::optional<std::vector<std::uint32_t>> modulus) {
  return std::make_shared<const FieldCtx>(p, s, std::move(modulus));
}

std::shared_ptr<const FieldCtx> FieldCtx::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p")) {
    throw ConfigError("field descriptor must be an object with key \"p\"");
  }
  try {
    const auto p = j.at("p").get<std::int64_t>();
    const auto s = j.value("s", std::int64_t{1});
    if (p < 0 || p > 65521) throw ConfigError("invalid characteristic: " + std::to_string(p));
    if (s <= 0) throw ConfigError("invalid extension degree: s must be >= 1");
    std::optional<std::vector<std::uint32_t>> modulus;
    if (j.contains("modulus") && !j.at("modulus").is_null()) {
      modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
    }
    return make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(s),
                std::move(modulus));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed field descriptor: ") + e.what());
  }
}

nlohmann::json FieldCtx::to_json() const {
  return {{"p", p_}, {"s", s_}, {"modulus", modulus_}};
}

std::string FieldCtx::name() const {
  if (s_ == 1) return "GF(" + std::to_string(p_) + ")";
  return "GF(" + std::to_string(p_) + "^" + std::to_string(s_) + ")";
}

FieldElem FieldCtx::generator_t() const {
  // t itself when s > 1; in a prime field the "basis generator" is 1.
  return s_ == 1 ? one() : FieldElem{p_ % q_};
}

FieldElem FieldCtx::from_index(std::uint64_t index) const {
  if (index >= q_) throw ConfigError("field element index out of range");
  return FieldElem{static_cast<std::uint32_t>(index)};
}

FieldElem FieldCtx::from_int(std::int64_t n) const {
  const std::int64_t r = ((n % static_cast<std::int64_t>(p_)) + p_) % p_;
  return FieldElem{static_cast<std::uint32_t>(r)};
}

std::vector<std::uint32_t> FieldCtx::coords(FieldElem a) const {
  std::vector<std::uint32_t> out(s_);
  std::uint32_t v = a.index;
  for (std::uint32_t i = 0; i < s_; ++i) {
    out[i] = v % p_;
    v /= p_;
  }
  return out;
}

FieldElem FieldCtx::from_coords(std::span<const std::uint32_t> c) const {
  std::uint32_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + c[i] % p_;
  return FieldElem{v};
}

FieldElem FieldCtx::add_digits(FieldElem a, FieldElem b) const {
  if (p_ == 2) return FieldElem{a.index ^ b.index};
  std::uint32_t x = a.index, y = b.index, out = 0, place = 1;
  for (std::uint32_t i = 0; i < s_; ++i) {
    out += ((x % p_ + y % p_) % p_) * place;
    x /= p_;
    y /= p_;
    place *= p_;
  }
  return FieldElem{out};
}

FieldElem FieldCtx::neg_digits(FieldElem a) const {
  if (p_ == 2) return a;
  std::uint32_t x = a.index, out = 0, place = 1;
  for (std::uint32_t i = 0; i < s_; ++i) {
    out += ((p_ - x % p_) % p_) * place;
    x /= p_;
    place *= p_;
  }
  return FieldElem{out};
}

FieldElem FieldCtx::mul_polynomial_basis(FieldElem a, FieldElem b) const {
  Coeffs prod = poly_mul(coords(a), coords(b), p_);
  if (prod.size() > s_) prod = poly_mod(std::move(prod), modulus_, p_);
  prod.resize(s_, 0);
  return from_coords(prod);
}

FieldElem FieldCtx::add(FieldElem a, FieldElem b) const {
  if (!add_table_.empty()) return FieldElem{add_table_[std::size_t{a.index} * q_ + b.index]};
  return add_digits(a, b);
}

FieldElem FieldCtx::neg(FieldElem a) const { return neg_digits(a); }

FieldElem FieldCtx::sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

FieldElem FieldCtx::mul(FieldElem a, FieldElem b) const {
  if (!mul_table_.empty()) return FieldElem{mul_table_[std::size_t{a.index} * q_ + b.index]};
  if (!exp_.empty()) {
    if (a.index == 0 || b.index == 0) return zero();
    return FieldElem{exp_[std::size_t{log_[a.index]} + log_[b.index]]};
  }
  return mul_polynomial_basis(a, b);
}

FieldElem FieldCtx::pow(FieldElem a, std::uint64_t k) const {
  FieldElem r = one();
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

FieldElem FieldCtx::inv(FieldElem a) const {
  if (a.index == 0) throw Error("inverse of zero in " + name());
  return pow(a, std::uint64_t{q_} - 2);
}

std::uint32_t FieldCtx::trace_slow(FieldElem a) const {
  FieldElem acc = zero();
  FieldElem term = a;
  for (std::uint32_t i = 0; i < s_; ++i) {
    acc = add(acc, term);
    term = pow(term, p_);
  }
  if (acc.index >= p_) throw Error("trace left the prime subfield");
  return acc.index;
}

std::uint32_t FieldCtx::trace(FieldElem a) const {
  if (!trace_table_.empty()) return trace_table_[a.index];
  return trace_slow(a);
}

bool FieldCtx::is_unit_exponent(std::uint64_t k) const {
  return std::gcd(k, std::uint64_t{q_} - 1) == 1;
}

}  // namespace polyinc
