#include "polyinc/cyclo.hpp"

#include <cmath>
#include <numbers>

#include "polyinc/errors.hpp"
#include "polyinc/ffield.hpp"

namespace polyinc {

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in addition");
  return r;
}

std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 overflow in subtraction");
  return r;
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in multiplication");
  return r;
}

}  // namespace checked

namespace {

std::uint32_t reduce_exp(std::int64_t e, std::uint32_t p) {
  const auto pp = static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(((e % pp) + pp) % pp);
}

}  // namespace

CycInt::CycInt(std::uint32_t p) : p_(p), coeffs_(p - 1, 0) {
  if (!is_prime(p)) throw ConfigError("cyclotomic order must be prime");
}

CycInt::CycInt(std::uint32_t p, std::int64_t n) : CycInt(p) { coeffs_[0] = n; }

CycInt CycInt::root(std::uint32_t p, std::int64_t e) {
  CycInt z(p);
  const std::uint32_t k = reduce_exp(e, p);
  if (k == p - 1) {
    for (auto& c : z.coeffs_) c = -1;
  } else {
    z.coeffs_[k] = 1;
  }
  return z;
}

CycInt CycInt::from_exponent_buckets(std::uint32_t p,
                                     std::span<const std::int64_t> buckets) {
  if (buckets.size() != p) throw ConfigError("exponent bucket count must equal p");
  CycInt z(p);
  const std::int64_t top = buckets[p - 1];
  for (std::uint32_t i = 0; i + 1 < p; ++i) z.coeffs_[i] = checked::sub(buckets[i], top);
  return z;
}

CycInt CycInt::from_canonical(std::uint32_t p, std::vector<std::int64_t> coeffs) {
  CycInt z(p);
  if (coeffs.size() != p - 1) throw ConfigError("canonical coefficient count must equal p-1");
  z.coeffs_ = std::move(coeffs);
  return z;
}

void CycInt::check_same_order(const CycInt& other) const {
  if (p_ != other.p_) {
    throw IncompatibleOrderError("incompatible cyclotomic orders: " + std::to_string(p_) +
                                 " vs " + std::to_string(other.p_));
  }
}

std::optional<std::int64_t> CycInt::as_integer() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) return std::nullopt;
  }
  return coeffs_[0];
}

bool CycInt::is_zero() const {
  for (auto c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

std::complex<double> CycInt::to_complex() const {
  std::complex<double> acc{0.0, 0.0};
  for (std::uint32_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const double angle = 2.0 * std::numbers::pi * i / p_;
    acc += static_cast<double>(coeffs_[i]) * std::complex<double>{std::cos(angle), std::sin(angle)};
  }
  return acc;
}

CycInt CycInt::times_root(std::int64_t k) const {
  std::vector<std::int64_t> buckets(p_, 0);
  const std::uint32_t shift = reduce_exp(k, p_);
  for (std::uint32_t i = 0; i + 1 < p_; ++i) buckets[(i + shift) % p_] = coeffs_[i];
  return from_exponent_buckets(p_, buckets);
}

CycInt CycInt::conj() const {
  // zeta^i -> zeta^{p-i}
  std::vector<std::int64_t> buckets(p_, 0);
  for (std::uint32_t i = 0; i + 1 < p_; ++i) buckets[(p_ - i) % p_] = coeffs_[i];
  return from_exponent_buckets(p_, buckets);
}

CycInt& CycInt::operator+=(const CycInt& rhs) {
  check_same_order(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = checked::add(coeffs_[i], rhs.coeffs_[i]);
  return *this;
}

CycInt& CycInt::operator-=(const CycInt& rhs) {
  check_same_order(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = checked::sub(coeffs_[i], rhs.coeffs_[i]);
  return *this;
}

CycInt CycInt::operator-() const {
  CycInt z(p_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) z.coeffs_[i] = checked::sub(0, coeffs_[i]);
  return z;
}

CycInt operator*(const CycInt& a, const CycInt& b) {
  a.check_same_order(b);
  const std::uint32_t p = a.p_;
  std::vector<std::int64_t> buckets(p, 0);
  for (std::uint32_t i = 0; i + 1 < p; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::uint32_t j = 0; j + 1 < p; ++j) {
      if (b.coeffs_[j] == 0) continue;
      auto& slot = buckets[(i + j) % p];
      slot = checked::add(slot, checked::mul(a.coeffs_[i], b.coeffs_[j]));
    }
  }
  return CycInt::from_exponent_buckets(p, buckets);
}

std::string CycInt::to_string() const {
  if (auto n = as_integer()) return std::to_string(*n);
  std::string out;
  for (std::uint32_t i = 0; i < coeffs_.size(); ++i) {
    const auto c = coeffs_[i];
    if (c == 0) continue;
    if (!out.empty()) out += c > 0 ? "+" : "-";
    else if (c < 0) out += "-";
    const auto mag = c < 0 ? -c : c;
    if (i == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += "z" + std::to_string(p_);
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

std::size_t CycIntHash::operator()(const CycInt& z) const noexcept {
  std::size_t h = std::hash<std::uint32_t>{}(z.p());
  for (auto c : z.coeffs()) {
    h ^= std::hash<std::int64_t>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace polyinc
