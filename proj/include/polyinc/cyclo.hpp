#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polyinc {

/// Exact element of Z[zeta_p] for a prime p.
///
/// Stored in the basis 1, zeta, ..., zeta^{p-2}; the zeta^{p-1} coordinate is
/// always eliminated through 1 + zeta + ... + zeta^{p-1} = 0, so two values
/// are equal iff their coefficient vectors are. Arithmetic is checked 64-bit
/// and throws OverflowError instead of wrapping.
class CycInt {
 public:
  /// Zero of Z[zeta_p].
  explicit CycInt(std::uint32_t p);
  /// The rational integer n.
  CycInt(std::uint32_t p, std::int64_t n);

  /// zeta_p^{e mod p}.
  static CycInt root(std::uint32_t p, std::int64_t e);
  /// Canonical form of sum_i buckets[i] zeta^i; `buckets` has length p.
  static CycInt from_exponent_buckets(std::uint32_t p,
                                      std::span<const std::int64_t> buckets);
  /// Takes coefficients already in canonical basis (length p-1).
  static CycInt from_canonical(std::uint32_t p, std::vector<std::int64_t> coeffs);

  std::uint32_t p() const { return p_; }
  const std::vector<std::int64_t>& coeffs() const { return coeffs_; }

  /// n iff the value is the rational integer n.
  std::optional<std::int64_t> as_integer() const;
  std::complex<double> to_complex() const;
  bool is_zero() const;

  CycInt conj() const;
  /// Multiplication by zeta^k, a coordinate rotation.
  CycInt times_root(std::int64_t k) const;

  CycInt& operator+=(const CycInt& rhs);
  CycInt& operator-=(const CycInt& rhs);
  CycInt operator-() const;
  friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
  friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
  friend CycInt operator*(const CycInt& a, const CycInt& b);
  friend bool operator==(const CycInt& a, const CycInt& b) = default;

  std::string to_string() const;

 private:
  void check_same_order(const CycInt& other) const;

  std::uint32_t p_;
  std::vector<std::int64_t> coeffs_;
};

inline CycInt cyc_from_root(std::uint32_t p, std::int64_t e) { return CycInt::root(p, e); }
inline CycInt cyc_add(const CycInt& z, const CycInt& w) { return z + w; }
inline CycInt cyc_neg(const CycInt& z) { return -z; }
inline CycInt cyc_mul(const CycInt& z, const CycInt& w) { return z * w; }
inline CycInt cyc_conj(const CycInt& z) { return z.conj(); }
inline std::optional<std::int64_t> cyc_as_integer(const CycInt& z) { return z.as_integer(); }
inline std::complex<double> cyc_to_complex(const CycInt& z) { return z.to_complex(); }

struct CycIntHash {
  std::size_t operator()(const CycInt& z) const noexcept;
};

namespace checked {
std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t sub(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);
}  // namespace checked

}  // namespace polyinc
