#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace polyinc {

/// Element of GF(p^s), stored as the base-p integer of its polynomial-basis
/// coordinates (a_0 + a_1 p + ... + a_{s-1} p^{s-1}).
struct FieldElem {
  std::uint32_t index = 0;

  friend auto operator<=>(const FieldElem&, const FieldElem&) = default;
};

/// Arithmetic context for GF(p^s). Immutable after construction.
///
/// For q <= 256 full addition and multiplication tables are built; up to
/// q <= 65536 multiplication goes through discrete log tables, and beyond that
/// everything is computed in the polynomial basis.
class FieldCtx {
 public:
  /// Builds GF(p^s). Without an explicit modulus the built-in Conway
  /// polynomial is used (available for p <= 13, s <= 4). `modulus` holds s+1
  /// coefficients, constant term first, and must be monic and irreducible.
  FieldCtx(std::uint32_t p, std::uint32_t s,
           std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  static std::shared_ptr<const FieldCtx> make(
      std::uint32_t p, std::uint32_t s,
      std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  /// Parses `{"p": int, "s": int, "modulus": [int]}` (`s` and `modulus`
  /// optional).
  static std::shared_ptr<const FieldCtx> from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::uint32_t p() const { return p_; }
  std::uint32_t s() const { return s_; }
  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  bool has_tables() const { return !add_table_.empty(); }

  /// "GF(3)" or "GF(2^2)".
  std::string name() const;

  FieldElem zero() const { return FieldElem{0}; }
  FieldElem one() const { return FieldElem{1}; }
  /// The field element represented by the polynomial t (the basis generator).
  FieldElem generator_t() const;
  FieldElem from_index(std::uint64_t index) const;
  /// Image of the integer n in the prime subfield.
  FieldElem from_int(std::int64_t n) const;

  FieldElem add(FieldElem a, FieldElem b) const;
  FieldElem sub(FieldElem a, FieldElem b) const;
  FieldElem neg(FieldElem a) const;
  FieldElem mul(FieldElem a, FieldElem b) const;
  /// Multiplicative inverse; throws for zero.
  FieldElem inv(FieldElem a) const;
  /// a^k with 0^0 = 1.
  FieldElem pow(FieldElem a, std::uint64_t k) const;

  /// Absolute trace Tr(a) = a + a^p + ... + a^{p^{s-1}} as an integer in [0, p).
  std::uint32_t trace(FieldElem a) const;

  /// true iff gcd(k, q-1) = 1, i.e. x -> x^k permutes the nonzero elements.
  bool is_unit_exponent(std::uint64_t k) const;

  /// Polynomial-basis coordinates (length s).
  std::vector<std::uint32_t> coords(FieldElem a) const;
  FieldElem from_coords(std::span<const std::uint32_t> coords) const;

  /// Reference polynomial-basis product, independent of any table.
  FieldElem mul_polynomial_basis(FieldElem a, FieldElem b) const;

 private:
  FieldElem add_digits(FieldElem a, FieldElem b) const;
  FieldElem neg_digits(FieldElem a) const;
  std::uint32_t trace_slow(FieldElem a) const;

  std::uint32_t p_;
  std::uint32_t s_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;

  std::vector<std::uint16_t> add_table_;
  std::vector<std::uint16_t> mul_table_;
  std::vector<std::uint32_t> log_;  // log_[a] for a != 0
  std::vector<std::uint32_t> exp_;  // exp_[i] = g^i, length 2(q-1)
  std::vector<std::uint32_t> trace_table_;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

/// Built-in Conway polynomial for GF(p^s), constant term first, or nullopt
/// when (p, s) is outside the table.
std::optional<std::vector<std::uint32_t>> conway_polynomial(std::uint32_t p,
                                                            std::uint32_t s);

bool is_prime(std::uint64_t n);

/// Irreducibility of a monic polynomial over GF(p) (constant term first).
bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p);

}  // namespace polyinc
