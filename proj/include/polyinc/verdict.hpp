#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "json.hpp"

namespace polyinc {

/// Reduced fraction with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Left-hand side of a verdict: exact integer, exact rational or a double.
using VerdictValue = std::variant<std::int64_t, Rational, double>;

double to_double(const VerdictValue& v);
/// Integers and doubles as JSON numbers, non-integral rationals as "n/d".
nlohmann::ordered_json value_to_json(const VerdictValue& v);
std::string value_to_string(const VerdictValue& v);

/// Outcome of checking one inequality on one instance.
///
/// `holds` is decided by the producer (exactly where possible); `lhs` and
/// `rhs` are reported for inspection. `params` carries everything needed to
/// re-derive the verdict.
struct BoundVerdict {
  std::string theorem;
  VerdictValue lhs = std::int64_t{0};
  double rhs = 0.0;
  double main_term = 0.0;
  bool holds = false;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;

  /// `{"theorem", "params", "lhs", "rhs", "holds", "seed"}`; the main term is
  /// stored under params.main_term.
  nlohmann::ordered_json to_json() const;
};

}  // namespace polyinc
