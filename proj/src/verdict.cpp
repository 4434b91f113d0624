#include "polyinc/verdict.hpp"

#include <numeric>

#include "polyinc/errors.hpp"

namespace polyinc {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const auto g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

double to_double(const VerdictValue& v) {
  return std::visit(
      [](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Rational>) {
          return x.to_double();
        } else {
          return static_cast<double>(x);
        }
      },
      v);
}

nlohmann::ordered_json value_to_json(const VerdictValue& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Rational>) {
          if (x.den == 1) return x.num;
          return x.to_string();
        } else {
          return x;
        }
      },
      v);
}

std::string value_to_string(const VerdictValue& v) {
  const auto j = value_to_json(v);
  return j.is_string() ? j.get<std::string>() : j.dump();
}

nlohmann::ordered_json BoundVerdict::to_json() const {
  nlohmann::ordered_json p = params;
  p["main_term"] = main_term;
  nlohmann::ordered_json out;
  out["theorem"] = theorem;
  out["params"] = std::move(p);
  out["lhs"] = value_to_json(lhs);
  out["rhs"] = rhs;
  out["holds"] = holds;
  out["seed"] = seed;
  return out;
}

}  // namespace polyinc
