#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyinc/cyclo.hpp"
#include "polyinc/ffield.hpp"
#include "polyinc/verdict.hpp"

namespace polyinc {

using GroupElem = std::uint64_t;

/// Finite abelian group, written additively, with a fixed labelling of its
/// characters by group elements (chi_g).
///
/// Elements are mixed-radix integers, first coordinate least significant.
/// Three flavours:
///  - vector(p, n): (Z_p)^n, chi_g(h) = zeta_p^{sum_j g_j h_j}.
///  - vector over a field: (F_q)^d viewed as (Z_p)^{s d}, with
///    chi_g(h) = zeta_p^{Tr(sum_i g_i h_i)}. Same element encoding as
///    vector(p, s d).
///  - product(n_1..n_k): Z_{n_1} x ... x Z_{n_k}, numeric characters only.
class GroupDesc {
 public:
  enum class Kind { vector, product };

  static GroupDesc vector(std::uint32_t p, std::uint32_t n);
  static GroupDesc vector_over_field(FieldPtr field, std::uint32_t dim);
  static GroupDesc product(std::vector<std::uint64_t> orders);
  /// `{"kind":"vector","p":3,"n":3}` or `{"kind":"product","orders":[4,6]}`.
  static GroupDesc from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Kind kind() const { return kind_; }
  bool is_vector() const { return kind_ == Kind::vector; }
  std::uint64_t order() const { return order_; }
  /// Exponent of a vector group.
  std::uint32_t p() const { return p_; }
  /// Number of Z_p coordinates of a vector group.
  std::uint32_t n() const { return static_cast<std::uint32_t>(radices_.size()) * s_; }
  const FieldCtx* field() const { return field_.get(); }

  GroupElem add(GroupElem a, GroupElem b) const;
  GroupElem neg(GroupElem a) const;
  GroupElem sub(GroupElem a, GroupElem b) const { return add(a, neg(b)); }

  /// Coordinates in pairing units: base p digits, base q digits for a
  /// field-backed group, or the Z_{n_j} components of a product group.
  std::vector<std::uint32_t> coordinates(GroupElem a) const;
  void coordinates(GroupElem a, std::span<std::uint32_t> out) const;
  std::size_t num_coordinates() const { return radices_.size(); }

  /// Vector groups: the exponent e in [0, p) with chi_g(h) = zeta_p^e.
  std::uint32_t pairing(GroupElem g, GroupElem h) const;
  std::uint32_t pairing_coords(std::span<const std::uint32_t> g,
                               std::span<const std::uint32_t> h) const;
  /// Any group: chi_g(h) = exp(2 pi i k / phase_denominator()).
  std::uint64_t phase_numerator(std::span<const std::uint32_t> g,
                                std::span<const std::uint32_t> h) const;
  std::uint64_t phase_denominator() const { return lcm_; }

 private:
  GroupDesc() = default;

  Kind kind_ = Kind::vector;
  std::uint32_t p_ = 0;
  std::uint32_t s_ = 1;  // Z_p coordinates per pairing coordinate
  std::vector<std::uint64_t> radices_;
  std::uint64_t order_ = 1;
  std::uint64_t lcm_ = 1;
  FieldPtr field_;
  std::shared_ptr<const std::vector<std::uint32_t>> trace_product_;  // Tr(a b)
};

/// Connection function c : G -> C of a Cayley color graph, stored as a table.
class ConnectionFunction {
 public:
  ConnectionFunction(GroupDesc group, std::vector<std::int64_t> values);
  ConnectionFunction(GroupDesc group, std::vector<std::complex<double>> values);
  /// Table as a JSON array of integers, of numbers, or of [re, im] pairs.
  static ConnectionFunction from_json(const nlohmann::json& group,
                                      const nlohmann::json& table);

  const GroupDesc& group() const { return group_; }
  bool is_integer() const { return !ints_.empty(); }
  /// Integer table on a vector group: all spectral values are cyclotomic integers.
  bool is_exact() const { return is_integer() && group_.is_vector(); }
  /// c(g) = conj(c(-g)) for every g, verified at construction.
  bool hermitian() const { return hermitian_; }

  std::complex<double> value(GroupElem g) const { return complex_[g]; }
  std::int64_t int_value(GroupElem g) const;
  const std::vector<std::int64_t>& int_values() const { return ints_; }
  const std::vector<std::complex<double>>& values() const { return complex_; }

  std::complex<double> total() const;
  std::int64_t int_total() const;
  double max_abs() const;

 private:
  void check_hermitian();

  GroupDesc group_;
  std::vector<std::int64_t> ints_;
  std::vector<std::complex<double>> complex_;
  bool hermitian_ = false;
};

/// A character value or Fourier coefficient: exact when available, with a
/// numeric view always filled in.
struct SpectralValue {
  std::optional<CycInt> exact;
  std::complex<double> approx;

  static SpectralValue of(CycInt z);
  static SpectralValue of(std::complex<double> z);
  double abs() const { return std::abs(approx); }
  std::string to_string() const;
  nlohmann::ordered_json to_json() const;
};

struct SpectrumClass {
  SpectralValue value;
  std::uint64_t multiplicity = 0;
};

struct SpectrumReport {
  bool exact = false;
  /// coefficients[g] = c^(chi_g), the eigenvalue of the character chi_g.
  std::vector<SpectralValue> coefficients;
  /// Distinct eigenvalues with multiplicities, largest real part first.
  std::vector<SpectrumClass> classes;
  /// max |c^(chi)| over non-trivial characters.
  double lambda = 0.0;

  const SpectralValue& trivial() const { return coefficients.at(0); }
  /// Characters whose eigenvalue is the rational integer n (exact reports).
  std::vector<GroupElem> characters_with_integer(std::int64_t n) const;
  nlohmann::ordered_json to_json(bool include_entries = false) const;
};

enum class TransformMethod { naive, fast };

struct SpectrumOptions {
  TransformMethod method = TransformMethod::naive;
  /// Largest |G| accepted by the O(|G|^2) transform.
  std::uint64_t max_naive_order = std::uint64_t{1} << 14;
  /// Absolute clustering radius for numeric spectra, scaled by max(1, |G| max|c|).
  double cluster_tolerance = 1e-9;
};

SpectralValue character_value(const GroupDesc& group, GroupElem g, GroupElem h);
SpectralValue fourier_coefficient(const ConnectionFunction& c, GroupElem g);
std::vector<SpectralValue> fourier_transform_naive(const ConnectionFunction& c);
/// Radix-p transform, exact; vector groups with integer tables only.
std::vector<CycInt> fourier_transform_fast(const ConnectionFunction& c);
SpectrumReport spectrum(const ConnectionFunction& c, SpectrumOptions options = {});

/// e_c(S, T) = sum_{x in S, y in T} c(x - y), exact for integer tables.
std::int64_t edge_weight_exact(const ConnectionFunction& c, std::span<const GroupElem> S,
                               std::span<const GroupElem> T);
std::complex<double> edge_weight(const ConnectionFunction& c, std::span<const GroupElem> S,
                                 std::span<const GroupElem> T);

struct MixingBound {
  std::complex<double> main_term;
  double error_term = 0.0;
};

/// main = (sum_g c(g)) |S||T| / |G|,
/// error = lambda sqrt(|S||T| (1 - |S|/|G|)(1 - |T|/|G|)).
MixingBound mixing_bound(const ConnectionFunction& c, double lambda, std::uint64_t s_size,
                         std::uint64_t t_size);

/// Checks |e_c(S,T) - main| <= error + rel_slack * |G| max|c|.
BoundVerdict verify_mixing(const ConnectionFunction& c, const SpectrumReport& spec,
                           std::span<const GroupElem> S, std::span<const GroupElem> T,
                           double rel_slack = 1e-9);

/// sqrt(|G| Var_{g ~ G} |c(g)|); requires a hermitian connection function.
double variance_lower_bound(const ConnectionFunction& c);

/// Multiplies the adjacency matrix into chi_g and compares with c^(chi_g) chi_g,
/// exactly in exact mode. Limited to |G| <= 2048.
bool oracle_eigencheck(const ConnectionFunction& c, GroupElem g);

}  // namespace polyinc
