#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyinc/ffield.hpp"

namespace polyinc {

/// Enumeration limits shared by everything that walks a polynomial space.
struct Budget {
  std::uint64_t max_elements = std::uint64_t{1} << 22;  // |V| = q^dim
  std::uint64_t max_points = std::uint64_t{1} << 16;    // q^m
};

using Exponent = std::vector<std::uint32_t>;

/// The finite exponent set I of a monomial-supported polynomial space.
///
/// Exponents are kept in graded order: by total degree, then lexicographically
/// with x_1 > x_2 > ... (so V_{2,1} is ordered 1, x_1, x_2). Poly coefficient
/// vectors are indexed in this order.
class MonomialSupport {
 public:
  MonomialSupport(std::uint32_t m, std::vector<Exponent> exponents);

  /// All exponents of total degree <= r ("full:m,r").
  static MonomialSupport full(std::uint32_t m, std::uint32_t r);
  /// x_1 * V_{m,r-1} ("x1-shifted:m,r"), r >= 1.
  static MonomialSupport x1_shifted(std::uint32_t m, std::uint32_t r);
  /// Accepts a preset string or `{"m": int, "exponents": [[int]]}`.
  static MonomialSupport parse(const nlohmann::json& j);

  std::uint32_t m() const { return m_; }
  std::size_t dim() const { return exponents_.size(); }
  const std::vector<Exponent>& exponents() const { return exponents_; }
  const Exponent& operator[](std::size_t i) const { return exponents_[i]; }
  std::optional<std::size_t> index_of(const Exponent& e) const;

  /// Preset name when built from one, otherwise the compact JSON.
  std::string descriptor() const;
  nlohmann::json to_json() const;

  friend bool operator==(const MonomialSupport& a, const MonomialSupport& b) {
    return a.m_ == b.m_ && a.exponents_ == b.exponents_;
  }

 private:
  std::uint32_t m_;
  std::vector<Exponent> exponents_;
  std::string preset_;
};

/// A polynomial of a PolySpace: coefficient vector over the support order.
struct Poly {
  std::vector<FieldElem> coeffs;

  friend bool operator==(const Poly&, const Poly&) = default;
};

struct PropertyStar {
  bool holds = false;
  /// Chosen pure-power exponents k_1..k_m when `holds`.
  std::vector<std::uint32_t> k;
  /// Failing condition when not `holds`.
  std::string reason;
};

/// V subset of F_q[x_1..x_m] spanned by the monomials of a support.
///
/// Polynomials are encoded as integers in [0, q^dim): coefficient i (in
/// support order) is the base-q digit i, least significant first. This is the
/// odometer enumeration order and also the element encoding of the additive
/// group of V used by the Cayley graph.
class PolySpace {
 public:
  PolySpace(FieldPtr field, MonomialSupport support, Budget budget = {});

  const FieldCtx& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  const MonomialSupport& support() const { return support_; }
  const Budget& budget() const { return budget_; }
  std::uint32_t m() const { return support_.m(); }
  std::size_t dim() const { return support_.dim(); }
  std::uint64_t q() const { return field_->q(); }
  /// |V| = q^dim.
  std::uint64_t size() const { return size_; }
  /// q^m; throws SizeLimitError when above the point budget.
  std::uint64_t num_points() const;

  Poly decode(std::uint64_t index) const;
  std::uint64_t encode(const Poly& f) const;
  Poly zero_poly() const;
  Poly add(const Poly& a, const Poly& b) const;
  Poly sub(const Poly& a, const Poly& b) const;
  /// Encoded difference, f - g.
  std::uint64_t sub_index(std::uint64_t f, std::uint64_t g) const;

  std::vector<FieldElem> decode_point(std::uint64_t index, std::uint32_t len) const;
  std::uint64_t encode_point(std::span<const FieldElem> point) const;

  PropertyStar property_star() const;
  std::uint32_t max_total_degree() const;

  /// sum_i f_i * prod_j point_j^{i_j}, with 0^0 = 1.
  FieldElem evaluate(const Poly& f, std::span<const FieldElem> point) const;
  /// Values of f at every point of F_q^m, in point-index order.
  std::vector<FieldElem> evaluations(const Poly& f) const;
  /// N_q(f) by full enumeration of F_q^m.
  std::uint64_t count_zeros(const Poly& f) const;
  /// |{f in V : f(alpha) = 0}| by enumerating V.
  std::uint64_t vanishing_count(std::span<const FieldElem> alpha) const;
  /// p_{C,alpha} = C * sum_{i in I} alpha^i x^i; satisfies <p, f> = C f(alpha).
  Poly annihilator_poly(FieldElem c, std::span<const FieldElem> alpha) const;

  /// <f, g> = sum_i f_i g_i over F_q.
  FieldElem inner(const Poly& f, const Poly& g) const;
  /// Tr(<f, g>) in [0, p): the exponent of the additive character chi_f(g).
  std::uint32_t trace_pairing(const Poly& f, const Poly& g) const;

  /// Monomial values alpha^i for every point alpha: row alpha, column i.
  std::span<const FieldElem> monomial_row(std::uint64_t point_index) const;

  std::string describe_name() const;

 private:
  FieldElem monomial_value(const Exponent& e, std::span<const FieldElem> point) const;

  FieldPtr field_;
  MonomialSupport support_;
  Budget budget_;
  std::uint64_t size_ = 0;
  std::uint64_t points_ = 0;  // 0 when q^m exceeds the point budget
  std::vector<FieldElem> monomials_;
};

PolySpace make_full_space(FieldPtr field, std::uint32_t m, std::uint32_t r,
                          Budget budget = {});

/// Checked power; returns nullopt on 64-bit overflow.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp);

}  // namespace polyinc
