#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shiftforge/circuit.hpp"
#include "shiftforge/limits.hpp"
#include "shiftforge/sparse_poly.hpp"

namespace shiftforge {

/// Product of d variable-disjoint copies of a base polynomial.
struct AmplifiedInstance {
  SparsePoly polynomial;
  std::size_t copies = 0;
  SparsePoly base;
  /// Copy k occupies catalog positions [first, second).
  std::vector<std::pair<std::size_t, std::size_t>> copy_layout;
  std::size_t base_circuit_size = 0;
  /// Size of the product circuit: d copies of the base circuit plus one product gate.
  std::size_t circuit_size = 0;
  /// sparsity == base sparsity^d; always true over integral domains.
  bool multiplicative = true;

  std::size_t base_nvars() const { return base.nvars(); }
};

/// Multiplies d block-renamed copies of `base`. Copy k takes positions
/// [k*N', (k+1)*N') and names `<name>__c<k>`.
inline AmplifiedInstance amplify(const SparsePoly& base, std::size_t d,
                                 std::uint64_t term_cap = default_term_cap(),
                                 std::optional<std::size_t> base_circuit_size = std::nullopt) {
  if (d < 1) throw DomainError("copy count must be at least 1");
  const std::size_t nv = base.nvars(), total = nv * d;
  double predicted = 1.0;
  for (std::size_t k = 0; k < d; ++k) predicted *= static_cast<double>(base.sparsity());
  if (predicted > static_cast<double>(term_cap))
    throw CapExceeded("sigma^d = " + std::to_string(base.sparsity()) + "^" + std::to_string(d) +
                      " exceeds the term cap (" + std::to_string(term_cap) + ")");

  std::vector<std::string> names;
  AmplifiedInstance inst;
  for (std::size_t k = 0; k < d; ++k) {
    for (const auto& n : base.names()) names.push_back(n + "__c" + std::to_string(k));
    inst.copy_layout.emplace_back(k * nv, (k + 1) * nv);
  }
  SparsePoly product = SparsePoly::constant(base.ring(), total, base.ring().one());
  for (std::size_t k = 0; k < d; ++k) product *= base.embed(total, k * nv);
  product.set_names(names);

  std::uint64_t expected = 1;
  for (std::size_t k = 0; k < d; ++k) expected *= base.sparsity();
  inst.multiplicative = product.sparsity() == expected;
  if (base.ring().is_integral_domain() && !inst.multiplicative)
    throw InternalConsistency("disjoint product over an integral domain lost terms");

  inst.polynomial = std::move(product);
  inst.copies = d;
  inst.base = base;
  inst.base_circuit_size = base_circuit_size ? *base_circuit_size : circuit_from_sparse(base).size();
  inst.circuit_size = inst.base_circuit_size * d + 1;
  return inst;
}

/// Shifts copy k by per_copy[k]; equal to shifting the product by the
/// concatenated vector, but each factor is expanded separately.
inline SparsePoly amplified_shift(const AmplifiedInstance& inst,
                                  std::span<const std::vector<RingElement>> per_copy) {
  if (per_copy.size() != inst.copies)
    throw ArityMismatch("expected " + std::to_string(inst.copies) + " per-copy shifts");
  const std::size_t nv = inst.base_nvars(), total = nv * inst.copies;
  SparsePoly product = SparsePoly::constant(inst.base.ring(), total, inst.base.ring().one());
  for (std::size_t k = 0; k < inst.copies; ++k) {
    if (per_copy[k].size() != nv) throw ArityMismatch("per-copy shift does not match the base arity");
    product *= inst.base.shift(per_copy[k]).embed(total, k * nv);
  }
  product.set_names(inst.polynomial.names());
  return product;
}

/// alpha = (4 - delta) / (3 + epsilon + 1/m): the gap of the Max-3Lin reduction.
inline Rational gap_alpha(const Rational& epsilon, const Rational& delta, std::uint64_t m) {
  if (epsilon < 0 || epsilon >= 1 || delta < 0 || delta >= 1)
    throw DomainError("epsilon and delta must lie in [0, 1)");
  if (m < 1) throw DomainError("equation count must be at least 1");
  return (Rational(4) - delta) / (Rational(3) + epsilon + Rational(1) / Rational(m));
}

/// Smallest d >= 1 with (sigma / (sigma - 1))^d >= target_gap, by exact powering.
inline std::size_t choose_d(std::uint64_t sigma, const Rational& target_gap) {
  if (sigma < 2) throw DomainError("sigma must be at least 2; a 1-sparse polynomial cannot be amplified");
  if (target_gap <= 1) throw DomainError("target gap must exceed 1");
  const Rational ratio = Rational(sigma) / Rational(sigma - 1);
  Rational power = ratio;
  std::size_t d = 1;
  while (power < target_gap) {
    power *= ratio;
    ++d;
  }
  return d;
}

struct GapParams {
  Rational epsilon, delta;
  std::uint64_t m = 0;
  Rational alpha;
  std::size_t d = 1;
  /// YES: some shift leaves at most t_yes monomials, t_yes = floor(((3+eps)m + 1)^d).
  BigInt t_yes;
  /// NO: every shift leaves at least t_no non-constant monomials, t_no = ceil(((4-delta)m)^d).
  BigInt t_no;
  /// alpha > 1.
  bool valid = false;
};

namespace detail {

inline BigInt floor_q(const Rational& r) {
  BigInt n = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  BigInt q = n / den;
  if (n < 0 && q * den != n) q -= 1;
  return q;
}

inline BigInt ceil_q(const Rational& r) { return -floor_q(-r); }

inline Rational pow_q(Rational base, std::size_t d) {
  Rational out = 1;
  for (std::size_t k = 0; k < d; ++k) out *= base;
  return out;
}

}  // namespace detail

inline GapParams gap_params(const Rational& epsilon, const Rational& delta, std::uint64_t m, std::size_t d = 1) {
  if (d < 1) throw DomainError("copy count must be at least 1");
  GapParams g;
  g.epsilon = epsilon;
  g.delta = delta;
  g.m = m;
  g.alpha = gap_alpha(epsilon, delta, m);
  g.d = d;
  g.t_yes = detail::floor_q(detail::pow_q((Rational(3) + epsilon) * m + 1, d));
  g.t_no = detail::ceil_q(detail::pow_q((Rational(4) - delta) * m, d));
  g.valid = g.alpha > 1;
  return g;
}

/// Canonical rational text, "a/b" or "a".
inline std::string rational_text(const Rational& r) {
  return RingSpec::rationals().from_rational(r).to_string();
}

inline Rational parse_rational(std::string_view text) {
  return parse_element(RingSpec::rationals(), text).rational();
}

}  // namespace shiftforge
