#pragma once

// Random generators and brute-force helpers shared by the test binaries.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "shiftforge/shiftforge.hpp"

namespace sft {

using namespace shiftforge;

inline std::vector<RingSpec> sample_rings() {
  return {RingSpec::integers(), RingSpec::rationals(), RingSpec::prime_field(5), RingSpec::prime_field(7),
          RingSpec::modular(6)};
}

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline RingElement random_element(std::mt19937_64& rng, const RingSpec& ring, std::int64_t bound = 5) {
  if (ring.is_finite()) return ring.from_int(uniform(rng, 0, ring.modulus() - 1));
  if (ring.kind() == RingKind::Rationals)
    return ring.from_rational(Rational(uniform(rng, -bound, bound)) / Rational(uniform(rng, 1, bound)));
  return ring.from_int(uniform(rng, -bound, bound));
}

inline std::vector<RingElement> random_vector(std::mt19937_64& rng, const RingSpec& ring, std::size_t n,
                                              std::int64_t bound = 5) {
  std::vector<RingElement> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_element(rng, ring, bound));
  return v;
}

inline SparsePoly random_poly(std::mt19937_64& rng, const RingSpec& ring, std::size_t nvars, std::size_t max_terms,
                              std::uint32_t max_deg, std::int64_t bound = 5) {
  SparsePoly p(ring, nvars);
  std::size_t terms = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(max_terms)));
  for (std::size_t k = 0; k < terms; ++k) {
    Monomial m(nvars, 0);
    std::uint32_t budget = static_cast<std::uint32_t>(uniform(rng, 0, max_deg));
    for (std::uint32_t d = 0; d < budget && nvars > 0; ++d) ++m[uniform(rng, 0, static_cast<std::int64_t>(nvars) - 1)];
    p.add_term(m, random_element(rng, ring, bound));
  }
  return p;
}

inline EquationSystem random_system(std::mt19937_64& rng, const RingSpec& ring, std::size_t n, std::size_t r,
                                    std::size_t max_terms, std::uint32_t max_deg) {
  EquationSystem s = EquationSystem::over(ring, detail::default_names(n));
  for (std::size_t i = 0; i < r; ++i) s.add_equation(random_poly(rng, ring, n, max_terms, max_deg));
  return s;
}

/// Random circuit with `size` nodes: inputs first, then random gates.
inline Circuit random_circuit(std::mt19937_64& rng, const RingSpec& ring, std::size_t nvars, std::size_t size) {
  std::vector<CircuitNode> nodes;
  for (std::size_t j = 0; j < size; ++j) {
    auto kind = j == 0 ? uniform(rng, 0, 1) : uniform(rng, 0, 3);
    auto pick = [&] { return static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(j) - 1)); };
    if (kind == 0) nodes.push_back(InputNode{static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(nvars) - 1))});
    else if (kind == 1) nodes.push_back(ConstNode{random_element(rng, ring, 3)});
    else if (kind == 2) nodes.push_back(MulNode{pick(), pick()});
    else {
      std::vector<std::size_t> ch;
      auto k = uniform(rng, 1, 3);
      for (std::int64_t c = 0; c < k; ++c) ch.push_back(pick());
      nodes.push_back(AddNode{ch});
    }
  }
  return Circuit(ring, nvars, std::move(nodes), size - 1, detail::default_names(nvars));
}

/// Calls f on every vector of length n over `values`, first coordinate most significant.
inline void for_each_vector(const std::vector<RingElement>& values, std::size_t n,
                            const std::function<void(const std::vector<RingElement>&)>& f) {
  std::vector<std::size_t> idx(n, 0);
  std::vector<RingElement> v(n, values.empty() ? RingElement{} : values[0]);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) v[i] = values[idx[i]];
    f(v);
    std::size_t i = n;
    while (i > 0 && ++idx[i - 1] == values.size()) idx[--i] = 0;
    if (i == 0) return;
  }
}

inline std::vector<RingElement> all_elements(const RingSpec& ring) {
  std::vector<RingElement> out;
  for (std::uint64_t i = 0; i < ring.cardinality(); ++i) out.push_back(ring.element_at(i));
  return out;
}

inline std::vector<RingElement> box_values(const RingSpec& ring, std::int64_t b) {
  std::vector<RingElement> out;
  for (std::int64_t v = -b; v <= b; ++v) out.push_back(ring.from_int(v));
  return out;
}

/// Shift by repeated multiplication with (x_i + a_i): no binomial coefficients.
inline SparsePoly shift_by_products(const SparsePoly& p, const std::vector<RingElement>& a) {
  const RingSpec ring = p.ring();
  const std::size_t n = p.nvars();
  SparsePoly out(ring, n, p.names());
  for (const auto& [m, c] : p.terms()) {
    SparsePoly t = SparsePoly::constant(ring, n, c);
    for (std::size_t i = 0; i < n; ++i) {
      SparsePoly lin = SparsePoly::variable(ring, n, i) + SparsePoly::constant(ring, n, a[i]);
      for (std::uint32_t e = 0; e < m[i]; ++e) t *= lin;
    }
    out += t;
  }
  return out;
}

/// Element-wise sum of two vectors.
inline std::vector<RingElement> add(const std::vector<RingElement>& a, const std::vector<RingElement>& b) {
  std::vector<RingElement> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

inline std::vector<RingElement> ints(const RingSpec& ring, std::initializer_list<std::int64_t> xs) {
  std::vector<RingElement> out;
  for (auto x : xs) out.push_back(ring.from_int(x));
  return out;
}

/// Polynomial from (coefficient, exponents) pairs.
inline SparsePoly poly(const RingSpec& ring, std::size_t n,
                       std::initializer_list<std::pair<std::int64_t, std::vector<std::uint32_t>>> terms) {
  SparsePoly p(ring, n);
  for (const auto& [c, e] : terms) p.add_term(Monomial(e.begin(), e.end()), ring.from_int(c));
  return p;
}

}  // namespace sft
