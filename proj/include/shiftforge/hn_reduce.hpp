#pragma once

#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shiftforge/quadratizer.hpp"

namespace shiftforge {

/// Bookkeeping that links P_S back to the system it encodes.
///
/// Catalog of P_S: x0 at position 0, the system variables X' at 1..N, then
/// w1..wt. w1 multiplies the constant-bearing equation `g1` of the system;
/// w2, w3, ... multiply the remaining equations in system order.
struct ReductionWitnessMap {
  RingElement gamma;
  std::size_t x0 = 0;
  std::vector<std::size_t> xprime;
  std::vector<std::size_t> wvars;
  std::size_t g1 = 0;

  friend bool operator==(const ReductionWitnessMap&, const ReductionWitnessMap&) = default;
};

struct HNInstance {
  SparsePoly polynomial;
  RingElement gamma;
  ReductionWitnessMap witness;
  /// The normalized system the instance encodes.
  EquationSystem system;
  /// Present when the system came out of quadratization.
  std::optional<ExtensionRecipe> recipe;

  std::size_t N() const { return system.nvars(); }
  std::size_t t() const { return system.size(); }
  std::size_t sigma() const { return polynomial.sparsity(); }

  /// (t-1)(N+1) + sum of equation sparsities. An upper bound on sigma: linear
  /// terms of gamma*g_i can merge with the x_0 + ... + x_N block.
  std::size_t sparsity_bound() const {
    std::size_t s = (t() - 1) * (N() + 1);
    for (const auto& g : system.equations()) s += g.sparsity();
    return s;
  }
};

/// Builds P_S = w1*g1 + sum_{i>=2} w_i*(gamma*g_i + x_0 + x_1 + ... + x_N).
///
/// Requires Integers (the only non-field integral domain here), a nonzero
/// non-unit gamma, and exactly one equation with a nonzero constant term,
/// which must be affine linear.
inline HNInstance build_P_S(const EquationSystem& t, const RingElement& gamma) {
  const RingSpec ring = t.ring();
  if (ring.kind() != RingKind::Integers)
    throw UnsupportedDomain("P_S needs an integral domain that is not a field; got " + ring.to_string());
  if (!(gamma.ring() == ring)) throw InvalidGamma("gamma is not an element of " + ring.to_string());
  if (gamma.is_zero() || gamma.is_unit()) throw InvalidGamma("gamma must be a nonzero non-unit, got " + gamma.to_string());
  if (t.size() == 0) throw PreconditionError("empty system");

  std::optional<std::size_t> g1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.equations()[i].constant_term().is_zero()) continue;
    if (g1) throw PreconditionError("system is not normalized: several equations carry constants");
    g1 = i;
  }
  if (!g1) throw PreconditionError("system has no constant-bearing equation (trivially solvable)");
  if (t.equations()[*g1].degree() > 1) throw PreconditionError("constant-bearing equation is not affine linear");

  const std::size_t n = t.nvars(), neq = t.size(), total = n + 1 + neq;
  std::vector<std::string> names{"x0"};
  for (const auto& v : t.vars()) names.push_back(v.name);
  for (std::size_t k = 1; k <= neq; ++k) names.push_back("w" + std::to_string(k));

  auto var = [&](std::size_t i) { return SparsePoly::variable(ring, total, i); };
  SparsePoly sum_x(ring, total);
  for (std::size_t k = 0; k <= n; ++k) sum_x += var(k);

  SparsePoly p = var(n + 1) * t.equations()[*g1].embed(total, 1);
  std::size_t w = n + 2;
  for (std::size_t i = 0; i < neq; ++i) {
    if (i == *g1) continue;
    p += var(w++) * (t.equations()[i].embed(total, 1).scaled(gamma) + sum_x);
  }
  p.set_names(names);

  ReductionWitnessMap wm;
  wm.gamma = gamma;
  wm.x0 = 0;
  wm.xprime.resize(n);
  std::iota(wm.xprime.begin(), wm.xprime.end(), 1);
  wm.wvars.resize(neq);
  std::iota(wm.wvars.begin(), wm.wvars.end(), n + 1);
  wm.g1 = *g1;
  return HNInstance{std::move(p), gamma, std::move(wm), t, std::nullopt};
}

/// P_S(X'' + b, W) for b over x0, X'.
inline SparsePoly shift_x_block(const HNInstance& inst, std::span<const RingElement> b) {
  if (b.size() != inst.N() + 1)
    throw ArityMismatch("shift must have N+1 = " + std::to_string(inst.N() + 1) + " entries");
  std::vector<RingElement> full(b.begin(), b.end());
  full.resize(inst.polynomial.nvars(), inst.polynomial.ring().zero());
  return inst.polynomial.shift(full);
}

/// b = (-(a_1 + ... + a_N), a_1, ..., a_N) for a solution a of the system.
inline std::vector<RingElement> solution_to_shift(const HNInstance& inst, std::span<const RingElement> a) {
  if (!check_solution(inst.system, a)) throw NotASolution("assignment does not solve the system");
  RingElement s = inst.polynomial.ring().zero();
  for (const auto& v : a) s += v;
  std::vector<RingElement> b{-s};
  b.insert(b.end(), a.begin(), a.end());
  return b;
}

/// Recovers a solution from a zero-sum sparsifying shift (b_0 = -(b_1 + ... + b_N)).
inline std::vector<RingElement> shift_to_solution(const HNInstance& inst, std::span<const RingElement> b) {
  if (b.size() != inst.N() + 1)
    throw ArityMismatch("shift must have N+1 = " + std::to_string(inst.N() + 1) + " entries");
  RingElement s = inst.polynomial.ring().zero();
  for (std::size_t i = 1; i < b.size(); ++i) s += b[i];
  if (!(b[0] == -s)) throw StructureError("shift violates b_0 = -(b_1 + ... + b_N)");
  if (shift_x_block(inst, b).sparsity() >= inst.sigma()) throw NoReduction("shift does not reduce sparsity");
  std::vector<RingElement> a(b.begin() + 1, b.end());
  if (!check_solution(inst.system, a))
    throw InternalConsistency("sparsifying zero-sum shift does not yield a solution");
  return a;
}

/// Homogeneous outcome: the all-zero X assignment solves the input.
struct TriviallySolvable {
  std::vector<RingElement> certificate;
  Quadratized quadratized;
};

using HNReduction = std::variant<HNInstance, TriviallySolvable>;

namespace detail {

inline HNReduction finish_reduction(Quadratized q, const RingElement& gamma) {
  NormalizeResult norm = normalize_constants(q.system);
  if (norm.trivially_solvable) {
    std::vector<RingElement> zero(q.recipe.num_x, q.system.ring().zero());
    return TriviallySolvable{std::move(zero), std::move(q)};
  }
  HNInstance inst = build_P_S(norm.system, gamma);
  inst.recipe = std::move(q.recipe);
  return inst;
}

inline void require_integers(const RingSpec& ring) {
  if (ring.kind() != RingKind::Integers)
    throw UnsupportedDomain("the Nullstellensatz reduction runs over Z; got " + ring.to_string());
}

}  // namespace detail

/// quadratize -> normalize_constants -> build_P_S.
inline HNReduction reduce_hn(const EquationSystem& s, const RingElement& gamma) {
  detail::require_integers(s.ring());
  return detail::finish_reduction(quadratize_sparse(s), gamma);
}

inline HNReduction reduce_hn(const CircuitSystem& s, const RingElement& gamma) {
  if (s.empty()) throw PreconditionError("no circuits given");
  detail::require_integers(s[0].ring());
  return detail::finish_reduction(quadratize_circuit(s), gamma);
}

inline RingElement default_gamma() { return RingSpec::integers().from_int(2); }

inline std::string to_text(const ReductionWitnessMap& w) {
  std::ostringstream out;
  out << "# witness\n";
  out << "gamma " << w.gamma.to_string() << '\n';
  out << "x0 " << w.x0 << '\n';
  out << "xprime";
  for (auto i : w.xprime) out << ' ' << i;
  out << "\nwvars";
  for (auto i : w.wvars) out << ' ' << i;
  out << "\ng1 " << w.g1 << '\n';
  return out.str();
}

inline ReductionWitnessMap parse_witness(std::string_view text) {
  using namespace detail;
  auto lines = read_lines(text);
  if (lines.empty() || !lines[0].comment || lines[0].tokens.size() != 1 || lines[0].tokens[0] != "witness")
    throw FormatError("witness file must start with '# witness'");
  ReductionWitnessMap w;
  bool seen[5] = {};
  auto indices = [](const Line& l) {
    std::vector<std::size_t> v;
    for (std::size_t k = 1; k < l.tokens.size(); ++k) v.push_back(parse_count(l.tokens[k], l));
    return v;
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.comment) continue;
    const std::string& key = l.tokens[0];
    if (key == "gamma" && l.tokens.size() == 2) {
      w.gamma = parse_coef(RingSpec::integers(), l.tokens[1], l);
      seen[0] = true;
    } else if (key == "x0" && l.tokens.size() == 2) {
      w.x0 = parse_count(l.tokens[1], l);
      seen[1] = true;
    } else if (key == "xprime") {
      w.xprime = indices(l);
      seen[2] = true;
    } else if (key == "wvars") {
      w.wvars = indices(l);
      seen[3] = true;
    } else if (key == "g1" && l.tokens.size() == 2) {
      w.g1 = parse_count(l.tokens[1], l);
      seen[4] = true;
    } else {
      fail(l, "unknown witness line '" + key + "'");
    }
  }
  for (bool s : seen)
    if (!s) throw FormatError("witness file is missing a field");
  return w;
}

}  // namespace shiftforge
