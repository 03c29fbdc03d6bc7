#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftforge/circuit.hpp"
#include "shiftforge/equation_system.hpp"

namespace shiftforge {

struct Quadratized {
  EquationSystem system;
  ExtensionRecipe recipe;
};

/// Lowers a sparse system over tier X to quadratic binomials y - u*v plus
/// affine-linear equations.
///
/// Every monomial of degree >= 1 is folded pairwise from its two lowest
/// ordered variables (with multiplicity, so x^3 starts with the pair (x, x)),
/// each product getting a fresh y; the remaining variable is named by a fresh
/// z, and the equation itself becomes sum_j c_j z_j + c_0. Monomials are
/// visited in graded-lex descending order; zero equations are dropped.
inline Quadratized quadratize_sparse(const EquationSystem& s) {
  for (const auto& v : s.vars())
    if (v.tier != Tier::X) throw PreconditionError("quadratize_sparse expects a tier-X system");
  const RingSpec ring = s.ring();
  const std::size_t n = s.nvars();

  // First pass: allocate Y and Z so that the catalog is X, Y, Z in index order.
  std::vector<Variable> ys, zs;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t j = 0;
    for (const auto& [m, c] : s.equations()[i].terms()) {
      ++j;
      auto deg = total_degree(m);
      std::string tag = std::to_string(i + 1) + "_" + std::to_string(j);
      for (std::uint64_t k = 1; k + 1 <= deg; ++k) ys.push_back({"y" + tag + "_" + std::to_string(k), Tier::Y});
      if (deg >= 1) zs.push_back({"z" + tag, Tier::Z});
    }
  }
  std::vector<Variable> vars = s.vars();
  vars.insert(vars.end(), ys.begin(), ys.end());
  vars.insert(vars.end(), zs.begin(), zs.end());

  Quadratized out{EquationSystem(ring, std::move(vars)), {}};
  EquationSystem& t = out.system;
  t.provenance = s.provenance;
  t.provenance.push_back("quadratize_sparse");
  out.recipe = ExtensionRecipe{ring, n, t.nvars(), {}};

  std::size_t next_y = n, next_z = n + ys.size();
  for (const auto& f : s.equations()) {
    if (f.is_zero()) continue;
    SparsePoly affine = t.zero_poly();
    for (const auto& [m, c] : f.terms()) {
      if (total_degree(m) == 0) {
        affine += SparsePoly::constant(ring, t.nvars(), c);
        continue;
      }
      // variables with multiplicity, highest-ordered first
      std::vector<std::size_t> factors;
      for (std::size_t v = n; v-- > 0;)
        for (std::uint32_t e = 0; e < m[v]; ++e) factors.push_back(v);
      while (factors.size() >= 2) {
        std::size_t u = factors[factors.size() - 2], w = factors.back();
        factors.resize(factors.size() - 2);
        std::size_t y = next_y++;
        SparsePoly product = t.var_poly(u) * t.var_poly(w);
        t.add_equation(t.var_poly(y) - product);
        out.recipe.steps.push_back({y, product});
        // y outranks every variable still in the list
        factors.insert(factors.begin(), y);
      }
      std::size_t z = next_z++;
      t.add_equation(t.var_poly(z) - t.var_poly(factors[0]));
      out.recipe.steps.push_back({z, t.var_poly(factors[0])});
      affine += t.var_poly(z).scaled(c);
    }
    t.add_equation(std::move(affine));
  }
  return out;
}

/// Lowers circuits (one per equation, shared X catalog) to one equation per
/// node plus `y_root = 0` per circuit. Node j of circuit i is named y<i>_<j>.
inline Quadratized quadratize_circuit(const CircuitSystem& circuits) {
  if (circuits.empty()) throw PreconditionError("no circuits given");
  const RingSpec ring = circuits[0].ring();
  const std::size_t n = circuits[0].nvars();
  std::vector<Variable> vars;
  for (const auto& name : circuits[0].names()) vars.push_back({name, Tier::X});
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    if (!(circuits[i].ring() == ring) || circuits[i].nvars() != n)
      throw DomainMismatch("circuits do not share one ring and variable catalog");
    for (std::size_t j = 0; j < circuits[i].size(); ++j)
      vars.push_back({"y" + std::to_string(i + 1) + "_" + std::to_string(j + 1), Tier::Y});
  }
  Quadratized out{EquationSystem(ring, std::move(vars)), {}};
  EquationSystem& t = out.system;
  t.provenance.push_back("quadratize_circuit");
  out.recipe = ExtensionRecipe{ring, n, t.nvars(), {}};

  std::size_t base = n;
  for (const auto& c : circuits) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      SparsePoly rhs = std::visit(
          [&](const auto& node) -> SparsePoly {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, InputNode>) return t.var_poly(node.var);
            else if constexpr (std::is_same_v<T, ConstNode>) {
              SparsePoly p = SparsePoly::constant(ring, t.nvars(), node.value);
              p.set_names(t.names());
              return p;
            } else if constexpr (std::is_same_v<T, MulNode>)
              return t.var_poly(base + node.left) * t.var_poly(base + node.right);
            else {
              SparsePoly sum = t.zero_poly();
              for (auto ch : node.children) sum += t.var_poly(base + ch);
              return sum;
            }
          },
          c.nodes()[j]);
      t.add_equation(t.var_poly(base + j) - rhs);
      out.recipe.steps.push_back({base + j, std::move(rhs)});
    }
    t.add_equation(t.var_poly(base + c.output()));
    base += c.size();
  }
  return out;
}

struct NormalizeResult {
  EquationSystem system;
  /// No equation carries a constant: the all-zero assignment solves the system.
  bool trivially_solvable = false;
  /// Index of the single constant-bearing equation (g_1) when not trivially solvable.
  std::optional<std::size_t> pivot;
};

/// Leaves exactly one equation with a nonzero constant term.
///
/// With constant-bearing (affine) equations g_1, ..., g_k in input order and
/// constants c_1, ..., c_k, every g_i (i >= 2) is replaced in place by
/// c_1 * g_i - c_i * g_1.
inline NormalizeResult normalize_constants(const EquationSystem& t) {
  std::vector<std::size_t> bearing;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& g = t.equations()[i];
    if (g.constant_term().is_zero()) continue;
    if (g.degree() > 1)
      throw PreconditionError("constant-bearing equation " + std::to_string(i + 1) + " is not affine linear");
    bearing.push_back(i);
  }
  NormalizeResult out{t, bearing.empty(), std::nullopt};
  if (bearing.empty()) return out;
  out.pivot = bearing[0];
  const SparsePoly& g1 = t.equations()[bearing[0]];
  const RingElement c1 = g1.constant_term();
  for (std::size_t k = 1; k < bearing.size(); ++k) {
    const SparsePoly& gi = t.equations()[bearing[k]];
    out.system.replace_equation(bearing[k], gi.scaled(c1) - g1.scaled(gi.constant_term()));
  }
  if (bearing.size() > 1) out.system.provenance.push_back("normalize_constants");
  return out;
}

/// Number of equations carrying a nonzero constant term.
inline std::size_t constant_bearing_count(const EquationSystem& t) {
  std::size_t k = 0;
  for (const auto& g : t.equations()) k += !g.constant_term().is_zero();
  return k;
}

/// Syntactic check of the quadratized form: either affine linear, or a
/// constant-free binomial `a*u + b*v*w` of degree exactly 2 whose linear
/// variable u strictly dominates v and w in catalog order.
inline bool has_quadratized_shape(const SparsePoly& eq) {
  if (eq.degree() <= 1) return true;
  if (eq.sparsity() != 2 || !eq.constant_term().is_zero() || eq.degree() != 2) return false;
  const Monomial& quad = eq.terms().begin()->first;
  const Monomial& lin = std::next(eq.terms().begin())->first;
  if (total_degree(lin) != 1) return false;
  std::size_t u = std::find(lin.begin(), lin.end(), 1u) - lin.begin();
  for (std::size_t v = 0; v < quad.size(); ++v)
    if (quad[v] != 0 && v >= u) return false;
  return true;
}

}  // namespace shiftforge
