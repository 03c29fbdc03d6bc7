#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shiftforge/circuit.hpp"
#include "shiftforge/detail/text.hpp"
#include "shiftforge/sparse_poly.hpp"

namespace shiftforge {

/// Variable tiers of a quadratized system, ordered Z > Y > X.
enum class Tier { X, Y, Z };

struct Variable {
  std::string name;
  Tier tier = Tier::X;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Ordered list of equations "poly = 0" over a shared positional catalog.
///
/// Catalogs are laid out X block, then Y, then Z, each in index order, so
/// catalog position is also the dominance order used by quadratization.
class EquationSystem {
 public:
  EquationSystem() = default;
  EquationSystem(RingSpec ring, std::vector<Variable> vars) : ring_(ring), vars_(std::move(vars)) {}

  static EquationSystem over(RingSpec ring, std::vector<std::string> x_names) {
    std::vector<Variable> vars;
    for (auto& n : x_names) vars.push_back({std::move(n), Tier::X});
    return EquationSystem(ring, std::move(vars));
  }

  const RingSpec& ring() const { return ring_; }
  const std::vector<Variable>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  std::size_t count(Tier t) const {
    std::size_t n = 0;
    for (const auto& v : vars_) n += v.tier == t;
    return n;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& v : vars_) out.push_back(v.name);
    return out;
  }

  const std::vector<SparsePoly>& equations() const { return equations_; }
  std::size_t size() const { return equations_.size(); }

  void add_equation(SparsePoly p) {
    if (!(p.ring() == ring_)) throw DomainMismatch("equation ring differs from system ring");
    if (p.nvars() != vars_.size()) throw ArityMismatch("equation catalog differs from system catalog");
    p.set_names(names());
    equations_.push_back(std::move(p));
  }
  void replace_equation(std::size_t i, SparsePoly p) {
    if (!(p.ring() == ring_) || p.nvars() != vars_.size()) throw ArityMismatch("replacement does not match system");
    p.set_names(names());
    equations_.at(i) = std::move(p);
  }

  SparsePoly zero_poly() const { return SparsePoly(ring_, vars_.size(), names()); }
  SparsePoly var_poly(std::size_t i) const {
    SparsePoly p = SparsePoly::variable(ring_, vars_.size(), i);
    p.set_names(names());
    return p;
  }

  /// Which passes produced this system, in order.
  std::vector<std::string> provenance;

  friend bool operator==(const EquationSystem& a, const EquationSystem& b) {
    return a.ring_ == b.ring_ && a.vars_ == b.vars_ && a.equations_ == b.equations_ &&
           a.provenance == b.provenance;
  }

 private:
  RingSpec ring_;
  std::vector<Variable> vars_;
  std::vector<SparsePoly> equations_;
};

/// True iff every equation of `s` vanishes at `a`.
inline bool check_solution(const EquationSystem& s, std::span<const RingElement> a) {
  if (a.size() != s.nvars())
    throw ArityMismatch("assignment has " + std::to_string(a.size()) + " values, system has " +
                        std::to_string(s.nvars()) + " variables");
  for (const auto& eq : s.equations())
    if (!eq.eval(a).is_zero()) return false;
  return true;
}

/// "target := expr" steps that extend an X-assignment to the whole catalog.
struct ExtensionStep {
  std::size_t target;
  SparsePoly expr;

  friend bool operator==(const ExtensionStep&, const ExtensionStep&) = default;
};

struct ExtensionRecipe {
  RingSpec ring;
  std::size_t num_x = 0;
  std::size_t num_vars = 0;
  std::vector<ExtensionStep> steps;

  friend bool operator==(const ExtensionRecipe&, const ExtensionRecipe&) = default;
};

/// The unique full assignment forced by the recipe from `ax`.
inline std::vector<RingElement> extend_solution(const ExtensionRecipe& recipe,
                                                std::span<const RingElement> ax) {
  if (ax.size() != recipe.num_x)
    throw ArityMismatch("recipe expects " + std::to_string(recipe.num_x) + " X values");
  std::vector<RingElement> full(recipe.num_vars, recipe.ring.zero());
  std::copy(ax.begin(), ax.end(), full.begin());
  for (const auto& step : recipe.steps) full[step.target] = step.expr.eval(full);
  return full;
}

using CircuitSystem = std::vector<Circuit>;

/// Parsed equation-system file: sparse equations or circuits, plus the
/// optional machine-read comment blocks.
struct SystemFile {
  std::variant<EquationSystem, CircuitSystem> system;
  std::optional<ExtensionRecipe> recipe;
  bool trivially_solvable = false;
};

namespace detail {

inline char tier_char(Tier t) { return t == Tier::X ? 'x' : t == Tier::Y ? 'y' : 'z'; }

/// Recipe term text: coefficient followed by "*v<i>" or "*v<i>^<e>" factors.
inline std::string recipe_term(const Monomial& m, const RingElement& c) {
  std::string out = c.to_string();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    out += "*v" + std::to_string(i);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

inline void parse_recipe_term(SparsePoly& p, const std::string& tok, const Line& line) {
  auto star = tok.find('*');
  RingElement c = parse_coef(p.ring(), tok.substr(0, star), line);
  Monomial m(p.nvars(), 0);
  while (star != std::string::npos) {
    auto next = tok.find('*', star + 1);
    std::string factor = tok.substr(star + 1, next == std::string::npos ? std::string::npos : next - star - 1);
    if (factor.size() < 2 || factor[0] != 'v') fail(line, "bad recipe factor '" + factor + "'");
    auto caret = factor.find('^');
    auto idx = parse_count(factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1), line);
    std::uint64_t e = caret == std::string::npos ? 1 : parse_count(factor.substr(caret + 1), line);
    if (idx >= p.nvars()) fail(line, "recipe variable out of range");
    m[idx] += static_cast<std::uint32_t>(e);
    star = next;
  }
  p.add_term(m, c);
}

}  // namespace detail

inline std::string to_text(const EquationSystem& s, const ExtensionRecipe* recipe = nullptr,
                           bool trivially_solvable = false) {
  std::ostringstream out;
  out << "ring " << s.ring().to_string() << '\n';
  bool tiered = s.count(Tier::X) != s.nvars();
  out << "vars " << s.nvars();
  for (const auto& v : s.vars()) {
    out << ' ';
    if (tiered) out << detail::tier_char(v.tier) << ':';
    out << v.name;
  }
  out << '\n';
  if (!s.provenance.empty()) {
    out << "# provenance";
    for (const auto& p : s.provenance) out << ' ' << p;
    out << '\n';
  }
  if (trivially_solvable) out << "# status trivially_solvable\n";
  for (const auto& eq : s.equations()) {
    out << "eq\n";
    detail::write_terms(out, eq);
  }
  if (recipe != nullptr) {
    out << "# recipe " << recipe->num_x << ' ' << recipe->num_vars << '\n';
    for (const auto& step : recipe->steps) {
      out << "# let " << step.target;
      if (step.expr.is_zero()) out << " 0";
      for (const auto& [m, c] : step.expr.terms()) out << ' ' << detail::recipe_term(m, c);
      out << '\n';
    }
  }
  return out.str();
}

inline std::string to_text(const CircuitSystem& circuits) {
  if (circuits.empty()) throw PreconditionError("empty circuit system");
  std::ostringstream out;
  out << "ring " << circuits[0].ring().to_string() << '\n' << detail::vars_line(circuits[0].names()) << '\n';
  for (const auto& c : circuits) {
    out << "eq\n";
    detail::write_circuit_body(out, c);
  }
  return out.str();
}

inline SystemFile parse_system_file(std::string_view text) {
  using namespace detail;
  auto lines = read_lines(text);
  std::size_t i = 0;
  auto next_content = [&]() -> const Line& {
    while (i < lines.size() && lines[i].comment) ++i;
    if (i == lines.size()) throw FormatError("unexpected end of system file");
    return lines[i++];
  };
  RingSpec ring = parse_ring_line(next_content());
  const Line& vline = next_content();
  auto raw_names = parse_vars_line(vline);
  std::vector<Variable> vars;
  for (auto& n : raw_names) {
    Variable v{n, Tier::X};
    if (n.size() > 2 && n[1] == ':' && (n[0] == 'x' || n[0] == 'y' || n[0] == 'z')) {
      v.tier = n[0] == 'x' ? Tier::X : n[0] == 'y' ? Tier::Y : Tier::Z;
      v.name = n.substr(2);
    }
    vars.push_back(std::move(v));
  }
  std::vector<std::string> names;
  for (const auto& v : vars) names.push_back(v.name);

  // Circuit systems: node lines directly, or `eq` blocks of node lines.
  std::size_t peek = i;
  while (peek < lines.size() && lines[peek].comment) ++peek;
  bool circuits = false;
  if (peek < lines.size()) {
    const auto& t0 = lines[peek].tokens[0];
    if (t0 == "node") circuits = true;
    if (t0 == "eq") {
      std::size_t q = peek + 1;
      while (q < lines.size() && lines[q].comment) ++q;
      circuits = q < lines.size() && (lines[q].tokens[0] == "node" || lines[q].tokens[0] == "output");
    }
  }
  SystemFile file;
  if (circuits) {
    for (const auto& v : vars)
      if (v.tier != Tier::X) throw FormatError("circuit systems take tier-X variables only");
    CircuitSystem cs;
    auto is_eq = [](const Line& l) { return !l.comment && l.tokens[0] == "eq"; };
    while (i < lines.size()) {
      if (lines[i].comment) {
        ++i;
        continue;
      }
      if (is_eq(lines[i])) ++i;
      cs.push_back(parse_circuit_body(ring, names, lines, i, is_eq));
    }
    if (cs.empty()) throw FormatError("circuit system without circuits");
    file.system = std::move(cs);
    return file;
  }

  EquationSystem sys(ring, vars);
  std::optional<SparsePoly> current;
  std::optional<ExtensionRecipe> recipe;
  for (; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const auto& t = line.tokens;
    if (line.comment) {
      if (t.empty()) continue;
      if (t[0] == "provenance") {
        sys.provenance.assign(t.begin() + 1, t.end());
      } else if (t[0] == "status" && t.size() == 2 && t[1] == "trivially_solvable") {
        file.trivially_solvable = true;
      } else if (t[0] == "recipe") {
        if (t.size() != 3) fail(line, "malformed recipe header");
        recipe = ExtensionRecipe{ring, parse_count(t[1], line), parse_count(t[2], line), {}};
        if (recipe->num_vars != vars.size() || recipe->num_x > vars.size()) fail(line, "recipe catalog mismatch");
      } else if (t[0] == "let") {
        if (!recipe) fail(line, "'let' outside a recipe block");
        if (t.size() < 3) fail(line, "malformed let line");
        auto target = parse_count(t[1], line);
        if (target >= vars.size()) fail(line, "recipe target out of range");
        SparsePoly expr(ring, vars.size(), names);
        for (std::size_t k = 2; k < t.size(); ++k) parse_recipe_term(expr, t[k], line);
        recipe->steps.push_back({static_cast<std::size_t>(target), std::move(expr)});
      }
      continue;
    }
    if (t[0] == "eq") {
      if (t.size() != 1) fail(line, "'eq' takes no arguments");
      if (current) sys.add_equation(std::move(*current));
      current.emplace(ring, vars.size(), names);
    } else if (t[0] == "term") {
      if (!current) fail(line, "'term' before the first 'eq'");
      parse_term_into(*current, line);
    } else {
      fail(line, "expected 'eq' or 'term'");
    }
  }
  if (current) sys.add_equation(std::move(*current));
  file.system = std::move(sys);
  file.recipe = std::move(recipe);
  return file;
}

}  // namespace shiftforge
