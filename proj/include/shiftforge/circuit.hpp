#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shiftforge/detail/text.hpp"
#include "shiftforge/limits.hpp"
#include "shiftforge/sparse_poly.hpp"

namespace shiftforge {

struct InputNode {
  std::size_t var;
};
struct ConstNode {
  RingElement value;
};
struct MulNode {
  std::size_t left, right;
};
struct AddNode {
  std::vector<std::size_t> children;
};

using CircuitNode = std::variant<InputNode, ConstNode, MulNode, AddNode>;

/// Arithmetic circuit stored in topological order. Node references are
/// positions in `nodes()`; `ids()` keeps the identifiers used in files.
class Circuit {
 public:
  Circuit(RingSpec ring, std::size_t nvars, std::vector<CircuitNode> nodes, std::size_t output,
          std::vector<std::string> names = {}, std::vector<std::uint64_t> ids = {})
      : ring_(ring), nvars_(nvars), nodes_(std::move(nodes)), output_(output),
        names_(std::move(names)), ids_(std::move(ids)) {
    if (names_.empty()) names_ = detail::default_names(nvars_);
    if (ids_.empty())
      for (std::size_t i = 0; i < nodes_.size(); ++i) ids_.push_back(i);
    validate();
  }

  const RingSpec& ring() const { return ring_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<CircuitNode>& nodes() const { return nodes_; }
  std::size_t output() const { return output_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  /// Number of nodes, including unreachable ones.
  std::size_t size() const { return nodes_.size(); }

  RingElement eval(std::span<const RingElement> x) const {
    if (x.size() != nvars_) throw ArityMismatch("circuit expects " + std::to_string(nvars_) + " inputs");
    for (const auto& v : x)
      if (!(v.ring() == ring_)) throw DomainMismatch("input from a different ring");
    std::vector<RingElement> val;
    val.reserve(nodes_.size());
    for (const auto& node : nodes_) {
      val.push_back(std::visit(
          [&](const auto& n) -> RingElement {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, InputNode>) return x[n.var];
            else if constexpr (std::is_same_v<T, ConstNode>) return n.value;
            else if constexpr (std::is_same_v<T, MulNode>) return val[n.left] * val[n.right];
            else {
              RingElement s = ring_.zero();
              for (auto c : n.children) s += val[c];
              return s;
            }
          },
          node));
    }
    return val[output_];
  }

  /// The polynomial computed at the output node. Throws CapExceeded when any
  /// intermediate node exceeds `term_cap` terms.
  SparsePoly expand(std::uint64_t term_cap = default_term_cap()) const {
    std::vector<SparsePoly> val;
    val.reserve(nodes_.size());
    for (const auto& node : nodes_) {
      SparsePoly p = std::visit(
          [&](const auto& n) -> SparsePoly {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, InputNode>) return SparsePoly::variable(ring_, nvars_, n.var);
            else if constexpr (std::is_same_v<T, ConstNode>) return SparsePoly::constant(ring_, nvars_, n.value);
            else if constexpr (std::is_same_v<T, MulNode>) {
              if (static_cast<double>(val[n.left].sparsity()) * static_cast<double>(val[n.right].sparsity()) >
                  static_cast<double>(term_cap) * 64.0)
                throw CapExceeded("circuit expansion exceeds the term cap");
              return val[n.left] * val[n.right];
            } else {
              SparsePoly s(ring_, nvars_);
              for (auto c : n.children) s += val[c];
              return s;
            }
          },
          node);
      if (p.sparsity() > term_cap)
        throw CapExceeded("circuit expansion exceeds the term cap (" + std::to_string(term_cap) + ")");
      p.set_names(names_);
      val.push_back(std::move(p));
    }
    return val[output_];
  }

 private:
  void validate() const {
    if (nodes_.empty()) throw PreconditionError("circuit has no nodes");
    if (ids_.size() != nodes_.size()) throw PreconditionError("id list does not match node count");
    if (names_.size() != nvars_) throw ArityMismatch("name catalog does not match variable count");
    if (output_ >= nodes_.size()) throw PreconditionError("output node out of range");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto before = [&](std::size_t ref) {
        if (ref >= i) throw PreconditionError("node " + std::to_string(ids_[i]) + " references a later node");
      };
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, InputNode>) {
              if (n.var >= nvars_) throw PreconditionError("input variable index out of range");
            } else if constexpr (std::is_same_v<T, ConstNode>) {
              if (!(n.value.ring() == ring_)) throw DomainMismatch("constant from a different ring");
            } else if constexpr (std::is_same_v<T, MulNode>) {
              before(n.left);
              before(n.right);
            } else {
              if (n.children.empty()) throw PreconditionError("add node without children");
              for (auto c : n.children) before(c);
            }
          },
          nodes_[i]);
    }
  }

  RingSpec ring_;
  std::size_t nvars_;
  std::vector<CircuitNode> nodes_;
  std::size_t output_;
  std::vector<std::string> names_;
  std::vector<std::uint64_t> ids_;
};

/// Sum-of-products circuit for a sparse polynomial with fan-in-2 products:
/// one input node per variable, then for each term a constant node followed
/// by a chain of multiplications, and a final addition.
inline Circuit circuit_from_sparse(const SparsePoly& p) {
  std::vector<CircuitNode> nodes;
  for (std::size_t v = 0; v < p.nvars(); ++v) nodes.push_back(InputNode{v});
  std::vector<std::size_t> summands;
  for (const auto& [m, c] : p.terms()) {
    nodes.push_back(ConstNode{c});
    std::size_t acc = nodes.size() - 1;
    for (std::size_t v = 0; v < p.nvars(); ++v) {
      for (std::uint32_t e = 0; e < m[v]; ++e) {
        nodes.push_back(MulNode{acc, v});
        acc = nodes.size() - 1;
      }
    }
    summands.push_back(acc);
  }
  if (summands.empty()) {
    nodes.push_back(ConstNode{p.ring().zero()});
    summands.push_back(nodes.size() - 1);
  }
  nodes.push_back(AddNode{summands});
  std::size_t out = nodes.size() - 1;
  return Circuit(p.ring(), p.nvars(), std::move(nodes), out, p.names());
}

namespace detail {

inline void write_circuit_body(std::ostringstream& out, const Circuit& c) {
  const auto& ids = c.ids();
  for (std::size_t i = 0; i < c.size(); ++i) {
    out << "node " << ids[i] << ' ';
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, InputNode>) out << "input " << n.var;
          else if constexpr (std::is_same_v<T, ConstNode>) out << "const " << n.value.to_string();
          else if constexpr (std::is_same_v<T, MulNode>) out << "mul " << ids[n.left] << ' ' << ids[n.right];
          else {
            out << "add";
            for (auto ch : n.children) out << ' ' << ids[ch];
          }
        },
        c.nodes()[i]);
    out << '\n';
  }
  out << "output " << ids[c.output()] << '\n';
}

/// Parses the node lines of one circuit from lines[i] up to a line for which
/// `stop` returns true (or the end). Advances i past the `output` line.
template <class Stop>
Circuit parse_circuit_body(const RingSpec& ring, const std::vector<std::string>& names,
                           const std::vector<Line>& lines, std::size_t& i, Stop stop) {
  std::vector<CircuitNode> nodes;
  std::vector<std::uint64_t> ids;
  std::map<std::uint64_t, std::size_t> pos;
  std::optional<std::size_t> output;
  auto ref = [&](const std::string& tok, const Line& line) {
    auto it = pos.find(parse_count(tok, line));
    if (it == pos.end()) fail(line, "reference to undefined node " + tok);
    return it->second;
  };
  for (; i < lines.size() && !stop(lines[i]); ++i) {
    const Line& line = lines[i];
    if (line.comment) continue;
    const auto& t = line.tokens;
    if (output) fail(line, "content after 'output'");
    if (t[0] == "output") {
      if (t.size() != 2) fail(line, "malformed output line");
      output = ref(t[1], line);
      continue;
    }
    if (t[0] != "node" || t.size() < 3) fail(line, "expected 'node <id> <kind> ...'");
    std::uint64_t id = parse_count(t[1], line);
    if (!ids.empty() && id <= ids.back()) fail(line, "node ids must be strictly increasing");
    const std::string& kind = t[2];
    if (kind == "input") {
      if (t.size() != 4) fail(line, "input node takes one variable index");
      auto v = parse_count(t[3], line);
      if (v >= names.size()) fail(line, "input variable index out of range");
      nodes.push_back(InputNode{static_cast<std::size_t>(v)});
    } else if (kind == "const") {
      if (t.size() != 4) fail(line, "const node takes one coefficient");
      nodes.push_back(ConstNode{parse_coef(ring, t[3], line)});
    } else if (kind == "mul") {
      if (t.size() != 5) fail(line, "mul node must have fan-in exactly 2");
      nodes.push_back(MulNode{ref(t[3], line), ref(t[4], line)});
    } else if (kind == "add") {
      if (t.size() < 4) fail(line, "add node needs at least one child");
      AddNode a;
      for (std::size_t k = 3; k < t.size(); ++k) a.children.push_back(ref(t[k], line));
      nodes.push_back(std::move(a));
    } else {
      fail(line, "unknown node kind '" + kind + "'");
    }
    ids.push_back(id);
    pos[id] = nodes.size() - 1;
  }
  if (!output) throw FormatError("circuit without 'output' line");
  return Circuit(ring, names.size(), std::move(nodes), *output, names, std::move(ids));
}

}  // namespace detail

inline std::string to_text(const Circuit& c) {
  std::ostringstream out;
  out << "ring " << c.ring().to_string() << '\n' << detail::vars_line(c.names()) << '\n';
  detail::write_circuit_body(out, c);
  return out.str();
}

inline Circuit parse_circuit_file(std::string_view text) {
  using namespace detail;
  auto lines = read_lines(text);
  std::size_t i = 0;
  auto next_content = [&]() -> const Line& {
    while (i < lines.size() && lines[i].comment) ++i;
    if (i == lines.size()) throw FormatError("unexpected end of circuit file");
    return lines[i++];
  };
  RingSpec ring = parse_ring_line(next_content());
  auto names = parse_vars_line(next_content());
  Circuit c = parse_circuit_body(ring, names, lines, i, [](const Line&) { return false; });
  return c;
}

}  // namespace shiftforge
