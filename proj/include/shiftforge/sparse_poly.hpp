#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftforge/detail/text.hpp"
#include "shiftforge/errors.hpp"
#include "shiftforge/rings.hpp"

namespace shiftforge {

/// Exponent vector, one entry per catalog variable.
using Monomial = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Monomial& m) {
  std::uint64_t d = 0;
  for (auto e : m) d += e;
  return d;
}

/// Graded-lex descending: higher total degree first, then lexicographically larger first.
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const {
    auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

/// Sparse multivariate polynomial over a positional variable catalog.
///
/// Zero coefficients are never stored, so `sparsity()` is always the number
/// of monomials of the canonical form. Variable names are display metadata
/// and take no part in equality.
class SparsePoly {
 public:
  using TermMap = std::map<Monomial, RingElement, GrlexDescending>;

  SparsePoly() = default;
  SparsePoly(RingSpec ring, std::size_t nvars, std::vector<std::string> names = {})
      : ring_(ring), nvars_(nvars), names_(std::move(names)) {
    if (names_.empty()) names_ = detail::default_names(nvars_);
    if (names_.size() != nvars_) throw ArityMismatch("name catalog does not match variable count");
  }

  static SparsePoly constant(const RingSpec& ring, std::size_t nvars, const RingElement& c) {
    SparsePoly p(ring, nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }

  static SparsePoly variable(const RingSpec& ring, std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw ArityMismatch("variable index out of range");
    SparsePoly p(ring, nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    p.add_term(m, ring.one());
    return p;
  }

  const RingSpec& ring() const { return ring_; }
  std::size_t nvars() const { return nvars_; }
  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names) {
    if (names.size() != nvars_) throw ArityMismatch("name catalog does not match variable count");
    names_ = std::move(names);
  }
  const TermMap& terms() const { return terms_; }

  std::size_t sparsity() const { return terms_.size(); }

  std::size_t nonconstant_sparsity() const {
    return terms_.size() - (constant_term().is_zero() ? 0 : 1);
  }

  /// Maximum total degree; 0 for the zero polynomial.
  std::uint64_t degree() const {
    // grlex-descending map: the first key has maximal degree
    return terms_.empty() ? 0 : total_degree(terms_.begin()->first);
  }

  bool is_zero() const { return terms_.empty(); }

  RingElement coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  RingElement constant_term() const { return coefficient(Monomial(nvars_, 0)); }

  /// Adds c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, const RingElement& c) {
    if (m.size() != nvars_) throw ArityMismatch("monomial length does not match variable count");
    if (!(c.ring() == ring_)) throw DomainMismatch("coefficient ring mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  SparsePoly& operator+=(const SparsePoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  SparsePoly operator-() const { return scaled(-ring_.one()); }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    a.check_compatible(b);
    SparsePoly out(a.ring_, a.nvars_, a.names_);
    Monomial m(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
        out.add_term(m, ca * cb);
      }
    }
    return out;
  }
  SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

  SparsePoly scaled(const RingElement& c) const {
    SparsePoly out(ring_, nvars_, names_);
    for (const auto& [m, v] : terms_) out.add_term(m, v * c);
    return out;
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    return a.ring_ == b.ring_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  RingElement eval(std::span<const RingElement> x) const {
    check_point(x);
    RingElement acc = ring_.zero();
    for (const auto& [m, c] : terms_) {
      RingElement t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (m[i] != 0) t *= x[i].pow(m[i]);
      acc += t;
    }
    return acc;
  }

  /// Canonical form of P(X + a), by binomial expansion of every term.
  SparsePoly shift(std::span<const RingElement> a) const {
    check_point(a);
    SparsePoly out(ring_, nvars_, names_);
    std::vector<std::vector<std::pair<std::uint32_t, RingElement>>> factors;
    for (const auto& [m, c] : terms_) {
      // (x_i + a_i)^e = sum_k C(e,k) a_i^(e-k) x_i^k; zero shifts contribute x_i^e only.
      factors.assign(nvars_, {});
      for (std::size_t i = 0; i < nvars_; ++i) {
        std::uint32_t e = m[i];
        if (a[i].is_zero() || e == 0) {
          factors[i].emplace_back(e, ring_.one());
          continue;
        }
        BigInt binom = 1;
        for (std::uint32_t k = 0; k <= e; ++k) {
          if (k > 0) binom = binom * (e - k + 1) / k;
          RingElement coef = ring_.from_int(binom) * a[i].pow(e - k);
          if (!coef.is_zero()) factors[i].emplace_back(k, coef);
        }
      }
      Monomial mono(nvars_, 0);
      expand(factors, 0, mono, c, out);
    }
    return out;
  }

  /// Degree-k homogeneous part.
  SparsePoly homogeneous_component(std::uint64_t k) const {
    SparsePoly out(ring_, nvars_, names_);
    for (const auto& [m, c] : terms_)
      if (total_degree(m) == k) out.add_term(m, c);
    return out;
  }

  /// Re-indexes this polynomial into a catalog of `new_nvars` variables,
  /// variable i moving to position offset + i.
  SparsePoly embed(std::size_t new_nvars, std::size_t offset,
                   std::vector<std::string> new_names = {}) const {
    if (offset + nvars_ > new_nvars) throw ArityMismatch("embedding does not fit the catalog");
    SparsePoly out(ring_, new_nvars, std::move(new_names));
    Monomial big(new_nvars, 0);
    for (const auto& [m, c] : terms_) {
      std::fill(big.begin(), big.end(), 0);
      for (std::size_t i = 0; i < nvars_; ++i) big[offset + i] = m[i];
      out.terms_.emplace(big, c);
    }
    return out;
  }

 private:
  void check_compatible(const SparsePoly& o) const {
    if (!(ring_ == o.ring_)) throw DomainMismatch("ring mismatch: " + ring_.to_string() + " vs " + o.ring_.to_string());
    if (nvars_ != o.nvars_) throw ArityMismatch("variable catalogs differ in size");
  }

  void check_point(std::span<const RingElement> x) const {
    if (x.size() != nvars_)
      throw ArityMismatch("expected " + std::to_string(nvars_) + " values, got " + std::to_string(x.size()));
    for (const auto& v : x)
      if (!(v.ring() == ring_)) throw DomainMismatch("point coordinate from a different ring");
  }

  static void expand(const std::vector<std::vector<std::pair<std::uint32_t, RingElement>>>& factors,
                     std::size_t i, Monomial& mono, const RingElement& coef, SparsePoly& out) {
    if (i == factors.size()) {
      out.add_term(mono, coef);
      return;
    }
    for (const auto& [k, c] : factors[i]) {
      mono[i] = k;
      expand(factors, i + 1, mono, coef * c, out);
    }
    mono[i] = 0;
  }

  RingSpec ring_;
  std::size_t nvars_ = 0;
  std::vector<std::string> names_;
  TermMap terms_;
};

/// Optional machine-read header comments of a polynomial file.
struct PolyFileMeta {
  /// `# shiftable <k>`: shift searches move only the first k variables.
  std::optional<std::size_t> shiftable;
  /// `# copies d=<d> base_nvars=<N'>`: amplified instance layout.
  std::optional<std::pair<std::size_t, std::size_t>> copies;

  friend bool operator==(const PolyFileMeta&, const PolyFileMeta&) = default;
};

struct PolyFile {
  SparsePoly poly;
  PolyFileMeta meta;
};

namespace detail {

inline std::string term_line(const Monomial& m, const RingElement& c) {
  std::string out = "term " + c.to_string();
  for (auto e : m) out += " " + std::to_string(e);
  return out;
}

inline Monomial parse_term_exponents(const Line& line, std::size_t nvars) {
  if (line.tokens.size() != nvars + 2) fail(line, "term needs a coefficient and " + std::to_string(nvars) + " exponents");
  Monomial m(nvars);
  for (std::size_t i = 0; i < nvars; ++i) {
    auto e = parse_count(line.tokens[i + 2], line);
    if (e > 0xFFFFFFFFull) fail(line, "exponent too large");
    m[i] = static_cast<std::uint32_t>(e);
  }
  return m;
}

/// Adds one `term` line to p, rejecting zero coefficients and repeated exponent vectors.
inline void parse_term_into(SparsePoly& p, const Line& line) {
  Monomial m = parse_term_exponents(line, p.nvars());
  RingElement c = parse_coef(p.ring(), line.tokens[1], line);
  if (c.is_zero()) fail(line, "zero coefficient");
  if (p.terms().count(m) != 0) fail(line, "duplicate exponent vector");
  p.add_term(m, c);
}

inline void write_terms(std::ostringstream& out, const SparsePoly& p) {
  for (const auto& [m, c] : p.terms()) out << term_line(m, c) << '\n';
}

}  // namespace detail

inline std::string to_text(const SparsePoly& p, const PolyFileMeta& meta = {}) {
  std::ostringstream out;
  out << "ring " << p.ring().to_string() << '\n' << detail::vars_line(p.names()) << '\n';
  if (meta.copies)
    out << "# copies d=" << meta.copies->first << " base_nvars=" << meta.copies->second << '\n';
  if (meta.shiftable) out << "# shiftable " << *meta.shiftable << '\n';
  detail::write_terms(out, p);
  return out.str();
}

inline PolyFile parse_poly_file(std::string_view text) {
  using namespace detail;
  auto lines = read_lines(text);
  std::size_t i = 0;
  PolyFileMeta meta;
  auto take_meta = [&](const Line& line) {
    const auto& t = line.tokens;
    if (t.size() == 3 && t[0] == "copies") {
      std::string d, base;
      if (!key_value(t[1], "d", d) || !key_value(t[2], "base_nvars", base)) fail(line, "malformed copies header");
      meta.copies = std::make_pair(parse_count(d, line), parse_count(base, line));
    } else if (t.size() == 2 && t[0] == "shiftable") {
      meta.shiftable = parse_count(t[1], line);
    }
  };
  auto next_content = [&]() -> const Line& {
    while (i < lines.size() && lines[i].comment) take_meta(lines[i++]);
    if (i == lines.size()) throw FormatError("unexpected end of polynomial file");
    return lines[i++];
  };
  RingSpec ring = parse_ring_line(next_content());
  auto names = parse_vars_line(next_content());
  const std::size_t nvars = names.size();
  SparsePoly p(ring, nvars, std::move(names));
  for (; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.comment) {
      take_meta(line);
      continue;
    }
    if (line.tokens[0] != "term") fail(line, "expected 'term'");
    parse_term_into(p, line);
  }
  if (meta.shiftable && *meta.shiftable > p.nvars()) throw FormatError("shiftable count exceeds variable count");
  return {std::move(p), meta};
}

}  // namespace shiftforge
