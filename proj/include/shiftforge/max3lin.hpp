#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftforge/detail/text.hpp"
#include "shiftforge/sparse_poly.hpp"

namespace shiftforge {

/// c[0]*x_{vars[0]} + c[1]*x_{vars[1]} + c[2]*x_{vars[2]} + constant = 0 (0-based indices).
struct LinearRow {
  std::array<std::size_t, 3> vars{};
  std::array<RingElement, 3> coeffs;
  RingElement constant;

  RingElement eval(std::span<const RingElement> x) const {
    return coeffs[0] * x[vars[0]] + coeffs[1] * x[vars[1]] + coeffs[2] * x[vars[2]] + constant;
  }

  friend bool operator==(const LinearRow&, const LinearRow&) = default;
};

/// Generator bookkeeping carried in file comments.
struct GeneratorInfo {
  std::uint64_t seed = 0;
  std::optional<std::vector<RingElement>> planted;
  std::size_t noise = 0;
  /// Coefficient range used over infinite rings.
  std::optional<std::int64_t> coeff_bound;

  friend bool operator==(const GeneratorInfo&, const GeneratorInfo&) = default;
};

class Max3LinSystem {
 public:
  Max3LinSystem(RingSpec ring, std::size_t n, std::vector<LinearRow> rows = {})
      : ring_(ring), n_(n) {
    for (auto& r : rows) add_row(std::move(r));
  }

  void add_row(LinearRow row) {
    const auto& v = row.vars;
    for (std::size_t k = 0; k < 3; ++k) {
      if (v[k] >= n_) throw PreconditionError("row variable index out of range");
      if (!(row.coeffs[k].ring() == ring_)) throw DomainMismatch("row coefficient from a different ring");
      if (row.coeffs[k].is_zero()) throw PreconditionError("row coefficients must be nonzero");
    }
    if (v[0] == v[1] || v[0] == v[2] || v[1] == v[2])
      throw PreconditionError("each row must use three distinct variables");
    if (!(row.constant.ring() == ring_)) throw DomainMismatch("row constant from a different ring");
    rows_.push_back(std::move(row));
  }

  const RingSpec& ring() const { return ring_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return rows_.size(); }
  const std::vector<LinearRow>& rows() const { return rows_; }

  /// w = max(2n, 2m).
  std::size_t w() const { return std::max(2 * n_, 2 * rows_.size()); }

  std::optional<GeneratorInfo> generator;

  friend bool operator==(const Max3LinSystem& a, const Max3LinSystem& b) {
    return a.ring_ == b.ring_ && a.n_ == b.n_ && a.rows_ == b.rows_ && a.generator == b.generator;
  }

 private:
  RingSpec ring_;
  std::size_t n_;
  std::vector<LinearRow> rows_;
};

/// Number of rows with L_i(x) = 0.
inline std::size_t count_satisfied(const Max3LinSystem& l, std::span<const RingElement> x) {
  if (x.size() != l.n()) throw ArityMismatch("assignment must have n = " + std::to_string(l.n()) + " values");
  std::size_t k = 0;
  for (const auto& r : l.rows()) k += r.eval(x).is_zero();
  return k;
}

/// Q_S(Y) = sum_{i,j} C_ij y_i y_j + sum_i e_i y_i + e0 over w = max(2n, 2m) variables.
///
/// C holds the row coefficients in its top-right block: C_{i, w-n+v} = A_{i,v}
/// for rows i < m; e_i = b_i for i < m and 0 otherwise (all 0-based).
struct QSInstance {
  SparsePoly polynomial;
  std::size_t w = 0;
  std::map<std::pair<std::size_t, std::size_t>, RingElement> C;
  std::vector<RingElement> e;
  RingElement e0;
  Max3LinSystem source;

  RingElement c(std::size_t i, std::size_t j) const {
    auto it = C.find({i, j});
    return it == C.end() ? polynomial.ring().zero() : it->second;
  }
};

inline QSInstance build_Q_S(const Max3LinSystem& l, const RingElement& e0) {
  const RingSpec& ring = l.ring();
  if (!(e0.ring() == ring)) throw DomainMismatch("e0 from a different ring");
  const std::size_t w = l.w(), n = l.n();
  QSInstance q{SparsePoly(ring, w, detail::default_names(w, "y")), w, {}, std::vector<RingElement>(w, ring.zero()), e0, l};
  for (std::size_t i = 0; i < l.m(); ++i) {
    const LinearRow& row = l.rows()[i];
    for (std::size_t k = 0; k < 3; ++k) {
      std::size_t j = w - n + row.vars[k];
      q.C[{i, j}] = row.coeffs[k];
      Monomial mono(w, 0);
      mono[i] += 1;
      mono[j] += 1;
      q.polynomial.add_term(mono, row.coeffs[k]);
    }
    q.e[i] = row.constant;
    Monomial lin(w, 0);
    lin[i] = 1;
    q.polynomial.add_term(lin, row.constant);
  }
  q.polynomial.add_term(Monomial(w, 0), e0);
  return q;
}

inline QSInstance build_Q_S(const Max3LinSystem& l) { return build_Q_S(l, l.ring().one()); }

/// Coefficient of y_i in Q_S(Y + a): e_i + sum_j a_j (C_ij + C_ji).
inline RingElement shifted_linear_coeff(const QSInstance& q, std::span<const RingElement> a, std::size_t i) {
  if (a.size() != q.w) throw ArityMismatch("shift must have w = " + std::to_string(q.w) + " entries");
  if (i >= q.w) throw DomainError("coefficient index out of range");
  RingElement out = q.e[i];
  for (const auto& [ij, c] : q.C) {
    if (ij.first == i) out += a[ij.second] * c;
    if (ij.second == i) out += a[ij.first] * c;
  }
  return out;
}

/// Shift vector carrying x on its last n coordinates.
inline std::vector<RingElement> embed_assignment(const Max3LinSystem& l, std::span<const RingElement> x) {
  if (x.size() != l.n()) throw ArityMismatch("assignment must have n = " + std::to_string(l.n()) + " values");
  std::vector<RingElement> a(l.w() - l.n(), l.ring().zero());
  a.insert(a.end(), x.begin(), x.end());
  return a;
}

/// Last n coordinates of a shift vector.
inline std::vector<RingElement> project_assignment(const Max3LinSystem& l, std::span<const RingElement> a) {
  if (a.size() != l.w()) throw ArityMismatch("shift must have w entries");
  return {a.end() - static_cast<std::ptrdiff_t>(l.n()), a.end()};
}

namespace detail {

/// Uniform draw from [0, bound) by rejection; independent of the standard
/// library's distribution implementations.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return v % bound;
}

inline constexpr std::int64_t kGeneratorCoeffBound = 3;

inline RingElement draw_nonzero(std::mt19937_64& rng, const RingSpec& ring) {
  if (ring.is_finite()) return ring.from_int(1 + draw(rng, ring.cardinality() - 1));
  auto v = static_cast<std::int64_t>(draw(rng, 2 * kGeneratorCoeffBound)) - kGeneratorCoeffBound;
  if (v >= 0) ++v;  // skip zero
  return ring.from_int(v);
}

inline RingElement draw_any(std::mt19937_64& rng, const RingSpec& ring) {
  if (ring.is_finite()) return ring.from_int(draw(rng, ring.cardinality()));
  return ring.from_int(static_cast<std::int64_t>(draw(rng, 2 * kGeneratorCoeffBound + 1)) - kGeneratorCoeffBound);
}

}  // namespace detail

/// Random instance, deterministic per seed. With `planted`, a recorded
/// assignment satisfies exactly m - noise rows: the noisy rows get their
/// constant moved by a nonzero offset.
inline Max3LinSystem gen_max3lin(std::size_t n, std::size_t m, const RingSpec& ring, bool planted,
                                 std::size_t noise, std::uint64_t seed) {
  if (n < 3) throw DomainError("Max-3Lin needs at least 3 variables");
  if (noise > m) throw DomainError("noise count exceeds equation count");
  if (!planted && noise != 0) throw DomainError("noise needs a planted assignment");
  std::mt19937_64 rng(seed);
  Max3LinSystem l(ring, n);
  GeneratorInfo info;
  info.seed = seed;
  info.noise = noise;
  if (!ring.is_finite()) info.coeff_bound = detail::kGeneratorCoeffBound;

  std::vector<RingElement> x;
  if (planted) {
    for (std::size_t v = 0; v < n; ++v) x.push_back(detail::draw_any(rng, ring));
    info.planted = x;
  }
  // noisy rows: the first `noise` entries of a seeded shuffle of 0..m-1
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[detail::draw(rng, i)]);
  std::vector<bool> noisy(m, false);
  for (std::size_t k = 0; k < noise; ++k) noisy[order[k]] = true;

  for (std::size_t i = 0; i < m; ++i) {
    LinearRow row;
    std::vector<std::size_t> pool(n);
    for (std::size_t v = 0; v < n; ++v) pool[v] = v;
    for (std::size_t k = 0; k < 3; ++k) {
      std::size_t pick = k + detail::draw(rng, n - k);
      std::swap(pool[k], pool[pick]);
      row.vars[k] = pool[k];
      row.coeffs[k] = detail::draw_nonzero(rng, ring);
    }
    if (planted) {
      RingElement lhs = row.coeffs[0] * x[row.vars[0]] + row.coeffs[1] * x[row.vars[1]] + row.coeffs[2] * x[row.vars[2]];
      row.constant = -lhs;
      if (noisy[i]) row.constant += detail::draw_nonzero(rng, ring);
    } else {
      row.constant = detail::draw_any(rng, ring);
    }
    l.add_row(std::move(row));
  }
  l.generator = std::move(info);
  return l;
}

inline std::string to_text(const Max3LinSystem& l) {
  std::ostringstream out;
  if (l.generator) {
    const auto& g = *l.generator;
    out << "# seed " << g.seed;
    if (g.planted) {
      out << " planted";
      for (const auto& v : *g.planted) out << ' ' << v.to_string();
      out << " noise " << g.noise;
    }
    out << '\n';
    if (g.coeff_bound) out << "# coeffs " << -*g.coeff_bound << ".." << *g.coeff_bound << '\n';
  }
  out << "ring " << l.ring().to_string() << '\n' << "vars " << l.n() << '\n';
  for (const auto& r : l.rows()) {
    out << "eq";
    for (std::size_t k = 0; k < 3; ++k) out << ' ' << r.vars[k] + 1 << ' ' << r.coeffs[k].to_string();
    out << ' ' << r.constant.to_string() << '\n';
  }
  return out.str();
}

inline Max3LinSystem parse_max3lin_file(std::string_view text) {
  using namespace detail;
  auto lines = read_lines(text);
  std::size_t i = 0;
  std::vector<const Line*> comments;
  auto next_content = [&]() -> const Line& {
    while (i < lines.size() && lines[i].comment) comments.push_back(&lines[i++]);
    if (i == lines.size()) throw FormatError("unexpected end of Max-3Lin file");
    return lines[i++];
  };
  RingSpec ring = parse_ring_line(next_content());
  const Line& vl = next_content();
  if (vl.tokens.size() != 2 || vl.tokens[0] != "vars") fail(vl, "expected 'vars <n>'");
  Max3LinSystem l(ring, parse_count(vl.tokens[1], vl));
  for (; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.comment) {
      comments.push_back(&line);
      continue;
    }
    const auto& t = line.tokens;
    if (t[0] != "eq" || t.size() != 8) fail(line, "expected 'eq <j1> <c1> <j2> <c2> <j3> <c3> <b>'");
    LinearRow row;
    for (std::size_t k = 0; k < 3; ++k) {
      auto j = parse_count(t[1 + 2 * k], line);
      if (j < 1 || j > l.n()) fail(line, "variable index out of range (indices are 1-based)");
      row.vars[k] = j - 1;
      row.coeffs[k] = parse_coef(ring, t[2 + 2 * k], line);
    }
    row.constant = parse_coef(ring, t[7], line);
    try {
      l.add_row(std::move(row));
    } catch (const DomainError& e) {
      fail(line, e.what());
    }
  }
  for (const Line* c : comments) {
    const auto& t = c->tokens;
    if (t.size() >= 2 && t[0] == "seed") {
      GeneratorInfo g = l.generator.value_or(GeneratorInfo{});
      g.seed = parse_count(t[1], *c);
      if (t.size() > 2) {
        if (t[2] != "planted" || t.size() != 5 + l.n() || t[3 + l.n()] != "noise") fail(*c, "malformed seed header");
        std::vector<RingElement> x;
        for (std::size_t v = 0; v < l.n(); ++v) x.push_back(parse_coef(ring, t[3 + v], *c));
        g.planted = std::move(x);
        g.noise = parse_count(t[4 + l.n()], *c);
      }
      l.generator = std::move(g);
    } else if (t.size() == 2 && t[0] == "coeffs") {
      auto dots = t[1].find("..");
      if (dots == std::string::npos) fail(*c, "malformed coeffs header");
      GeneratorInfo g = l.generator.value_or(GeneratorInfo{});
      g.coeff_bound = parse_count(t[1].substr(dots + 2), *c);
      l.generator = std::move(g);
    }
  }
  return l;
}

}  // namespace shiftforge
