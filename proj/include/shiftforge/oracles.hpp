#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shiftforge/hn_reduce.hpp"
#include "shiftforge/limits.hpp"
#include "shiftforge/max3lin.hpp"

namespace shiftforge {

enum class SearchMode { ExhaustiveFinite, IntegerBox, RationalGrid };
enum class Restriction { None, ZeroSumFirstCoordinate, SupportedOnLastN };
enum class Metric { Total, Nonconstant };

/// Finite stand-in for "for all vectors a": the whole of a finite ring, an
/// integer box [-B, B], or a grid of fractions p/q with |p| <= P, 1 <= q <= Q.
struct SearchDomain {
  SearchMode mode = SearchMode::ExhaustiveFinite;
  std::int64_t box = 0;
  std::int64_t numerator_range = 0;
  std::int64_t denominator_range = 1;
  Restriction restriction = Restriction::None;
  std::size_t support_last = 0;
  std::uint64_t point_cap = kDefaultPointCap;
  unsigned jobs = 1;

  static SearchDomain exhaustive() { return {}; }
  static SearchDomain integer_box(std::int64_t b) {
    SearchDomain d;
    d.mode = SearchMode::IntegerBox;
    d.box = b;
    return d;
  }
  static SearchDomain rational_grid(std::int64_t p, std::int64_t q) {
    SearchDomain d;
    d.mode = SearchMode::RationalGrid;
    d.numerator_range = p;
    d.denominator_range = q;
    return d;
  }
  SearchDomain& zero_sum() {
    restriction = Restriction::ZeroSumFirstCoordinate;
    return *this;
  }
  SearchDomain& supported_on_last(std::size_t n) {
    restriction = Restriction::SupportedOnLastN;
    support_last = n;
    return *this;
  }
  SearchDomain& with_jobs(unsigned k) {
    jobs = std::max(1u, k);
    return *this;
  }
  SearchDomain& with_cap(std::uint64_t cap) {
    point_cap = cap;
    return *this;
  }

  bool complete() const { return mode == SearchMode::ExhaustiveFinite; }
};

/// Coordinate values of a domain in canonical ascending order.
inline std::vector<RingElement> domain_values(const SearchDomain& dom, const RingSpec& ring) {
  std::vector<RingElement> out;
  switch (dom.mode) {
    case SearchMode::ExhaustiveFinite:
      if (!ring.is_finite())
        throw DomainError("exhaustive search needs a finite ring; " + ring.to_string() + " takes --box or a grid");
      for (std::uint64_t i = 0; i < ring.cardinality(); ++i) out.push_back(ring.element_at(i));
      break;
    case SearchMode::IntegerBox:
      if (ring.is_finite()) throw DomainError("integer boxes apply to Z and Q; use exhaustive search over " + ring.to_string());
      if (dom.box < 0) throw DomainError("box bound must be non-negative");
      for (std::int64_t v = -dom.box; v <= dom.box; ++v) out.push_back(ring.from_int(v));
      break;
    case SearchMode::RationalGrid: {
      if (ring.kind() != RingKind::Rationals) throw DomainError("rational grids apply to Q only");
      if (dom.numerator_range < 0 || dom.denominator_range < 1) throw DomainError("bad grid ranges");
      std::set<Rational> values;
      for (std::int64_t p = -dom.numerator_range; p <= dom.numerator_range; ++p)
        for (std::int64_t q = 1; q <= dom.denominator_range; ++q) values.insert(Rational(p) / Rational(q));
      for (const auto& v : values) out.push_back(ring.from_rational(v));
      break;
    }
  }
  return out;
}

namespace detail {

/// Vectors of length `len`: coordinates in `free` range over `values`
/// (first free coordinate most significant), the rest are zero; in zero-sum
/// mode coordinate 0 is minus the sum of the others and must be a domain value.
class PointSpace {
 public:
  PointSpace(const RingSpec& ring, std::vector<RingElement> values, std::size_t len,
             std::vector<std::size_t> free, bool zero_sum, std::uint64_t cap)
      : ring_(ring), values_(std::move(values)), len_(len), free_(std::move(free)), zero_sum_(zero_sum) {
    total_ = 1;
    for (std::size_t k = 0; k < free_.size(); ++k) {
      if (total_ > cap / values_.size())
        throw CapExceeded("enumeration of " + std::to_string(values_.size()) + "^" + std::to_string(free_.size()) +
                          " points exceeds the cap (" + std::to_string(cap) + ")");
      total_ *= values_.size();
    }
    if (total_ > cap) throw CapExceeded("enumeration exceeds the cap (" + std::to_string(cap) + ")");
  }

  std::uint64_t total() const { return total_; }

  bool point_at(std::uint64_t index, std::vector<RingElement>& out) const {
    out.assign(len_, ring_.zero());
    for (std::size_t k = free_.size(); k-- > 0;) {
      out[free_[k]] = values_[index % values_.size()];
      index /= values_.size();
    }
    if (zero_sum_) {
      RingElement s = ring_.zero();
      for (std::size_t i = 1; i < len_; ++i) s += out[i];
      out[0] = -s;
      return std::binary_search(values_.begin(), values_.end(), out[0]);
    }
    return true;
  }

 private:
  RingSpec ring_;
  std::vector<RingElement> values_;
  std::size_t len_;
  std::vector<std::size_t> free_;
  bool zero_sum_;
  std::uint64_t total_ = 0;
};

/// Runs body(local, begin, end) on `jobs` contiguous index ranges and folds
/// the partial results left to right with merge(acc, part).
template <class Local, class Body, class Merge>
Local run_partitioned(std::uint64_t total, unsigned jobs, Body body, Merge merge) {
  jobs = std::max(1u, jobs);
  if (jobs == 1 || total < 2) {
    Local local;
    body(local, std::uint64_t{0}, total);
    return local;
  }
  std::uint64_t chunk = (total + jobs - 1) / jobs;
  std::vector<std::future<Local>> parts;
  for (std::uint64_t begin = 0; begin < total; begin += chunk) {
    std::uint64_t end = std::min(total, begin + chunk);
    parts.push_back(std::async(std::launch::async, [&body, begin, end] {
      Local local;
      body(local, begin, end);
      return local;
    }));
  }
  Local acc = parts[0].get();
  for (std::size_t k = 1; k < parts.size(); ++k) merge(acc, parts[k].get());
  return acc;
}

inline bool lex_less(const std::vector<RingElement>& a, const std::vector<RingElement>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline std::size_t measure(const SparsePoly& p, Metric metric) {
  return metric == Metric::Total ? p.sparsity() : p.nonconstant_sparsity();
}

inline std::string vector_text(std::span<const RingElement> v) {
  if (v.empty()) return "()";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].to_string();
  return out;
}

}  // namespace detail

/// Ordered key-value report, one `key value` pair per line.
struct Report {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
  std::string to_text() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " " + v + "\n";
    return out;
  }
};

struct SearchReport {
  std::size_t min_sparsity = 0;
  /// Lexicographically least minimiser, over all variables of the polynomial.
  std::vector<RingElement> witness;
  std::uint64_t points = 0;
  bool complete = false;

  Report report() const {
    Report r;
    r.add("min_sparsity", std::to_string(min_sparsity));
    r.add("witness", detail::vector_text(witness));
    r.add("points", std::to_string(points));
    r.add("complete", complete ? "yes" : "no");
    return r;
  }
};

/// Minimum sparsity of P(X + a) over the domain. Only the first `shiftable`
/// variables move (all of them by default); the rest stay unshifted.
inline SearchReport search_min_sparsity(const SparsePoly& p, const SearchDomain& dom, Metric metric = Metric::Total,
                                        std::optional<std::size_t> shiftable = std::nullopt) {
  const std::size_t k = shiftable.value_or(p.nvars());
  if (k > p.nvars()) throw ArityMismatch("shiftable count exceeds variable count");
  std::vector<std::size_t> free;
  switch (dom.restriction) {
    case Restriction::None:
      for (std::size_t i = 0; i < k; ++i) free.push_back(i);
      break;
    case Restriction::ZeroSumFirstCoordinate:
      if (k == 0) throw DomainError("zero-sum restriction needs at least one coordinate");
      for (std::size_t i = 1; i < k; ++i) free.push_back(i);
      break;
    case Restriction::SupportedOnLastN:
      if (dom.support_last > k) throw DomainError("support size exceeds the shifted coordinates");
      for (std::size_t i = k - dom.support_last; i < k; ++i) free.push_back(i);
      break;
  }
  detail::PointSpace space(p.ring(), domain_values(dom, p.ring()), k, free,
                           dom.restriction == Restriction::ZeroSumFirstCoordinate, dom.point_cap);

  struct Local {
    std::optional<std::size_t> best;
    std::vector<RingElement> witness;
    std::uint64_t points = 0;
  };
  auto better = [](const Local& a, std::size_t s, const std::vector<RingElement>& v) {
    return !a.best || s < *a.best || (s == *a.best && detail::lex_less(v, a.witness));
  };
  const std::vector<RingElement> tail(p.nvars() - k, p.ring().zero());
  Local result = detail::run_partitioned<Local>(
      space.total(), dom.jobs,
      [&](Local& local, std::uint64_t begin, std::uint64_t end) {
        std::vector<RingElement> point;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          if (!space.point_at(idx, point)) continue;
          ++local.points;
          point.insert(point.end(), tail.begin(), tail.end());
          std::size_t s = detail::measure(p.shift(point), metric);
          if (better(local, s, point)) {
            local.best = s;
            local.witness = point;
          }
        }
      },
      [&](Local& acc, const Local& part) {
        acc.points += part.points;
        if (part.best && better(acc, *part.best, part.witness)) {
          acc.best = part.best;
          acc.witness = part.witness;
        }
      });
  if (!result.best) throw DomainError("the search domain contains no admissible point");
  return SearchReport{*result.best, std::move(result.witness), result.points, dom.complete()};
}

struct SolveReport {
  /// Lexicographically least solution in the domain.
  std::optional<std::vector<RingElement>> solution;
  std::uint64_t points = 0;
  bool complete = false;

  Report report() const {
    Report r;
    r.add("solution", solution ? detail::vector_text(*solution) : "NONE");
    r.add("points", std::to_string(points));
    r.add("complete", complete ? "yes" : "no");
    return r;
  }
};

namespace detail {

template <class Pred>
SolveReport first_satisfying(const RingSpec& ring, std::size_t len, const SearchDomain& dom, Pred pred) {
  if (dom.restriction != Restriction::None) throw DomainError("system solving takes no shift restriction");
  std::vector<std::size_t> free(len);
  for (std::size_t i = 0; i < len; ++i) free[i] = i;
  PointSpace space(ring, domain_values(dom, ring), len, free, false, dom.point_cap);
  struct Local {
    std::optional<std::vector<RingElement>> found;
    std::uint64_t points = 0;
  };
  Local result = run_partitioned<Local>(
      space.total(), dom.jobs,
      [&](Local& local, std::uint64_t begin, std::uint64_t end) {
        std::vector<RingElement> point;
        for (std::uint64_t idx = begin; idx < end && !local.found; ++idx) {
          space.point_at(idx, point);
          ++local.points;
          if (pred(point)) local.found = point;
        }
      },
      [](Local& acc, const Local& part) {
        if (acc.found) return;  // earlier ranges hold lexicographically smaller points
        acc.points += part.points;
        acc.found = part.found;
      });
  return SolveReport{std::move(result.found), result.points, dom.complete()};
}

}  // namespace detail

/// Lexicographically least common root of the system inside the domain.
inline SolveReport solve_system(const EquationSystem& s, const SearchDomain& dom) {
  return detail::first_satisfying(s.ring(), s.nvars(), dom,
                                  [&](const std::vector<RingElement>& a) { return check_solution(s, a); });
}

inline SolveReport solve_system(const CircuitSystem& s, const SearchDomain& dom) {
  if (s.empty()) throw PreconditionError("no circuits given");
  return detail::first_satisfying(s[0].ring(), s[0].nvars(), dom, [&](const std::vector<RingElement>& a) {
    for (const auto& c : s)
      if (!c.eval(a).is_zero()) return false;
    return true;
  });
}

struct MaxsatReport {
  std::size_t best = 0;
  std::vector<RingElement> witness;
  std::uint64_t points = 0;
  bool complete = false;

  Report report() const {
    Report r;
    r.add("maxsat", std::to_string(best));
    r.add("witness", detail::vector_text(witness));
    r.add("points", std::to_string(points));
    r.add("complete", complete ? "yes" : "no");
    return r;
  }
};

/// Maximum number of simultaneously satisfied rows over the domain.
inline MaxsatReport maxsat(const Max3LinSystem& l, const SearchDomain& dom) {
  if (dom.restriction != Restriction::None) throw DomainError("maxsat takes no shift restriction");
  std::vector<std::size_t> free(l.n());
  for (std::size_t i = 0; i < l.n(); ++i) free[i] = i;
  detail::PointSpace space(l.ring(), domain_values(dom, l.ring()), l.n(), free, false, dom.point_cap);
  struct Local {
    std::optional<std::size_t> best;
    std::vector<RingElement> witness;
    std::uint64_t points = 0;
  };
  Local result = detail::run_partitioned<Local>(
      space.total(), dom.jobs,
      [&](Local& local, std::uint64_t begin, std::uint64_t end) {
        std::vector<RingElement> point;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          space.point_at(idx, point);
          ++local.points;
          std::size_t k = count_satisfied(l, point);
          if (!local.best || k > *local.best) {
            local.best = k;
            local.witness = point;
          }
        }
      },
      [](Local& acc, const Local& part) {
        acc.points += part.points;
        if (part.best && (!acc.best || *part.best > *acc.best)) {
          acc.best = part.best;
          acc.witness = part.witness;
        }
      });
  return MaxsatReport{result.best.value_or(0), std::move(result.witness), result.points, dom.complete()};
}

struct HNRoundTripReport {
  bool trivially_solvable = false;
  std::vector<RingElement> certificate;
  std::size_t sigma = 0;
  /// In-box solutions of the input system.
  std::uint64_t solutions = 0;
  /// Their induced shifts that dropped sparsity by exactly one.
  std::uint64_t exact_drops = 0;
  /// In-box zero-sum shifts that reduced sparsity.
  std::uint64_t sparsifying_shifts = 0;
  std::uint64_t points = 0;
  std::vector<std::string> violations;

  bool consistent() const {
    if (trivially_solvable) return violations.empty();
    bool solvable = solutions > 0;
    bool sparsifiable = exact_drops > 0 || sparsifying_shifts > 0;
    return violations.empty() && solvable == sparsifiable;
  }

  Report report() const {
    Report r;
    if (trivially_solvable) {
      r.add("status", "trivially_solvable");
      r.add("certificate", detail::vector_text(certificate));
    } else {
      r.add("status", "instance");
      r.add("sigma", std::to_string(sigma));
      r.add("solutions", std::to_string(solutions));
      r.add("exact_drops", std::to_string(exact_drops));
      r.add("sparsifying_shifts", std::to_string(sparsifying_shifts));
      r.add("points", std::to_string(points));
    }
    r.add("consistent", consistent() ? "yes" : "no");
    r.add("violations", std::to_string(violations.size()));
    for (const auto& v : violations) r.add("violation", v);
    return r;
  }
};

namespace detail {

template <class Input, class SolvesInput>
HNRoundTripReport verify_hn_impl(const Input& input, std::size_t num_x, const RingElement& gamma, std::int64_t box,
                                 unsigned jobs, std::uint64_t cap, SolvesInput solves) {
  HNRoundTripReport rep;
  HNReduction red = reduce_hn(input, gamma);
  if (auto* triv = std::get_if<TriviallySolvable>(&red)) {
    rep.trivially_solvable = true;
    rep.certificate = triv->certificate;
    if (!solves(rep.certificate)) rep.violations.push_back("zero certificate does not solve the system");
    return rep;
  }
  const HNInstance& inst = std::get<HNInstance>(red);
  const RingSpec ring = inst.polynomial.ring();
  rep.sigma = inst.sigma();
  SearchDomain dom = SearchDomain::integer_box(box).with_jobs(jobs).with_cap(cap);

  // (i) every in-box solution induces a shift dropping exactly one monomial
  std::vector<std::size_t> xfree(num_x);
  for (std::size_t i = 0; i < num_x; ++i) xfree[i] = i;
  PointSpace xs(ring, domain_values(dom, ring), num_x, xfree, false, cap);
  for (std::uint64_t idx = 0; idx < xs.total(); ++idx) {
    std::vector<RingElement> a;
    xs.point_at(idx, a);
    if (!solves(a)) continue;
    ++rep.solutions;
    auto full = extend_solution(*inst.recipe, a);
    if (!check_solution(inst.system, full)) {
      rep.violations.push_back("extension of " + vector_text(a) + " does not solve the quadratized system");
      continue;
    }
    auto b = solution_to_shift(inst, full);
    std::size_t s = shift_x_block(inst, b).sparsity();
    if (s + 1 == rep.sigma) ++rep.exact_drops;
    else rep.violations.push_back("solution " + vector_text(a) + " gives sparsity " + std::to_string(s));
  }

  // (ii) every in-box zero-sum sparsifying shift yields a solution
  const std::size_t len = inst.N() + 1;
  std::vector<std::size_t> free;
  for (std::size_t i = 1; i < len; ++i) free.push_back(i);
  PointSpace shifts(ring, domain_values(dom, ring), len, free, true, cap);
  struct Local {
    std::uint64_t points = 0, sparsifying = 0;
    std::vector<std::string> violations;
  };
  Local part = run_partitioned<Local>(
      shifts.total(), jobs,
      [&](Local& local, std::uint64_t begin, std::uint64_t end) {
        std::vector<RingElement> b;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          if (!shifts.point_at(idx, b)) continue;
          ++local.points;
          if (shift_x_block(inst, b).sparsity() >= rep.sigma) continue;
          ++local.sparsifying;
          try {
            auto a = shift_to_solution(inst, b);
            std::vector<RingElement> ax(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(num_x));
            if (!solves(ax)) local.violations.push_back("shift " + vector_text(b) + " restricts to a non-solution");
          } catch (const InternalConsistency&) {
            local.violations.push_back("shift " + vector_text(b) + " sparsifies but does not solve T");
          }
        }
      },
      [](Local& acc, const Local& p) {
        acc.points += p.points;
        acc.sparsifying += p.sparsifying;
        acc.violations.insert(acc.violations.end(), p.violations.begin(), p.violations.end());
      });
  rep.points = part.points;
  rep.sparsifying_shifts = part.sparsifying;
  rep.violations.insert(rep.violations.end(), part.violations.begin(), part.violations.end());
  return rep;
}

}  // namespace detail

/// Bounded check of the solution <-> sparsifying-shift correspondence.
inline HNRoundTripReport verify_hn_roundtrip(const EquationSystem& s, const RingElement& gamma, std::int64_t box,
                                             unsigned jobs = 1, std::uint64_t cap = kDefaultPointCap) {
  return detail::verify_hn_impl(s, s.nvars(), gamma, box, jobs, cap,
                                [&](std::span<const RingElement> a) { return check_solution(s, a); });
}

inline HNRoundTripReport verify_hn_roundtrip(const CircuitSystem& s, const RingElement& gamma, std::int64_t box,
                                             unsigned jobs = 1, std::uint64_t cap = kDefaultPointCap) {
  if (s.empty()) throw PreconditionError("no circuits given");
  return detail::verify_hn_impl(s, s[0].nvars(), gamma, box, jobs, cap, [&](std::span<const RingElement> a) {
    for (const auto& c : s)
      if (!c.eval(a).is_zero()) return false;
    return true;
  });
}

struct Max3LinReport {
  std::size_t min_nonconstant = 0;
  std::vector<RingElement> witness;
  std::size_t maxsat = 0;
  std::size_t expected = 0;
  std::uint64_t points = 0;
  bool complete = false;
  std::vector<std::string> violations;

  bool holds() const { return violations.empty(); }

  Report report() const {
    Report r;
    r.add("min_nonconstant", std::to_string(min_nonconstant));
    r.add("witness", detail::vector_text(witness));
    r.add("maxsat", std::to_string(maxsat));
    r.add("expected", std::to_string(expected));
    r.add("points", std::to_string(points));
    r.add("complete", complete ? "yes" : "no");
    r.add("violations", std::to_string(violations.size()));
    for (const auto& v : violations) r.add("violation", v);
    return r;
  }
};

/// Exhaustive check that min over all shifts of the non-constant sparsity of
/// Q_S equals 4m - maxsat.
inline Max3LinReport verify_max3lin(const Max3LinSystem& l, unsigned jobs = 1, std::uint64_t cap = kDefaultPointCap) {
  if (!l.ring().is_finite()) throw DomainError("verify_max3lin needs a finite ring");
  SearchDomain dom = SearchDomain::exhaustive().with_jobs(jobs).with_cap(cap);
  QSInstance q = build_Q_S(l);
  SearchReport s = search_min_sparsity(q.polynomial, dom, Metric::Nonconstant);
  MaxsatReport ms = maxsat(l, dom);
  Max3LinReport rep;
  rep.min_nonconstant = s.min_sparsity;
  rep.witness = s.witness;
  rep.maxsat = ms.best;
  rep.expected = 4 * l.m() - ms.best;
  rep.points = s.points;
  rep.complete = true;
  if (rep.min_nonconstant != rep.expected)
    rep.violations.push_back("min non-constant sparsity " + std::to_string(rep.min_nonconstant) + " != 4m - maxsat = " +
                             std::to_string(rep.expected));
  if (q.polynomial.shift(s.witness).nonconstant_sparsity() != s.min_sparsity)
    rep.violations.push_back("witness does not reproduce the reported sparsity");
  return rep;
}

}  // namespace shiftforge
