#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "shiftforge/errors.hpp"

namespace shiftforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class RingKind { Integers, Rationals, PrimeField, ModularRing };

class RingElement;

namespace detail {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d <= n / d; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

inline std::int64_t reduce_mod(const BigInt& v, std::int64_t m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

}  // namespace detail

/// One of the four supported scalar domains. Finite domains carry their modulus.
class RingSpec {
 public:
  RingSpec() = default;

  static RingSpec integers() { return {RingKind::Integers, 0}; }
  static RingSpec rationals() { return {RingKind::Rationals, 0}; }

  static RingSpec prime_field(std::int64_t p) {
    if (!detail::is_prime(p))
      throw DomainError("prime field modulus " + std::to_string(p) + " is not prime");
    return {RingKind::PrimeField, p};
  }

  static RingSpec modular(std::int64_t q) {
    if (q < 2) throw DomainError("modular ring modulus must be >= 2");
    // Residues are multiplied through __int128; keep the modulus far below 2^63.
    if (q > (std::int64_t{1} << 62)) throw DomainError("modulus too large");
    return {RingKind::ModularRing, q};
  }

  RingKind kind() const { return kind_; }
  std::int64_t modulus() const { return modulus_; }

  bool is_finite() const {
    return kind_ == RingKind::PrimeField || kind_ == RingKind::ModularRing;
  }
  bool is_field() const {
    return kind_ == RingKind::Rationals || kind_ == RingKind::PrimeField ||
           (kind_ == RingKind::ModularRing && detail::is_prime(modulus_));
  }
  bool is_integral_domain() const { return kind_ == RingKind::Integers || is_field(); }

  std::uint64_t cardinality() const {
    if (!is_finite()) throw DomainError("ring " + to_string() + " is infinite");
    return static_cast<std::uint64_t>(modulus_);
  }

  /// Textual form used on `ring` lines: "Z", "Q", "Fp 5", "Zq 6".
  std::string to_string() const {
    switch (kind_) {
      case RingKind::Integers: return "Z";
      case RingKind::Rationals: return "Q";
      case RingKind::PrimeField: return "Fp " + std::to_string(modulus_);
      case RingKind::ModularRing: return "Zq " + std::to_string(modulus_);
    }
    return "?";
  }

  RingElement zero() const;
  RingElement one() const;
  RingElement from_int(const BigInt& v) const;
  RingElement from_rational(const Rational& v) const;
  /// The `index`-th element of a finite ring in canonical order (0, 1, ..., q-1).
  RingElement element_at(std::uint64_t index) const;

  friend bool operator==(const RingSpec&, const RingSpec&) = default;

 private:
  RingSpec(RingKind kind, std::int64_t modulus) : kind_(kind), modulus_(modulus) {}

  RingKind kind_ = RingKind::Integers;
  std::int64_t modulus_ = 0;
};

/// A canonical element of some RingSpec. Values are immutable once built.
class RingElement {
 public:
  RingElement() : value_(BigInt(0)) {}

  const RingSpec& ring() const { return ring_; }

  bool is_zero() const {
    return std::visit([](const auto& v) { return v == 0; }, value_);
  }
  bool is_one() const {
    return std::visit([](const auto& v) { return v == 1; }, value_);
  }

  /// True iff some b in the ring has a*b = 1.
  bool is_unit() const {
    switch (ring_.kind()) {
      case RingKind::Integers: return abs(integer()) == 1;
      case RingKind::Rationals: return !is_zero();
      case RingKind::PrimeField: return !is_zero();
      case RingKind::ModularRing: return detail::gcd64(residue(), ring_.modulus()) == 1;
    }
    return false;
  }

  RingElement inverse() const {
    if (!is_unit()) throw DomainError(to_string() + " is not a unit in " + ring_.to_string());
    switch (ring_.kind()) {
      case RingKind::Integers: return *this;
      case RingKind::Rationals: return RingElement(ring_, Rational(1) / rational());
      default: {
        // extended Euclid on (a, q)
        std::int64_t q = ring_.modulus();
        std::int64_t old_r = residue(), r = q, old_s = 1, s = 0;
        while (r != 0) {
          std::int64_t quot = old_r / r;
          std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
          std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
        }
        return ring_.from_int(BigInt(old_s));
      }
    }
  }

  const BigInt& integer() const {
    if (ring_.kind() != RingKind::Integers) throw DomainMismatch("not an integer element");
    return std::get<BigInt>(value_);
  }
  Rational rational() const {
    if (ring_.kind() == RingKind::Integers) return Rational(std::get<BigInt>(value_));
    if (ring_.kind() == RingKind::Rationals) return std::get<Rational>(value_);
    throw DomainMismatch("not a rational element");
  }
  std::int64_t residue() const {
    if (!ring_.is_finite()) throw DomainMismatch("not a residue");
    return std::get<std::int64_t>(value_);
  }

  friend RingElement operator+(const RingElement& a, const RingElement& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x + y; });
  }
  friend RingElement operator-(const RingElement& a, const RingElement& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x - y; });
  }
  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    check_same(a, b);
    if (a.ring_.is_finite())
      return RingElement(a.ring_, detail::mulmod(a.residue(), b.residue(), a.ring_.modulus()));
    return binary(a, b, [](const auto& x, const auto& y) { return x * y; });
  }
  RingElement operator-() const { return ring_.zero() - *this; }

  RingElement& operator+=(const RingElement& b) { return *this = *this + b; }
  RingElement& operator-=(const RingElement& b) { return *this = *this - b; }
  RingElement& operator*=(const RingElement& b) { return *this = *this * b; }

  RingElement pow(std::uint64_t k) const {
    RingElement result = ring_.one(), base = *this;
    while (k > 0) {
      if (k & 1) result *= base;
      base *= base;
      k >>= 1;
    }
    return result;
  }

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.ring_ == b.ring_ && a.value_ == b.value_;
  }

  /// Canonical ordering used for deterministic tie-breaking: integers and
  /// rationals by value, residues by representative in [0, q).
  friend std::strong_ordering operator<=>(const RingElement& a, const RingElement& b) {
    check_same(a, b);
    return std::visit(
        [&](const auto& x) -> std::strong_ordering {
          using T = std::decay_t<decltype(x)>;
          const T& y = std::get<T>(b.value_);
          if (x < y) return std::strong_ordering::less;
          if (y < x) return std::strong_ordering::greater;
          return std::strong_ordering::equal;
        },
        a.value_);
  }

  /// Canonical text: signed decimal, "a/b" with b > 0 (omitted when b = 1), or a residue.
  std::string to_string() const {
    switch (ring_.kind()) {
      case RingKind::Integers: return std::get<BigInt>(value_).str();
      case RingKind::Rationals: {
        const Rational& r = std::get<Rational>(value_);
        BigInt num = boost::multiprecision::numerator(r);
        BigInt den = boost::multiprecision::denominator(r);
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
      }
      default: return std::to_string(std::get<std::int64_t>(value_));
    }
  }

 private:
  friend class RingSpec;

  RingElement(const RingSpec& ring, BigInt v) : ring_(ring), value_(std::move(v)) {}
  RingElement(const RingSpec& ring, Rational v) : ring_(ring), value_(std::move(v)) {}
  RingElement(const RingSpec& ring, std::int64_t residue) : ring_(ring), value_(residue) {}

  static void check_same(const RingElement& a, const RingElement& b) {
    if (!(a.ring_ == b.ring_))
      throw DomainMismatch("ring mismatch: " + a.ring_.to_string() + " vs " + b.ring_.to_string());
  }

  template <class Op>
  static RingElement binary(const RingElement& a, const RingElement& b, Op op) {
    check_same(a, b);
    switch (a.ring_.kind()) {
      case RingKind::Integers:
        return RingElement(a.ring_, BigInt(op(std::get<BigInt>(a.value_), std::get<BigInt>(b.value_))));
      case RingKind::Rationals:
        return RingElement(a.ring_,
                           Rational(op(std::get<Rational>(a.value_), std::get<Rational>(b.value_))));
      default: {
        std::int64_t m = a.ring_.modulus();
        std::int64_t r = op(std::get<std::int64_t>(a.value_), std::get<std::int64_t>(b.value_)) % m;
        if (r < 0) r += m;
        return RingElement(a.ring_, r);
      }
    }
  }

  RingSpec ring_;
  std::variant<BigInt, Rational, std::int64_t> value_;
};

inline RingElement RingSpec::zero() const { return from_int(0); }
inline RingElement RingSpec::one() const { return from_int(1); }

inline RingElement RingSpec::from_int(const BigInt& v) const {
  switch (kind_) {
    case RingKind::Integers: return RingElement(*this, v);
    case RingKind::Rationals: return RingElement(*this, Rational(v));
    default: return RingElement(*this, detail::reduce_mod(v, modulus_));
  }
}

inline RingElement RingSpec::from_rational(const Rational& v) const {
  switch (kind_) {
    case RingKind::Rationals: return RingElement(*this, v);
    default: {
      BigInt den = boost::multiprecision::denominator(v);
      if (den == 1) return from_int(boost::multiprecision::numerator(v));
      if (kind_ == RingKind::Integers) throw DomainError("non-integral value for Z");
      return from_int(boost::multiprecision::numerator(v)) * from_int(den).inverse();
    }
  }
}

inline RingElement RingSpec::element_at(std::uint64_t index) const {
  if (!is_finite() || index >= cardinality())
    throw DomainError("element index out of range for " + to_string());
  return RingElement(*this, static_cast<std::int64_t>(index));
}

namespace detail {

inline bool is_decimal(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

inline BigInt parse_bigint(std::string_view s) {
  if (!is_decimal(s)) throw FormatError("bad integer '" + std::string(s) + "'");
  if (s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace detail

/// Parses a coefficient. Accepts any integer for residues and any nonzero
/// denominator for rationals; the result is canonical.
inline RingElement parse_element(const RingSpec& ring, std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return ring.from_int(detail::parse_bigint(text));
  if (ring.kind() != RingKind::Rationals)
    throw FormatError("fraction '" + std::string(text) + "' outside Q");
  BigInt num = detail::parse_bigint(text.substr(0, slash));
  BigInt den = detail::parse_bigint(text.substr(slash + 1));
  if (den == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
  return ring.from_rational(Rational(num) / Rational(den));
}

/// Ring lines: "Z", "Q", "Fp <p>", "Zq <q>" (tokens after the `ring` keyword).
inline RingSpec parse_ring_tokens(const std::string& kind, const std::string* modulus) {
  if (kind == "Z" && modulus == nullptr) return RingSpec::integers();
  if (kind == "Q" && modulus == nullptr) return RingSpec::rationals();
  if ((kind == "Fp" || kind == "Zq") && modulus != nullptr) {
    BigInt m = detail::parse_bigint(*modulus);
    if (m < 2 || m > (BigInt(1) << 62)) throw FormatError("bad modulus " + *modulus);
    auto q = static_cast<std::int64_t>(m);
    return kind == "Fp" ? RingSpec::prime_field(q) : RingSpec::modular(q);
  }
  throw FormatError("unknown ring '" + kind + "'");
}

}  // namespace shiftforge
