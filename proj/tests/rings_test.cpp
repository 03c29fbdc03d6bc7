#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"

using namespace sft;

TEST(Rings, PrimeFieldAddition) {
  auto f5 = RingSpec::prime_field(5);
  EXPECT_EQ((f5.from_int(3) + f5.from_int(4)).to_string(), "2");
}

TEST(Rings, RationalProductReduces) {
  auto q = RingSpec::rationals();
  auto r = parse_element(q, "1/2") * parse_element(q, "2/3");
  EXPECT_EQ(r.to_string(), "1/3");
}

TEST(Rings, ModularZeroDivisor) {
  auto z6 = RingSpec::modular(6);
  EXPECT_TRUE((z6.from_int(2) * z6.from_int(3)).is_zero());
}

TEST(Rings, UnitsOfIntegers) {
  auto z = RingSpec::integers();
  EXPECT_FALSE(z.from_int(2).is_unit());
  EXPECT_TRUE(z.from_int(1).is_unit());
  EXPECT_TRUE(z.from_int(-1).is_unit());
  EXPECT_FALSE(z.zero().is_unit());
}

TEST(Rings, UnitInZ6FoundBySearch) {
  auto z6 = RingSpec::modular(6);
  auto five = z6.from_int(5);
  bool found = false;
  for (auto b : all_elements(z6)) found |= (five * b).is_one();
  EXPECT_TRUE(found);
  EXPECT_TRUE(five.is_unit());
  EXPECT_EQ(five.inverse(), five);
}

TEST(Rings, PrimeFieldNonzeroIsUnit) {
  auto f5 = RingSpec::prime_field(5);
  EXPECT_TRUE(f5.from_int(3).is_unit());
  EXPECT_EQ((f5.from_int(3) * f5.from_int(3).inverse()), f5.one());
}

TEST(Rings, IsUnitMatchesGcdExhaustively) {
  for (std::int64_t q = 2; q <= 30; ++q) {
    auto ring = RingSpec::modular(q);
    for (auto a : all_elements(ring)) {
      bool by_search = false;
      for (auto b : all_elements(ring)) by_search |= (a * b).is_one();
      EXPECT_EQ(a.is_unit(), std::gcd(a.residue(), q) == 1) << "q=" << q << " a=" << a.to_string();
      EXPECT_EQ(a.is_unit(), by_search);
    }
  }
}

TEST(Rings, RingLaws) {
  std::mt19937_64 rng(11);
  for (const auto& ring : sample_rings()) {
    for (int k = 0; k < 1000; ++k) {
      auto a = random_element(rng, ring, 50), b = random_element(rng, ring, 50), c = random_element(rng, ring, 50);
      ASSERT_EQ((a + b) + c, a + (b + c));
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a + b, b + a);
      ASSERT_EQ(a * b, b * a);
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a - a, ring.zero());
      ASSERT_EQ(-(-a), a);
    }
  }
}

TEST(Rings, MismatchedRingsRejected) {
  auto a = RingSpec::prime_field(5).one(), b = RingSpec::prime_field(7).one();
  EXPECT_THROW(a + b, DomainMismatch);
  EXPECT_THROW(a * b, DomainMismatch);
  EXPECT_THROW(RingSpec::integers().one() - RingSpec::rationals().one(), DomainMismatch);
}

TEST(Rings, ConstructionChecks) {
  EXPECT_THROW(RingSpec::prime_field(6), DomainError);
  EXPECT_THROW(RingSpec::prime_field(1), DomainError);
  EXPECT_THROW(RingSpec::modular(1), DomainError);
  EXPECT_NO_THROW(RingSpec::modular(4));
  EXPECT_EQ(RingSpec::prime_field(7).cardinality(), 7u);
}

TEST(Rings, CanonicalText) {
  auto q = RingSpec::rationals();
  EXPECT_EQ(parse_element(q, "4/-6").to_string(), "-2/3");
  EXPECT_EQ(parse_element(q, "6/3").to_string(), "2");
  EXPECT_EQ(parse_element(RingSpec::prime_field(5), "-1").to_string(), "4");
  EXPECT_EQ(parse_element(RingSpec::integers(), "+17").to_string(), "17");
  EXPECT_THROW(parse_element(RingSpec::integers(), "1/2"), FormatError);
  EXPECT_THROW(parse_element(q, "1/0"), FormatError);
  EXPECT_THROW(parse_element(q, "x"), FormatError);
  auto big = parse_element(RingSpec::integers(), "123456789012345678901234567890");
  EXPECT_EQ((big * big).to_string(), "15241578753238836750495351562536198787501905199875019052100");
}

TEST(Rings, OrderingIsByValueOrRepresentative) {
  auto q = RingSpec::rationals();
  EXPECT_LT(parse_element(q, "-1/2"), parse_element(q, "1/3"));
  auto f5 = RingSpec::prime_field(5);
  EXPECT_LT(f5.from_int(1), f5.from_int(-1));
  auto z = RingSpec::integers();
  EXPECT_LT(z.from_int(-3), z.from_int(2));
}

TEST(Rings, TextRoundTrip) {
  std::mt19937_64 rng(3);
  for (const auto& ring : sample_rings())
    for (int k = 0; k < 200; ++k) {
      auto a = random_element(rng, ring, 1000);
      ASSERT_EQ(parse_element(ring, a.to_string()), a);
    }
}
