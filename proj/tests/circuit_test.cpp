#include <gtest/gtest.h>

#include "support.hpp"

using namespace sft;

namespace {

const RingSpec Z = RingSpec::integers();

// x1*x2 + 3 as: in x1, in x2, const 3, mul, add
Circuit product_plus_three() {
  return Circuit(Z, 2,
                 {InputNode{0}, InputNode{1}, ConstNode{Z.from_int(3)}, MulNode{0, 1}, AddNode{{3, 2}}}, 4);
}

}  // namespace

TEST(Circuit, Evaluation) {
  EXPECT_EQ(product_plus_three().eval(ints(Z, {2, 5})), Z.from_int(13));
  EXPECT_EQ(Circuit(Z, 1, {InputNode{0}}, 0).eval(ints(Z, {7})), Z.from_int(7));
  EXPECT_TRUE(Circuit(Z, 0, {ConstNode{Z.zero()}}, 0).eval(std::vector<RingElement>{}).is_zero());
}

TEST(Circuit, Expansion) {
  EXPECT_EQ(product_plus_three().expand(), poly(Z, 2, {{1, {1, 1}}, {3, {0, 0}}}));
  EXPECT_EQ(Circuit(Z, 1, {InputNode{0}, AddNode{{0, 0}}}, 1).expand(), poly(Z, 1, {{2, {1}}}));
  Circuit square(Z, 1, {InputNode{0}, ConstNode{Z.one()}, AddNode{{0, 1}}, MulNode{2, 2}}, 3);
  EXPECT_EQ(square.expand(), poly(Z, 1, {{1, {2}}, {2, {1}}, {1, {0}}}));
}

TEST(Circuit, ExpansionCap) {
  // (x1 + ... + x4)^8 by repeated squaring has 165 terms
  std::vector<CircuitNode> nodes{InputNode{0}, InputNode{1}, InputNode{2}, InputNode{3}, AddNode{{0, 1, 2, 3}}};
  for (int k = 0; k < 3; ++k) nodes.push_back(MulNode{nodes.size() - 1, nodes.size() - 1});
  Circuit c(Z, 4, nodes, nodes.size() - 1);
  EXPECT_EQ(c.expand().sparsity(), 165u);
  EXPECT_THROW(c.expand(100), CapExceeded);
}

TEST(Circuit, ExpansionAgreesWithEvaluation) {
  std::mt19937_64 rng(21);
  for (const auto& ring : sample_rings()) {
    for (int k = 0; k < 200; ++k) {
      std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 3));
      auto c = random_circuit(rng, ring, n, static_cast<std::size_t>(uniform(rng, 1, 12)));
      auto p = c.expand();
      for (int j = 0; j < 100; ++j) {
        auto x = random_vector(rng, ring, n, 4);
        ASSERT_EQ(p.eval(x), c.eval(x));
      }
    }
  }
}

TEST(Circuit, FromSparse) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 100; ++k) {
    auto p = random_poly(rng, Z, 3, 5, 4);
    auto c = circuit_from_sparse(p);
    ASSERT_EQ(c.expand(), p);
    for (const auto& node : c.nodes())
      if (auto* add = std::get_if<AddNode>(&node)) ASSERT_GE(add->children.size(), 1u);
  }
}

TEST(Circuit, ValidationRejectsBadShapes) {
  EXPECT_THROW(Circuit(Z, 1, {MulNode{0, 0}}, 0), PreconditionError);
  EXPECT_THROW(Circuit(Z, 1, {InputNode{0}, MulNode{0, 2}, InputNode{0}}, 1), PreconditionError);
  EXPECT_THROW(Circuit(Z, 1, {InputNode{1}}, 0), PreconditionError);
  EXPECT_THROW(Circuit(Z, 1, {InputNode{0}, AddNode{{}}}, 1), PreconditionError);
  EXPECT_THROW(Circuit(Z, 1, {InputNode{0}}, 3), PreconditionError);
}

TEST(Circuit, FileRoundTrip) {
  std::mt19937_64 rng(23);
  for (const auto& ring : sample_rings())
    for (int k = 0; k < 30; ++k) {
      auto c = random_circuit(rng, ring, 2, static_cast<std::size_t>(uniform(rng, 1, 10)));
      auto text = to_text(c);
      auto back = parse_circuit_file(text);
      ASSERT_EQ(to_text(back), text);
      ASSERT_EQ(back.expand(), c.expand());
    }
}

TEST(Circuit, FileIdsNeedNotBeContiguous) {
  auto c = parse_circuit_file("ring Z\nvars 2\nnode 3 input 0\nnode 7 input 1\nnode 10 mul 3 7\noutput 10\n");
  EXPECT_EQ(c.eval(ints(Z, {4, 5})), Z.from_int(20));
  EXPECT_EQ(c.size(), 3u);
}

TEST(Circuit, DanglingNodesCountTowardSize) {
  auto c = parse_circuit_file("ring Z\nvars 1\nnode 0 input 0\nnode 1 const 9\noutput 0\n");
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.expand(), poly(Z, 1, {{1, {1}}}));
}

TEST(Circuit, ParserRejectsMalformedInput) {
  EXPECT_THROW(parse_circuit_file("ring Z\nvars 1\nnode 0 input 0\nnode 1 mul 0 0 0\noutput 1\n"), FormatError);
  EXPECT_THROW(parse_circuit_file("ring Z\nvars 1\nnode 0 mul 1 1\nnode 1 input 0\noutput 0\n"), FormatError);
  EXPECT_THROW(parse_circuit_file("ring Z\nvars 1\nnode 1 input 0\nnode 1 input 0\noutput 1\n"), FormatError);
  EXPECT_THROW(parse_circuit_file("ring Z\nvars 1\nnode 0 input 0\n"), FormatError);
  EXPECT_THROW(parse_circuit_file("ring Z\nvars 1\nnode 0 input 4\noutput 0\n"), FormatError);
  EXPECT_THROW(parse_circuit_file("ring Z\nvars 1\nnode 0 sub 0\noutput 0\n"), FormatError);
  EXPECT_THROW(parse_circuit_file("ring Z\nvars 1\nnode 0 add\noutput 0\n"), FormatError);
}
