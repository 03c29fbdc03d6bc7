#include <gtest/gtest.h>

#include "support.hpp"

using namespace sft;

namespace {

const RingSpec Z = RingSpec::integers();
const RingElement two = Z.from_int(2);

EquationSystem system_of(std::size_t n, std::initializer_list<SparsePoly> eqs) {
  EquationSystem s = EquationSystem::over(Z, detail::default_names(n));
  for (const auto& e : eqs) s.add_equation(e);
  return s;
}

// {x1 - 1}
EquationSystem linear_one() { return system_of(1, {poly(Z, 1, {{1, {1}}, {-1, {0}}})}); }

// {x1 - 1, x2 - x1^2}
EquationSystem two_equation() {
  return system_of(2, {poly(Z, 2, {{1, {1, 0}}, {-1, {0, 0}}}), poly(Z, 2, {{1, {0, 1}}, {-1, {2, 0}}})});
}

// Per monomial: the summed exponent over the W block.
bool is_w_linear(const HNInstance& inst) {
  for (const auto& [m, c] : inst.polynomial.terms()) {
    std::uint32_t wdeg = 0;
    for (auto w : inst.witness.wvars) wdeg += m[w];
    if (wdeg != 1) return false;
  }
  return true;
}

/// System over Z with a planted solution in [-3, 3]^n.
std::pair<EquationSystem, std::vector<RingElement>> planted_system(std::mt19937_64& rng, std::size_t n,
                                                                   std::size_t r) {
  auto a = random_vector(rng, Z, n, 3);
  EquationSystem s = EquationSystem::over(Z, detail::default_names(n));
  for (std::size_t i = 0; i < r; ++i) {
    auto f = random_poly(rng, Z, n, 3, 3, 4);
    f -= SparsePoly::constant(Z, n, f.eval(a));
    s.add_equation(f);
  }
  return {s, a};
}

std::vector<HNInstance> small_instances() {
  std::vector<HNInstance> out;
  std::vector<EquationSystem> systems{
      linear_one(),
      system_of(1, {poly(Z, 1, {{1, {2}}, {-4, {0}}})}),
      system_of(1, {poly(Z, 1, {{1, {2}}, {1, {0}}})}),
      system_of(2, {poly(Z, 2, {{1, {1, 0}}, {1, {0, 1}}, {-3, {0, 0}}})}),
      system_of(2, {poly(Z, 2, {{1, {1, 1}}, {-2, {0, 0}}})}),
      system_of(1, {poly(Z, 1, {{2, {1}}, {-1, {0}}})}),
      system_of(1, {poly(Z, 1, {{1, {1}}, {-1, {0}}}), poly(Z, 1, {{1, {1}}, {-2, {0}}})}),
      system_of(1, {poly(Z, 1, {{1, {1}}, {1, {0}}}), poly(Z, 1, {{3, {1}}, {3, {0}}})}),
  };
  for (const auto& s : systems) {
    auto red = reduce_hn(s, two);
    if (auto* inst = std::get_if<HNInstance>(&red)) out.push_back(*inst);
  }
  return out;
}

}  // namespace

TEST(BuildPS, SingleEquation) {
  auto inst = build_P_S(linear_one(), two);
  // catalog x0, x1, w1
  EXPECT_EQ(inst.polynomial, poly(Z, 3, {{1, {0, 1, 1}}, {-1, {0, 0, 1}}}));
  EXPECT_EQ(inst.sigma(), 2u);
  EXPECT_EQ(inst.polynomial.names(), (std::vector<std::string>{"x0", "x1", "w1"}));
}

TEST(BuildPS, MergedLinearTermsUndercutTheCount) {
  auto inst = build_P_S(two_equation(), two);
  // catalog x0, x1, x2, w1, w2
  auto expected = poly(Z, 5, {{1, {0, 1, 0, 1, 0}},
                              {-1, {0, 0, 0, 1, 0}},
                              {-2, {0, 2, 0, 0, 1}},
                              {1, {1, 0, 0, 0, 1}},
                              {1, {0, 1, 0, 0, 1}},
                              {3, {0, 0, 1, 0, 1}}});
  EXPECT_EQ(inst.polynomial, expected);
  EXPECT_EQ(inst.sigma(), 6u);
  EXPECT_EQ(inst.sparsity_bound(), 7u);
}

TEST(BuildPS, Preconditions) {
  auto f5 = RingSpec::prime_field(5);
  EquationSystem s = EquationSystem::over(f5, {"x1"});
  s.add_equation(poly(f5, 1, {{1, {1}}, {-1, {0}}}));
  EXPECT_THROW(build_P_S(s, f5.from_int(2)), UnsupportedDomain);
  EXPECT_THROW(build_P_S(linear_one(), Z.one()), InvalidGamma);
  EXPECT_THROW(build_P_S(linear_one(), Z.from_int(-1)), InvalidGamma);
  EXPECT_THROW(build_P_S(linear_one(), Z.zero()), InvalidGamma);
  auto two_constants = system_of(2, {poly(Z, 2, {{1, {1, 0}}, {2, {0, 0}}}), poly(Z, 2, {{1, {0, 1}}, {3, {0, 0}}})});
  EXPECT_THROW(build_P_S(two_constants, two), PreconditionError);
  EXPECT_THROW(build_P_S(system_of(1, {poly(Z, 1, {{1, {1}}})}), two), PreconditionError);
}

TEST(BuildPS, ConstantEquationNeedNotComeFirst) {
  auto s = system_of(2, {poly(Z, 2, {{1, {0, 1}}, {-1, {1, 0}}}), poly(Z, 2, {{1, {1, 0}}, {-1, {0, 0}}})});
  auto inst = build_P_S(s, two);
  EXPECT_EQ(inst.witness.g1, 1u);
  // w1 multiplies g1 = x1 - 1
  EXPECT_EQ(inst.polynomial.coefficient({0, 1, 0, 1, 0}), Z.one());
  EXPECT_EQ(inst.polynomial.coefficient({0, 0, 0, 1, 0}), Z.from_int(-1));
}

TEST(SolutionToShift, Examples) {
  auto inst = build_P_S(linear_one(), two);
  auto b = solution_to_shift(inst, ints(Z, {1}));
  EXPECT_EQ(b, ints(Z, {-1, 1}));
  auto shifted = shift_x_block(inst, b);
  EXPECT_EQ(shifted, poly(Z, 3, {{1, {0, 1, 1}}}));
  EXPECT_EQ(shifted.sparsity(), inst.sigma() - 1);

  auto inst2 = build_P_S(two_equation(), two);
  auto b2 = solution_to_shift(inst2, ints(Z, {1, 1}));
  EXPECT_EQ(b2, ints(Z, {-2, 1, 1}));
  auto expected = poly(Z, 5, {{1, {0, 1, 0, 1, 0}},
                              {-2, {0, 2, 0, 0, 1}},
                              {-3, {0, 1, 0, 0, 1}},
                              {3, {0, 0, 1, 0, 1}},
                              {1, {1, 0, 0, 0, 1}}});
  EXPECT_EQ(shift_x_block(inst2, b2), expected);
  EXPECT_EQ(expected.sparsity(), 5u);

  EXPECT_THROW(solution_to_shift(inst, ints(Z, {0})), NotASolution);
}

TEST(ShiftToSolution, Examples) {
  auto inst = build_P_S(linear_one(), two);
  auto a = shift_to_solution(inst, ints(Z, {-1, 1}));
  EXPECT_EQ(a, ints(Z, {1}));
  EXPECT_TRUE(check_solution(inst.system, a));
  EXPECT_THROW(shift_to_solution(inst, ints(Z, {0, 0})), NoReduction);
  EXPECT_THROW(shift_to_solution(inst, ints(Z, {5, 1})), StructureError);
  EXPECT_THROW(shift_to_solution(inst, ints(Z, {5})), ArityMismatch);
}

TEST(ReduceHN, ProductSystemCounts) {
  auto s = system_of(3, {poly(Z, 3, {{1, {1, 1, 1}}, {-1, {0, 0, 0}}})});
  auto red = reduce_hn(s, two);
  ASSERT_TRUE(std::holds_alternative<HNInstance>(red));
  const auto& inst = std::get<HNInstance>(red);
  EXPECT_EQ(inst.t(), 4u);
  EXPECT_EQ(inst.N(), 6u);
  EXPECT_EQ(inst.witness.xprime.size() + 1, 7u);
  EXPECT_EQ(inst.witness.wvars.size(), 4u);
  EXPECT_EQ(inst.polynomial.nvars(), 11u);
}

TEST(ReduceHN, HomogeneousIsTriviallySolvable) {
  auto red = reduce_hn(system_of(2, {poly(Z, 2, {{1, {1, 0}}, {-1, {0, 1}}})}), two);
  ASSERT_TRUE(std::holds_alternative<TriviallySolvable>(red));
  EXPECT_EQ(std::get<TriviallySolvable>(red).certificate, ints(Z, {0, 0}));
}

TEST(ReduceHN, ConstantEquationHasNoSparsifyingShift) {
  auto red = reduce_hn(system_of(1, {poly(Z, 1, {{2, {0}}})}), two);
  ASSERT_TRUE(std::holds_alternative<HNInstance>(red));
  const auto& inst = std::get<HNInstance>(red);
  EXPECT_EQ(inst.system.equations()[inst.witness.g1], poly(Z, 1, {{2, {0}}}));
  auto rep = search_min_sparsity(inst.polynomial, SearchDomain::integer_box(2));
  EXPECT_EQ(rep.min_sparsity, inst.sigma());
}

TEST(ReduceHN, RejectsOtherRings) {
  auto q = RingSpec::rationals();
  EquationSystem s = EquationSystem::over(q, {"x1"});
  s.add_equation(poly(q, 1, {{1, {1}}, {-1, {0}}}));
  EXPECT_THROW(reduce_hn(s, two), UnsupportedDomain);
}

TEST(ReduceHN, CircuitInput) {
  Circuit c(Z, 2, {InputNode{0}, InputNode{1}, ConstNode{Z.from_int(-6)}, MulNode{0, 1}, AddNode{{3, 2}}}, 4);
  auto red = reduce_hn(CircuitSystem{c}, two);
  ASSERT_TRUE(std::holds_alternative<HNInstance>(red));
  const auto& inst = std::get<HNInstance>(red);
  auto full = extend_solution(*inst.recipe, ints(Z, {2, 3}));
  auto b = solution_to_shift(inst, full);
  EXPECT_EQ(shift_x_block(inst, b).sparsity(), inst.sigma() - 1);
}

TEST(HNInstance, StructuralInvariants) {
  std::mt19937_64 rng(41);
  int built = 0;
  for (int k = 0; k < 100; ++k) {
    auto s = random_system(rng, Z, 3, static_cast<std::size_t>(uniform(rng, 1, 3)), 4, 3);
    auto red = reduce_hn(s, two);
    auto* inst = std::get_if<HNInstance>(&red);
    if (inst == nullptr) continue;
    ++built;
    ASSERT_TRUE(is_w_linear(*inst));
    ASSERT_LE(inst->polynomial.degree(), 3u);
    ASSERT_LE(inst->sigma(), inst->sparsity_bound());
  }
  EXPECT_GT(built, 50);
}

TEST(HNInstance, ShiftingWNeverHelps) {
  std::mt19937_64 rng(42);
  auto instances = small_instances();
  for (int k = 0; k < 200; ++k) {
    const auto& inst = instances[static_cast<std::size_t>(k) % instances.size()];
    auto b = random_vector(rng, Z, inst.N() + 1, 3);
    auto c = random_vector(rng, Z, inst.t(), 3);
    std::vector<RingElement> full = b;
    full.insert(full.end(), c.begin(), c.end());
    ASSERT_GE(inst.polynomial.shift(full).sparsity(), shift_x_block(inst, b).sparsity());
  }
}

TEST(HNInstance, ZeroSumFirstCoordinateIsBest) {
  std::mt19937_64 rng(43);
  int solutions = 0;
  for (int k = 0; k < 100; ++k) {
    auto [s, a] = planted_system(rng, 2, 2);
    auto red = reduce_hn(s, two);
    auto* inst = std::get_if<HNInstance>(&red);
    if (inst == nullptr) continue;
    auto b = solution_to_shift(*inst, extend_solution(*inst->recipe, a));
    std::size_t best = shift_x_block(*inst, b).sparsity();
    for (std::int64_t d = -3; d <= 3; ++d) {
      if (d == 0) continue;
      auto b2 = b;
      b2[0] += Z.from_int(d);
      ASSERT_GE(shift_x_block(*inst, b2).sparsity(), best);
    }
    ++solutions;
  }
  EXPECT_GT(solutions, 50);
}

TEST(HNInstance, PlantedSolutionsDropExactlyOne) {
  std::mt19937_64 rng(44);
  int checked = 0;
  for (int k = 0; k < 150; ++k) {
    auto [s, a] = planted_system(rng, static_cast<std::size_t>(uniform(rng, 1, 3)), 2);
    auto red = reduce_hn(s, two);
    auto* inst = std::get_if<HNInstance>(&red);
    if (inst == nullptr) continue;
    auto b = solution_to_shift(*inst, extend_solution(*inst->recipe, a));
    ASSERT_EQ(shift_x_block(*inst, b).sparsity() + 1, inst->sigma());
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(HNInstance, ZeroSumSparsifyingShiftsYieldSolutionsExhaustively) {
  for (const auto& inst : small_instances()) {
    ASSERT_LE(inst.N(), 4u);
    auto rep = search_min_sparsity(inst.polynomial, SearchDomain::integer_box(2).zero_sum(), Metric::Total, inst.N() + 1);
    std::vector<RingElement> b(inst.N() + 1, Z.zero());
    for_each_vector(box_values(Z, 2), inst.N(), [&](const std::vector<RingElement>& tail) {
      RingElement sum = Z.zero();
      for (std::size_t i = 0; i < tail.size(); ++i) {
        b[i + 1] = tail[i];
        sum += tail[i];
      }
      b[0] = -sum;
      if (shift_x_block(inst, b).sparsity() >= inst.sigma()) return;
      auto a = shift_to_solution(inst, b);
      ASSERT_TRUE(check_solution(inst.system, a));
    });
    // the search drops iff some solution of T induces a shift inside the box
    bool reachable = false;
    for_each_vector(box_values(Z, 2), inst.N(), [&](const std::vector<RingElement>& a) {
      if (!check_solution(inst.system, a)) return;
      auto shift = solution_to_shift(inst, a);
      if (abs(shift[0].integer()) <= 2) reachable = true;
    });
    ASSERT_EQ(rep.min_sparsity < inst.sigma(), reachable);
  }
}

TEST(HNRoundTrip, Examples) {
  auto rep = verify_hn_roundtrip(linear_one(), two, 2);
  EXPECT_FALSE(rep.trivially_solvable);
  EXPECT_EQ(rep.solutions, 1u);
  EXPECT_EQ(rep.sparsifying_shifts, 1u);
  EXPECT_TRUE(rep.consistent());

  auto none = verify_hn_roundtrip(system_of(1, {poly(Z, 1, {{1, {2}}, {1, {0}}})}), two, 2);
  EXPECT_EQ(none.solutions, 0u);
  EXPECT_EQ(none.sparsifying_shifts, 0u);
  EXPECT_TRUE(none.consistent());

  auto triv = verify_hn_roundtrip(system_of(2, {poly(Z, 2, {{1, {1, 0}}, {-1, {0, 1}}})}), two, 2);
  EXPECT_TRUE(triv.trivially_solvable);
  EXPECT_EQ(triv.certificate, ints(Z, {0, 0}));
  EXPECT_TRUE(triv.consistent());
}

TEST(Witness, RoundTrip) {
  auto inst = build_P_S(two_equation(), Z.from_int(6));
  auto text = to_text(inst.witness);
  auto back = parse_witness(text);
  EXPECT_EQ(back, inst.witness);
  EXPECT_EQ(to_text(back), text);
  EXPECT_THROW(parse_witness("gamma 2\n"), FormatError);
  EXPECT_THROW(parse_witness("# witness\ngamma 2\nx0 0\n"), FormatError);
}
