#include <doctest.h>

#include <random>

#include "omega/ilp.hpp"
#include "test_util.hpp"

using namespace omega;
using namespace omega::ilp;

namespace {

IntegerProgram make(int n, Sense sense, std::vector<Int> obj,
                    std::vector<Int> lo, std::vector<Int> hi) {
  IntegerProgram ip;
  ip.num_vars = n;
  ip.sense = sense;
  ip.objective = std::move(obj);
  ip.lower = std::move(lo);
  ip.upper = std::move(hi);
  return ip;
}

bool witness_feasible(const IntegerProgram& ip, const SolveOutcome& out) {
  if (out.status != SolveStatus::Optimal) return true;
  Int val = 0;
  for (int i = 0; i < ip.num_vars; ++i) {
    Int v = out.witness[static_cast<std::size_t>(i)];
    if (v < ip.lower[static_cast<std::size_t>(i)] ||
        v > ip.upper[static_cast<std::size_t>(i)]) {
      return false;
    }
    val += ip.objective[static_cast<std::size_t>(i)] * v;
  }
  if (val != out.value) return false;
  for (const auto& c : ip.constraints) {
    Int act = 0;
    for (int i = 0; i < ip.num_vars; ++i) {
      act += c.coeffs[static_cast<std::size_t>(i)] *
             out.witness[static_cast<std::size_t>(i)];
    }
    bool sat = c.rel == Relation::Eq   ? act == c.rhs
               : c.rel == Relation::Le ? act <= c.rhs
                                       : act >= c.rhs;
    if (!sat) return false;
  }
  return true;
}

IntegerProgram random_program(std::mt19937_64& rng) {
  auto ri = [&](Int lo, Int hi) {
    return lo + static_cast<Int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  IntegerProgram ip;
  ip.num_vars = static_cast<int>(ri(1, 5));
  ip.sense = rng() % 2 ? Sense::Maximize : Sense::Minimize;
  for (int i = 0; i < ip.num_vars; ++i) {
    ip.objective.push_back(ri(-4, 4));
    Int lo = ri(-2, 2);
    ip.lower.push_back(lo);
    ip.upper.push_back(lo + ri(0, 8));
  }
  int m = static_cast<int>(ri(0, 4));
  for (int r = 0; r < m; ++r) {
    LinearConstraint c;
    for (int i = 0; i < ip.num_vars; ++i) c.coeffs.push_back(ri(-5, 5));
    int rel = static_cast<int>(ri(0, 2));
    c.rel = rel == 0 ? Relation::Eq : rel == 1 ? Relation::Le : Relation::Ge;
    // anchor the rhs near an attainable activity so not everything is
    // trivially infeasible
    Int act = 0;
    for (int i = 0; i < ip.num_vars; ++i) {
      act += c.coeffs[static_cast<std::size_t>(i)] *
             ri(ip.lower[static_cast<std::size_t>(i)],
                ip.upper[static_cast<std::size_t>(i)]);
    }
    c.rhs = act + ri(-3, 3);
    ip.constraints.push_back(std::move(c));
  }
  return ip;
}

}  // namespace

TEST_CASE("relaxation-style knapsack model") {
  // vars: x2, x3, y1, y2, y3 for <6,13,14>, maximize x2+x3 subject to
  // 13 x2 + 14 x3 - 6 y1 - 13 y2 - 14 y3 = 6
  IntegerProgram ip = make(5, Sense::Maximize, {1, 1, 0, 0, 0},
                           {0, 0, 0, 0, 0}, {9, 9, 39, 18, 16});
  ip.constraints.push_back({{13, 14, -6, -13, -14}, Relation::Eq, 6});
  SolveOutcome out = solve(ip);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.value == 18);
  CHECK(out.witness[0] == 9);
  CHECK(out.witness[1] == 9);
  CHECK(witness_feasible(ip, out));
}

TEST_CASE("parity-infeasible equality") {
  IntegerProgram ip = make(1, Sense::Maximize, {1}, {0}, {10});
  ip.constraints.push_back({{2}, Relation::Eq, 3});
  CHECK(solve(ip).status == SolveStatus::Infeasible);
}

TEST_CASE("small two-variable program") {
  IntegerProgram ip = make(2, Sense::Maximize, {3, 2}, {0, 0}, {4, 4});
  ip.constraints.push_back({{1, 1}, Relation::Le, 4});
  ip.constraints.push_back({{2, 1}, Relation::Le, 6});
  SolveOutcome out = solve(ip);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.value == 10);
  CHECK(out.witness == std::vector<Int>{2, 2});
}

TEST_CASE("lexicographically smallest witness among ties") {
  IntegerProgram ip = make(2, Sense::Maximize, {1, 1}, {0, 0}, {1, 1});
  ip.constraints.push_back({{1, 1}, Relation::Le, 1});
  SolveOutcome out = solve(ip);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.value == 1);
  CHECK(out.witness == std::vector<Int>{0, 1});
}

TEST_CASE("binary kind clamps bounds") {
  IntegerProgram ip = make(2, Sense::Maximize, {1, 1}, {0, 0}, {5, 5});
  ip.kinds = {VarKind::Binary, VarKind::Integer};
  SolveOutcome out = solve(ip);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.value == 6);
  CHECK(out.witness == std::vector<Int>{1, 5});
}

TEST_CASE("model validation errors") {
  IntegerProgram ip = make(2, Sense::Maximize, {1, 1}, {0, 0}, {4, kUnbounded});
  CHECK_THROWS_AS(solve(ip), ModelError);

  IntegerProgram bad = make(2, Sense::Maximize, {1}, {0, 0}, {4, 4});
  CHECK_THROWS_AS(solve(bad), ModelError);

  IntegerProgram badrow = make(2, Sense::Maximize, {1, 1}, {0, 0}, {4, 4});
  badrow.constraints.push_back({{1}, Relation::Le, 3});
  CHECK_THROWS_AS(solve(badrow), ModelError);
}

TEST_CASE("crossed bounds are infeasible, not an error") {
  IntegerProgram ip = make(1, Sense::Minimize, {1}, {3}, {2});
  CHECK(solve(ip).status == SolveStatus::Infeasible);
}

TEST_CASE("agrees with exhaustive enumeration on random programs") {
  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 500; ++trial) {
    IntegerProgram ip = random_program(rng);
    auto grid = omega::test::grid_solve(ip);
    SolveOutcome out = solve(ip);
    if (grid.feasible) {
      REQUIRE(out.status == SolveStatus::Optimal);
      REQUIRE(out.value == grid.value);
      REQUIRE(out.witness == grid.witness);  // lex-min tie-break
      REQUIRE(witness_feasible(ip, out));
    } else {
      REQUIRE(out.status == SolveStatus::Infeasible);
    }
  }
}

TEST_CASE("adding a constraint never improves the optimum") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    IntegerProgram ip = random_program(rng);
    SolveOutcome before = solve(ip);
    IntegerProgram tightened = ip;
    LinearConstraint extra;
    for (int i = 0; i < ip.num_vars; ++i) {
      extra.coeffs.push_back(static_cast<Int>(rng() % 7) - 3);
    }
    extra.rel = Relation::Le;
    extra.rhs = static_cast<Int>(rng() % 9) - 2;
    tightened.constraints.push_back(extra);
    SolveOutcome after = solve(tightened);
    if (before.status == SolveStatus::Infeasible) {
      CHECK(after.status == SolveStatus::Infeasible);
    } else if (after.status == SolveStatus::Optimal) {
      if (ip.sense == Sense::Maximize) {
        CHECK(after.value <= before.value);
      } else {
        CHECK(after.value >= before.value);
      }
    }
  }
}

TEST_CASE("determinism: identical inputs, identical outputs") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 25; ++trial) {
    IntegerProgram ip = random_program(rng);
    SolveOutcome a = solve(ip);
    SolveOutcome b = solve(ip);
    CHECK(a.status == b.status);
    CHECK(a.value == b.value);
    CHECK(a.witness == b.witness);
  }
}
