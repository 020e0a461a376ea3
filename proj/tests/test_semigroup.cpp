#include <doctest.h>

#include <numeric>
#include <random>

#include "omega/semigroup.hpp"
#include "test_util.hpp"

using namespace omega;

namespace {

ErrorCode code_of(const std::vector<Int>& gens) {
  try {
    NumericalSemigroup s(gens);
  } catch (const SemigroupError& e) {
    return e.code();
  }
  FAIL("construction unexpectedly succeeded");
  return ErrorCode::EmptyInput;
}

}  // namespace

TEST_CASE("construction accepts valid minimal systems") {
  NumericalSemigroup s({6, 13, 14});
  CHECK(s.embedding_dimension() == 3);
  CHECK(s.generators() == std::vector<Int>{6, 13, 14});

  NumericalSemigroup t({3, 2});  // unsorted input is fine
  CHECK(t.generators() == std::vector<Int>{2, 3});

  NumericalSemigroup big({5, 86, 99, 148, 152});
  CHECK(big.embedding_dimension() == 5);
}

TEST_CASE("construction rejects invalid systems") {
  CHECK(code_of({}) == ErrorCode::EmptyInput);
  CHECK(code_of({0, 3}) == ErrorCode::ContainsOneOrZero);
  CHECK(code_of({1, 2}) == ErrorCode::ContainsOneOrZero);
  CHECK(code_of({5}) == ErrorCode::SingleGenerator);
  CHECK(code_of({7, 7}) == ErrorCode::SingleGenerator);  // dedup first
  CHECK(code_of({4, 6}) == ErrorCode::GcdNotOne);
  CHECK(code_of({6, 13, 14, 19}) == ErrorCode::NotMinimalSystem);  // 19=6+13
  CHECK(code_of({2, 3, 4}) == ErrorCode::NotMinimalSystem);

  try {
    NumericalSemigroup s({6, 13, 14, 19});
  } catch (const SemigroupError& e) {
    CHECK(std::string(e.what()).find("19") != std::string::npos);
  }
}

TEST_CASE("apery tables") {
  NumericalSemigroup s({6, 13, 14});
  const AperyTable& t = s.apery(6);
  CHECK(t.modulus == 6);
  CHECK(t.entries == std::vector<Int>{0, 13, 14, 27, 28, 41});

  NumericalSemigroup u({2, 3});
  CHECK(u.apery(2).entries == std::vector<Int>{0, 3});

  CHECK_THROWS_AS(s.apery(35), SemigroupError);  // 35 not a member
  CHECK_THROWS_AS(s.apery(-6), SemigroupError);
}

TEST_CASE("apery entries are least representable per residue") {
  // independent oracle: sieve of reachable sums
  for (auto gens : {std::vector<Int>{6, 13, 14}, {5, 86, 99, 148, 152}}) {
    NumericalSemigroup s(gens);
    const Int n = s.multiplicity();
    const Int limit = gens.front() * gens.back() + n;
    auto in = omega::test::sieve_members(gens, limit);
    const AperyTable& t = s.apery(n);
    for (Int r = 0; r < n; ++r) {
      Int least = -1;
      for (Int v = r; v <= limit; v += n) {
        if (in[static_cast<std::size_t>(v)]) {
          least = v;
          break;
        }
      }
      CHECK(t.entries[static_cast<std::size_t>(r)] == least);
      CHECK(t.entries[static_cast<std::size_t>(r)] % n == r);
      CHECK_FALSE(s.contains(t.entries[static_cast<std::size_t>(r)] - n));
    }
  }
}

TEST_CASE("membership") {
  NumericalSemigroup s({6, 13, 14});
  CHECK_FALSE(s.contains(35));
  CHECK(s.contains(42));
  CHECK(s.contains(0));
  CHECK_FALSE(s.contains(-6));
  NumericalSemigroup u({2, 3});
  CHECK_FALSE(u.contains(1));
}

TEST_CASE("membership agrees with a direct sieve") {
  std::mt19937_64 rng(20260826);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = omega::test::random_semigroup(rng, 2 + static_cast<int>(rng() % 3), 40);
    const Int limit = s.frobenius() + s.generators().front() * s.generators().back();
    auto in = omega::test::sieve_members(s.generators(), limit);
    for (Int v = 0; v <= limit; ++v) {
      REQUIRE(s.contains(v) == static_cast<bool>(in[static_cast<std::size_t>(v)]));
    }
  }
}

TEST_CASE("classical invariants") {
  CHECK(NumericalSemigroup({6, 13, 14}).multiplicity() == 6);
  CHECK(NumericalSemigroup({2, 3}).multiplicity() == 2);
  CHECK(NumericalSemigroup({5, 86, 99, 148, 152}).multiplicity() == 5);

  CHECK(NumericalSemigroup({2, 3}).frobenius() == 1);
  CHECK(NumericalSemigroup({3, 4}).frobenius() == 5);
  CHECK(NumericalSemigroup({6, 13, 14}).frobenius() == 35);

  CHECK(NumericalSemigroup({2, 3}).genus() == 1);
  CHECK(NumericalSemigroup({3, 4}).genus() == 3);
  CHECK(NumericalSemigroup({6, 13, 14}).genus() == 18);
}

TEST_CASE("Selmer formulas for two generators") {
  std::mt19937_64 rng(42);
  int done = 0;
  while (done < 100) {
    Int a = 2 + static_cast<Int>(rng() % 199);
    Int b = 2 + static_cast<Int>(rng() % 199);
    if (a >= b || std::gcd(a, b) != 1) continue;
    NumericalSemigroup s({a, b});
    CHECK(s.frobenius() == a * b - a - b);
    CHECK(s.genus() == (a - 1) * (b - 1) / 2);
    ++done;
  }
}

TEST_CASE("gap count below Frobenius equals genus") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = omega::test::random_semigroup(rng, 2 + static_cast<int>(rng() % 3), 60);
    Int gaps = 0;
    for (Int v = 0; v <= s.frobenius(); ++v) {
      if (!s.contains(v)) ++gaps;
    }
    CHECK(gaps == s.genus());
  }
}

TEST_CASE("factorization evaluation") {
  NumericalSemigroup s({6, 13, 14});
  CHECK(s.evaluate(FactorizationVector({0, 0, 3})) == 42);
  CHECK(s.evaluate(FactorizationVector({0, 0, 0})) == 0);
  CHECK(NumericalSemigroup({2, 3}).evaluate(FactorizationVector({3, 0})) == 6);
  CHECK_THROWS_AS(s.evaluate(FactorizationVector({1, 2})), SemigroupError);
}

TEST_CASE("evaluate lands in the semigroup") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = omega::test::random_semigroup(rng, 3, 30);
    std::vector<Int> c(3);
    for (auto& x : c) x = static_cast<Int>(rng() % 8);
    CHECK(s.contains(s.evaluate(FactorizationVector(c))));
  }
}

TEST_CASE("submonoid membership with gcd reduction") {
  Submonoid even({4, 6});  // gcd 2
  CHECK(even.contains(0));
  CHECK_FALSE(even.contains(2));
  CHECK(even.contains(4));
  CHECK_FALSE(even.contains(5));
  CHECK(even.contains(10));

  Submonoid single({7});
  CHECK(single.contains(14));
  CHECK_FALSE(single.contains(15));

  Submonoid full({13, 14});
  CHECK(full.contains(41));
  CHECK_FALSE(full.contains(25));
}

TEST_CASE("overflow is detected") {
  CHECK_THROWS_AS(checked_mul(Int{1} << 40, Int{1} << 40), std::overflow_error);
  CHECK(checked_mul(Int{1000000}, Int{1000000}) == Int{1000000000000});
}
