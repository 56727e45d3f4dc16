#include <gmpxx.h>
#include <gtest/gtest.h>

#include <random>

#include "nonord/modring.hpp"
#include "oracles.hpp"

using namespace nonord;

namespace {

TEST(ModInverse, SmallExamples) {
  EXPECT_EQ(mod_inverse(1, 7).value(), 1u);
  EXPECT_EQ(mod_inverse(2, 9).value(), 5u);
  // 4096 = 19 (mod 27), 19 * 10 = 190 = 1 (mod 27)
  EXPECT_EQ(mod_inverse(4096, 27).value(), 10u);
  EXPECT_EQ(mod_inverse(-1, 11).value(), 10u);
}

TEST(ModInverse, NonInvertible) {
  try {
    mod_inverse(6, 27);
    FAIL() << "expected NonInvertible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonInvertible);
  }
  EXPECT_THROW(mod_inverse(0, 5), Error);
}

TEST(ModInverse, RandomProperty) {
  std::mt19937_64 rng(20240831);
  for (int i = 0; i < 2000; ++i) {
    const u64 m = 2 + rng() % (kMaxModulus - 2);
    const i64 x = static_cast<i64>(rng() >> 2) - (i64{1} << 60);
    if (std::gcd(static_cast<u64>(x < 0 ? -x : x), m) != 1) continue;
    const Residue inv = mod_inverse(x, m);
    EXPECT_EQ((Residue(x, m) * inv).value(), 1u) << x << " mod " << m;
  }
}

TEST(RationalResidue, Examples) {
  EXPECT_EQ(rational_residue(RationalParam(1, 2), 11).value(), 6u);
  EXPECT_EQ(rational_residue(RationalParam(1, 3), 7).value(), 5u);
  try {
    rational_residue(RationalParam(1, 4), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonInvertible);
  }
}

TEST(RationalResidue, RespectsFieldArithmetic) {
  std::mt19937_64 rng(7);
  const std::vector<u64> moduli = {101, 7919, 1331, 1000003, 999983ull * 999983ull};
  for (u64 m : moduli) {
    for (int i = 0; i < 300; ++i) {
      const i64 a = static_cast<i64>(rng() % 2000) - 1000, c = static_cast<i64>(rng() % 2000) - 1000;
      const i64 b = 1 + static_cast<i64>(rng() % 1000), d = 1 + static_cast<i64>(rng() % 1000);
      if (std::gcd(static_cast<u64>(b * d), m) != 1) continue;
      const Residue lhs = rational_residue(RationalParam(a, b), m) + rational_residue(RationalParam(c, d), m);
      const Residue rhs = rational_residue(RationalParam(a * d + b * c, b * d), m);
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(RisingFactorial, Examples) {
  EXPECT_EQ(rising_factorial(Residue(1, 7), 4).value(), 3u);
  EXPECT_EQ(rising_factorial(Residue(0, 5), 2).value(), 0u);
  EXPECT_EQ(rising_factorial(Residue(5, 13), 0).value(), 1u);
  const Residue half = rational_residue(RationalParam(1, 2), 5);
  EXPECT_EQ(half.value(), 3u);
  EXPECT_EQ(rising_factorial(half, 2).value(), 2u);
  EXPECT_EQ(rising_factorial(half, 2), rational_residue(RationalParam(3, 4), 5));
}

TEST(RisingFactorial, SplitsAdditively) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const u64 m = 2 + rng() % 100000;
    const Residue x(static_cast<i64>(rng() % m), m);
    const u64 j = rng() % 40, k = rng() % 40;
    EXPECT_EQ(rising_factorial(x, j + k), rising_factorial(x, j) * rising_factorial(x.plus(static_cast<i64>(j)), k));
  }
}

TEST(RisingFactorial, HalfMatchesExactRational) {
  for (u64 p : {3, 5, 7, 11, 13}) {
    const Residue half = rational_residue(RationalParam(1, 2), p);
    for (u64 k = 0; k < p; ++k) {
      const mpq_class exact = oracle::pochhammer(mpq_class(1, 2), k);
      EXPECT_EQ(rising_factorial(half, k).value(), oracle::reduce_rational(exact, p)) << "p=" << p << " k=" << k;
    }
  }
}

TEST(Residue, MixedModulusIsRejected) {
  try {
    (void)(Residue(1, 7) + Residue(1, 9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ModulusMismatch);
  }
  EXPECT_THROW((void)(Residue(1, 7) * Residue(1, 49)), Error);
}

TEST(Residue, InvariantsAndReduction) {
  const Residue r(-3, 27);
  EXPECT_EQ(r.value(), 24u);
  EXPECT_EQ(r.centered(), -3);
  EXPECT_EQ(r.reduce_to(3).value(), 0u);
  EXPECT_THROW(r.reduce_to(5), Error);
  EXPECT_THROW(Residue(0, 1), Error);
  EXPECT_THROW(Residue(0, kMaxModulus + 1), Error);
  const Residue big(static_cast<i64>(kMaxModulus - 1), kMaxModulus);
  EXPECT_EQ((big * big).value(), 1u);
  EXPECT_EQ((big + big).value(), kMaxModulus - 2);
}

TEST(RationalParam, ParsingIsStrict) {
  EXPECT_EQ(RationalParam::parse("1/2"), RationalParam(1, 2));
  EXPECT_EQ(RationalParam::parse("-1/3"), RationalParam(-1, 3));
  EXPECT_EQ(RationalParam::parse("3"), RationalParam(3, 1));
  for (const char* bad : {"1/0", "2/4", " 1/2", "1/2 ", "1/-2", "", "/", "a/b", "1//2"}) {
    EXPECT_THROW(RationalParam::parse(bad), Error) << bad;
  }
}

TEST(RationalParam, StoredReduced) {
  const RationalParam r(6, -4);
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(RationalParam(1, 4).one_minus(), RationalParam(3, 4));
}

TEST(Primes, MillerRabinAgreesWithSieve) {
  const auto primes = primes_up_to(20000);
  std::vector<bool> sieve(20001, false);
  for (u64 p : primes) sieve[p] = true;
  for (u64 n = 0; n <= 20000; ++n) EXPECT_EQ(is_prime(n), sieve[n]) << n;
  EXPECT_TRUE(is_prime(999983));
  EXPECT_TRUE(is_prime((u64{1} << 61) - 1));
  EXPECT_FALSE(is_prime(999983ull * 999979ull));
  EXPECT_EQ(primes.size(), 2262u);
}

}  // namespace
