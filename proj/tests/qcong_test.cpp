#include <gmpxx.h>
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nonord/qcong.hpp"
#include "oracles.hpp"

using namespace nonord;

namespace {

IntPoly poly(std::initializer_list<long> c) {
  std::vector<mpz_class> v;
  for (long x : c) v.emplace_back(x);
  return IntPoly(std::move(v));
}

CycRingElem ring_elem(u64 n, std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<mpz_class>> raw;
  for (const auto& row : rows) {
    raw.emplace_back();
    for (long x : row) raw.back().emplace_back(x);
  }
  return CycRingElem::from_raw(n, std::move(raw));
}

CycRingElem random_elem(std::mt19937_64& rng, u64 n, std::size_t q_len, std::size_t a_len) {
  std::vector<std::vector<mpz_class>> raw(q_len, std::vector<mpz_class>(a_len));
  for (auto& row : raw) {
    for (auto& v : row) v = static_cast<long>(rng() % 41) - 20;
  }
  return CycRingElem::from_raw(n, std::move(raw));
}

// Element of Q(zeta_3) from a reduced element of Z[q]/Phi_3 with no a.
oracle::Zeta3 to_zeta3(const CycRingElem& x) {
  EXPECT_LE(x.a_degree(), 0);
  return {mpq_class(x.coeff(0, 0)), mpq_class(x.coeff(1, 0))};
}

TEST(Cyclotomic, Examples) {
  EXPECT_EQ(cyclotomic_poly(3), poly({1, 1, 1}));
  EXPECT_EQ(cyclotomic_poly(1), poly({-1, 1}));
  EXPECT_EQ(cyclotomic_poly(9), poly({1, 0, 0, 1, 0, 0, 1}));
  EXPECT_EQ(cyclotomic_poly(15), poly({1, -1, 0, 1, -1, 1, 0, -1, 1}));
  EXPECT_THROW(cyclotomic_poly(0), Error);
}

TEST(Cyclotomic, DegreeIsTotient) {
  for (u64 n = 1; n <= 60; ++n) {
    EXPECT_EQ(cyclotomic_poly(n).degree(), static_cast<long>(euler_phi(n))) << n;
    EXPECT_EQ(cyclotomic_poly(n).coefficients().back(), 1) << n;
  }
}

TEST(Cyclotomic, ValueAtOne) {
  // Phi_p(1) = p, Phi_{p^k}(1) = p, and 1 for n with two distinct prime factors
  EXPECT_EQ(cyclotomic_poly(7).evaluate(1), 7);
  EXPECT_EQ(cyclotomic_poly(9).evaluate(1), 3);
  EXPECT_EQ(cyclotomic_poly(15).evaluate(1), 1);
}

TEST(Qpoch, Examples) {
  // (a q^{-1}; q)_1 = 1 - a q^2 mod Phi_3
  EXPECT_EQ(qpoch(3, Monomial{1, 1, -1}, 1), ring_elem(3, {{1}, {0}, {0, -1}}));
  for (u64 n : {3u, 5u, 9u}) EXPECT_EQ(qpoch(n, Monomial{1, 1, 4}, 0), CycRingElem::one(n));
  EXPECT_EQ(qpoch(3, Monomial{1, 0, 1}, 2), ring_elem(3, {{3}}));
}

TEST(CycRing, InvalidN) {
  for (u64 n : {0u, 1u, 2u, 4u, 10u}) {
    try {
      CycRingElem x(n);
      FAIL() << n;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidN);
    }
  }
  EXPECT_THROW(verify_qcong(4), Error);
  EXPECT_THROW(verify_prefactor(1), Error);
  try {
    (void)(CycRingElem::one(3) + CycRingElem::one(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ModulusMismatch);
  }
}

TEST(CycRing, ReductionMatchesDirectRemainder) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const u64 n = 3 + 2 * (rng() % 7);  // 3..15
    const std::size_t q_len = 1 + rng() % (3 * n);
    const std::size_t a_len = 1 + rng() % 4;
    std::vector<std::vector<mpz_class>> raw(q_len, std::vector<mpz_class>(a_len));
    for (auto& row : raw) {
      for (auto& v : row) v = static_cast<long>(rng() % 2001) - 1000;
    }
    const CycRingElem reduced = CycRingElem::from_raw(n, raw);
    // plain long division of each a-column by Phi_n, without using q^n = 1
    const auto phi = cyclotomic_poly(n).coefficients();
    const std::size_t d = phi.size() - 1;
    ASSERT_EQ(reduced.q_len(), d);
    for (std::size_t j = 0; j < a_len; ++j) {
      std::vector<mpz_class> col(q_len);
      for (std::size_t i = 0; i < q_len; ++i) col[i] = raw[i][j];
      for (std::size_t i = col.size(); i-- > d;) {
        const mpz_class lead = col[i];
        for (std::size_t t = 0; t <= d; ++t) col[i - d + t] -= lead * phi[t];
      }
      for (std::size_t i = 0; i < d; ++i) {
        EXPECT_EQ(reduced.coeff(i, j), i < col.size() ? col[i] : mpz_class(0)) << "n=" << n << " trial=" << trial;
      }
    }
  }
}

TEST(CycRing, RingLaws) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const u64 n = 3 + 2 * (rng() % 6);
    const auto x = random_elem(rng, n, 1 + rng() % (2 * n), 1 + rng() % 3);
    const auto y = random_elem(rng, n, 1 + rng() % (2 * n), 1 + rng() % 3);
    const auto z = random_elem(rng, n, 1 + rng() % (2 * n), 1 + rng() % 3);
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ(x * y, y * x);
    EXPECT_EQ(x * CycRingElem::one(n), x);
    EXPECT_TRUE((x - x).is_zero());
  }
}

TEST(CycRing, BinomialMultiplicationMatchesProduct) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const u64 n = 3 + 2 * (rng() % 5);
    auto x = random_elem(rng, n, n, 3);
    const i64 q_exp = static_cast<i64>(rng() % (3 * n)) - static_cast<i64>(n);
    const u64 a_exp = rng() % 3;
    const CycRingElem factor = CycRingElem::monomial(n, 5, 0, 0) + CycRingElem::monomial(n, -2, a_exp, q_exp);
    const CycRingElem expected = x * factor;
    x.mul_binomial(5, -2, a_exp, q_exp);
    EXPECT_EQ(x, expected);
  }
}

TEST(CycRing, NegativeExponentsFold) {
  for (u64 n : {3u, 5u, 7u}) {
    EXPECT_EQ(CycRingElem::monomial(n, 1, 0, -1) * CycRingElem::monomial(n, 1, 0, 1), CycRingElem::one(n));
    EXPECT_EQ(CycRingElem::monomial(n, 1, 0, static_cast<i64>(n)), CycRingElem::one(n));
  }
}

TEST(QCongruence, PrimeInstancesHold) {
  for (u64 n : {3u, 5u, 7u, 11u, 13u}) {
    const Report r = verify_qcong(n);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_TRUE(r.params["prime_n"].get<bool>());
    EXPECT_FALSE(r.witness.contains("first_nonzero"));
  }
}

TEST(QCongruence, ADegreesAgreeAtThree) {
  const QcongSides sides = build_qcong_sides(3);
  EXPECT_EQ(sides.lhs.a_degree(), sides.rhs.a_degree());
  EXPECT_EQ(sides.lhs, sides.rhs);
}

TEST(QCongruence, CompositeInstancesAreReported) {
  for (u64 n : {9u, 15u}) {
    const Report r = verify_qcong(n);
    EXPECT_FALSE(r.params["prime_n"].get<bool>());
    EXPECT_EQ(r.params["n"], n);
  }
}

TEST(QCongruence, CapIsEnforced) {
  try {
    verify_qcong(17);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CapExceeded);
  }
  try {
    verify_qcong(7, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CapExceeded);
  }
}

TEST(QCongruence, UnclearedIdentityAtRationalPoints) {
  // F_3(a; zeta_3) against the closed right side, both evaluated by field division
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const long num = static_cast<long>(rng() % 41) - 20;
    const long den = 1 + static_cast<long>(rng() % 9);
    mpq_class a(num, den);
    a.canonicalize();
    EXPECT_EQ(oracle::f3(a), oracle::qcong_rhs3(a)) << a.get_str();
  }
}

TEST(QCongruence, EngineMatchesFieldEvaluation) {
  // lhs of the cleared identity at integer a, against the uncleared sum times
  // its cleared factors, all computed in Q(zeta_3)
  const QcongSides sides = build_qcong_sides(3);
  for (long av = -6; av <= 6; ++av) {
    const mpq_class a(av);
    oracle::Zeta3 expected = oracle::f3(a);
    const oracle::Zeta3 cleared = oracle::qpoch3(a, 1, 2);
    const oracle::Zeta3 qq = oracle::qpoch3(mpq_class(1), 1, 2);
    for (int e = 0; e < 4; ++e) expected = expected * cleared * qq;
    const oracle::Zeta3 d1 = oracle::Zeta3{1, 0} - oracle::Zeta3{a, 0} * oracle::Zeta3::w_pow(1);
    const oracle::Zeta3 d2 = oracle::Zeta3{a, 0} - oracle::Zeta3::w_pow(2);
    expected = expected * d1 * d1 * d2 * d2;
    EXPECT_EQ(to_zeta3(sides.lhs.substitute_a(av)), expected) << av;
  }
}

TEST(QCongruence, DumpWritesCsv) {
  const auto path = std::filesystem::temp_directory_path() / "nonord_qcong_dump.csv";
  const Report r = verify_qcong(5, kDefaultQcongCap, &path);
  EXPECT_TRUE(r.pass);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "q_degree,a_degree,coefficient");
  std::string rest;
  EXPECT_FALSE(std::getline(in, rest));  // zero difference has no rows
}

TEST(QCongruence, BrokenIdentityIsCaught) {
  QcongSides sides = build_qcong_sides(5);
  sides.rhs.mul_binomial(2, 0, 0, 0);
  const CycRingElem diff = sides.lhs - sides.rhs;
  EXPECT_FALSE(diff.is_zero());
  std::ostringstream out;
  diff.write_csv(out);
  EXPECT_GT(out.str().size(), std::string("q_degree,a_degree,coefficient\n").size());
}

TEST(Prefactor, Examples) {
  EXPECT_EQ(qpoch(3, Monomial{1, 0, 1}, 2), ring_elem(3, {{3}}));
  // (a - q)(a - q^2) = a^2 + a + 1 mod Phi_3
  CycRingElem prod = CycRingElem::one(3);
  for (i64 j = 1; j <= 2; ++j) prod *= CycRingElem::monomial(3, 1, 1, 0) - CycRingElem::monomial(3, 1, 0, j);
  EXPECT_EQ(prod, ring_elem(3, {{1, 1, 1}}));
  EXPECT_EQ(prod.substitute_a(1), ring_elem(3, {{3}}));
  CycRingElem prod5 = CycRingElem::one(5);
  for (i64 j = 1; j <= 4; ++j) prod5 *= CycRingElem::monomial(5, 1, 1, 0) - CycRingElem::monomial(5, 1, 0, j);
  EXPECT_EQ(prod5, ring_elem(5, {{1, 1, 1, 1, 1}}));
}

TEST(Prefactor, HoldsForOddNUpTo15) {
  for (u64 n = 3; n <= 15; n += 2) {
    const Report r = verify_prefactor(n);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_EQ(r.witness["divisor_product"], std::to_string(n));
  }
}

}  // namespace
