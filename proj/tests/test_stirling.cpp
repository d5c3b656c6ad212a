#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stirval/errors.hpp"
#include "stirval/stirling.hpp"

using namespace stirval;

namespace {
const Prime P2(2), P3(3), P5(5), P7(7);
}

TEST(StirlingExact, Examples) {
  EXPECT_EQ(stirling_exact(1, 1), 1);
  for (std::uint64_t n = 1; n <= 30; ++n)
    EXPECT_EQ(stirling_exact(n, 1), 1);
  EXPECT_EQ(stirling_exact(4, 3), 6);
  EXPECT_EQ(stirling_exact(2, 3), 0);
  EXPECT_EQ(stirling_exact(8, 5), 1050);
  EXPECT_EQ(stirling_exact(7, 3), 301);
  EXPECT_EQ(stirling_exact(8, 3), 966);
}

TEST(StirlingExact, ResourceCap) {
  StirlingLimits tight;
  tight.max_n = 100;
  EXPECT_THROW(stirling_exact(101, 3, tight), ResourceError);
  tight.max_n = 100000;
  tight.max_cells = 1000;
  EXPECT_THROW(stirling_exact(500, 10, tight), ResourceError);
}

TEST(StirlingExact, MatchesClosedForm) {
  for (std::uint64_t n = 1; n <= 60; ++n)
    for (std::uint64_t k = 1; k <= n; ++k) {
      ASSERT_EQ(stirling_exact(n, k), oracle::stirling(n, k)) << n << "," << k;
      ASSERT_EQ(surjections_closed_form(n, k), oracle::surjections(n, k));
    }
}

TEST(StirlingExact, CountsSetPartitions) {
  for (unsigned n = 1; n <= 8; ++n)
    for (unsigned k = 1; k <= n; ++k)
      EXPECT_EQ(stirling_exact(n, k), oracle::partitions(n, k));
}

TEST(StirlingMod, Examples) {
  EXPECT_EQ(stirling_mod(8, 5, P2, 6), 26);
  EXPECT_EQ(stirling_mod(Integer("123456789123456789"), 1, P5, 4), 1);
  EXPECT_EQ(stirling_mod(6, 3, P3, 2), 0);
}

TEST(StirlingMod, MatchesExactResidue) {
  for (const Prime p : {P2, P3, P5, P7})
    for (int m = 1; m <= 6; ++m) {
      const Integer mod = prime_power(p, m);
      for (std::uint64_t n = 1; n <= 60; ++n)
        for (std::uint64_t k = 1; k <= n; ++k) {
          Integer want = oracle::stirling(n, k) % mod;
          ASSERT_EQ(stirling_mod(n, k, p, m), want) << p << " " << m << " " << n << " " << k;
        }
    }
}

TEST(StirlingMod, HugeN) {
  // n = 10^30: compare with the independent modular closed form.
  const Integer n("1000000000000000000000000000000");
  for (const Prime p : {P2, P3, P5, P7})
    for (std::uint64_t k = 1; k <= 12; ++k) {
      const std::int64_t vk = vp_factorial(p, k);
      const Integer mod = prime_power(p, 5);
      const Integer unit = oracle::factorial(k) / oracle::pow(p.value(), vk);
      Integer inv;
      mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
      const Integer want = oracle::surjections_mod(n, k, p, 5 + vk) / oracle::pow(p.value(), vk) * inv % mod;
      EXPECT_EQ(stirling_mod(n, k, p, 5), want) << p << " " << k;
    }
}

TEST(TP, Examples) {
  EXPECT_EQ(t_p_exact(3, 3, P2), 30);
  EXPECT_EQ(t_p_exact(4, 3, P3), -45);
  EXPECT_EQ(t_p_exact(2, 3, P7), 0);
}

TEST(TP, ModularMatchesExact) {
  for (const Prime p : {P2, P3, P5})
    for (std::uint64_t n = 1; n <= 30; ++n)
      for (std::uint64_t k = 1; k <= 10; ++k) {
        const Integer mod = prime_power(p, 12);
        Integer want = t_p_exact(n, k, p) % mod;
        if (want < 0)
          want += mod;
        ASSERT_EQ(t_p_mod(n, k, p, 12), want);
      }
}

TEST(Decompose, Examples) {
  const Decomposition a = decompose_check(4, 3, P3);
  EXPECT_EQ(a.t_part, -45);
  EXPECT_EQ(a.tail, 81);
  EXPECT_EQ(a.surjections, 36);
  EXPECT_EQ(a.tail_valuation, Valuation(4));
  EXPECT_TRUE(a.ok());

  const Decomposition b = decompose_check(3, 3, P2);
  EXPECT_EQ(b.t_part, 30);
  EXPECT_EQ(b.tail, -24);
  EXPECT_EQ(b.tail_valuation, Valuation(3));
  EXPECT_TRUE(b.ok());

  const Decomposition c = decompose_check(9, 4, P7);
  EXPECT_EQ(c.tail, 0);
  EXPECT_EQ(c.t_part, oracle::surjections(9, 4));
}

TEST(Decompose, Exhaustive) {
  for (const Prime p : {P2, P3, P5})
    for (std::uint64_t n = 1; n <= 40; ++n)
      for (std::uint64_t k = 1; k <= 12; ++k)
        ASSERT_TRUE(decompose_check(n, k, p).ok()) << p << " " << n << " " << k;
}

TEST(Valuation, MatchesOracle) {
  for (const Prime p : {P2, P3, P5, P7})
    for (std::uint64_t n = 1; n <= 80; ++n)
      for (std::uint64_t k = 1; k <= 15; ++k) {
        const Valuation v = stirling_valuation(p, n, k);
        if (k > n)
          EXPECT_FALSE(v.is_finite());
        else
          ASSERT_EQ(v, Valuation(oracle::vp(p, oracle::stirling(n, k)))) << p << " " << n << " " << k;
      }
}

TEST(Valuation, HugeN) {
  const Integer n = oracle::pow(3, 40) * 2 + 5;
  for (std::uint64_t k = 2; k <= 8; ++k)
    EXPECT_EQ(stirling_valuation(P3, n, k), Valuation(oracle::vp_stirling(3, n, k)));
}

TEST(Valuation, DomainErrors) {
  EXPECT_THROW(stirling_valuation(P3, 0, 2), DomainError);
  EXPECT_THROW(stirling_valuation(P3, 5, 0), DomainError);
}

TEST(Period, Examples) {
  const VerifierReport r = verify_period(P3, 2, 1, 100);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.derived.at("L"), 2);
  EXPECT_EQ(period_length(P5, 3, 2), 20);
  EXPECT_TRUE(verify_period(P3, 1, 1, 50).passed());
  EXPECT_THROW(period_length(P2, 3, 2), DomainError);
}

TEST(Period, HoldsAcrossParameters) {
  for (const Prime p : {P3, P5, P7})
    for (std::uint64_t k = 1; k <= 9; ++k)
      for (int m = 1; m <= 3; ++m) {
        const VerifierReport r = verify_period(p, k, m, 60);
        EXPECT_TRUE(r.passed()) << p << " " << k << " " << m;
      }
}

TEST(Period, StartsPastThePrePeriod) {
  // S(3 + 18, 3) and S(3, 3) differ mod 27, but the sequence is periodic from n = 4 on.
  EXPECT_NE(oracle::stirling(21, 3) % 27, oracle::stirling(3, 3) % 27);
  const VerifierReport r = verify_period(P3, 3, 3, 60);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.derived.at("first_n"), 4);
}

TEST(Period, OracleResidues) {
  // Residues of S(n, k) mod p^m repeat with period L, from the exact values.
  const Integer L = period_length(P3, 4, 2);
  ASSERT_EQ(L, 18);
  for (unsigned long n = 4; n <= 60; ++n)
    EXPECT_EQ(oracle::stirling(n, 4) % 9, oracle::stirling(n + 18, 4) % 9);
}
