#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "qmsd/gf_arith.hpp"

using namespace qmsd;

TEST(Zd, InverseOfTwoModThree) {
  EXPECT_EQ(inv(Zd{2, 3}).value(), 2);
  EXPECT_EQ(inv(Zd{1, 3}).value(), 1);
}

TEST(Zd, ZeroIsNotInvertible) { EXPECT_THROW(inv(Zd{0, 3}), NonInvertible); }

TEST(Zd, InverseTimesSelfIsOneForSmallPrimes) {
  for (int d : {3, 5, 7, 11, 13})
    for (int a = 1; a < d; ++a) EXPECT_EQ((Zd{a, d} * inv(Zd{a, d})).value(), 1) << "a=" << a << " d=" << d;
}

TEST(Zd, ReducesNegativeValues) {
  EXPECT_EQ(Zd(-1, 3).value(), 2);
  EXPECT_EQ(Zd(-7, 3).value(), 2);
  EXPECT_EQ((Zd{1, 3} - Zd{2, 3}).value(), 2);
  EXPECT_EQ((-Zd{1, 3}).value(), 2);
}

TEST(Zd, RejectsNonPrimeModulus) {
  EXPECT_THROW(Zd(1, 4), DomainError);
  EXPECT_THROW(Zd(1, 2), DomainError);
  EXPECT_THROW(Zd(1, 9), DomainError);
}

TEST(Zd, FieldAxiomsExhaustive) {
  const int d = 3;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        const Zd x{a, d}, y{b, d}, z{c, d};
        EXPECT_EQ(x * (y + z), x * y + x * z);
        EXPECT_EQ((x + y) + z, x + (y + z));
        EXPECT_EQ(x * y, y * x);
      }
}

TEST(SymplecticMat2, MakeValidatesDeterminant) {
  EXPECT_NO_THROW(SymplecticMat2::make(1, 1, 0, 1));
  EXPECT_THROW(SymplecticMat2::make(1, 1, 1, 1), DomainError);
  EXPECT_THROW(SymplecticMat2::make(1, 0, 0, 1, 4), DomainError);
}

// Independent oracle: brute-force count of all (a,b,c,d) with ad - bc = 1 mod p.
static std::set<std::array<int, 4>> brute_sl2(int p) {
  std::set<std::array<int, 4>> out;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int e = 0; e < p; ++e)
          if (((a * e - b * c) % p + p) % p == 1) out.insert({a, b, c, e});
  return out;
}

TEST(EnumerateSl2, MatchesBruteForceForThree) {
  const auto sl = enumerate_sl2(3);
  ASSERT_EQ(sl.size(), 24u);
  std::set<std::array<int, 4>> got;
  for (const auto& f : sl) got.insert(f.entries());
  EXPECT_EQ(got, brute_sl2(3));
  EXPECT_TRUE(std::is_sorted(sl.begin(), sl.end()));
}

TEST(EnumerateSl2, OrderFormulaForFive) {
  // |SL(2, p)| = p (p^2 - 1).
  EXPECT_EQ(enumerate_sl2(5).size(), 120u);
  EXPECT_EQ(enumerate_sl2(5).size(), brute_sl2(5).size());
}

TEST(EnumerateSl2, ContainsIdentityAndMinusIdentity) {
  const auto sl = enumerate_sl2(3);
  EXPECT_NE(std::find(sl.begin(), sl.end(), SymplecticMat2::identity()), sl.end());
  EXPECT_NE(std::find(sl.begin(), sl.end(), SymplecticMat2::make(2, 0, 0, 2)), sl.end());
}

TEST(EnumerateSl2, ClosedUnderProductAndInverse) {
  const auto sl = enumerate_sl2(3);
  const std::set<std::array<int, 4>> all = brute_sl2(3);
  for (const auto& f : sl) {
    EXPECT_EQ(symplectic_mul(f, symplectic_inv(f)), SymplecticMat2::identity());
    EXPECT_EQ(symplectic_mul(symplectic_inv(f), f), SymplecticMat2::identity());
    for (const auto& g : sl) {
      const auto h = symplectic_mul(f, g);
      EXPECT_EQ(h.det(), 1);
      EXPECT_TRUE(all.count(h.entries()));
    }
  }
}

TEST(EnumerateSl2, ApplyPreservesSymplecticForm) {
  auto form = [](std::array<int, 2> u, std::array<int, 2> v) { return ((u[1] * v[0] - u[0] * v[1]) % 3 + 3) % 3; };
  for (const auto& f : enumerate_sl2(3))
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b) {
        const std::array<int, 2> u{a / 3, a % 3}, v{b / 3, b % 3};
        EXPECT_EQ(form(f.apply(u[0], u[1]), f.apply(v[0], v[1])), form(u, v));
      }
}

TEST(EnumeratePsl2, TwelveRepresentativesOnePerSignPair) {
  const auto psl = enumerate_psl2(3);
  ASSERT_EQ(psl.size(), 12u);
  for (const auto& f : psl) {
    EXPECT_EQ(psl_canonical(f), f);
    EXPECT_EQ(std::find(psl.begin(), psl.end(), f.negated()), psl.end()) << f;
  }
  const auto sl = enumerate_sl2(3);
  for (const auto& f : psl) EXPECT_NE(std::find(sl.begin(), sl.end(), f), sl.end());
}

TEST(EnumeratePsl2, ClosedUnderMultiplicationThenCanonicalization) {
  const auto psl = enumerate_psl2(3);
  for (const auto& f : psl)
    for (const auto& g : psl) {
      const auto h = psl_canonical(symplectic_mul(f, g));
      EXPECT_NE(std::find(psl.begin(), psl.end(), h), psl.end());
    }
}

TEST(EnumeratePsl2, CanonicalIsLexicographicMinimumOfPair) {
  for (const auto& f : enumerate_sl2(3)) {
    const auto c = psl_canonical(f);
    EXPECT_EQ(c.entries(), std::min(f.entries(), f.negated().entries()));
  }
}

TEST(EnumerateSl2, RejectsBadModulus) {
  EXPECT_THROW(enumerate_sl2(4), DomainError);
  EXPECT_THROW(enumerate_psl2(2), DomainError);
}
