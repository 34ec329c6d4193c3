#include <random>

#include <gtest/gtest.h>

#include "hurwitz/ring.hpp"

using namespace hurwitz;

namespace {

using Q = QuadInt<BigInt>;
using R = QuadRat<BigInt>;

Q qi(long a, long b, int d) { return Q(BigInt(a), BigInt(b), d); }

// Membership oracle written straight from the rectangle/hexagon description
// in Euclidean coordinates: x = Re z and s = sqrt(d) * Im z are rational.
bool oracle_closed(const Rational& x, const Rational& s, int d) {
  using boost::multiprecision::abs;
  if (abs(x) > Rational(1, 2)) return false;
  if (d == 1 || d == 2) return abs(s) <= Rational(d, 2);  // |y| <= sqrt(d)/2
  // |y +- x/sqrt(d)| <= (d+1)/(4 sqrt(d))  <=>  |s +- x| <= (d+1)/4
  Rational lim(d + 1, 4);
  return abs(s + x) <= lim && abs(s - x) <= lim;
}

std::pair<Rational, Rational> euclid(const R& z) {
  auto [X, Y] = z.coords();
  const auto& f = z.field();
  // x = X + Y Re(w), s = sqrt(d) Im z = d * Y (w = sqrt(-d)) or d * Y / 2
  Rational x = X + (f.half_omega ? Y / 2 : Rational(0));
  Rational s = f.half_omega ? Rational(f.d) * Y / 2 : Rational(f.d) * Y;
  return {x, s};
}

bool oracle_strict(const R& z) {
  auto [x, s] = euclid(z);
  int d = z.d();
  if (!oracle_closed(x, s, d)) return false;
  std::vector<Q> excluded;
  if (d == 1 || d == 2)
    excluded = {qi(1, 0, d), qi(0, 1, d)};
  else
    excluded = {qi(1, 0, d), qi(0, 1, d), qi(1, -1, d)};
  for (const auto& a : excluded) {
    auto [x2, s2] = euclid(z - R(a));
    if (oracle_closed(x2, s2, d)) return false;
  }
  return true;
}

R random_rat(std::mt19937_64& rng, int d, int span, int den_span) {
  std::uniform_int_distribution<int> U(-span, span), V(-den_span, den_span);
  Q den(d);
  while (den.is_zero()) den = qi(V(rng), V(rng), d);
  return R(qi(U(rng), U(rng), d), den);
}

}  // namespace

TEST(FieldConfig, Invariants) {
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    EXPECT_LT(f.R_sq, 1);
    EXPECT_EQ(f.half_omega, d % 4 == 3);
    EXPECT_EQ(f.boundary_line_count(), (d == 1 || d == 2) ? 4u : 6u);
  }
  EXPECT_EQ(FieldConfig::get(1).R_sq, Rational(1, 2));
  EXPECT_EQ(FieldConfig::get(2).R_sq, Rational(3, 4));
  EXPECT_EQ(FieldConfig::get(3).R_sq, Rational(1, 3));
  EXPECT_EQ(FieldConfig::get(7).R_sq, Rational(4, 7));
  // Circumradius of the d = 11 hexagon; the often-quoted 15/16 is only an
  // upper bound.
  EXPECT_EQ(FieldConfig::get(11).R_sq, Rational(9, 11));
  EXPECT_LE(FieldConfig::get(11).R_sq, Rational(15, 16));
  EXPECT_THROW(FieldConfig::get(5), Error);
}

TEST(QuadInt, Norm) {
  EXPECT_EQ(qnorm(qi(0, 0, 1)), 0);
  EXPECT_EQ(qnorm(qi(1, 1, 1)), 2);
  EXPECT_EQ(qnorm(qi(0, 1, 3)), 1);
}

TEST(QuadInt, NormMultiplicative) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long long> U(-100000, 100000);
  for (int d : kSupportedFields) {
    for (int i = 0; i < 20000; ++i) {
      QuadInt<long long> x(U(rng), U(rng), d), y(U(rng) / 100, U(rng) / 100, d);
      ASSERT_EQ(qnorm(x * y), qnorm(x) * qnorm(y));
      ASSERT_GE(qnorm(x), 0);
      ASSERT_EQ(qnorm(x) == 0, x.is_zero());
    }
  }
}

TEST(StrictDomain, Examples) {
  EXPECT_TRUE(strict_domain_contains(R(1)));
  EXPECT_TRUE(strict_domain_contains(R(qi(0, 0, 1))));
  EXPECT_FALSE(strict_domain_contains(parse_quad_rat("1/2", 1)));
  EXPECT_TRUE(strict_domain_contains(parse_quad_rat("-1/2", 1)));
  EXPECT_FALSE(strict_domain_contains(parse_quad_rat("s/3", 3)));
  // The corner (1-i)/2 is removed by the set difference (it lies in I + 1).
  EXPECT_FALSE(strict_domain_contains(parse_quad_rat("1/2-1/2i", 1)));
  EXPECT_TRUE(strict_domain_contains(parse_quad_rat("-1/2-1/2i", 1)));
}

TEST(StrictDomain, MatchesDefinitionOracle) {
  std::mt19937_64 rng(5);
  for (int d : kSupportedFields)
    for (int i = 0; i < 3000; ++i) {
      R z = random_rat(rng, d, 12, 6);
      ASSERT_EQ(strict_domain_contains(z), oracle_strict(z)) << z.to_string() << " d=" << d;
    }
}

TEST(RoundNearest, Examples) {
  EXPECT_EQ(round_nearest(parse_quad_rat("1/3-1/4i", 1)), qi(0, 0, 1));
  EXPECT_EQ(round_nearest(parse_quad_rat("12/5+9/10i", 1)), qi(2, 1, 1));
  EXPECT_EQ(round_nearest(parse_quad_rat("7/2", 1)), qi(4, 0, 1));
  EXPECT_EQ(round_nearest(parse_quad_rat("-7/2", 1)), qi(-3, 0, 1));
}

TEST(RoundNearest, TilingUniqueness) {
  // round_nearest audits the full 3x3 neighbourhood and throws on 0 or >= 2
  // candidates; also compare against the exhaustive oracle on a 5x5 window.
  std::mt19937_64 rng(7);
  for (int d : kSupportedFields) {
    for (int i = 0; i < 10000; ++i) {
      R z = random_rat(rng, d, 40, 9);
      Q beta = round_nearest(z);
      ASSERT_TRUE(strict_domain_contains(z - R(beta)));
      if (i % 10 == 0) {
        int hits = 0;
        for (int p = -2; p <= 2; ++p)
          for (int q = -2; q <= 2; ++q)
            hits += oracle_strict(z - R(beta + qi(p, q, d)));
        ASSERT_EQ(hits, 1) << z.to_string();
      }
    }
  }
}

TEST(RoundNearest, TranslationEquivariant) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> U(-50, 50);
  for (int d : kSupportedFields)
    for (int i = 0; i < 2000; ++i) {
      R z = random_rat(rng, d, 30, 8);
      Q b = qi(U(rng), U(rng), d);
      ASSERT_EQ(round_nearest(z + R(b)), round_nearest(z) + b);
    }
}

TEST(RoundNearest, FastPathAgreesWithAudit) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long long> U(-5000, 5000);
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    for (int i = 0; i < 20000; ++i) {
      long long X = U(rng), Y = U(rng), D = 1 + (U(rng) + 5000) % 200;
      ASSERT_EQ(round_coords<long long>(X, Y, D, f), round_coords_checked<long long>(X, Y, D, f));
    }
  }
}

TEST(DivMod, Examples) {
  Q b = qi(3, -2, 1), q = qi(-4, 7, 1);
  auto dm = divmod_nearest(q * b, b);
  EXPECT_EQ(dm.q, q);
  EXPECT_TRUE(dm.r.is_zero());

  dm = divmod_nearest(qi(5, 0, 1), qi(2, 1, 1));
  EXPECT_EQ(dm.q, qi(2, -1, 1));
  EXPECT_TRUE(dm.r.is_zero());

  dm = divmod_nearest(qi(7, 0, 1), qi(2, 0, 1));
  EXPECT_EQ(dm.q, qi(4, 0, 1));
  EXPECT_EQ(dm.r, qi(-1, 0, 1));

  EXPECT_THROW(divmod_nearest(qi(1, 0, 1), qi(0, 0, 1)), Error);
}

TEST(DivMod, NormDescent) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long long> U(-1000000, 1000000);
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    for (int i = 0; i < 20000; ++i) {
      QuadInt<long long> a(U(rng), U(rng), d), b(U(rng) / 7, U(rng) / 7, d);
      if (b.is_zero()) continue;
      auto dm = divmod_nearest(a, b);
      ASSERT_EQ(dm.q * b + dm.r, a);
      // |r|^2 <= R^2 |b|^2
      ASSERT_LE(Rational(BigInt(qnorm(dm.r))), f.R_sq * Rational(BigInt(qnorm(b))));
    }
  }
}

TEST(Gcd, Examples) {
  Q a = qi(6, 4, 1);
  EXPECT_EQ(quad_gcd(a, qi(0, 0, 1)), canonical_associate(a));
  Q g = quad_gcd(qi(5, 0, 1), qi(2, 1, 1));
  EXPECT_EQ(qnorm(g), 5);
  EXPECT_TRUE(exact_div(qi(2, 1, 1), g).is_unit());
  EXPECT_EQ(quad_gcd(qi(3, 0, 1), qi(2, 0, 1)), qi(1, 0, 1));
  EXPECT_THROW(quad_gcd(qi(0, 0, 1), qi(0, 0, 1)), Error);
}

TEST(Gcd, TerminatesWithinDescentBound) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<long long> U(-1000000, 1000000);
  for (int d : kSupportedFields) {
    const double rsq = static_cast<double>(FieldConfig::get(d).R_sq);
    for (int i = 0; i < 5000; ++i) {
      QuadInt<long long> a(U(rng), U(rng), d), b(U(rng), U(rng), d);
      if (b.is_zero()) continue;
      int steps = 0;
      auto x = a, y = b;
      while (!y.is_zero()) {
        auto dm = divmod_nearest(x, y);
        x = y;
        y = dm.r;
        ++steps;
      }
      double bound = std::log(double(qnorm(b))) / std::log(1.0 / rsq) + 2;
      ASSERT_LE(steps, bound);
      auto g = canonical_associate(x);
      auto q1 = divmod_nearest(a, g), q2 = divmod_nearest(b, g);
      ASSERT_TRUE(q1.r.is_zero() && q2.r.is_zero());
    }
  }
}

TEST(Gcd, CommonDivisorDividesGcd) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long long> U(-300, 300);
  for (int d : kSupportedFields)
    for (int i = 0; i < 2000; ++i) {
      QuadInt<long long> c(U(rng), U(rng), d), a(U(rng), U(rng), d), b(U(rng), U(rng), d);
      if (c.is_zero() || (a.is_zero() && b.is_zero())) continue;
      auto g = quad_gcd(c * a, c * b);
      ASSERT_TRUE(divmod_nearest(g, c).r.is_zero());
    }
}

TEST(QuadRat, CanonicalForm) {
  int d = 1;
  R x(qi(2, 4, d), qi(6, 2, d));
  R y(qi(2, 4, d) * qi(0, 1, d) * qi(5, -3, d), qi(6, 2, d) * qi(0, 1, d) * qi(5, -3, d));
  EXPECT_EQ(x, y);
  EXPECT_TRUE(x.den().a() > 0 && x.den().b() >= 0);
  EXPECT_EQ(R(qi(0, 0, d), qi(3, 1, d)), R(d));
  for (int dd : kSupportedFields) {
    R z(qi(3, -5, dd), qi(-7, 2, dd));
    EXPECT_EQ(z * z.inverse(), R(qi(1, 0, dd)));
  }
}

TEST(Parse, Literals) {
  EXPECT_EQ(parse_quad_rat("2/5-1/5i", 1), R(qi(2, -1, 1), qi(5, 0, 1)));
  EXPECT_EQ(parse_quad_rat("1/2+1/2w", 3), R(qi(1, 1, 3), qi(2, 0, 3)));
  // sqrt(-3) = 2w - 1
  EXPECT_EQ(parse_quad_rat("s", 3), R(qi(-1, 2, 3)));
  EXPECT_THROW(parse_quad_rat("1+i", 2), Error);
  EXPECT_THROW(parse_quad_rat("1/0", 1), Error);
  EXPECT_THROW(parse_quad_rat("abc", 1), Error);
}
