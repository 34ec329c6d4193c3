#include <chrono>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "hurwitz/cf.hpp"

using namespace hurwitz;

namespace {

using Q = QI;
using R = QR;

Q qi(long a, long b, int d) { return Q(BigInt(a), BigInt(b), d); }

/// Random element of I_d: (X + Y w) / D reduced, uniform-ish in I.
R random_in_domain(std::mt19937_64& rng, int d, long long D = 1000) {
  const auto& f = FieldConfig::get(d);
  std::uniform_int_distribution<long long> u(-D, D);
  for (;;) {
    long long X = u(rng), Y = u(rng);
    if (!in_closed_domain<long long>(X, Y, D, f)) continue;
    return R(qi(X, Y, d), qi(D, 0, d));
  }
}

/// Random reduced fraction a/b in I_d with denominator of norm up to ~bound.
R random_fraction(std::mt19937_64& rng, int d, long bound = 4000) {
  const auto& f = FieldConfig::get(d);
  std::uniform_int_distribution<long> u(-90, 90);
  for (;;) {
    Q b = qi(u(rng), u(rng), d);
    if (b.is_zero() || b.norm() > bound) continue;
    Q a = qi(u(rng), u(rng), d);
    R z(a, b);
    auto dm = divmod_nearest(z.num(), z.den());
    R r(dm.r, z.den());
    (void)f;
    return r;  // remainder of nearest division lies in I'_d
  }
}

std::set<std::pair<long, long>> as_set(const std::vector<Q>& v) {
  std::set<std::pair<long, long>> s;
  for (const auto& x : v) s.insert({static_cast<long>(x.a()), static_cast<long>(x.b())});
  return s;
}

}  // namespace

TEST(CfStep, Examples) {
  auto [a1, n1] = cf_step(parse_quad_rat("2/5-1/5i", 1));
  EXPECT_EQ(a1, qi(2, 1, 1));
  EXPECT_TRUE(n1.is_zero());
  auto [a2, n2] = cf_step(parse_quad_rat("1/2", 1));
  EXPECT_EQ(a2, qi(2, 0, 1));
  EXPECT_TRUE(n2.is_zero());
  // d = 3: 2/(3 + sqrt(-3)) -> (3 + sqrt(-3))/2 = 1 + w
  R z = R(qi(2, 0, 3), qi(2, 2, 3));
  auto [a3, n3] = cf_step(z);
  EXPECT_EQ(a3, qi(1, 1, 3));
  EXPECT_TRUE(n3.is_zero());
}

TEST(CfStep, Errors) {
  try {
    cf_step(R(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_input);
  }
  try {
    cf_step(parse_quad_rat("3/4", 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::out_of_domain);
  }
}

TEST(Expand, Examples) {
  EXPECT_EQ(expand(R(1)).length(), 0u);
  auto e = expand(parse_quad_rat("2/5-1/5i", 1));
  ASSERT_EQ(e.length(), 1u);
  EXPECT_EQ(e.digits[0], qi(2, 1, 1));

  // (3+i)/7 against repeated exact steps done by hand with field arithmetic
  R z = parse_quad_rat("3/7+1/7i", 1);
  std::vector<Q> oracle;
  for (R x = z; !x.is_zero();) {
    R w = x.inverse();
    Q best;
    bool have = false;
    for (long a = -20; a <= 20 && !have; ++a)
      for (long b = -20; b <= 20; ++b)
        if (strict_domain_contains(w - R(qi(a, b, 1)))) {
          best = qi(a, b, 1);
          have = true;
          break;
        }
    ASSERT_TRUE(have);
    oracle.push_back(best);
    x = w - R(best);
  }
  auto ez = expand(z);
  EXPECT_EQ(ez.digits, oracle);
  EXPECT_EQ(digits_value(ez.digits, 1), z);
  EXPECT_TRUE(convergents_reversed_identity(ez.digits, 1));
}

TEST(Expand, ReversedIdentity) {
  EXPECT_TRUE(convergents_reversed_identity({qi(3, 1, 1)}, 1));
  std::mt19937_64 rng(21);
  for (int d : kSupportedFields)
    for (int i = 0; i < 1000; ++i) {
      auto e = expand(random_fraction(rng, d));
      EXPECT_TRUE(convergents_reversed_identity(e.digits, d));
    }
}

TEST(Expand, ReconstructionDeterminantLengthLaw) {
  std::mt19937_64 rng(1);
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    auto empty = as_set(empty_digit_scan(f, 16));
    const double logR = 0.5 * std::log(static_cast<double>(f.R_sq));
    for (int i = 0; i < 2000; ++i) {
      R z = random_fraction(rng, d);
      auto e = expand(z);
      ASSERT_EQ(digits_value(e.digits, d), z);
      Mat2 m = Mat2::identity(d);
      for (std::size_t j = 0; j < e.length(); ++j) {
        m = m * Mat2::digit(e.digits[j]);
        EXPECT_EQ(e.convergents[j].det().norm(), 1);
        EXPECT_EQ(QR(e.convergents[j].b, e.convergents[j].d), digits_value({e.digits.begin(), e.digits.begin() + j + 1}, d));
        if (j > 0) EXPECT_GT(e.convergents[j].d.norm(), e.convergents[j - 1].d.norm());
        EXPECT_FALSE(empty.count({static_cast<long>(e.digits[j].a()), static_cast<long>(e.digits[j].b())}));
      }
      if (!z.is_zero()) {
        double ht = 0.5 * std::log(static_cast<double>(z.height_sq()));
        EXPECT_LE(static_cast<double>(e.length()), ht / -logR + 1 + 1e-9);
      }
    }
  }
}

TEST(Cost, Totals) {
  auto one = CostFunction::constant_one(), la = CostFunction::log_abs();
  EXPECT_EQ(cost_total(std::vector<Q>{}, one), 0);
  std::vector<Q> five(5, qi(2, 0, 1));
  EXPECT_EQ(cost_total(five, one), 5);
  EXPECT_NEAR(cost_total({qi(2, 1, 1)}, la), 0.5 * std::log(5.0), 1e-15);
  auto t = CostFunction::table({{{2, 1}, 7}}, 3);
  EXPECT_EQ(cost_total({qi(2, 1, 1), qi(2, 0, 1)}, t), 10);
  EXPECT_EQ(CostFunction::parse("len").id(), "len");
  EXPECT_THROW(CostFunction::parse("bogus"), Error);
  std::vector<CostFunction> cs{one, la};
  auto e = expand(parse_quad_rat("3/7+1/7i", 1), cs);
  EXPECT_EQ(e.costs.at("len"), static_cast<double>(e.length()));
}

TEST(Orbit, FloatExamples) {
  auto one = CostFunction::constant_one();
  EXPECT_EQ(orbit_cost_float({0.1, 0.2}, 0, one, 1).cost, 0);
  auto r = orbit_cost_float({0.4, -0.2}, 10, one, 1);
  ASSERT_GE(r.digits.size(), 1u);
  EXPECT_EQ(r.digits[0], (std::pair<long long, long long>{2, 1}));
  EXPECT_TRUE(r.hit_zero);
  EXPECT_EQ(r.digits.size(), 1u);
  double prev = 0;
  for (std::size_t n = 0; n < 30; ++n) {
    double c = orbit_cost_float({0.123, 0.3141}, n, CostFunction::log_abs(), 1).cost;
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Orbit, FloatAgreesWithExact) {
  std::mt19937_64 rng(77);
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    for (int i = 0; i < 300; ++i) {
      R z = random_in_domain(rng, d, 100003);
      auto e = expand(z);
      // walk exactly and in floats side by side while the float remainder is away from 0 and edges
      cplx x = z.to_complex();
      R ex = z;
      for (std::size_t j = 0; j < e.length(); ++j) {
        if (std::abs(x) < 1e-9) break;
        cplx w = 1.0 / x;
        auto [p, q] = round_float(w, f);
        if (domain_clearance(w - f.to_complex(double(p), double(q)), f) < 1e-9) break;
        EXPECT_EQ(p, static_cast<long long>(e.digits[j].a()));
        EXPECT_EQ(q, static_cast<long long>(e.digits[j].b()));
        auto [a, nx] = cf_step(ex);
        ex = nx;
        x = ex.to_complex();  // resync to avoid compounding rounding
      }
    }
  }
}

TEST(EmptyDigits, Table) {
  auto t0 = std::chrono::steady_clock::now();
  auto pm = [](std::initializer_list<std::pair<long, long>> v) {
    std::set<std::pair<long, long>> s;
    for (auto [a, b] : v) {
      s.insert({a, b});
      s.insert({-a, -b});
    }
    return s;
  };
  EXPECT_EQ(as_set(empty_digit_scan(FieldConfig::get(1), 100)), pm({{1, 0}, {0, 1}}));
  // d = 3: 1, w = (1 + sqrt(-3))/2 and 1 - w = (1 - sqrt(-3))/2
  EXPECT_EQ(as_set(empty_digit_scan(FieldConfig::get(3), 100)), pm({{1, 0}, {0, 1}, {1, -1}}));
  for (int d : {2, 7, 11}) EXPECT_EQ(as_set(empty_digit_scan(FieldConfig::get(d), 100)), pm({{1, 0}})) << d;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 60.0);
}
