#include <random>
#include <set>

#include <gtest/gtest.h>

#include "hurwitz/stats.hpp"

using namespace hurwitz;

namespace {

// All reduced fractions in I' with norm(den) = n, by a double loop over
// every (a, b) with N(b) = n and |a| <= |b|.
std::set<std::string> sigma_brute(int d, long long n) {
  const auto& f = FieldConfig::get(d);
  std::set<std::string> out;
  const long long L = static_cast<long long>(std::sqrt(static_cast<double>(n)) * 2) + 2;
  for (long long bx = -L; bx <= L; ++bx)
    for (long long by = -L; by <= L; ++by) {
      if (bx * bx + f.trace * bx * by + f.omega_norm * by * by != n) continue;
      for (long long ax = -L; ax <= L; ++ax)
        for (long long ay = -L; ay <= L; ++ay) {
          QR z(QI(BigInt(ax), BigInt(ay), d), QI(BigInt(bx), BigInt(by), d));
          if (!strict_domain_contains(z) || z.den().norm() != n) continue;
          out.insert(z.to_string());
        }
    }
  return out;
}

}  // namespace

TEST(Sigma, OneIsZero) {
  for (int d : kSupportedFields) {
    auto s = enumerate_sigma(FieldConfig::get(d), 1);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_TRUE(s[0].is_zero());
  }
}

TEST(Sigma, MatchesBruteForce) {
  for (int d : kSupportedFields) {
    const long long top = d == 1 ? 200 : 60;
    for (long long n = 1; n <= top; ++n) {
      std::set<std::string> got;
      for (const auto& z : enumerate_sigma(FieldConfig::get(d), n)) got.insert(z.to_string());
      EXPECT_EQ(got, sigma_brute(d, n)) << "d=" << d << " n=" << n;
    }
  }
}

TEST(Sigma, GaussianNormsAvoidThreeModFour) {
  const auto& f = FieldConfig::get(1);
  for (long long n = 3; n <= 400; n += 4) EXPECT_TRUE(enumerate_sigma(f, n).empty()) << n;
}

TEST(Omega, StreamIntegrity) {
  const std::vector<CostFunction> costs{CostFunction::constant_one()};
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    const long long N = 150;
    std::set<std::string> seen;
    std::size_t count = 0;
    long long last_norm = 0;
    const double R = std::sqrt(static_cast<double>(f.R_sq));
    enumerate_omega({d, N}, costs, [&](const QR& z, const CFExpansion& e) {
      ++count;
      EXPECT_TRUE(seen.insert(z.to_string()).second);
      EXPECT_TRUE(strict_domain_contains(z));
      const long long ht2 = static_cast<long long>(z.den().norm());
      EXPECT_GE(ht2, last_norm);
      last_norm = ht2;
      EXPECT_EQ(QR(z.num(), z.den()).to_string(), z.to_string());
      if (!z.is_zero()) {
        EXPECT_LT(static_cast<long long>(z.num().norm()), ht2);
        EXPECT_LE(static_cast<double>(e.length()), 0.5 * std::log(static_cast<double>(ht2)) / std::log(1 / R) + 1 + 1e-9);
      }
    });
    std::size_t total = 0;
    for (long long n = 1; n <= N; ++n) total += enumerate_sigma(f, n).size();
    EXPECT_EQ(count, total);
  }
}

TEST(Euclid64, AgreesWithExactExpansion) {
  std::mt19937_64 rng(3);
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    auto dens = canonical_denominators(f, 5000);
    std::uniform_int_distribution<std::size_t> pick(0, dens.size() - 1);
    int tried = 0;
    while (tried < 300) {
      auto [n, bx, by] = dens[pick(rng)];
      std::vector<std::pair<long long, long long>> as;
      numerators_for(f, bx, by, [&](long long x, long long y) { as.emplace_back(x, y); });
      auto [ax, ay] = as[std::uniform_int_distribution<std::size_t>(0, as.size() - 1)(rng)];
      std::vector<QI> fast;
      long long g = euclid_i64(f, ax, ay, bx, by, [&](long long p, long long q) { fast.emplace_back(BigInt(p), BigInt(q), d); });
      QI A(BigInt(ax), BigInt(ay), d), B(BigInt(bx), BigInt(by), d);
      EXPECT_EQ(BigInt(g), quad_gcd(A, B).norm());
      if (A.is_zero()) continue;
      auto e = expand(QR(A, B), std::vector<CostFunction>{});
      EXPECT_EQ(fast, e.digits);
      ++tried;
    }
  }
}

TEST(KS, Calibration) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N01;
  std::vector<double> x(100000);
  for (auto& v : x) v = N01(rng);
  EXPECT_LE(ks_normal(x), 0.01);
  EXPECT_DOUBLE_EQ(ks_normal(std::vector<double>(500, 0.0)), 0.5);
  try {
    standardize(std::vector<double>(200, 3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_sample);
  }
}

TEST(KS, HistogramFormMatchesSampleForm) {
  std::mt19937_64 rng(2);
  std::binomial_distribution<int> B(12, 0.3);
  std::vector<std::uint64_t> h(13, 0);
  std::vector<double> x;
  for (int i = 0; i < 5000; ++i) {
    int v = B(rng);
    ++h[static_cast<std::size_t>(v)];
    x.push_back(v);
  }
  EXPECT_NEAR(ks_normal_histogram(h), ks_normal(standardize(x)), 1e-12);
}

TEST(LinearFit, ExactLine) {
  auto r = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(r.slope, 2);
  EXPECT_DOUBLE_EQ(r.intercept, 1);
  EXPECT_DOUBLE_EQ(r.r2, 1);
}

TEST(Ensemble, AgreesWithExactStream) {
  for (int d : {1, 3, 11}) {
    EnsembleOptions o;
    o.N_grid = {20, 60, 120};
    o.costs = {CostFunction::constant_one(), CostFunction::log_abs()};
    o.qs = {1, 2, 3};
    o.ws = {0.0, 0.02, {0, std::numbers::pi / 2}};
    o.sample_size = 50;
    auto r = run_ensemble(FieldConfig::get(d), o);
    EXPECT_EQ(r.max_length_excess, 0u);

    // brute statistics at each checkpoint from the exact stream
    const std::vector<CostFunction> costs{CostFunction::constant_one()};
    std::vector<std::vector<double>> lens(3);
    enumerate_omega({d, 120}, costs, [&](const QR& z, const CFExpansion& e) {
      const auto n = static_cast<long long>(z.den().norm());
      for (std::size_t s = 0; s < 3; ++s)
        if (n <= o.N_grid[s]) lens[s].push_back(static_cast<double>(e.length()));
    });
    auto rows = r.moments_for("len");
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t s = 0; s < 3; ++s) {
      const auto& L = lens[s];
      double m = 0, v = 0;
      for (double x : L) m += x;
      m /= static_cast<double>(L.size());
      for (double x : L) v += (x - m) * (x - m);
      v /= static_cast<double>(L.size());
      EXPECT_EQ(rows[s].count, L.size());
      EXPECT_NEAR(rows[s].mean, m, 1e-12);
      EXPECT_NEAR(rows[s].var, v, 1e-12);
      EXPECT_NEAR(rows[s].ks, ks_normal(standardize(L)), 1e-12);

      double zero = 0, plus = 0;
      std::complex<double> imag = 0;
      for (double x : L) zero += 1, plus += std::exp(0.02 * x), imag += std::exp(std::complex<double>(0, std::numbers::pi / 2) * x);
      EXPECT_NEAR(r.dirichlet[s].partial.real(), zero, 1e-9);
      EXPECT_NEAR(r.dirichlet[3 + s].partial.real(), plus, 1e-9);
      EXPECT_NEAR(std::abs(r.dirichlet[6 + s].partial - imag), 0, 1e-9);
    }
    for (std::size_t s = 1; s < 3; ++s) EXPECT_GT(rows[s].mean, rows[s - 1].mean);

    // mod q: histogram totals and q = 1
    for (const auto& m : r.modq)
      if (m.q == 1) EXPECT_EQ(m.deviation, 0.0);
    for (std::size_t s = 0; s < 3; ++s) {
      std::uint64_t tot = 0;
      for (const auto& m : r.modq)
        if (m.q == 3 && m.N == o.N_grid[s]) tot += m.count;
      EXPECT_EQ(tot, rows[s].count);
    }
  }
}

TEST(Ensemble, ThreadCountAndSeedDeterminism) {
  EnsembleOptions o;
  o.N_grid = {64, 256};
  o.costs = {CostFunction::log_abs(), CostFunction::constant_one()};
  o.qs = {2};
  o.ws = {0.01, {0, 2.0}};
  o.sample_size = 300;
  const auto& f = FieldConfig::get(7);
  auto a = run_ensemble(f, o);
  o.threads = 4;
  auto b = run_ensemble(f, o);
  ASSERT_EQ(a.moments.size(), b.moments.size());
  for (std::size_t i = 0; i < a.moments.size(); ++i) {
    EXPECT_EQ(a.moments[i].mean, b.moments[i].mean);
    EXPECT_EQ(a.moments[i].var, b.moments[i].var);
    EXPECT_EQ(a.moments[i].ks, b.moments[i].ks);
  }
  for (std::size_t i = 0; i < a.dirichlet.size(); ++i) EXPECT_EQ(a.dirichlet[i].partial, b.dirichlet[i].partial);
}

TEST(Ensemble, LatticeCountGrowth) {
  EnsembleOptions o;
  o.N_grid = {256, 1024, 4096};
  o.costs = {CostFunction::constant_one()};
  o.ws = {0.0};
  auto r = run_ensemble(FieldConfig::get(1), o);
  EXPECT_NEAR(r.dirichlet[0].fit_slope, 2.0, 0.1);
  auto rows = r.moments_for("len");
  std::vector<double> x, y;
  for (const auto& m : rows) x.push_back(std::log(static_cast<double>(m.N))), y.push_back(m.mean);
  EXPECT_GT(linear_fit(x, y).r2, 0.999);
}

TEST(Ensemble, RejectsBadGrid) {
  EnsembleOptions o;
  o.costs = {CostFunction::constant_one()};
  o.N_grid = {10, 5};
  EXPECT_THROW(run_ensemble(FieldConfig::get(1), o), Error);
  o.N_grid = {10};
  o.qs = {0};
  EXPECT_THROW(run_ensemble(FieldConfig::get(1), o), Error);
}
