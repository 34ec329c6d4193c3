#include <random>

#include <gtest/gtest.h>

#include "hurwitz/geometry.hpp"

using namespace hurwitz;

namespace {

QI qi(long a, long b, int d) { return QI(BigInt(a), BigInt(b), d); }

struct Built {
  WResult w;
  CellComplex cx;
};

const Built& built(int d) {
  static std::map<int, Built> cache;
  auto it = cache.find(d);
  if (it == cache.end()) {
    const auto& f = FieldConfig::get(d);
    Built b{generate_W(f), {}};
    b.cx = build_cells(b.w.curves, f, 512, b.w.n0);
    it = cache.emplace(d, std::move(b)).first;
  }
  return it->second;
}

QR random_rational_in_I(std::mt19937_64& rng, int d, long long D) {
  const auto& f = FieldConfig::get(d);
  std::uniform_int_distribution<long long> u(-D, D);
  for (;;) {
    long long X = u(rng), Y = u(rng);
    if (in_closed_domain<long long>(X, Y, D, f)) return QR(qi(X, Y, d), qi(D, 0, d));
  }
}

}  // namespace

TEST(GenerateW, D1CurveSet) {
  const auto& w = built(1).w;
  EXPECT_EQ(w.n0, 1);
  std::set<GenCircle> got(w.curves.begin(), w.curves.end());
  std::set<GenCircle> want;
  for (const auto& s : boundary_curves(FieldConfig::get(1))) want.insert(s);
  for (auto [a, b] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}})
    want.insert(GenCircle::circle(1, a, b, 1));
  EXPECT_EQ(got, want);
}

TEST(GenerateW, StabilizesEveryField) {
  const std::map<int, std::size_t> golden{{1, 12}, {2, 22}, {3, 15}, {7, 37}, {11, 79}};
  for (int d : kSupportedFields) {
    const auto& f = FieldConfig::get(d);
    const auto& w = built(d).w;
    EXPECT_TRUE(w.stabilized);
    EXPECT_LE(w.n0, 10);
    EXPECT_EQ(w.curves.size(), golden.at(d)) << d;
    auto sides = boundary_curves(f);
    for (const auto& s : sides) EXPECT_NE(std::find(w.curves.begin(), w.curves.end(), s), w.curves.end());
    EXPECT_TRUE(closure_defect(w.curves, f).empty()) << d;
  }
}

TEST(GenerateW, NoStabilizationReported) {
  // d = 11 needs several rounds; a budget of one round cannot suffice
  try {
    generate_W(FieldConfig::get(11), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_stabilization);
  }
  EXPECT_FALSE(generate_W_partial(FieldConfig::get(11), 1).stabilized);
}

TEST(LocalDimension, Examples) {
  const auto& curves = built(1).w.curves;
  EXPECT_EQ(local_dimension(parse_quad_rat("1/7+1/5i", 1), curves), 2);
  EXPECT_EQ(local_dimension(parse_quad_rat("1/2+1/2i", 1), curves), 0);
  // 1/2 lies on Re z = 1/2 and on no circle |z - c| = 1 (distances 1/2, sqrt(5)/2, ...)
  int on = 0;
  for (const auto& g : curves) on += g.sign_at(parse_quad_rat("1/2", 1)) == 0;
  EXPECT_EQ(on, 1);
  EXPECT_EQ(local_dimension(parse_quad_rat("1/2", 1), curves), 1);
}

TEST(LocalDimension, MonotoneAlongOrbits) {
  std::mt19937_64 rng(9);
  for (int d : kSupportedFields) {
    const auto& curves = built(d).w.curves;
    int lower = 0;
    for (int i = 0; i < 3000; ++i) {
      QR x = random_rational_in_I(rng, d, 12);
      if (x.is_zero()) continue;
      QR y = cf_step(x).second;
      int rx = local_dimension(x, curves), ry = local_dimension(y, curves);
      EXPECT_GE(rx, ry) << x.to_string();
      lower += rx < 2;
    }
    EXPECT_GT(lower, 0);  // the sample does reach curves
  }
}

TEST(Cells, CountsAreaAndEuler) {
  const std::map<int, std::array<std::size_t, 3>> golden{
      {1, {13, 24, 12}}, {2, {27, 60, 34}}, {3, {19, 36, 18}}, {7, {113, 256, 144}}, {11, {519, 1158, 640}}};
  for (int d : kSupportedFields) {
    const auto& cx = built(d).cx;
    const auto& f = FieldConfig::get(d);
    std::array<std::size_t, 3> got{cx.count(0), cx.count(1), cx.count(2)};
    EXPECT_EQ(got, golden.at(d)) << d;
    EXPECT_EQ(static_cast<long>(got[0]) - static_cast<long>(got[1]) + static_cast<long>(got[2]), 1);
    EXPECT_NEAR(cx.area2(), f.covolume, 2.0 / cx.resolution);
  }
}

TEST(Cells, RepresentativesShareSignVector) {
  for (int d : kSupportedFields) {
    const auto& cx = built(d).cx;
    for (const auto& c : cx.cells) {
      if (c.dim != 2) continue;
      ASSERT_FALSE(c.rep_exact.empty());
      for (const auto& [X, Y] : c.rep_exact) {
        QR z;
        auto num = [&](const Rational& r) { return BigInt(boost::multiprecision::numerator(r)); };
        auto den = [&](const Rational& r) { return BigInt(boost::multiprecision::denominator(r)); };
        BigInt D = boost::multiprecision::lcm(den(X), den(Y));
        z = QR(QI(num(X) * (D / den(X)), num(Y) * (D / den(Y)), d), QI(D, 0, d));
        EXPECT_EQ(cx.sign_vector_exact(z), c.sign);
        EXPECT_EQ(cx.locate_exact(z), c.id);
      }
    }
  }
}

TEST(Cells, PartitionProperty) {
  std::mt19937_64 rng(4);
  for (int d : kSupportedFields) {
    const auto& cx = built(d).cx;
    int lower = 0;
    for (int i = 0; i < 3000; ++i) {
      QR z = random_rational_in_I(rng, d, i % 2 ? 24 : 997);
      int c = cx.locate_exact(z);
      ASSERT_GE(c, 0) << z.to_string();
      const Cell& cell = cx.cells[static_cast<std::size_t>(c)];
      EXPECT_EQ(cell.dim, local_dimension(z, cx.curves));
      SignVector s = cx.sign_vector_exact(z);
      for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s[k] == 0, cell.sign[k] == 0);
      if (cell.dim == 2) EXPECT_EQ(s, cell.sign);
      lower += cell.dim < 2;
    }
    EXPECT_GT(lower, 0);
  }
}

TEST(Cells, ResolutionChecks) {
  const auto& w = built(1).w;
  try {
    build_cells(w.curves, FieldConfig::get(1), 32);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
  try {
    build_cells(built(11).w.curves, FieldConfig::get(11), 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::resolution_too_coarse);
  }
}

TEST(Markov, D1AndD3Compatible) {
  auto r1 = verify_markov(built(1).cx, 100, 100000, 1);
  EXPECT_GE(r1.triples, 100000);
  EXPECT_EQ(r1.violations(), 0);
  auto r3 = verify_markov(built(3).cx, 50, 100000, 2);
  EXPECT_GE(r3.triples, 100000);
  EXPECT_EQ(r3.violations(), 0);
}

TEST(Markov, OtherFieldsCompatible) {
  for (int d : {2, 7, 11}) {
    auto r = verify_markov(built(d).cx, 50, 50000, 3);
    EXPECT_EQ(r.violations(), 0) << d;
  }
}

TEST(Markov, NegativeControl) {
  for (int d : {1, 3}) {
    const auto& w = built(d).w;
    std::vector<GenCircle> cut;
    bool removed = false;
    for (std::size_t k = 0; k < w.curves.size(); ++k) {
      if (!removed && w.generation[k] == 1 && !w.curves[k].is_line()) {
        removed = true;
        continue;
      }
      cut.push_back(w.curves[k]);
    }
    ASSERT_TRUE(removed);
    auto cx = build_cells(cut, FieldConfig::get(d), 256);
    EXPECT_GT(verify_markov(cx, 100, 100000, 1).violations(), 0) << d;
  }
}

TEST(Markov, ThreadCountDoesNotChangeResult) {
  auto a = verify_markov(built(2).cx, 30, 20000, 5, 1);
  auto b = verify_markov(built(2).cx, 30, 20000, 5, 3);
  EXPECT_EQ(a.triples, b.triples);
  EXPECT_EQ(a.skipped, b.skipped);
  EXPECT_EQ(a.violations(), b.violations());
}
