#include "cornerforge/behrend.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace cornerforge;

namespace {

bool has_3ap(const std::vector<std::int64_t>& S) {
  std::set<std::int64_t> in(S.begin(), S.end());
  for (auto x : S)
    for (auto z : S)
      if (x != z && (x + z) % 2 == 0 && in.count((x + z) / 2)) return true;
  return false;
}

// x + y + z = 3w, not all equal, by hashing the fourth entry.
bool has_sum_solution(const std::vector<std::int64_t>& S) {
  std::set<std::int64_t> in(S.begin(), S.end());
  for (auto x : S)
    for (auto y : S)
      for (auto z : S) {
        auto s = x + y + z;
        if (s % 3 == 0 && in.count(s / 3) && !(x == y && y == z)) return true;
      }
  return false;
}

std::int64_t poly(std::int64_t c0, std::int64_t c1, std::int64_t c2, std::int64_t t) { return c0 + c1 * t + c2 * t * t; }

}  // namespace

TEST(Behrend, ThreeApFree) {
  EXPECT_EQ(behrend_3ap_free(1).elements, std::vector<std::int64_t>{0});
  for (std::int64_t L : {10, 50, 300, 2000}) {
    auto S = behrend_3ap_free(L);
    EXPECT_FALSE(has_3ap(S.elements)) << L;
    for (auto v : S.elements) EXPECT_TRUE(v >= 0 && v < L);
    EXPECT_GE(Rational(S.elements.size()), S.params.size_bound()) << L;
  }
}

TEST(Behrend, SumFree) {
  for (std::int64_t L : {1, 8, 64, 512, 4096}) {
    auto S = behrend_sum_free(L);
    EXPECT_FALSE(has_sum_solution(S.elements)) << L;
    EXPECT_FALSE(verify_relation_free(S.elements, {1, 1, 1, -3}).has_value()) << L;
    EXPECT_GE(Rational(S.elements.size()), S.params.size_bound()) << L;
  }
  auto big = behrend_sum_free(4096);
  EXPECT_EQ(big.params.d, 2);
  EXPECT_EQ(big.params.m, 64);
  EXPECT_EQ(big.params.digits, 10);
  EXPECT_GT(big.elements.size(), 1u);
}

TEST(RelationFree, Examples) {
  auto w = verify_relation_free({0, 1, 2}, {1, 1, -2});
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ((*w)[0] + (*w)[1], 2 * (*w)[2]);
  EXPECT_FALSE(verify_relation_free({0, 1}, {1, 1, 1, -3}).has_value());
  EXPECT_FALSE(verify_relation_free({}, {1, 1, 1, -3}).has_value());
  EXPECT_FALSE(verify_relation_free({5}, {1, 1, 1, -3}).has_value());
  auto w2 = verify_relation_free({0, 1, 2}, {1, 1, 1, -3});
  ASSERT_TRUE(w2.has_value());
  EXPECT_EQ((*w2)[0] + (*w2)[1] + (*w2)[2], 3 * (*w2)[3]);
  EXPECT_THROW(verify_relation_free({1}, {0, 0}), std::invalid_argument);
}

TEST(RelationFree, AgreesWithDirectSearch) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<std::int64_t> s;
    while (s.size() < 6) s.insert(static_cast<std::int64_t>(rng() % 40));
    std::vector<std::int64_t> S(s.begin(), s.end());
    EXPECT_EQ(verify_relation_free(S, {1, 1, 1, -3}).has_value(), has_sum_solution(S));
    EXPECT_EQ(verify_relation_free(S, {1, 1, -2}).has_value(), has_3ap(S));
  }
}

TEST(QC, CoefficientRows) {
  auto sys = qc_coefficients({0, 1, 2, 3, 4});
  ASSERT_EQ(sys.gamma.size(), 2u);
  EXPECT_EQ(sys.M, 6);
  for (const auto& row : sys.gamma) EXPECT_EQ(row, (std::array<std::int64_t, 4>{-1, 3, -3, 1}));
  EXPECT_EQ(sys.max_abs_gamma(), 3);

  auto w = qc_coefficients({0, 1, 2, 4});
  EXPECT_EQ(w.M, 24);
  EXPECT_EQ(w.gamma[0], (std::array<std::int64_t, 4>{-3, 8, -6, 1}));
  EXPECT_THROW(qc_coefficients({0, 1, 1, 2}), std::invalid_argument);
  EXPECT_THROW(qc_coefficients({0, 1, 2}), std::invalid_argument);
}

TEST(QC, RowsAnnihilateQuadraticsAndSumToZero) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    std::set<std::int64_t> s;
    while (s.size() < 5) s.insert(static_cast<std::int64_t>(rng() % 21) - 10);
    std::vector<std::int64_t> a(s.begin(), s.end());
    std::shuffle(a.begin(), a.end(), rng);
    auto sys = qc_coefficients(a);
    for (std::size_t i = 0; i < sys.gamma.size(); ++i) {
      i128 s0 = 0, s1 = 0, s2 = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_NE(sys.gamma[i][j], 0);
        s0 += sys.gamma[i][j];
        s1 += i128(sys.gamma[i][j]) * a[i + j];
        s2 += i128(sys.gamma[i][j]) * a[i + j] * a[i + j];
      }
      EXPECT_TRUE(s0 == 0 && s1 == 0 && s2 == 0);
    }
  }
}

TEST(QC, Recognition) {
  auto sys = qc_coefficients({0, 1, 2, 3, 4});
  EXPECT_TRUE(is_qc(sys, {0, 1, 4, 9, 16}));
  EXPECT_FALSE(is_qc(sys, {5, 5, 5, 5, 5}));
  EXPECT_FALSE(is_qc(sys, {0, 1, 2, 3, 5}));
  EXPECT_THROW(is_qc(sys, {0, 1}), std::invalid_argument);
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<std::int64_t> c(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::int64_t c0 = c(rng), c1 = c(rng), c2 = c(rng);
    if (c1 == 0 && c2 == 0) c2 = 1;
    std::vector<std::int64_t> y;
    for (auto t : sys.a) y.push_back(poly(c0, c1, c2, t));
    EXPECT_TRUE(is_qc(sys, y));
    y[static_cast<std::size_t>(trial % 5)] += 1 + trial % 3;
    EXPECT_FALSE(is_qc(sys, y));
  }
}

TEST(QC, FreeSets) {
  for (std::int64_t L : {1, 64, 256, 1024}) {
    auto Q = behrend_qc_free({0, 1, 2, 3, 4}, L);
    EXPECT_EQ(Q.sphere.params.gamma, 12);
    EXPECT_FALSE(find_qc(Q.system, Q.sphere.elements).has_value()) << L;
    EXPECT_GE(Rational(Q.sphere.elements.size()), Q.sphere.params.size_bound());
  }
  // every element of a sphere set has the same digit norm
  auto Q = behrend_qc_free({0, 1, 2, 3, 4}, 1 << 20);
  const auto& P = Q.sphere.params;
  for (auto v : Q.sphere.elements) {
    std::int64_t norm = 0, x = v;
    for (int j = 0; j < P.d; ++j) {
      norm += (x % P.m) * (x % P.m);
      EXPECT_LT(x % P.m, P.digits);
      x /= P.m;
    }
    EXPECT_EQ(norm, P.radius);
  }
  EXPECT_FALSE(find_qc(Q.system, Q.sphere.elements).has_value());
}

TEST(QC, SearchFindsPlantedConfiguration) {
  auto sys = qc_coefficients({0, 1, 2, 3, 4});
  std::vector<std::int64_t> S{3, 100, 7, 4, 12, 19, 28, 55};  // 3, 4, 7, 12, 19 = t^2 + 3
  auto w = find_qc(sys, S);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(is_qc(sys, *w));
}
