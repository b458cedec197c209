#include "cornerforge/avoiders.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cornerforge;

namespace {

// n alpha mod 1 lies in [j/(T L), j/(T L) + 1/(T^2 L)) for some j in Lambda,
// decided from nested rational enclosures of alpha.
bool oracle_in_F(const AlphaSequence& s, std::int64_t L, std::int64_t T, const std::vector<std::int64_t>& lambda,
                 std::int64_t n) {
  if (n == 0) return std::find(lambda.begin(), lambda.end(), 0) != lambda.end();
  for (std::size_t k = 1;; ++k) {
    auto c = s.convergent(k), d = s.convergent(k + 1);
    Rational mid(c.P, c.Q), rad(BigInt(1), c.Q * d.Q);
    Rational lo = (mid - rad) * n, hi = (mid + rad) * n;
    if (lo > hi) std::swap(lo, hi);
    if (floor(lo) != floor(hi)) continue;
    Rational base(floor(lo));
    lo -= base;
    hi -= base;
    int verdict = 0;  // 1 inside, -1 outside, 0 undecided
    bool undecided = false;
    for (auto j : lambda) {
      Rational a(BigInt(j), BigInt(T) * L), b = a + Rational(BigInt(1), BigInt(T) * T * L);
      if (lo >= a && hi < b) verdict = 1;
      else if (hi < a || lo >= b) continue;
      else undecided = true;
    }
    if (verdict == 1) return true;
    if (!undecided) return false;
    if (k > 400) throw std::runtime_error("oracle did not separate");
  }
}

std::vector<std::int64_t> range_set(std::int64_t L) {
  std::vector<std::int64_t> v;
  for (std::int64_t j = 0; j < L; ++j) v.push_back(j);
  return v;
}

AvoiderConfig small_config(std::int64_t L, std::int64_t target) {
  AvoiderConfig cfg;
  cfg.L = L;
  cfg.target_N = target;
  return cfg;
}

GridSet random_line(std::int64_t side, double p, std::mt19937_64& rng) {
  GridSet A(1, side);
  std::bernoulli_distribution coin(p);
  for (std::int64_t x = 1; x <= side; ++x)
    if (coin(rng)) A.insert({x});
  return A;
}

}  // namespace

TEST(Identities, QuadraticForm) {
  EXPECT_EQ(f_quad<std::int64_t>(1, 1, 1), 0);
  EXPECT_EQ(f_quad<std::int64_t>(2, 1, 0), 3);
  EXPECT_EQ(f_quad<std::int64_t>(3, 1, 2), 0);
  EXPECT_EQ(f_quad<std::int64_t>(0, 2, 0), -4);
  // f(3,1,1) + f(2,2,1) + f(2,1,2) = 3 f(2,1,1) at d = 1
  EXPECT_EQ(f_quad<std::int64_t>(3, 1, 1) + f_quad<std::int64_t>(2, 2, 1) + f_quad<std::int64_t>(2, 1, 2), 3 * f_quad<std::int64_t>(2, 1, 1));
  EXPECT_EQ(3 * f_quad<std::int64_t>(2, 1, 1), 3);
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::int64_t> v(-1000000000, 1000000000);
  for (int i = 0; i < 2000; ++i) ASSERT_EQ(f_identity_defect(v(rng), v(rng), v(rng), v(rng)), 0);
}

TEST(Identities, ThreeTerm) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> v(-1000000, 1000000);
  for (int i = 0; i < 2000; ++i) {
    BigInt a1 = v(rng), a2 = v(rng), a3 = v(rng), n = v(rng), d = v(rng);
    ASSERT_EQ(three_term_lhs(a1, a2, a3, n, d), three_term_rhs(a1, a2, a3, n, d));
  }
  EXPECT_EQ(three_term_lhs(0, 1, 2, 1, 1), 4);
}

TEST(Theta, Constants) {
  auto sys = qc_coefficients({0, 1, 2, 3, 4});
  auto t = theta_constants({0, 1, 2, 3, 4}, sys);
  EXPECT_EQ(t.theta1, 12);
  EXPECT_EQ(t.theta2, 4);
  EXPECT_EQ(t.theta3, 1);
  auto wide = qc_coefficients({0, 1, 5, 9, 10});
  auto w = theta_constants({0, 1, 5, 9, 10}, wide);
  EXPECT_EQ(w.theta1, 4 * wide.max_abs_gamma());
  EXPECT_EQ(w.theta2, 2 * 1 * 4 * 5);
  EXPECT_EQ(w.theta3, (75 + w.theta1 * w.theta1 - 1) / (w.theta1 * w.theta1));
}

TEST(IntervalSystem, CellsAndMeasure) {
  IntervalSystem sys(8, 3, {5, 0, 5, 2});
  EXPECT_EQ(sys.modulus(), 72);
  EXPECT_EQ(sys.lambda(), (std::vector<std::int64_t>{0, 2, 5}));
  EXPECT_EQ(sys.measure(), Rational(3, 72));
  EXPECT_TRUE(sys.contains_cell(0));
  EXPECT_FALSE(sys.contains_cell(1));
  EXPECT_FALSE(sys.contains_cell(3));
  EXPECT_TRUE(sys.contains_cell(6));
  EXPECT_TRUE(sys.contains_cell(15));
  EXPECT_FALSE(sys.contains_cell(24));
  EXPECT_FALSE(sys.contains_cell(-3));
  auto [lo, hi] = sys.interval(2);
  EXPECT_EQ(lo, Rational(2, 24));
  EXPECT_EQ(hi, Rational(2, 24) + Rational(1, 72));
  EXPECT_THROW(IntervalSystem(8, 3, {8}), std::invalid_argument);
  EXPECT_THROW(IntervalSystem(0, 3, {}), std::invalid_argument);
}

TEST(FractionalCells, AgreesWithDirectComputation) {
  auto s = build_alpha_hard(8, 16);
  std::mt19937_64 rng(43);
  for (std::int64_t D : {72, 1000, 9 * 512}) {
    const std::int64_t nmax = 2000000;
    FractionalCells fc(s, D, nmax);
    EXPECT_TRUE(fc.fast());
    EXPECT_GT(fc.Q(), BigInt(D) * nmax);
    std::uniform_int_distribution<std::int64_t> n(-nmax, nmax);
    for (int i = 0; i < 500; ++i) {
      auto v = n(rng);
      ASSERT_EQ(BigInt(fc.cell(v)), s.fractional_cell(v, D)) << v;
    }
    EXPECT_THROW(fc.cell(nmax + 1), std::out_of_range);
  }
}

TEST(FractionalCells, StepperMatchesCell) {
  auto s = build_alpha_hard(8, 4);
  FractionalCells fc(s, 72, 100000);
  for (std::int64_t step : {1, 7, -13, 2000}) {
    std::int64_t n = -40000;
    auto st = fc.stepper(n, step);
    for (int i = 0; i < 30; ++i, n += step, st.advance()) ASSERT_EQ(st.cell(), fc.cell(n)) << n;
  }
}

TEST(FractionalCells, NormBelow) {
  auto s = build_alpha_hard(8, 4);
  FractionalCells fc(s, 72, 100000);
  for (std::int64_t n = -500; n <= 500; ++n) {
    auto c = fc.cell(n);
    EXPECT_EQ(fc.norm_below(n, 1), c == 0 || c == 71) << n;
    EXPECT_EQ(fc.norm_below(n, 3), c < 3 || c >= 69) << n;
  }
}

TEST(ChooseAlpha, LandsNearTarget) {
  auto [seq, ch] = choose_alpha(8, 200);
  EXPECT_EQ(ch.q, seq.pq(ch.i).Q);
  EXPECT_GE(ch.i, seq.K());
  EXPECT_LE(ch.q, 800);
  EXPECT_GE(ch.q * 4, 200);
  EXPECT_EQ(gcd(ch.q, BigInt(840)), 1);
  EXPECT_EQ(seq.r(), Rational(BigInt(1) << ch.j));
  EXPECT_THROW(choose_alpha(8, 1), std::invalid_argument);
}

TEST(AvoiderL, Values) {
  EXPECT_EQ(avoider_L(0.1, 0.05), 2);
  EXPECT_EQ(avoider_L(0.01, 1.0), static_cast<std::int64_t>(std::ceil(std::exp(std::log(100.0) * std::log(100.0)))));
  EXPECT_THROW(avoider_L(0.5, 1), std::invalid_argument);
  EXPECT_THROW(avoider_L(0.1, 0), std::invalid_argument);
}

TEST(CornerAvoider, MembershipMatchesOracle) {
  auto av = build_corner_avoider(small_config(8, 60));
  const auto& P = av.params();
  EXPECT_EQ(P.lambda, behrend_sum_free(8).elements);
  EXPECT_FALSE(verify_relation_free(P.lambda, {1, 1, 1, -3}).has_value());
  const std::int64_t N = av.N();
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<std::int64_t> x(1, N);
  for (int i = 0; i < 1500; ++i) {
    auto a = x(rng), b = x(rng), c = x(rng);
    ASSERT_EQ(av.contains(a, b, c), oracle_in_F(av.alpha(), P.L, 3, P.lambda, f_quad(a, b, c))) << a << " " << b << " " << c;
  }
  EXPECT_FALSE(av.contains(0, 1, 1));
  EXPECT_FALSE(av.contains(1, N + 1, 1));
}

TEST(CornerAvoider, OracleOnFullLambda) {
  auto cfg = small_config(8, 40);
  cfg.lambda = std::vector<std::int64_t>{0, 3, 4, 7};
  auto av = build_corner_avoider(cfg);
  const std::int64_t nmax = 2 * av.N() * av.N();
  for (std::int64_t n = -nmax; n <= nmax; n += 7)
    ASSERT_EQ(av.in_F(n), oracle_in_F(av.alpha(), 8, 3, {0, 3, 4, 7}, n)) << n;
}

TEST(CornerAvoider, DensityPaths) {
  auto av = build_corner_avoider(small_config(8, 60));
  auto A = av.materialize();
  auto ex = av.exact_density();
  const std::int64_t N = av.N();
  EXPECT_TRUE(ex.is_exact);
  EXPECT_EQ(ex.exact, Rational(BigInt(A.size()), BigInt(N) * N * N));
  std::uint64_t direct = 0;
  for (std::int64_t a = 1; a <= N; ++a)
    for (std::int64_t b = 1; b <= N; ++b)
      for (std::int64_t c = 1; c <= N; ++c) direct += av.contains(a, b, c);
  EXPECT_EQ(direct, A.size());
  auto sm = av.sampled_density(200000, 9);
  EXPECT_NEAR(sm.value, ex.value, 5 * sm.std_error + 1e-9);
  EXPECT_EQ(av.sampled_density(1000, 3).value, av.sampled_density(1000, 3).value);
}

TEST(CornerAvoider, FullLambdaDensityNearOneNinth) {
  auto cfg = small_config(8, 1000);
  cfg.lambda = range_set(8);
  auto av = build_corner_avoider(cfg);
  EXPECT_NEAR(av.exact_density().value, 1.0 / 9, 0.02);
}

TEST(CornerAvoider, LargeNDensityNearMeasure) {
  auto av = build_corner_avoider(small_config(8, 10000));
  ASSERT_GE(av.N(), 10000 / 4);
  auto ex = av.exact_density();
  EXPECT_NEAR(ex.value, av.system().measure().convert_to<double>(), 0.05);
}

TEST(CornerAvoider, CornersSatisfyTransfer) {
  auto av = build_corner_avoider(small_config(8, 60));
  auto A = av.materialize();
  auto rep = verify_corner_avoidance(av, A);
  EXPECT_TRUE(rep.transfer_ok());
  EXPECT_TRUE(rep.bound_ok());
  EXPECT_EQ(rep.rows.size(), static_cast<std::size_t>(2 * (av.N() - 1)));
  std::uint64_t total = 0;
  for (const auto& r : rep.rows) {
    EXPECT_NE(r.d, 0);
    EXPECT_EQ(r.count, count_pattern(A, Pattern::corner(3), r.d));
    total += r.count;
  }
  EXPECT_EQ(total, rep.corners);
  EXPECT_THROW(check_corner_transfer(av, {1, 1, 1}, 0), std::invalid_argument);
}

TEST(CornerAvoider, SolutionBearingLambdaIsCaught) {
  auto cfg = small_config(8, 60);
  cfg.lambda = std::vector<std::int64_t>{0, 1, 2};  // 0 + 1 + 2 = 3 * 1
  auto av = build_corner_avoider(cfg);
  auto rep = verify_corner_avoidance(av, av.materialize());
  EXPECT_FALSE(rep.transfer_ok());
  bool witnessed = false;
  for (const auto& r : rep.rows)
    if (r.witness) {
      auto chk = check_corner_transfer(av, *r.witness, r.d);
      EXPECT_TRUE(chk.premise);
      EXPECT_FALSE(chk.transfer && chk.downstream);
      witnessed = true;
    }
  EXPECT_TRUE(witnessed);
}

TEST(FivePoint, MembershipAndTransfer) {
  const std::vector<std::int64_t> a{0, 1, 2, 3, 4};
  auto cfg = small_config(16, 120);
  auto av = build_five_point_avoider(a, cfg);
  const auto& P = av.params();
  EXPECT_EQ(P.theta1, 12);
  EXPECT_EQ(av.system().modulus(), 144 * 16);
  EXPECT_FALSE(find_qc(qc_coefficients(a), P.lambda).has_value());
  auto A = av.materialize();
  for (std::int64_t x = 1; x <= av.N(); ++x)
    ASSERT_EQ(A.contains({x}), oracle_in_F(av.alpha(), 16, 12, P.lambda, x * x)) << x;
  auto rep = verify_five_point_avoidance(av, A);
  EXPECT_TRUE(rep.transfer_ok());
  EXPECT_THROW(build_five_point_avoider({0, 1, 2, 3}, cfg), std::invalid_argument);
}

TEST(Lift, AffineDimension) {
  EXPECT_EQ(affine_dimension(Pattern::corner(3)), 3u);
  EXPECT_EQ(affine_dimension(Pattern::progression(5)), 1u);
  EXPECT_EQ(affine_dimension(Pattern(2, {{0, 0}, {1, 1}, {2, 2}, {5, 5}})), 1u);
  EXPECT_EQ(vector_rank({{1, 2, 3}, {2, 4, 6}, {0, 0, 1}}), 2u);
}

TEST(Lift, PhiRoutePointwiseAndOccurrences) {
  std::mt19937_64 rng(45);
  auto base = random_line(3000, 0.6, rng);
  const auto T = Pattern::corner(4);
  auto lift = lift_avoider(T, base);
  EXPECT_EQ(lift.route, "phi");
  EXPECT_EQ(lift.C, 5);
  const std::int64_t N = lift.set.side();
  EXPECT_EQ(N, 3000 / 780);
  Point x(4, 1);
  for (x[0] = 1; x[0] <= N; ++x[0])
    for (x[1] = 1; x[1] <= N; ++x[1])
      for (x[2] = 1; x[2] <= N; ++x[2])
        for (x[3] = 1; x[3] <= N; ++x[3]) ASSERT_EQ(lift.set.contains(x), base.contains({phi_map(x, lift.C)}));
  std::vector<Point> image;
  for (const auto& t : T.points()) image.push_back({phi_map(t, lift.C)});
  for (std::int64_t d : {-2, -1, 1, 2})
    for_each_occurrence(lift.set, T, d, [&](const Point& anchor) {
      auto y = phi_map(anchor, lift.C);
      for (const auto& t : image) ASSERT_TRUE(base.contains({y + d * t[0]}));
    });
}

TEST(Lift, PhiRouteOnFivePointBase) {
  auto av = build_five_point_avoider({0, 1, 2, 3, 4}, small_config(16, 400));
  auto base = av.materialize();
  const Pattern T(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}});
  auto lift = lift_avoider(T, base);
  EXPECT_EQ(lift.used.size(), 5u);
  lift.set.for_each([&](const Point& x) { EXPECT_TRUE(av.contains(phi_map(x, lift.C))); });
}

TEST(Lift, PhiIdentityReproducesBase) {
  auto av = build_corner_avoider(small_config(8, 30));
  auto base = av.materialize();
  auto lift = lift_avoider(Pattern::corner(3), base);
  EXPECT_EQ(lift.route, "Phi");
  EXPECT_TRUE(lift.set == base);
}

TEST(Lift, PhiPaddingMultipliesCounts) {
  auto av = build_corner_avoider(small_config(8, 20));
  auto base = av.materialize();
  const std::int64_t N = base.side();
  auto lift = lift_avoider(Pattern::corner(4), base);
  EXPECT_EQ(lift.set.side(), N);
  EXPECT_EQ(lift.set.size(), base.size() * static_cast<std::uint64_t>(N));
  for (std::int64_t d : {-3, -1, 1, 2, 5})
    EXPECT_EQ(count_pattern(lift.set, Pattern::corner(4), d),
              count_pattern(base, Pattern::corner(3), d) * static_cast<std::uint64_t>(N - std::abs(d)));
}

TEST(Lift, PhiSkewedColumnsPreserveCounts) {
  auto av = build_corner_avoider(small_config(8, 20));
  auto base = av.materialize();
  const Pattern T(3, {{0, 0, 0}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  auto lift = lift_avoider(T, base);
  EXPECT_EQ(lift.set.size(), base.size());
  for (std::int64_t d : {-4, -1, 1, 3})
    EXPECT_EQ(count_pattern(lift.set, T, d), count_pattern(base, Pattern::corner(3), d)) << d;
  EXPECT_THROW(lift_avoider(Pattern(3, {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}), base), std::invalid_argument);
}
