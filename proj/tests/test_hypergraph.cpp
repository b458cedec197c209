#include "cornerforge/hypergraph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace cornerforge;

namespace {

// Enumerates all n^|V(F)| maps.
std::uint64_t brute_homs(const Hypergraph& F, const Hypergraph& H) {
  const std::uint32_t v = F.vertices(), n = H.vertices();
  std::vector<Vertex> img(v, 0);
  std::uint64_t total = 0;
  while (true) {
    bool ok = true;
    for (const auto& e : F.edges()) {
      Edge im;
      for (auto u : e) im.push_back(img[u]);
      std::sort(im.begin(), im.end());
      if (std::adjacent_find(im.begin(), im.end()) != im.end() || !H.has_edge(im)) {
        ok = false;
        break;
      }
    }
    total += ok;
    std::uint32_t i = 0;
    for (; i < v; ++i) {
      if (++img[i] < n) break;
      img[i] = 0;
    }
    if (i == v) break;
  }
  return total;
}

Hypergraph random_hypergraph(int k, std::uint32_t n, double p, std::mt19937_64& rng) {
  Hypergraph H(k, n);
  std::bernoulli_distribution coin(p);
  std::vector<int> pick(n, 0);
  std::fill(pick.end() - k, pick.end(), 1);
  do {
    if (!coin(rng)) continue;
    Edge e;
    for (std::uint32_t i = 0; i < n; ++i)
      if (pick[i]) e.push_back(i);
    H.add_edge(e);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return H;
}

// Direct 6-fold sum over grid cells.
Rational six_loop_triforce(const StepKernel& W) {
  const int g = W.resolution();
  Rational s = 0;
  for (int x = 0; x < g; ++x)
    for (int y = 0; y < g; ++y)
      for (int z = 0; z < g; ++z)
        for (int xp = 0; xp < g; ++xp)
          for (int yp = 0; yp < g; ++yp)
            for (int zp = 0; zp < g; ++zp) s += W.at(xp, y, z) * W.at(x, yp, z) * W.at(x, y, zp);
  return s / Rational(boost::multiprecision::pow(BigInt(g), 6));
}

StepKernel random_kernel(int g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(0, 6);
  std::vector<Rational> v;
  for (int i = 0; i < g * g * g; ++i) v.emplace_back(num(rng), 6);
  return StepKernel(g, v);
}

}  // namespace

TEST(Hypergraph, EdgeValidation) {
  Hypergraph H(3, 4);
  EXPECT_TRUE(H.add_edge({2, 0, 1}));
  EXPECT_FALSE(H.add_edge({0, 1, 2}));
  EXPECT_THROW(H.add_edge({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(H.add_edge({0, 1, 4}), std::out_of_range);
  EXPECT_TRUE(H.has_edge({1, 2, 0}));
  EXPECT_FALSE(H.has_edge({1, 1, 0}));
}

TEST(EdgeDensity, Examples) {
  Hypergraph one(3, 3, {{0, 1, 2}});
  EXPECT_EQ(edge_density(one), Rational(2, 9));
  EXPECT_EQ(edge_density(Hypergraph::complete(3, 3)), Rational(2, 9));
  EXPECT_EQ(edge_density(Hypergraph(3, 5)), 0);
  EXPECT_THROW(edge_density(Hypergraph(3, 0)), std::domain_error);
}

TEST(HomCount, Examples) {
  Hypergraph one(3, 3, {{0, 1, 2}});
  EXPECT_EQ(hom_count(Hypergraph::triforce(), one), 6u);
  EXPECT_EQ(brute_homs(Hypergraph::triforce(), one), 6u);
  Hypergraph four(4, 4, {{0, 1, 2, 3}});
  EXPECT_EQ(hom_count(Hypergraph::kforce(4), four), 24u);
  EXPECT_EQ(brute_homs(Hypergraph::kforce(4), four), 24u);
  EXPECT_THROW(hom_count(Hypergraph::kforce(4), one), std::invalid_argument);
}

TEST(HomCount, MatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 12; ++trial) {
    auto H = random_hypergraph(3, 5 + trial % 2, 0.5, rng);
    ASSERT_EQ(hom_count(Hypergraph::triforce(), H), brute_homs(Hypergraph::triforce(), H));
    ASSERT_EQ(hom_count(Hypergraph::single_edge(3), H), 6 * H.edge_count());
  }
}

TEST(HomCount, EdgeDensityAgreesWithSingleEdgeHoms) {
  std::mt19937_64 rng(2);
  for (int k : {2, 3, 4}) {
    auto H = random_hypergraph(k, 7, 0.4, rng);
    Rational via_homs(BigInt(hom_count(Hypergraph::single_edge(k), H)),
                      boost::multiprecision::pow(BigInt(7), static_cast<unsigned>(k)));
    EXPECT_EQ(edge_density(H), via_homs);
  }
}

TEST(KforceDensity, Examples) {
  Hypergraph one(3, 3, {{0, 1, 2}});
  EXPECT_EQ(kforce_density(one), Rational(2, 243));
  EXPECT_EQ(kforce_density(Hypergraph(3, 6)), 0);
}

TEST(KforceDensity, MatchesHomCount) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 16; ++trial) {
    int k = 3 + trial % 2;
    std::uint32_t n = k == 3 ? 6 + trial % 3 : 6 + trial % 2;
    auto H = random_hypergraph(k, n, 0.5, rng);
    Rational expect(BigInt(hom_count(Hypergraph::kforce(k), H)),
                    boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(2 * k)));
    ASSERT_EQ(kforce_density(H), expect) << "trial " << trial;
  }
}

TEST(Triforce, ConstantKernels) {
  EXPECT_EQ(triforce_weighted(StepKernel::constant(1, 1)), 1);
  EXPECT_EQ(triforce_weighted(StepKernel::constant(2, Rational(1, 2))), Rational(1, 8));
  EXPECT_EQ(triforce_weighted(StepKernel::constant(3, Rational(1, 3))), Rational(1, 27));
}

TEST(Triforce, MatchesSixLoopOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 15; ++trial) {
    auto W = random_kernel(1 + trial % 3, rng);
    ASSERT_EQ(triforce_weighted(W), six_loop_triforce(W));
  }
}

TEST(Triforce, AtLeastMeanToTheFourth) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto W = random_kernel(2 + trial % 2, rng);
    auto m = W.mean();
    EXPECT_GE(triforce_weighted(W), m * m * m * m);
  }
}

TEST(Kernel, Validation) {
  EXPECT_THROW(StepKernel(2, std::vector<Rational>(7, 0)), std::invalid_argument);
  EXPECT_THROW(StepKernel::constant(1, Rational(3, 2)), std::invalid_argument);
}

TEST(Prune, Examples) {
  Hypergraph one(3, 3, {{0, 1, 2}});
  auto r = prune_sparse_pairs(one, Rational(1, 3));
  EXPECT_EQ(r.pruned.edge_count(), 0u);
  EXPECT_EQ(r.deleted_triples, 1u);
  EXPECT_TRUE(r.link_edges.empty());

  auto K6 = Hypergraph::complete(3, 6);
  auto k = prune_sparse_pairs(K6, Rational(1, 6));
  EXPECT_EQ(k.pruned.edge_count(), K6.edge_count());
  EXPECT_EQ(k.link_edges.size(), 15u);

  // {0,1,2} has pair {0,1} in one triple; the rest sit in a K5 on 2..6
  Hypergraph H(3, 7, {{0, 1, 2}});
  for (Vertex a = 2; a < 7; ++a)
    for (Vertex b = a + 1; b < 7; ++b)
      for (Vertex c = b + 1; c < 7; ++c) H.add_edge({a, b, c});
  auto p = prune_sparse_pairs(H, Rational(1, 7));
  EXPECT_FALSE(p.pruned.has_edge({0, 1, 2}));
  EXPECT_EQ(p.pruned.edge_count(), H.edge_count() - 1);
  EXPECT_THROW(prune_sparse_pairs(one, Rational(0)), std::invalid_argument);
}

TEST(Prune, FixpointPropertiesAndOrderIndependence) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    std::uint32_t n = 7 + trial % 4;
    auto H = random_hypergraph(3, n, 0.35, rng);
    Rational delta(1 + trial % 3, 5);
    auto a = prune_sparse_pairs(H, delta, 0);
    auto b = prune_sparse_pairs(H, delta, 1234 + trial);
    auto ea = a.pruned.edges(), eb = b.pruned.edges();
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    ASSERT_EQ(ea, eb);
    EXPECT_EQ(a.link_edges, b.link_edges);
    // every surviving pair lies in more than delta*n surviving triples
    std::map<std::pair<Vertex, Vertex>, int> deg;
    for (const auto& e : a.pruned.edges())
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) ++deg[{e[i], e[j]}];
    for (const auto& [pr, c] : deg) EXPECT_GT(Rational(c), delta * n);
    EXPECT_EQ(deg.size(), a.link_edges.size());
    // deleted total <= C(n,2) * delta * n
    EXPECT_LE(Rational(a.deleted_triples), Rational(n * (n - 1) / 2) * delta * n);
    EXPECT_EQ(a.deleted_triples + a.pruned.edge_count(), H.edge_count());
  }
}

TEST(Formats, RoundTripAndDiagnostics) {
  std::mt19937_64 rng(7);
  auto H = random_hypergraph(3, 6, 0.5, rng);
  std::stringstream ss;
  write_hypergraph(ss, H);
  auto H2 = read_hypergraph(ss);
  EXPECT_EQ(H2.edges(), H.edges());

  auto W = random_kernel(2, rng);
  std::stringstream ks;
  write_kernel(ks, W);
  EXPECT_EQ(read_kernel(ks).values(), W.values());

  std::istringstream bad("3 4 1\n0 1 9\n");
  try {
    read_hypergraph(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 5u);
  }
  std::istringstream badk("1\n3/2\n");
  EXPECT_THROW(read_kernel(badk), ParseError);
}
