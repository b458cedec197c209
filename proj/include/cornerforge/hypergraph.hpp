#pragma once

// Uniform hypergraphs, motif homomorphism counts and triforce densities.
//
// A vertex map is a homomorphism when every motif edge lands on an edge of
// the host with k distinct images. Under this convention one host triple
// receives exactly 6 triforce homomorphisms.

#include "cornerforge/number.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/parse.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cornerforge {

using Vertex = std::uint32_t;
using Edge = std::vector<Vertex>;

class Hypergraph {
 public:
  Hypergraph(int k, std::uint32_t n) : k_(k), n_(n) {
    if (k < 2) throw std::invalid_argument("uniformity must be at least 2");
    // Sorted edges are packed base n into 64 bits.
    double span = 1;
    for (int i = 0; i < k; ++i) span *= std::max<double>(n, 1);
    if (span >= 1.8e19) throw std::length_error("hypergraph too large for packed edge keys");
  }

  Hypergraph(int k, std::uint32_t n, const std::vector<Edge>& edges) : Hypergraph(k, n) {
    for (const auto& e : edges) add_edge(e);
  }

  int uniformity() const { return k_; }
  std::uint32_t vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Adds the edge if new; returns false for duplicates.
  bool add_edge(Edge e) {
    if (static_cast<int>(e.size()) != k_) throw std::invalid_argument("edge has wrong size");
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] >= n_) throw std::out_of_range("edge vertex out of range");
      if (i && e[i] == e[i - 1]) throw std::invalid_argument("edge vertices must be distinct");
    }
    if (!keys_.insert(key_sorted(e)).second) return false;
    edges_.push_back(std::move(e));
    return true;
  }

  /// True when the images form an edge (distinct vertices, any order).
  bool has_edge(Edge e) const {
    std::sort(e.begin(), e.end());
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] == e[i - 1]) return false;
    return keys_.count(key_sorted(e)) > 0;
  }

  std::uint64_t key_sorted(const Edge& sorted) const {
    std::uint64_t key = 0;
    for (auto v : sorted) key = key * n_ + v;
    return key;
  }

  /// 3-uniform triforce; 1,2,3 -> 0,1,2 and 1',2',3' -> 3,4,5.
  static Hypergraph triforce() { return kforce(3); }

  /// k-uniform k-force on 2k vertices: edge i swaps vertex i for i'.
  static Hypergraph kforce(int k) {
    Hypergraph F(k, static_cast<std::uint32_t>(2 * k));
    for (int i = 0; i < k; ++i) {
      Edge e;
      for (int j = 0; j < k; ++j) e.push_back(static_cast<Vertex>(j == i ? k + j : j));
      F.add_edge(e);
    }
    return F;
  }

  static Hypergraph single_edge(int k) {
    Hypergraph F(k, static_cast<std::uint32_t>(k));
    Edge e;
    for (int j = 0; j < k; ++j) e.push_back(static_cast<Vertex>(j));
    F.add_edge(e);
    return F;
  }

  static Hypergraph complete(int k, std::uint32_t n) {
    Hypergraph H(k, n);
    Edge e(k);
    auto rec = [&](auto&& self, int pos, Vertex start) -> void {
      if (pos == k) {
        H.add_edge(e);
        return;
      }
      for (Vertex v = start; v < n; ++v) {
        e[pos] = v;
        self(self, pos + 1, v + 1);
      }
    };
    rec(rec, 0, 0);
    return H;
  }

 private:
  int k_;
  std::uint32_t n_;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> keys_;
};

inline BigInt factorial(int k) {
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// k! |E| / n^k.
inline Rational edge_density(const Hypergraph& H) {
  if (H.vertices() == 0) throw std::domain_error("edge_density: empty vertex set");
  BigInt denom_ = boost::multiprecision::pow(BigInt(H.vertices()), static_cast<unsigned>(H.uniformity()));
  return Rational(factorial(H.uniformity()) * H.edge_count(), denom_);
}

/// Homomorphisms F -> H by backtracking over motif vertices.
inline std::uint64_t hom_count(const Hypergraph& F, const Hypergraph& H) {
  if (F.uniformity() != H.uniformity()) throw std::invalid_argument("hom_count: uniformity mismatch");
  const std::uint32_t vf = F.vertices();
  const std::uint32_t n = H.vertices();
  if (vf == 0) return 1;
  if (vf > 10) throw std::invalid_argument("hom_count: motif too large");
  // Edges checked as soon as their last vertex (in index order) is placed.
  std::vector<std::vector<const Edge*>> closes(vf);
  for (const auto& e : F.edges()) closes[*std::max_element(e.begin(), e.end())].push_back(&e);

  std::vector<std::uint64_t> per_root(n, 0);
  parallel_for(n, [&](std::size_t root) {
    std::vector<Vertex> image(vf);
    Edge buf(static_cast<std::size_t>(F.uniformity()));
    auto ok_at = [&](std::uint32_t pos) {
      for (const Edge* e : closes[pos]) {
        for (std::size_t i = 0; i < e->size(); ++i) buf[i] = image[(*e)[i]];
        if (!H.has_edge(buf)) return false;
      }
      return true;
    };
    std::uint64_t count = 0;
    auto rec = [&](auto&& self, std::uint32_t pos) -> void {
      if (pos == vf) {
        ++count;
        return;
      }
      for (Vertex v = 0; v < n; ++v) {
        image[pos] = v;
        if (ok_at(pos)) self(self, pos + 1);
      }
    };
    image[0] = static_cast<Vertex>(root);
    if (ok_at(0)) rec(rec, 1);
    per_root[root] = count;
  });
  std::uint64_t total = 0;
  for (auto c : per_root) total += c;
  return total;
}

/// k-force homomorphism count from codegrees.
///
/// Fixing the images x_1..x_k of the unprimed vertices, the image of i' is
/// any vertex completing {x_j : j != i} to an edge, so the count factorises
/// into codegrees. For k >= 3 every nonzero term has distinct x_j, hence the
/// sum runs over k-sets S with weight k! * prod_{v in S} codeg(S \ v).
inline BigInt kforce_hom_count(const Hypergraph& H) {
  const int k = H.uniformity();
  if (k < 3) throw std::invalid_argument("kforce_hom_count: needs k >= 3");
  std::unordered_map<std::uint64_t, std::uint64_t> codeg;
  std::vector<Edge> faces;
  Edge face(static_cast<std::size_t>(k - 1));
  for (const auto& e : H.edges())
    for (int skip = 0; skip < k; ++skip) {
      for (int j = 0, w = 0; j < k; ++j)
        if (j != skip) face[static_cast<std::size_t>(w++)] = e[static_cast<std::size_t>(j)];
      if (codeg[H.key_sorted(face)]++ == 0) faces.push_back(face);
    }

  std::unordered_set<std::uint64_t> seen;
  BigInt sum = 0;
  Edge S(static_cast<std::size_t>(k));
  for (const auto& T : faces) {
    for (Vertex v = 0; v < H.vertices(); ++v) {
      if (std::binary_search(T.begin(), T.end(), v)) continue;
      std::merge(T.begin(), T.end(), &v, &v + 1, S.begin());
      if (!seen.insert(H.key_sorted(S)).second) continue;
      BigInt prod = 1;
      for (int skip = 0; skip < k && prod != 0; ++skip) {
        for (int j = 0, w = 0; j < k; ++j)
          if (j != skip) face[static_cast<std::size_t>(w++)] = S[static_cast<std::size_t>(j)];
        auto it = codeg.find(H.key_sorted(face));
        prod = it == codeg.end() ? BigInt(0) : prod * it->second;
      }
      sum += prod;
    }
  }
  return sum * factorial(k);
}

/// hom(k-force, H) / n^{2k}.
inline Rational kforce_density(const Hypergraph& H) {
  if (H.vertices() == 0) throw std::domain_error("kforce_density: empty vertex set");
  BigInt denom_ = boost::multiprecision::pow(BigInt(H.vertices()), static_cast<unsigned>(2 * H.uniformity()));
  return Rational(kforce_hom_count(H), denom_);
}

// ---------------------------------------------------------------------------

/// Piecewise-constant W on a g x g x g grid of [0,1]^3, values exact in [0,1].
class StepKernel {
 public:
  StepKernel(int g, std::vector<Rational> values) : g_(g), values_(std::move(values)) {
    if (g < 1) throw std::invalid_argument("kernel resolution must be positive");
    if (values_.size() != static_cast<std::size_t>(g) * g * g) throw std::invalid_argument("kernel needs g^3 values");
    for (const auto& v : values_)
      if (v < 0 || v > 1) throw std::invalid_argument("kernel value outside [0,1]: " + to_string(v));
  }

  static StepKernel constant(int g, const Rational& v) {
    return StepKernel(g, std::vector<Rational>(static_cast<std::size_t>(g) * g * g, v));
  }

  int resolution() const { return g_; }
  const std::vector<Rational>& values() const { return values_; }

  /// Cell value; x varies fastest in storage.
  const Rational& at(int x, int y, int z) const {
    return values_[static_cast<std::size_t>(x + g_ * (y + g_ * z))];
  }

  Rational mean() const {
    Rational s = 0;
    for (const auto& v : values_) s += v;
    return s / static_cast<long long>(values_.size());
  }

 private:
  int g_;
  std::vector<Rational> values_;
};

/// Exact triforce integral of a step kernel: sums the three marginals
/// (over x', y', z' respectively) and averages their product over cells.
inline Rational triforce_weighted(const StepKernel& W) {
  const int g = W.resolution();
  auto idx = [g](int a, int b) { return static_cast<std::size_t>(a + g * b); };
  std::vector<Rational> over_x(static_cast<std::size_t>(g * g), 0);  // (y,z)
  std::vector<Rational> over_y(static_cast<std::size_t>(g * g), 0);  // (x,z)
  std::vector<Rational> over_z(static_cast<std::size_t>(g * g), 0);  // (x,y)
  for (int z = 0; z < g; ++z)
    for (int y = 0; y < g; ++y)
      for (int x = 0; x < g; ++x) {
        const auto& w = W.at(x, y, z);
        over_x[idx(y, z)] += w;
        over_y[idx(x, z)] += w;
        over_z[idx(x, y)] += w;
      }
  Rational sum = 0;
  for (int z = 0; z < g; ++z)
    for (int y = 0; y < g; ++y)
      for (int x = 0; x < g; ++x) sum += over_x[idx(y, z)] * over_y[idx(x, z)] * over_z[idx(x, y)];
  BigInt g6 = boost::multiprecision::pow(BigInt(g), 6);
  return sum / Rational(g6);
}

// ---------------------------------------------------------------------------

struct PruneResult {
  Hypergraph pruned;
  std::vector<std::pair<Vertex, Vertex>> link_edges;  // sorted, u < v
  std::size_t deleted_triples = 0;
};

/// Repeatedly deletes every triple through a pair lying in at most delta*n
/// triples, then returns the surviving hypergraph and its link graph.
/// order_seed == 0 processes sparse pairs smallest-first; any other value
/// picks them in a seeded random order. The fixpoint is the same either way.
inline PruneResult prune_sparse_pairs(const Hypergraph& H, const Rational& delta, std::uint64_t order_seed = 0) {
  if (H.uniformity() != 3) throw std::invalid_argument("prune_sparse_pairs: needs a 3-uniform hypergraph");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("prune_sparse_pairs: delta must lie in (0,1)");
  const auto& edges = H.edges();
  const std::uint64_t n = H.vertices();
  // deg <= delta*n  <=>  deg * den <= num * n
  const BigInt num = numer(delta) * n;
  const BigInt den = denom(delta);
  auto sparse = [&](std::uint64_t deg) { return deg >= 1 && BigInt(deg) * den <= num; };
  auto pair_key = [n](Vertex u, Vertex v) { return std::uint64_t(std::min(u, v)) * n + std::max(u, v); };

  std::map<std::uint64_t, std::vector<std::size_t>> incident;
  for (std::size_t t = 0; t < edges.size(); ++t) {
    const auto& e = edges[t];
    incident[pair_key(e[0], e[1])].push_back(t);
    incident[pair_key(e[0], e[2])].push_back(t);
    incident[pair_key(e[1], e[2])].push_back(t);
  }
  std::map<std::uint64_t, std::uint64_t> degree;
  for (const auto& [key, list] : incident) degree[key] = list.size();

  std::vector<char> alive(edges.size(), 1);
  std::set<std::uint64_t> pool;
  for (const auto& [key, deg] : degree)
    if (sparse(deg)) pool.insert(key);
  std::mt19937_64 rng(order_seed);
  std::size_t deleted = 0;
  while (!pool.empty()) {
    auto it = pool.begin();
    if (order_seed != 0) std::advance(it, static_cast<long>(rng() % pool.size()));
    std::uint64_t key = *it;
    pool.erase(it);
    for (std::size_t t : incident[key]) {
      if (!alive[t]) continue;
      alive[t] = 0;
      ++deleted;
      const auto& e = edges[t];
      for (auto pk : {pair_key(e[0], e[1]), pair_key(e[0], e[2]), pair_key(e[1], e[2])}) {
        auto& deg = degree[pk];
        --deg;
        if (sparse(deg))
          pool.insert(pk);
        else
          pool.erase(pk);
      }
    }
  }

  PruneResult out{Hypergraph(3, H.vertices()), {}, deleted};
  for (std::size_t t = 0; t < edges.size(); ++t)
    if (alive[t]) out.pruned.add_edge(edges[t]);
  for (const auto& [key, deg] : degree)
    if (deg > 0) out.link_edges.emplace_back(static_cast<Vertex>(key / n), static_cast<Vertex>(key % n));
  return out;
}

// ---------------------------------------------------------------------------
// Text formats. Hypergraph: "k n m" then m lines of k vertex indices.
// Kernel: "g" then g^3 rationals p/q, x fastest.

inline void write_hypergraph(std::ostream& out, const Hypergraph& H) {
  out << H.uniformity() << ' ' << H.vertices() << ' ' << H.edge_count() << '\n';
  for (const auto& e : H.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

inline Hypergraph read_hypergraph(std::istream& in) {
  LineReader reader(in);
  std::vector<Token> tok;
  if (!reader.next(tok) || tok.size() != 3) throw ParseError(reader.line(), 1, "expected header 'k n m'");
  auto k = tok[0].as_int(), n = tok[1].as_int(), m = tok[2].as_int();
  if (k < 2 || k > 16) tok[0].fail("uniformity out of range");
  if (n < 0 || n > (1 << 24)) tok[1].fail("vertex count out of range");
  if (m < 0) tok[2].fail("edge count must be non-negative");
  Hypergraph H(static_cast<int>(k), static_cast<std::uint32_t>(n));
  for (std::int64_t i = 0; i < m; ++i) {
    if (!reader.next(tok)) throw ParseError(reader.line() + 1, 1, "expected " + std::to_string(m) + " edges");
    if (static_cast<std::int64_t>(tok.size()) != k) tok[0].fail("edge needs " + std::to_string(k) + " vertices");
    Edge e;
    for (const auto& t : tok) {
      auto v = t.as_int();
      if (v < 0 || v >= n) t.fail("vertex out of range");
      e.push_back(static_cast<Vertex>(v));
    }
    try {
      H.add_edge(e);
    } catch (const std::exception& ex) {
      tok[0].fail(ex.what());
    }
  }
  if (reader.next(tok)) tok[0].fail("trailing data after edge list");
  return H;
}

inline void write_kernel(std::ostream& out, const StepKernel& W) {
  out << W.resolution() << '\n';
  const int g = W.resolution();
  for (int z = 0; z < g; ++z)
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) out << (x ? " " : "") << to_string(W.at(x, y, z));
      out << '\n';
    }
}

inline StepKernel read_kernel(std::istream& in) {
  LineReader reader(in);
  std::vector<Token> tok;
  if (!reader.next(tok) || tok.size() != 1) throw ParseError(reader.line(), 1, "expected header 'g'");
  auto g = tok[0].as_int();
  if (g < 1 || g > 64) tok[0].fail("resolution out of range");
  std::vector<Rational> vals;
  const auto want = static_cast<std::size_t>(g * g * g);
  while (reader.next(tok)) {
    for (const auto& t : tok) {
      if (vals.size() == want) t.fail("more than g^3 values");
      try {
        vals.push_back(parse_rational(t.text));
      } catch (const std::exception& e) {
        t.fail(e.what());
      }
      if (vals.back() < 0 || vals.back() > 1) t.fail("kernel value outside [0,1]");
    }
  }
  if (vals.size() != want) throw ParseError(reader.line() + 1, 1, "expected " + std::to_string(want) + " values");
  return StepKernel(static_cast<int>(g), std::move(vals));
}

}  // namespace cornerforge
