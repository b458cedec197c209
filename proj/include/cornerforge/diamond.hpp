#pragma once

// Tripartite diamond-free graphs built from 3-AP-free subsets of Z/NZ.

#include "cornerforge/hypergraph.hpp"
#include "cornerforge/parse.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cornerforge {

/// Parts X, Y, Z each a copy of {0..N-1}; three bipartite adjacency matrices.
class TripartiteGraph {
 public:
  enum class Part { XY, YZ, XZ };

  explicit TripartiteGraph(std::uint32_t N) : N_(N), words_((N + 63) / 64) {
    for (auto& m : adj_) m.assign(static_cast<std::size_t>(N) * words_, 0);
    for (auto& m : rev_) m.assign(static_cast<std::size_t>(N) * words_, 0);
  }

  static TripartiteGraph complete(std::uint32_t N) {
    TripartiteGraph G(N);
    for (auto p : {Part::XY, Part::YZ, Part::XZ})
      for (std::uint32_t u = 0; u < N; ++u)
        for (std::uint32_t v = 0; v < N; ++v) G.add(p, u, v);
    return G;
  }

  std::uint32_t part_size() const { return N_; }

  void add(Part p, std::uint32_t u, std::uint32_t v) {
    if (u >= N_ || v >= N_) throw std::out_of_range("tripartite edge out of range");
    auto i = static_cast<std::size_t>(p);
    adj_[i][u * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
    rev_[i][v * words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
  }

  bool has(Part p, std::uint32_t u, std::uint32_t v) const {
    auto i = static_cast<std::size_t>(p);
    return (adj_[i][u * words_ + (v >> 6)] >> (v & 63)) & 1u;
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& m : adj_)
      for (auto w : m) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// Out-neighbours of u in part p (as a bit row), or in-neighbours when reversed.
  const std::uint64_t* row(Part p, std::uint32_t u, bool reversed = false) const {
    auto i = static_cast<std::size_t>(p);
    return (reversed ? rev_[i] : adj_[i]).data() + static_cast<std::size_t>(u) * words_;
  }
  std::size_t words() const { return words_; }

  template <class F>
  void for_each_edge(Part p, F&& visit) const {
    for (std::uint32_t u = 0; u < N_; ++u)
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = row(p, u)[w];
        while (bits) {
          int b = std::countr_zero(bits);
          bits &= bits - 1;
          visit(u, static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(b)));
        }
      }
  }

 private:
  std::uint32_t N_;
  std::size_t words_;
  std::vector<std::uint64_t> adj_[3];
  std::vector<std::uint64_t> rev_[3];
};

inline const char* part_name(TripartiteGraph::Part p) {
  switch (p) {
    case TripartiteGraph::Part::XY: return "XY";
    case TripartiteGraph::Part::YZ: return "YZ";
    case TripartiteGraph::Part::XZ: return "XZ";
  }
  return "?";
}

/// A nontrivial a + c = 2b (mod N) with a, b, c in A, or nullopt.
inline std::optional<std::array<std::int64_t, 3>> find_cyclic_3ap(const std::vector<std::int64_t>& A, std::int64_t N) {
  std::vector<std::int64_t> R;
  for (auto a : A) R.push_back(((a % N) + N) % N);
  std::sort(R.begin(), R.end());
  R.erase(std::unique(R.begin(), R.end()), R.end());
  for (auto a : R)
    for (auto c : R)
      for (auto b : R)
        if ((a + c - 2 * b) % N == 0 && !(a == b && b == c)) return std::array{a, b, c};
  return std::nullopt;
}

/// Edges (x, x+a) in XY, (y, y+a) in YZ, (x, x+2a) in XZ for a in A.
inline TripartiteGraph diamond_free_from_ap_free(const std::vector<std::int64_t>& A, std::int64_t N) {
  if (N < 1 || N > (1 << 20)) throw std::invalid_argument("diamond_free_from_ap_free: N out of range");
  if (auto w = find_cyclic_3ap(A, N))
    throw std::invalid_argument("set contains a 3-AP mod " + std::to_string(N) + ": " + std::to_string((*w)[0]) +
                                ", " + std::to_string((*w)[1]) + ", " + std::to_string((*w)[2]));
  TripartiteGraph G(static_cast<std::uint32_t>(N));
  using P = TripartiteGraph::Part;
  for (auto a0 : A) {
    const std::int64_t a = ((a0 % N) + N) % N;
    for (std::int64_t x = 0; x < N; ++x) {
      auto u = static_cast<std::uint32_t>(x);
      G.add(P::XY, u, static_cast<std::uint32_t>((x + a) % N));
      G.add(P::YZ, u, static_cast<std::uint32_t>((x + a) % N));
      G.add(P::XZ, u, static_cast<std::uint32_t>((x + 2 * a) % N));
    }
  }
  return G;
}

struct EdgeWitness {
  TripartiteGraph::Part part;
  std::uint32_t u, v;
  std::uint64_t triangles;
};

/// Triangles through one edge, by intersecting neighbourhoods in the third part.
inline std::uint64_t triangles_on_edge(const TripartiteGraph& G, TripartiteGraph::Part p, std::uint32_t u,
                                       std::uint32_t v) {
  using P = TripartiteGraph::Part;
  const std::uint64_t *a = nullptr, *b = nullptr;
  switch (p) {
    case P::XY: a = G.row(P::YZ, v); b = G.row(P::XZ, u); break;                 // z
    case P::YZ: a = G.row(P::XY, u, true); b = G.row(P::XZ, v, true); break;     // x
    case P::XZ: a = G.row(P::XY, u); b = G.row(P::YZ, v, true); break;           // y
  }
  std::uint64_t n = 0;
  for (std::size_t w = 0; w < G.words(); ++w) n += static_cast<std::uint64_t>(std::popcount(a[w] & b[w]));
  return n;
}

/// nullopt when every edge lies in exactly one triangle; else the first offending edge.
inline std::optional<EdgeWitness> verify_diamond_free(const TripartiteGraph& G) {
  using P = TripartiteGraph::Part;
  std::optional<EdgeWitness> bad;
  for (auto p : {P::XY, P::YZ, P::XZ}) {
    G.for_each_edge(p, [&](std::uint32_t u, std::uint32_t v) {
      if (bad) return;
      auto t = triangles_on_edge(G, p, u, v);
      if (t != 1) bad = EdgeWitness{p, u, v, t};
    });
    if (bad) break;
  }
  return bad;
}

/// 3-uniform hypergraph on 3N vertices (X, then Y, then Z) whose triples are the triangles.
inline Hypergraph triangle_hypergraph(const TripartiteGraph& G) {
  using P = TripartiteGraph::Part;
  const std::uint32_t N = G.part_size();
  Hypergraph H(3, 3 * N);
  G.for_each_edge(P::XY, [&](std::uint32_t x, std::uint32_t y) {
    const std::uint64_t* a = G.row(P::YZ, y);
    const std::uint64_t* b = G.row(P::XZ, x);
    for (std::size_t w = 0; w < G.words(); ++w) {
      std::uint64_t bits = a[w] & b[w];
      while (bits) {
        int bit = std::countr_zero(bits);
        bits &= bits - 1;
        auto z = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(bit));
        H.add_edge({x, N + y, 2 * N + z});
      }
    }
  });
  return H;
}

// "tripartite N" then lines "XY x y", "YZ y z", "XZ x z".

inline void write_tripartite(std::ostream& out, const TripartiteGraph& G) {
  using P = TripartiteGraph::Part;
  out << "tripartite " << G.part_size() << '\n';
  for (auto p : {P::XY, P::YZ, P::XZ})
    G.for_each_edge(p, [&](std::uint32_t u, std::uint32_t v) { out << part_name(p) << ' ' << u << ' ' << v << '\n'; });
}

inline TripartiteGraph read_tripartite(std::istream& in) {
  using P = TripartiteGraph::Part;
  LineReader reader(in);
  std::vector<Token> tok;
  if (!reader.next(tok) || tok.size() != 2 || tok[0].text != "tripartite")
    throw ParseError(reader.line(), 1, "expected header 'tripartite N'");
  auto N = tok[1].as_int();
  if (N < 1 || N > (1 << 20)) tok[1].fail("part size out of range");
  TripartiteGraph G(static_cast<std::uint32_t>(N));
  while (reader.next(tok)) {
    if (tok.size() != 3) tok[0].fail("expected '<part> u v'");
    P p;
    if (tok[0].text == "XY") p = P::XY;
    else if (tok[0].text == "YZ") p = P::YZ;
    else if (tok[0].text == "XZ") p = P::XZ;
    else tok[0].fail("unknown part '" + tok[0].text + "'");
    auto u = tok[1].as_int(), v = tok[2].as_int();
    if (u < 0 || u >= N) tok[1].fail("vertex out of range");
    if (v < 0 || v >= N) tok[2].fail("vertex out of range");
    G.add(p, static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
  }
  return G;
}

}  // namespace cornerforge
