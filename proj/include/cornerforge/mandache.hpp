#pragma once

// Random subsets of G x G drawn from a step kernel: (a, b) is kept with
// probability W(X_a, Y_b, Z_{-a-b}) for i.i.d. uniform X, Y, Z indexed by G.
// For every d != 0 the expected corner density |S_d| / |G|^2 is the kernel's
// triforce density.
//
// Randomness: each uniform is a 64-bit fraction h / 2^64 with
// h = philox_u64(seed, index, role); role 0/1/2 for X/Y/Z with index the
// element, role 3 for the inclusion coin with index a * |G| + b.

#include "cornerforge/hypergraph.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/patterns.hpp"
#include "cornerforge/philox.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

namespace cornerforge {

enum class MandacheRole : std::uint32_t { x = 0, y = 1, z = 2, include = 3 };

/// Grid cell of the uniform h / 2^64 at resolution g: floor(h g / 2^64).
inline int uniform_cell(std::uint64_t h, int g) { return static_cast<int>((u128(h) * static_cast<unsigned>(g)) >> 64); }

/// h / 2^64 < p / q, exact.
inline bool uniform_below(std::uint64_t h, const Rational& prob) {
  if (prob <= 0) return false;
  if (prob >= 1) return true;
  return BigInt(h) * denom(prob) < (numer(prob) << 64);
}

inline GroupSet sample_mandache(const StepKernel& W, const FiniteGroup& G, std::uint64_t seed) {
  const std::size_t n = G.order();
  const int g = W.resolution();
  std::vector<int> cx(n), cy(n), cz(n);
  for (std::size_t e = 0; e < n; ++e) {
    cx[e] = uniform_cell(philox_u64(seed, e, static_cast<std::uint32_t>(MandacheRole::x)), g);
    cy[e] = uniform_cell(philox_u64(seed, e, static_cast<std::uint32_t>(MandacheRole::y)), g);
    cz[e] = uniform_cell(philox_u64(seed, e, static_cast<std::uint32_t>(MandacheRole::z)), g);
  }
  // Bits per row are written by one worker each.
  std::vector<std::vector<std::size_t>> kept(n);
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t c = G.neg(G.add(a, b));
      const Rational& w = W.at(cx[a], cy[b], cz[c]);
      auto h = philox_u64(seed, a * n + b, static_cast<std::uint32_t>(MandacheRole::include));
      if (uniform_below(h, w)) kept[a].push_back(b);
    }
  });
  GroupSet A(G);
  for (std::size_t a = 0; a < n; ++a)
    for (auto b : kept[a]) A.insert(a, b);
  return A;
}

struct MandacheSeedStats {
  std::uint64_t seed = 0;
  std::optional<double> min_d, max_d;  // extreme |S_d| / |G|^2 over d != 0
  std::optional<double> mean;          // average over d != 0
};

struct MandacheReport {
  std::string group;
  std::uint64_t kernel_hash = 0;
  Rational triforce = 0;
  std::vector<MandacheSeedStats> per_seed;
  std::optional<double> grand_mean;
  std::optional<double> std_dev;    // sample deviation of per-seed means
  std::optional<double> std_error;  // std_dev / sqrt(#seeds)

  /// |grand_mean - triforce| in units of the standard error.
  std::optional<double> z_score() const {
    if (!grand_mean || !std_error || *std_error == 0) return std::nullopt;
    return std::abs(*grand_mean - triforce.convert_to<double>()) / *std_error;
  }
};

/// FNV-1a over the kernel's text serialization.
inline std::uint64_t kernel_hash(const StepKernel& W) {
  std::ostringstream os;
  write_kernel(os, W);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline MandacheReport mandache_report(const StepKernel& W, const FiniteGroup& G, const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() < 2) throw std::invalid_argument("mandache_report: need at least two seeds");
  MandacheReport rep;
  rep.group = G.descriptor();
  rep.kernel_hash = kernel_hash(W);
  rep.triforce = triforce_weighted(W);
  const double area = static_cast<double>(G.order()) * static_cast<double>(G.order());
  std::vector<double> means;
  for (auto seed : seeds) {
    MandacheSeedStats st;
    st.seed = seed;
    auto spec = spectrum(sample_mandache(W, G, seed));
    if (!spec.entries.empty()) {
      st.min_d = static_cast<double>(spec.min()->second) / area;
      st.max_d = static_cast<double>(spec.max()->second) / area;
      st.mean = static_cast<double>(spec.total()) / (area * static_cast<double>(spec.entries.size()));
      means.push_back(*st.mean);
    }
    rep.per_seed.push_back(st);
  }
  if (means.size() >= 2) {
    double s = 0;
    for (double v : means) s += v;
    double mu = s / static_cast<double>(means.size());
    double ss = 0;
    for (double v : means) ss += (v - mu) * (v - mu);
    rep.grand_mean = mu;
    rep.std_dev = std::sqrt(ss / static_cast<double>(means.size() - 1));
    rep.std_error = *rep.std_dev / std::sqrt(static_cast<double>(means.size()));
  }
  return rep;
}

}  // namespace cornerforge
