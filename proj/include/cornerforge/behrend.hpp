#pragma once

// Behrend-style digit-sphere sets and their relation verifiers.
//
// Elements are base-m numbers whose digits lie in [0, floor(m/Gamma)) and
// whose digit vectors share one squared norm. Gamma bounds the per-digit
// size of any relation so that it cannot carry between base-m digits; a
// relation then holds digitwise, and strict convexity of the sphere forces
// the trivial solution.

#include "cornerforge/number.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cornerforge {

struct DigitSphereParams {
  std::int64_t L = 1;
  int d = 1;              // floor(sqrt(ln L)), at least 1
  std::int64_t m = 1;     // floor(L^(1/d))
  std::int64_t gamma = 1; // digit headroom divisor
  std::int64_t radius = 0;
  std::int64_t digits = 0; // floor(m / gamma)

  /// floor(m/Gamma)^d / (d (m/Gamma)^2), the pigeonhole lower bound on |Lambda|.
  Rational size_bound() const {
    BigInt k_pow = boost::multiprecision::pow(BigInt(digits), static_cast<unsigned>(d));
    return Rational(k_pow * gamma * gamma, BigInt(d) * m * m);
  }
};

struct SphereSet {
  DigitSphereParams params;
  std::vector<std::int64_t> elements;  // sorted, subset of [0, L)
};

/// Largest t >= 1 with t^2 <= ln L.
inline int sphere_dimension(std::int64_t L) {
  long double lnL = std::log(static_cast<long double>(L));
  int d = 1;
  while (static_cast<long double>(d + 1) * (d + 1) <= lnL) ++d;
  return d;
}

/// Largest m with m^d <= L.
inline std::int64_t integer_root(std::int64_t L, int d) {
  auto fits = [&](std::int64_t m) {
    BigInt p = boost::multiprecision::pow(BigInt(m), static_cast<unsigned>(d));
    return p <= L;
  };
  auto m = static_cast<std::int64_t>(std::pow(static_cast<long double>(L), 1.0L / d));
  while (m > 1 && !fits(m)) --m;
  while (fits(m + 1)) ++m;
  return std::max<std::int64_t>(m, 1);
}

/// Digit-sphere set in [0, L) with headroom Gamma, radius taken from the most
/// populated norm class (smallest radius on ties). When floor(m/Gamma) == 0
/// there are no admissible digits and the set degenerates to {0}.
inline SphereSet digit_sphere_set(std::int64_t L, std::int64_t gamma) {
  if (L < 1) throw std::invalid_argument("digit_sphere_set: L must be positive");
  if (gamma < 1) throw std::invalid_argument("digit_sphere_set: Gamma must be positive");
  SphereSet out;
  auto& P = out.params;
  P.L = L;
  P.gamma = gamma;
  P.d = sphere_dimension(L);
  P.m = integer_root(L, P.d);
  P.digits = P.m / gamma;
  if (P.digits == 0) {
    out.elements = {0};
    return out;
  }
  const int d = P.d;
  const std::int64_t k = P.digits;
  std::map<std::int64_t, std::vector<std::int64_t>> by_norm;
  std::vector<std::int64_t> x(static_cast<std::size_t>(d), 0);
  while (true) {
    std::int64_t norm = 0, value = 0, scale = 1;
    for (int j = 0; j < d; ++j) {
      norm += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      value += x[static_cast<std::size_t>(j)] * scale;
      scale *= P.m;
    }
    by_norm[norm].push_back(value);
    int j = 0;
    for (; j < d; ++j) {
      if (++x[static_cast<std::size_t>(j)] < k) break;
      x[static_cast<std::size_t>(j)] = 0;
    }
    if (j == d) break;
  }
  const std::vector<std::int64_t>* best = nullptr;
  for (const auto& [norm, vals] : by_norm)
    if (!best || vals.size() > best->size()) {
      best = &vals;
      P.radius = norm;
    }
  out.elements = *best;
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

/// No nontrivial x + z = 2y.
inline SphereSet behrend_3ap_free(std::int64_t L) { return digit_sphere_set(L, 2); }

/// No nontrivial x + y + z = 3w. Gamma = 6, the coefficient mass of the relation.
inline SphereSet behrend_sum_free(std::int64_t L) { return digit_sphere_set(L, 6); }

// ---------------------------------------------------------------------------

/// Membership over a bounded integer range.
class IntSetIndex {
 public:
  explicit IntSetIndex(const std::vector<std::int64_t>& values) {
    if (values.empty()) return;
    lo_ = *std::min_element(values.begin(), values.end());
    hi_ = *std::max_element(values.begin(), values.end());
    bits_.assign(static_cast<std::size_t>(hi_ - lo_ + 1), 0);
    for (auto v : values) bits_[static_cast<std::size_t>(v - lo_)] = 1;
  }
  bool contains(i128 v) const {
    if (bits_.empty() || v < lo_ || v > hi_) return false;
    return bits_[static_cast<std::size_t>(v - lo_)] != 0;
  }

 private:
  std::int64_t lo_ = 0, hi_ = -1;
  std::vector<char> bits_;
};

inline bool all_equal(const std::vector<std::int64_t>& y) {
  return std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end();
}

/// Searches for y in set^len with sum c_i y_i = 0 and not all y_i equal.
/// Solves for the last nonzero coefficient and enumerates the rest.
inline std::optional<std::vector<std::int64_t>> verify_relation_free(const std::vector<std::int64_t>& set,
                                                                     const std::vector<std::int64_t>& relation) {
  if (std::all_of(relation.begin(), relation.end(), [](auto c) { return c == 0; }))
    throw std::invalid_argument("verify_relation_free: relation must be nonzero");
  if (set.empty()) return std::nullopt;
  const std::size_t len = relation.size();
  std::size_t pivot = len;
  while (relation[--pivot] == 0) {
  }
  IntSetIndex index(set);
  std::vector<std::int64_t> y(len, set.front());
  std::vector<std::size_t> pos(len, 0);
  while (true) {
    i128 partial = 0;
    for (std::size_t i = 0; i < len; ++i)
      if (i != pivot) partial += i128(relation[i]) * y[i];
    const i128 cp = relation[pivot];
    if (partial % cp == 0) {
      i128 solved = -partial / cp;
      if (index.contains(solved)) {
        y[pivot] = static_cast<std::int64_t>(solved);
        if (!all_equal(y)) return y;
      }
    }
    std::size_t i = 0;
    for (; i < len; ++i) {
      if (i == pivot) continue;
      if (++pos[i] < set.size()) {
        y[i] = set[pos[i]];
        break;
      }
      pos[i] = 0;
      y[i] = set.front();
    }
    if (i == len) break;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

/// Integer relations gamma[i] annihilating every quadratic on the window
/// a_i..a_{i+3}.
struct QCSystem {
  std::vector<std::int64_t> a;
  std::int64_t M = 1;
  std::vector<std::array<std::int64_t, 4>> gamma;

  std::int64_t max_abs_gamma() const {
    std::int64_t best = 0;
    for (const auto& row : gamma)
      for (auto g : row) best = std::max<std::int64_t>(best, g < 0 ? -g : g);
    return best;
  }
};

/// gamma_{i,j} = M / prod_{s != j} (a_{i+j} - a_{i+s}), M the lcm of those
/// products' magnitudes.
inline QCSystem qc_coefficients(const std::vector<std::int64_t>& a) {
  if (a.size() < 4) throw std::invalid_argument("qc_coefficients: need at least 4 coordinates");
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] == a[j]) throw std::invalid_argument("qc_coefficients: coordinates must be distinct");
  const std::size_t rows = a.size() - 3;
  std::vector<std::array<BigInt, 4>> prods(rows);
  BigInt M = 1;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      BigInt p = 1;
      for (std::size_t s = 0; s < 4; ++s)
        if (s != j) p *= BigInt(a[i + j]) - a[i + s];
      prods[i][j] = p;
      M = lcm(M, abs(p));
    }
  static const BigInt limit = BigInt(1) << 62;
  if (M >= limit) throw std::overflow_error("qc_coefficients: coefficients exceed 64 bits");
  QCSystem sys;
  sys.a = a;
  sys.M = static_cast<std::int64_t>(M);
  for (std::size_t i = 0; i < rows; ++i) {
    std::array<std::int64_t, 4> row{};
    for (std::size_t j = 0; j < 4; ++j) row[j] = static_cast<std::int64_t>(M / prods[i][j]);
    sys.gamma.push_back(row);
  }
  return sys;
}

/// y is QC(a) iff nonconstant and every relation row vanishes.
inline bool is_qc(const QCSystem& sys, const std::vector<std::int64_t>& y) {
  if (y.size() != sys.a.size()) throw std::invalid_argument("is_qc: length mismatch");
  if (all_equal(y)) return false;
  for (std::size_t i = 0; i < sys.gamma.size(); ++i) {
    i128 s = 0;
    for (std::size_t j = 0; j < 4; ++j) s += i128(sys.gamma[i][j]) * y[i + j];
    if (s != 0) return false;
  }
  return true;
}

/// Searches for a QC(a) inside the set. The first three entries range over
/// the set; each further entry is forced by one relation row.
inline std::optional<std::vector<std::int64_t>> find_qc(const QCSystem& sys, const std::vector<std::int64_t>& set) {
  const std::size_t k = sys.a.size();
  IntSetIndex index(set);
  std::vector<std::int64_t> y(k);
  for (auto y0 : set)
    for (auto y1 : set)
      for (auto y2 : set) {
        if (y0 == y1 && y1 == y2) continue;  // forces a constant tuple
        y[0] = y0;
        y[1] = y1;
        y[2] = y2;
        bool ok = true;
        for (std::size_t i = 0; i + 3 < k && ok; ++i) {
          const auto& g = sys.gamma[i];
          i128 partial = i128(g[0]) * y[i] + i128(g[1]) * y[i + 1] + i128(g[2]) * y[i + 2];
          if (partial % g[3] != 0) {
            ok = false;
            break;
          }
          i128 next = -partial / g[3];
          if (!index.contains(next)) {
            ok = false;
            break;
          }
          y[i + 3] = static_cast<std::int64_t>(next);
        }
        if (ok) return y;
      }
  return std::nullopt;
}

struct QCFreeSet {
  QCSystem system;
  SphereSet sphere;
};

/// Digit-sphere set with Gamma = 4 max|gamma|, free of QC(a).
inline QCFreeSet behrend_qc_free(const std::vector<std::int64_t>& a, std::int64_t L) {
  if (a.size() < 5) throw std::invalid_argument("behrend_qc_free: need at least 5 coordinates");
  QCFreeSet out{qc_coefficients(a), {}};
  out.sphere = digit_sphere_set(L, 4 * out.system.max_abs_gamma());
  return out;
}

}  // namespace cornerforge
