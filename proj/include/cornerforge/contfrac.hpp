#pragma once

// Continued fractions and irrationals whose approximant denominators avoid
// small primes while growing geometrically.
//
// alpha is never evaluated in floating point. It is carried as its
// quotient stream; every decision about alpha goes through the enclosure
// |alpha - P_n/Q_n| < 1/(Q_n Q_{n+1}), deepening n until the answer is forced.

#include "cornerforge/number.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cornerforge {

struct Convergent {
  BigInt P;
  BigInt Q;
};

/// P_k = c_k P_{k-1} + P_{k-2}, Q_k = c_k Q_{k-1} + Q_{k-2}, seeded with
/// (P_{-2}, Q_{-2}) = (0, 1) and (P_{-1}, Q_{-1}) = (1, 0).
inline std::vector<Convergent> approximants(const std::vector<BigInt>& c) {
  std::vector<Convergent> out;
  BigInt p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == 0 ? c[k] < 0 : c[k] < 1)
      throw std::invalid_argument("approximants: invalid partial quotient at index " + std::to_string(k));
    BigInt p = c[k] * p1 + p2;
    BigInt q = c[k] * q1 + q2;
    out.push_back({p, q});
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return out;
}

/// Quotients c_0..c_{t+1} (c_0 = 0) whose approximants have Q_t = x and
/// Q_{t+1} = y. These are the quotients of y/x, reversed.
inline std::vector<BigInt> quotients_from_pair(const BigInt& x, const BigInt& y) {
  if (x < 1 || y <= x) throw std::invalid_argument("quotients_from_pair: need 0 < x < y");
  if (gcd(x, y) != 1) throw std::invalid_argument("quotients_from_pair: x and y must be coprime");
  std::vector<BigInt> euclid;
  BigInt num = y, den = x;
  while (den != 0) {
    euclid.push_back(num / den);
    BigInt r = num % den;
    num = den;
    den = r;
  }
  std::vector<BigInt> c{0};
  c.insert(c.end(), euclid.rbegin(), euclid.rend());
  return c;
}

/// Arithmetic in Q(b) where b = (s + sqrt(s^2 + 4)) / 2 is the positive root
/// of b^2 = s b + 1, the limit ratio of a constant-s quotient tail.
class QuadraticUnit {
 public:
  explicit QuadraticUnit(BigInt s) : s_(std::move(s)) {
    if (s_ < 1) throw std::invalid_argument("QuadraticUnit: tail quotient must be positive");
  }

  const BigInt& tail() const { return s_; }

  /// b^K = F_K b + F_{K-1} with F_{-1} = 1, F_0 = 0, F_n = s F_{n-1} + F_{n-2}.
  std::pair<BigInt, BigInt> power(std::size_t K) const {
    BigInt prev = 1, cur = 0;  // F_{-1}, F_0
    for (std::size_t i = 0; i < K; ++i) {
      BigInt next = s_ * cur + prev;
      prev = cur;
      cur = next;
    }
    return {cur, prev};
  }

  /// Sign of u + v b. Never zero unless u = v = 0 (b is irrational).
  int sign(const Rational& u, const Rational& v) const {
    if (v == 0) return u > 0 ? 1 : (u < 0 ? -1 : 0);
    if (u == 0) return v > 0 ? 1 : -1;
    if ((u > 0) == (v > 0)) return u > 0 ? 1 : -1;
    // opposite signs: compare b with t = -u/v > 0; b > t iff t^2 - s t - 1 < 0
    Rational t = -u / v;
    bool b_above = t * t - Rational(s_) * t - 1 < 0;
    return (v > 0) == b_above ? 1 : -1;
  }

  /// sign(r b^K - w).
  int compare_scaled_power(const Rational& r, std::size_t K, const Rational& w) const {
    auto [fk, fk1] = power(K);
    return sign(r * Rational(fk1) - w, r * Rational(fk));
  }

  /// floor(r b^K) for r > 0.
  BigInt floor_scaled_power(const Rational& r, std::size_t K) const {
    BigInt lo = 0, hi = 1;
    while (compare_scaled_power(r, K, Rational(hi)) >= 0) hi *= 2;
    while (hi - lo > 1) {
      BigInt mid = (lo + hi) / 2;
      if (compare_scaled_power(r, K, Rational(mid)) >= 0)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

 private:
  BigInt s_;
};

/// Irrational alpha = (c_0; c_1, ...) given by an explicit prefix followed by
/// a constant tail, together with the indexing data (m, r, K, t) under which
/// (p_i, q_i) = (P_{i+t-K}, Q_{i+t-K}).
class AlphaSequence {
 public:
  AlphaSequence(std::vector<BigInt> prefix, BigInt tail, unsigned m, Rational r, std::size_t K, std::size_t t)
      : prefix_(std::move(prefix)), unit_(std::move(tail)), m_(m), r_(std::move(r)), K_(K), t_(t) {
    if (m < 1) throw std::invalid_argument("AlphaSequence: m must be positive");
    if (r_ <= 0) throw std::invalid_argument("AlphaSequence: r must be positive");
    approximants(prefix_);  // validates the prefix
    a_ = lcm_upto(m);
  }

  AlphaSequence(const AlphaSequence& o)
      : prefix_(o.prefix_), unit_(o.unit_), m_(o.m_), r_(o.r_), K_(o.K_), t_(o.t_), a_(o.a_), x_(o.x_), y_(o.y_) {
    std::lock_guard lock(o.mutex_);
    cache_ = o.cache_;
  }

  unsigned m() const { return m_; }
  const BigInt& lcm_m() const { return a_; }
  const Rational& r() const { return r_; }
  std::size_t K() const { return K_; }
  std::size_t t() const { return t_; }
  const BigInt& x() const { return x_; }
  const BigInt& y() const { return y_; }
  const BigInt& tail() const { return unit_.tail(); }
  const QuadraticUnit& unit() const { return unit_; }
  const std::vector<BigInt>& prefix() const { return prefix_; }

  BigInt quotient(std::size_t k) const { return k < prefix_.size() ? prefix_[k] : unit_.tail(); }

  /// Approximant P_k/Q_k, generated on demand.
  Convergent convergent(std::size_t k) const {
    std::lock_guard lock(mutex_);
    while (cache_.size() <= k) {
      std::size_t j = cache_.size();
      BigInt c = quotient(j);
      BigInt p1 = j >= 1 ? cache_[j - 1].P : BigInt(1), q1 = j >= 1 ? cache_[j - 1].Q : BigInt(0);
      BigInt p2 = j >= 2 ? cache_[j - 2].P : BigInt(j == 1 ? 1 : 0), q2 = j >= 2 ? cache_[j - 2].Q : BigInt(j == 1 ? 0 : 1);
      cache_.push_back({c * p1 + p2, c * q1 + q2});
    }
    return cache_[k];
  }

  /// Whether (p_i, q_i) exists, i.e. i + t >= K.
  bool has_index(std::size_t i) const { return i + t_ >= K_; }

  std::size_t approximant_index(std::size_t i) const {
    if (!has_index(i)) throw std::out_of_range("AlphaSequence: index below the approximant stream");
    return i + t_ - K_;
  }

  /// (p_i, q_i).
  Convergent pq(std::size_t i) const { return convergent(approximant_index(i)); }

  /// floor(D * frac(n alpha)), exact. Uses the first approximant with
  /// Q_k > D|n|: then D n alpha lies strictly between floor(D n P_k / Q_k)
  /// and the next integer.
  BigInt fractional_cell(const BigInt& n, const BigInt& D) const {
    if (D < 1) throw std::invalid_argument("fractional_cell: D must be positive");
    if (n == 0) return 0;
    BigInt bound = D * abs(n);
    std::size_t k = 1;
    while (convergent(k).Q <= bound) ++k;
    Convergent c = convergent(k);
    BigInt v = D * n * c.P;
    return mod(floor_div(v, c.Q), D);
  }

  /// ||n alpha|| < num/den, exact (num/den <= 1/2 not required).
  bool norm_below(const BigInt& n, const BigInt& num, const BigInt& den) const {
    if (n == 0) return num > 0;
    if (num * 2 > den) return true;
    BigInt cell = fractional_cell(n, den);
    return cell < num || cell >= den - num;
  }

  /// Exact interval [lo, hi] containing |alpha - p/q|, narrowed until it lies
  /// entirely on one side of the threshold; returns sign of (|alpha-p/q| - threshold).
  int compare_distance(const Rational& pq_value, const Rational& threshold) const {
    for (std::size_t k = 1;; ++k) {
      Convergent c = convergent(k);
      Convergent d = convergent(k + 1);
      Rational center(c.P, c.Q);
      Rational radius(BigInt(1), c.Q * d.Q);
      Rational lo_diff = center - radius - pq_value;
      Rational hi_diff = center + radius - pq_value;
      // |alpha - p/q| ranges within [min, max] of |diff| over the open interval
      Rational dmax = std::max(abs(lo_diff), abs(hi_diff));
      Rational dmin = (lo_diff <= 0 && hi_diff >= 0) ? Rational(0) : std::min(abs(lo_diff), abs(hi_diff));
      // alpha is interior to the enclosure, so both bounds below are strict
      if (dmax <= threshold) return -1;
      if (dmin >= threshold) return 1;
      if (k > 10000) throw std::runtime_error("compare_distance: enclosure did not separate");
    }
  }

  void set_pair(BigInt x, BigInt y) {
    x_ = std::move(x);
    y_ = std::move(y);
  }

 private:
  std::vector<BigInt> prefix_;
  QuadraticUnit unit_;
  unsigned m_;
  Rational r_;
  std::size_t K_;
  std::size_t t_;
  BigInt a_;
  BigInt x_ = 0, y_ = 0;
  mutable std::mutex mutex_;
  mutable std::vector<Convergent> cache_;
};

/// Smallest prime strictly inside (r b^K, 2 r b^K).
inline BigInt prime_in_window(const QuadraticUnit& unit, const Rational& r, std::size_t K) {
  BigInt candidate = unit.floor_scaled_power(r, K) + 1;
  while (true) {
    if (unit.compare_scaled_power(2 * r, K, Rational(candidate)) <= 0)
      throw std::domain_error("build_alpha_hard: no prime in (r b^K, 2 r b^K) for K = " + std::to_string(K));
    if (is_prime(candidate)) return candidate;
    ++candidate;
  }
}

/// The quotient stream: Euclid on primes x in (r b^K, 2 r b^K) and
/// y in (r b^{K+1}, 2 r b^{K+1}), then constant a = lcm(1..m). K is the least
/// integer with r b^K > 2m.
inline AlphaSequence build_alpha_hard(unsigned m, const Rational& r) {
  if (m < 2) throw std::invalid_argument("build_alpha_hard: m must exceed 1");
  if (r <= 0) throw std::invalid_argument("build_alpha_hard: r must be positive");
  BigInt a = lcm_upto(m);
  QuadraticUnit unit(a);
  std::size_t K = 0;
  while (unit.compare_scaled_power(r, K, Rational(2 * m)) <= 0) ++K;
  BigInt x = prime_in_window(unit, r, K);
  BigInt y = prime_in_window(unit, r, K + 1);
  auto prefix = quotients_from_pair(x, y);
  std::size_t t = prefix.size() - 2;
  AlphaSequence seq(std::move(prefix), a, m, r, K, t);
  seq.set_pair(std::move(x), std::move(y));
  return seq;
}

enum class Check { pass, fail, not_guaranteed };

inline const char* to_string(Check c) {
  switch (c) {
    case Check::pass: return "pass";
    case Check::fail: return "fail";
    case Check::not_guaranteed: return "not_guaranteed";
  }
  return "?";
}

struct AlphaReport {
  std::size_t index = 0;
  BigInt p, q;
  Check coprime = Check::fail;        // gcd(p, q) = 1 and 0 < p < q
  Check smooth = Check::fail;         // gcd(q, lcm(1..m)) = 1
  Check approximation = Check::fail;  // |alpha - p/q| < 1/(m q^2)
  Check window = Check::fail;         // r b^i < q < 2 r b^i

  bool all_pass() const {
    return coprime == Check::pass && smooth == Check::pass && approximation == Check::pass && window == Check::pass;
  }
};

/// Checks the approximation properties of (p_i, q_i). For i < K the construction
/// makes no promise, so failures there are reported as not_guaranteed and
/// the window property is never asserted.
inline AlphaReport verify_alpha(const AlphaSequence& seq, std::size_t i) {
  AlphaReport rep;
  rep.index = i;
  Convergent c = seq.pq(i);
  rep.p = c.P;
  rep.q = c.Q;
  auto judge = [&](bool ok) { return ok ? Check::pass : (i < seq.K() ? Check::not_guaranteed : Check::fail); };
  rep.coprime = judge(gcd(c.P, c.Q) == 1 && c.P > 0 && c.P < c.Q);
  rep.smooth = judge(gcd(c.Q, seq.lcm_m()) == 1);
  Rational threshold(BigInt(1), BigInt(seq.m()) * c.Q * c.Q);
  rep.approximation = judge(seq.compare_distance(Rational(c.P, c.Q), threshold) < 0);
  if (i < seq.K()) {
    rep.window = Check::not_guaranteed;
  } else {
    const auto& unit = seq.unit();
    bool above = unit.compare_scaled_power(seq.r(), i, Rational(c.Q)) < 0;
    bool below = unit.compare_scaled_power(2 * seq.r(), i, Rational(c.Q)) > 0;
    rep.window = judge(above && below);
  }
  return rep;
}

}  // namespace cornerforge
