#pragma once

// Sets avoiding popular patterns, built from an irrational alpha and a
// solution-free index set Lambda.
//
//   B = union over j in Lambda of I_j = [j/(T L), j/(T L) + 1/(T^2 L))  (mod 1)
//   F = { n in Z : n alpha in B (mod 1) }
//   corner case:     A = { x in [N]^3 : f(x) in F },  f = (x1-x2)(x1+x2-2x3), T = 3
//   five-point case: A = { x in [N]   : x^2 in F },  T = 4 max|gamma|
//
// With D = T^2 L, the cell floor(D frac(n alpha)) decides membership:
// n is in F iff the cell is a multiple of T whose quotient lies in Lambda.
// Cells are computed exactly from one approximant P/Q with Q > D |n|.

#include "cornerforge/behrend.hpp"
#include "cornerforge/contfrac.hpp"
#include "cornerforge/parallel.hpp"
#include "cornerforge/patterns.hpp"
#include "cornerforge/philox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cornerforge {

template <class Int>
Int f_quad(Int x, Int y, Int z) {
  return (x - y) * (x + y - 2 * z);
}

/// f(x+d,y,z) + f(x,y+d,z) + f(x,y,z+d) - 3 f(x,y,z); zero for all integers.
inline BigInt f_identity_defect(const BigInt& x, const BigInt& y, const BigInt& z, const BigInt& d) {
  const BigInt xd = x + d, yd = y + d, zd = z + d;
  return f_quad(xd, y, z) + f_quad(x, yd, z) + f_quad(x, y, zd) - 3 * f_quad(x, y, z);
}

/// 2 (a1-a2)(a2-a3)(a3-a1) n d.
inline BigInt three_term_lhs(const BigInt& a1, const BigInt& a2, const BigInt& a3, const BigInt& n, const BigInt& d) {
  return 2 * (a1 - a2) * (a2 - a3) * (a3 - a1) * n * d;
}

/// (a2^2-a3^2)(n+d a1)^2 + (a3^2-a1^2)(n+d a2)^2 + (a1^2-a2^2)(n+d a3)^2.
inline BigInt three_term_rhs(const BigInt& a1, const BigInt& a2, const BigInt& a3, const BigInt& n, const BigInt& d) {
  auto sq = [](const BigInt& v) { return v * v; };
  return (sq(a2) - sq(a3)) * sq(n + d * a1) + (sq(a3) - sq(a1)) * sq(n + d * a2) + (sq(a1) - sq(a2)) * sq(n + d * a3);
}

class IntervalSystem {
 public:
  IntervalSystem(std::int64_t L, std::int64_t theta1, std::vector<std::int64_t> lambda)
      : L_(L), theta1_(theta1), lambda_(std::move(lambda)) {
    if (L < 1) throw std::invalid_argument("IntervalSystem: L must be positive");
    if (theta1 < 1) throw std::invalid_argument("IntervalSystem: Theta_1 must be positive");
    std::sort(lambda_.begin(), lambda_.end());
    lambda_.erase(std::unique(lambda_.begin(), lambda_.end()), lambda_.end());
    member_.assign(static_cast<std::size_t>(L), false);
    for (auto j : lambda_) {
      if (j < 0 || j >= L) throw std::invalid_argument("IntervalSystem: Lambda must lie in [0, L)");
      member_[static_cast<std::size_t>(j)] = true;
    }
    if (theta1_ > std::numeric_limits<std::int64_t>::max() / theta1_ / L_)
      throw std::overflow_error("IntervalSystem: modulus too large");
  }

  std::int64_t L() const { return L_; }
  std::int64_t theta1() const { return theta1_; }
  const std::vector<std::int64_t>& lambda() const { return lambda_; }

  /// D = Theta_1^2 L; I_j is the cell [j Theta_1 / D, (j Theta_1 + 1) / D).
  std::int64_t modulus() const { return theta1_ * theta1_ * L_; }

  bool contains_cell(std::int64_t c) const {
    if (c < 0 || c % theta1_ != 0) return false;
    std::int64_t j = c / theta1_;
    return j < L_ && member_[static_cast<std::size_t>(j)];
  }

  /// I_j as [lo, hi).
  std::pair<Rational, Rational> interval(std::int64_t j) const {
    Rational lo(BigInt(j), BigInt(theta1_) * L_);
    return {lo, lo + Rational(BigInt(1), BigInt(modulus()))};
  }

  Rational measure() const { return Rational(BigInt(lambda_.size()), BigInt(modulus())); }

 private:
  std::int64_t L_;
  std::int64_t theta1_;
  std::vector<std::int64_t> lambda_;
  std::vector<bool> member_;
};

/// floor(D frac(n alpha)) for |n| <= nmax, from a single approximant.
class FractionalCells {
 public:
  FractionalCells(const AlphaSequence& seq, std::int64_t D, std::int64_t nmax) : D_(D), nmax_(nmax) {
    if (D < 1) throw std::invalid_argument("FractionalCells: D must be positive");
    if (nmax < 0) throw std::invalid_argument("FractionalCells: nmax must be nonnegative");
    BigInt bound = BigInt(D) * std::max<std::int64_t>(nmax, 1);
    std::size_t k = 1;
    while (seq.convergent(k).Q <= bound) ++k;
    auto c = seq.convergent(k);
    Pb_ = c.P;
    Qb_ = c.Q;
    // D |n| P < D nmax Q and D Q must stay well inside the machine types.
    fast_ = msb(bound * Qb_) < 120 && msb(BigInt(D) * Qb_) < 62;
    if (fast_) {
      P_ = static_cast<std::int64_t>(Pb_);
      Q_ = static_cast<std::int64_t>(Qb_);
      DQ_ = static_cast<std::uint64_t>(D) * static_cast<std::uint64_t>(Q_);
    }
  }

  std::int64_t modulus() const { return D_; }
  std::int64_t nmax() const { return nmax_; }
  const BigInt& P() const { return Pb_; }
  const BigInt& Q() const { return Qb_; }

  std::int64_t cell(std::int64_t n) const {
    if (n == 0) return 0;
    if (n > nmax_ || n < -nmax_) throw std::out_of_range("FractionalCells: argument beyond table range");
    if (fast_) return static_cast<std::int64_t>(residue(n) / static_cast<std::uint64_t>(Q_));
    return static_cast<std::int64_t>(mod(floor_div(BigInt(D_) * n * Pb_, Qb_), BigInt(D_)));
  }

  /// ||n alpha|| < num / D.
  bool norm_below(std::int64_t n, std::int64_t num) const {
    if (n == 0) return num > 0;
    if (2 * num > D_) return true;
    auto c = cell(n);
    return c < num || c >= D_ - num;
  }

  /// Cells of n0, n0 + step, n0 + 2 step, ... in O(1) each.
  class Stepper {
   public:
    std::int64_t cell() const { return static_cast<std::int64_t>(r_ / q_); }
    void advance() {
      r_ += inc_;
      if (r_ >= dq_) r_ -= dq_;
    }

   private:
    friend class FractionalCells;
    std::uint64_t r_ = 0, inc_ = 0, dq_ = 1, q_ = 1;
  };

  bool fast() const { return fast_; }

  /// Requires fast(); every visited value must stay within nmax.
  Stepper stepper(std::int64_t n0, std::int64_t step) const {
    if (!fast_) throw std::logic_error("FractionalCells: stepping needs the machine-word path");
    Stepper s;
    s.dq_ = DQ_;
    s.q_ = static_cast<std::uint64_t>(Q_);
    s.r_ = residue(n0);
    s.inc_ = residue(step);
    return s;
  }

 private:
  static unsigned msb(const BigInt& v) { return v == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(v)); }

  // (D n P) mod (D Q)
  std::uint64_t residue(std::int64_t n) const {
    i128 v = i128(D_) * n * P_;
    i128 r = v % i128(DQ_);
    if (r < 0) r += i128(DQ_);
    return static_cast<std::uint64_t>(r);
  }

  std::int64_t D_;
  std::int64_t nmax_;
  BigInt Pb_, Qb_;
  bool fast_ = false;
  std::int64_t P_ = 0, Q_ = 1;
  std::uint64_t DQ_ = 1;
};

/// Which q_{j,i} (r = 2^j) was taken as N.
struct AlphaChoice {
  unsigned j = 0;
  std::size_t i = 0;
  BigInt p, q;
};

/// Searches r = 2^j and indices i >= K for q_{j,i} within a factor of 4 of
/// target, closest in ratio; ties go to the smaller j, then smaller i.
inline std::pair<AlphaSequence, AlphaChoice> choose_alpha(unsigned m, std::int64_t target) {
  if (target < 2) throw std::invalid_argument("choose_alpha: target N must be at least 2");
  const BigInt hi = BigInt(4) * target;
  std::optional<AlphaSequence> best_seq;
  AlphaChoice best;
  double best_score = std::numeric_limits<double>::infinity();
  // q_{j,i} > 2^j, so larger j cannot land within the factor.
  for (unsigned j = 1; BigInt(1) << j < hi; ++j) {
    AlphaSequence seq = build_alpha_hard(m, Rational(BigInt(1) << j));
    for (std::size_t i = seq.K();; ++i) {
      Convergent c = seq.pq(i);
      if (c.Q > hi) break;
      if (c.Q * 4 < target) continue;
      double score = std::abs(std::log(c.Q.convert_to<double>() / static_cast<double>(target)));
      if (score < best_score) {
        best_score = score;
        best = AlphaChoice{j, i, c.P, c.Q};
        best_seq.emplace(seq);
      }
    }
  }
  if (!best_seq) throw std::domain_error("choose_alpha: no q_{j,i} within a factor of 4 of the target");
  return {*best_seq, best};
}

/// L = ceil(exp(c ln(1/delta)^2)), at least 2.
inline std::int64_t avoider_L(double delta, double c) {
  if (!(delta > 0 && delta < 0.5)) throw std::invalid_argument("avoider_L: need 0 < delta < 1/2");
  if (!(c > 0)) throw std::invalid_argument("avoider_L: c must be positive");
  double lg = std::log(1 / delta);
  double v = std::ceil(std::exp(c * lg * lg));
  if (!(v < 1e15)) throw std::overflow_error("avoider_L: L too large");
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(v));
}

struct AvoiderConfig {
  double delta = 0.1;
  double c = 0.05;
  std::optional<std::int64_t> L;                    // replaces the value from (delta, c)
  std::optional<std::vector<std::int64_t>> lambda;  // replaces the Behrend-type set
  std::int64_t target_N = 200;
  std::int64_t materialize_limit = 1024;  // per-axis side up to which A is stored
};

struct DensityEstimate {
  Rational exact;                 // set when computed exactly
  bool is_exact = false;
  double value = 0;
  double std_error = 0;           // zero for exact values
  std::uint64_t samples = 0;
};

struct AvoiderParams {
  std::string form;  // "corner3d" or "fivepoint"
  double delta = 0;
  double c = 0;
  std::int64_t L = 0;
  std::vector<std::int64_t> a;  // five-point coordinates
  AlphaChoice alpha;
  std::int64_t N = 0;
  std::int64_t theta1 = 0, theta2 = 0, theta3 = 0;
  std::vector<std::int64_t> lambda;
};

class CornerAvoider {
 public:
  CornerAvoider(AvoiderParams params, AlphaSequence seq, IntervalSystem system)
      : params_(std::move(params)),
        seq_(std::move(seq)),
        system_(std::move(system)),
        cells_(seq_, system_.modulus(), 2 * params_.N * params_.N) {}

  const AvoiderParams& params() const { return params_; }
  const AlphaSequence& alpha() const { return seq_; }
  const IntervalSystem& system() const { return system_; }
  const FractionalCells& cells() const { return cells_; }
  std::int64_t N() const { return params_.N; }

  bool in_F(std::int64_t n) const { return system_.contains_cell(cells_.cell(n)); }

  bool contains(std::int64_t x1, std::int64_t x2, std::int64_t x3) const {
    const std::int64_t N = params_.N;
    if (x1 < 1 || x1 > N || x2 < 1 || x2 > N || x3 < 1 || x3 > N) return false;
    return in_F(f_quad(x1, x2, x3));
  }

  /// Table of F on [-2N^2, 2N^2], then one lookup per point.
  GridSet materialize() const {
    const std::int64_t N = params_.N;
    const std::int64_t nmax = 2 * N * N;
    std::vector<char> table(static_cast<std::size_t>(2 * nmax + 1));
    parallel_for(table.size(), [&](std::size_t i) { table[i] = in_F(static_cast<std::int64_t>(i) - nmax); });
    GridSet A(3, N);
    Point p(3);
    for (p[2] = 1; p[2] <= N; ++p[2])
      for (p[1] = 1; p[1] <= N; ++p[1])
        for (p[0] = 1; p[0] <= N; ++p[0])
          if (table[static_cast<std::size_t>(f_quad(p[0], p[1], p[2]) + nmax)]) A.insert(p);
    return A;
  }

  /// |A| / N^3 exactly, by sweeping u = x1 - x2 and w = x2 - x3; then
  /// f = u (2w + u) and each (u, w) carries a known multiplicity.
  DensityEstimate exact_density() const {
    const std::int64_t N = params_.N;
    std::vector<std::uint64_t> per_u(static_cast<std::size_t>(2 * N - 1), 0);
    parallel_for(per_u.size(), [&](std::size_t idx) {
      const std::int64_t u = static_cast<std::int64_t>(idx) - (N - 1);
      const std::int64_t ylo = std::max<std::int64_t>(1, 1 - u), yhi = std::min<std::int64_t>(N, N - u);
      std::uint64_t count = 0;
      if (u == 0) {
        if (in_F(0)) count = static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N);
      } else if (cells_.fast()) {
        const std::int64_t w0 = ylo - N;
        auto st = cells_.stepper(u * (2 * w0 + u), 2 * u);
        for (std::int64_t w = w0; w <= yhi - 1; ++w, st.advance()) {
          if (!system_.contains_cell(st.cell())) continue;
          count += static_cast<std::uint64_t>(std::min(yhi, N + w) - std::max(ylo, 1 + w) + 1);
        }
      } else {
        for (std::int64_t w = ylo - N; w <= yhi - 1; ++w)
          if (in_F(u * (2 * w + u)))
            count += static_cast<std::uint64_t>(std::min(yhi, N + w) - std::max(ylo, 1 + w) + 1);
      }
      per_u[idx] = count;
    });
    std::uint64_t total = 0;
    for (auto c : per_u) total += c;
    DensityEstimate est;
    est.is_exact = true;
    est.exact = Rational(BigInt(total), BigInt(N) * N * N);
    est.value = est.exact.convert_to<double>();
    return est;
  }

  /// Uniform points of [N]^3 from Philox (role 0..2 per coordinate), each
  /// classified exactly.
  DensityEstimate sampled_density(std::uint64_t samples, std::uint64_t seed) const {
    if (samples == 0) throw std::invalid_argument("sampled_density: need at least one sample");
    const std::int64_t N = params_.N;
    auto coord = [&](std::uint64_t i, std::uint32_t role) {
      return static_cast<std::int64_t>((u128(philox_u64(seed, i, role)) * static_cast<std::uint64_t>(N)) >> 64) + 1;
    };
    std::vector<char> hit(samples);
    parallel_for(samples, [&](std::size_t i) { hit[i] = contains(coord(i, 0), coord(i, 1), coord(i, 2)); });
    std::uint64_t h = 0;
    for (char v : hit) h += v ? 1 : 0;
    DensityEstimate est;
    est.samples = samples;
    est.value = static_cast<double>(h) / static_cast<double>(samples);
    est.std_error = std::sqrt(est.value * (1 - est.value) / static_cast<double>(samples));
    return est;
  }

  /// ||n alpha|| < 1/D with D = 9L.
  bool transfer_bound(std::int64_t n) const { return cells_.norm_below(n, 1); }

 private:
  AvoiderParams params_;
  AlphaSequence seq_;
  IntervalSystem system_;
  FractionalCells cells_;
};

inline CornerAvoider build_corner_avoider(const AvoiderConfig& cfg) {
  AvoiderParams P;
  P.form = "corner3d";
  P.delta = cfg.delta;
  P.c = cfg.c;
  P.L = cfg.L ? *cfg.L : avoider_L(cfg.delta, cfg.c);
  if (P.L < 2) throw std::invalid_argument("build_corner_avoider: L must be at least 2");
  P.lambda = cfg.lambda ? *cfg.lambda : behrend_sum_free(P.L).elements;
  auto [seq, choice] = choose_alpha(static_cast<unsigned>(P.L), cfg.target_N);
  if (gcd(choice.q, seq.lcm_m()) != 1) throw std::logic_error("build_corner_avoider: q shares a factor with lcm(1..L)");
  if (choice.q > BigInt(1) << 30) throw std::overflow_error("build_corner_avoider: N too large");
  P.alpha = choice;
  P.N = static_cast<std::int64_t>(choice.q);
  P.theta1 = 3;
  IntervalSystem sys(P.L, 3, P.lambda);
  return CornerAvoider(std::move(P), std::move(seq), std::move(sys));
}

struct CornerCheck {
  bool premise = false;     // all four f-values in F
  bool transfer = false;    // ||2 alpha (a1 - a2) s|| < 1/(9L)
  bool downstream = false;  // ||2 s (a1 - a2) p / q|| <= 3/L
};

/// The corner anchor, anchor + s e_1, anchor + s e_2, anchor + s e_3.
inline CornerCheck check_corner_transfer(const CornerAvoider& av, const Point& anchor, std::int64_t s) {
  if (anchor.size() != 3) throw std::invalid_argument("check_corner_transfer: anchor must be 3-dimensional");
  if (s == 0) throw std::invalid_argument("check_corner_transfer: s must be nonzero");
  const std::int64_t x = anchor[0], y = anchor[1], z = anchor[2];
  CornerCheck out;
  out.premise = av.contains(x, y, z) && av.contains(x + s, y, z) && av.contains(x, y + s, z) && av.contains(x, y, z + s);
  const std::int64_t n = 2 * (x - y) * s;
  out.transfer = av.transfer_bound(n);
  const auto& p = av.params().alpha.p;
  const auto& q = av.params().alpha.q;
  BigInt r = mod(BigInt(n) * p, q);
  BigInt rest = q - r;
  BigInt dist = std::min(r, rest);
  out.downstream = dist * av.params().L <= 3 * q;
  return out;
}

struct AvoidanceRow {
  std::int64_t d = 0;
  std::uint64_t count = 0;
  bool transfer_ok = true;
  bool downstream_ok = true;
  std::optional<Point> witness;  // first corner failing a check
};

struct AvoidanceReport {
  std::vector<AvoidanceRow> rows;
  Rational bound;                  // 14 N^3 / L
  std::uint64_t max_count = 0;
  std::uint64_t corners = 0;

  bool transfer_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const AvoidanceRow& r) { return r.transfer_ok && r.downstream_ok; });
  }
  bool bound_ok() const { return Rational(max_count) <= bound; }
};

/// Every corner of A over every nonzero d, each run through the transfer checks.
inline AvoidanceReport verify_corner_avoidance(const CornerAvoider& av, const GridSet& A) {
  const std::int64_t N = av.N();
  if (A.dim() != 3 || A.side() != N) throw std::invalid_argument("verify_corner_avoidance: set does not match avoider");
  const Pattern T = Pattern::corner(3);
  AvoidanceReport rep;
  rep.bound = Rational(BigInt(14) * N * N * N, BigInt(av.params().L));
  rep.rows.resize(static_cast<std::size_t>(2 * (N - 1)));
  parallel_for(rep.rows.size(), [&](std::size_t idx) {
    auto k = static_cast<std::int64_t>(idx);
    std::int64_t d = k < N - 1 ? k - (N - 1) : k - (N - 2);
    AvoidanceRow row;
    row.d = d;
    for_each_occurrence(A, T, d, [&](const Point& x) {
      ++row.count;
      auto chk = check_corner_transfer(av, x, d);
      bool ok = chk.premise && chk.transfer && chk.downstream;
      if (!chk.transfer || !chk.premise) row.transfer_ok = false;
      if (!chk.downstream) row.downstream_ok = false;
      if (!ok && !row.witness) row.witness = x;
    });
    rep.rows[idx] = row;
  });
  for (const auto& r : rep.rows) {
    rep.max_count = std::max(rep.max_count, r.count);
    rep.corners += r.count;
  }
  return rep;
}

struct ThetaConstants {
  std::int64_t theta1 = 0, theta2 = 0, theta3 = 0;
};

/// Theta_1 = 4 max|gamma|, Theta_2 = |2(a1-a2)(a2-a3)(a3-a1)|,
/// Theta_3 = ceil(3 max_{i<=3} a_i^2 / Theta_1^2).
inline ThetaConstants theta_constants(const std::vector<std::int64_t>& a, const QCSystem& sys) {
  if (a.size() < 3) throw std::invalid_argument("theta_constants: need at least 3 coordinates");
  ThetaConstants t;
  t.theta1 = 4 * sys.max_abs_gamma();
  if (t.theta1 == 0) throw std::invalid_argument("theta_constants: empty relation system");
  i128 th2 = i128(2) * (a[0] - a[1]) * (a[1] - a[2]) * (a[2] - a[0]);
  t.theta2 = static_cast<std::int64_t>(th2 < 0 ? -th2 : th2);
  i128 sq = 0;
  for (int i = 0; i < 3; ++i) sq = std::max(sq, i128(a[static_cast<std::size_t>(i)]) * a[static_cast<std::size_t>(i)]);
  i128 den = i128(t.theta1) * t.theta1;
  t.theta3 = static_cast<std::int64_t>((3 * sq + den - 1) / den);
  return t;
}

class FivePointAvoider {
 public:
  FivePointAvoider(AvoiderParams params, AlphaSequence seq, IntervalSystem system)
      : params_(std::move(params)),
        seq_(std::move(seq)),
        system_(std::move(system)),
        cells_(seq_, system_.modulus(), params_.N * params_.N),
        transfer_(seq_, params_.L, transfer_range()) {}

  const AvoiderParams& params() const { return params_; }
  const AlphaSequence& alpha() const { return seq_; }
  const IntervalSystem& system() const { return system_; }
  const FractionalCells& cells() const { return cells_; }
  std::int64_t N() const { return params_.N; }

  bool contains(std::int64_t x) const {
    if (x < 1 || x > params_.N) return false;
    return system_.contains_cell(cells_.cell(x * x));
  }

  GridSet materialize() const {
    const std::int64_t N = params_.N;
    std::vector<char> hit(static_cast<std::size_t>(N));
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] = contains(static_cast<std::int64_t>(i) + 1); });
    GridSet A(1, N);
    for (std::int64_t x = 1; x <= N; ++x)
      if (hit[static_cast<std::size_t>(x - 1)]) A.insert({x});
    return A;
  }

  Pattern pattern() const {
    std::vector<Point> pts;
    for (auto v : params_.a) pts.push_back({v});
    return Pattern(1, pts);
  }

  /// ||Theta_2 alpha n d|| < Theta_3 / L.
  bool transfer_bound(std::int64_t n, std::int64_t d) const {
    return transfer_.norm_below(params_.theta2 * n * d, params_.theta3);
  }

 private:
  std::int64_t transfer_range() const {
    std::int64_t amax = 0;
    for (auto v : params_.a) amax = std::max<std::int64_t>(amax, v < 0 ? -v : v);
    return params_.theta2 * (params_.N * (1 + amax)) * params_.N;
  }

  AvoiderParams params_;
  AlphaSequence seq_;
  IntervalSystem system_;
  FractionalCells cells_;
  FractionalCells transfer_;
};

inline FivePointAvoider build_five_point_avoider(const std::vector<std::int64_t>& a, const AvoiderConfig& cfg) {
  if (a.size() != 5) throw std::invalid_argument("build_five_point_avoider: need exactly 5 coordinates");
  AvoiderParams P;
  P.form = "fivepoint";
  P.a = a;
  P.delta = cfg.delta;
  P.c = cfg.c;
  P.L = cfg.L ? *cfg.L : avoider_L(cfg.delta, cfg.c);
  if (P.L < 2) throw std::invalid_argument("build_five_point_avoider: L must be at least 2");
  auto qc = behrend_qc_free(a, P.L);
  auto th = theta_constants(a, qc.system);
  P.theta1 = th.theta1;
  P.theta2 = th.theta2;
  P.theta3 = th.theta3;
  P.lambda = cfg.lambda ? *cfg.lambda : qc.sphere.elements;
  auto [seq, choice] = choose_alpha(static_cast<unsigned>(P.L), cfg.target_N);
  if (gcd(choice.q, seq.lcm_m()) != 1) throw std::logic_error("build_five_point_avoider: q shares a factor with lcm(1..L)");
  if (choice.q > BigInt(1) << 28) throw std::overflow_error("build_five_point_avoider: N too large");
  P.alpha = choice;
  P.N = static_cast<std::int64_t>(choice.q);
  IntervalSystem sys(P.L, P.theta1, P.lambda);
  return FivePointAvoider(std::move(P), std::move(seq), std::move(sys));
}

struct FivePointReport {
  std::vector<AvoidanceRow> rows;
  std::uint64_t max_count = 0;
  std::uint64_t tuples = 0;
  bool transfer_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const AvoidanceRow& r) { return r.transfer_ok; });
  }
};

inline FivePointReport verify_five_point_avoidance(const FivePointAvoider& av, const GridSet& A) {
  const std::int64_t N = av.N();
  if (A.dim() != 1 || A.side() != N) throw std::invalid_argument("verify_five_point_avoidance: set does not match avoider");
  const Pattern T = av.pattern();
  FivePointReport rep;
  rep.rows.resize(static_cast<std::size_t>(2 * (N - 1)));
  parallel_for(rep.rows.size(), [&](std::size_t idx) {
    auto k = static_cast<std::int64_t>(idx);
    std::int64_t d = k < N - 1 ? k - (N - 1) : k - (N - 2);
    AvoidanceRow row;
    row.d = d;
    for_each_occurrence(A, T, d, [&](const Point& x) {
      ++row.count;
      if (!av.transfer_bound(x[0], d)) {
        row.transfer_ok = false;
        if (!row.witness) row.witness = x;
      }
    });
    rep.rows[idx] = row;
  });
  for (const auto& r : rep.rows) {
    rep.max_count = std::max(rep.max_count, r.count);
    rep.tuples += r.count;
  }
  return rep;
}

// --- lifting ---------------------------------------------------------------

/// Rank of integer vectors, by exact elimination.
inline std::size_t vector_rank(const std::vector<Point>& vs) {
  if (vs.empty()) return 0;
  std::vector<std::vector<Rational>> m;
  for (const auto& v : vs) m.emplace_back(v.begin(), v.end());
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline std::size_t affine_dimension(const Pattern& T) {
  std::vector<Point> diffs;
  const auto& pts = T.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Point v(pts[i].size());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = pts[i][c] - pts[0][c];
    diffs.push_back(v);
  }
  return vector_rank(diffs);
}

struct LiftResult {
  GridSet set;
  std::string route;             // "phi" or "Phi"
  std::int64_t C = 0;            // phi route
  std::vector<Point> columns;    // Phi route: images of e_1..e_k
  Point offset;                  // Phi route: translation into positive coordinates
  std::vector<Point> used;       // points of T driving the lift
};

/// phi(x) = sum_i C^i x_i.
inline std::int64_t phi_map(const Point& x, std::int64_t C) {
  i128 s = 0, pw = 1;
  for (auto v : x) {
    pw *= C;
    s += pw * v;
  }
  if (s > std::numeric_limits<std::int64_t>::max() || s < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("phi_map: value out of range");
  return static_cast<std::int64_t>(s);
}

/// Lifts a base avoider to pattern T. A one-dimensional base uses the
/// pullback under phi (T needs 5 points); a three-dimensional base uses the
/// image of base x [N]^{k-3} under a lattice map sending e_1, e_2, e_3 to
/// v2-v1, v3-v1, v4-v1 (T needs affine dimension 3).
inline LiftResult lift_avoider(const Pattern& T, const GridSet& base, std::uint64_t max_bits = std::uint64_t{1} << 31) {
  const int k = T.dim();
  if (base.dim() == 1) {
    if (T.size() < 5) throw std::invalid_argument("lift_avoider: the phi route needs at least 5 points");
    std::int64_t C = 1;
    for (const auto& t : T.points())
      for (auto v : t) C += v < 0 ? -v : v;
    i128 weight = 0, pw = 1;
    for (int i = 0; i < k; ++i) {
      pw *= C;
      weight += pw;
      if (weight > base.side()) throw std::invalid_argument("lift_avoider: base too small for this pattern");
    }
    const auto N = static_cast<std::int64_t>(base.side() / static_cast<std::int64_t>(weight));
    BigInt bits = boost::multiprecision::pow(BigInt(N), static_cast<unsigned>(k));
    if (bits > max_bits) throw std::length_error("lift_avoider: lifted grid too large");
    LiftResult out{GridSet(k, N), "phi", C, {}, {}, {}};
    out.used.assign(T.points().begin(), T.points().begin() + 5);
    Point x(static_cast<std::size_t>(k), 1);
    while (true) {
      if (base.contains({phi_map(x, C)})) out.set.insert(x);
      int c = 0;
      for (; c < k; ++c) {
        if (++x[static_cast<std::size_t>(c)] <= N) break;
        x[static_cast<std::size_t>(c)] = 1;
      }
      if (c == k) break;
    }
    return out;
  }
  if (base.dim() != 3) throw std::invalid_argument("lift_avoider: base must be 1- or 3-dimensional");
  if (k < 3) throw std::invalid_argument("lift_avoider: pattern dimension below 3");

  // First affinely independent v1..v4, in order.
  const auto& pts = T.points();
  std::vector<Point> chosen{pts[0]}, diffs;
  for (std::size_t i = 1; i < pts.size() && chosen.size() < 4; ++i) {
    Point v(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) v[static_cast<std::size_t>(c)] = pts[i][static_cast<std::size_t>(c)] - pts[0][static_cast<std::size_t>(c)];
    auto trial = diffs;
    trial.push_back(v);
    if (vector_rank(trial) == trial.size()) {
      diffs = trial;
      chosen.push_back(pts[i]);
    }
  }
  if (chosen.size() < 4) throw std::invalid_argument("lift_avoider: pattern has affine dimension below 3");
  std::vector<Point> cols = diffs;
  for (int e = 0; e < k && static_cast<int>(cols.size()) < k; ++e) {
    Point u(static_cast<std::size_t>(k), 0);
    u[static_cast<std::size_t>(e)] = 1;
    auto trial = cols;
    trial.push_back(u);
    if (vector_rank(trial) == trial.size()) cols = trial;
  }

  const std::int64_t N = base.side();
  Point offset(static_cast<std::size_t>(k)), top(static_cast<std::size_t>(k));
  std::int64_t side = 1;
  for (int c = 0; c < k; ++c) {
    i128 lo = 0, hi = 0;
    for (const auto& col : cols) {
      i128 a = col[static_cast<std::size_t>(c)], b = i128(col[static_cast<std::size_t>(c)]) * N;
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    offset[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(1 - lo);
    side = std::max<std::int64_t>(side, static_cast<std::int64_t>(hi + 1 - lo));
  }
  BigInt bits = boost::multiprecision::pow(BigInt(side), static_cast<unsigned>(k));
  if (bits > max_bits) throw std::length_error("lift_avoider: lifted grid too large");
  LiftResult out{GridSet(k, side), "Phi", 0, cols, offset, chosen};

  Point y(static_cast<std::size_t>(k)), img(static_cast<std::size_t>(k));
  base.for_each([&](const Point& b) {
    for (int c = 0; c < 3; ++c) y[static_cast<std::size_t>(c)] = b[static_cast<std::size_t>(c)];
    for (int c = 3; c < k; ++c) y[static_cast<std::size_t>(c)] = 1;
    while (true) {
      for (int r = 0; r < k; ++r) {
        std::int64_t s = offset[static_cast<std::size_t>(r)];
        for (int j = 0; j < k; ++j) s += y[static_cast<std::size_t>(j)] * cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
        img[static_cast<std::size_t>(r)] = s;
      }
      out.set.insert(img);
      int c = 3;
      for (; c < k; ++c) {
        if (++y[static_cast<std::size_t>(c)] <= N) break;
        y[static_cast<std::size_t>(c)] = 1;
      }
      if (c >= k) break;
    }
  });
  return out;
}

}  // namespace cornerforge
