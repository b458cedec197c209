#pragma once

// Point patterns, finite point sets and popular-difference spectra.
//
// GridSet stores a subset of [N]^k (coordinates 1..N) as packed bit rows
// along axis 0. Counting x + d*T inside A ANDs shifted row windows and
// popcounts, one 64-bit word of anchors at a time.

#include "cornerforge/parallel.hpp"
#include "cornerforge/parse.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cornerforge {

using Point = std::vector<std::int64_t>;

class Pattern {
 public:
  Pattern(int dim, std::vector<Point> points) : dim_(dim), points_(std::move(points)) {
    if (dim_ < 1) throw std::invalid_argument("pattern dimension must be positive");
    if (points_.empty()) throw std::invalid_argument("pattern must be nonempty");
    for (const auto& p : points_)
      if (static_cast<int>(p.size()) != dim_) throw std::invalid_argument("pattern point has wrong dimension");
    std::set<Point> seen(points_.begin(), points_.end());
    if (seen.size() != points_.size()) throw std::invalid_argument("pattern points must be distinct");
  }

  /// {0, e_1, ..., e_k}.
  static Pattern corner(int k) {
    std::vector<Point> pts{Point(k, 0)};
    for (int i = 0; i < k; ++i) {
      Point e(k, 0);
      e[i] = 1;
      pts.push_back(e);
    }
    return Pattern(k, pts);
  }

  /// {0, 1, ..., len-1} in one dimension.
  static Pattern progression(int len) {
    std::vector<Point> pts;
    for (int i = 0; i < len; ++i) pts.push_back({i});
    return Pattern(1, pts);
  }

  /// "corner<k>", "ap<k>", or explicit points "x,y,z;x,y,z;...".
  static Pattern parse(const std::string& spec) {
    auto numeric_suffix = [&](std::size_t prefix) {
      std::size_t pos = 0;
      int v = std::stoi(spec.substr(prefix), &pos);
      if (prefix + pos != spec.size() || v < 1) throw std::invalid_argument("bad pattern '" + spec + "'");
      return v;
    };
    if (spec.rfind("corner", 0) == 0) return corner(numeric_suffix(6));
    if (spec.rfind("ap", 0) == 0) return progression(numeric_suffix(2));
    std::vector<Point> pts;
    std::size_t i = 0;
    while (i <= spec.size()) {
      std::size_t j = spec.find(';', i);
      if (j == std::string::npos) j = spec.size();
      pts.push_back(parse_int_list(std::string_view(spec).substr(i, j - i)));
      i = j + 1;
    }
    return Pattern(static_cast<int>(pts.front().size()), pts);
  }

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }

 private:
  int dim_;
  std::vector<Point> points_;
};

class GridSet {
 public:
  GridSet(int dim, std::int64_t side) : dim_(dim), side_(side) {
    if (dim < 1) throw std::invalid_argument("grid dimension must be positive");
    if (side < 1) throw std::invalid_argument("grid side must be positive");
    words_per_row_ = static_cast<std::size_t>((side + 63) / 64);
    rows_ = 1;
    for (int c = 1; c < dim; ++c) {
      if (rows_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(side))
        throw std::length_error("grid too large");
      rows_ *= static_cast<std::size_t>(side);
    }
    bits_.assign(rows_ * words_per_row_, 0);
  }

  int dim() const { return dim_; }
  std::int64_t side() const { return side_; }
  std::size_t rows() const { return rows_; }
  std::size_t words_per_row() const { return words_per_row_; }
  const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_per_row_; }

  bool in_bounds(const Point& p) const {
    if (static_cast<int>(p.size()) != dim_) return false;
    return std::all_of(p.begin(), p.end(), [&](std::int64_t v) { return v >= 1 && v <= side_; });
  }

  /// Row of a point from coordinates 1..k-1 (1-based values).
  std::size_t row_index(const Point& p) const {
    std::size_t r = 0;
    for (int c = dim_ - 1; c >= 1; --c) r = r * static_cast<std::size_t>(side_) + static_cast<std::size_t>(p[c] - 1);
    return r;
  }

  bool contains(const Point& p) const {
    if (!in_bounds(p)) return false;
    auto bit = static_cast<std::size_t>(p[0] - 1);
    return (row(row_index(p))[bit >> 6] >> (bit & 63)) & 1u;
  }

  void insert(const Point& p) {
    if (!in_bounds(p)) throw std::out_of_range("point outside grid");
    auto bit = static_cast<std::size_t>(p[0] - 1);
    bits_[row_index(p) * words_per_row_ + (bit >> 6)] |= std::uint64_t{1} << (bit & 63);
  }

  void erase(const Point& p) {
    if (!in_bounds(p)) return;
    auto bit = static_cast<std::size_t>(p[0] - 1);
    bits_[row_index(p) * words_per_row_ + (bit >> 6)] &= ~(std::uint64_t{1} << (bit & 63));
  }

  std::uint64_t size() const {
    std::uint64_t n = 0;
    for (auto w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
  }

  /// Visits members in row-major order (axis 0 fastest).
  template <class F>
  void for_each(F&& visit) const {
    Point p(dim_, 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::size_t rest = r;
      for (int c = 1; c < dim_; ++c) {
        p[c] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(side_)) + 1;
        rest /= static_cast<std::size_t>(side_);
      }
      const std::uint64_t* words = row(r);
      for (std::size_t w = 0; w < words_per_row_; ++w) {
        std::uint64_t bits = words[w];
        while (bits) {
          int b = std::countr_zero(bits);
          bits &= bits - 1;
          p[0] = static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(b)) + 1;
          visit(static_cast<const Point&>(p));
        }
      }
    }
  }

  /// 64 bits of row r starting at bit offset start; bits outside the row read as zero.
  std::uint64_t window(std::size_t r, std::int64_t start) const {
    const std::uint64_t* words = row(r);
    auto word_at = [&](std::int64_t wi) -> std::uint64_t {
      if (wi < 0 || wi >= static_cast<std::int64_t>(words_per_row_)) return 0;
      return words[wi];
    };
    std::int64_t wi = start >= 0 ? start / 64 : -((-start + 63) / 64);
    int off = static_cast<int>(start - wi * 64);
    if (off == 0) return word_at(wi);
    return (word_at(wi) >> off) | (word_at(wi + 1) << (64 - off));
  }

  friend bool operator==(const GridSet& a, const GridSet& b) {
    return a.dim_ == b.dim_ && a.side_ == b.side_ && a.bits_ == b.bits_;
  }

 private:
  int dim_;
  std::int64_t side_;
  std::size_t words_per_row_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Visits every anchor word of the pattern scan: for each setting of axes
/// 1..k-1 and each 64-anchor block along axis 0, calls
/// visit(x, base, bits) where bit b of bits set means x + d*T is inside A for
/// the anchor (base + b, x[1], ..., x[k-1]).
template <class Visit>
void scan_pattern(const GridSet& A, const Pattern& T, std::int64_t d, Visit&& visit) {
  if (A.dim() != T.dim()) throw std::invalid_argument("count_pattern: dimension mismatch");
  if (d == 0) throw std::invalid_argument("count_pattern: difference must be nonzero");
  const int k = A.dim();
  const std::int64_t N = A.side();
  const auto& pts = T.points();

  // Anchor range per axis keeping every x + d*t inside [1, N].
  Point lo(k), hi(k);
  for (int c = 0; c < k; ++c) {
    lo[c] = std::numeric_limits<std::int64_t>::min();
    hi[c] = std::numeric_limits<std::int64_t>::max();
    for (const auto& t : pts) {
      lo[c] = std::max(lo[c], 1 - d * t[c]);
      hi[c] = std::min(hi[c], N - d * t[c]);
    }
    if (lo[c] > hi[c]) return;
  }

  Point x = lo;
  Point probe(k);
  std::vector<std::size_t> rows(pts.size());
  std::vector<std::int64_t> shift(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) shift[i] = d * pts[i][0] - 1;
  while (true) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (int c = 1; c < k; ++c) probe[c] = x[c] + d * pts[i][c];
      rows[i] = A.row_index(probe);
    }
    for (std::int64_t base = lo[0]; base <= hi[0]; base += 64) {
      std::int64_t span = std::min<std::int64_t>(64, hi[0] - base + 1);
      std::uint64_t acc = span == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << span) - 1);
      for (std::size_t i = 0; i < pts.size() && acc; ++i) acc &= A.window(rows[i], base + shift[i]);
      if (acc) visit(static_cast<const Point&>(x), base, acc);
    }
    int c = 1;
    for (; c < k; ++c) {
      if (++x[c] <= hi[c]) break;
      x[c] = lo[c];
    }
    if (c >= k) break;
  }
}

/// Number of x in Z^k with x + d*t in A for every t in T.
inline std::uint64_t count_pattern(const GridSet& A, const Pattern& T, std::int64_t d) {
  std::uint64_t total = 0;
  scan_pattern(A, T, d, [&](const Point&, std::int64_t, std::uint64_t bits) {
    total += static_cast<std::uint64_t>(std::popcount(bits));
  });
  return total;
}

/// Calls visit(anchor) for every x with x + d*T inside A.
template <class Visit>
void for_each_occurrence(const GridSet& A, const Pattern& T, std::int64_t d, Visit&& visit) {
  Point anchor;
  scan_pattern(A, T, d, [&](const Point& x, std::int64_t base, std::uint64_t bits) {
    anchor = x;
    while (bits) {
      int b = std::countr_zero(bits);
      bits &= bits - 1;
      anchor[0] = base + b;
      visit(static_cast<const Point&>(anchor));
    }
  });
}

/// Counts per nonzero difference, in ascending order of the difference.
template <class D>
struct Spectrum {
  std::vector<std::pair<D, std::uint64_t>> entries;

  /// First entry attaining the maximal count; nullopt when empty.
  std::optional<std::pair<D, std::uint64_t>> max() const {
    if (entries.empty()) return std::nullopt;
    auto it = std::max_element(entries.begin(), entries.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    return *it;
  }

  std::optional<std::pair<D, std::uint64_t>> min() const {
    if (entries.empty()) return std::nullopt;
    auto it = std::min_element(entries.begin(), entries.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    return *it;
  }

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (const auto& e : entries) s += e.second;
    return s;
  }
};

/// count_pattern over every d with 0 < |d| < N.
inline Spectrum<std::int64_t> spectrum(const GridSet& A, const Pattern& T) {
  const std::int64_t N = A.side();
  std::vector<std::int64_t> ds;
  for (std::int64_t d = -(N - 1); d <= N - 1; ++d)
    if (d != 0) ds.push_back(d);
  Spectrum<std::int64_t> out;
  out.entries.resize(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) { out.entries[i] = {ds[i], count_pattern(A, T, ds[i])}; });
  return out;
}

// ---------------------------------------------------------------------------
// Finite abelian groups Z_N and F_p^n, elements indexed 0..|G|-1.

class FiniteGroup {
 public:
  enum class Kind { cyclic, elementary };

  static FiniteGroup cyclic(std::int64_t modulus) {
    if (modulus < 1) throw std::invalid_argument("cyclic modulus must be positive");
    return FiniteGroup(Kind::cyclic, modulus, 1);
  }

  static FiniteGroup elementary(std::int64_t p, int n) {
    if (p < 2 || n < 1) throw std::invalid_argument("F_p^n needs p >= 2 and n >= 1");
    for (std::int64_t q = 2; q * q <= p; ++q)
      if (p % q == 0) throw std::invalid_argument("F_p^n needs prime p");
    return FiniteGroup(Kind::elementary, p, n);
  }

  Kind kind() const { return kind_; }
  std::int64_t modulus() const { return base_; }
  int rank() const { return rank_; }
  std::size_t order() const { return order_; }

  std::size_t add(std::size_t a, std::size_t b) const {
    if (kind_ == Kind::cyclic) return (a + b) % order_;
    std::size_t out = 0, scale = 1;
    const auto p = static_cast<std::size_t>(base_);
    for (int i = 0; i < rank_; ++i) {
      out += ((a % p + b % p) % p) * scale;
      a /= p;
      b /= p;
      scale *= p;
    }
    return out;
  }

  std::size_t neg(std::size_t a) const {
    if (kind_ == Kind::cyclic) return (order_ - a) % order_;
    std::size_t out = 0, scale = 1;
    const auto p = static_cast<std::size_t>(base_);
    for (int i = 0; i < rank_; ++i) {
      out += ((p - a % p) % p) * scale;
      a /= p;
      scale *= p;
    }
    return out;
  }

  std::size_t sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }

  /// "7" for Z_N, "1,0,2" for F_p^n (coordinate 0 first).
  std::string format(std::size_t a) const {
    if (kind_ == Kind::cyclic) return std::to_string(a);
    std::string s;
    const auto p = static_cast<std::size_t>(base_);
    for (int i = 0; i < rank_; ++i) {
      if (i) s += ',';
      s += std::to_string(a % p);
      a /= p;
    }
    return s;
  }

  /// Accepts any integer representatives and reduces them.
  std::size_t parse(const std::string& text) const {
    auto coords = parse_int_list(text);
    if (static_cast<int>(coords.size()) != rank_)
      throw std::invalid_argument("group element '" + text + "' has wrong length");
    std::size_t out = 0, scale = 1;
    for (auto c : coords) {
      std::int64_t r = ((c % base_) + base_) % base_;
      out += static_cast<std::size_t>(r) * scale;
      scale *= static_cast<std::size_t>(base_);
    }
    return out;
  }

  std::string descriptor() const {
    if (kind_ == Kind::cyclic) return "zN " + std::to_string(base_);
    return "fp " + std::to_string(base_) + " " + std::to_string(rank_);
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.kind_ == b.kind_ && a.base_ == b.base_ && a.rank_ == b.rank_;
  }

 private:
  FiniteGroup(Kind kind, std::int64_t base, int rank) : kind_(kind), base_(base), rank_(rank) {
    order_ = 1;
    for (int i = 0; i < rank; ++i) {
      if (order_ > (std::size_t{1} << 24) / static_cast<std::size_t>(base))
        throw std::length_error("group too large");
      order_ *= static_cast<std::size_t>(base);
    }
  }

  Kind kind_;
  std::int64_t base_;
  int rank_;
  std::size_t order_ = 0;
};

/// Subset of G x G, stored as one bit row per first coordinate.
class GroupSet {
 public:
  explicit GroupSet(FiniteGroup group) : group_(std::move(group)) {
    words_ = (group_.order() + 63) / 64;
    bits_.assign(group_.order() * words_, 0);
  }

  const FiniteGroup& group() const { return group_; }
  std::size_t words_per_row() const { return words_; }
  const std::uint64_t* row(std::size_t x) const { return bits_.data() + x * words_; }

  bool contains(std::size_t x, std::size_t y) const { return (row(x)[y >> 6] >> (y & 63)) & 1u; }
  void insert(std::size_t x, std::size_t y) { bits_[x * words_ + (y >> 6)] |= std::uint64_t{1} << (y & 63); }

  std::uint64_t size() const {
    std::uint64_t n = 0;
    for (auto w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
  }

  template <class F>
  void for_each(F&& visit) const {
    for (std::size_t x = 0; x < group_.order(); ++x)
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = row(x)[w];
        while (bits) {
          int b = std::countr_zero(bits);
          bits &= bits - 1;
          visit(x, w * 64 + static_cast<std::size_t>(b));
        }
      }
  }

  friend bool operator==(const GroupSet& a, const GroupSet& b) {
    return a.group_ == b.group_ && a.bits_ == b.bits_;
  }

 private:
  FiniteGroup group_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// |S_d(A)|: anchors (x,y) with (x,y), (x+d,y), (x,y+d) all in A.
inline std::uint64_t corner_count_group(const GroupSet& A, std::size_t d) {
  const auto& G = A.group();
  if (d >= G.order()) throw std::out_of_range("corner_count_group: element out of range");
  if (d == 0) throw std::invalid_argument("corner_count_group: difference must be nonidentity");
  const std::size_t n = G.order();
  const std::size_t W = A.words_per_row();
  // shifted[y - d] = row_x[y]
  std::vector<std::uint64_t> shifted(W);
  std::uint64_t total = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const std::uint64_t* rx = A.row(x);
    const std::uint64_t* rxd = A.row(G.add(x, d));
    std::fill(shifted.begin(), shifted.end(), 0);
    for (std::size_t w = 0; w < W; ++w) {
      std::uint64_t bits = rx[w];
      while (bits) {
        int b = std::countr_zero(bits);
        bits &= bits - 1;
        std::size_t y = G.sub(w * 64 + static_cast<std::size_t>(b), d);
        shifted[y >> 6] |= std::uint64_t{1} << (y & 63);
      }
    }
    for (std::size_t w = 0; w < W; ++w)
      total += static_cast<std::uint64_t>(std::popcount(rx[w] & rxd[w] & shifted[w]));
  }
  return total;
}

/// corner_count_group over every nonidentity d, ascending by index.
inline Spectrum<std::size_t> spectrum(const GroupSet& A) {
  const std::size_t n = A.group().order();
  Spectrum<std::size_t> out;
  if (n <= 1) return out;
  out.entries.resize(n - 1);
  parallel_for(n - 1, [&](std::size_t i) { out.entries[i] = {i + 1, corner_count_group(A, i + 1)}; });
  return out;
}

// ---------------------------------------------------------------------------
// Text formats.
//
//   dim k side N          group zN <N>          group fp <p> <n>
//   x1 ... xk             a b                   a1,..,an b1,..,bn

inline void write_grid_set(std::ostream& out, const GridSet& A) {
  out << "dim " << A.dim() << " side " << A.side() << '\n';
  A.for_each([&](const Point& p) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? " " : "") << p[i];
    out << '\n';
  });
}

inline GridSet read_grid_set(std::istream& in) {
  LineReader reader(in);
  std::vector<Token> tok;
  if (!reader.next(tok)) throw ParseError(reader.line() + 1, 1, "missing header 'dim k side N'");
  if (tok.size() != 4 || tok[0].text != "dim" || tok[2].text != "side")
    tok[0].fail("expected header 'dim k side N'");
  auto k = tok[1].as_int();
  auto N = tok[3].as_int();
  if (k < 1 || k > 16) tok[1].fail("dimension out of range");
  if (N < 1) tok[3].fail("side must be positive");
  GridSet A(static_cast<int>(k), N);
  while (reader.next(tok)) {
    if (static_cast<std::int64_t>(tok.size()) != k)
      tok[0].fail("expected " + std::to_string(k) + " coordinates, got " + std::to_string(tok.size()));
    Point p(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < tok.size(); ++i) {
      p[i] = tok[i].as_int();
      if (p[i] < 1 || p[i] > N) tok[i].fail("coordinate outside [1, " + std::to_string(N) + "]");
    }
    A.insert(p);
  }
  return A;
}

inline void write_group_set(std::ostream& out, const GroupSet& A) {
  out << "group " << A.group().descriptor() << '\n';
  A.for_each([&](std::size_t x, std::size_t y) { out << A.group().format(x) << ' ' << A.group().format(y) << '\n'; });
}

inline GroupSet read_group_set(std::istream& in) {
  LineReader reader(in);
  std::vector<Token> tok;
  if (!reader.next(tok)) throw ParseError(reader.line() + 1, 1, "missing group header");
  if (tok.size() < 3 || tok[0].text != "group") tok[0].fail("expected 'group zN <N>' or 'group fp <p> <n>'");
  std::optional<FiniteGroup> G;
  try {
    if (tok[1].text == "zN" && tok.size() == 3) {
      G = FiniteGroup::cyclic(tok[2].as_int());
    } else if (tok[1].text == "fp" && tok.size() == 4) {
      G = FiniteGroup::elementary(tok[2].as_int(), static_cast<int>(tok[3].as_int()));
    } else {
      tok[1].fail("unknown group descriptor");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    tok[1].fail(e.what());
  }
  GroupSet A(*G);
  while (reader.next(tok)) {
    if (tok.size() != 2) tok[0].fail("expected two group elements");
    std::size_t xy[2];
    for (int i = 0; i < 2; ++i) {
      try {
        xy[i] = G->parse(tok[i].text);
      } catch (const std::exception& e) {
        tok[i].fail(e.what());
      }
    }
    A.insert(xy[0], xy[1]);
  }
  return A;
}

template <class D, class Label>
void write_spectrum_csv(std::ostream& out, const Spectrum<D>& s, Label&& label) {
  out << "d,count\n";
  for (const auto& [d, c] : s.entries) out << label(d) << ',' << c << '\n';
}

}  // namespace cornerforge
