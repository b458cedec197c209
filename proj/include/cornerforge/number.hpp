#pragma once

// Exact integer and rational arithmetic shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cornerforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using i128 = __int128;
using u128 = unsigned __int128;

inline BigInt numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational make_rational(const BigInt& p, const BigInt& q) {
  if (q == 0) throw std::domain_error("zero denominator");
  return Rational(p, q);
}

/// Parses "p/q" or "p" into an exact rational.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return make_rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
}

inline std::string to_string(const Rational& q) {
  if (denom(q) == 1) return numer(q).str();
  return numer(q).str() + "/" + denom(q).str();
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt floor(const Rational& q) { return floor_div(numer(q), denom(q)); }
inline BigInt ceil(const Rational& q) { return -floor_div(-numer(q), denom(q)); }

/// Non-negative residue of a modulo m (m > 0).
inline BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

/// lcm(1, 2, ..., m).
inline BigInt lcm_upto(unsigned m) {
  BigInt acc = 1;
  for (unsigned i = 2; i <= m; ++i) acc = lcm(acc, BigInt(i));
  return acc;
}

inline std::int64_t lcm_i64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

inline BigInt powm(BigInt base, BigInt exp, const BigInt& m) {
  return boost::multiprecision::powm(base, exp, m);
}

/// Deterministic Miller-Rabin. The fixed witness set (primes up to 41) is
/// exact for n < 3.3e24; larger inputs throw.
inline bool is_prime(const BigInt& n) {
  static const unsigned small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  if (n < 2) return false;
  for (unsigned p : small) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  static const BigInt limit("3317044064679887385961981");
  if (n >= limit) throw std::domain_error("is_prime: " + n.str() + " beyond deterministic range");
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned a : small) {
    BigInt x = powm(BigInt(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = (x * x) % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  u128 u = neg ? u128(-(v + 1)) + 1 : u128(v);
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

inline BigInt to_big(i128 v) { return BigInt(to_string(v)); }

}  // namespace cornerforge
