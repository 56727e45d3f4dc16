#ifndef NONORD_MODRING_HPP
#define NONORD_MODRING_HPP

// Exact arithmetic in Z/mZ for moduli up to 2^62, with embedding of small
// rationals and rising factorials. Products go through 128-bit intermediates.

#include <charconv>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nonord/error.hpp"

namespace nonord {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kMaxModulus = u64{1} << 62;

constexpr u64 mulmod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 powmod(u64 base, u64 exp, u64 m) noexcept {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Reduces a signed value into [0, m).
constexpr u64 reduce_signed(i64 x, u64 m) noexcept {
  const i128 r = static_cast<i128>(x) % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(m) : r);
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
constexpr bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  for (u64 small : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Primes in [2, limit], ascending.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

/// p^e, throwing Overflow if the result would exceed the modulus cap.
inline u64 checked_pow(u64 p, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > kMaxModulus / p) throw Error(Errc::Overflow, "p^e exceeds 2^62");
    r *= p;
  }
  return r;
}

class Residue {
 public:
  Residue(i64 value, u64 modulus) : modulus_(check_modulus(modulus)), value_(reduce_signed(value, modulus)) {}

  static Residue from_unsigned(u64 value, u64 modulus) {
    Residue r(0, modulus);
    r.value_ = value % modulus;
    return r;
  }

  u64 value() const noexcept { return value_; }
  u64 modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  /// Representative in (-m/2, m/2].
  i64 centered() const noexcept {
    return value_ > modulus_ / 2 ? static_cast<i64>(value_) - static_cast<i64>(modulus_) : static_cast<i64>(value_);
  }

  friend Residue operator+(const Residue& a, const Residue& b) {
    same_ring(a, b);
    u64 s = a.value_ + b.value_;  // both < 2^62, no wrap
    return from_unsigned(s >= a.modulus_ ? s - a.modulus_ : s, a.modulus_);
  }
  friend Residue operator-(const Residue& a, const Residue& b) {
    same_ring(a, b);
    return from_unsigned(a.value_ >= b.value_ ? a.value_ - b.value_ : a.value_ + a.modulus_ - b.value_, a.modulus_);
  }
  friend Residue operator*(const Residue& a, const Residue& b) {
    same_ring(a, b);
    return from_unsigned(mulmod(a.value_, b.value_, a.modulus_), a.modulus_);
  }
  Residue operator-() const { return from_unsigned(value_ == 0 ? 0 : modulus_ - value_, modulus_); }

  Residue& operator+=(const Residue& o) { return *this = *this + o; }
  Residue& operator-=(const Residue& o) { return *this = *this - o; }
  Residue& operator*=(const Residue& o) { return *this = *this * o; }

  Residue pow(u64 exp) const { return from_unsigned(powmod(value_, exp, modulus_), modulus_); }

  /// Shift by a plain integer, e.g. x + k for rising factorials.
  Residue plus(i64 k) const { return *this + Residue(k, modulus_); }

  Residue reduce_to(u64 divisor_modulus) const {
    if (divisor_modulus < 2 || modulus_ % divisor_modulus != 0) {
      throw Error(Errc::InvalidArgument, "target modulus must divide the current modulus");
    }
    return from_unsigned(value_ % divisor_modulus, divisor_modulus);
  }

  friend bool operator==(const Residue&, const Residue&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Residue& r) {
    return os << r.value_ << " (mod " << r.modulus_ << ")";
  }

 private:
  static u64 check_modulus(u64 m) {
    if (m < 2 || m > kMaxModulus) throw Error(Errc::InvalidArgument, "modulus must lie in [2, 2^62]");
    return m;
  }
  static void same_ring(const Residue& a, const Residue& b) {
    if (a.modulus_ != b.modulus_) {
      throw Error(Errc::ModulusMismatch,
                  "mod " + std::to_string(a.modulus_) + " vs mod " + std::to_string(b.modulus_));
    }
  }

  u64 modulus_;
  u64 value_;
};

/// Inverse by extended gcd, so prime powers work the same way as primes.
inline Residue mod_inverse(i64 x, u64 m) {
  Residue xr(x, m);
  i128 old_r = static_cast<i128>(xr.value()), r = static_cast<i128>(m);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 q = old_r / r;
    i128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) {
    throw Error(Errc::NonInvertible, std::to_string(x) + " is not invertible mod " + std::to_string(m));
  }
  old_s %= static_cast<i128>(m);
  if (old_s < 0) old_s += static_cast<i128>(m);
  return Residue::from_unsigned(static_cast<u64>(old_s), m);
}

inline Residue inverse(const Residue& r) { return mod_inverse(static_cast<i64>(r.value()), r.modulus()); }

/// A reduced fraction with positive denominator.
class RationalParam {
 public:
  RationalParam(i64 numerator, i64 denominator) {
    if (denominator == 0) throw Error(Errc::InvalidArgument, "zero denominator");
    if (denominator < 0) {
      numerator = -numerator;
      denominator = -denominator;
    }
    const i64 g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
  }

  /// Parses "n/d" (or a bare integer). Whitespace and unreduced input are
  /// rejected so that command lines stay unambiguous.
  static RationalParam parse(std::string_view text) {
    const auto slash = text.find('/');
    auto parse_int = [&](std::string_view s) {
      i64 v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(Errc::InvalidArgument, "cannot parse rational '" + std::string(text) + "'");
      }
      return v;
    };
    if (slash == std::string_view::npos) return RationalParam(parse_int(text), 1);
    const i64 n = parse_int(text.substr(0, slash));
    const i64 d = parse_int(text.substr(slash + 1));
    if (d <= 0) throw Error(Errc::InvalidArgument, "denominator must be positive in '" + std::string(text) + "'");
    if (std::gcd(n, d) != 1) throw Error(Errc::InvalidArgument, "rational '" + std::string(text) + "' is not reduced");
    return RationalParam(n, d);
  }

  i64 numerator() const noexcept { return num_; }
  i64 denominator() const noexcept { return den_; }

  RationalParam one_minus() const { return RationalParam(den_ - num_, den_); }

  friend bool operator==(const RationalParam&, const RationalParam&) = default;
  friend bool operator<(const RationalParam& a, const RationalParam& b) {
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

inline Residue rational_residue(const RationalParam& r, u64 m) {
  return Residue(r.numerator(), m) * mod_inverse(r.denominator(), m);
}

/// x (x+1) ... (x+k-1); k = 0 gives 1.
inline Residue rising_factorial(const Residue& x, u64 k) {
  Residue acc(1, x.modulus());
  Residue term = x;
  const Residue one(1, x.modulus());
  for (u64 j = 0; j < k; ++j) {
    acc *= term;
    if (acc.is_zero()) break;
    term += one;
  }
  return acc;
}

}  // namespace nonord

#endif  // NONORD_MODRING_HPP
