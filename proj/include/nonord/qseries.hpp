#ifndef NONORD_QSERIES_HPP
#define NONORD_QSERIES_HPP

// Integer q-expansions of eta quotients q^h * prod_f prod_m (1 - q^{d_f m})^{r_f}.
//
// Each factor prod_m (1 - q^{dm})^r is split into (r div 3) Jacobi cubes and
// (r mod 3) Euler products, both of which are sparse with O(sqrt N) terms, and
// multiplied into a dense accumulator. Total work is O(N^{3/2}) per factor.

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nonord/error.hpp"
#include "nonord/modring.hpp"
#include "nonord/report.hpp"

namespace nonord {

inline constexpr u64 kDefaultLimitBudget = 200'000'000;

struct EtaFactor {
  std::uint32_t scale;     // d in eta(d tau)
  std::uint32_t exponent;  // r

  friend bool operator==(const EtaFactor&, const EtaFactor&) = default;
};

class EtaQuotient {
 public:
  explicit EtaQuotient(std::vector<EtaFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(Errc::InvalidDescriptor, "no factors");
    u64 weighted = 0;
    for (const auto& f : factors_) {
      if (f.scale == 0) throw Error(Errc::InvalidDescriptor, "scale must be positive");
      if (f.exponent == 0) throw Error(Errc::InvalidDescriptor, "exponent must be positive");
      weighted += u64{f.scale} * f.exponent;
    }
    if (weighted % 24 != 0) {
      throw Error(Errc::InvalidDescriptor, "sum of d*r = " + std::to_string(weighted) + " is not divisible by 24");
    }
    shift_ = weighted / 24;
  }

  /// eta(2tau)^4 eta(4tau)^4, the weight 4 newform of level 8.
  static EtaQuotient level8() { return EtaQuotient({{2, 4}, {4, 4}}); }
  /// eta(3tau)^8, the CM newform of level 9.
  static EtaQuotient cm9() { return EtaQuotient({{3, 8}}); }

  /// Accepts "8-4", "9-4-cm", or an explicit list "(d,r);(d,r);...".
  static EtaQuotient parse(std::string_view text) {
    if (text == "8-4") return level8();
    if (text == "9-4-cm") return cm9();
    std::vector<EtaFactor> factors;
    std::size_t pos = 0;
    auto fail = [&] { throw Error(Errc::InvalidDescriptor, "cannot parse descriptor '" + std::string(text) + "'"); };
    auto read_uint = [&](std::uint32_t& out) {
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), out);
      if (ec != std::errc{}) fail();
      pos = static_cast<std::size_t>(ptr - text.data());
    };
    auto expect = [&](char c) {
      if (pos >= text.size() || text[pos] != c) fail();
      ++pos;
    };
    while (pos < text.size()) {
      EtaFactor f{};
      expect('(');
      read_uint(f.scale);
      expect(',');
      read_uint(f.exponent);
      expect(')');
      factors.push_back(f);
      if (pos < text.size()) expect(';');
    }
    return EtaQuotient(std::move(factors));
  }

  const std::vector<EtaFactor>& factors() const noexcept { return factors_; }

  /// Order of vanishing at infinity: (sum d*r) / 24.
  u64 shift() const noexcept { return shift_; }

  u64 twice_weight() const noexcept {
    u64 s = 0;
    for (const auto& f : factors_) s += f.exponent;
    return s;
  }
  double weight() const noexcept { return static_cast<double>(twice_weight()) / 2.0; }

  /// Smallest N divisible by every d with N * sum(r/d) = 0 (mod 24).
  u64 level() const noexcept {
    u64 l = 1;
    for (const auto& f : factors_) l = std::lcm(l, u64{f.scale});
    for (u64 n = l;; n += l) {
      u64 s = 0;
      for (const auto& f : factors_) s += (n / f.scale) * f.exponent;
      if (s % 24 == 0) return n;
    }
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += ';';
      out += "(" + std::to_string(factors_[i].scale) + "," + std::to_string(factors_[i].exponent) + ")";
    }
    return out;
  }

  friend bool operator==(const EtaQuotient&, const EtaQuotient&) = default;

 private:
  std::vector<EtaFactor> factors_;
  u64 shift_ = 0;
};

struct SeriesTerm {
  u64 exponent;
  i64 coefficient;
  friend bool operator==(const SeriesTerm&, const SeriesTerm&) = default;
};

/// Sparse truncated power series: strictly increasing exponents, no zeros.
struct SparseSeries {
  std::vector<SeriesTerm> terms;

  i64 coefficient(u64 n) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), n,
                               [](const SeriesTerm& t, u64 e) { return t.exponent < e; });
    return (it != terms.end() && it->exponent == n) ? it->coefficient : 0;
  }

  std::vector<i64> to_dense(u64 limit) const {
    std::vector<i64> out(limit, 0);
    for (const auto& t : terms) {
      if (t.exponent < limit) out[t.exponent] = t.coefficient;
    }
    return out;
  }

  /// q -> q^d, keeping exponents below limit.
  SparseSeries rescaled(u64 d, u64 limit) const {
    SparseSeries out;
    for (const auto& t : terms) {
      if (t.exponent > (limit - 1) / d) break;
      out.terms.push_back({t.exponent * d, t.coefficient});
    }
    return out;
  }
};

namespace detail {
inline void check_limit(u64 limit, u64 budget) {
  if (limit == 0) throw Error(Errc::InvalidArgument, "limit must be at least 1");
  if (limit > budget) throw Error(Errc::LimitTooLarge, std::to_string(limit) + " exceeds budget " + std::to_string(budget));
}

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(Errc::Overflow, "coefficient exceeds 64-bit range");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::Overflow, "coefficient exceeds 64-bit range");
  return r;
}

/// dense *= sparse, in place, truncated to dense.size(). The sparse series
/// must have constant term 1.
inline void multiply_in_place(std::vector<i64>& dense, const SparseSeries& s) {
  for (std::size_t n = dense.size(); n-- > 0;) {
    i64 acc = dense[n];
    for (std::size_t t = 1; t < s.terms.size(); ++t) {
      const u64 e = s.terms[t].exponent;
      if (e > n) break;
      const i64 src = dense[n - e];
      if (src != 0) acc = checked_add(acc, checked_mul(s.terms[t].coefficient, src));
    }
    dense[n] = acc;
  }
}
}  // namespace detail

/// prod_{m>=1} (1 - q^m) below q^limit, via generalized pentagonal numbers.
inline SparseSeries euler_series(u64 limit, u64 budget = kDefaultLimitBudget) {
  detail::check_limit(limit, budget);
  SparseSeries s;
  s.terms.push_back({0, 1});
  for (u64 k = 1;; ++k) {
    const u64 lo = k * (3 * k - 1) / 2;
    const u64 hi = k * (3 * k + 1) / 2;
    if (lo >= limit) break;
    const i64 sign = (k % 2 == 0) ? 1 : -1;
    s.terms.push_back({lo, sign});
    if (hi < limit) s.terms.push_back({hi, sign});
  }
  return s;
}

/// prod_{m>=1} (1 - q^m)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}, below q^limit.
inline SparseSeries eta_cube_series(u64 limit, u64 budget = kDefaultLimitBudget) {
  detail::check_limit(limit, budget);
  SparseSeries s;
  for (u64 k = 0;; ++k) {
    const u64 e = k * (k + 1) / 2;
    if (e >= limit) break;
    s.terms.push_back({e, (k % 2 == 0 ? 1 : -1) * static_cast<i64>(2 * k + 1)});
  }
  return s;
}

/// Dense table b(1..N) of an eta quotient's Fourier coefficients.
class CoeffTable {
 public:
  CoeffTable(EtaQuotient descriptor, std::vector<i64> values)
      : descriptor_(std::move(descriptor)), values_(std::move(values)) {}

  const EtaQuotient& descriptor() const noexcept { return descriptor_; }
  u64 limit() const noexcept { return values_.size(); }
  const std::vector<i64>& values() const noexcept { return values_; }

  i64 b(u64 n) const {
    if (n == 0) throw Error(Errc::InvalidArgument, "coefficients are indexed from 1");
    if (n > values_.size()) {
      throw Error(Errc::TableTooShort, "b(" + std::to_string(n) + ") requested from a table of length " +
                                           std::to_string(values_.size()));
    }
    return values_[n - 1];
  }

  void require(u64 n) const {
    if (n > values_.size()) {
      throw Error(Errc::TableTooShort, "need N >= " + std::to_string(n) + ", have " + std::to_string(values_.size()));
    }
  }

  CoeffTable truncated(u64 n) const {
    require(n);
    return CoeffTable(descriptor_, std::vector<i64>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  friend bool operator==(const CoeffTable&, const CoeffTable&) = default;

 private:
  EtaQuotient descriptor_;
  std::vector<i64> values_;
};

inline CoeffTable expand_eta_quotient(const EtaQuotient& desc, u64 limit, u64 budget = kDefaultLimitBudget) {
  detail::check_limit(limit, budget);
  const u64 h = desc.shift();
  if (limit < h) throw Error(Errc::InvalidArgument, "limit below the q-shift");

  // product part, exponents 0..limit-h
  const u64 len = limit - h + 1;
  std::vector<i64> dense(len, 0);
  dense[0] = 1;
  const SparseSeries cube = eta_cube_series(len, budget);
  const SparseSeries euler = euler_series(len, budget);
  for (const auto& f : desc.factors()) {
    const SparseSeries cube_d = cube.rescaled(f.scale, len);
    const SparseSeries euler_d = euler.rescaled(f.scale, len);
    for (std::uint32_t i = 0; i < f.exponent / 3; ++i) detail::multiply_in_place(dense, cube_d);
    for (std::uint32_t i = 0; i < f.exponent % 3; ++i) detail::multiply_in_place(dense, euler_d);
  }

  std::vector<i64> values(limit, 0);
  for (u64 n = h; n <= limit; ++n) values[n - 1] = dense[n - h];
  return CoeffTable(desc, std::move(values));
}

/// Checks b(mn) = b(m)b(n) for coprime m, n and the prime-power recursion
/// b(p^{k+1}) = b(p)b(p^k) - p^{w-1} b(p^{k-1}) for p not dividing the level,
/// up to the given bound (clamped to the table length).
inline Report hecke_check(const CoeffTable& tab, u64 bound) {
  Stopwatch clock;
  bound = std::min(bound, tab.limit());
  const auto& desc = tab.descriptor();
  const u64 level = desc.level();
  const u64 h = desc.shift();

  json violations = json::array();
  u64 violation_count = 0;
  auto record = [&](json v) {
    if (violations.size() < 20) violations.push_back(std::move(v));
    ++violation_count;
  };

  if (h > bound || tab.b(h) != 1) record({{"relation", "normalisation"}, {"n", h}});

  u64 multiplicative = 0;
  for (u64 m = 2; m * m <= bound; ++m) {
    for (u64 n = m + 1; m * n <= bound; ++n) {
      if (std::gcd(m, n) != 1) continue;
      ++multiplicative;
      const i128 lhs = tab.b(m * n);
      const i128 rhs = static_cast<i128>(tab.b(m)) * tab.b(n);
      if (lhs != rhs) record({{"relation", "multiplicative"}, {"m", m}, {"n", n}});
    }
  }

  u64 prime_power = 0;
  const bool integral_weight = desc.twice_weight() % 2 == 0;
  if (integral_weight && bound >= 1) {
    const u64 char_exp = desc.twice_weight() / 2 - 1;
    for (u64 p : primes_up_to(static_cast<u64>(std::sqrt(static_cast<double>(bound))) + 1)) {
      if (level % p == 0 || p * p > bound) continue;
      const i128 pw = static_cast<i128>(checked_pow(p, static_cast<unsigned>(char_exp)));
      u64 prev = 1, cur = p;
      while (cur <= bound / p) {
        const u64 next = cur * p;
        ++prime_power;
        const i128 expected = static_cast<i128>(tab.b(p)) * tab.b(cur) - pw * tab.b(prev);
        if (expected != tab.b(next)) record({{"relation", "prime_power"}, {"p", p}, {"n", next}});
        prev = cur;
        cur = next;
      }
    }
  }

  Report r;
  r.check = "hecke";
  r.params = {{"form", desc.str()}, {"bound", bound}, {"level", level}};
  r.pass = violation_count == 0;
  r.witness = {{"multiplicative_pairs", multiplicative},
               {"prime_power_steps", prime_power},
               {"violations", violation_count},
               {"first_violations", violations}};
  if (!integral_weight) r.witness["note"] = "half-integral weight: prime-power relation skipped";
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

/// Divisor-function envelope |b(n)| <= d(n) n^{(w-1)/2}, checked exactly as
/// b(n)^2 <= d(n)^2 n^{w-1}.
inline Report deligne_check(const CoeffTable& tab) {
  Stopwatch clock;
  const u64 n_max = tab.limit();
  std::vector<u64> divisors(n_max + 1, 0);
  for (u64 d = 1; d <= n_max; ++d) {
    for (u64 m = d; m <= n_max; m += d) ++divisors[m];
  }
  const u64 twice_w = tab.descriptor().twice_weight();
  json first = json::array();
  u64 violations = 0;
  for (u64 n = 1; n <= n_max; ++n) {
    const i128 b = tab.b(n);
    bool ok;
    if (twice_w % 2 == 0) {
      i128 rhs = static_cast<i128>(divisors[n]) * divisors[n];
      for (u64 i = 0; i + 1 < twice_w / 2; ++i) rhs *= n;
      ok = b * b <= rhs;
    } else {
      const long double env = static_cast<long double>(divisors[n]) *
                              std::pow(static_cast<long double>(n), (static_cast<long double>(twice_w) / 2 - 1) / 2);
      ok = std::fabs(static_cast<long double>(b)) <= env;
    }
    if (!ok) {
      ++violations;
      if (first.size() < 20) first.push_back(n);
    }
  }
  Report r;
  r.check = "deligne_bound";
  r.params = {{"form", tab.descriptor().str()}, {"limit", n_max}};
  r.pass = violations == 0;
  r.witness = {{"violations", violations}, {"first_violations", first}};
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

// --- persistence -----------------------------------------------------------
//
// Little-endian layout: "ETAC", u32 version = 1, u32 factor count, per factor
// (u32 d, u32 r), u64 N, N x i64 coefficients b(1..N), then u32 CRC-32 of
// every preceding byte (magic included).

inline constexpr std::uint32_t kTableFormatVersion = 1;

namespace detail {
inline void put_le(std::string& buf, u64 v, int bytes) {
  for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline u64 get_le(const std::string& buf, std::size_t& pos, int bytes) {
  if (pos + static_cast<std::size_t>(bytes) > buf.size()) throw Error(Errc::FormatMismatch, "unexpected end of file");
  u64 v = 0;
  for (int i = 0; i < bytes; ++i) v |= u64{static_cast<unsigned char>(buf[pos + i])} << (8 * i);
  pos += static_cast<std::size_t>(bytes);
  return v;
}

inline std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks
  std::size_t off = 0;
  while (off < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - off, 1u << 30);
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), static_cast<uInt>(chunk));
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}
}  // namespace detail

inline std::string serialize_table(const CoeffTable& tab) {
  std::string buf = "ETAC";
  detail::put_le(buf, kTableFormatVersion, 4);
  detail::put_le(buf, tab.descriptor().factors().size(), 4);
  for (const auto& f : tab.descriptor().factors()) {
    detail::put_le(buf, f.scale, 4);
    detail::put_le(buf, f.exponent, 4);
  }
  detail::put_le(buf, tab.limit(), 8);
  if constexpr (std::endian::native == std::endian::little) {
    buf.append(reinterpret_cast<const char*>(tab.values().data()), 8 * tab.values().size());
  } else {
    for (i64 v : tab.values()) detail::put_le(buf, static_cast<u64>(v), 8);
  }
  detail::put_le(buf, detail::crc32_of(buf), 4);
  return buf;
}

inline CoeffTable deserialize_table(const std::string& buf) {
  std::size_t pos = 0;
  if (buf.size() < 4 || buf.compare(0, 4, "ETAC") != 0) throw Error(Errc::FormatMismatch, "bad magic");
  pos = 4;
  const u64 version = detail::get_le(buf, pos, 4);
  if (version != kTableFormatVersion) throw Error(Errc::FormatMismatch, "unsupported version " + std::to_string(version));
  const u64 count = detail::get_le(buf, pos, 4);
  if (count > (buf.size() - pos) / 8) throw Error(Errc::FormatMismatch, "factor count exceeds file size");
  std::vector<EtaFactor> factors;
  for (u64 i = 0; i < count; ++i) {
    EtaFactor f{};
    f.scale = static_cast<std::uint32_t>(detail::get_le(buf, pos, 4));
    f.exponent = static_cast<std::uint32_t>(detail::get_le(buf, pos, 4));
    factors.push_back(f);
  }
  const u64 n = detail::get_le(buf, pos, 8);
  if (n > (buf.size() - pos) / 8 || buf.size() - pos != 8 * n + 4) {
    throw Error(Errc::FormatMismatch, "length field does not match file size");
  }
  const std::size_t payload_end = pos + 8 * n;
  std::size_t crc_pos = payload_end;
  const auto stored = static_cast<std::uint32_t>(detail::get_le(buf, crc_pos, 4));
  if (stored != detail::crc32_of(std::string_view(buf).substr(0, payload_end))) {
    throw Error(Errc::ChecksumMismatch, "CRC-32 does not match payload");
  }
  std::vector<i64> values(n);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(values.data(), buf.data() + pos, 8 * n);
  } else {
    for (u64 i = 0; i < n; ++i) values[i] = static_cast<i64>(detail::get_le(buf, pos, 8));
  }
  EtaQuotient desc = [&] {
    try {
      return EtaQuotient(std::move(factors));
    } catch (const Error& e) {
      throw Error(Errc::FormatMismatch, std::string("stored descriptor invalid: ") + e.what());
    }
  }();
  return CoeffTable(std::move(desc), std::move(values));
}

inline void save_table(const CoeffTable& tab, const std::filesystem::path& path) {
  const std::string buf = serialize_table(tab);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
}

inline CoeffTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  if (size < 0) throw Error(Errc::IoFailure, "cannot size " + path.string());
  std::string buf(static_cast<std::size_t>(size), '\0');
  in.read(buf.data(), size);
  if (in.bad() || in.gcount() != size) throw Error(Errc::IoFailure, "read from " + path.string() + " failed");
  return deserialize_table(buf);
}

inline void write_table_csv(const CoeffTable& tab, std::ostream& out) {
  out << "n,b\n";
  for (u64 n = 1; n <= tab.limit(); ++n) out << n << ',' << tab.b(n) << '\n';
}

inline void write_table_csv(const CoeffTable& tab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  write_table_csv(tab, out);
  if (!out) throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace nonord

#endif  // NONORD_QSERIES_HPP
