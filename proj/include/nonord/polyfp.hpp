#ifndef NONORD_POLYFP_HPP
#define NONORD_POLYFP_HPP

// Dense univariate polynomials in `a` over F_p and over Z, and the
// polynomials
//
//   Q_p(a) = 2^{4(p-1)} (a+1)_{p-1}^4 sum_{k<p} (a+1/2)_k^4 / (a+1)_k^4
//
// together with the two-parameter family obtained by replacing (a+1/2)_k^4 by
// prod_i (a+sigma_i)_k. Over F_p both are built by the term recurrence
//
//   T_0 = (a+1)_{p-1}^4,   T_k = T_{k-1} prod_i (a+sigma_i+k-1) / (a+k)^4,
//
// where each division is exact because (a+k)^4 divides T_{k-1}.

#include <gmpxx.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "nonord/error.hpp"
#include "nonord/hypersums.hpp"
#include "nonord/modring.hpp"
#include "nonord/qseries.hpp"
#include "nonord/report.hpp"

#define NONORD_ASSERT(cond, msg)                                                                      \
  do {                                                                                                \
    if (!(cond)) {                                                                                    \
      std::fprintf(stderr, "internal invariant violated: %s (%s:%d): %s\n", #cond, __FILE__, __LINE__, \
                   msg);                                                                              \
      std::abort();                                                                                   \
    }                                                                                                 \
  } while (0)

namespace nonord {

/// Polynomial over F_p, p < 2^32 so that coefficient products fit in 64 bits.
class PolyModP {
 public:
  static constexpr long kZeroDegree = -1;  // stands in for -infinity

  explicit PolyModP(u64 p) : p_(p) {
    if (p < 2 || p >= (u64{1} << 32)) throw Error(Errc::InvalidArgument, "PolyModP needs 2 <= p < 2^32");
  }

  PolyModP(u64 p, const std::vector<i64>& coefficients) : PolyModP(p) {
    c_.reserve(coefficients.size());
    for (i64 v : coefficients) c_.push_back(reduce_signed(v, p));
    trim();
  }

  static PolyModP constant(u64 p, i64 value) { return PolyModP(p, std::vector<i64>{value}); }

  u64 modulus() const noexcept { return p_; }
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<u64>& coefficients() const noexcept { return c_; }

  u64 coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }

  /// *this *= (a + c)
  void mul_linear(u64 c) {
    c %= p_;
    if (c_.empty()) return;
    c_.push_back(0);
    for (std::size_t i = c_.size() - 1; i > 0; --i) {
      c_[i] = (c_[i - 1] + c * c_[i]) % p_;
    }
    c_[0] = c * c_[0] % p_;
    trim();
  }

  /// *this /= (a + c), returning the remainder.
  u64 div_linear(u64 c) {
    c %= p_;
    if (c_.empty()) return 0;
    // synthetic division: q_{i-1} = p_i - c q_i
    u64 carry = 0;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const u64 qi = carry;
      carry = (c_[i] + p_ - c * qi % p_) % p_;
      c_[i] = qi;
    }
    c_.pop_back();
    trim();
    return carry;
  }

  void scale(u64 s) {
    s %= p_;
    for (auto& v : c_) v = v * s % p_;
    trim();
  }

  PolyModP& operator+=(const PolyModP& o) {
    same_field(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) {
      c_[i] += o.c_[i];
      if (c_[i] >= p_) c_[i] -= p_;
    }
    trim();
    return *this;
  }

  PolyModP& operator-=(const PolyModP& o) {
    same_field(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = (c_[i] + p_ - o.c_[i]) % p_;
    trim();
    return *this;
  }

  friend PolyModP operator+(PolyModP a, const PolyModP& b) { return a += b; }
  friend PolyModP operator-(PolyModP a, const PolyModP& b) { return a -= b; }

  friend PolyModP operator*(const PolyModP& a, const PolyModP& b) {
    a.same_field(b);
    PolyModP out(a.p_);
    if (a.is_zero() || b.is_zero()) return out;
    out.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) out.c_[i + j] = (out.c_[i + j] + a.c_[i] * b.c_[j]) % a.p_;
    }
    out.trim();
    return out;
  }

  friend bool operator==(const PolyModP&, const PolyModP&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void same_field(const PolyModP& o) const {
    if (o.p_ != p_) throw Error(Errc::ModulusMismatch, "polynomials over different fields");
  }

  u64 p_;
  std::vector<u64> c_;
};

/// Polynomial over Z with arbitrary-precision coefficients.
class BigPoly {
 public:
  BigPoly() = default;
  explicit BigPoly(std::vector<mpz_class> c) : c_(std::move(c)) { trim(); }

  static BigPoly constant(const mpz_class& v) { return BigPoly({v}); }

  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
  mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
  mpz_class leading() const { return c_.empty() ? mpz_class(0) : c_.back(); }

  /// *this *= (slope * a + intercept)
  void mul_linear(const mpz_class& slope, const mpz_class& intercept) {
    if (c_.empty()) return;
    c_.push_back(0);
    for (std::size_t i = c_.size() - 1; i > 0; --i) c_[i] = c_[i - 1] * slope + c_[i] * intercept;
    c_[0] *= intercept;
    trim();
  }

  void scale(const mpz_class& s) {
    for (auto& v : c_) v *= s;
    trim();
  }

  BigPoly& operator+=(const BigPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }

  PolyModP reduce_mod(u64 p) const {
    std::vector<i64> r;
    r.reserve(c_.size());
    const mpz_class mp(static_cast<unsigned long>(p));
    for (const auto& v : c_) {
      mpz_class t;
      mpz_fdiv_r(t.get_mpz_t(), v.get_mpz_t(), mp.get_mpz_t());
      r.push_back(static_cast<i64>(t.get_ui()));
    }
    return PolyModP(p, r);
  }

  friend bool operator==(const BigPoly&, const BigPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<mpz_class> c_;
};

namespace detail {

/// (a+1)_{p-1}^4 * sum_{k<p} prod_i (a+sigma_i)_k / (a+1)_k^4 over F_p.
inline PolyModP hypergeometric_poly(u64 p, const std::array<u64, 4>& sigma) {
  PolyModP term = PolyModP::constant(p, 1);
  for (u64 j = 1; j < p; ++j) {
    for (int e = 0; e < 4; ++e) term.mul_linear(j);
  }
  PolyModP sum = term;
  for (u64 k = 1; k < p; ++k) {
    for (int e = 0; e < 4; ++e) {
      const u64 rem = term.div_linear(k);
      NONORD_ASSERT(rem == 0, "division by (a+k) left a remainder");
    }
    for (u64 s : sigma) term.mul_linear((s + k - 1) % p);
    sum += term;
  }
  return sum;
}

}  // namespace detail

/// Q_p(a) mod p, built natively in F_p[a] with O(p^2) work.
inline PolyModP build_qp_mod_p(u64 p) {
  detail::require_odd_prime(p);
  if (p >= (u64{1} << 32)) throw Error(Errc::BadPrime, "p too large for PolyModP");
  const u64 half = rational_residue(RationalParam(1, 2), p).value();
  PolyModP q = detail::hypergeometric_poly(p, {half, half, half, half});
  q.scale(powmod(2, 4 * (p - 1), p));
  return q;
}

inline constexpr u64 kDefaultIntegerCap = 50;

/// Q_p(a) in Z[a], from the cleared form
///   Q_p = sum_k 2^{4(p-1-k)} ((2a+1)(2a+3)...(2a+2k-1))^4 ((a+k+1)_{p-1-k})^4.
/// Each summand is built from scratch, independently of the F_p recurrence.
inline BigPoly build_qp_integer(u64 p, u64 cap = kDefaultIntegerCap) {
  detail::require_odd_prime(p);
  if (p > cap) throw Error(Errc::CapExceeded, "p = " + std::to_string(p) + " exceeds integer cap " + std::to_string(cap));
  BigPoly total;
  for (u64 k = 0; k < p; ++k) {
    BigPoly u = BigPoly::constant(1);
    for (u64 j = 0; j < k; ++j) {
      for (int e = 0; e < 4; ++e) u.mul_linear(2, static_cast<unsigned long>(2 * j + 1));
    }
    for (u64 j = k + 1; j < p; ++j) {
      for (int e = 0; e < 4; ++e) u.mul_linear(1, static_cast<unsigned long>(j));
    }
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), 2, 4 * (p - 1 - k));
    u.scale(pw);
    total += u;
  }
  return total;
}

/// (a+1)_{p-1}^4 * sum_k prod_i (a+sigma_i)_k / (a+1)_k^4 mod p for the
/// quadruple (s1, s2, 1-s1, 1-s2).
inline PolyModP build_family_mod_p(u64 p, const HyperParams& params) {
  detail::require_admissible(p, params);
  if (p >= (u64{1} << 32)) throw Error(Errc::BadPrime, "p too large for PolyModP");
  std::array<u64, 4> sigma{};
  const auto quad = params.quadruple();
  for (std::size_t i = 0; i < 4; ++i) sigma[i] = rational_residue(quad[i], p).value();
  return detail::hypergeometric_poly(p, sigma);
}

inline bool all_coeffs_divisible(const PolyModP& poly) noexcept { return poly.is_zero(); }

/// b * prod_{j=1}^{(p-1)/2} (j - a)^4 in F_p[a].
inline PolyModP companion_poly(u64 p, i64 b) {
  PolyModP out = PolyModP::constant(p, b);
  for (u64 j = 1; j <= (p - 1) / 2; ++j) {
    // (j - a)^4 = (a - j)^4
    for (int e = 0; e < 4; ++e) out.mul_linear(p - j);
  }
  return out;
}

/// First degree at which two polynomials differ, or -1 if equal.
inline long first_mismatch(const PolyModP& x, const PolyModP& y) {
  const std::size_t n = std::max(x.coefficients().size(), y.coefficients().size());
  for (std::size_t i = 0; i < n; ++i) {
    if (x.coeff(i) != y.coeff(i)) return static_cast<long>(i);
  }
  return -1;
}

/// Q_p = b(p) (1-a)_{(p-1)/2}^4 coefficient-wise mod p.
inline Report companion_check(u64 p, const CoeffTable& tab) {
  Stopwatch clock;
  detail::require_odd_prime(p);
  tab.require(p);
  const PolyModP qp = build_qp_mod_p(p);
  const PolyModP rhs = companion_poly(p, tab.b(p));
  const long mismatch = first_mismatch(qp, rhs);

  Report r;
  r.check = "companion";
  r.params = {{"p", p}};
  r.pass = mismatch < 0;
  r.witness = {{"b_p_mod_p", reduce_signed(tab.b(p), p)}, {"degree_qp", qp.degree()}, {"degree_rhs", rhs.degree()}};
  if (mismatch >= 0) {
    r.witness["first_mismatch_degree"] = mismatch;
    r.witness["qp_coeff"] = qp.coeff(static_cast<std::size_t>(mismatch));
    r.witness["rhs_coeff"] = rhs.coeff(static_cast<std::size_t>(mismatch));
  }
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

/// Both sides of the divisibility criterion, computed independently.
inline Report divisibility_equivalence(u64 p, const CoeffTable& tab) {
  Stopwatch clock;
  detail::require_odd_prime(p);
  tab.require(p);
  const bool table_side = tab.b(p) % static_cast<i64>(p) == 0;
  const PolyModP qp = build_qp_mod_p(p);
  const bool poly_side = all_coeffs_divisible(qp);

  Report r;
  r.check = "divisibility";
  r.params = {{"p", p}};
  r.pass = table_side == poly_side;
  r.witness = {{"p_divides_b_p", table_side},
               {"all_coeffs_divisible", poly_side},
               {"b_p", tab.b(p)},
               {"b_p_mod_p", reduce_signed(tab.b(p), p)},
               {"degree_mod_p", qp.degree()}};
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

/// Family polynomial at p; if a table for the matching newform is supplied,
/// passes iff (zero polynomial) <=> (p | b(p)), otherwise only reports.
inline Report family_report(u64 p, const HyperParams& params, const CoeffTable* tab = nullptr) {
  Stopwatch clock;
  const PolyModP poly = build_family_mod_p(p, params);

  Report r;
  r.check = "family";
  r.params = {{"p", p}, {"s1", params.s1().str()}, {"s2", params.s2().str()}};
  r.witness = {{"zero_polynomial", poly.is_zero()}, {"degree", poly.degree()}, {"constant_term", poly.coeff(0)}};
  r.pass = true;
  if (tab != nullptr) {
    tab->require(p);
    const bool nonordinary = tab->b(p) % static_cast<i64>(p) == 0;
    r.witness["form"] = tab->descriptor().str();
    r.witness["b_p"] = tab->b(p);
    r.witness["p_divides_b_p"] = nonordinary;
    r.pass = nonordinary == poly.is_zero();
  }
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

inline void write_poly_csv(const PolyModP& poly, std::ostream& out) {
  out << "degree,coefficient\n";
  for (std::size_t i = 0; i < poly.coefficients().size(); ++i) out << i << ',' << poly.coeff(i) << '\n';
}

inline void write_poly_csv(const BigPoly& poly, std::ostream& out) {
  out << "degree,coefficient\n";
  for (std::size_t i = 0; i < poly.coefficients().size(); ++i) out << i << ',' << poly.coeff(i).get_str() << '\n';
}

template <class Poly>
void write_poly_csv(const Poly& poly, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  write_poly_csv(poly, out);
  if (!out) throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace nonord

#endif  // NONORD_POLYFP_HPP
