#ifndef NONORD_QCONG_HPP
#define NONORD_QCONG_HPP

// Exact arithmetic in Z[a][q] / Phi_n(q) and the cleared-denominator check of
// the congruence
//
//   F_n(a;q) = a^{n-1} prod_{j=1}^{n-1}(q^j-1)^2
//              / ( prod_{j<=(n-1)/2}(1-aq^j)^2 prod_{j>=(n+1)/2}(a-q^j)^2 ) * F_n(1;q)
//
// modulo Phi_n(q). Denominators are cleared by multiplying both sides with
// elements that are nonzero in the integral domain Q(zeta_n)[a], since each
// 1 - zeta^j with 0 < j < n is nonzero; so the cleared identity is
// equivalent to the original one.

#include <gmpxx.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "nonord/error.hpp"
#include "nonord/modring.hpp"
#include "nonord/report.hpp"

namespace nonord {

/// Dense univariate integer polynomial, no leading zeros.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> c) : c_(std::move(c)) { trim(); }

  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const std::vector<mpz_class>& coefficients() const noexcept { return c_; }
  mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }

  mpz_class evaluate(const mpz_class& x) const {
    mpz_class acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  /// Exact quotient by a monic divisor; throws if the remainder is nonzero.
  IntPoly divided_exactly(const IntPoly& monic) const {
    if (monic.c_.empty() || monic.c_.back() != 1) throw Error(Errc::InvalidArgument, "divisor must be monic");
    std::vector<mpz_class> rem = c_;
    const std::size_t dd = monic.c_.size() - 1;
    if (rem.size() <= dd) {
      if (!IntPoly(rem).c_.empty()) throw Error(Errc::InvalidArgument, "division is not exact");
      return IntPoly();
    }
    std::vector<mpz_class> quo(rem.size() - dd, 0);
    for (std::size_t i = rem.size(); i-- > dd;) {
      const mpz_class lead = rem[i];
      if (lead == 0) continue;
      quo[i - dd] = lead;
      for (std::size_t t = 0; t <= dd; ++t) rem[i - dd + t] -= lead * monic.c_[t];
    }
    for (const auto& r : rem) {
      if (r != 0) throw Error(Errc::InvalidArgument, "division is not exact");
    }
    return IntPoly(std::move(quo));
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<mpz_class> c_;
};

/// Phi_n(q) by dividing q^n - 1 by Phi_d for every proper divisor d of n.
inline IntPoly cyclotomic_poly(u64 n) {
  if (n == 0) throw Error(Errc::InvalidN, "n must be positive");
  static std::mutex memo_mutex;
  static std::map<u64, IntPoly> memo;
  {
    std::lock_guard lock(memo_mutex);
    if (auto it = memo.find(n); it != memo.end()) return it->second;
  }
  std::vector<mpz_class> c(n + 1, 0);
  c[0] = -1;
  c[n] = 1;
  IntPoly result(std::move(c));
  for (u64 d = 1; d < n; ++d) {
    if (n % d == 0) result = result.divided_exactly(cyclotomic_poly(d));
  }
  std::lock_guard lock(memo_mutex);
  memo.emplace(n, result);
  return result;
}

/// phi(n), the degree of Phi_n.
inline u64 euler_phi(u64 n) {
  u64 result = n;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

/// Element of Z[a][q]/Phi_n(q): a phi(n) x (A+1) grid of integers indexed by
/// (q-degree, a-degree), always fully reduced.
class CycRingElem {
 public:
  explicit CycRingElem(u64 n) : n_(check_n(n)), phi_(cyclotomic_poly(n)), rows_(phi_.degree(), std::vector<mpz_class>(1, 0)) {}

  static CycRingElem one(u64 n) {
    CycRingElem e(n);
    e.rows_[0][0] = 1;
    return e;
  }

  /// coefficient * a^a_exp * q^q_exp; negative q exponents are folded by q^n = 1.
  static CycRingElem monomial(u64 n, const mpz_class& coefficient, u64 a_exp, i64 q_exp) {
    CycRingElem e(n);
    std::vector<std::vector<mpz_class>> raw(n, std::vector<mpz_class>(a_exp + 1, 0));
    raw[reduce_signed(q_exp, n)][a_exp] = coefficient;
    e.assign_reduced(std::move(raw));
    return e;
  }

  /// Reduces an arbitrary grid raw[q-degree][a-degree]: first q^n = 1, then
  /// remainder by Phi_n.
  static CycRingElem from_raw(u64 n, std::vector<std::vector<mpz_class>> raw) {
    CycRingElem e(n);
    e.assign_reduced(std::move(raw));
    return e;
  }

  u64 n() const noexcept { return n_; }
  std::size_t q_len() const noexcept { return rows_.size(); }
  std::size_t a_len() const noexcept { return rows_.empty() ? 0 : rows_[0].size(); }
  const mpz_class& at(std::size_t q_deg, std::size_t a_deg) const { return rows_.at(q_deg).at(a_deg); }

  mpz_class coeff(std::size_t q_deg, std::size_t a_deg) const {
    return (q_deg < q_len() && a_deg < a_len()) ? rows_[q_deg][a_deg] : mpz_class(0);
  }

  /// Highest a-degree with a nonzero entry, or -1 for zero.
  long a_degree() const {
    for (std::size_t j = a_len(); j-- > 0;) {
      for (const auto& row : rows_) {
        if (row[j] != 0) return static_cast<long>(j);
      }
    }
    return -1;
  }

  bool is_zero() const {
    for (const auto& row : rows_) {
      for (const auto& v : row) {
        if (v != 0) return false;
      }
    }
    return true;
  }

  /// First nonzero (q-degree, a-degree, value), scanning q-major.
  std::optional<std::tuple<std::size_t, std::size_t, mpz_class>> first_nonzero() const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 0; j < rows_[i].size(); ++j) {
        if (rows_[i][j] != 0) return std::tuple{i, j, rows_[i][j]};
      }
    }
    return std::nullopt;
  }

  CycRingElem& operator+=(const CycRingElem& o) {
    same_ring(o);
    widen(o.a_len());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 0; j < o.a_len(); ++j) rows_[i][j] += o.rows_[i][j];
    }
    return *this;
  }

  CycRingElem& operator-=(const CycRingElem& o) {
    same_ring(o);
    widen(o.a_len());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 0; j < o.a_len(); ++j) rows_[i][j] -= o.rows_[i][j];
    }
    return *this;
  }

  friend CycRingElem operator+(CycRingElem x, const CycRingElem& y) { return x += y; }
  friend CycRingElem operator-(CycRingElem x, const CycRingElem& y) { return x -= y; }

  friend CycRingElem operator*(const CycRingElem& x, const CycRingElem& y) {
    x.same_ring(y);
    const std::size_t al = x.a_len() + y.a_len() - 1;
    std::vector<std::vector<mpz_class>> raw(x.q_len() + y.q_len() - 1, std::vector<mpz_class>(al, 0));
    for (std::size_t i1 = 0; i1 < x.q_len(); ++i1) {
      for (std::size_t j1 = 0; j1 < x.a_len(); ++j1) {
        const mpz_class& u = x.rows_[i1][j1];
        if (u == 0) continue;
        for (std::size_t i2 = 0; i2 < y.q_len(); ++i2) {
          for (std::size_t j2 = 0; j2 < y.a_len(); ++j2) {
            const mpz_class& v = y.rows_[i2][j2];
            if (v != 0) raw[i1 + i2][j1 + j2] += u * v;
          }
        }
      }
    }
    return from_raw(x.n_, std::move(raw));
  }

  CycRingElem& operator*=(const CycRingElem& o) { return *this = *this * o; }

  /// *this *= (constant + coefficient * a^a_exp * q^q_exp)
  void mul_binomial(const mpz_class& constant, const mpz_class& coefficient, u64 a_exp, i64 q_exp) {
    const std::size_t al = a_len() + a_exp;
    std::vector<std::vector<mpz_class>> raw(n_, std::vector<mpz_class>(al, 0));
    const u64 shift = reduce_signed(q_exp, n_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t target = (i + shift) % n_;
      for (std::size_t j = 0; j < a_len(); ++j) {
        const mpz_class& v = rows_[i][j];
        if (v == 0) continue;
        raw[i][j] += constant * v;
        raw[target][j + a_exp] += coefficient * v;
      }
    }
    assign_reduced(std::move(raw));
  }

  /// Image under a -> value.
  CycRingElem substitute_a(const mpz_class& value) const {
    std::vector<std::vector<mpz_class>> raw(rows_.size(), std::vector<mpz_class>(1, 0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      mpz_class acc = 0;
      for (std::size_t j = a_len(); j-- > 0;) acc = acc * value + rows_[i][j];
      raw[i][0] = acc;
    }
    return from_raw(n_, std::move(raw));
  }

  /// Equality as ring elements; trailing zero a-columns are ignored.
  friend bool operator==(const CycRingElem& x, const CycRingElem& y) {
    if (x.n_ != y.n_) return false;
    const std::size_t al = std::max(x.a_len(), y.a_len());
    for (std::size_t i = 0; i < x.q_len(); ++i) {
      for (std::size_t j = 0; j < al; ++j) {
        if (x.coeff(i, j) != y.coeff(i, j)) return false;
      }
    }
    return true;
  }

  void write_csv(std::ostream& out) const {
    out << "q_degree,a_degree,coefficient\n";
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = 0; j < rows_[i].size(); ++j) {
        if (rows_[i][j] != 0) out << i << ',' << j << ',' << rows_[i][j].get_str() << '\n';
      }
    }
  }

 private:
  static u64 check_n(u64 n) {
    if (n < 3 || n % 2 == 0) throw Error(Errc::InvalidN, "n must be odd and at least 3, got " + std::to_string(n));
    return n;
  }

  void same_ring(const CycRingElem& o) const {
    if (o.n_ != n_) throw Error(Errc::ModulusMismatch, "elements of different cyclotomic rings");
  }

  void widen(std::size_t al) {
    if (al <= a_len()) return;
    for (auto& row : rows_) row.resize(al, 0);
  }

  void assign_reduced(std::vector<std::vector<mpz_class>> raw) {
    std::size_t al = 1;
    for (const auto& row : raw) al = std::max(al, row.size());
    for (auto& row : raw) row.resize(al, 0);
    // q^n = 1
    if (raw.size() > n_) {
      for (std::size_t i = n_; i < raw.size(); ++i) {
        for (std::size_t j = 0; j < al; ++j) raw[i % n_][j] += raw[i][j];
      }
      raw.resize(n_);
    }
    // remainder by the monic Phi_n, top row first
    const std::size_t phi = static_cast<std::size_t>(phi_.degree());
    const auto& pc = phi_.coefficients();
    for (std::size_t i = raw.size(); i-- > phi;) {
      for (std::size_t j = 0; j < al; ++j) {
        const mpz_class lead = raw[i][j];
        if (lead == 0) continue;
        for (std::size_t t = 0; t < phi; ++t) {
          if (pc[t] != 0) raw[i - phi + t][j] -= lead * pc[t];
        }
      }
    }
    raw.resize(phi, std::vector<mpz_class>(al, 0));
    // drop zero a-columns at the top
    std::size_t keep = al;
    while (keep > 1) {
      bool all_zero = true;
      for (const auto& row : raw) {
        if (row[keep - 1] != 0) {
          all_zero = false;
          break;
        }
      }
      if (!all_zero) break;
      --keep;
    }
    for (auto& row : raw) row.resize(keep);
    rows_ = std::move(raw);
  }

  u64 n_;
  IntPoly phi_;
  std::vector<std::vector<mpz_class>> rows_;
};

/// A base alpha * a^a_exp * q^q_exp for q-Pochhammer products.
struct Monomial {
  int alpha = 1;  // 0 or +-1
  u64 a_exp = 0;  // 0 or 1
  i64 q_exp = 0;
};

/// (base; q)_k = prod_{j<k} (1 - base q^j), reduced.
inline CycRingElem qpoch(u64 n, const Monomial& base, u64 k) {
  CycRingElem out = CycRingElem::one(n);
  for (u64 j = 0; j < k; ++j) out.mul_binomial(1, -base.alpha, base.a_exp, base.q_exp + static_cast<i64>(j));
  return out;
}

inline constexpr u64 kDefaultQcongCap = 15;

struct QcongSides {
  CycRingElem lhs;
  CycRingElem rhs;
};

namespace detail {
inline void require_odd_n(u64 n) {
  if (n < 3 || n % 2 == 0) throw Error(Errc::InvalidN, "n must be odd and at least 3, got " + std::to_string(n));
}

/// sum_k (a q^{(n+1)/2};q)_k^2 (a q^{(1-n)/2};q)_k^2 (a q^{k+1};q)_{n-1-k}^4 q^k
inline CycRingElem cleared_f(u64 n) {
  const i64 h = static_cast<i64>(n + 1) / 2;
  CycRingElem total(n);
  for (u64 k = 0; k < n; ++k) {
    CycRingElem term = CycRingElem::monomial(n, 1, 0, static_cast<i64>(k));
    for (u64 j = 0; j < k; ++j) {
      for (int e = 0; e < 2; ++e) {
        term.mul_binomial(1, -1, 1, h + static_cast<i64>(j));
        term.mul_binomial(1, -1, 1, 1 - h + static_cast<i64>(j));
      }
    }
    for (u64 j = k + 1; j < n; ++j) {
      for (int e = 0; e < 4; ++e) term.mul_binomial(1, -1, 1, static_cast<i64>(j));
    }
    total += term;
  }
  return total;
}
}  // namespace detail

/// lhs = F~(a) D(a;q) (q;q)_{n-1}^4 and rhs = a^{n-1} C(q) (aq;q)_{n-1}^4 F~(1),
/// where F~ is F_n with denominators (aq;q)_k^4 cleared by (aq;q)_{n-1}^4,
/// D = prod_{j=1}^{(n-1)/2}(1-aq^j)^2 prod_{j=(n+1)/2}^{n-1}(a-q^j)^2 and
/// C = prod_{j=1}^{n-1}(q^j-1)^2.
inline QcongSides build_qcong_sides(u64 n) {
  detail::require_odd_n(n);
  const CycRingElem f = detail::cleared_f(n);

  CycRingElem lhs = f;
  for (u64 j = 1; j <= (n - 1) / 2; ++j) {
    for (int e = 0; e < 2; ++e) lhs.mul_binomial(1, -1, 1, static_cast<i64>(j));
  }
  for (u64 j = (n + 1) / 2; j < n; ++j) {
    // a - q^j = -q^j (1 - a q^{-j})
    for (int e = 0; e < 2; ++e) {
      lhs.mul_binomial(0, -1, 0, static_cast<i64>(j));
      lhs.mul_binomial(1, -1, 1, -static_cast<i64>(j));
    }
  }
  for (u64 j = 1; j < n; ++j) {
    for (int e = 0; e < 4; ++e) lhs.mul_binomial(1, -1, 0, static_cast<i64>(j));
  }

  CycRingElem rhs = f.substitute_a(1);
  rhs.mul_binomial(0, 1, n - 1, 0);
  for (u64 j = 1; j < n; ++j) {
    for (int e = 0; e < 2; ++e) rhs.mul_binomial(-1, 1, 0, static_cast<i64>(j));
    for (int e = 0; e < 4; ++e) rhs.mul_binomial(1, -1, 1, static_cast<i64>(j));
  }
  return {std::move(lhs), std::move(rhs)};
}

inline Report verify_qcong(u64 n, u64 cap = kDefaultQcongCap, const std::filesystem::path* dump = nullptr) {
  Stopwatch clock;
  detail::require_odd_n(n);
  if (n > cap) throw Error(Errc::CapExceeded, "n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  const QcongSides sides = build_qcong_sides(n);
  const CycRingElem diff = sides.lhs - sides.rhs;

  Report r;
  r.check = "qcong";
  r.params = {{"n", n}, {"prime_n", is_prime(n)}};
  r.pass = diff.is_zero();
  r.witness = {{"phi_n", diff.q_len()}, {"a_degree_lhs", sides.lhs.a_degree()}, {"a_degree_rhs", sides.rhs.a_degree()}};
  if (auto cell = diff.first_nonzero()) {
    r.witness["first_nonzero"] = {{"q_degree", std::get<0>(*cell)},
                                  {"a_degree", std::get<1>(*cell)},
                                  {"coefficient", std::get<2>(*cell).get_str()}};
  }
  if (dump != nullptr) {
    std::ofstream out(*dump, std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot open " + dump->string() + " for writing");
    diff.write_csv(out);
  }
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

/// prod_{j=1}^{n-1} (a - q^j) = 1 + a + ... + a^{n-1} mod Phi_n, and its
/// specialisation at a = 1, which must equal n = prod_{d|n, d>1} Phi_d(1).
inline Report verify_prefactor(u64 n) {
  Stopwatch clock;
  detail::require_odd_n(n);
  CycRingElem prod = CycRingElem::one(n);
  for (u64 j = 1; j < n; ++j) {
    CycRingElem factor = CycRingElem::monomial(n, 1, 1, 0) - CycRingElem::monomial(n, 1, 0, static_cast<i64>(j));
    prod *= factor;
  }
  CycRingElem geometric(n);
  for (u64 i = 0; i < n; ++i) geometric += CycRingElem::monomial(n, 1, i, 0);
  const bool identity_ok = prod == geometric;

  const CycRingElem at_one = prod.substitute_a(1);
  const bool value_ok = at_one == CycRingElem::monomial(n, static_cast<unsigned long>(n), 0, 0);

  mpz_class divisor_product = 1;
  for (u64 d = 2; d <= n; ++d) {
    if (n % d == 0) divisor_product *= cyclotomic_poly(d).evaluate(1);
  }
  const bool divisor_ok = divisor_product == static_cast<unsigned long>(n);

  Report r;
  r.check = "prefactor";
  r.params = {{"n", n}};
  r.pass = identity_ok && value_ok && divisor_ok;
  r.witness = {{"identity", identity_ok},
               {"value_at_one", value_ok},
               {"divisor_product", divisor_product.get_str()}};
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

}  // namespace nonord

#endif  // NONORD_QCONG_HPP
