#ifndef NONORD_HYPERSUMS_HPP
#define NONORD_HYPERSUMS_HPP

// Truncated hypergeometric sums
//   sum_{k=0}^{p-1} (s1)_k (s2)_k (1-s1)_k (1-s2)_k / k!^4
// evaluated directly in Z/p^r. Every k < p has k! coprime to p, so all the
// inverses needed by the term recurrence exist.

#include <array>
#include <string>
#include <vector>

#include "nonord/error.hpp"
#include "nonord/modring.hpp"
#include "nonord/qseries.hpp"
#include "nonord/report.hpp"

namespace nonord {

class HyperParams {
 public:
  HyperParams(RationalParam s1, RationalParam s2) : s1_(s1), s2_(s2) {
    for (const auto& s : {s1_, s2_}) {
      if (s.numerator() <= 0 || s.numerator() >= s.denominator()) {
        throw Error(Errc::InvalidArgument, "parameter " + s.str() + " must lie strictly between 0 and 1");
      }
    }
  }

  static HyperParams half_half() { return {RationalParam(1, 2), RationalParam(1, 2)}; }
  static HyperParams quarter_third() { return {RationalParam(1, 4), RationalParam(1, 3)}; }

  const RationalParam& s1() const noexcept { return s1_; }
  const RationalParam& s2() const noexcept { return s2_; }

  std::array<RationalParam, 4> quadruple() const { return {s1_, s2_, s1_.one_minus(), s2_.one_minus()}; }

  /// Product of the four parameter denominators.
  u64 denominator_product() const {
    u64 d = 1;
    for (const auto& s : quadruple()) d *= static_cast<u64>(s.denominator());
    return d;
  }

  std::string str() const { return "(" + s1_.str() + "," + s2_.str() + ")"; }

 private:
  RationalParam s1_;
  RationalParam s2_;
};

namespace detail {
inline void require_odd_prime(u64 p) {
  if (p <= 2 || !is_prime(p)) throw Error(Errc::BadPrime, "p must be an odd prime, got " + std::to_string(p));
}

inline void require_admissible(u64 p, const HyperParams& params) {
  require_odd_prime(p);
  if (params.denominator_product() % p == 0) {
    throw Error(Errc::BadPrime, std::to_string(p) + " divides a denominator of " + params.str());
  }
}
}  // namespace detail

inline Residue truncated_sum(u64 p, unsigned power, const HyperParams& params) {
  detail::require_admissible(p, params);
  if (power == 0) throw Error(Errc::InvalidArgument, "power must be at least 1");
  const u64 m = checked_pow(p, power);

  std::array<Residue, 4> sigma{Residue(0, m), Residue(0, m), Residue(0, m), Residue(0, m)};
  const auto quad = params.quadruple();
  for (std::size_t i = 0; i < 4; ++i) sigma[i] = rational_residue(quad[i], m);

  Residue term(1, m);
  Residue sum(1, m);
  for (u64 k = 1; k < p; ++k) {
    const i64 shift = static_cast<i64>(k) - 1;
    for (const auto& s : sigma) term *= s.plus(shift);
    term *= mod_inverse(static_cast<i64>(k), m).pow(4);
    sum += term;
  }
  return sum;
}

/// sum_{k<p} (1/2)_k^4 / k!^4 = b(p) (mod p^power) for the level 8 form.
inline Report vanhamme_check(u64 p, const CoeffTable& tab, unsigned power = 3) {
  Stopwatch clock;
  detail::require_odd_prime(p);
  tab.require(p);
  const Residue sum = truncated_sum(p, power, HyperParams::half_half());
  const Residue bp(tab.b(p), sum.modulus());

  Report r;
  r.check = "vanhamme";
  r.params = {{"p", p}, {"power", power}, {"form", tab.descriptor().str()}};
  r.pass = sum == bp;
  r.witness = {{"modulus", sum.modulus()}, {"sum", sum.value()}, {"b_p", tab.b(p)}, {"b_p_reduced", bp.value()}};
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

struct SearchResult {
  u64 bound = 0;
  /// Odd primes p <= bound, p not dividing the level, with p | b(p).
  std::vector<u64> nonordinary;
  /// Primes dividing the level, with their b(p); these are degenerate and kept apart.
  std::vector<std::pair<u64, i64>> level_primes;
  /// Odd n <= bound with b(n) = 0 (informational).
  std::vector<u64> odd_zeros;
};

inline SearchResult nonordinary_search(const CoeffTable& tab, u64 bound) {
  tab.require(bound);
  SearchResult out;
  out.bound = bound;
  const u64 level = tab.descriptor().level();
  for (u64 p : primes_up_to(bound)) {
    if (level % p == 0) {
      out.level_primes.emplace_back(p, tab.b(p));
      continue;
    }
    if (p == 2) continue;
    if (tab.b(p) % static_cast<i64>(p) == 0) out.nonordinary.push_back(p);
  }
  for (u64 n = 1; n <= bound; n += 2) {
    if (tab.b(n) == 0) out.odd_zeros.push_back(n);
  }
  return out;
}

/// Wraps a search in a report; passes when the found primes equal `expected`
/// (if given), otherwise always passes and just records what was found.
inline Report search_report(const CoeffTable& tab, u64 bound, const std::vector<u64>* expected = nullptr) {
  Stopwatch clock;
  const SearchResult res = nonordinary_search(tab, bound);
  json level_primes = json::array();
  for (auto [p, b] : res.level_primes) level_primes.push_back({{"p", p}, {"b_p", b}});

  // odd zeros are expected for forms with CM, so only list a prefix
  json odd_zeros = json::array();
  for (std::size_t i = 0; i < res.odd_zeros.size() && i < 20; ++i) odd_zeros.push_back(res.odd_zeros[i]);

  Report r;
  r.check = "search";
  r.params = {{"form", tab.descriptor().str()}, {"bound", bound}};
  r.pass = expected == nullptr || *expected == res.nonordinary;
  r.witness = {{"nonordinary", res.nonordinary},
               {"level_primes", level_primes},
               {"odd_zero_count", res.odd_zeros.size()},
               {"odd_zeros", odd_zeros}};
  if (expected) r.witness["expected"] = *expected;
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

}  // namespace nonord

#endif  // NONORD_HYPERSUMS_HPP
