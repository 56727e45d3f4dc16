#ifndef NONORD_ANALYTIC_HPP
#define NONORD_ANALYTIC_HPP

// Floating-point comparison of sum_k (1/2)_k^4/k!^4 with 16 L(f,2)/pi^2.
//
// L(f,2) comes from the Mellin transform Lambda(s) = int_0^oo f(iy) y^{s-1} dy
// = (2 pi)^{-s} Gamma(s) L(f,s), split at the Fricke fixed point
// y0 = 1/sqrt(level). At the centre s = 2 of a weight 4 form with sign +1 the
// two halves coincide, giving
//   Lambda(2) = 2 sum_n b(n) (1 + 2 pi n y0) e^{-2 pi n y0} / (2 pi n)^2,
//   L(f,2) = 4 pi^2 Lambda(2).

#include <cmath>
#include <numbers>

#include "nonord/error.hpp"
#include "nonord/qseries.hpp"
#include "nonord/report.hpp"

namespace nonord {

using real = long double;

inline constexpr real kPi = std::numbers::pi_v<long double>;

/// First-order tail estimate for the terms beyond index N: t_k ~ 1/(pi k)^2.
inline real hyper_tail(u64 terms) { return 1.0L / (kPi * kPi * static_cast<real>(terms)); }

/// sum_{k<N} (binom(2k,k)/4^k)^4, optionally plus the tail estimate.
inline real hyper_sum_numeric(u64 terms, bool with_tail = true) {
  if (terms == 0) throw Error(Errc::InvalidArgument, "need at least one term");
  real t = 1.0L;
  real sum = 1.0L;
  for (u64 k = 1; k < terms; ++k) {
    const real ratio = static_cast<real>(2 * k - 1) / static_cast<real>(2 * k);
    const real r2 = ratio * ratio;
    t *= r2 * r2;
    sum += t;
  }
  return with_tail ? sum + hyper_tail(terms) : sum;
}

/// Lambda(2) from the first `cutoff` coefficients.
inline real completed_l_value(const CoeffTable& tab, u64 cutoff) {
  if (tab.descriptor().twice_weight() != 8) throw Error(Errc::InvalidArgument, "central value formula is for weight 4");
  if (cutoff < 50) throw Error(Errc::InvalidArgument, "cutoff must be at least 50");
  tab.require(cutoff);
  const real y0 = 1.0L / std::sqrt(static_cast<real>(tab.descriptor().level()));
  real acc = 0.0L;
  for (u64 n = 1; n <= cutoff; ++n) {
    const real x = 2.0L * kPi * static_cast<real>(n) * y0;
    const real w = 2.0L * kPi * static_cast<real>(n);
    acc += static_cast<real>(tab.b(n)) * (1.0L + x) * std::exp(-x) / (w * w);
  }
  return 2.0L * acc;
}

/// L(f,2) = (2 pi)^2 Lambda(2) / Gamma(2).
inline real l_value_numeric(const CoeffTable& tab, u64 cutoff) {
  return 4.0L * kPi * kPi * completed_l_value(tab, cutoff);
}

struct NumericReport {
  real lhs = 0;
  real rhs = 0;
  real relative_difference = 0;
  u64 terms = 0;
  u64 cutoff = 0;
  real tail_correction = 0;
  double tolerance = 0;
  bool pass = false;
  double runtime_ms = 0;

  Report to_report() const {
    Report r;
    r.check = "lvalue";
    r.params = {{"terms", terms}, {"cutoff", cutoff}, {"tol", tolerance}};
    r.pass = pass;
    r.witness = {{"lhs", static_cast<double>(lhs)},
                 {"rhs", static_cast<double>(rhs)},
                 {"relative_difference", static_cast<double>(relative_difference)},
                 {"tail_correction", static_cast<double>(tail_correction)}};
    r.runtime_ms = runtime_ms;
    return r;
  }
};

inline constexpr u64 kDefaultHyperTerms = 1'000'000;
inline constexpr u64 kDefaultLCutoff = 200;
inline constexpr double kDefaultLValueTolerance = 1e-5;

inline NumericReport verify_lvalue(const CoeffTable& tab, u64 terms = kDefaultHyperTerms, u64 cutoff = kDefaultLCutoff,
                                double tol = kDefaultLValueTolerance) {
  Stopwatch clock;
  NumericReport out;
  out.terms = terms;
  out.cutoff = cutoff;
  out.tolerance = tol;
  out.tail_correction = hyper_tail(terms);
  out.lhs = hyper_sum_numeric(terms, true);
  out.rhs = 16.0L * l_value_numeric(tab, cutoff) / (kPi * kPi);
  out.relative_difference = std::fabs(out.lhs - out.rhs) / std::fabs(out.rhs);
  out.pass = out.relative_difference <= static_cast<real>(tol);
  out.runtime_ms = clock.elapsed_ms();
  return out;
}

}  // namespace nonord

#endif  // NONORD_ANALYTIC_HPP
