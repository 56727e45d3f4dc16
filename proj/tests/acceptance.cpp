// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <gmpxx.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "nonord/suite.hpp"
#include "oracles.hpp"

using namespace nonord;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_ms, const std::function<Outcome()>& body) {
  Stopwatch clock;
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double ms = clock.elapsed_ms();
  if (limit_ms > 0 && ms > limit_ms) out.require(false, "time limit exceeded");
  if (!out.pass) ++failures;
  std::ostringstream line;
  line << (out.pass ? "[PASS]" : "[FAIL]") << " AC" << id << " " << title << " (" << static_cast<long>(ms) << " ms";
  if (limit_ms > 0) line << ", limit " << static_cast<long>(limit_ms) << " ms";
  line << ")";
  if (!out.detail.empty()) line << ": " << out.detail;
  std::cout << line.str() << std::endl;
}

std::array<mpq_class, 4> quad_of(const HyperParams& params) {
  std::array<mpq_class, 4> out;
  const auto q = params.quadruple();
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = mpq_class(static_cast<long>(q[i].numerator()), static_cast<unsigned long>(q[i].denominator()));
    out[i].canonicalize();
  }
  return out;
}

}  // namespace

int main() {
  const SuiteConfig config;
  const fs::path cache_dir = fs::temp_directory_path() / "nonord_acceptance_cache";
  fs::remove_all(cache_dir);
  fs::create_directories(cache_dir);
  TableCache cache(cache_dir);
  const unsigned width = config.width;

  std::optional<CoeffTable> level8;
  std::optional<CoeffTable> cm;

  criterion(1, "coefficient engine: b(1..7), b(11) = -44, b(3137) = 207042, N = 20000 in < 5 s", 5000, [&] {
    Outcome o;
    level8 = expand_eta_quotient(EtaQuotient::level8(), 20000);
    const std::vector<i64> first(level8->values().begin(), level8->values().begin() + 7);
    o.require(first == std::vector<i64>({1, 0, -4, 0, -2, 0, 24}), "b(1..7)");
    o.require(first == oracle::naive_eta_expansion(EtaQuotient::level8(), 7), "naive oracle b(1..7)");
    o.require(level8->b(11) == -44, "b(11)");
    o.require(level8->b(3137) == 66 * 3137, "b(3137)");
    return o;
  });
  if (!level8) level8 = expand_eta_quotient(EtaQuotient::level8(), 20000);
  cm = expand_eta_quotient(EtaQuotient::cm9(), 20000);
  save_table(*level8, cache.path_for(EtaQuotient::level8()));

  criterion(2, "non-ordinary primes below 20000 are {11, 3137}, warm cache < 1 s", 1000, [&] {
    Outcome o;
    bool hit = false;
    const CoeffTable tab = cache.get(EtaQuotient::level8(), 20000, &hit);
    o.require(hit, "cache miss");
    const Report r = level8_search(tab, 20000);
    o.require(r.pass, "search " + r.witness["nonordinary"].dump());
    o.require(nonordinary_search(tab, 19999).nonordinary == std::vector<u64>({11, 3137}), "p < 20000");
    return o;
  });

  criterion(3, "truncated sum = b(p) mod p^3 for odd p <= 499", 60000, [&] {
    Outcome o;
    const Report r = vanhamme_sweep(*level8, 499, 3, width);
    o.require(r.witness["primes_checked"] == 94, "prime count");
    o.require(r.pass, "failures " + r.witness["failures"].dump());
    return o;
  });

  criterion(4, "Q_p mod p zero <=> p | b(p) for odd p <= 199; zero only at 11; Q_3137 = 0 mod 3137", 60000, [&] {
    Outcome o;
    const Report r = divisibility_sweep(*level8, 199, {}, width);
    o.require(r.pass, "failures " + r.witness["failures"].dump());
    o.require(r.witness["zero_polynomial_at"] == json({11}), "zero at " + r.witness["zero_polynomial_at"].dump());
    const Report big = divisibility_equivalence(3137, *level8);
    o.require(big.pass && big.witness["all_coeffs_divisible"].get<bool>(), "p = 3137");
    return o;
  });

  std::vector<Report> structure;

  criterion(5, "companion congruence and degree drop above 2(p-1) for odd p <= 199", 60000, [&] {
    Outcome o;
    structure = qp_structure_sweep(*level8, 199, width);
    o.require(structure[0].check == "companion_sweep" && structure[0].pass, "companion " + structure[0].witness["failures"].dump());
    o.require(structure[1].check == "degree_drop_sweep" && structure[1].pass, "degree " + structure[1].witness["failures"].dump());
    return o;
  });

  criterion(6, "Q_p(0) = b(p) mod p for odd p <= 199; Q_3(0) = 4433 over Z", 0, [&] {
    Outcome o;
    if (structure.size() != 3) structure = qp_structure_sweep(*level8, 199, width);
    o.require(structure[2].check == "constant_term_sweep" && structure[2].pass, "constant term " + structure[2].witness["failures"].dump());
    o.require(build_qp_integer(3).coeff(0) == 4433, "Q_3(0)");
    return o;
  });

  criterion(7, "(1/4,1/3) family: zero for p = 2 mod 3 in [11, 97]; zero iff p | b'(p) for p = 1 mod 3", 0, [&] {
    Outcome o;
    const Report r = cm_family_sweep(*cm, 97, width);
    o.require(r.pass, "failures " + r.witness["failures"].dump());
    for (const auto& p : r.witness["zero_polynomial_at"]) {
      o.require(p.get<u64>() % 3 == 2, "zero at p = 1 mod 3: " + p.dump());
    }
    o.detail = "p = 5 reported: " + r.witness["p5"].dump() + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
  });

  criterion(8, "q-congruence for n in {3,5,7,11,13}; n = 9, 15 reported; prefactor for odd 3 <= n <= 15", 120000, [&] {
    Outcome o;
    std::string composite;
    for (const Report& r : qcong_reports(15, false, width)) {
      const u64 n = r.params["n"].get<u64>();
      if (r.check == "prefactor") {
        o.require(r.pass, "prefactor n = " + std::to_string(n));
      } else if (is_prime(n)) {
        o.require(r.pass, "qcong n = " + std::to_string(n));
      } else {
        composite += (composite.empty() ? "" : ", ") + std::to_string(n) + (r.pass ? " holds" : " fails");
      }
    }
    o.detail = "composite: " + composite + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
  });

  criterion(9, "hypergeometric sum vs 16 L(f,2)/pi^2 within 1e-5 (N = 1e6 + tail, M = 200)", 30000, [&] {
    Outcome o;
    const NumericReport r = verify_lvalue(*level8, 1'000'000, 200, 1e-5);
    char buf[96];
    std::snprintf(buf, sizeof buf, "relative difference %.3Le", r.relative_difference);
    o.require(r.pass, buf);
    if (o.pass) o.detail = buf;
    return o;
  });

  criterion(10, "Hecke relations to 20000, bit-exact cache round trip, oracle cross-checks", 0, [&] {
    Outcome o;
    o.require(hecke_check(*level8, 20000).pass, "Hecke level 8");
    o.require(hecke_check(*cm, 20000).pass, "Hecke CM");

    const fs::path path = cache_dir / "roundtrip.etac";
    save_table(*level8, path);
    const CoeffTable loaded = load_table(path);
    o.require(loaded == *level8, "loaded table differs");
    o.require(serialize_table(loaded) == serialize_table(*level8), "re-serialized bytes differ");

    for (const auto& desc : {EtaQuotient::level8(), EtaQuotient::cm9()}) {
      o.require(expand_eta_quotient(desc, 500).values() == oracle::naive_eta_expansion(desc, 500), "naive expansion " + desc.str());
    }
    for (const auto& params : {HyperParams::half_half(), HyperParams::quarter_third()}) {
      for (u64 p : {3u, 5u, 7u, 11u, 13u}) {
        if (params.denominator_product() % p == 0) continue;
        const mpq_class exact = oracle::exact_truncated_sum(p, quad_of(params));
        for (unsigned r = 1; r <= 3; ++r) {
          o.require(truncated_sum(p, r, params).value() == oracle::reduce_rational(exact, checked_pow(p, r)),
                    "exact sum " + params.str() + " p = " + std::to_string(p));
        }
      }
    }
    for (u64 p : {3u, 5u, 7u, 11u, 13u}) {
      o.require(build_qp_integer(p).reduce_mod(p) == build_qp_mod_p(p), "integer vs modular p = " + std::to_string(p));
    }
    return o;
  });

  fs::remove_all(cache_dir);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
