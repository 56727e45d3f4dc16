#ifndef NONORD_CLI_HPP
#define NONORD_CLI_HPP

// Command line front end. Every check prints one JSON object per line to the
// output stream; the exit code is 0 when every asserted check passed, 1 when
// any failed, and 2 for usage or configuration errors.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nonord/suite.hpp"

namespace nonord {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

namespace detail {

class Emitter {
 public:
  explicit Emitter(std::ostream& out) : out_(out) {}

  void emit(Report r) {
    out_ << r.to_json().dump() << '\n';
    reports_.push_back(std::move(r));
  }
  void emit(std::vector<Report> rs) {
    for (auto& r : rs) emit(std::move(r));
  }

  const std::vector<Report>& reports() const { return reports_; }
  int exit_code() const { return all_pass(reports_) ? kExitPass : kExitFail; }

 private:
  std::ostream& out_;
  std::vector<Report> reports_;
};

inline HyperParams parse_params(const std::string& s1, const std::string& s2) {
  return HyperParams(RationalParam::parse(s1), RationalParam::parse(s2));
}

/// The newform attached to a parameter pair, when one ships with the suite.
inline std::optional<EtaQuotient> form_for(const HyperParams& params) {
  const RationalParam half(1, 2), quarter(1, 4), third(1, 3);
  auto is = [&](const RationalParam& a, const RationalParam& b) {
    // the quadruple is invariant under s -> 1-s and swapping, so compare sets
    auto norm = [](RationalParam r) { return r < r.one_minus() ? r : r.one_minus(); };
    const RationalParam x = norm(params.s1()), y = norm(params.s2());
    return (x == a && y == b) || (x == b && y == a);
  };
  if (is(half, half)) return EtaQuotient::level8();
  if (is(quarter, third)) return EtaQuotient::cm9();
  return std::nullopt;
}

inline Report qp_integer_report(u64 p, u64 cap, const std::filesystem::path* csv) {
  Stopwatch clock;
  const BigPoly q = build_qp_integer(p, cap);
  mpz_class expected_lead;
  mpz_ui_pow_ui(expected_lead.get_mpz_t(), 2, 4 * (p - 1));
  expected_lead *= static_cast<unsigned long>(p);
  const bool degree_ok = q.degree() == static_cast<long>(4 * (p - 1));
  const bool lead_ok = q.leading() == expected_lead;
  const bool reduction_ok = q.reduce_mod(p) == build_qp_mod_p(p);
  if (csv) write_poly_csv(q, *csv);

  Report r;
  r.check = "qp_integer";
  r.params = {{"p", p}};
  r.pass = degree_ok && lead_ok && reduction_ok;
  r.witness = {{"degree", q.degree()},
               {"leading", q.leading().get_str()},
               {"constant_term", q.coeff(0).get_str()},
               {"reduction_matches_mod_p", reduction_ok}};
  r.runtime_ms = clock.elapsed_ms();
  return r;
}

inline void write_aggregate(const std::vector<Report>& reports, const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  f << json{{"pass", all_pass(reports)}, {"reports", arr}}.dump(2) << '\n';
  if (!f) throw Error(Errc::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace detail

inline int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification suite for non-ordinary primes of weight 4 eta-quotient newforms", "nonord"};
  app.require_subcommand(1);

  SuiteConfig config;
  std::string cache_dir = config.cache_dir.string();
  app.add_option("--cache-dir", cache_dir, "Coefficient cache directory (env NONORD_CACHE_DIR)");
  app.add_option("--jobs", config.width, "Parallel workers")->check(CLI::PositiveNumber);

  std::string form = "8-4";
  u64 limit = 0;
  std::string out_path, csv_path, dump_path, report_path;
  auto* expand = app.add_subcommand("expand", "Expand an eta quotient and store its coefficient table");
  expand->add_option("--form", form, "8-4 | 9-4-cm | \"(d,r);(d,r)\"");
  expand->add_option("--limit", limit, "Number of coefficients")->required();
  expand->add_option("--out", out_path, "Binary table output (default: cache)");
  expand->add_option("--csv", csv_path, "CSV export n,b");

  u64 bound = 20000;
  auto* search = app.add_subcommand("search", "List non-ordinary primes up to a bound");
  search->add_option("--bound", bound, "Search bound");
  search->add_option("--form", form, "8-4 | 9-4-cm | \"(d,r);(d,r)\"");

  u64 pmax = 499;
  unsigned power = 3;
  auto* vanhamme = app.add_subcommand("vanhamme", "Truncated sum = b(p) mod p^power for odd primes up to pmax");
  vanhamme->add_option("--pmax", pmax, "Largest prime");
  vanhamme->add_option("--power", power, "Prime power of the modulus")->check(CLI::Range(1u, 3u));

  u64 p = 0;
  u64 integer_cap = kDefaultIntegerCap;
  bool integer = false;
  auto* qp = app.add_subcommand("qp", "Build Q_p(a) mod p and check the divisibility criterion");
  qp->add_option("--p", p, "Odd prime")->required();
  qp->add_flag("--integer", integer, "Also build Q_p over Z (small p)");
  qp->add_option("--integer-cap", integer_cap, "Largest p for the integer build");
  qp->add_option("--csv", csv_path, "CSV dump degree,coefficient");

  std::string s1, s2;
  auto* family = app.add_subcommand("family", "Family polynomial for parameters (s1, s2) mod p");
  family->add_option("--s1", s1, "Rational n/d in (0,1)")->required();
  family->add_option("--s2", s2, "Rational n/d in (0,1)")->required();
  family->add_option("--p", p, "Prime")->required();
  family->add_option("--csv", csv_path, "CSV dump degree,coefficient");

  u64 n = 0;
  u64 qcong_cap = kDefaultQcongCap;
  bool prefactor_only = false;
  auto* qcong = app.add_subcommand("qcong", "Cyclotomic q-congruence in Z[a][q]/Phi_n(q)");
  qcong->add_option("--n", n, "Odd n >= 3")->required();
  qcong->add_flag("--prefactor-only", prefactor_only, "Only the prefactor identity");
  qcong->add_option("--cap", qcong_cap, "Largest n allowed");
  qcong->add_option("--dump", dump_path, "CSV dump of lhs - rhs");

  u64 terms = kDefaultHyperTerms, cutoff = kDefaultLCutoff;
  double tol = kDefaultLValueTolerance;
  auto* lvalue = app.add_subcommand("lvalue", "Hypergeometric sum versus 16 L(f,2)/pi^2");
  lvalue->add_option("--terms", terms, "Terms of the hypergeometric sum");
  lvalue->add_option("--cutoff", cutoff, "Terms of the L-value series");
  lvalue->add_option("--tol", tol, "Relative tolerance");

  auto* all = app.add_subcommand("all", "Run every check with default bounds");
  all->add_option("--report", report_path, "Aggregate JSON report file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitPass;
    }
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  detail::Emitter emitter(out);
  try {
    config.cache_dir = cache_dir;
    config.validate();
    TableCache cache(config.cache_dir);

    if (expand->parsed()) {
      Stopwatch clock;
      const EtaQuotient desc = EtaQuotient::parse(form);
      const CoeffTable tab = expand_eta_quotient(desc, limit);
      std::filesystem::path target = out_path.empty() ? cache.path_for(desc) : std::filesystem::path(out_path);
      if (out_path.empty()) std::filesystem::create_directories(config.cache_dir);
      save_table(tab, target);
      if (!csv_path.empty()) write_table_csv(tab, std::filesystem::path(csv_path));
      json first = json::array();
      for (u64 i = 1; i <= std::min<u64>(limit, 12); ++i) first.push_back(tab.b(i));
      Report r;
      r.check = "expand";
      r.params = {{"form", desc.str()}, {"limit", limit}};
      r.pass = desc.shift() <= limit && tab.b(desc.shift()) == 1;
      r.witness = {{"shift", desc.shift()},
                   {"level", desc.level()},
                   {"weight", desc.weight()},
                   {"first_coefficients", first},
                   {"out", target.string()}};
      r.runtime_ms = clock.elapsed_ms();
      emitter.emit(std::move(r));
    } else if (search->parsed()) {
      const EtaQuotient desc = EtaQuotient::parse(form);
      const CoeffTable tab = cache.get(desc, bound);
      emitter.emit(desc == EtaQuotient::level8() ? level8_search(tab, bound) : search_report(tab, bound));
    } else if (vanhamme->parsed()) {
      const CoeffTable tab = cache.get(EtaQuotient::level8(), std::max<u64>(pmax, 3));
      emitter.emit(vanhamme_sweep(tab, pmax, power, config.width));
    } else if (qp->parsed()) {
      nonord::detail::require_odd_prime(p);
      const CoeffTable tab = cache.get(EtaQuotient::level8(), p);
      emitter.emit(divisibility_equivalence(p, tab));
      emitter.emit(companion_check(p, tab));
      const std::filesystem::path csv(csv_path);
      if (integer) {
        emitter.emit(detail::qp_integer_report(p, integer_cap, csv_path.empty() ? nullptr : &csv));
      } else if (!csv_path.empty()) {
        write_poly_csv(build_qp_mod_p(p), csv);
      }
    } else if (family->parsed()) {
      const HyperParams params = detail::parse_params(s1, s2);
      std::optional<CoeffTable> tab;
      if (auto desc = detail::form_for(params)) tab = cache.get(*desc, std::max<u64>(p, 1));
      emitter.emit(family_report(p, params, tab ? &*tab : nullptr));
      if (!csv_path.empty()) write_poly_csv(build_family_mod_p(p, params), std::filesystem::path(csv_path));
    } else if (qcong->parsed()) {
      emitter.emit(verify_prefactor(n));
      if (!prefactor_only) {
        const std::filesystem::path dump(dump_path);
        Report r = verify_qcong(n, qcong_cap, dump_path.empty() ? nullptr : &dump);
        r.params["asserted"] = r.params["prime_n"].get<bool>();
        emitter.emit(std::move(r));
      }
    } else if (lvalue->parsed()) {
      const CoeffTable tab = cache.get(EtaQuotient::level8(), std::max<u64>(cutoff, 1));
      emitter.emit(verify_lvalue(tab, terms, cutoff, tol).to_report());
    } else if (all->parsed()) {
      emitter.emit(run_all(config));
      if (!report_path.empty()) detail::write_aggregate(emitter.reports(), report_path);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "IoFailure: " << e.what() << '\n';
    return kExitUsage;
  }
  return emitter.exit_code();
}

inline int run_subcommand(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_subcommand(args, out, err);
}

}  // namespace nonord

#endif  // NONORD_CLI_HPP
