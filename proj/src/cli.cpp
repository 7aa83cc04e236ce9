#include "branchkh/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "branchkh/cache.hpp"
#include "branchkh/generators.hpp"
#include "branchkh/invariants.hpp"
#include "branchkh/kh.hpp"
#include "branchkh/surgery.hpp"
#include "branchkh/verify.hpp"

namespace branchkh {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "-" reads the input stream, an existing path reads the file, anything else
// is taken as PD text.
Diagram read_diagram(const std::string& arg, std::istream& in) {
  std::string text;
  if (arg == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (std::error_code ec; std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream f(arg);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  } else {
    text = arg;
  }
  Diagram d = [&] {
    try {
      return parse_pd(text);
    } catch (const DiagramError& e) {
      throw UsageError(e.what());
    }
  }();
  ValidationReport r = validate(d);
  if (!r.ok) {
    std::string msg = "invalid diagram:";
    for (const auto& p : r.problems) msg += " " + p + ";";
    throw UsageError(msg);
  }
  return d;
}

SurgerySign parse_sign(const std::string& s) {
  if (s == "+" || s == "+1" || s == "plus") return SurgerySign::Plus;
  if (s == "-" || s == "-1" || s == "minus") return SurgerySign::Minus;
  throw UsageError("sign must be + or -, got '" + s + "'");
}

int to_int(const std::string& s) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("expected an integer, got '" + s + "'");
  }
}

Diagram generate(const std::vector<std::string>& spec) {
  if (spec.empty()) throw UsageError("gen needs a family: torus P Q | tau R/S | seifert-branch Q N +/-");
  const std::string& fam = spec[0];
  try {
    if (fam == "torus" && spec.size() == 3) return torus_knot(to_int(spec[1]), to_int(spec[2]));
    if (fam == "tau" && spec.size() == 2) return tau(Slope::parse(spec[1]));
    if (fam == "seifert-branch" && spec.size() == 4) {
      return seifert_branch_set(to_int(spec[1]), to_int(spec[2]), parse_sign(spec[3]));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown family or wrong argument count: " + fam);
}

std::string claim_line(const ClaimRecord& c) {
  std::ostringstream os;
  os << status_name(c.status) << " [tier " << c.tier << "] " << c.description;
  if (c.computed) {
    if (c.kind == ClaimKind::Equal) {
      os << " (computed " << *c.computed << ")";
    } else {
      os << " (" << *c.computed << " vs " << c.expected << ")";
    }
  }
  if (!c.note.empty()) os << " -- " << c.note;
  return os.str();
}

nlohmann::ordered_json claim_json(const ClaimRecord& c) {
  nlohmann::ordered_json j;
  j["description"] = c.description;
  j["kind"] = c.kind == ClaimKind::Equal ? "equal" : "unequal";
  j["expected"] = c.expected;
  j["computed"] = c.computed ? nlohmann::ordered_json(*c.computed) : nlohmann::ordered_json();
  j["status"] = status_name(c.status);
  j["tier"] = c.tier;
  j["seconds"] = c.seconds;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

bool write_json_file(const std::string& path, const std::string& text, std::ostream& err) {
  if (path == "-") return false;
  std::ofstream f(path);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text << "\n";
  return true;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Khovanov homology of branch sets of double branched covers", "branchkh"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string cache_dir;
  bool no_cache = false;
  int64_t max_generators = 4'000'000;
  int threads = 1;
  app.add_option("--cache-dir", cache_dir, "result cache directory");
  app.add_flag("--no-cache", no_cache, "do not read or write the result cache");
  app.add_option("--max-generators", max_generators, "generator ceiling for scanning")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "worker threads for independent computations")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen", "print a PD code: torus P Q | tau R/S | seifert-branch Q N +/-");
  std::vector<std::string> gen_spec;
  gen->add_option("family", gen_spec)->required()->allow_extra_args();
  gen->prefix_command();

  auto* kh = app.add_subcommand("kh", "Khovanov homology ranks over F2");
  bool reduced = false, unreduced = false, kh_json = false;
  std::string kh_input = "-";
  auto* red_flag = kh->add_flag("--reduced", reduced, "reduced homology (default)");
  kh->add_flag("--unreduced", unreduced, "unreduced homology")->excludes(red_flag);
  kh->add_flag("--json", kh_json, "emit JSON");
  kh->add_option("input", kh_input, "PD text, a file, or - for standard input");

  auto* det = app.add_subcommand("det", "determinant via the Goeritz matrix");
  std::string det_input = "-";
  det->add_option("input", det_input, "PD text, a file, or -");

  auto* jones = app.add_subcommand("jones", "Jones polynomial in q (t = q^2)");
  std::string jones_input = "-";
  bool jones_text = false;
  jones->add_option("input", jones_input, "PD text, a file, or -");
  jones->add_flag("--text", jones_text, "print as a polynomial instead of [[exponent, coefficient], ...]");

  auto* table = app.add_subcommand("surgery-table", "branch-set correspondence rows for +/-1/n surgery on T(2,q)");
  int64_t table_q = 5, table_n = 2;
  bool table_csv = false;
  table->add_option("--q", table_q, "odd q > 1");
  table->add_option("--n-max", table_n, "largest n");
  table->add_flag("--csv", table_csv, "emit CSV instead of JSON");

  auto* verify = app.add_subcommand("verify-paper", "recompute the published ranks and determinants");
  int tier = 2;
  std::string verify_json;
  bool strict = false;
  verify->add_option("--tier", tier, "cost ceiling 1, 2 or 3")->check(CLI::Range(1, 3));
  verify->add_option("--json", verify_json, "also write the records as JSON to this file");
  verify->add_flag("--strict", strict, "treat skipped claims as failures");

  auto* les = app.add_subcommand("les-check", "rank bounds for tau(+/-1/n) from the exact triangle");
  int64_t les_n = 2;
  bool les_json = false;
  les->add_option("--n-max", les_n, "largest n")->check(CLI::PositiveNumber);
  les->add_flag("--json", les_json, "emit JSON");

  auto* growth = app.add_subcommand("growth", "reduced ranks of T(5,q)");
  std::vector<int64_t> growth_q{9, 11, 19, 21};
  bool growth_json = false;
  growth->add_option("--q", growth_q, "values of q")->delimiter(',');
  growth->add_flag("--json", growth_json, "emit JSON");

  // CLI11 reports a stray word as a missing subcommand; name it instead.
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.empty() || a[0] == '-') continue;
    bool option_value = i > 0 && (args[i - 1] == "--cache-dir" || args[i - 1] == "--max-generators" ||
                                  args[i - 1] == "--threads");
    if (option_value) continue;
    if (!app.get_subcommand_no_throw(a)) {
      err << "error: unknown subcommand '" << a << "'\n";
      return 2;
    }
    break;
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  VerifyOptions vopts;
  vopts.max_generators = max_generators;
  vopts.threads = threads;

  try {
    if (gen->parsed()) {
      out << render(generate(gen_spec)) << "\n";
      return 0;
    }
    if (kh->parsed()) {
      Flavor flavor = unreduced ? Flavor::Unreduced : Flavor::Reduced;
      Diagram d = read_diagram(kh_input, in);
      std::string digest = diagram_digest(d);
      std::optional<ResultCache> cache;
      if (!no_cache) {
        cache.emplace(cache_dir.empty() ? ResultCache::default_dir() : std::filesystem::path(cache_dir));
        if (!cache->enabled()) err << "warning: " << cache->warning() << "\n";
      }
      KhRanks ranks;
      if (auto hit = cache ? cache->get(digest, flavor) : std::nullopt) {
        ranks = hit->ranks;
      } else {
        auto t0 = std::chrono::steady_clock::now();
        ScanOptions so;
        so.max_generators = max_generators;
        ranks = scan_ranks(d, flavor, so);
        CacheEntry e;
        e.digest = digest;
        e.flavor = flavor;
        e.ranks = ranks;
        e.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cache) cache->put(e);
      }
      if (kh_json) {
        out << ranks_to_json(ranks, digest, flavor_name(flavor)) << "\n";
      } else {
        out << ranks_to_text(ranks);
      }
      return 0;
    }
    if (det->parsed()) {
      out << determinant(read_diagram(det_input, in)) << "\n";
      return 0;
    }
    if (jones->parsed()) {
      LaurentPoly p = jones_polynomial(read_diagram(jones_input, in));
      if (jones_text) {
        out << p.str("q") << "\n";
      } else {
        nlohmann::json j = nlohmann::json::array();
        for (auto [e, c] : p.coefficient_list()) j.push_back({e, c});
        out << j.dump() << "\n";
      }
      return 0;
    }
    if (table->parsed()) {
      if (table_n < 1) throw UsageError("--n-max must be positive");
      std::vector<std::tuple<int64_t, SurgerySign, CorrespondenceRow>> rows;
      for (int64_t n = 1; n <= table_n; ++n) {
        for (auto sign : {SurgerySign::Plus, SurgerySign::Minus}) {
          try {
            rows.emplace_back(n, sign, correspondence_row(table_q, n, sign));
          } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
          }
        }
      }
      if (table_csv) {
        out << "q,n,sign,orbifold,torus_branch_set,tau_slope,determinant\n";
        for (const auto& [n, sign, r] : rows) {
          out << table_q << "," << n << "," << sign_symbol(sign) << "," << r.orbifold.str() << ","
              << r.torus_name() << "," << r.tau_slope.str() << "," << r.expected_determinant << "\n";
        }
      } else {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& [n, sign, r] : rows) {
          nlohmann::ordered_json o;
          o["q"] = table_q;
          o["n"] = n;
          o["sign"] = sign_symbol(sign);
          o["orbifold"] = r.orbifold.str();
          o["cone_orders"] = r.orbifold.orders;
          o["torus_branch_set"] = r.torus_name();
          o["tau_slope"] = r.tau_slope.str();
          o["determinant"] = r.expected_determinant;
          j.push_back(o);
        }
        out << j.dump(2) << "\n";
      }
      return 0;
    }
    if (verify->parsed()) {
      auto records = reproduce_paper(tier, vopts);
      int pass = 0, fail = 0, skip = 0;
      nlohmann::ordered_json j = nlohmann::ordered_json::array();
      for (const auto& c : records) {
        out << claim_line(c) << "\n";
        j.push_back(claim_json(c));
        if (c.status == ClaimStatus::Pass) ++pass;
        if (c.status == ClaimStatus::Fail) ++fail;
        if (c.status == ClaimStatus::Skipped) ++skip;
      }
      out << pass << " passed, " << fail << " failed, " << skip << " skipped\n";
      if (!verify_json.empty()) write_json_file(verify_json, j.dump(2), err);
      return (fail > 0 || (strict && skip > 0)) ? 1 : 0;
    }
    if (les->parsed()) {
      LesReport rep = les_bound_check(les_n, vopts);
      if (les_json) {
        nlohmann::ordered_json j;
        j["tau0_rank"] = rep.tau0_rank;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : rep.rows) {
          nlohmann::ordered_json o;
          o["n"] = r.n;
          o["sign"] = sign_symbol(r.sign);
          o["rank"] = r.rank ? nlohmann::ordered_json(*r.rank) : nlohmann::ordered_json();
          o["closed_bound"] = r.closed_bound;
          o["recursive_bound"] =
              r.recursive_bound ? nlohmann::ordered_json(*r.recursive_bound) : nlohmann::ordered_json();
          o["holds"] = r.holds;
          o["equality"] = r.equality;
          if (!r.note.empty()) o["note"] = r.note;
          j["rows"].push_back(o);
        }
        j["all_hold"] = rep.all_hold;
        out << j.dump(2) << "\n";
      } else {
        out << "rank tau(0) = " << rep.tau0_rank << "\n";
        for (const auto& r : rep.rows) {
          out << "n=" << r.n << " " << sign_symbol(r.sign) << ": ";
          if (!r.rank) {
            out << "unavailable (" << r.note << ")\n";
            continue;
          }
          out << "rank " << *r.rank << " <= " << r.closed_bound << " (closed form)";
          if (r.recursive_bound) {
            out << ", <= " << *r.recursive_bound << " (recursive)";
          } else {
            out << ", anchor";
          }
          out << (r.holds ? " holds" : " VIOLATED") << (r.equality ? ", equality" : "") << "\n";
        }
      }
      return rep.all_hold ? 0 : 1;
    }
    if (growth->parsed()) {
      auto pts = growth_probe(growth_q, vopts);
      if (growth_json) {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& g : pts) {
          nlohmann::ordered_json o;
          o["q"] = g.q;
          o["rank"] = g.rank ? nlohmann::ordered_json(*g.rank) : nlohmann::ordered_json();
          o["difference"] = g.difference ? nlohmann::ordered_json(*g.difference) : nlohmann::ordered_json();
          if (!g.note.empty()) o["note"] = g.note;
          j.push_back(o);
        }
        out << j.dump(2) << "\n";
      } else {
        out << std::setw(5) << "q" << std::setw(8) << "rank" << std::setw(8) << "diff" << "\n";
        for (const auto& g : pts) {
          out << std::setw(5) << g.q;
          if (g.rank) {
            out << std::setw(8) << *g.rank;
            if (g.difference) out << std::setw(8) << *g.difference;
          } else {
            out << "  -- " << g.note;
          }
          out << "\n";
        }
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace branchkh
