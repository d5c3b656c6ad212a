#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stirval/stirval.h"

namespace {

using nlohmann::json;

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

struct Failure {
  stv_status status;
};

// Owns a char* handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { stv_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void check(stv_status s) {
  if (s != STV_OK)
    throw Failure{s};
}

int exit_for(stv_status s) { return s == STV_ERR_USAGE || s == STV_ERR_DOMAIN ? kUsage : kFail; }

struct Globals {
  std::string format = "text";
  int precision = 0;
  std::string out;
  std::string invocation;
};

void emit(const Globals& g, std::string body) {
  if (!body.empty() && body.back() != '\n')
    body += '\n';
  if (g.out.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f)
    throw CLI::ValidationError("--out", "cannot open " + g.out);
  f << body;
}

// "lo..hi" or a single value.
std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text, const std::string& name) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    return {std::stoull(text.substr(0, dots)), std::stoull(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw CLI::ValidationError(name, "expected N or LO..HI, got '" + text + "'");
  }
}

bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

// Comma-separated primes, or every prime in LO..HI.
std::vector<unsigned long> parse_primes(const std::string& text) {
  std::vector<unsigned long> primes;
  if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
      primes.push_back(parse_range(item, "--p-range").first);
    return primes;
  }
  const auto [lo, hi] = parse_range(text, "--p-range");
  for (auto n = lo; n <= hi; ++n)
    if (is_prime(n))
      primes.push_back(n);
  return primes;
}

stv_tree_options tree_options(const Globals& g, int depth, int extra, int max_depth) {
  stv_tree_options o;
  stv_tree_options_init(&o);
  o.depth = depth;
  if (extra >= 0)
    o.extra = extra;
  if (max_depth > 0)
    o.max_depth = max_depth;
  if (g.precision > 0) {
    o.precision = g.precision;
    if (o.max_precision < g.precision)
      o.max_precision = g.precision;
  }
  o.invocation = g.invocation.c_str();
  return o;
}

int report_exit(const Globals& g, stv_report* report) {
  Text text;
  const stv_status s = stv_report_export(report, g.format.c_str(), &text.p);
  const int passed = stv_report_passed(report);
  stv_report_destroy(report);
  check(s);
  emit(g, text.str());
  return passed ? kPass : kFail;
}

} // namespace

int main(int argc, char** argv) {
  Globals g;
  for (int i = 0; i < argc; ++i)
    g.invocation += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"p-adic valuations of Stirling numbers of the second kind"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(stv_version()));
  app.add_option("--format", g.format, "text, json, dot or csv")
      ->check(CLI::IsMember({"text", "json", "dot", "csv"}));
  app.add_option("--precision", g.precision, "working p-adic precision in digits")
      ->envname("STIRVAL_PRECISION")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write output to FILE instead of stdout");

  int result = kPass;

  auto* stirling = app.add_subcommand("stirling", "S(n, k), exactly or modulo p^m");
  std::string s_n;
  std::uint64_t s_k = 0;
  std::vector<unsigned long> s_mod;
  stirling->add_option("n", s_n)->required();
  stirling->add_option("k", s_k)->required();
  stirling->add_option("--mod", s_mod, "P M")->expected(2);
  stirling->callback([&] {
    Text t;
    if (s_mod.empty()) {
      std::uint64_t n = 0;
      try {
        n = std::stoull(s_n);
      } catch (const std::exception&) {
        throw CLI::ValidationError("n", "not a non-negative integer: " + s_n);
      }
      check(stv_stirling(n, s_k, &t.p));
    } else {
      check(stv_stirling_mod(s_n.c_str(), s_k, s_mod[0], static_cast<int>(s_mod[1]), &t.p));
    }
    if (g.format == "json") {
      json j{{"n", s_n}, {"k", s_k}, {"value", t.str()}};
      if (!s_mod.empty())
        j["modulus"] = {{"p", s_mod[0]}, {"m", s_mod[1]}};
      emit(g, j.dump(2));
    } else {
      emit(g, t.str());
    }
  });

  auto* valuation = app.add_subcommand("valuation", "v_p(S(n, k)), or a CSV table with --to");
  unsigned long v_p = 0;
  std::string v_n;
  std::uint64_t v_k = 0;
  std::optional<std::uint64_t> v_to;
  valuation->add_option("p", v_p)->required();
  valuation->add_option("n", v_n)->required();
  valuation->add_option("k", v_k)->required();
  valuation->add_option("--to", v_to, "tabulate n .. TO");
  valuation->callback([&] {
    if (v_to) {
      if (g.format != "csv" && g.format != "text")
        throw CLI::ValidationError("--format", "tables are CSV only");
      std::uint64_t from = 0;
      try {
        from = std::stoull(v_n);
      } catch (const std::exception&) {
        throw CLI::ValidationError("n", "not a non-negative integer: " + v_n);
      }
      Text t;
      check(stv_valuation_table(v_p, v_k, from, *v_to, &t.p));
      emit(g, t.str());
      return;
    }
    std::int64_t v = 0;
    int inf = 0;
    check(stv_valuation(v_p, v_n.c_str(), v_k, &v, &inf));
    const std::string shown = inf ? "inf" : std::to_string(v);
    if (g.format == "json")
      emit(g, json{{"p", v_p}, {"n", v_n}, {"k", v_k}, {"valuation", inf ? json("inf") : json(v)}}.dump(2));
    else
      emit(g, shown);
  });

  auto* tree = app.add_subcommand("tree", "constant / non-constant class tree of v_p(S(n, k))");
  unsigned long t_p = 0;
  std::uint64_t t_k = 0;
  int t_depth = 0, t_extra = -1, t_max_depth = 0;
  tree->add_option("p", t_p)->required();
  tree->add_option("k", t_k)->required();
  tree->add_option("--depth", t_depth, "fixed depth; 0 deepens adaptively");
  tree->add_option("--extra", t_extra, "levels past m0_observed in adaptive mode");
  tree->add_option("--max-depth", t_max_depth);
  tree->callback([&] {
    const stv_tree_options o = tree_options(g, t_depth, t_extra, t_max_depth);
    stv_tree* handle = nullptr;
    check(stv_tree_build(t_p, t_k, &o, &handle));
    Text t;
    const stv_status s = stv_tree_export(handle, g.format.c_str(), &t.p);
    stv_tree_destroy(handle);
    check(s);
    emit(g, t.str());
  });

  auto* zero = app.add_subcommand("zero", "zero of the analytic interpolation f_{a0,k}");
  unsigned long z_p = 0;
  std::uint64_t z_k = 0;
  unsigned z_a0 = 0;
  int z_digits = 20;
  zero->add_option("p", z_p)->required();
  zero->add_option("k", z_k)->required();
  zero->add_option("--a0", z_a0, "residue class of n")->required();
  zero->add_option("--prec", z_digits, "digits of the zero")->check(CLI::PositiveNumber);
  zero->callback([&] {
    Text t;
    check(stv_zero(z_p, z_k, z_a0, z_digits, g.precision, g.format.c_str(), &t.p));
    emit(g, t.str());
  });

  auto* verify = app.add_subcommand("verify", "check a claim and report pass / fail");
  std::string claim;
  json params = json::object();
  verify->add_option("claim", claim)
      ->required()
      ->check(CLI::IsMember({"lengwan", "geslen", "final", "conjecture", "remark", "period", "decomposition", "all"}));
  auto int_param = [&](const char* flag, const char* key, const char* help) {
    verify->add_option_function<std::int64_t>(flag, [&params, key](std::int64_t v) { params[key] = v; }, help);
  };
  int_param("--kmax", "k_max", "largest k");
  int_param("--nmax", "n_max", "largest n");
  int_param("--p", "p", "prime");
  int_param("--k", "k", "k");
  int_param("--a", "a", "residue a");
  int_param("--s-max", "s_max", "largest s");
  int_param("--depth", "depth", "tree depth");
  int_param("--extra", "extra", "levels past m0_observed");
  int_param("--m", "m", "exponent of the modulus p^m");
  int_param("--witness-range", "witness_range", "n values checked per period");
  int_param("--offset", "offset", "first n checked");
  verify->add_option_function<std::string>(
      "--b", [&](const std::string& v) { params["b"] = v; }, "integer b of the remark");
  verify->add_option_function<std::string>(
      "--a-range", [&](const std::string& v) {
        const auto [lo, hi] = parse_range(v, "--a-range");
        params["a_lo"] = lo;
        params["a_hi"] = hi;
      }, "LO..HI");
  verify->add_option_function<std::string>(
      "--n-range", [&](const std::string& v) {
        const auto [lo, hi] = parse_range(v, "--n-range");
        params["n_lo"] = lo;
        params["n_hi"] = hi;
      }, "LO..HI");
  verify->add_option_function<std::string>(
      "--primes", [&](const std::string& v) { params["primes"] = parse_primes(v); }, "comma list or LO..HI");
  verify->callback([&] {
    if (g.precision > 0)
      params["precision"] = g.precision;
    if (claim == "remark" && params.contains("a"))
      params["a"] = std::to_string(params["a"].get<std::int64_t>());
    stv_report* report = nullptr;
    check(stv_verify(claim.c_str(), params.dump().c_str(), &report));
    result = report_exit(g, report);
  });

  auto* sweep = app.add_subcommand("sweep", "search for chains with slope above one");
  std::string p_range = "2..7", k_range = "1..10";
  int sw_extra = -1;
  sweep->add_option("--p-range", p_range, "comma list or LO..HI");
  sweep->add_option("--k-range", k_range, "LO..HI");
  sweep->add_option("--extra", sw_extra, "levels past m0_observed");
  sweep->callback([&] {
    json j{{"primes", parse_primes(p_range)}};
    const auto [lo, hi] = parse_range(k_range, "--k-range");
    j["k_lo"] = lo;
    j["k_hi"] = hi;
    if (sw_extra >= 0)
      j["extra"] = sw_extra;
    if (g.precision > 0)
      j["precision"] = g.precision;
    stv_report* report = nullptr;
    check(stv_sweep(j.dump().c_str(), &report));
    result = report_exit(g, report);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  } catch (const Failure& f) {
    std::cerr << "stirval: " << stv_status_name(f.status) << ": " << stv_last_error() << "\n";
    return exit_for(f.status);
  } catch (const json::exception& e) {
    std::cerr << "stirval: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "stirval: " << e.what() << "\n";
    return kFail;
  }
  return result;
}
