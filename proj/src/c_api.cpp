#include "stirval/stirval.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "stirval/errors.hpp"
#include "stirval/report_io.hpp"
#include "stirval/stirling.hpp"
#include "stirval/verifiers.hpp"

struct stv_tree {
  stirval::TreeReport report;
};

struct stv_report {
  stirval::VerifierReport report;
  std::string outcome;
};

namespace {

using nlohmann::json;
using namespace stirval;

thread_local std::string last_error;

stv_status record(stv_status status, const char* message) {
  last_error = message;
  return status;
}

template <typename F>
stv_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return STV_OK;
  } catch (const DomainError& e) {
    return record(STV_ERR_DOMAIN, e.what());
  } catch (const NotInvertibleError& e) {
    return record(STV_ERR_NOT_INVERTIBLE, e.what());
  } catch (const PrecisionError& e) {
    return record(STV_ERR_PRECISION, e.what());
  } catch (const ResourceError& e) {
    return record(STV_ERR_RESOURCE, e.what());
  } catch (const NotStabilizedError& e) {
    return record(STV_ERR_NOT_STABILIZED, e.what());
  } catch (const UsageError& e) {
    return record(STV_ERR_USAGE, e.what());
  } catch (const json::exception& e) {
    return record(STV_ERR_USAGE, e.what());
  } catch (const std::bad_alloc&) {
    return record(STV_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return record(STV_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(STV_ERR_INTERNAL, "unknown failure");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr)
    throw UsageError(std::string(what) + " is NULL");
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Integer parse_integer(const char* text, const char* what) {
  require(text, what);
  Integer x;
  if (x.set_str(text, 10) != 0)
    throw DomainError(std::string(what) + " is not a decimal integer: '" + text + "'");
  return x;
}

TreeOptions tree_options(const stv_tree_options* o) {
  TreeOptions t;
  if (o == nullptr)
    return t;
  t.depth = o->depth;
  t.extra = o->extra;
  t.max_depth = o->max_depth;
  if (o->precision > 0)
    t.precision = o->precision;
  if (o->max_precision > 0)
    t.max_precision = o->max_precision;
  if (t.depth < 0 || t.extra < 0 || t.max_depth < 0)
    throw DomainError("negative tree option");
  return t;
}

template <typename T>
T param(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

TreeOptions tree_params(const json& j) {
  TreeOptions t;
  t.depth = param(j, "depth", 0);
  t.extra = param(j, "extra", t.extra);
  t.max_depth = param(j, "max_depth", t.max_depth);
  t.precision = param(j, "precision", t.precision);
  t.max_precision = std::max(param(j, "max_precision", t.max_precision), t.precision);
  return t;
}

VerifierReport dispatch(const std::string& claim, const json& j) {
  if (claim == "lengwan")
    return verify_lengyel_wannemacker(param<std::uint64_t>(j, "k_max", 30), param<std::uint64_t>(j, "n_max", 20));
  if (claim == "geslen") {
    Range a{param<std::uint64_t>(j, "a_lo", 0), param<std::uint64_t>(j, "a_hi", 0)};
    Range n{param<std::uint64_t>(j, "n_lo", 0), param<std::uint64_t>(j, "n_hi", 0)};
    return verify_gessel_lengyel(Prime(j.at("p").get<unsigned long>()), j.at("k").get<std::uint64_t>(), a, n);
  }
  if (claim == "final")
    return verify_final_theorem(Prime(j.at("p").get<unsigned long>()), j.at("k").get<std::uint64_t>(),
                                j.at("a").get<std::uint64_t>(), param(j, "s_max", 8), tree_params(j));
  if (claim == "conjecture")
    return verify_conjecture_structure(Prime(j.at("p").get<unsigned long>()), j.at("k").get<std::uint64_t>(),
                                       tree_params(j));
  if (claim == "remark")
    return reproduce_multiplicity_remark(Prime(param<unsigned long>(j, "p", 3)),
                                         Integer(param<std::string>(j, "a", "4")),
                                         Integer(param<std::string>(j, "b", "7")), param(j, "depth", 10));
  if (claim == "period")
    return verify_period(Prime(j.at("p").get<unsigned long>()), j.at("k").get<std::uint64_t>(), j.at("m").get<int>(),
                         param<std::uint64_t>(j, "witness_range", 100), param<std::uint64_t>(j, "offset", 0));
  if (claim == "decomposition")
    return verify_decomposition(param<std::uint64_t>(j, "n_max", 40), param<std::uint64_t>(j, "k_max", 12),
                                param<std::vector<unsigned long>>(j, "primes", {2, 3, 5}));
  if (claim == "all")
    return verify_all();
  throw UsageError("unknown claim '" + claim + "'");
}

json parse_params(const char* text) {
  if (text == nullptr || *text == '\0')
    return json::object();
  json j = json::parse(text);
  if (!j.is_object())
    throw UsageError("parameters must be a JSON object");
  return j;
}

} // namespace

extern "C" {

const char* stv_last_error(void) { return last_error.c_str(); }

const char* stv_status_name(stv_status status) {
  switch (status) {
  case STV_OK:
    return "ok";
  case STV_ERR_DOMAIN:
    return "domain error";
  case STV_ERR_NOT_INVERTIBLE:
    return "not invertible";
  case STV_ERR_PRECISION:
    return "precision error";
  case STV_ERR_RESOURCE:
    return "resource error";
  case STV_ERR_NOT_STABILIZED:
    return "not stabilized";
  case STV_ERR_USAGE:
    return "usage error";
  case STV_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char* stv_version(void) { return "0.1.0"; }

void stv_string_free(char* s) { std::free(s); }

stv_status stv_stirling(uint64_t n, uint64_t k, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = copy_out(stirling_exact(n, k).get_str());
  });
}

stv_status stv_stirling_mod(const char* n, uint64_t k, unsigned long p, int m, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = copy_out(stirling_mod(parse_integer(n, "n"), k, Prime(p), m).get_str());
  });
}

stv_status stv_t_p(uint64_t n, uint64_t k, unsigned long p, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = copy_out(t_p_exact(n, k, Prime(p)).get_str());
  });
}

stv_status stv_valuation(unsigned long p, const char* n, uint64_t k, int64_t* out, int* is_infinite) {
  return guarded([&] {
    require(out, "out");
    require(is_infinite, "is_infinite");
    const Valuation v = stirling_valuation(Prime(p), parse_integer(n, "n"), k);
    *is_infinite = v.is_finite() ? 0 : 1;
    *out = v.is_finite() ? v.value() : 0;
  });
}

stv_status stv_valuation_table(unsigned long p, uint64_t k, uint64_t n_from, uint64_t n_to, char** csv) {
  return guarded([&] {
    require(csv, "csv");
    *csv = copy_out(valuation_table_csv(Prime(p), k, n_from, n_to));
  });
}

void stv_tree_options_init(stv_tree_options* options) {
  if (options == nullptr)
    return;
  const TreeOptions d;
  options->depth = d.depth;
  options->extra = d.extra;
  options->max_depth = d.max_depth;
  options->precision = d.precision;
  options->max_precision = d.max_precision;
  options->invocation = nullptr;
}

stv_status stv_tree_build(unsigned long p, uint64_t k, const stv_tree_options* options, stv_tree** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto tree = std::make_unique<stv_tree>();
    tree->report = build_tree(Prime(p), k, tree_options(options));
    if (options != nullptr && options->invocation != nullptr)
      tree->report.invocation = options->invocation;
    *out = tree.release();
  });
}

stv_status stv_tree_build_expsum(unsigned long p, size_t n_terms, const char* const* coefficients,
                                 const char* const* bases, const stv_tree_options* options, stv_tree** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    require(coefficients, "coefficients");
    require(bases, "bases");
    std::vector<ExpTerm> terms;
    for (size_t i = 0; i < n_terms; ++i) {
      require(coefficients[i], "coefficient");
      Rational c;
      if (c.set_str(coefficients[i], 10) != 0 || c.get_den() == 0)
        throw DomainError(std::string("not a rational number: '") + coefficients[i] + "'");
      c.canonicalize();
      terms.push_back({c, parse_integer(bases[i], "base")});
    }
    const TreeOptions o = tree_options(options);
    const ExpSum f(Prime(p), std::move(terms), o.precision);
    auto tree = std::make_unique<stv_tree>();
    tree->report = build_tree(f, o);
    if (options != nullptr && options->invocation != nullptr)
      tree->report.invocation = options->invocation;
    *out = tree.release();
  });
}

stv_status stv_tree_export(const stv_tree* tree, const char* format, char** out) {
  return guarded([&] {
    require(tree, "tree");
    require(format, "format");
    require(out, "out");
    *out = copy_out(export_tree(tree->report, parse_format(format)));
  });
}

stv_status stv_tree_from_json(const char* text, stv_tree** out) {
  return guarded([&] {
    require(text, "json");
    require(out, "out");
    *out = nullptr;
    auto tree = std::make_unique<stv_tree>();
    tree->report = tree_from_json(text);
    *out = tree.release();
  });
}

size_t stv_tree_mu(const stv_tree* tree) { return tree ? tree->report.mu : 0; }

int stv_tree_m0_observed(const stv_tree* tree) {
  return tree && tree->report.m0_observed ? *tree->report.m0_observed : -1;
}

void stv_tree_destroy(stv_tree* tree) { delete tree; }

stv_status stv_zero(unsigned long p, uint64_t k, unsigned a0, int digits, int precision, const char* format,
                    char** out) {
  return guarded([&] {
    require(format, "format");
    require(out, "out");
    const Format f = parse_format(format);
    const Prime prime(p);
    TreeOptions o;
    if (precision > 0)
      o.precision = precision;
    const ExpSum sum = ExpSum::stirling(prime, k, a0, o.precision);
    *out = copy_out(export_zeros(prime, k, a0, locate_zeros(sum, digits, o), f));
  });
}

stv_status stv_verify(const char* claim, const char* params_json, stv_report** out) {
  return guarded([&] {
    require(claim, "claim");
    require(out, "out");
    *out = nullptr;
    auto report = std::make_unique<stv_report>();
    report->report = dispatch(claim, parse_params(params_json));
    report->outcome = to_string(report->report.outcome);
    *out = report.release();
  });
}

stv_status stv_sweep(const char* params_json, stv_report** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const json j = parse_params(params_json);
    const auto primes = param<std::vector<unsigned long>>(j, "primes", {2, 3, 5, 7});
    const Range k{param<std::uint64_t>(j, "k_lo", 1), param<std::uint64_t>(j, "k_hi", 10)};
    auto report = std::make_unique<stv_report>();
    report->report = sweep_slopes(primes, k, tree_params(j));
    report->outcome = to_string(report->report.outcome);
    *out = report.release();
  });
}

int stv_report_passed(const stv_report* report) { return report && report->report.passed() ? 1 : 0; }

const char* stv_report_outcome(const stv_report* report) { return report ? report->outcome.c_str() : ""; }

stv_status stv_report_export(const stv_report* report, const char* format, char** out) {
  return guarded([&] {
    require(report, "report");
    require(format, "format");
    require(out, "out");
    *out = copy_out(export_report(report->report, parse_format(format)));
  });
}

void stv_report_destroy(stv_report* report) { delete report; }

} // extern "C"
