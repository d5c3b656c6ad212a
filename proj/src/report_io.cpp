#include "stirval/report_io.hpp"

#include <functional>
#include <sstream>

#include <json.hpp>

#include "stirval/errors.hpp"
#include "stirval/stirling.hpp"

namespace stirval {

using nlohmann::json;

namespace {

json optional_int(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }
json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

template <typename T>
std::optional<T> read_optional(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null())
    return std::nullopt;
  return v.get<T>();
}

NodeStatus parse_status(const std::string& s) {
  if (s == "constant")
    return NodeStatus::Constant;
  if (s == "active")
    return NodeStatus::Active;
  if (s == "depth-exhausted")
    return NodeStatus::DepthExhausted;
  throw UsageError("unknown node status '" + s + "'");
}

Outcome parse_outcome(const std::string& s) {
  if (s == "pass")
    return Outcome::Pass;
  if (s == "fail")
    return Outcome::Fail;
  if (s == "skipped")
    return Outcome::Skipped;
  if (s == "observed")
    return Outcome::Observed;
  throw UsageError("unknown outcome '" + s + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

void require_schema(const json& j, const std::string& kind) {
  if (!j.is_object() || j.value("schema_version", 0) != kSchemaVersion)
    throw UsageError("unsupported schema version");
  if (!kind.empty() && j.value("kind", std::string()) != kind)
    throw UsageError("expected a '" + kind + "' document");
}

json tree_json(const TreeReport& r) {
  json levels = json::array();
  for (const LevelSummary& s : r.levels)
    levels.push_back({{"level", s.level},
                      {"active", s.active},
                      {"constant", s.constant},
                      {"shape_ok", s.shape_ok},
                      {"law_ok", s.law_ok}});
  json chains = json::array();
  for (const Chain& c : r.chains) {
    json cl = json::array();
    for (const ChainLevel& l : c.levels)
      cl.push_back({{"m", l.level},
                    {"n_modulus", l.n_modulus.get_str()},
                    {"least_valuation", optional_int(l.least)},
                    {"status", to_string(l.status)}});
    chains.push_back({{"a0", c.a0},
                      {"alpha", optional_int(c.alpha)},
                      {"l", optional_int(c.l)},
                      {"l_derivative", optional_int(c.l_derivative)},
                      {"stabilized", c.stabilized},
                      {"x0_digits", c.x0_digits},
                      {"x0_precision", c.x0_precision},
                      {"levels", cl}});
  }
  json j = {{"schema_version", kSchemaVersion},
            {"kind", r.kind},
            {"p", r.p},
            {"k", r.k},
            {"precision", r.precision},
            {"depth", r.depth},
            {"mu", r.mu},
            {"stabilized_at", optional_int(r.stabilized_at)},
            {"m0_observed", optional_int(r.m0_observed)},
            {"vp_k_factorial", r.vp_k_factorial},
            {"levels", levels},
            {"chains", chains},
            {"violations", r.violations},
            {"errors", r.errors}};
  if (r.invocation)
    j["invocation"] = *r.invocation;
  return j;
}

std::string node_label(const TreeReport& r, const ClassNode& n) {
  const Prime p(r.p);
  Integer modulus;
  Integer residue;
  if (r.kind == "stirling") {
    modulus = n_modulus(p, n.level);
    const unsigned long step = p.value() == 2 ? 2 : p.value() - 1;
    Integer raw = Integer(n.a0) + n.x_residue * step;
    mpz_mod(residue.get_mpz_t(), raw.get_mpz_t(), modulus.get_mpz_t());
  } else {
    modulus = prime_power(p, n.level);
    residue = n.x_residue;
  }
  std::string t = n.least_known ? std::to_string(n.least) : ">=" + std::to_string(n.least);
  return "[" + residue.get_str() + "] mod " + modulus.get_str() + " : " + t;
}

std::string tree_dot(const TreeReport& r) {
  if (r.roots.empty())
    throw UsageError("DOT export needs the class nodes of a built tree");
  std::ostringstream out;
  out << "digraph classes {\n";
  int next = 0;
  std::function<int(const ClassNode&)> emit = [&](const ClassNode& n) {
    const int id = next++;
    out << "  n" << id << " [label=\"" << node_label(r, n) << "\", shape="
        << (n.status == NodeStatus::Constant ? "box" : "circle") << "];\n";
    for (const ClassNode& c : n.children) {
      const int child = emit(c);
      out << "  n" << id << " -> n" << child << ";\n";
    }
    return id;
  };
  for (const ClassNode& root : r.roots)
    emit(root);
  out << "}\n";
  return out.str();
}

std::string opt_str(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : "-"; }
std::string opt_str(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

std::string tree_text(const TreeReport& r) {
  std::ostringstream out;
  out << "p = " << r.p;
  if (r.kind == "stirling")
    out << ", k = " << r.k << ", v_p(k!) = " << r.vp_k_factorial;
  out << "\nprecision " << r.precision << ", depth " << r.depth << "\n";
  out << "mu = " << r.mu << ", stabilized at level " << opt_str(r.stabilized_at) << ", m0_observed = "
      << opt_str(r.m0_observed) << "\n";
  out << "level  active  constant\n";
  for (const LevelSummary& s : r.levels)
    out << s.level << "  " << s.active << "  " << s.constant << (s.shape_ok ? "" : "  (split)")
        << (s.law_ok ? "" : "  (law)") << "\n";
  for (const Chain& c : r.chains) {
    out << "chain a0 = " << c.a0 << ": alpha = " << opt_str(c.alpha) << ", l = " << opt_str(c.l)
        << ", l (derivatives) = " << opt_str(c.l_derivative) << ", x0 digits =";
    for (unsigned long d : c.x0_digits)
      out << " " << d;
    out << "\n  least by level:";
    for (const ChainLevel& l : c.levels)
      out << " " << (l.least ? std::to_string(*l.least) : "?");
    out << "\n";
  }
  for (const std::string& v : r.violations)
    out << "violation: " << v << "\n";
  for (const std::string& e : r.errors)
    out << "error: " << e << "\n";
  if (!r.roots.empty() && r.kind == "stirling") {
    const auto statements = to_stirling_statements(r);
    if (!statements.empty())
      out << "classes of n:\n";
    for (const StirlingStatement& s : statements) {
      out << "  [" << s.residue.get_str() << "] mod " << s.modulus.get_str() << ": " << to_string(s.kind);
      if (s.valuation)
        out << ", v_p(S(n,k)) " << (s.kind == StatementKind::NonConstant ? ">= " : "= ") << *s.valuation;
      if (s.kind == StatementKind::AlmostConstant)
        out << " for n > " << s.exceptions_up_to;
      out << "\n";
    }
  }
  return out.str();
}

json report_json(const VerifierReport& r) {
  json children = json::array();
  for (const VerifierReport& c : r.children)
    children.push_back(report_json(c));
  return {{"claim", r.claim},
          {"parameters", r.parameters},
          {"outcome", to_string(r.outcome)},
          {"counterexample", r.counterexample ? json(*r.counterexample) : json(nullptr)},
          {"derived", r.derived},
          {"notes", r.notes},
          {"runtime_ms", r.runtime_ms},
          {"children", children}};
}

VerifierReport report_from(const json& j) {
  VerifierReport r;
  r.claim = j.at("claim").get<std::string>();
  r.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
  r.outcome = parse_outcome(j.at("outcome").get<std::string>());
  if (!j.at("counterexample").is_null())
    r.counterexample = j.at("counterexample").get<std::map<std::string, std::string>>();
  r.derived = j.at("derived").get<std::map<std::string, std::int64_t>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
  for (const json& c : j.at("children"))
    r.children.push_back(report_from(c));
  return r;
}

void report_text(const VerifierReport& r, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out << pad << r.claim << ": " << to_string(r.outcome);
  if (!r.parameters.empty()) {
    out << " (";
    bool first = true;
    for (const auto& [k, v] : r.parameters) {
      out << (first ? "" : ", ") << k << "=" << v;
      first = false;
    }
    out << ")";
  }
  out << " [" << r.runtime_ms << " ms]\n";
  for (const auto& [k, v] : r.derived)
    out << pad << "  " << k << " = " << v << "\n";
  if (r.counterexample) {
    out << pad << "  counterexample:";
    for (const auto& [k, v] : *r.counterexample)
      out << " " << k << "=" << v;
    out << "\n";
  }
  for (const std::string& n : r.notes)
    out << pad << "  note: " << n << "\n";
  for (const VerifierReport& c : r.children)
    report_text(c, out, indent + 1);
}

} // namespace

Format parse_format(const std::string& name) {
  if (name == "text")
    return Format::Text;
  if (name == "json")
    return Format::Json;
  if (name == "dot")
    return Format::Dot;
  if (name == "csv")
    return Format::Csv;
  throw UsageError("unknown format '" + name + "'");
}

std::string to_string(Format format) {
  switch (format) {
  case Format::Text:
    return "text";
  case Format::Json:
    return "json";
  case Format::Dot:
    return "dot";
  case Format::Csv:
    return "csv";
  }
  return "unknown";
}

std::string export_tree(const TreeReport& report, Format format) {
  switch (format) {
  case Format::Json: {
    json j = tree_json(report);
    return dump(j);
  }
  case Format::Dot:
    return tree_dot(report);
  case Format::Text:
    return tree_text(report);
  case Format::Csv:
    break;
  }
  throw UsageError("a class tree cannot be exported as " + to_string(format));
}

TreeReport tree_from_json(const std::string& text) {
  const json j = parse(text);
  require_schema(j, "");
  try {
    TreeReport r;
    r.kind = j.at("kind").get<std::string>();
    if (r.kind != "stirling" && r.kind != "expsum")
      throw UsageError("not a class tree document");
    r.p = j.at("p").get<unsigned long>();
    r.k = j.at("k").get<std::uint64_t>();
    r.precision = j.at("precision").get<int>();
    r.depth = j.at("depth").get<int>();
    r.mu = j.at("mu").get<std::size_t>();
    r.stabilized_at = read_optional<int>(j, "stabilized_at");
    r.m0_observed = read_optional<int>(j, "m0_observed");
    r.vp_k_factorial = j.at("vp_k_factorial").get<std::int64_t>();
    for (const json& s : j.at("levels"))
      r.levels.push_back({s.at("level").get<int>(), s.at("active").get<std::size_t>(),
                          s.at("constant").get<std::size_t>(), s.at("shape_ok").get<bool>(),
                          s.at("law_ok").get<bool>()});
    for (const json& c : j.at("chains")) {
      Chain chain;
      chain.a0 = c.at("a0").get<unsigned>();
      chain.alpha = read_optional<std::int64_t>(c, "alpha");
      chain.l = read_optional<int>(c, "l");
      chain.l_derivative = read_optional<int>(c, "l_derivative");
      chain.stabilized = c.at("stabilized").get<bool>();
      chain.x0_digits = c.at("x0_digits").get<std::vector<unsigned long>>();
      chain.x0_precision = c.at("x0_precision").get<int>();
      for (const json& l : c.at("levels")) {
        ChainLevel cl;
        cl.level = l.at("m").get<int>();
        cl.n_modulus = Integer(l.at("n_modulus").get<std::string>());
        cl.least = read_optional<std::int64_t>(l, "least_valuation");
        cl.status = parse_status(l.at("status").get<std::string>());
        chain.levels.push_back(std::move(cl));
      }
      r.chains.push_back(std::move(chain));
    }
    r.violations = j.at("violations").get<std::vector<std::string>>();
    r.errors = j.at("errors").get<std::vector<std::string>>();
    if (j.contains("invocation"))
      r.invocation = j.at("invocation").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed tree document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed tree document: ") + e.what());
  }
}

std::string export_report(const VerifierReport& report, Format format) {
  if (format == Format::Json) {
    json j = report_json(report);
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "verifier-report";
    return dump(j);
  }
  if (format == Format::Text) {
    std::ostringstream out;
    report_text(report, out, 0);
    return out.str();
  }
  throw UsageError("a verifier report cannot be exported as " + to_string(format));
}

VerifierReport report_from_json(const std::string& text) {
  const json j = parse(text);
  require_schema(j, "verifier-report");
  try {
    return report_from(j);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed report document: ") + e.what());
  }
}

std::string export_zeros(Prime p, std::uint64_t k, unsigned a0, const std::vector<ZeroRecord>& zeros, Format format) {
  if (format == Format::Json) {
    json list = json::array();
    for (const ZeroRecord& z : zeros)
      list.push_back({{"x0_digits", z.digits},
                      {"precision", z.precision},
                      {"multiplicity", optional_int(z.multiplicity)},
                      {"slope", optional_int(z.slope)}});
    json j = {{"schema_version", kSchemaVersion}, {"kind", "zeros"}, {"p", p.value()}, {"k", k}, {"a0", a0},
              {"zeros", list}};
    return dump(j);
  }
  if (format == Format::Text) {
    std::ostringstream out;
    out << zeros.size() << " zero(s) of f_{" << a0 << "," << k << "} for p = " << p.value() << "\n";
    for (const ZeroRecord& z : zeros) {
      out << "x0 =";
      for (unsigned long d : z.digits)
        out << " " << d;
      out << "  (" << z.precision << " digits, least significant first; multiplicity " << opt_str(z.multiplicity)
          << ", slope " << opt_str(z.slope) << ")\n";
    }
    return out.str();
  }
  throw UsageError("zeros cannot be exported as " + to_string(format));
}

std::string valuation_table_csv(Prime p, std::uint64_t k, std::uint64_t n_from, std::uint64_t n_to) {
  if (n_from < 1 || k < 1)
    throw DomainError("table needs n, k >= 1");
  std::ostringstream out;
  out << "n,vp_S\n";
  for (std::uint64_t n = n_from; n <= n_to; ++n)
    out << n << "," << stirling_valuation(p, Integer(static_cast<unsigned long>(n)), k).to_string() << "\n";
  return out.str();
}

} // namespace stirval
