#pragma once

#include <string>

#include "stirval/report.hpp"
#include "stirval/valuation_tree.hpp"

namespace stirval {

inline constexpr int kSchemaVersion = 1;

enum class Format { Text, Json, Dot, Csv };

// Throws UsageError for an unknown name.
Format parse_format(const std::string& name);
std::string to_string(Format format);

// Text, JSON or DOT. DOT needs the class nodes, which parsed reports lack.
std::string export_tree(const TreeReport& report, Format format);
TreeReport tree_from_json(const std::string& text);

// Text or JSON.
std::string export_report(const VerifierReport& report, Format format);
VerifierReport report_from_json(const std::string& text);

std::string export_zeros(Prime p, std::uint64_t k, unsigned a0, const std::vector<ZeroRecord>& zeros, Format format);

// "n,vp_S" rows for n_from <= n <= n_to; "inf" where S(n, k) = 0.
std::string valuation_table_csv(Prime p, std::uint64_t k, std::uint64_t n_from, std::uint64_t n_to);

} // namespace stirval
