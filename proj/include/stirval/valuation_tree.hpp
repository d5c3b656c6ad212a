#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stirval/analytic.hpp"

namespace stirval {

enum class NodeStatus { Constant, Active, DepthExhausted };

std::string to_string(NodeStatus status);

// The class x = x_residue mod p^level of an exponential sum, or for a Stirling
// sum the class of n = a0 + x (p - 1) (n = a0 + 2x for p = 2).
struct ClassNode {
  unsigned a0 = 0;
  int level = 0;
  Integer x_residue;
  NodeStatus status = NodeStatus::Active;
  // Constant nodes: the valuation on the class. Active nodes: the least
  // valuation over the class when `least_known`, else a lower bound.
  std::int64_t least = 0;
  bool least_known = false;
  std::vector<ClassNode> children;
};

struct CertifyOptions {
  // Number of Taylor terms bounded individually; negative means #terms.
  int taylor_order = -1;
};

struct Certification {
  bool constant = false;
  // v_p(f(center)); only a lower bound when `value_exact` is false.
  std::int64_t value = 0;
  bool value_exact = false;
  // Lower bound for v_p(f(x) - f(center)) over the ball.
  std::int64_t bound = 0;
  // Some derivative vanished at working precision, so `bound` may be low.
  bool bound_capped = false;
  // Lower bound for v_p(f(x)) over the ball.
  std::int64_t lower_bound = 0;
};

// Constant on the ball with valuation t = v_p(f(center)) when t is below a
// certified bound on v_p(f(x) - f(center)). The bound combines the first
// Taylor coefficients with a uniform estimate of the remainder; with
// taylor_order = 0 it is the lifting-the-exponent bound M + e_min + c_min.
Certification certify_constant(const ExpSum& f, const Ball& ball, const CertifyOptions& options = {});

// Certifies the p children of an active node. A node with two or more
// inconclusive children of which one was starved of digits raises PrecisionError.
std::vector<ClassNode> expand_node(const ExpSum& f, const ClassNode& node, const CertifyOptions& options = {});

struct TreeOptions {
  // Fixed depth; 0 deepens until `extra` levels lie past m0_observed.
  int depth = 0;
  int extra = 6;
  int max_depth = 40;
  int precision = kDefaultPrecision;
  int max_precision = 1024;
  std::size_t max_nodes = 200000;
  int taylor_order = -1;
  // Digits to which chain zeros are refined for the multiplicity check; 0
  // means max(depth, precision / 2).
  int zero_digits = 0;
};

struct LevelSummary {
  int level = 0;
  std::size_t active = 0;
  std::size_t constant = 0;
  // Every expansion at this level produced p - 1 constant + 1 active child.
  bool shape_ok = true;
  // Constant children share the parent's least valuation and the active
  // child's is larger.
  bool law_ok = true;
};

struct ChainLevel {
  int level = 0;
  Integer n_modulus;
  std::optional<std::int64_t> least;
  NodeStatus status = NodeStatus::Active;
};

struct Chain {
  unsigned a0 = 0;
  std::optional<std::int64_t> alpha;
  std::optional<int> l;
  std::optional<int> l_derivative;
  bool stabilized = false;
  std::vector<unsigned long> x0_digits;
  int x0_precision = 0;
  std::vector<ChainLevel> levels;

  PadicInt x0(Prime p) const;
};

struct TreeReport {
  std::string kind = "stirling";
  unsigned long p = 2;
  std::uint64_t k = 0;
  int precision = kDefaultPrecision;
  int depth = 0;
  std::size_t mu = 0;
  std::optional<int> stabilized_at;
  std::optional<int> m0_observed;
  std::int64_t vp_k_factorial = 0;
  std::vector<LevelSummary> levels;
  std::vector<Chain> chains;
  std::vector<std::string> violations;
  std::vector<std::string> errors;
  std::optional<std::string> invocation;
  // One root per outer class a0 (one root for a plain exponential sum).
  // Not serialized.
  std::vector<ClassNode> roots;
};

// n-space modulus of an x-space class at `level`: (p - 1) p^level, or 2^(level+1).
Integer n_modulus(Prime p, int level);

TreeReport build_tree(Prime p, std::uint64_t k, const TreeOptions& options = {});
TreeReport build_tree(const ExpSum& f, const TreeOptions& options = {});

// Descends from the chain's deepest class through the unique inconclusive
// child until the zero is known to `digits` digits.
PadicInt refine_zero(const ExpSum& f, const Chain& chain, int digits, const CertifyOptions& options = {});

struct ZeroRecord {
  unsigned a0 = 0;
  std::vector<unsigned long> digits;
  int precision = 0;
  std::optional<int> multiplicity;
  std::optional<int> slope;
};

// Builds the class tree of f and refines the zero of every surviving chain to
// `digits` digits, raising the working precision as needed.
std::vector<ZeroRecord> locate_zeros(const ExpSum& f, int digits, const TreeOptions& options = {});

// Common difference of the chain's least valuations on levels >= from_level.
// Needs four known levels; NotStabilizedError otherwise or if the differences vary.
int slope_estimate(const Chain& chain, int from_level = 0);

enum class StatementKind { Constant, AlmostConstant, NonConstant };

std::string to_string(StatementKind kind);

struct StirlingStatement {
  Integer residue;
  Integer modulus;
  StatementKind kind = StatementKind::Constant;
  // v_p(S(n, k)) on the class; for non-constant classes the least valuation, if known.
  std::optional<std::int64_t> valuation;
  // AlmostConstant: the valuation holds for n > exceptions_up_to.
  std::int64_t exceptions_up_to = 0;
};

// Statements about S(n, k) from the constant children of active classes and
// the surviving chains. Needs the nodes of a freshly built Stirling tree.
std::vector<StirlingStatement> to_stirling_statements(const TreeReport& report);

} // namespace stirval
