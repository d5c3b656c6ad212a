#include "stirval/valuation_tree.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "stirval/errors.hpp"

namespace stirval {

std::string to_string(NodeStatus status) {
  switch (status) {
  case NodeStatus::Constant:
    return "constant";
  case NodeStatus::Active:
    return "active";
  case NodeStatus::DepthExhausted:
    return "depth-exhausted";
  }
  return "unknown";
}

std::string to_string(StatementKind kind) {
  switch (kind) {
  case StatementKind::Constant:
    return "constant";
  case StatementKind::AlmostConstant:
    return "almost-constant";
  case StatementKind::NonConstant:
    return "non-constant";
  }
  return "unknown";
}

PadicInt Chain::x0(Prime p) const {
  Integer value = 0;
  for (auto it = x0_digits.rbegin(); it != x0_digits.rend(); ++it)
    value = value * p.value() + *it;
  return PadicInt(p, x0_precision, value);
}

Integer n_modulus(Prime p, int level) {
  if (p.value() == 2)
    return prime_power(p, level + 1);
  return prime_power(p, level) * (p.value() - 1);
}

Certification certify_constant(const ExpSum& f, const Ball& ball, const CertifyOptions& options) {
  const Prime p = f.prime();
  if (ball.prime() != p)
    throw DomainError("ball and exponential sum have different primes");
  const int r = options.taylor_order < 0 ? static_cast<int>(f.size()) : options.taylor_order;
  const std::int64_t m = ball.radius();
  const PadicInt center(p, f.precision(), ball.reduced_center());
  const auto jet = expsum_jet(f, center, r);

  Certification out;
  const PadicValuation t = jet[0].valuation();
  out.value = t.value;
  out.value_exact = t.exact;

  // Remainder of the Taylor series past order r.
  std::int64_t bound = f.c_min() + (r + 1) * (f.e_min() + m) - r / static_cast<std::int64_t>(p.value() - 1);
  for (int i = 1; i <= r; ++i) {
    const PadicValuation d = jet[i].valuation();
    if (!d.exact)
      out.bound_capped = true;
    bound = std::min(bound, d.value + i * m - vp_factorial(p, static_cast<std::uint64_t>(i)));
  }
  out.bound = bound;
  out.constant = out.value_exact && out.value < bound;
  out.lower_bound = std::min(out.value, bound);
  return out;
}

namespace {

bool exact_zero(const ExpSum& f, const Integer& x) {
  const auto value = f.exact_value(x);
  return value && *value == 0;
}

} // namespace

std::vector<ClassNode> expand_node(const ExpSum& f, const ClassNode& node, const CertifyOptions& options) {
  if (node.status == NodeStatus::Constant)
    throw UsageError("cannot expand a constant class");
  const Prime p = f.prime();
  const Ball ball(PadicInt(p, node.level, node.x_residue), node.level);
  std::vector<ClassNode> children;
  std::size_t inconclusive = 0;
  bool starved = false;
  for (const Ball& child : ball.children()) {
    const Certification c = certify_constant(f, child, options);
    ClassNode n;
    n.a0 = node.a0;
    n.level = node.level + 1;
    n.x_residue = child.reduced_center();
    if (c.constant) {
      n.status = NodeStatus::Constant;
      n.least = c.value;
      n.least_known = true;
    } else {
      n.status = NodeStatus::Active;
      n.least = c.lower_bound;
      ++inconclusive;
      if (c.value_exact ? c.bound_capped : !exact_zero(f, n.x_residue))
        starved = true;
    }
    children.push_back(std::move(n));
  }
  if (inconclusive >= 2 && starved)
    throw PrecisionError("class " + node.x_residue.get_str() + " mod " + std::to_string(p.value()) + "^" +
                         std::to_string(node.level) + " cannot be resolved at " + std::to_string(f.precision()) +
                         " digits");
  return children;
}

namespace {

bool inconclusive(const ClassNode& n) { return n.status != NodeStatus::Constant; }

void refresh_least(ClassNode& node) {
  if (node.children.empty())
    return;
  std::int64_t known = std::numeric_limits<std::int64_t>::max();
  std::int64_t bound = std::numeric_limits<std::int64_t>::max();
  for (ClassNode& c : node.children) {
    refresh_least(c);
    if (c.least_known)
      known = std::min(known, c.least);
    else
      bound = std::min(bound, c.least);
  }
  node.least_known = known <= bound;
  node.least = std::min(known, bound);
}

struct PathEntry {
  int level;
  std::optional<std::int64_t> least;
  NodeStatus status;
};

struct LeafPath {
  std::size_t root;
  const ClassNode* leaf;
  std::vector<PathEntry> path;
};

void collect_paths(const ClassNode& node, std::size_t root, int depth, std::vector<PathEntry>& path,
                   std::vector<LeafPath>& out) {
  path.push_back({node.level, node.least_known ? std::optional<std::int64_t>(node.least) : std::nullopt, node.status});
  if (node.children.empty()) {
    if (inconclusive(node) && node.level == depth)
      out.push_back({root, &node, path});
  } else {
    for (const ClassNode& c : node.children)
      if (inconclusive(c))
        collect_paths(c, root, depth, path, out);
  }
  path.pop_back();
}

struct Analysis {
  std::vector<LevelSummary> levels;
  std::vector<LeafPath> leaves;
  std::optional<int> stab;
  std::vector<std::string> gap_notes;
};

class Builder {
public:
  Builder(Prime p, std::uint64_t k, std::vector<ExpSum> sums, const TreeOptions& options)
      : p_(p), k_(k), sums_(std::move(sums)), options_(options) {
    certify_.taylor_order = options.taylor_order;
  }

  TreeReport run();

private:
  Analysis analyse(int depth);
  void check_expansion(const ClassNode& node, Analysis& a, std::vector<LevelSummary>& levels);
  void walk(const ClassNode& node, Analysis& a);

  Prime p_;
  std::uint64_t k_;
  std::vector<ExpSum> sums_;
  TreeOptions options_;
  CertifyOptions certify_;
  std::vector<ClassNode> roots_;
};

void Builder::check_expansion(const ClassNode& node, Analysis& a, std::vector<LevelSummary>& levels) {
  LevelSummary& s = levels[static_cast<std::size_t>(node.level)];
  std::size_t active = 0;
  for (const ClassNode& c : node.children)
    if (inconclusive(c))
      ++active;
  if (active != 1 || node.children.size() != p_.value())
    s.shape_ok = false;
  if (!node.least_known) {
    s.law_ok = false;
    return;
  }
  for (const ClassNode& c : node.children) {
    if (c.status == NodeStatus::Constant) {
      if (c.least != node.least)
        s.law_ok = false;
    } else if (c.least_known) {
      const std::int64_t gap = c.least - node.least;
      if (gap <= 0)
        s.law_ok = false;
      else if (k_ != 0 && gap >= static_cast<std::int64_t>(k_ - k_ / p_.value()))
        a.gap_notes.push_back("level " + std::to_string(node.level) + ", class " + node.x_residue.get_str() +
                              ": valuation gap " + std::to_string(gap) + " >= k - floor(k/p)");
    } else if (c.least <= node.least) {
      s.law_ok = false;
    }
  }
}

void Builder::walk(const ClassNode& node, Analysis& a) {
  LevelSummary& s = a.levels[static_cast<std::size_t>(node.level)];
  if (node.status == NodeStatus::Constant) {
    ++s.constant;
    return;
  }
  ++s.active;
  if (node.children.empty())
    return;
  check_expansion(node, a, a.levels);
  for (const ClassNode& c : node.children)
    walk(c, a);
}

Analysis Builder::analyse(int depth) {
  Analysis a;
  for (ClassNode& r : roots_)
    refresh_least(r);
  a.levels.resize(static_cast<std::size_t>(depth) + 1);
  for (int m = 0; m <= depth; ++m)
    a.levels[static_cast<std::size_t>(m)].level = m;
  for (const ClassNode& r : roots_)
    walk(r, a);
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (!inconclusive(roots_[i]))
      continue;
    std::vector<PathEntry> path;
    collect_paths(roots_[i], i, depth, path, a.leaves);
  }

  const std::size_t mu = a.levels.back().active;
  auto level_ok = [&](int m) {
    const LevelSummary& s = a.levels[static_cast<std::size_t>(m)];
    if (!s.shape_ok || !s.law_ok || s.active != mu)
      return false;
    // Constant step of each chain's least valuation from m onwards.
    if (m + 2 <= depth - 1) {
      for (const LeafPath& leaf : a.leaves) {
        const auto& x = leaf.path;
        const auto m0 = static_cast<std::size_t>(m);
        if (!x[m0].least || !x[m0 + 1].least || !x[m0 + 2].least)
          return false;
        if (*x[m0 + 1].least - *x[m0].least != *x[m0 + 2].least - *x[m0 + 1].least)
          return false;
      }
    }
    return true;
  };
  std::optional<int> stab;
  if (mu == 0)
    stab = depth;
  for (int m = depth - 1; m >= 0 && level_ok(m); --m)
    stab = m;
  a.stab = stab;
  return a;
}

TreeReport Builder::run() {
  const bool fixed = options_.depth > 0;
  roots_.clear();
  for (std::size_t i = 0; i < sums_.size(); ++i) {
    const ExpSum& f = sums_[i];
    const Certification c = certify_constant(f, Ball(PadicInt(p_, 0, 0L), 0), certify_);
    ClassNode root;
    root.a0 = f.is_stirling() ? f.a0() : 0;
    root.x_residue = 0;
    root.status = c.constant ? NodeStatus::Constant : NodeStatus::Active;
    root.least = c.constant ? c.value : c.lower_bound;
    root.least_known = c.constant;
    roots_.push_back(std::move(root));
  }

  std::size_t nodes = roots_.size();
  int depth = 0;
  Analysis a = analyse(depth);
  for (;;) {
    if (a.leaves.empty())
      break;
    if (fixed && depth >= options_.depth)
      break;
    if (!fixed && (depth >= options_.max_depth || (a.stab && depth - (*a.stab + 2) >= options_.extra)))
      break;
    for (const LeafPath& leaf : a.leaves) {
      auto* node = const_cast<ClassNode*>(leaf.leaf);
      node->children = expand_node(sums_[leaf.root], *node, certify_);
      nodes += node->children.size();
    }
    if (nodes > options_.max_nodes)
      throw ResourceError("class tree exceeds " + std::to_string(options_.max_nodes) + " nodes");
    ++depth;
    a = analyse(depth);
  }

  TreeReport report;
  report.kind = k_ != 0 ? "stirling" : "expsum";
  report.p = p_.value();
  report.k = k_;
  report.precision = sums_.front().precision();
  report.depth = depth;
  report.vp_k_factorial = k_ != 0 ? vp_factorial(p_, k_) : 0;
  report.levels = a.levels;
  report.mu = a.leaves.size();
  report.stabilized_at = a.stab;
  if (a.stab)
    report.m0_observed = *a.stab + 2;
  else
    report.errors.push_back("class tree did not stabilize within depth " + std::to_string(depth));
  for (const std::string& note : a.gap_notes)
    report.violations.push_back(note);
  for (const LevelSummary& s : a.levels) {
    if (!a.stab || s.level < *a.stab || s.level >= depth)
      continue;
    if (!s.shape_ok)
      report.violations.push_back("level " + std::to_string(s.level) + ": split is not (p-1) constant + 1 active");
    if (!s.law_ok)
      report.violations.push_back("level " + std::to_string(s.level) + ": children break the least-valuation law");
  }

  for (const LeafPath& leaf : a.leaves)
    const_cast<ClassNode*>(leaf.leaf)->status = NodeStatus::DepthExhausted;

  for (const LeafPath& leaf : a.leaves) {
    const ExpSum& f = sums_[leaf.root];
    Chain chain;
    chain.a0 = roots_[leaf.root].a0;
    for (const PathEntry& e : leaf.path) {
      ChainLevel cl;
      cl.level = e.level;
      cl.n_modulus = k_ != 0 ? n_modulus(p_, e.level) : prime_power(p_, e.level);
      cl.least = e.least;
      cl.status = e.level == depth ? NodeStatus::DepthExhausted : e.status;
      chain.levels.push_back(std::move(cl));
    }
    PadicInt x0(p_, depth, leaf.leaf->x_residue);
    chain.x0_digits = x0.digits();
    chain.x0_precision = depth;

    const std::string label = "chain a0=" + std::to_string(chain.a0) + " x0=" + leaf.leaf->x_residue.get_str();
    if (report.m0_observed) {
      const int m0 = *report.m0_observed;
      if (m0 < depth)
        chain.alpha = chain.levels[static_cast<std::size_t>(m0)].least;
      try {
        chain.l = slope_estimate(chain, m0);
        chain.stabilized = chain.alpha.has_value();
      } catch (const NotStabilizedError&) {
        // Too few levels past m0_observed; chain.stabilized stays false.
      }
    }

    const int target = options_.zero_digits > 0 ? options_.zero_digits : std::max(depth, f.precision() / 2);
    if (target > depth) {
      try {
        x0 = refine_zero(f, chain, target, certify_);
      } catch (const PrecisionError&) {
        // Keep the digits fixed by the tree itself.
      }
    }
    chain.x0_digits = x0.digits();
    chain.x0_precision = x0.precision();
    try {
      const Multiplicity m = multiplicity_at_zero(f, x0);
      chain.l_derivative = m.order;
      if (chain.l && *chain.l != m.order)
        report.errors.push_back(label + ": slope " + std::to_string(*chain.l) + " but derivative multiplicity " +
                                std::to_string(m.order));
    } catch (const PrecisionError& e) {
      report.errors.push_back(label + ": " + e.what());
    }
    report.chains.push_back(std::move(chain));
  }
  report.roots = std::move(roots_);
  return report;
}

TreeReport build_with_retry(Prime p, std::uint64_t k, const std::function<std::vector<ExpSum>(int)>& make,
                            const TreeOptions& options) {
  if (options.depth < 0)
    throw DomainError("negative tree depth");
  int precision = options.precision;
  for (;;) {
    try {
      Builder builder(p, k, make(precision), options);
      return builder.run();
    } catch (const PrecisionError&) {
      if (precision * 2 > options.max_precision)
        throw;
      precision *= 2;
    }
  }
}

} // namespace

TreeReport build_tree(Prime p, std::uint64_t k, const TreeOptions& options) {
  if (k < 1)
    throw DomainError("k must be >= 1");
  const unsigned classes = p.value() == 2 ? 2 : static_cast<unsigned>(p.value() - 1);
  return build_with_retry(
      p, k,
      [&](int precision) {
        std::vector<ExpSum> sums;
        for (unsigned a0 = 0; a0 < classes; ++a0)
          sums.push_back(ExpSum::stirling(p, k, a0, precision));
        return sums;
      },
      options);
}

TreeReport build_tree(const ExpSum& f, const TreeOptions& options) {
  const std::uint64_t k = f.is_stirling() ? f.k() : 0;
  auto report = build_with_retry(
      f.prime(), k, [&](int precision) { return std::vector<ExpSum>{f.with_precision(precision)}; }, options);
  if (f.is_stirling())
    for (Chain& c : report.chains)
      c.a0 = f.a0();
  return report;
}

PadicInt refine_zero(const ExpSum& f, const Chain& chain, int digits, const CertifyOptions& options) {
  const Prime p = f.prime();
  if (chain.x0_precision >= digits)
    return chain.x0(p).with_precision(digits);
  if (digits > f.precision())
    throw PrecisionError("cannot refine a zero to " + std::to_string(digits) + " digits at working precision " +
                         std::to_string(f.precision()));
  ClassNode node;
  node.level = chain.x0_precision;
  node.x_residue = chain.x0(p).residue();
  while (node.level < digits) {
    auto children = expand_node(f, node, options);
    const ClassNode* next = nullptr;
    for (const ClassNode& c : children) {
      if (c.status == NodeStatus::Constant)
        continue;
      if (next)
        throw PrecisionError("zero refinement found two candidate classes at level " + std::to_string(c.level));
      next = &c;
    }
    if (!next)
      throw PrecisionError("zero refinement lost the zero at level " + std::to_string(node.level + 1));
    ClassNode step = *next;
    node = std::move(step);
  }
  return PadicInt(p, digits, node.x_residue);
}

std::vector<ZeroRecord> locate_zeros(const ExpSum& f, int digits, const TreeOptions& options) {
  if (digits < 1)
    throw DomainError("zero refinement needs digits >= 1");
  TreeOptions o = options;
  o.precision = std::max(options.precision, 2 * digits + 16);
  o.max_precision = std::max(options.max_precision, o.precision);
  o.zero_digits = digits;
  for (;;) {
    const ExpSum g = f.with_precision(o.precision);
    const TreeReport tree = build_tree(g, o);
    try {
      std::vector<ZeroRecord> out;
      for (const Chain& c : tree.chains) {
        ZeroRecord z;
        z.a0 = c.a0;
        const PadicInt x0 = refine_zero(g, c, digits);
        z.digits = x0.digits();
        z.precision = x0.precision();
        z.multiplicity = c.l_derivative;
        z.slope = c.l;
        out.push_back(std::move(z));
      }
      return out;
    } catch (const PrecisionError&) {
      if (o.precision * 2 > o.max_precision)
        throw;
      o.precision *= 2;
    }
  }
}

int slope_estimate(const Chain& chain, int from_level) {
  std::vector<std::int64_t> known;
  for (const ChainLevel& l : chain.levels) {
    if (l.level < from_level)
      continue;
    if (!l.least)
      break;
    known.push_back(*l.least);
  }
  if (known.size() < 4)
    throw NotStabilizedError("only " + std::to_string(known.size()) + " levels with known least valuation from level " +
                             std::to_string(from_level));
  const std::int64_t step = known[1] - known[0];
  for (std::size_t i = 2; i < known.size(); ++i)
    if (known[i] - known[i - 1] != step)
      throw NotStabilizedError("least valuations do not grow by a constant step");
  return static_cast<int>(step);
}

std::vector<StirlingStatement> to_stirling_statements(const TreeReport& report) {
  if (report.kind != "stirling")
    throw UsageError("statements about S(n, k) need a Stirling tree");
  if (report.roots.empty())
    throw UsageError("the report carries no class nodes (rebuild the tree instead of parsing it)");
  const Prime p(report.p);
  const unsigned long step = p.value() == 2 ? 2 : p.value() - 1;
  const bool almost = p.value() <= report.k;
  auto n_class = [&](const ClassNode& node, StirlingStatement& s) {
    s.modulus = n_modulus(p, node.level);
    Integer r = Integer(node.a0) + node.x_residue * step;
    mpz_mod(s.residue.get_mpz_t(), r.get_mpz_t(), s.modulus.get_mpz_t());
  };

  std::vector<StirlingStatement> out;
  std::function<void(const ClassNode&)> visit = [&](const ClassNode& node) {
    if (node.status == NodeStatus::Constant)
      return;
    if (node.children.empty()) {
      StirlingStatement s;
      n_class(node, s);
      s.kind = StatementKind::NonConstant;
      if (node.least_known)
        s.valuation = node.least - report.vp_k_factorial;
      out.push_back(std::move(s));
      return;
    }
    for (const ClassNode& c : node.children) {
      if (c.status != NodeStatus::Constant) {
        visit(c);
        continue;
      }
      StirlingStatement s;
      n_class(c, s);
      s.kind = almost ? StatementKind::AlmostConstant : StatementKind::Constant;
      s.valuation = c.least - report.vp_k_factorial;
      s.exceptions_up_to = almost ? c.least : 0;
      out.push_back(std::move(s));
    }
  };
  for (const ClassNode& r : report.roots)
    visit(r);
  return out;
}

} // namespace stirval
