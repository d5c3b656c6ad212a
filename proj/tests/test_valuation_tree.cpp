#include <random>

#include <gtest/gtest.h>

#include "tree_oracle.hpp"
#include "stirval/errors.hpp"
#include "stirval/stirling.hpp"
#include "stirval/valuation_tree.hpp"

using namespace stirval;

namespace {

const Prime P2(2), P3(3), P5(5), P7(7);

Ball ball(Prime p, long center, int radius) { return Ball(PadicInt(p, kDefaultPrecision, center), radius); }

TreeOptions fixed(int depth) {
  TreeOptions o;
  o.depth = depth;
  return o;
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v)
    s += x + "\n";
  return s;
}

const ClassNode* find_active(const ClassNode& node, int level) {
  if (node.level == level && node.status == NodeStatus::Active && !node.children.empty())
    return &node;
  for (const auto& c : node.children)
    if (const ClassNode* hit = find_active(c, level))
      return hit;
  return nullptr;
}

} // namespace

TEST(Certify, Examples) {
  // T_2(n, 2) = 2! S(n, 2) with S(n, 2) odd: valuation 1 = 0 + v_2(2!).
  const Certification a = certify_constant(ExpSum::stirling(P2, 2, 1), ball(P2, 0, 0));
  EXPECT_TRUE(a.constant);
  EXPECT_EQ(a.value - vp_factorial(P2, 2), 0);

  const ExpSum zero_at_0 = ExpSum::stirling(P7, 3, 2);
  for (int m = 0; m < 20; ++m)
    EXPECT_FALSE(certify_constant(zero_at_0, ball(P7, 0, m)).constant) << m;

  // n = 1 + 6x at x = 1 is n = 7: v_7(3! S(7, 3)) = v_7(6 * 301) = 1.
  const ExpSum f = ExpSum::stirling(P7, 3, 1);
  CertifyOptions lte;
  lte.taylor_order = 0;
  // Level 0 is the whole class; its canonical center x = 0 (n = 1) is a zero.
  EXPECT_FALSE(certify_constant(f, ball(P7, 1, 0), lte).constant);
  const Certification m1 = certify_constant(f, ball(P7, 1, 1), lte);
  EXPECT_TRUE(m1.constant);
  EXPECT_EQ(m1.value, 1);
}

TEST(Certify, TaylorBoundNeverBelowLte) {
  for (const Prime p : {P3, P5, P7})
    for (std::uint64_t k = 2; k <= 6; ++k) {
      const ExpSum f = ExpSum::stirling(p, k, 1);
      CertifyOptions lte;
      lte.taylor_order = 0;
      for (long x = 0; x < 20; ++x)
        for (int m = 0; m < 4; ++m) {
          const Certification t = certify_constant(f, ball(p, x, m));
          const Certification l = certify_constant(f, ball(p, x, m), lte);
          if (l.constant)
            EXPECT_TRUE(t.constant);
          if (t.constant)
            EXPECT_EQ(t.value, l.value);
        }
    }
}

TEST(Certify, SoundOnRandomProbes) {
  // Every certified class: 200 random n up to p^30 share the certified valuation.
  std::mt19937_64 rng(31);
  for (const auto& [p, k] : std::vector<std::pair<Prime, std::uint64_t>>{{P2, 6}, {P3, 5}, {P5, 7}, {P7, 4}}) {
    const TreeReport tree = build_tree(p, k, fixed(5));
    std::vector<const ClassNode*> constant;
    auto collect = [&](auto&& self, const ClassNode& n) -> void {
      if (n.status == NodeStatus::Constant)
        constant.push_back(&n);
      for (const auto& c : n.children)
        self(self, c);
    };
    for (const auto& r : tree.roots)
      collect(collect, r);
    ASSERT_FALSE(constant.empty());
    const unsigned long step = p == 2 ? 2 : p - 1;
    const Integer big = oracle::pow(p.value(), 30);
    gmp_randclass gen(gmp_randinit_default);
    gen.seed(static_cast<unsigned long>(rng()));
    for (int i = 0; i < 200; ++i) {
      const ClassNode& node = *constant[rng() % constant.size()];
      const Integer modulus = n_modulus(p, node.level);
      const Integer n = node.a0 + step * node.x_residue + modulus * (1 + gen.get_z_range(big / modulus));
      EXPECT_EQ(oracle::vp_t(n, k, p), node.least) << "p=" << p << " k=" << k << " n=" << n;
    }
  }
}

TEST(ExpandNode, SplitShape) {
  const TreeReport tree = build_tree(P3, 4, fixed(6));
  ASSERT_TRUE(tree.stabilized_at.has_value());
  const int level = *tree.stabilized_at + 1;
  const ClassNode* node = nullptr;
  for (const auto& r : tree.roots)
    if ((node = find_active(r, level)))
      break;
  ASSERT_NE(node, nullptr);
  const auto kids = expand_node(ExpSum::stirling(P3, 4, node->a0), *node);
  ASSERT_EQ(kids.size(), 3u);
  int constant = 0;
  for (const auto& c : kids)
    constant += c.status == NodeStatus::Constant ? 1 : 0;
  EXPECT_EQ(constant, 2);
}

TEST(ExpandNode, RejectsConstantNode) {
  ClassNode node;
  node.status = NodeStatus::Constant;
  EXPECT_THROW(expand_node(ExpSum::stirling(P3, 4, 0), node), UsageError);
}

TEST(ExpandNode, RootOfP2K3MatchesBruteForce) {
  const ExpSum f = ExpSum::stirling(P2, 3, 0);
  ClassNode root;
  const auto kids = expand_node(f, root);
  ASSERT_EQ(kids.size(), 2u);
  for (const auto& c : kids) {
    if (c.status != NodeStatus::Constant)
      continue;
    for (unsigned long x = c.x_residue.get_ui(); 2 * x <= (1ul << 18); x += 2)
      if (x > 0)
        ASSERT_EQ(oracle::vp_t(2 * x, 3, 2), c.least) << x;
  }
}

TEST(BuildTree, KOneHasNoActiveClasses) {
  for (const Prime p : {P2, P3, P5, P7}) {
    const TreeReport t = build_tree(p, 1, fixed(4));
    EXPECT_EQ(t.mu, 0u);
    EXPECT_TRUE(t.chains.empty());
    EXPECT_TRUE(to_stirling_statements(t).empty());
  }
}

TEST(BuildTree, P2K2IsConstant) {
  const TreeReport t = build_tree(P2, 2, fixed(4));
  EXPECT_EQ(t.mu, 0u);
  for (const auto& r : t.roots) {
    EXPECT_EQ(r.status, NodeStatus::Constant);
    EXPECT_EQ(r.least - t.vp_k_factorial, 0);
  }
}

TEST(BuildTree, P2K5Depth12MatchesBruteForce) {
  const TreeReport t = build_tree(P2, 5, fixed(12));
  EXPECT_TRUE(t.errors.empty()) << joined(t.errors);
  EXPECT_TRUE(t.violations.empty()) << joined(t.violations);
  ASSERT_TRUE(t.m0_observed.has_value());
  for (const auto& l : t.levels)
    if (l.level >= *t.m0_observed && l.level < t.depth) {
      EXPECT_TRUE(l.shape_ok) << l.level;
      EXPECT_TRUE(l.law_ok) << l.level;
      EXPECT_EQ(l.active, t.mu) << l.level;
    }
  const auto vt = oracle::vt_table(2, 5, 1ul << 14);
  EXPECT_EQ(joined(oracle::check_tree(t, vt)), "");
  const auto vs = oracle::vs_table(2, 5, 1ul << 14);
  EXPECT_EQ(joined(oracle::check_statements(t, to_stirling_statements(t), vs)), "");
}

TEST(BuildTree, SmallCasesMatchBruteForce) {
  for (const Prime p : {P2, P3, P5})
    for (std::uint64_t k = 1; k <= 6; ++k) {
      const TreeReport t = build_tree(p, k, fixed(5));
      const unsigned long n_max = p == 2 ? 4096 : 3000;
      EXPECT_EQ(joined(oracle::check_tree(t, oracle::vt_table(p, k, n_max))), "") << "p=" << p << " k=" << k;
      EXPECT_EQ(joined(oracle::check_statements(t, to_stirling_statements(t), oracle::vs_table(p, k, n_max))), "")
          << "p=" << p << " k=" << k;
    }
}

TEST(BuildTree, AdaptiveDepthReachesExtraLevels) {
  TreeOptions o;
  o.extra = 6;
  const TreeReport t = build_tree(Prime(11), 4, o);
  ASSERT_TRUE(t.m0_observed.has_value());
  EXPECT_GE(t.depth - *t.m0_observed, 6);
  EXPECT_EQ(t.mu, 4u);
}

TEST(BuildTree, ExpSumTreeForRemark) {
  const ExpSum f(P3, {{Rational(1), Integer(16)}, {Rational(1), Integer(49)}, {Rational(-2), Integer(28)}});
  const TreeReport t = build_tree(f, fixed(10));
  EXPECT_EQ(t.kind, "expsum");
  ASSERT_EQ(t.chains.size(), 1u);
  EXPECT_EQ(t.chains[0].l, 2);
  EXPECT_EQ(t.chains[0].l_derivative, 2);
  EXPECT_THROW(to_stirling_statements(t), UsageError);
}

TEST(BuildTree, RejectsBadArguments) {
  EXPECT_THROW(build_tree(P3, 0), DomainError);
  EXPECT_THROW(build_tree(P3, 4, fixed(-1)), DomainError);
  TreeOptions tiny = fixed(12);
  tiny.max_nodes = 10;
  EXPECT_THROW(build_tree(P3, 8, tiny), ResourceError);
}

TEST(RefineZero, ExactIntegerZero) {
  // n = 2 lies in a0 = 2 for p = 7, where S(2, 3) = 0.
  const ExpSum f = ExpSum::stirling(P7, 3, 2);
  const TreeReport t = build_tree(f, fixed(3));
  ASSERT_EQ(t.chains.size(), 1u);
  for (int digits : {3, 10, 30})
    EXPECT_TRUE(refine_zero(f, t.chains[0], digits).is_zero()) << digits;
}

TEST(RefineZero, RemarkZeroIsZero) {
  const ExpSum f(P3, {{Rational(1), Integer(16)}, {Rational(1), Integer(49)}, {Rational(-2), Integer(28)}});
  const TreeReport t = build_tree(f, fixed(4));
  ASSERT_EQ(t.chains.size(), 1u);
  for (int s = 1; s <= 20; ++s)
    EXPECT_TRUE(refine_zero(f, t.chains[0], s).is_zero()) << s;
}

TEST(RefineZero, StableUnderPrecisionIncrease) {
  TreeOptions lo;
  lo.precision = 32;
  lo.max_precision = 32;
  TreeOptions hi;
  hi.precision = 64;
  const auto a = locate_zeros(ExpSum::stirling(P2, 6, 0, 32), 20, lo);
  const auto b = locate_zeros(ExpSum::stirling(P2, 6, 0, 64), 20, hi);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].digits, b[i].digits);
    EXPECT_EQ(a[i].digits.size(), 20u);
  }
}

TEST(RefineZero, ZeroIsAZero) {
  // f(x0) has valuation at least alpha + digits when x0 is known to `digits` digits.
  for (const auto& [p, k] : std::vector<std::pair<Prime, std::uint64_t>>{{P3, 5}, {P5, 4}, {P2, 7}}) {
    for (unsigned a0 = 0; a0 < (p == 2 ? 2u : p - 1); ++a0) {
      const ExpSum f = ExpSum::stirling(p, k, a0, 96);
      for (const ZeroRecord& z : locate_zeros(f, 24)) {
        Integer x = 0;
        for (auto it = z.digits.rbegin(); it != z.digits.rend(); ++it)
          x = x * p.value() + *it;
        const PadicValuation v = expsum_eval(f, PadicInt(p, 96, x)).valuation();
        EXPECT_GE(v.value, 24) << "p=" << p << " k=" << k << " a0=" << a0;
      }
    }
  }
}

TEST(SlopeEstimate, Examples) {
  const ExpSum f = ExpSum::stirling(P7, 3, 2);
  const TreeReport t = build_tree(f, fixed(8));
  ASSERT_EQ(t.chains.size(), 1u);
  EXPECT_EQ(slope_estimate(t.chains[0]), 1);
  // n = 8 = 2 + 6 * 1 lies in the level-0 chain class; v_7(S(8, 3)) = 1.
  EXPECT_EQ(oracle::vp(7, oracle::stirling(8, 3)), 1);
  EXPECT_EQ(*t.chains[0].levels[0].least, 1);

  for (const Prime p : {P3, P5, P7}) {
    const TreeReport two = build_tree(ExpSum::stirling(p, 2, 0), fixed(8));
    for (const Chain& c : two.chains)
      EXPECT_EQ(slope_estimate(c), 1);
  }
}

TEST(SlopeEstimate, NeedsFourLevels) {
  Chain c;
  for (int m = 0; m < 3; ++m)
    c.levels.push_back({m, Integer(1), m + 1, NodeStatus::Active});
  EXPECT_THROW(slope_estimate(c), NotStabilizedError);
  c.levels.push_back({3, Integer(1), 10, NodeStatus::Active});
  EXPECT_THROW(slope_estimate(c), NotStabilizedError);
}

TEST(Statements, P2K5Example) {
  const TreeReport t = build_tree(P2, 5, fixed(8));
  EXPECT_EQ(t.vp_k_factorial, 3);
  bool found = false;
  for (const auto& s : to_stirling_statements(t))
    if (s.kind == StatementKind::AlmostConstant && s.valuation == 1) {
      EXPECT_EQ(s.exceptions_up_to, 4);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Statements, PLargerThanKIsConstant) {
  const TreeReport t = build_tree(P7, 3, fixed(4));
  EXPECT_EQ(t.vp_k_factorial, 0);
  for (const auto& s : to_stirling_statements(t)) {
    EXPECT_NE(s.kind, StatementKind::AlmostConstant);
    EXPECT_EQ(s.exceptions_up_to, 0);
  }
}

TEST(SlopeBound, MainTheoremRange) {
  for (const Prime p : {P3, P5, P7})
    for (std::uint64_t k = 2; k <= 8; ++k) {
      const TreeReport t = build_tree(p, k);
      const std::int64_t top = static_cast<std::int64_t>(k - k / p) - 1;
      for (const Chain& c : t.chains) {
        ASSERT_TRUE(c.l.has_value()) << "p=" << p << " k=" << k;
        EXPECT_GE(*c.l, 1);
        if (top >= 1)
          EXPECT_LE(*c.l, top) << "p=" << p << " k=" << k;
      }
    }
}
