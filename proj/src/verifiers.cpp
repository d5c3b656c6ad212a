#include "stirval/verifiers.hpp"

#include <algorithm>
#include <chrono>

#include "stirval/errors.hpp"
#include "stirval/stirling.hpp"

namespace stirval {

namespace {

class Stopwatch {
public:
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string str(std::uint64_t x) { return std::to_string(x); }
std::string str(std::int64_t x) { return std::to_string(x); }
std::string str(int x) { return std::to_string(x); }

bool all_zero(const std::vector<unsigned long>& digits) {
  return std::all_of(digits.begin(), digits.end(), [](unsigned long d) { return d == 0; });
}

const Chain* chain_at_zero(const TreeReport& tree, unsigned a0) {
  for (const Chain& c : tree.chains)
    if (c.a0 == a0 && all_zero(c.x0_digits))
      return &c;
  return nullptr;
}

std::int64_t valuation_of_s(Prime p, const Integer& n, std::uint64_t k) {
  const Valuation v = stirling_valuation(p, n, k);
  return v.value();
}

} // namespace

VerifierReport verify_lengyel_wannemacker(std::uint64_t k_max, std::uint64_t n_max) {
  Stopwatch clock;
  VerifierReport r;
  r.claim = "lengwan";
  r.parameters = {{"k_max", str(k_max)}, {"n_max", str(n_max)}};
  const Prime two(2);
  std::int64_t checked = 0;
  for (std::uint64_t k = 1; k <= k_max && r.passed(); ++k) {
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      const Integer big_n = prime_power(two, static_cast<std::int64_t>(n));
      if (big_n < static_cast<unsigned long>(k))
        continue;
      const int digits = static_cast<int>(k) + 8;
      const Integer residue = surjections_mod(big_n, k, two, digits);
      const std::int64_t v = residue == 0 ? digits : vp(two, residue).value();
      ++checked;
      if (v != static_cast<std::int64_t>(k) - 1) {
        r.fail({{"k", str(k)}, {"n", str(n)}, {"v_2(k! S(2^n,k))", residue == 0 ? ">=" + str(v) : str(v)}},
               "v_2(k! S(2^n, k)) differs from k - 1");
        break;
      }
    }
  }
  r.derived["cells"] = checked;
  r.runtime_ms = clock.ms();
  return r;
}

VerifierReport verify_gessel_lengyel(Prime p, std::uint64_t k, Range a_range, Range n_range) {
  Stopwatch clock;
  if (p.value() == 2)
    throw DomainError("the Gessel-Lengyel identity is stated for odd primes");
  if (k < 1)
    throw DomainError("k must be >= 1");
  if (a_range.hi == 0)
    a_range = {1, 5};
  if (n_range.hi == 0) {
    const auto c = static_cast<std::uint64_t>(ceil_log(p, k)) + 1;
    n_range = {c, c + 4};
  }
  if (a_range.lo < 1 || a_range.lo > a_range.hi || n_range.lo > n_range.hi)
    throw DomainError("empty or invalid grid");

  VerifierReport r;
  r.claim = "geslen";
  r.parameters = {{"p", str(p.value())},
                  {"k", str(k)},
                  {"a_range", str(a_range.lo) + ".." + str(a_range.hi)},
                  {"n_range", str(n_range.lo) + ".." + str(n_range.hi)}};
  const bool observed = k % p.value() == 0 && (k / p.value()) % 2 == 1;
  if (observed)
    r.notes.push_back("k/p is an odd integer: grid recorded without asserting");

  const std::int64_t shift = vp_factorial(p, k);
  std::optional<std::int64_t> common;
  bool constant = true;
  for (std::uint64_t a = a_range.lo; a <= a_range.hi; ++a) {
    for (std::uint64_t n = n_range.lo; n <= n_range.hi; ++n) {
      const Integer big_n = prime_power(p, static_cast<std::int64_t>(n)) * (p.value() - 1) * static_cast<unsigned long>(a);
      if (big_n < static_cast<unsigned long>(k)) {
        r.notes.push_back("skipped a=" + str(a) + " n=" + str(n) + ": a p^n (p-1) < k");
        continue;
      }
      const std::int64_t v = valuation_of_s(p, big_n, k) + shift;
      if (!common) {
        common = v;
        continue;
      }
      if (v != *common && constant) {
        constant = false;
        if (observed) {
          r.notes.push_back("grid not constant: a=" + str(a) + " n=" + str(n) + " gives " + str(v) + ", first cell " +
                            str(*common));
        } else {
          r.fail({{"p", str(p.value())},
                  {"k", str(k)},
                  {"a", str(a)},
                  {"n", str(n)},
                  {"N", big_n.get_str()},
                  {"v_p(k! S(N,k))", str(v)},
                  {"first_value", str(*common)}},
                 "v_p(k! S(a p^n (p-1), k)) depends on the grid cell");
        }
      }
    }
  }
  if (!common) {
    r.outcome = Outcome::Skipped;
    r.notes.push_back("no admissible grid cell");
    r.runtime_ms = clock.ms();
    return r;
  }
  const std::int64_t base = static_cast<std::int64_t>((k - 1) / (p.value() - 1));
  r.derived["valuation"] = *common;
  r.derived["constant"] = constant ? 1 : 0;
  if (constant) {
    const std::int64_t tau = *common - base;
    r.derived["tau"] = tau;
    if (!observed && tau < 0)
      r.fail({{"p", str(p.value())}, {"k", str(k)}, {"tau", str(tau)}}, "measured tau_p(k) is negative");
    if (!observed && k % (p.value() - 1) == 0 && tau != 0)
      r.fail({{"p", str(p.value())}, {"k", str(k)}, {"tau", str(tau)}}, "tau_p(k) != 0 although (p-1) | k");
  }
  if (observed)
    r.outcome = Outcome::Observed;
  r.runtime_ms = clock.ms();
  return r;
}

VerifierReport verify_final_theorem(Prime p, std::uint64_t k, std::uint64_t a, int s_max, const TreeOptions& options) {
  Stopwatch clock;
  if (!(a >= 1 && a < k && k < p.value()))
    throw DomainError("the final theorem needs 1 <= a < k < p");
  VerifierReport r;
  r.claim = "final";
  r.parameters = {{"p", str(p.value())}, {"k", str(k)}, {"a", str(a)}, {"s_max", str(s_max)}};

  // Chebyshev prime q in (k/2, k]: its exponent in prod j^(c_j (p-1)) is nonzero,
  // so f'(0) = log_p of that product cannot vanish.
  std::uint64_t q = k;
  while (q > k / 2 && !is_prime(static_cast<unsigned long>(q)))
    --q;
  if (q > k / 2) {
    Integer exponent = binomial(k, q) * (p.value() - 1);
    Integer qa;
    mpz_ui_pow_ui(qa.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(a));
    exponent *= qa;
    r.derived["chebyshev_q"] = static_cast<std::int64_t>(q);
    if (exponent == 0)
      r.fail({{"q", str(q)}}, "Chebyshev prime exponent vanishes");
  } else {
    r.fail({{"k", str(k)}}, "no prime in (k/2, k]");
  }

  const unsigned a0 = static_cast<unsigned>(a % (p.value() - 1));
  const ExpSum f = ExpSum::stirling(p, k, a0, options.precision);
  const PadicInt zero(p, f.precision(), 0L);
  const PadicInt d1 = expsum_derivative(f, 1, zero);
  if (d1.is_zero())
    r.fail({{"p", str(p.value())}, {"k", str(k)}, {"a", str(a)}}, "f'(0) vanishes at working precision");
  else
    r.derived["v_f1"] = d1.valuation().value;

  const TreeReport tree = build_tree(p, k, options);
  if (!tree.m0_observed) {
    r.fail({{"p", str(p.value())}, {"k", str(k)}}, "class tree did not stabilize");
    r.runtime_ms = clock.ms();
    return r;
  }
  const Chain* chain = chain_at_zero(tree, a0);
  if (!chain) {
    r.fail({{"p", str(p.value())}, {"k", str(k)}, {"a", str(a)}}, "no chain through n = a");
    r.runtime_ms = clock.ms();
    return r;
  }
  if (!chain->l || *chain->l != 1 || !chain->l_derivative || *chain->l_derivative != 1) {
    r.fail({{"p", str(p.value())},
            {"k", str(k)},
            {"a", str(a)},
            {"l_slope", chain->l ? str(*chain->l) : "unknown"},
            {"l_derivative", chain->l_derivative ? str(*chain->l_derivative) : "unknown"}},
           "chain through n = a does not have slope 1");
  }
  if (chain->l)
    r.derived["l"] = *chain->l;

  const int m0 = *tree.m0_observed + 1;
  r.derived["m0"] = m0;
  const Integer step = Integer(p.value() - 1);
  const Integer base_n = Integer(static_cast<unsigned long>(a)) + prime_power(p, m0 - 1) * step;
  const std::int64_t base_v = valuation_of_s(p, base_n, k);
  r.derived["base_valuation"] = base_v;
  std::int64_t checked = 0;
  for (int s = m0 - 1; s <= s_max && r.passed(); ++s) {
    for (unsigned long u = 1; u <= 3; ++u) {
      if (u % p.value() == 0)
        continue;
      const Integer n = Integer(static_cast<unsigned long>(a)) + prime_power(p, s) * step * u;
      const std::int64_t v = valuation_of_s(p, n, k);
      const std::int64_t expected = base_v + s - m0 + 1;
      ++checked;
      if (v != expected) {
        r.fail({{"p", str(p.value())},
                {"k", str(k)},
                {"a", str(a)},
                {"n", n.get_str()},
                {"v_p(S(n,k))", str(v)},
                {"expected", str(expected)}},
               "v_p(S(n, k)) breaks the slope-one identity");
        break;
      }
    }
  }
  r.derived["cells"] = checked;
  if (checked == 0 && r.passed()) {
    r.outcome = Outcome::Skipped;
    r.notes.push_back("s_max is below m0 - 1; nothing to check");
  }
  r.runtime_ms = clock.ms();
  return r;
}

VerifierReport verify_conjecture_structure(Prime p, std::uint64_t k, const TreeOptions& options) {
  Stopwatch clock;
  if (p.value() != 2 && k >= p.value())
    throw DomainError("the odd-prime split law is stated for k < p");
  VerifierReport r;
  r.claim = "conjecture";
  r.parameters = {{"p", str(p.value())}, {"k", str(k)}, {"depth", str(options.depth)}, {"extra", str(options.extra)}};
  r.notes.push_back(p.value() == 2 ? "classes of n modulo 2^(M+1)" : "classes of n modulo (p-1) p^M");

  const TreeReport tree = build_tree(p, k, options);
  r.derived["mu"] = static_cast<std::int64_t>(tree.mu);
  r.derived["depth"] = tree.depth;
  if (!tree.stabilized_at) {
    r.fail({{"p", str(p.value())}, {"k", str(k)}, {"depth", str(tree.depth)}}, "class tree did not stabilize");
    r.runtime_ms = clock.ms();
    return r;
  }
  const int stab = *tree.stabilized_at;
  const int m0 = *tree.m0_observed;
  r.derived["stabilized_at"] = stab;
  r.derived["m0_observed"] = m0;
  for (const std::string& e : tree.errors)
    r.fail({{"p", str(p.value())}, {"k", str(k)}}, e);
  for (const std::string& v : tree.violations)
    r.fail({{"p", str(p.value())}, {"k", str(k)}}, v);

  for (const LevelSummary& s : tree.levels) {
    if (s.level < stab)
      continue;
    if (s.level < tree.depth && (!s.shape_ok || !s.law_ok))
      r.fail({{"p", str(p.value())}, {"k", str(k)}, {"level", str(s.level)}},
             "split shape or least-valuation law fails past stabilization");
    if (s.level > stab && s.constant != (p.value() - 1) * tree.mu)
      r.fail({{"p", str(p.value())},
              {"k", str(k)},
              {"level", str(s.level)},
              {"constant", str(static_cast<std::uint64_t>(s.constant))}},
             "constant class count differs from (p-1) mu");
  }

  const std::int64_t l_max = static_cast<std::int64_t>(k - k / p.value()) - 1;
  std::int64_t affine_levels = tree.depth;
  std::int64_t stabilized = 0;
  for (const Chain& c : tree.chains) {
    affine_levels = std::min<std::int64_t>(affine_levels, tree.depth - m0);
    if (!c.stabilized || !c.l || !c.alpha)
      continue;
    ++stabilized;
    const std::int64_t l = *c.l;
    if (l < 1 || l > l_max)
      r.fail({{"p", str(p.value())}, {"k", str(k)}, {"a0", str(static_cast<std::uint64_t>(c.a0))}, {"l", str(l)}},
             "slope outside 1..k-floor(k/p)-1");
    for (const ChainLevel& lv : c.levels) {
      if (lv.level < m0 || !lv.least)
        continue;
      if (*lv.least != *c.alpha + l * (lv.level - m0)) {
        r.fail({{"p", str(p.value())},
                {"k", str(k)},
                {"a0", str(static_cast<std::uint64_t>(c.a0))},
                {"level", str(lv.level)},
                {"least", str(*lv.least)}},
               "least valuation off the affine law");
        break;
      }
    }
  }
  r.derived["affine_levels"] = tree.chains.empty() ? 0 : affine_levels;
  r.derived["chains_stabilized"] = stabilized;
  r.runtime_ms = clock.ms();
  return r;
}

VerifierReport reproduce_multiplicity_remark(Prime p, const Integer& a, const Integer& b, int depth) {
  Stopwatch clock;
  if (a == b)
    throw DomainError("the remark needs a != b");
  if (!is_principal_unit(p, a) || !is_principal_unit(p, b))
    throw DomainError("a and b must be principal units");
  VerifierReport r;
  r.claim = "remark";
  r.parameters = {{"p", str(p.value())}, {"a", a.get_str()}, {"b", b.get_str()}, {"depth", str(depth)}};
  const ExpSum f(p, {{Rational(1), a * a}, {Rational(1), b * b}, {Rational(-2), a * b}});
  const std::map<std::string, std::string> witness{{"p", str(p.value())}, {"a", a.get_str()}, {"b", b.get_str()}};

  if (*f.exact_value(0) != 0)
    r.fail(witness, "f(0) != 0");
  const PadicInt zero(p, f.precision(), 0L);
  if (!expsum_derivative(f, 1, zero).is_zero())
    r.fail(witness, "f'(0) != 0");
  const Multiplicity m = multiplicity_at_zero(f, zero);
  r.derived["l_derivative"] = m.order;
  if (!m.exact || m.order != 2)
    r.fail(witness, "derivative multiplicity at 0 is not 2");

  TreeOptions options;
  options.depth = depth;
  const TreeReport tree = build_tree(f, options);
  const Chain* chain = chain_at_zero(tree, 0);
  if (!chain || !chain->l) {
    r.fail(witness, "ball descent found no stabilized chain at 0");
  } else {
    r.derived["l_slope"] = *chain->l;
    if (*chain->l != m.order)
      r.fail(witness, "ball-descent slope and derivative multiplicity disagree");
  }

  // Direct differences v_p(f(p^s)) - v_p(f(p^(s-1))).
  std::optional<std::int64_t> previous;
  for (int s = 2; s <= 8; ++s) {
    const PadicInt x(p, f.precision(), prime_power(p, s));
    const PadicValuation v = expsum_eval(f, x).valuation();
    if (!v.exact) {
      r.fail(witness, "f(p^" + str(s) + ") vanishes at working precision");
      break;
    }
    if (previous && v.value - *previous != 2) {
      auto w = witness;
      w["s"] = str(s);
      w["difference"] = str(v.value - *previous);
      r.fail(w, "v_p(f(p^s)) does not grow by 2");
      break;
    }
    previous = v.value;
  }
  r.runtime_ms = clock.ms();
  return r;
}

VerifierReport verify_decomposition(std::uint64_t n_max, std::uint64_t k_max, const std::vector<unsigned long>& primes) {
  Stopwatch clock;
  VerifierReport r;
  r.claim = "decomposition";
  std::string plist;
  for (unsigned long q : primes)
    plist += (plist.empty() ? "" : ",") + std::to_string(q);
  r.parameters = {{"n_max", str(n_max)}, {"k_max", str(k_max)}, {"primes", plist}};
  std::int64_t checked = 0;
  for (unsigned long q : primes) {
    const Prime p(q);
    for (std::uint64_t k = 1; k <= k_max && r.passed(); ++k) {
      for (std::uint64_t n = 1; n <= n_max; ++n) {
        const Decomposition d = decompose_check(n, k, p);
        ++checked;
        if (!d.ok()) {
          r.fail({{"p", str(q)},
                  {"n", str(n)},
                  {"k", str(k)},
                  {"T_p", d.t_part.get_str()},
                  {"tail", d.tail.get_str()},
                  {"k!S(n,k)", d.surjections.get_str()}},
                 d.sum_matches ? "v_p(tail) < n" : "T_p + tail != k! S(n, k)");
          break;
        }
      }
    }
  }
  r.derived["cells"] = checked;
  r.runtime_ms = clock.ms();
  return r;
}

VerifierReport verify_all() {
  Stopwatch clock;
  VerifierReport r;
  r.claim = "all";
  auto add = [&](VerifierReport child) {
    if (!child.passed())
      r.outcome = Outcome::Fail;
    r.children.push_back(std::move(child));
  };
  add(verify_lengyel_wannemacker(30, 20));
  add(verify_decomposition(40, 12, {2, 3, 5}));
  add(verify_period(Prime(3), 2, 1, 100));
  add(verify_period(Prime(5), 3, 2, 200));
  add(verify_period(Prime(7), 4, 3, 200));
  for (unsigned long q : {3UL, 5UL, 7UL})
    for (std::uint64_t k = 1; k <= 12; ++k)
      add(verify_gessel_lengyel(Prime(q), k));
  for (unsigned long q : {3UL, 5UL, 7UL, 11UL})
    for (std::uint64_t k = 2; k < q; ++k)
      for (std::uint64_t a = 1; a < k; ++a)
        add(verify_final_theorem(Prime(q), k, a));
  TreeOptions deep;
  deep.extra = 10;
  for (std::uint64_t k = 1; k <= 20; ++k)
    add(verify_conjecture_structure(Prime(2), k, deep));
  for (auto [q, k] : std::vector<std::pair<unsigned long, std::uint64_t>>{{5, 3}, {7, 3}, {7, 5}, {11, 4}})
    add(verify_conjecture_structure(Prime(q), k));
  add(reproduce_multiplicity_remark(Prime(3), 4, 7));
  add(reproduce_multiplicity_remark(Prime(5), 6, 11));
  std::int64_t failed = 0;
  for (const VerifierReport& c : r.children)
    if (!c.passed())
      ++failed;
  r.derived["reports"] = static_cast<std::int64_t>(r.children.size());
  r.derived["failed"] = failed;
  r.runtime_ms = clock.ms();
  return r;
}

VerifierReport sweep_slopes(const std::vector<unsigned long>& primes, Range k_range, const TreeOptions& options) {
  Stopwatch clock;
  VerifierReport r;
  r.claim = "sweep";
  std::string plist;
  for (unsigned long q : primes)
    plist += (plist.empty() ? "" : ",") + std::to_string(q);
  r.parameters = {{"primes", plist}, {"k_range", str(k_range.lo) + ".." + str(k_range.hi)}};
  r.outcome = Outcome::Observed;
  std::int64_t trees = 0, chains = 0, unresolved = 0, max_l = 0, hits = 0;
  for (unsigned long q : primes) {
    const Prime p(q);
    for (std::uint64_t k = std::max<std::uint64_t>(k_range.lo, 1); k <= k_range.hi; ++k) {
      try {
        const TreeReport tree = build_tree(p, k, options);
        ++trees;
        for (const Chain& c : tree.chains) {
          ++chains;
          if (!c.l) {
            ++unresolved;
            continue;
          }
          max_l = std::max<std::int64_t>(max_l, *c.l);
          if (*c.l > 1) {
            ++hits;
            r.notes.push_back("p=" + str(q) + " k=" + str(k) + " a0=" + str(static_cast<std::uint64_t>(c.a0)) +
                              ": slope " + str(*c.l));
          }
        }
        for (const std::string& e : tree.errors)
          r.notes.push_back("p=" + str(q) + " k=" + str(k) + ": " + e);
      } catch (const Error& e) {
        r.notes.push_back("p=" + str(q) + " k=" + str(k) + ": " + e.what());
      }
    }
  }
  r.derived["trees"] = trees;
  r.derived["chains"] = chains;
  r.derived["unresolved_chains"] = unresolved;
  r.derived["max_l"] = max_l;
  r.derived["slope_above_one"] = hits;
  r.runtime_ms = clock.ms();
  return r;
}

} // namespace stirval
