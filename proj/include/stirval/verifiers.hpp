#pragma once

#include <cstdint>
#include <vector>

#include "stirval/report.hpp"
#include "stirval/valuation_tree.hpp"

namespace stirval {

struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

// v_2(k! S(2^n, k)) = k - 1 for k <= k_max, n <= n_max with 2^n >= k.
VerifierReport verify_lengyel_wannemacker(std::uint64_t k_max, std::uint64_t n_max);

// v_p(k! S(a p^n (p-1), k)) is constant over the grid; records the measured
// tau_p(k) = constant - floor((k-1)/(p-1)). When k/p is an odd integer the grid
// is only observed. Empty ranges default to a in 1..5 and
// n in c..c+4 with c = ceil(log_p k) + 1.
VerifierReport verify_gessel_lengyel(Prime p, std::uint64_t k, Range a_range = {}, Range n_range = {});

// For a < k < p: slope 1 along the chain through n = a, and
// v_p(S(a + u p^s (p-1), k)) = v_p(S(a + p^(m0-1) (p-1), k)) + s - m0 + 1
// for u in {1, 2, 3} prime to p and m0 - 1 <= s <= s_max.
VerifierReport verify_final_theorem(Prime p, std::uint64_t k, std::uint64_t a, int s_max = 8,
                                    const TreeOptions& options = {});

// Split shape, constant-count and least-valuation laws at every level from
// the observed stabilization on, plus the affine law of each chain.
VerifierReport verify_conjecture_structure(Prime p, std::uint64_t k, const TreeOptions& options = {});

// f(x) = (a^2)^x + (b^2)^x - 2 (ab)^x has a zero of order 2 at 0.
VerifierReport reproduce_multiplicity_remark(Prime p, const Integer& a, const Integer& b, int depth = 10);

// T_p(n, k) + tail = k! S(n, k) with v_p(tail) >= n.
VerifierReport verify_decomposition(std::uint64_t n_max, std::uint64_t k_max, const std::vector<unsigned long>& primes);

// Every claim at its default range.
VerifierReport verify_all();

// Searches chains with slope l > 1 over the given primes and k range. Results
// are observed, never asserted.
VerifierReport sweep_slopes(const std::vector<unsigned long>& primes, Range k_range, const TreeOptions& options = {});

} // namespace stirval
