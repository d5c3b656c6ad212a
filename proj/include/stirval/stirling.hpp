#pragma once

#include <cstdint>

#include "stirval/report.hpp"
#include "stirval/valuation.hpp"

namespace stirval {

struct StirlingLimits {
  std::uint64_t max_n = 100000;
  // Upper bound on the n * k table cells walked by the exact recurrence.
  std::uint64_t max_cells = 50'000'000;
};

// S(n, k) from the triangular recurrence S(n+1, k+1) = S(n, k) + (k+1) S(n, k+1).
// S(n, k) = 0 for k > n. Throws ResourceError above the configured caps.
Integer stirling_exact(std::uint64_t n, std::uint64_t k, const StirlingLimits& limits = {});

// k! S(n, k) = sum_{j=1}^{k} (-1)^{k-j} C(k, j) j^n, evaluated exactly.
Integer surjections_closed_form(std::uint64_t n, std::uint64_t k, const StirlingLimits& limits = {});

// k! S(n, k) mod p^digits via the closed form with modular exponentiation.
// Exponents of units are reduced modulo the order of (Z / p^digits)^*.
Integer surjections_mod(const Integer& n, std::uint64_t k, Prime p, int digits);

// S(n, k) mod p^m. Works at p^(m + v_p(k!)) and divides by k! exactly.
Integer stirling_mod(const Integer& n, std::uint64_t k, Prime p, int m);

// T_p(n, k): the closed-form sum restricted to j not divisible by p.
Integer t_p_exact(std::uint64_t n, std::uint64_t k, Prime p, const StirlingLimits& limits = {});
Integer t_p_mod(const Integer& n, std::uint64_t k, Prime p, int digits);

// v_p(S(n, k)), raising the working modulus until the residue is nonzero.
// Returns +infinity for k > n.
Valuation stirling_valuation(Prime p, const Integer& n, std::uint64_t k, int max_digits = 4096);

struct Decomposition {
  Integer t_part;
  // Sum over 0 < j <= k with p | j.
  Integer tail;
  Integer surjections;
  Valuation tail_valuation{0};
  bool sum_matches = false;
  bool tail_bound_holds = false;

  bool ok() const { return sum_matches && tail_bound_holds; }
};

// Splits k! S(n, k) = T_p(n, k) + tail and checks v_p(tail) >= n.
Decomposition decompose_check(std::uint64_t n, std::uint64_t k, Prime p);

// L = (p-1) p^(ceil(log_p k) + m - 2) for odd p. The exponent is clamped at 0
// (only k = m = 1 reaches below it, where S(n, 1) = 1 has every period).
Integer period_length(Prime p, std::uint64_t k, int m);
int ceil_log(Prime p, std::uint64_t k);

// Checks S(n + L, k) == S(n, k) mod p^m for witness_range + 1 consecutive n
// from n0 + offset, where n0 = max(k, m + v_p(k!)); below n0 the sequence
// need not be periodic yet.
VerifierReport verify_period(Prime p, std::uint64_t k, int m, std::uint64_t witness_range, std::uint64_t offset = 0);

} // namespace stirval
