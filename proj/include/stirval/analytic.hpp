#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stirval/padic_int.hpp"

namespace stirval {

// True when u = 1 mod p (odd p) or u = 1 mod 4 (p = 2).
bool is_principal_unit(Prime p, const Integer& u);

// u^x for a principal unit u and x in Z_p, summed as the binomial series
// sum_j C(X, j) (u - 1)^j where X is the integer representative of x.
// The result carries precision min(N_u, N_x + v_p(u - 1)).
PadicInt padic_pow(const PadicInt& u, const PadicInt& x);

// log_p(a) = sum_{j >= 1} (-1)^(j-1) (a - 1)^j / j, to the precision of a.
PadicInt padic_log(const PadicInt& a);

struct ExpTerm {
  Rational coefficient;
  Integer base;
};

// f(x) = sum_i c_i u_i^x with p-integral rational c_i and distinct principal
// units u_i, evaluated with `precision` p-adic digits.
class ExpSum {
public:
  ExpSum(Prime p, std::vector<ExpTerm> terms, int precision = kDefaultPrecision);

  // f_{a0,k}: coefficients (-1)^(k-j) C(k, j) j^a0 and bases j^(p-1) over
  // j <= k prime to p (bases j^2 over odd j for p = 2), so that f(x) is
  // T_p(a0 + x (p - 1), k), or T_2(a0 + 2x, k).
  static ExpSum stirling(Prime p, std::uint64_t k, unsigned a0, int precision = kDefaultPrecision);

  Prime prime() const noexcept { return p_; }
  int precision() const noexcept { return precision_; }
  const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_stirling() const noexcept { return stirling_k_ != 0; }
  std::uint64_t k() const noexcept { return stirling_k_; }
  unsigned a0() const noexcept { return a0_; }
  // n = a0 + x (p - 1), or a0 + 2x for p = 2. Stirling sums only.
  Integer n_of(const Integer& x) const;
  // Step between consecutive x in n-space: p - 1, or 2 for p = 2.
  unsigned long n_step() const;

  std::int64_t coefficient_valuation(std::size_t i) const { return cval_[i]; }
  // v_p(u_i - 1); nullopt for the constant base u_i = 1.
  std::optional<std::int64_t> base_valuation(std::size_t i) const { return eval_[i]; }
  std::int64_t c_min() const;
  // Minimum of v_p(u_i - 1) over bases other than 1; the precision if there are none.
  std::int64_t e_min() const;

  const std::vector<PadicInt>& logs() const noexcept { return logs_; }
  const PadicInt& coefficient_padic(std::size_t i) const { return coeffs_[i]; }

  ExpSum with_precision(int precision) const;

  // Exact value at a non-negative integer, or nullopt when it would need more
  // than `max_bits` bits.
  std::optional<Rational> exact_value(const Integer& x, std::size_t max_bits = std::size_t{1} << 20) const;

private:
  Prime p_;
  std::vector<ExpTerm> terms_;
  int precision_;
  std::uint64_t stirling_k_ = 0;
  unsigned a0_ = 0;
  std::vector<std::int64_t> cval_;
  std::vector<std::optional<std::int64_t>> eval_;
  std::vector<PadicInt> coeffs_;
  std::vector<PadicInt> logs_;
};

// f^(i)(x) for i = 0..order, each with its own certified precision.
std::vector<PadicInt> expsum_jet(const ExpSum& f, const PadicInt& x, int order);
PadicInt expsum_eval(const ExpSum& f, const PadicInt& x);
PadicInt expsum_derivative(const ExpSum& f, int order, const PadicInt& x);

struct Multiplicity {
  int order = 0;
  // false: every derivative up to max_order vanished, so only l >= order is known.
  bool exact = true;
};

// Least i with f^(i)(x0) certifiably nonzero. max_order < 0 means #terms - 1,
// the largest order a zero of a sum of distinct exponentials can have; when
// all of those vanish, the precision is insufficient and PrecisionError is thrown.
Multiplicity multiplicity_at_zero(const ExpSum& f, const PadicInt& x0, int max_order = -1);

} // namespace stirval
