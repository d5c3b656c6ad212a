#include "stirval/stirling.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

#include "stirval/errors.hpp"

namespace stirval {

namespace {

void check_cells(std::uint64_t n, std::uint64_t k, const StirlingLimits& limits) {
  if (n > limits.max_n)
    throw ResourceError("n = " + std::to_string(n) + " exceeds the exact-arithmetic cap " +
                        std::to_string(limits.max_n));
  if (n * std::min(n, k) > limits.max_cells)
    throw ResourceError("S(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds the table cap");
}

Integer mod_pos(const Integer& x, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

// j^n mod p^digits, reducing the exponent of units modulo the group order.
Integer power_mod(std::uint64_t j, const Integer& n, Prime p, int digits, const Integer& modulus,
                  const Integer& unit_order) {
  Integer base(static_cast<unsigned long>(j));
  Integer out;
  if (j % p.value() != 0) {
    Integer e = mod_pos(n, unit_order);
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), modulus.get_mpz_t());
    return out;
  }
  const std::int64_t v = vp(p, base).value();
  if (n * v >= digits)
    return Integer(0);
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), n.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

Integer signed_binomial(std::uint64_t k, std::uint64_t j) {
  Integer c = binomial(k, j);
  return ((k - j) % 2 == 0) ? c : Integer(-c);
}

Integer closed_form_mod(const Integer& n, std::uint64_t k, Prime p, int digits, bool units_only) {
  if (n < 1 || k < 1)
    throw DomainError("Stirling arguments must satisfy n, k >= 1");
  if (digits <= 0)
    return Integer(0);
  const Integer modulus = prime_power(p, digits);
  const Integer unit_order = prime_power(p, digits - 1) * (p.value() - 1);
  Integer sum = 0;
  for (std::uint64_t j = 1; j <= k; ++j) {
    if (units_only && j % p.value() == 0)
      continue;
    sum += signed_binomial(k, j) * power_mod(j, n, p, digits, modulus, unit_order);
  }
  return mod_pos(sum, modulus);
}

} // namespace

Integer stirling_exact(std::uint64_t n, std::uint64_t k, const StirlingLimits& limits) {
  if (k > n)
    return Integer(0);
  if (k == 0)
    return Integer(n == 0 ? 1 : 0);
  check_cells(n, k, limits);
  // row[j] holds S(i, j) for the current i; updated in place from high j down.
  std::vector<Integer> row(k + 1, Integer(0));
  row[0] = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const std::uint64_t top = std::min(i, k);
    for (std::uint64_t j = top; j >= 1; --j)
      row[j] = row[j - 1] + row[j] * static_cast<unsigned long>(j);
    row[0] = 0;
  }
  return row[k];
}

Integer surjections_closed_form(std::uint64_t n, std::uint64_t k, const StirlingLimits& limits) {
  check_cells(n, k, limits);
  Integer sum = 0;
  for (std::uint64_t j = 1; j <= k; ++j) {
    Integer power;
    mpz_ui_pow_ui(power.get_mpz_t(), j, n);
    sum += signed_binomial(k, j) * power;
  }
  return sum;
}

Integer surjections_mod(const Integer& n, std::uint64_t k, Prime p, int digits) {
  return closed_form_mod(n, k, p, digits, false);
}

Integer stirling_mod(const Integer& n, std::uint64_t k, Prime p, int m) {
  if (m < 0)
    throw DomainError("negative modulus exponent");
  const std::int64_t shift = vp_factorial(p, k);
  const int digits = m + static_cast<int>(shift);
  const Integer scaled = surjections_mod(n, k, p, digits);
  const Integer p_shift = prime_power(p, shift);
  if (scaled % p_shift != 0)
    throw PrecisionError("k! S(n, k) residue is not divisible by p^v_p(k!) at working modulus");
  const Integer modulus = prime_power(p, m);
  if (m == 0)
    return Integer(0);
  Integer inv;
  Integer unit = mod_pos(unit_part(p, factorial(k)), modulus);
  mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), modulus.get_mpz_t());
  return mod_pos(Integer(scaled / p_shift) * inv, modulus);
}

Integer t_p_exact(std::uint64_t n, std::uint64_t k, Prime p, const StirlingLimits& limits) {
  check_cells(n, k, limits);
  Integer sum = 0;
  for (std::uint64_t j = 1; j <= k; ++j) {
    if (j % p.value() == 0)
      continue;
    Integer power;
    mpz_ui_pow_ui(power.get_mpz_t(), j, n);
    sum += signed_binomial(k, j) * power;
  }
  return sum;
}

Integer t_p_mod(const Integer& n, std::uint64_t k, Prime p, int digits) {
  return closed_form_mod(n, k, p, digits, true);
}

Valuation stirling_valuation(Prime p, const Integer& n, std::uint64_t k, int max_digits) {
  if (n < 1 || k < 1)
    throw DomainError("Stirling arguments must satisfy n, k >= 1");
  if (n < k)
    return Valuation::infinity();
  for (int digits = 64;; digits *= 2) {
    const int m = std::min(digits, max_digits);
    const Integer r = stirling_mod(n, k, p, m);
    if (r != 0)
      return vp(p, r);
    if (m == max_digits)
      throw PrecisionError("v_p(S(n, k)) exceeds " + std::to_string(max_digits) + " digits");
  }
}

Decomposition decompose_check(std::uint64_t n, std::uint64_t k, Prime p) {
  Decomposition d;
  d.t_part = t_p_exact(n, k, p);
  d.surjections = surjections_closed_form(n, k);
  d.tail = 0;
  for (std::uint64_t j = p.value(); j <= k; j += p.value()) {
    Integer power;
    mpz_ui_pow_ui(power.get_mpz_t(), j, n);
    d.tail += signed_binomial(k, j) * power;
  }
  d.sum_matches = (d.t_part + d.tail == d.surjections) && (d.surjections == factorial(k) * stirling_exact(n, k));
  d.tail_valuation = vp(p, d.tail);
  d.tail_bound_holds = d.tail_valuation >= Valuation(static_cast<std::int64_t>(n));
  return d;
}

int ceil_log(Prime p, std::uint64_t k) {
  if (k == 0)
    throw DomainError("ceil(log_p k) needs k >= 1");
  int c = 0;
  Integer power = 1;
  while (power < static_cast<unsigned long>(k)) {
    power *= p.value();
    ++c;
  }
  return c;
}

Integer period_length(Prime p, std::uint64_t k, int m) {
  if (p.value() == 2)
    throw DomainError("period L_{p^m} is defined for odd primes only");
  if (k < 1 || m < 1)
    throw DomainError("period needs k, m >= 1");
  const int e = std::max(0, ceil_log(p, k) + m - 2);
  return prime_power(p, e) * (p.value() - 1);
}

VerifierReport verify_period(Prime p, std::uint64_t k, int m, std::uint64_t witness_range, std::uint64_t offset) {
  const auto start = std::chrono::steady_clock::now();
  VerifierReport report;
  report.claim = "period";
  report.parameters = {{"p", std::to_string(p.value())},
                       {"k", std::to_string(k)},
                       {"m", std::to_string(m)},
                       {"witness_range", std::to_string(witness_range)},
                       {"offset", std::to_string(offset)}};
  const Integer period = period_length(p, k, m);
  report.notes.push_back("L = " + period.get_str());
  if (period.fits_slong_p())
    report.derived["L"] = period.get_si();
  // Terms j^n with p | j vanish modulo p^(m + v_p(k!)) only from n = m + v_p(k!) on.
  const std::uint64_t first = std::max<std::uint64_t>(k, m + vp_factorial(p, k)) + offset;
  report.derived["first_n"] = static_cast<std::int64_t>(first);
  for (std::uint64_t i = 0; i <= witness_range; ++i) {
    const Integer n(static_cast<unsigned long>(first + i));
    const Integer lhs = stirling_mod(n + period, k, p, m);
    const Integer rhs = stirling_mod(n, k, p, m);
    if (lhs != rhs) {
      report.fail({{"n", n.get_str()},
                   {"k", std::to_string(k)},
                   {"L", period.get_str()},
                   {"S(n+L,k) mod p^m", lhs.get_str()},
                   {"S(n,k) mod p^m", rhs.get_str()}},
                  "S(n + L, k) and S(n, k) differ modulo p^m");
      break;
    }
  }
  report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return report;
}

} // namespace stirval
