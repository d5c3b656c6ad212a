#include "stirval/valuation.hpp"

#include "stirval/errors.hpp"

namespace stirval {

bool is_prime(unsigned long n) {
  if (n < 2)
    return false;
  if (n < 4)
    return true;
  if (n % 2 == 0)
    return false;
  for (unsigned long d = 3; d <= n / d; d += 2)
    if (n % d == 0)
      return false;
  return true;
}

Prime::Prime(unsigned long value) : value_(value) {
  if (!is_prime(value))
    throw DomainError(std::to_string(value) + " is not a prime");
}

std::int64_t Valuation::value() const {
  if (infinite_)
    throw DomainError("valuation is +infinity");
  return value_;
}

std::string Valuation::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

Valuation vp(Prime p, const Integer& x) {
  if (x == 0)
    return Valuation::infinity();
  Integer rest;
  Integer base(p.value());
  auto removed = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), base.get_mpz_t());
  return Valuation(static_cast<std::int64_t>(removed));
}

Valuation vp_rational(Prime p, const Rational& x) {
  if (x == 0)
    return Valuation::infinity();
  // mpq_class keeps numerator and denominator coprime, so p divides at most one.
  auto num = vp(p, x.get_num());
  auto den = vp(p, x.get_den());
  return Valuation(num.value() - den.value());
}

std::int64_t vp_factorial(Prime p, std::uint64_t k) {
  std::int64_t total = 0;
  while (k > 0) {
    k /= p.value();
    total += static_cast<std::int64_t>(k);
  }
  return total;
}

Integer prime_power(Prime p, std::int64_t e) {
  if (e < 0)
    throw DomainError("negative exponent for prime power");
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p.value(), static_cast<unsigned long>(e));
  return r;
}

Integer unit_part(Prime p, const Integer& x) {
  if (x == 0)
    throw DomainError("unit part of zero");
  Integer rest;
  Integer base(p.value());
  mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), base.get_mpz_t());
  return rest;
}

Integer binomial(std::uint64_t n, std::uint64_t k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Integer factorial(std::uint64_t n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

} // namespace stirval
