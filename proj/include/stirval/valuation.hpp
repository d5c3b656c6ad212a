#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace stirval {

using Integer = mpz_class;
using Rational = mpq_class;

// Working precision (p-adic digits) used when a caller does not ask for one.
inline constexpr int kDefaultPrecision = 64;

bool is_prime(unsigned long n);

// A prime number, validated on construction.
class Prime {
public:
  explicit Prime(unsigned long value);

  constexpr unsigned long value() const noexcept { return value_; }
  constexpr operator unsigned long() const noexcept { return value_; }

private:
  unsigned long value_;
};

// Exponent of p in a rational number; +infinity exactly for zero.
class Valuation {
public:
  constexpr explicit Valuation(std::int64_t value) noexcept : value_(value) {}

  static constexpr Valuation infinity() noexcept {
    Valuation v(0);
    v.infinite_ = true;
    return v;
  }

  constexpr bool is_finite() const noexcept { return !infinite_; }
  // Throws DomainError for +infinity.
  std::int64_t value() const;
  std::string to_string() const;

  friend constexpr bool operator==(const Valuation&, const Valuation&) = default;
  friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) noexcept {
    if (a.infinite_ || b.infinite_)
      return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    return a.value_ <=> b.value_;
  }
  friend constexpr Valuation operator+(const Valuation& a, const Valuation& b) noexcept {
    if (a.infinite_ || b.infinite_)
      return infinity();
    return Valuation(a.value_ + b.value_);
  }
  friend constexpr Valuation operator-(const Valuation& a, std::int64_t shift) noexcept {
    return a.infinite_ ? a : Valuation(a.value_ - shift);
  }

private:
  bool infinite_ = false;
  std::int64_t value_ = 0;
};

Valuation vp(Prime p, const Integer& x);
Valuation vp_rational(Prime p, const Rational& x);

// Legendre's formula: sum over i >= 1 of floor(k / p^i).
std::int64_t vp_factorial(Prime p, std::uint64_t k);

// p^e for e >= 0.
Integer prime_power(Prime p, std::int64_t e);

// x / p^{v_p(x)}; x must be nonzero.
Integer unit_part(Prime p, const Integer& x);

Integer binomial(std::uint64_t n, std::uint64_t k);
Integer factorial(std::uint64_t n);

} // namespace stirval
