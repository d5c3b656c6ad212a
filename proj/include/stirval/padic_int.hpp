#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stirval/valuation.hpp"

namespace stirval {

// What is known about v_p of a truncated p-adic integer: the exact value, or
// only the lower bound "v >= precision" when the residue vanishes.
struct PadicValuation {
  std::int64_t value = 0;
  bool exact = false;

  std::string to_string() const;
  friend bool operator==(const PadicValuation&, const PadicValuation&) = default;
};

// An element of Z_p known modulo p^precision.
//
// Precision propagates pessimistically: every binary operation yields the
// minimum of its operands' precisions. Values are immutable.
class PadicInt {
public:
  // Reduces `value` (any sign) modulo p^precision.
  PadicInt(Prime p, int precision, const Integer& value);
  PadicInt(Prime p, int precision, long value) : PadicInt(p, precision, Integer(value)) {}

  // The denominator of x must be prime to p.
  static PadicInt from_rational(Prime p, int precision, const Rational& x);

  Prime prime() const noexcept { return prime_; }
  int precision() const noexcept { return precision_; }
  const Integer& residue() const noexcept { return residue_; }
  Integer modulus() const;

  PadicValuation valuation() const;
  bool is_unit() const { return precision_ > 0 && residue_ % prime_.value() != 0; }
  bool is_zero() const { return residue_ == 0; }

  // Truncates to a smaller precision; asking for more throws PrecisionError.
  PadicInt with_precision(int precision) const;

  PadicInt inverse() const;
  PadicInt operator-() const;

  // Base-p digits, least significant first; always `precision` entries.
  std::vector<unsigned long> digits() const;

  // True when the two values agree modulo p^min(N_a, N_b).
  bool agrees_with(const PadicInt& other) const;

  friend PadicInt operator+(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator-(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator*(const PadicInt& a, const PadicInt& b);

  // Same prime, same precision, same residue.
  friend bool operator==(const PadicInt& a, const PadicInt& b);

private:
  Prime prime_;
  int precision_;
  Integer residue_;
};

enum class ArithOp { Add, Sub, Mul, Invert };

// Dispatching form of the ring operations; `b` is ignored for Invert.
PadicInt padic_arith(ArithOp op, const PadicInt& a, const PadicInt& b);

// The closed ball {x in Z_p : v_p(x - center) >= radius}. Its trace on Z is the
// congruence class of the center modulo p^radius.
class Ball {
public:
  Ball(PadicInt center, int radius);

  Prime prime() const noexcept { return center_.prime(); }
  const PadicInt& center() const noexcept { return center_; }
  int radius() const noexcept { return radius_; }
  Integer modulus() const;
  // Canonical representative of the class, in [0, p^radius).
  Integer reduced_center() const;

  bool contains(const Integer& x) const;
  bool contains(const Ball& other) const;
  bool disjoint_from(const Ball& other) const;

  // The p balls of radius + 1 partitioning this one, in increasing order of
  // their reduced centers.
  std::vector<Ball> children() const;

private:
  PadicInt center_;
  int radius_;
};

} // namespace stirval
