#include "stirval/padic_int.hpp"

#include <algorithm>

#include "stirval/errors.hpp"

namespace stirval {

namespace {

void require_same_prime(const PadicInt& a, const PadicInt& b) {
  if (a.prime() != b.prime())
    throw DomainError("p-adic operands have different primes (" + std::to_string(a.prime().value()) +
                      " vs " + std::to_string(b.prime().value()) + ")");
}

Integer reduce(const Integer& x, const Integer& modulus) {
  Integer r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

} // namespace

std::string PadicValuation::to_string() const {
  return exact ? std::to_string(value) : ">=" + std::to_string(value);
}

PadicInt::PadicInt(Prime p, int precision, const Integer& value) : prime_(p), precision_(precision) {
  if (precision < 0)
    throw DomainError("negative p-adic precision");
  residue_ = reduce(value, prime_power(p, precision));
}

PadicInt PadicInt::from_rational(Prime p, int precision, const Rational& x) {
  const Integer& den = x.get_den();
  if (den % p.value() == 0)
    throw DomainError("rational " + x.get_str() + " is not a " + std::to_string(p.value()) +
                      "-adic integer");
  PadicInt num(p, precision, x.get_num());
  if (den == 1)
    return num;
  return num * PadicInt(p, precision, den).inverse();
}

Integer PadicInt::modulus() const { return prime_power(prime_, precision_); }

PadicValuation PadicInt::valuation() const {
  if (residue_ == 0)
    return {precision_, false};
  return {vp(prime_, residue_).value(), true};
}

PadicInt PadicInt::with_precision(int precision) const {
  if (precision > precision_)
    throw PrecisionError("cannot raise precision from " + std::to_string(precision_) + " to " +
                         std::to_string(precision) + " without recomputation");
  return PadicInt(prime_, precision, residue_);
}

PadicInt PadicInt::inverse() const {
  if (!is_unit())
    throw NotInvertibleError(residue_.get_str() + " is not a unit mod " + std::to_string(prime_.value()));
  Integer inv;
  Integer mod = modulus();
  mpz_invert(inv.get_mpz_t(), residue_.get_mpz_t(), mod.get_mpz_t());
  return PadicInt(prime_, precision_, inv);
}

PadicInt PadicInt::operator-() const { return PadicInt(prime_, precision_, -residue_); }

std::vector<unsigned long> PadicInt::digits() const {
  std::vector<unsigned long> out;
  out.reserve(static_cast<std::size_t>(precision_));
  Integer rest = residue_;
  for (int i = 0; i < precision_; ++i) {
    Integer digit;
    mpz_fdiv_qr_ui(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), prime_.value());
    out.push_back(digit.get_ui());
  }
  return out;
}

bool PadicInt::agrees_with(const PadicInt& other) const {
  require_same_prime(*this, other);
  Integer mod = prime_power(prime_, std::min(precision_, other.precision_));
  return reduce(residue_ - other.residue_, mod) == 0;
}

PadicInt operator+(const PadicInt& a, const PadicInt& b) {
  require_same_prime(a, b);
  return PadicInt(a.prime_, std::min(a.precision_, b.precision_), a.residue_ + b.residue_);
}

PadicInt operator-(const PadicInt& a, const PadicInt& b) {
  require_same_prime(a, b);
  return PadicInt(a.prime_, std::min(a.precision_, b.precision_), a.residue_ - b.residue_);
}

PadicInt operator*(const PadicInt& a, const PadicInt& b) {
  require_same_prime(a, b);
  return PadicInt(a.prime_, std::min(a.precision_, b.precision_), a.residue_ * b.residue_);
}

bool operator==(const PadicInt& a, const PadicInt& b) {
  return a.prime_ == b.prime_ && a.precision_ == b.precision_ && a.residue_ == b.residue_;
}

PadicInt padic_arith(ArithOp op, const PadicInt& a, const PadicInt& b) {
  switch (op) {
  case ArithOp::Add:
    return a + b;
  case ArithOp::Sub:
    return a - b;
  case ArithOp::Mul:
    return a * b;
  case ArithOp::Invert:
    return a.inverse();
  }
  throw DomainError("unknown arithmetic operation");
}

Ball::Ball(PadicInt center, int radius) : center_(std::move(center)), radius_(radius) {
  if (radius < 0)
    throw DomainError("negative ball radius");
  if (center_.precision() < radius)
    throw PrecisionError("ball center known to " + std::to_string(center_.precision()) +
                         " digits cannot pin a ball of radius " + std::to_string(radius));
}

Integer Ball::modulus() const { return prime_power(prime(), radius_); }

Integer Ball::reduced_center() const { return reduce(center_.residue(), modulus()); }

bool Ball::contains(const Integer& x) const { return reduce(x - center_.residue(), modulus()) == 0; }

bool Ball::contains(const Ball& other) const {
  return other.prime() == prime() && other.radius_ >= radius_ && contains(other.center_.residue());
}

bool Ball::disjoint_from(const Ball& other) const { return !contains(other) && !other.contains(*this); }

std::vector<Ball> Ball::children() const {
  const Integer base = reduced_center();
  const Integer step = modulus();
  const int child_precision = std::max(center_.precision(), radius_ + 1);
  std::vector<Ball> out;
  out.reserve(prime().value());
  for (unsigned long i = 0; i < prime().value(); ++i)
    out.emplace_back(PadicInt(prime(), child_precision, base + step * i), radius_ + 1);
  return out;
}

} // namespace stirval
