#include "stirval/analytic.hpp"

#include <algorithm>
#include <limits>

#include "stirval/errors.hpp"

namespace stirval {

namespace {

Integer mod_pos(const Integer& x, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::int64_t min_unit_distance(Prime p) { return p.value() == 2 ? 2 : 1; }

void require_principal(const PadicInt& u, const char* what) {
  const Prime p = u.prime();
  if (u.precision() < min_unit_distance(p))
    throw PrecisionError(std::string(what) + ": too few digits to tell whether the base is a principal unit");
  if (!is_principal_unit(p, u.residue()))
    throw DomainError(std::string(what) + ": " + u.residue().get_str() + " is not a principal unit for p = " +
                      std::to_string(p.value()));
}

// Strips the p-part: returns v_p(x) and stores x / p^v in unit. x != 0.
std::int64_t split(Prime p, const Integer& x, Integer& unit) {
  Integer prime(p.value());
  return static_cast<std::int64_t>(mpz_remove(unit.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t()));
}

} // namespace

bool is_principal_unit(Prime p, const Integer& u) {
  const unsigned long m = p.value() == 2 ? 4 : p.value();
  return mod_pos(u - 1, Integer(m)) == 0;
}

PadicInt padic_pow(const PadicInt& u, const PadicInt& x) {
  if (u.prime() != x.prime())
    throw DomainError("padic_pow: base and exponent have different primes");
  require_principal(u, "padic_pow");
  const Prime p = u.prime();
  const Integer w = mod_pos(u.residue() - 1, u.modulus());
  if (w == 0)
    return PadicInt(p, u.precision(), 1L);
  const std::int64_t e = vp(p, w).value();
  const int out = static_cast<int>(std::min<std::int64_t>(u.precision(), x.precision() + e));
  const Integer modulus = prime_power(p, out);
  const Integer& X = x.residue();

  // Terms j >= J have valuation >= j e >= out.
  const std::int64_t terms = (out + e - 1) / e;
  Integer sum = 1;
  Integer w_power = 1;
  std::int64_t c_val = 0; // C(X, j) = p^c_val * c_unit
  Integer c_unit = 1;
  for (std::int64_t j = 1; j < terms; ++j) {
    const Integer factor = X - (j - 1);
    if (factor == 0)
      break;
    Integer unit;
    c_val += split(p, factor, unit);
    c_unit = mod_pos(c_unit * unit, modulus);
    Integer j_unit;
    c_val -= split(p, Integer(static_cast<unsigned long>(j)), j_unit);
    Integer inv;
    Integer j_mod = mod_pos(j_unit, modulus);
    mpz_invert(inv.get_mpz_t(), j_mod.get_mpz_t(), modulus.get_mpz_t());
    c_unit = mod_pos(c_unit * inv, modulus);
    w_power = mod_pos(w_power * w, modulus);
    if (c_val >= out)
      continue;
    sum += prime_power(p, c_val) * c_unit * w_power;
  }
  return PadicInt(p, out, sum);
}

PadicInt padic_log(const PadicInt& a) {
  require_principal(a, "padic_log");
  const Prime p = a.prime();
  const int n = a.precision();
  const Integer z = mod_pos(a.residue() - 1, a.modulus());
  if (z == 0)
    return PadicInt(p, n, 0L);
  const std::int64_t e = vp(p, z).value();

  auto floor_log = [&](std::int64_t j) {
    std::int64_t c = 0;
    for (std::int64_t q = static_cast<std::int64_t>(p.value()); q <= j; q *= static_cast<std::int64_t>(p.value()))
      ++c;
    return c;
  };
  // The j-th term has valuation >= j e - floor(log_p j), nondecreasing in j.
  std::int64_t terms = 1;
  while (terms * e - floor_log(terms) < n)
    ++terms;
  const int guard = static_cast<int>(floor_log(terms)) + 1;
  const Integer wide = prime_power(p, n + guard);
  const Integer modulus = prime_power(p, n);

  Integer sum = 0;
  Integer z_power = 1;
  for (std::int64_t j = 1; j < terms; ++j) {
    z_power = mod_pos(z_power * z, wide);
    Integer j_unit;
    const std::int64_t vj = split(p, Integer(static_cast<unsigned long>(j)), j_unit);
    Integer term = z_power / prime_power(p, vj);
    Integer inv;
    Integer j_mod = mod_pos(j_unit, modulus);
    mpz_invert(inv.get_mpz_t(), j_mod.get_mpz_t(), modulus.get_mpz_t());
    term = mod_pos(term * inv, modulus);
    if (j % 2 == 0)
      sum -= term;
    else
      sum += term;
  }
  return PadicInt(p, n, sum);
}

ExpSum::ExpSum(Prime p, std::vector<ExpTerm> terms, int precision)
    : p_(p), terms_(std::move(terms)), precision_(precision) {
  if (precision_ < 1)
    throw DomainError("exponential sum needs precision >= 1");
  if (terms_.empty())
    throw DomainError("exponential sum has no terms");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const ExpTerm& t = terms_[i];
    if (t.coefficient == 0)
      throw DomainError("exponential sum has a zero coefficient");
    if (t.coefficient.get_den() % p.value() == 0)
      throw DomainError("coefficient " + t.coefficient.get_str() + " is not " + std::to_string(p.value()) +
                        "-integral");
    if (!is_principal_unit(p, t.base))
      throw DomainError("base " + t.base.get_str() + " is not a principal unit for p = " +
                        std::to_string(p.value()));
    for (std::size_t j = 0; j < i; ++j)
      if (terms_[j].base == t.base)
        throw DomainError("exponential sum bases must be distinct (" + t.base.get_str() + " repeats)");
    cval_.push_back(vp_rational(p, t.coefficient).value());
    if (t.base == 1)
      eval_.push_back(std::nullopt);
    else
      eval_.push_back(vp(p, t.base - 1).value());
    coeffs_.push_back(PadicInt::from_rational(p, precision_, t.coefficient));
    logs_.push_back(padic_log(PadicInt(p, precision_, t.base)));
  }
}

ExpSum ExpSum::stirling(Prime p, std::uint64_t k, unsigned a0, int precision) {
  if (k < 1)
    throw DomainError("Stirling exponential sum needs k >= 1");
  const unsigned long classes = p.value() == 2 ? 2 : p.value() - 1;
  if (a0 >= classes)
    throw DomainError("a0 = " + std::to_string(a0) + " is outside 0.." + std::to_string(classes - 1));
  const unsigned long exponent = p.value() == 2 ? 2 : p.value() - 1;
  std::vector<ExpTerm> terms;
  for (std::uint64_t j = 1; j <= k; ++j) {
    if (j % p.value() == 0)
      continue;
    Integer c = binomial(k, j);
    if ((k - j) % 2 == 1)
      c = -c;
    Integer jj(static_cast<unsigned long>(j));
    Integer power;
    mpz_pow_ui(power.get_mpz_t(), jj.get_mpz_t(), a0);
    Integer base;
    mpz_pow_ui(base.get_mpz_t(), jj.get_mpz_t(), exponent);
    terms.push_back({Rational(c * power), base});
  }
  ExpSum f(p, std::move(terms), precision);
  f.stirling_k_ = k;
  f.a0_ = a0;
  return f;
}

unsigned long ExpSum::n_step() const { return p_.value() == 2 ? 2 : p_.value() - 1; }

Integer ExpSum::n_of(const Integer& x) const {
  if (!is_stirling())
    throw UsageError("n-space index is defined for Stirling sums only");
  return Integer(a0_) + x * n_step();
}

std::int64_t ExpSum::c_min() const { return *std::min_element(cval_.begin(), cval_.end()); }

std::int64_t ExpSum::e_min() const {
  std::int64_t best = precision_;
  for (const auto& e : eval_)
    if (e)
      best = std::min(best, *e);
  return best;
}

ExpSum ExpSum::with_precision(int precision) const {
  ExpSum f(p_, terms_, precision);
  f.stirling_k_ = stirling_k_;
  f.a0_ = a0_;
  return f;
}

std::optional<Rational> ExpSum::exact_value(const Integer& x, std::size_t max_bits) const {
  if (x < 0)
    throw DomainError("exact evaluation needs x >= 0");
  if (!x.fits_ulong_p())
    return std::nullopt;
  const unsigned long xe = x.get_ui();
  Rational sum = 0;
  for (const ExpTerm& t : terms_) {
    const std::size_t bits = mpz_sizeinbase(t.base.get_mpz_t(), 2);
    if (xe != 0 && bits > max_bits / xe)
      return std::nullopt;
    Integer power;
    mpz_pow_ui(power.get_mpz_t(), t.base.get_mpz_t(), xe);
    sum += t.coefficient * Rational(power);
  }
  sum.canonicalize();
  return sum;
}

std::vector<PadicInt> expsum_jet(const ExpSum& f, const PadicInt& x, int order) {
  if (x.prime() != f.prime())
    throw DomainError("evaluation point has a different prime");
  if (order < 0)
    throw DomainError("negative derivative order");
  const Prime p = f.prime();
  const int n = f.precision();
  const Integer modulus = prime_power(p, n);
  std::vector<Integer> values(static_cast<std::size_t>(order) + 1, Integer(0));
  std::vector<std::int64_t> precision(values.size(), n);

  for (std::size_t i = 0; i < f.size(); ++i) {
    const Integer& c = f.coefficient_padic(i).residue();
    const auto e = f.base_valuation(i);
    if (!e) {
      values[0] += c;
      continue;
    }
    const PadicInt power = padic_pow(PadicInt(p, n, f.terms()[i].base), x);
    const Integer& log = f.logs()[i].residue();
    Integer term = mod_pos(c * power.residue(), modulus);
    for (int s = 0; s <= order; ++s) {
      values[s] += term;
      // Moving x within p^N_x changes u^x by a factor 1 + O(p^(N_x + e)).
      precision[s] = std::min(precision[s], f.coefficient_valuation(i) + x.precision() + (s + 1) * *e);
      term = mod_pos(term * log, modulus);
    }
  }
  std::vector<PadicInt> out;
  out.reserve(values.size());
  for (std::size_t s = 0; s < values.size(); ++s)
    out.emplace_back(p, static_cast<int>(precision[s]), values[s]);
  return out;
}

PadicInt expsum_eval(const ExpSum& f, const PadicInt& x) { return expsum_jet(f, x, 0)[0]; }

PadicInt expsum_derivative(const ExpSum& f, int order, const PadicInt& x) {
  return expsum_jet(f, x, order).back();
}

Multiplicity multiplicity_at_zero(const ExpSum& f, const PadicInt& x0, int max_order) {
  const int guaranteed = static_cast<int>(f.size()) - 1;
  if (max_order < 0)
    max_order = guaranteed;
  const auto jet = expsum_jet(f, x0, max_order);
  for (int i = 0; i <= max_order; ++i)
    if (!jet[i].is_zero())
      return {i, true};
  if (f.size() >= 2 && max_order >= guaranteed)
    throw PrecisionError("all derivatives of order < " + std::to_string(f.size()) +
                         " vanish at working precision; the zero cannot be resolved");
  return {max_order + 1, false};
}

} // namespace stirval
