#ifndef KUHOM_LOCAL_SCALAR_HPP
#define KUHOM_LOCAL_SCALAR_HPP

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace kuhom {

// An element of the p-local integers Z_(p): an exact reduced fraction whose
// denominator is kept coprime to p at every use site. The fraction itself
// does not store p; the p-dependent operations (valuation, unit_part, ...)
// take the prime as an argument and check locality there.
//
// Canonical form: gcd(num, den) = 1, den > 0, zero is 0/1. Equality is
// structural.
class LocalScalar {
public:
  LocalScalar() : q_(0) {}
  LocalScalar(long n) : q_(n) {}
  LocalScalar(const mpz_class& n) : q_(n) {}
  LocalScalar(const mpz_class& num, const mpz_class& den);
  LocalScalar(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  static LocalScalar from_decimal(const std::string& num, const std::string& den);

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  int sign() const { return sgn(q_); }

  LocalScalar operator-() const { return LocalScalar(mpq_class(-q_)); }
  LocalScalar operator+(const LocalScalar& o) const { return LocalScalar(mpq_class(q_ + o.q_)); }
  LocalScalar operator-(const LocalScalar& o) const { return LocalScalar(mpq_class(q_ - o.q_)); }
  LocalScalar operator*(const LocalScalar& o) const { return LocalScalar(mpq_class(q_ * o.q_)); }
  // Exact rational division; p-locality of results is the caller's concern
  // (all internal uses divide by units or by p^v with v <= valuation).
  LocalScalar operator/(const LocalScalar& o) const;
  LocalScalar& operator+=(const LocalScalar& o) { q_ += o.q_; return *this; }
  LocalScalar& operator-=(const LocalScalar& o) { q_ -= o.q_; return *this; }
  LocalScalar& operator*=(const LocalScalar& o) { q_ *= o.q_; return *this; }

  bool operator==(const LocalScalar& o) const { return q_ == o.q_; }
  bool operator!=(const LocalScalar& o) const { return q_ != o.q_; }

  std::string str() const;

private:
  mpq_class q_;
};

// p-adic valuation; std::nullopt encodes +infinity (s = 0).
std::optional<long> valuation(const LocalScalar& s, long p);

// The unit u with s = p^valuation(s) * u. Throws std::domain_error on zero.
LocalScalar unit_part(const LocalScalar& s, long p);

// Exact reciprocal of a p-local unit. Throws std::domain_error when
// valuation(s, p) != 0 (the reciprocal would leave Z_(p)).
LocalScalar invert_unit(const LocalScalar& s, long p);

// Image of s under Z_(p) -> Z/p^N, as the canonical residue in [0, p^N).
mpz_class reduce_mod(const LocalScalar& s, long p, int N);

// u^e for e of either sign; negative e requires u to be a p-local unit.
LocalScalar pow_scalar(const LocalScalar& u, long e, long p);

bool is_prime(long p);
mpz_class pow_z(long base, long exp);
mpz_class binomial(const mpz_class& n, unsigned long k);

// Number of carries when adding a and b in base p (Kummer's theorem:
// this is the p-adic valuation of C(a+b, a)).
long carry_count(const mpz_class& a, const mpz_class& b, long p);

}  // namespace kuhom

#endif
