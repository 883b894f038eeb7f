#include <kuhom/local_scalar.hpp>

namespace kuhom {

LocalScalar::LocalScalar(const mpz_class& num, const mpz_class& den) {
  if (sgn(den) == 0) throw std::invalid_argument("LocalScalar: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

LocalScalar LocalScalar::from_decimal(const std::string& num, const std::string& den) {
  return LocalScalar(mpz_class(num), mpz_class(den));
}

LocalScalar LocalScalar::operator/(const LocalScalar& o) const {
  if (o.is_zero()) throw std::domain_error("LocalScalar: division by zero");
  return LocalScalar(mpq_class(q_ / o.q_));
}

std::string LocalScalar::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::optional<long> valuation(const LocalScalar& s, long p) {
  if (s.is_zero()) return std::nullopt;
  mpz_class pp(p), rem;
  mpz_class den = s.den();
  if (mpz_divisible_p(den.get_mpz_t(), pp.get_mpz_t()))
    throw std::domain_error("valuation: denominator not coprime to p");
  mpz_class num = s.num();
  long v = static_cast<long>(mpz_remove(rem.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t()));
  return v;
}

LocalScalar unit_part(const LocalScalar& s, long p) {
  auto v = valuation(s, p);
  if (!v) throw std::domain_error("unit_part: zero input");
  return s / LocalScalar(pow_z(p, *v));
}

LocalScalar invert_unit(const LocalScalar& s, long p) {
  auto v = valuation(s, p);
  if (!v) throw std::domain_error("invert_unit: zero input");
  if (*v != 0) throw std::domain_error("invert_unit: input has positive valuation, inverse leaves Z_(p)");
  return LocalScalar(1) / s;
}

mpz_class reduce_mod(const LocalScalar& s, long p, int N) {
  mpz_class m = pow_z(p, N);
  mpz_class den = s.den(), inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("reduce_mod: denominator not invertible mod p^N");
  mpz_class r = (s.num() % m) * inv % m;
  if (sgn(r) < 0) r += m;
  return r;
}

LocalScalar pow_scalar(const LocalScalar& u, long e, long p) {
  LocalScalar base = u;
  if (e < 0) {
    base = invert_unit(u, p);
    e = -e;
  }
  LocalScalar acc(1);
  for (long i = 0; i < e; ++i) acc *= base;
  return acc;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

mpz_class pow_z(long base, long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
  return r;
}

mpz_class binomial(const mpz_class& n, unsigned long k) {
  mpz_class r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

long carry_count(const mpz_class& a, const mpz_class& b, long p) {
  mpz_class x = a, y = b;
  long carries = 0, carry = 0;
  while (sgn(x) != 0 || sgn(y) != 0 || carry != 0) {
    long da = mpz_class(x % p).get_si();
    long db = mpz_class(y % p).get_si();
    long s = da + db + carry;
    carry = s >= p ? 1 : 0;
    carries += carry;
    x /= p;
    y /= p;
    if (sgn(x) == 0 && sgn(y) == 0 && carry == 0) break;
  }
  return carries;
}

}  // namespace kuhom
