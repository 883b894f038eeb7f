#include <kuhom/series.hpp>

#include <mutex>
#include <sstream>
#include <tuple>

namespace kuhom {

KuPoly KuPoly::monomial(const LocalScalar& c, long vexp) {
  KuPoly r;
  r.add(c, vexp);
  return r;
}

LocalScalar KuPoly::coeff(long vexp) const {
  auto it = coeff_.find(vexp);
  return it == coeff_.end() ? LocalScalar(0) : it->second;
}

void KuPoly::add(const LocalScalar& c, long vexp) {
  if (c.is_zero()) return;
  if (vexp < 0) throw std::invalid_argument("KuPoly: negative v-exponent");
  auto it = coeff_.find(vexp);
  if (it == coeff_.end()) {
    coeff_.emplace(vexp, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) coeff_.erase(it);
  }
}

KuPoly& KuPoly::operator+=(const KuPoly& o) {
  for (const auto& [e, c] : o.coeff_) add(c, e);
  return *this;
}

KuPoly KuPoly::operator+(const KuPoly& o) const {
  KuPoly r = *this;
  r += o;
  return r;
}

KuPoly KuPoly::operator-() const {
  KuPoly r;
  for (const auto& [e, c] : coeff_) r.coeff_.emplace(e, -c);
  return r;
}

KuPoly KuPoly::scaled(const LocalScalar& c, long shift) const {
  KuPoly r;
  if (c.is_zero()) return r;
  for (const auto& [e, x] : coeff_) r.add(x * c, e + shift);
  return r;
}

KuPoly KuPoly::operator*(const KuPoly& o) const {
  KuPoly r;
  for (const auto& [e, c] : coeff_)
    for (const auto& [e2, c2] : o.coeff_) r.add(c * c2, e + e2);
  return r;
}

std::string KuPoly::str() const {
  if (coeff_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : coeff_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (e == 1)
      os << "*v";
    else if (e > 1)
      os << "*v^" << e;
  }
  return os.str();
}

const char* convention_name(Convention c) {
  return c == Convention::Unsigned ? "unsigned" : "signed";
}

Convention convention_from_name(const std::string& s) {
  if (s == "unsigned") return Convention::Unsigned;
  if (s == "signed") return Convention::Signed;
  throw std::invalid_argument("unknown convention: " + s);
}

long PSeries::g(int i) const { return pow_z(p, i).get_si() - 1; }

namespace {

PSeries build_series(long p, int n, Convention conv) {
  if (!is_prime(p)) throw std::invalid_argument("m_series: p must be prime");
  if (n < 1) throw std::invalid_argument("m_series: n must be >= 1");
  PSeries s;
  s.p = p;
  s.n = n;
  s.convention = conv;
  mpz_class m = pow_z(p, n);
  size_t len = m.get_ui();
  s.coeff.reserve(len);
  // C(m, t+1) built incrementally: C(m,1) = m, C(m,t+1) = C(m,t)(m-t)/(t+1).
  mpz_class b = m;
  for (size_t t = 0; t < len; ++t) {
    mpz_class c = b;
    if (conv == Convention::Signed && (t % 2 == 1)) c = -c;
    s.coeff.emplace_back(c);
    b *= m - static_cast<long>(t) - 1;
    mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(t) + 2);
  }
  return s;
}

}  // namespace

const PSeries& m_series(long p, int n, Convention conv) {
  static std::mutex mu;
  static std::map<std::tuple<long, int, Convention>, PSeries> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, n, conv);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_series(p, n, conv)).first;
  return it->second;
}

NamedCoefficient named_coefficient(long p, int n, long t, Convention conv) {
  const PSeries& s = m_series(p, n, conv);
  if (t < 0 || static_cast<size_t>(t) >= s.size())
    throw std::invalid_argument("named_coefficient: t out of range");
  const LocalScalar& c = s.a(t);
  NamedCoefficient r;
  r.p_power = *valuation(c, p);
  r.unit = unit_part(c, p);
  r.v_power = t;
  // Kummer: v_p(C(p^n, t+1)) equals the carry count of (t+1) + (p^n-(t+1)).
  mpz_class m = pow_z(p, n);
  long kummer = carry_count(mpz_class(t + 1), m - (t + 1), p);
  if (r.p_power != kummer)
    throw std::logic_error("named_coefficient: valuation disagrees with Kummer carry count");
  return r;
}

TruncSeries TruncSeries::x(int order) {
  TruncSeries t(order);
  if (order >= 1) t.c[1] = KuPoly::monomial(LocalScalar(1), 0);
  return t;
}

TruncSeries fgl_add(const TruncSeries& f, const TruncSeries& g, Convention conv, int order) {
  if (order < 1) throw std::invalid_argument("fgl_add: order must be >= 1");
  TruncSeries r(order);
  for (int d = 0; d <= order; ++d) {
    if (d <= f.order()) r.c[d] += f.c[d];
    if (d <= g.order()) r.c[d] += g.c[d];
  }
  LocalScalar sign(conv == Convention::Unsigned ? 1 : -1);
  for (int a = 0; a <= f.order(); ++a) {
    if (f.c[a].is_zero()) continue;
    for (int b = 0; b <= g.order() && a + b <= order; ++b) {
      if (g.c[b].is_zero()) continue;
      r.c[a + b] += (f.c[a] * g.c[b]).scaled(sign, 1);
    }
  }
  return r;
}

TruncSeries compose_series(const PSeries& s, const TruncSeries& t, int order) {
  TruncSeries r(order);
  // power = t^{k+1}, built incrementally.
  TruncSeries power = t;
  for (size_t k = 0; k < s.size(); ++k) {
    const LocalScalar& ck = s.a(static_cast<long>(k));
    if (!ck.is_zero()) {
      for (int d = 0; d <= order && d <= power.order(); ++d)
        r.c[d] += power.c[d].scaled(ck, static_cast<long>(k));
    }
    if (k + 1 < s.size()) {
      TruncSeries next(order);
      for (int a = 0; a <= power.order(); ++a) {
        if (power.c[a].is_zero()) continue;
        for (int b = 0; b <= t.order() && a + b <= order; ++b)
          next.c[a + b] += power.c[a] * t.c[b];
      }
      power = next;
      bool all_zero = true;
      for (const auto& kp : power.c) all_zero = all_zero && kp.is_zero();
      if (all_zero) break;
    }
  }
  return r;
}

TruncSeries series_to_trunc(const PSeries& s, int order) {
  TruncSeries r(order);
  for (size_t t = 0; t < s.size(); ++t) {
    long d = static_cast<long>(t) + 1;
    if (d <= order) r.c[d] = KuPoly::monomial(s.a(static_cast<long>(t)), static_cast<long>(t));
  }
  return r;
}

TruncSeries m_series_iterative(long p, int n, Convention conv) {
  if (!is_prime(p)) throw std::invalid_argument("m_series_iterative: p must be prime");
  long m = pow_z(p, n).get_si();
  int order = static_cast<int>(m);
  TruncSeries x = TruncSeries::x(order);
  TruncSeries acc(order);  // [0](x) = 0
  for (long i = 0; i < m; ++i) acc = fgl_add(acc, x, conv, order);
  return acc;
}

}  // namespace kuhom
