#include <kuhom/families.hpp>

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>

namespace kuhom {

namespace {

std::mutex g_tables_mu;

}  // namespace

mpz_class cd_c(int k, long t) {
  if (t < 0 || k < 2) return 0;
  if (t == 0) return 1;
  if (k == 2) return 0;
  static std::map<std::pair<int, long>, mpz_class> memo;
  std::lock_guard<std::mutex> lock(g_tables_mu);
  std::function<mpz_class(int, long)> c_rec, d_rec;
  c_rec = [&](int kk, long tt) -> mpz_class {
    if (tt < 0 || kk < 2) return 0;
    if (tt == 0) return 1;
    if (kk == 2) return 0;
    auto it = memo.find({kk, tt});
    if (it != memo.end()) return it->second;
    mpz_class v = d_rec(kk - 1, tt - 1) + c_rec(kk - 1, tt);
    memo.emplace(std::make_pair(kk, tt), v);
    return v;
  };
  d_rec = [&](int kk, long tt) -> mpz_class {
    if (tt < 0 || kk < 2) return 0;
    if (tt == 0) return 1;
    if (kk == 2) return 0;
    return c_rec(kk - 1, tt);
  };
  return c_rec(k, t);
}

mpz_class cd_d(int k, long t) {
  if (t < 0 || k < 2) return 0;
  if (t == 0) return 1;
  if (k == 2) return 0;
  return cd_c(k - 1, t);
}

mpz_class dkk(int k, long t) { return cd_d(k, t) + cd_d(k - 1, t); }

namespace {

// Row i holds pi_{i,1..i+2}; rows built iteratively since pi_{i,1} needs
// p_{i-1}(0) = sum of row i-1.
const std::vector<mpz_class>& pi_row(int i) {
  static std::vector<std::vector<mpz_class>> rows;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(rows.size()) <= i) {
    int ii = static_cast<int>(rows.size());
    if (ii == 0) {
      rows.push_back({1, 1});
      continue;
    }
    mpz_class prev0 = 0;
    for (const mpz_class& v : rows[static_cast<size_t>(ii - 1)]) prev0 += v;
    std::vector<mpz_class> row(static_cast<size_t>(ii) + 2);
    row[0] = prev0;
    row[1] = prev0;
    for (int l = 3; l <= ii + 2; ++l)
      row[static_cast<size_t>(l - 1)] =
          row[static_cast<size_t>(l - 2)] - rows[static_cast<size_t>(ii - 1)][static_cast<size_t>(l - 3)];
    rows.push_back(std::move(row));
  }
  return rows[static_cast<size_t>(i)];
}

}  // namespace

mpz_class pi_coeff(int i, int l) {
  if (i < 0 || l < 1 || l > i + 2) throw std::invalid_argument("pi_coeff: out of range");
  return pi_row(i)[static_cast<size_t>(l - 1)];
}

mpz_class pik0(int i) {
  mpz_class s = 0;
  for (const mpz_class& v : pi_row(i)) s += v;
  return s;
}

mpz_class pik(int i, int k, long t) {
  mpz_class s = 0;
  for (int l = 1; l <= i + 2; ++l) s += pi_coeff(i, l) * cd_d(k - l + 1, t);
  return s;
}

LocalScalar c_unit(long t, const LocalScalar& u1, long p) {
  LocalScalar r = pow_scalar(u1, t, p);
  return (t % 2 == 0) ? -r : r;  // (-1)^{t+1}
}

LocalScalar c_prime(long t) {
  LocalScalar r(cd_c(static_cast<int>(2 * t + 1), t));
  return (t % 2 == 0) ? -r : r;
}

LocalScalar c_rt(long r, long t, const LocalScalar& u1, long p) {
  LocalScalar x = pow_scalar(u1, t, p) * LocalScalar(cd_c(static_cast<int>(t + 2 * r + 1), r));
  return ((t + r) % 2 == 0) ? -x : x;  // (-1)^{t+r+1}
}

void QPoly::add(const std::vector<unsigned>& mono, const mpz_class& c) {
  if (sgn(c) == 0) return;
  std::vector<unsigned> key = mono;
  while (!key.empty() && key.back() == 0) key.pop_back();
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

QPoly QPoly::times_var(int var, int nvars) const {
  QPoly r;
  for (const auto& [mono, c] : terms_) {
    std::vector<unsigned> m = mono;
    m.resize(static_cast<size_t>(nvars), 0);
    m[static_cast<size_t>(var - 1)] += 1;
    r.add(m, c);
  }
  return r;
}

QPoly& QPoly::operator+=(const QPoly& o) {
  for (const auto& [mono, c] : o.terms_) add(mono, c);
  return *this;
}

QPoly QPoly::operator-() const {
  QPoly r;
  for (const auto& [mono, c] : terms_) r.terms_.emplace(mono, mpz_class(-c));
  return r;
}

LocalScalar QPoly::eval(const std::vector<LocalScalar>& xs) const {
  LocalScalar acc(0);
  for (const auto& [mono, c] : terms_) {
    LocalScalar t(c);
    for (size_t v = 0; v < mono.size(); ++v)
      for (unsigned e = 0; e < mono[v]; ++e) t *= xs.at(v);
    acc += t;
  }
  return acc;
}

std::string QPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (size_t v = 0; v < mono.size(); ++v) {
      if (mono[v] == 0) continue;
      os << "*x" << (v + 1);
      if (mono[v] > 1) os << "^" << mono[v];
    }
  }
  return os.str();
}

QPoly q_poly(int k, long p) {
  if (k < 0 || k > pow_z(p, 2).get_si() - 1) throw std::invalid_argument("q_poly: k out of range");
  std::vector<QPoly> q(static_cast<size_t>(k) + 1);
  QPoly minus_one;
  minus_one.add({}, -1);
  q[0] = minus_one;
  for (int kk = 1; kk <= k; ++kk) {
    long ihi = (kk <= p - 2) ? kk - 1 : p - 2;
    QPoly acc;
    for (long i = 0; i <= ihi; ++i)
      acc += q[static_cast<size_t>(i)].times_var(static_cast<int>(kk - i), kk);
    q[static_cast<size_t>(kk)] = -acc;
  }
  return q[static_cast<size_t>(k)];
}

int Composition::sum() const {
  int s = 0;
  for (int v : parts) s += v;
  return s;
}

namespace {

void compositions_rec(int s, int r, int cap, std::vector<int>& cur,
                      std::vector<Composition>& out) {
  if (s == 0) {
    if (r == 0) out.push_back(Composition{cur});
    return;
  }
  int hi = r - (s - 1);
  if (cap > 0) hi = std::min(hi, cap);
  for (int v = 1; v <= hi; ++v) {
    cur.push_back(v);
    compositions_rec(s - 1, r - v, cap, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Composition> compositions(int s, int r, int cap) {
  std::vector<Composition> out;
  if (s < 0 || r < 0) return out;
  std::vector<int> cur;
  compositions_rec(s, r, cap, cur, out);
  return out;
}

FamilyTable::FamilyTable(long p, Convention conv) : p_(p), conv_(conv) {
  const PSeries& s = m_series(p, 2, conv);
  w_.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) w_.push_back(unit_part(s.a(static_cast<long>(i)), p));
  q0_.resize(static_cast<size_t>(p - 1));
  q0_[0] = LocalScalar(-1);
  for (long k = 1; k <= p - 2; ++k) {
    LocalScalar acc(0);
    for (long i = 0; i <= k - 1; ++i) acc += w_[static_cast<size_t>(k - i)] * q0_[static_cast<size_t>(i)];
    q0_[static_cast<size_t>(k)] = -acc;
  }
}

const LocalScalar& FamilyTable::w(long i) const {
  if (i < 0 || static_cast<size_t>(i) >= w_.size())
    throw std::invalid_argument("FamilyTable::w: index out of range");
  return w_[static_cast<size_t>(i)];
}

const LocalScalar& FamilyTable::q0(long i) const {
  if (i < 0 || static_cast<size_t>(i) >= q0_.size())
    throw std::invalid_argument("FamilyTable::q0: index out of range");
  return q0_[static_cast<size_t>(i)];
}

LocalScalar FamilyTable::q_conv(long i, int s) const {
  if (s == 0) return q0(i);
  LocalScalar acc(0);
  long hi = std::min<long>(i, p_ - 2);
  for (long k = 0; k <= hi; ++k) acc += q0(i - k) * q_conv(k, s - 1);
  return acc;
}

LocalScalar FamilyTable::qhat0(int m, long off) const {
  if (m < 1 || m > p_ + 1) throw std::invalid_argument("qhat0: part out of range");
  if (off < 0 || off > p_ - 2) throw std::invalid_argument("qhat0: offset out of range");
  long g1 = g(1), g2 = g(2);
  LocalScalar acc(0);
  for (long k = 0; k <= p_ - 2; ++k) {
    long idx = m * g1 + off - k;
    if (idx >= 1 && idx < g2) acc += q0(k) * w(idx);
  }
  if (m * p_ - 1 <= g2) {
    long c = ((off - (m - 1)) % p_ + p_) % p_;
    if (c <= p_ - 2) acc -= q0(c) * w(m * p_ - 1);
  }
  return acc;
}

LocalScalar FamilyTable::qhat(const Composition& iota, long off) const {
  int s = static_cast<int>(iota.parts.size());
  if (s < 1) throw std::invalid_argument("qhat: empty composition");
  long window = p_ - 2;
  if (off < 0 || off > (s + 1) * window) return LocalScalar(0);
  int m = iota.parts.front();
  if (s == 1) {
    if (off <= window) {
      LocalScalar acc(0);
      for (long k = 0; k <= off; ++k) acc += q0(off - k) * qhat0(m, k);
      return acc;
    }
    long e = off - window - 1;  // overflow: subscript g1 + e
    LocalScalar acc(0);
    for (long k = e + 1; k <= window; ++k) acc += q0(k) * qhat0(m, g(1) + e - k);
    return acc;
  }
  Composition rest{std::vector<int>(iota.parts.begin() + 1, iota.parts.end())};
  if (off <= static_cast<long>(s) * window) {
    LocalScalar acc(0);
    long hi = std::min(off, window);
    for (long t = 0; t <= hi; ++t) acc += qhat0(m, t) * qhat(rest, off - t);
    return acc;
  }
  long sprime = static_cast<long>(s) * window + 1;
  long e = off - sprime;
  LocalScalar acc(0);
  for (long k = e + 1; k <= window; ++k) acc += qhat0(m, k) * qhat(rest, sprime + e - k);
  return acc;
}

const FamilyTable& family_table(long p, Convention conv) {
  static std::mutex mu;
  static std::map<std::pair<long, Convention>, FamilyTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, conv);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, FamilyTable(p, conv)).first;
  return it->second;
}

namespace {

// Emits c * p^{ppow} * v^{sum of exps} [i, j], honoring v^t = 0 for t < 0:
// any negative displayed exponent part kills the whole term.
void emit(TensorElement& out, const LocalScalar& c, long ppow, std::initializer_list<long> exps,
          long i, long j, long p) {
  long m = 0;
  for (long e : exps) {
    if (e < 0) return;
    m += e;
  }
  if (ppow < 0) throw std::logic_error("emit: negative p-power");
  out.add(c * LocalScalar(pow_z(p, ppow)), m, i, j);
}

void add_scaled_ab(TensorElement& out, const LocalScalar& c, long ppow,
                   std::initializer_list<long> exps, long a, long b,
                   const ModuleContext& ctx) {
  long m = 0;
  for (long e : exps) {
    if (e < 0) return;
    m += e;
  }
  if (ppow < 0) return;  // templates with exhausted p-powers do not occur
  auto [A, B] = ab_sums(a, b, ctx);
  out += (A + B).scaled(c * LocalScalar(pow_z(ctx.p, ppow)), m);
}

}  // namespace

SigmaSums sigma_sums(long a, long b, int k, const ModuleContext& ctx) {
  if (ctx.n != 2) throw std::invalid_argument("sigma_sums: requires n = 2");
  if (k < 2) throw std::invalid_argument("sigma_sums: requires k >= 2");
  const FamilyTable& tab = family_table(ctx.p, ctx.convention);
  const LocalScalar& u1 = tab.u1();
  long g1 = ctx.g(1), g2 = ctx.g(2);
  SigmaSums r;
  for (long t = 0; t <= k - 1; ++t)
    add_scaled_ab(r.s1, c_unit(t, u1, ctx.p), k - t - 1, {t * g1}, a, b - t * g1, ctx);
  for (long t = 1; t <= (k - 1) / 2; ++t)
    add_scaled_ab(r.s2, c_prime(t), k - 2 * t - 1, {t * g2}, a, b - t * g2, ctx);
  for (long rr = 1; rr <= (k - 2) / 2; ++rr)
    for (long t = 1; t <= k - 1 - 2 * rr; ++t)
      add_scaled_ab(r.s3, c_rt(rr, t, u1, ctx.p), k - 2 * rr - t - 1, {rr * g2 + t * g1}, a,
                    b - rr * g2 - t * g1, ctx);
  return r;
}

TensorElement teoosa_rhs(long a, long b, int k, const ModuleContext& ctx) {
  if (ctx.n != 2) throw std::invalid_argument("teoosa_rhs: requires n = 2");
  if (k < 2) throw std::invalid_argument("teoosa_rhs: requires k >= 2");
  const FamilyTable& tab = family_table(ctx.p, ctx.convention);
  const LocalScalar& u1 = tab.u1();
  long g1 = ctx.g(1), g2 = ctx.g(2);
  LocalScalar sign_k(k % 2 == 0 ? 1 : -1);
  TensorElement r;
  emit(r, sign_k * pow_scalar(u1, k, ctx.p), 1, {k * g1}, a, b - k * g1, ctx.p);
  emit(r, sign_k * pow_scalar(u1, k - 1, ctx.p), 0, {(k - 1) * g1 + g2}, a,
       b - (k - 1) * g1 - g2, ctx.p);
  for (long t = 1; t <= k / 2; ++t) {
    LocalScalar sign_kt((k + t) % 2 == 0 ? 1 : -1);
    emit(r, LocalScalar(cd_c(k + 1, t)) * sign_kt * pow_scalar(u1, k - 2 * t, ctx.p), 1,
         {(k - 2 * t) * g1 + t * g2}, a, b - (k - 2 * t) * g1 - t * g2, ctx.p);
    if (k - 2 * t - 1 >= 0) {
      emit(r, LocalScalar(cd_d(k + 1, t)) * sign_kt * pow_scalar(u1, k - 2 * t - 1, ctx.p), 0,
           {(k - 2 * t - 1) * g1, (t + 1) * g2}, a, b - (k - 2 * t - 1) * g1 - (t + 1) * g2,
           ctx.p);
    }
  }
  SigmaSums s = sigma_sums(a, b, k, ctx);
  r += s.s1;
  r += s.s2;
  r += s.s3;
  return r;
}

long f_index(long i, long g1) { return (i + 3) * g1 + 1; }

std::pair<TensorElement, TensorElement> s_terms(long a, long b, int k, int nn,
                                                const ModuleContext& ctx) {
  if (ctx.n != 2) throw std::invalid_argument("s_terms: requires n = 2");
  if (nn < 0 || nn > k - 3) throw std::invalid_argument("s_terms: requires 0 <= nn <= k-3");
  const FamilyTable& tab = family_table(ctx.p, ctx.convention);
  const LocalScalar& u1 = tab.u1();
  long g1 = ctx.g(1);
  TensorElement sk;
  emit(sk, LocalScalar(1), k + 2, {0}, a, b, ctx.p);
  emit(sk, u1, k + 1, {g1}, a, b - g1, ctx.p);
  emit(sk, -pow_scalar(u1, -1, ctx.p), k + 1, {ctx.p * g1}, a, b - ctx.p * g1, ctx.p);
  long fm1 = f_index(-1, g1);
  emit(sk, -pow_scalar(u1, -3, ctx.p), k + 1, {fm1 * g1}, a, b - fm1 * g1, ctx.p);
  TensorElement skn;
  for (long i = 0; i <= nn; ++i) {
    long fi = f_index(i, g1);
    emit(skn, LocalScalar(pik(static_cast<int>(i), k, 0)) * pow_scalar(u1, -(2 * i + 5), ctx.p), 0,
         {fi * g1}, a, b - fi * g1, ctx.p);
  }
  return {sk, skn};
}

long sdif_f(int k, long t, int nn, long g1) { return (k + (t + nn + 4) * g1 + 1) * g1; }
long sdif_h1(int k, long t, long g1) { return (k - 2 * t - 3) * g1; }
long sdif_h2(long t, int nn, long g1, long g2) {
  return (t + 2) * g2 + f_index(nn, g1) * g1;
}

TensorElement sdif_rhs(long a, long b, int k, int nn, const ModuleContext& ctx) {
  if (ctx.n != 2) throw std::invalid_argument("sdif_rhs: requires n = 2");
  if (nn < 0 || nn > k - 5) throw std::invalid_argument("sdif_rhs: requires 0 <= nn <= k-5");
  const FamilyTable& tab = family_table(ctx.p, ctx.convention);
  const LocalScalar& u1 = tab.u1();
  long g1 = ctx.g(1), g2 = ctx.g(2);
  TensorElement r;
  for (long t = 0; t <= (k - 2) / 2; ++t) {
    LocalScalar sign((k + t) % 2 == 0 ? 1 : -1);
    long f = sdif_f(k, t, nn, g1);
    emit(r, sign * LocalScalar(pik(nn + 1, k, t)) * pow_scalar(u1, k - (2 * nn + 2 * t + 7), ctx.p),
         1, {f}, a, b - f, ctx.p);
    long h1 = sdif_h1(k, t, g1), h2 = sdif_h2(t, nn, g1, g2);
    if (h1 >= 0) {
      emit(r,
           sign * LocalScalar(pik(nn + 1, k - 1, t)) *
               pow_scalar(u1, k - (2 * nn + 2 * t + 8), ctx.p),
           0, {h1, h2}, a, b - h1 - h2, ctx.p);
    }
  }
  return r;
}

TensorElement part_rhs(long a, int nn, const ModuleContext& ctx) {
  if (ctx.n != 2) throw std::invalid_argument("part_rhs: requires n = 2");
  if (nn < 3 || nn > ctx.p + 1) throw std::invalid_argument("part_rhs: requires 3 <= nn <= p+1");
  const FamilyTable& tab = family_table(ctx.p, ctx.convention);
  long g1 = ctx.g(1);
  long window = ctx.p - 2;
  TensorElement r;
  for (long k = 1; k <= nn - 1; ++k)
    for (long i = 0; i <= window; ++i)
      emit(r, tab.w(k * ctx.p - 1) * tab.q0(i), 1, {k * ctx.p + i - 1},
           a, (nn - k) * g1 - (i + k - 1), ctx.p);
  for (int j = 1; j <= nn - 2; ++j) {
    int s = nn - j - 1;
    for (int t = 1; t <= j; ++t) {
      int rr = nn - t - 1;
      for (const Composition& iota : compositions(s, rr, 0)) {
        for (long k = 1; k <= t; ++k)
          for (long i = 0; i <= static_cast<long>(s + 1) * window; ++i) {
            LocalScalar qh = tab.qhat(iota, i);
            if (qh.is_zero()) continue;
            emit(r, tab.w(k * ctx.p - 1) * qh, 1, {rr * g1 + k * ctx.p + i - 1},
                 a, (nn - k) * g1 - rr * g1 - (i + k - 1), ctx.p);
          }
      }
    }
  }
  return r;
}

TensorElement relcp_rhs(long a, int nn, const ModuleContext& ctx) {
  if (ctx.n != 2) throw std::invalid_argument("relcp_rhs: requires n = 2");
  if (nn < ctx.p + 2) throw std::invalid_argument("relcp_rhs: requires nn >= p+2");
  const FamilyTable& tab = family_table(ctx.p, ctx.convention);
  long g1 = ctx.g(1), g2 = ctx.g(2);
  long window = ctx.p - 2;
  TensorElement r;
  for (long k = 1; k <= ctx.p - 1; ++k)
    for (long i = 0; i <= window; ++i)
      emit(r, tab.w(k * ctx.p - 1) * tab.q0(i), 1, {k * ctx.p + i - 1},
           a, (nn - k) * g1 - (i + k - 1), ctx.p);
  for (int j = 1; j <= nn - 2; ++j) {
    int s = nn - j - 1;
    for (int t = 1; t <= j; ++t) {
      int rr = nn - t - 1;
      for (const Composition& iota : compositions(s, rr, static_cast<int>(ctx.p) + 1)) {
        long kmax = std::min<long>(t, ctx.p - 1);
        for (long k = 1; k <= kmax; ++k)
          for (long i = 0; i <= static_cast<long>(s + 1) * window; ++i) {
            LocalScalar qh = tab.qhat(iota, i);
            if (qh.is_zero()) continue;
            emit(r, tab.w(k * ctx.p - 1) * qh, 1, {rr * g1 + k * ctx.p + i - 1},
                 a, (nn - k) * g1 - rr * g1 - (i + k - 1), ctx.p);
          }
      }
    }
  }
  for (long i = 0; i <= window; ++i)
    emit(r, tab.w(g2) * tab.q0(i), 0, {g2 + i}, a, nn * g1 - g2 - i, ctx.p);
  for (int j = 1; j <= nn - static_cast<int>(ctx.p) - 2; ++j) {
    int s = nn - static_cast<int>(ctx.p) - j - 1;
    for (int t = 1; t <= j; ++t) {
      int rr = nn - static_cast<int>(ctx.p) - t - 1;
      for (const Composition& iota : compositions(s, rr, static_cast<int>(ctx.p) + 1)) {
        for (long i = 0; i <= static_cast<long>(s + 1) * window; ++i) {
          LocalScalar qh = tab.qhat(iota, i);
          if (qh.is_zero()) continue;
          emit(r, tab.w(g2) * qh, 0, {rr * g1 + g2 + i}, a, nn * g1 - g2 - rr * g1 - i, ctx.p);
        }
      }
    }
  }
  return r;
}

}  // namespace kuhom
