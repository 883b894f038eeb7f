#include <kuhom/tensor.hpp>

#include <algorithm>
#include <vector>
#include <sstream>

namespace kuhom {

ModuleContext::ModuleContext(long p_, int n_, int k_, Convention c)
    : p(p_), n(n_), k(k_), convention(c) {
  if (!is_prime(p)) throw std::invalid_argument("ModuleContext: p must be prime");
  if (n < 2) throw std::invalid_argument("ModuleContext: n must be >= 2");
  if (k < n - 1) throw std::invalid_argument("ModuleContext: k must be >= n-1");
}

long ModuleContext::filtration_of(long i, long j) const {
  long pk1 = pow_z(p, k + 1).get_si();
  long pk = pow_z(p, k).get_si();
  return i * (pk1 + 1) + j * (pk + 1);
}

TensorElement TensorElement::monomial(const LocalScalar& c, long m, long i, long j) {
  TensorElement r;
  r.add(c, m, i, j);
  return r;
}

KuPoly TensorElement::poly(long i, long j) const {
  auto it = terms_.find(GenKey{i, j});
  return it == terms_.end() ? KuPoly() : it->second;
}

void TensorElement::add(const LocalScalar& c, long m, long i, long j) {
  if (i <= 0 || j <= 0 || c.is_zero()) return;
  GenKey key{i, j};
  auto it = terms_.find(key);
  if (it == terms_.end()) it = terms_.emplace(key, KuPoly()).first;
  it->second.add(c, m);
  if (it->second.is_zero()) terms_.erase(it);
}

void TensorElement::add_poly(long i, long j, const KuPoly& poly) {
  if (i <= 0 || j <= 0 || poly.is_zero()) return;
  GenKey key{i, j};
  auto it = terms_.find(key);
  if (it == terms_.end()) it = terms_.emplace(key, KuPoly()).first;
  it->second += poly;
  if (it->second.is_zero()) terms_.erase(it);
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  for (const auto& [key, poly] : o.terms_) add_poly(key.i, key.j, poly);
  return *this;
}

TensorElement TensorElement::operator+(const TensorElement& o) const {
  TensorElement r = *this;
  r += o;
  return r;
}

TensorElement TensorElement::operator-(const TensorElement& o) const {
  TensorElement r = *this;
  r += -o;
  return r;
}

TensorElement TensorElement::operator-() const {
  TensorElement r;
  for (const auto& [key, poly] : terms_) r.terms_.emplace(key, -poly);
  return r;
}

TensorElement TensorElement::scaled(const LocalScalar& c, long vshift) const {
  TensorElement r;
  if (c.is_zero()) return r;
  for (const auto& [key, poly] : terms_) r.terms_.emplace(key, poly.scaled(c, vshift));
  return r;
}

size_t TensorElement::monomial_count() const {
  size_t n = 0;
  for (const auto& [key, poly] : terms_) n += poly.coeffs().size();
  return n;
}

std::string TensorElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, poly] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << poly.str() << ")[" << key.i << "," << key.j << "]";
  }
  return os.str();
}

namespace {

// Rewrites c v^m [i,j] (valuation(c) >= n) through the relation, accumulating
// -d a_{t,n} v^{m+t} [i, j-t] for t = 1..p^n-1 into sink.
template <typename Sink>
void rewrite_monomial(const LocalScalar& c, long m, long i, long j, const ModuleContext& ctx,
                      const PSeries& rel, Sink&& sink) {
  LocalScalar d = c / LocalScalar(pow_z(ctx.p, ctx.n));
  for (long t = 1; t < static_cast<long>(rel.size()); ++t) {
    if (j - t <= 0) break;
    sink(-(d * rel.a(t)), m + t, i, j - t);
  }
}

bool poly_dirty(const KuPoly& poly, const ModuleContext& ctx) {
  for (const auto& [m, c] : poly.coeffs())
    if (*valuation(c, ctx.p) >= ctx.n) return true;
  return false;
}

TensorElement nf_low_first(const TensorElement& x, const ModuleContext& ctx) {
  const PSeries& rel = ctx.relation_series();
  TensorElement out;
  // Pending work per generator; processed lowest j first (per i), so a slot's
  // content is always a single batch and batches never merge mid-flight.
  std::map<GenKey, KuPoly> work(x.terms().begin(), x.terms().end());
  auto lowest = [&work]() {
    auto best = work.begin();
    for (auto it = work.begin(); it != work.end(); ++it)
      if (it->first.j < best->first.j || (it->first.j == best->first.j && it->first.i < best->first.i))
        best = it;
    return best;
  };
  while (!work.empty()) {
    auto it = lowest();
    GenKey key = it->first;
    KuPoly poly = std::move(it->second);
    work.erase(it);
    for (const auto& [m, c] : poly.coeffs()) {
      if (*valuation(c, ctx.p) >= ctx.n) {
        rewrite_monomial(c, m, key.i, key.j, ctx, rel,
                         [&](const LocalScalar& cc, long mm, long ii, long jj) {
                           auto wit = work.find(GenKey{ii, jj});
                           if (wit == work.end()) wit = work.emplace(GenKey{ii, jj}, KuPoly()).first;
                           wit->second.add(cc, mm);
                           if (wit->second.is_zero()) work.erase(wit);
                         });
      } else {
        out.add(c, m, key.i, key.j);
      }
    }
  }
  // Retired contributions from separate batches can merge into a coefficient
  // of valuation >= n; re-run until the output is a fixed point.
  for (const auto& [key, poly] : out.terms())
    if (poly_dirty(poly, ctx)) return nf_low_first(out, ctx);
  return out;
}

struct Item {
  LocalScalar c;
  long m, i, j;
};

TensorElement nf_high_first_itemized(const TensorElement& x, const ModuleContext& ctx) {
  const PSeries& rel = ctx.relation_series();
  TensorElement out;
  // Per-monomial items bucketed by e-index, largest drained first. The
  // summed result is selection-order independent (items never interact),
  // which is exactly why the two strategies must agree.
  std::map<long, std::vector<Item>> buckets;
  for (const auto& [key, poly] : x.terms())
    for (const auto& [m, c] : poly.coeffs()) buckets[key.j].push_back({c, m, key.i, key.j});
  while (!buckets.empty()) {
    auto top = std::prev(buckets.end());
    Item it = top->second.back();
    top->second.pop_back();
    if (top->second.empty()) buckets.erase(top);
    if (*valuation(it.c, ctx.p) >= ctx.n) {
      rewrite_monomial(it.c, it.m, it.i, it.j, ctx, rel,
                       [&](const LocalScalar& cc, long mm, long ii, long jj) {
                         if (!cc.is_zero()) buckets[jj].push_back({cc, mm, ii, jj});
                       });
    } else {
      out.add(it.c, it.m, it.i, it.j);
    }
  }
  for (const auto& [key, poly] : out.terms())
    if (poly_dirty(poly, ctx)) return nf_high_first_itemized(out, ctx);
  return out;
}

}  // namespace

TensorElement normal_form(const TensorElement& x, const ModuleContext& ctx,
                          NormalFormStrategy strategy) {
  if (strategy == NormalFormStrategy::LowFirst) return nf_low_first(x, ctx);
  return nf_high_first_itemized(x, ctx);
}

TensorElement apply_boundary_raw(const TensorElement& x, const ModuleContext& ctx) {
  const PSeries& bnd = ctx.boundary_series();
  TensorElement r;
  for (const auto& [key, poly] : x.terms()) {
    long tmax = std::min<long>(static_cast<long>(bnd.size()) - 1, key.i - 1);
    for (long t = 0; t <= tmax; ++t) {
      const LocalScalar& a = bnd.a(t);
      r.add_poly(key.i - t, key.j, poly.scaled(a, t));
    }
  }
  return r;
}

TensorElement apply_boundary(const TensorElement& x, const ModuleContext& ctx) {
  return normal_form(apply_boundary_raw(x, ctx), ctx);
}

TensorElement smith_shift(const TensorElement& x, long di, long dj) {
  TensorElement r;
  for (const auto& [key, poly] : x.terms()) r.add_poly(key.i - di, key.j - dj, poly);
  return r;
}

long filtration(const TensorElement& x, const ModuleContext& ctx) {
  if (x.is_zero()) throw std::domain_error("filtration: zero element");
  long best = 0;
  bool first = true;
  for (const auto& [key, poly] : x.terms()) {
    long f = ctx.filtration_of(key.i, key.j);
    if (first || f > best) best = f;
    first = false;
  }
  return best;
}

TensorElement leading_terms(const TensorElement& x, const ModuleContext& ctx) {
  long top = filtration(x, ctx);
  TensorElement r;
  for (const auto& [key, poly] : x.terms())
    if (ctx.filtration_of(key.i, key.j) == top) r.add_poly(key.i, key.j, poly);
  return r;
}

std::optional<long> homogeneous_weight(const TensorElement& x) {
  std::optional<long> w;
  for (const auto& [key, poly] : x.terms())
    for (const auto& [m, c] : poly.coeffs()) {
      long wm = weight(m, key.i, key.j);
      if (!w)
        w = wm;
      else if (*w != wm)
        return std::nullopt;
    }
  return w;
}

std::pair<TensorElement, TensorElement> ab_sums(long a, long b, const ModuleContext& ctx) {
  if (ctx.n != 2) throw std::invalid_argument("ab_sums: requires n = 2");
  const PSeries& s = m_series(ctx.p, 2, ctx.convention);
  TensorElement A, B;
  for (long i = 1; i <= ctx.p - 2; ++i) A.add(s.a(i), i, a, b - i);
  for (long i = ctx.p; i <= ctx.g(2) - 1; ++i) B.add(s.a(i), i, a, b - i);
  return {A, B};
}

}  // namespace kuhom
