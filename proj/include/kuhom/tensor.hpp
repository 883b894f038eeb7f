#ifndef KUHOM_TENSOR_HPP
#define KUHOM_TENSOR_HPP

#include <kuhom/series.hpp>

#include <compare>
#include <map>

namespace kuhom {

// Parameters of the module F (x) ku_*(Z_{p^n}) and its boundary: the second
// factor's relation uses the [p^n]-series, the boundary the [p^{k+1}]-series.
struct ModuleContext {
  long p = 2;
  int n = 2;
  int k = 2;
  Convention convention = Convention::Unsigned;

  ModuleContext() = default;
  ModuleContext(long p_, int n_, int k_, Convention c = Convention::Unsigned);

  long g(int i) const { return pow_z(p, i).get_si() - 1; }
  const PSeries& relation_series() const { return m_series(p, n, convention); }
  const PSeries& boundary_series() const { return m_series(p, k + 1, convention); }
  // Filtration degree of a basic generator [i,j].
  long filtration_of(long i, long j) const;
};

struct GenKey {
  long i = 0, j = 0;
  auto operator<=>(const GenKey&) const = default;
};

// An element of F (x) ku_*(Z_{p^n}): finitely supported map from basic
// generators [i,j] = alpha_i (x) e_j (i, j >= 1) to ku_* coefficients.
class TensorElement {
public:
  TensorElement() = default;

  static TensorElement generator(long i, long j) {
    return monomial(LocalScalar(1), 0, i, j);
  }
  // c * v^m [i,j]; silently zero when i <= 0 or j <= 0.
  static TensorElement monomial(const LocalScalar& c, long m, long i, long j);

  bool is_zero() const { return terms_.empty(); }
  const std::map<GenKey, KuPoly>& terms() const { return terms_; }
  KuPoly poly(long i, long j) const;

  void add(const LocalScalar& c, long m, long i, long j);
  void add_poly(long i, long j, const KuPoly& poly);
  TensorElement& operator+=(const TensorElement& o);
  TensorElement operator+(const TensorElement& o) const;
  TensorElement operator-(const TensorElement& o) const;
  TensorElement operator-() const;
  TensorElement scaled(const LocalScalar& c, long vshift = 0) const;

  bool operator==(const TensorElement& o) const { return terms_ == o.terms_; }
  bool operator!=(const TensorElement& o) const { return terms_ != o.terms_; }

  size_t monomial_count() const;
  std::string str() const;

private:
  std::map<GenKey, KuPoly> terms_;
};

enum class NormalFormStrategy {
  // Drains pending generators lowest e-index first; polynomial cost. This is
  // the production strategy and computes the per-monomial expansion-tree
  // result.
  LowFirst,
  // Reference strategy: literal per-monomial worklist, largest e-index
  // first. Exponential in the worst case; test-scale inputs only.
  HighFirstItemized,
};

// Exhaustive application of the second-factor relation
//   p^n e_j = -sum_{t=1}^{p^n-1} a_{t,n} e_{j-t}   (e_h = 0 for h <= 0)
// to every monomial whose scalar has p-valuation >= n. The result has all
// valuations < n and differs from the input by a Z_(p)-combination of
// relation instances.
TensorElement normal_form(const TensorElement& x, const ModuleContext& ctx,
                          NormalFormStrategy strategy = NormalFormStrategy::LowFirst);

// Linear extension of [i,j] -> sum_t a_{t,k+1} [i-t, j], dropped at i-t <= 0;
// returned in normal form.
TensorElement apply_boundary(const TensorElement& x, const ModuleContext& ctx);

// Same expansion without the final normal form (used by the slice solver,
// which adjoins relation columns explicitly).
TensorElement apply_boundary_raw(const TensorElement& x, const ModuleContext& ctx);

// Smith morphism phi_{di,dj}: [a,b] -> [a-di, b-dj], nonpositive indices drop.
TensorElement smith_shift(const TensorElement& x, long di, long dj);

// max over terms of i(p^{k+1}+1) + j(p^k+1); throws std::domain_error on 0.
long filtration(const TensorElement& x, const ModuleContext& ctx);
TensorElement leading_terms(const TensorElement& x, const ModuleContext& ctx);

inline long weight(long m, long i, long j) { return m + i + j; }

// weight of a homogeneous element; nullopt when mixed or zero.
std::optional<long> homogeneous_weight(const TensorElement& x);

// A^{[a,b]} = sum_{i=1}^{p-2}    a_{i,2} [a, b-i]
// B^{[a,b]} = sum_{i=p}^{p^2-2}  a_{i,2} [a, b-i]
// with the [p^2]-series coefficients of ctx's convention. Requires ctx.n = 2.
std::pair<TensorElement, TensorElement> ab_sums(long a, long b, const ModuleContext& ctx);

}  // namespace kuhom

#endif
