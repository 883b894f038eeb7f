#ifndef KUHOM_SERIES_HPP
#define KUHOM_SERIES_HPP

#include <kuhom/local_scalar.hpp>

#include <map>
#include <string>
#include <vector>

namespace kuhom {

// An element of ku_* = Z_(p)[v]: finitely supported map v-exponent -> scalar.
// No stored coefficient is zero; exponents are >= 0.
class KuPoly {
public:
  KuPoly() = default;
  static KuPoly monomial(const LocalScalar& c, long vexp);

  bool is_zero() const { return coeff_.empty(); }
  const std::map<long, LocalScalar>& coeffs() const { return coeff_; }
  LocalScalar coeff(long vexp) const;

  void add(const LocalScalar& c, long vexp);
  KuPoly& operator+=(const KuPoly& o);
  KuPoly operator+(const KuPoly& o) const;
  KuPoly operator-() const;
  // this * (c * v^shift)
  KuPoly scaled(const LocalScalar& c, long shift) const;
  KuPoly operator*(const KuPoly& o) const;

  bool operator==(const KuPoly& o) const { return coeff_ == o.coeff_; }
  bool operator!=(const KuPoly& o) const { return coeff_ != o.coeff_; }

  std::string str() const;

private:
  std::map<long, LocalScalar> coeff_;
};

enum class Convention { Unsigned, Signed };

const char* convention_name(Convention c);
Convention convention_from_name(const std::string& s);

// Coefficient list of the [m]-series of the multiplicative formal group law,
// m = p^n. Entry t is the scalar c_t of the monomial a_t = c_t v^t, the
// coefficient of x^{t+1}:
//   unsigned (law x+y+vxy):  c_t = C(p^n, t+1)
//   signed   (law x+y-vxy):  c_t = (-1)^t C(p^n, t+1)
struct PSeries {
  long p = 0;
  int n = 0;
  Convention convention = Convention::Unsigned;
  std::vector<LocalScalar> coeff;  // size p^n, index t

  long g(int i) const;                      // p^i - 1
  const LocalScalar& a(long t) const { return coeff.at(static_cast<size_t>(t)); }
  size_t size() const { return coeff.size(); }
};

// Closed-form binomial construction (never p-fold FGL iteration); memoized
// per (p, n, convention) with a single-writer table.
const PSeries& m_series(long p, int n, Convention conv);

struct NamedCoefficient {
  LocalScalar unit;
  long p_power = 0;
  long v_power = 0;
};

// Factorization a_t = unit * p^{p_power} * v^t of the t-th coefficient of
// the [p^n]-series. The p_power is computed from the coefficient and checked
// against Kummer's carry count n - v_p(t+1).
NamedCoefficient named_coefficient(long p, int n, long t, Convention conv);

// Truncated power series in one variable x with KuPoly coefficients,
// entry d = coefficient of x^d. Self-test machinery for m_series.
struct TruncSeries {
  std::vector<KuPoly> c;  // size order+1

  explicit TruncSeries(int order = 0) : c(static_cast<size_t>(order) + 1) {}
  int order() const { return static_cast<int>(c.size()) - 1; }
  static TruncSeries x(int order);
  bool operator==(const TruncSeries& o) const { return c == o.c; }
};

// F(f, g) = f + g +/- v f g, truncated.
TruncSeries fgl_add(const TruncSeries& f, const TruncSeries& g, Convention conv, int order);

// S(T(x)) truncated; S given by its PSeries coefficient list (coefficient of
// x^{t+1} is a_t = c_t v^t).
TruncSeries compose_series(const PSeries& s, const TruncSeries& t, int order);

TruncSeries series_to_trunc(const PSeries& s, int order);

// Oracle: [m]-series by m-fold FGL iteration, truncated. Test-scale only.
TruncSeries m_series_iterative(long p, int n, Convention conv);

}  // namespace kuhom

#endif
