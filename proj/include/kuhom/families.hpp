#ifndef KUHOM_FAMILIES_HPP
#define KUHOM_FAMILIES_HPP

#include <kuhom/tensor.hpp>

#include <vector>

namespace kuhom {

// ---- integer recursions ---------------------------------------------------
// c_k(0) = d_k(0) = 1 (k >= 2), c_2(t) = d_2(t) = 0 for t >= 1, zero for
// t < 0 or k < 2, and
//   c_k(t) = d_{k-1}(t-1) + c_{k-1}(t),   d_k(t) = c_{k-1}(t).
mpz_class cd_c(int k, long t);
mpz_class cd_d(int k, long t);
// d_{k,k-1}(t) = d_k(t) + d_{k-1}(t).
mpz_class dkk(int k, long t);

// pi-coefficients (renamed from a_{i,l} so they cannot be confused with the
// series coefficients):
//   pi_{0,1} = pi_{0,2} = 1,  pi_{i,1} = pi_{i,2} = p_{i-1}(0),
//   pi_{i,l} = pi_{i,l-1} - pi_{i-1,l-2}   (3 <= l <= i+2).
mpz_class pi_coeff(int i, int l);
// p_i^k(t) = sum_{l=1}^{i+2} pi_{i,l} d_{k-l+1}(t).
mpz_class pik(int i, int k, long t);
// p_i^k(0) on the ranges where it is k-independent (all d(0)-terms = 1).
mpz_class pik0(int i);

// ---- unit constants (given u1 = unit of a_{g1} in the [p^2]-series) -------
LocalScalar c_unit(long t, const LocalScalar& u1, long p);            // (-1)^{t+1} u1^t
LocalScalar c_prime(long t);                                          // (-1)^{t+1} c_{2t+1}(t)
LocalScalar c_rt(long r, long t, const LocalScalar& u1, long p);      // (-1)^{t+r+1} u1^t c_{t+2r+1}(r)

// ---- q polynomials (symbolic; small k only) --------------------------------
// Sparse polynomial in x_1..x_k over Z, exponent-vector keyed.
class QPoly {
public:
  const std::map<std::vector<unsigned>, mpz_class>& terms() const { return terms_; }
  void add(const std::vector<unsigned>& mono, const mpz_class& c);
  QPoly times_var(int var, int nvars) const;  // multiply by x_var (1-based)
  QPoly& operator+=(const QPoly& o);
  QPoly operator-() const;
  bool operator==(const QPoly& o) const { return terms_ == o.terms_; }
  LocalScalar eval(const std::vector<LocalScalar>& xs) const;
  std::string str() const;

private:
  std::map<std::vector<unsigned>, mpz_class> terms_;
};

// q_0 = -1;  q_k = -sum_{i=0}^{k-1} x_{k-i} q_i        (1 <= k <= p-2)
//        q_k = -sum_{i=0}^{p-2} x_{k-i} q_i            (p-1 <= k <= p^2-1)
QPoly q_poly(int k, long p);

// ---- compositions ("s-partitions", ordered) --------------------------------
struct Composition {
  std::vector<int> parts;
  int sum() const;
};
// All ordered s-tuples of positive integers summing to r with each part
// <= cap (cap <= 0 means unbounded); lexicographic order.
std::vector<Composition> compositions(int s, int r, int cap);

// ---- evaluated q / q-hat families per (p, convention) ----------------------
class FamilyTable {
public:
  FamilyTable(long p, Convention conv);

  long p() const { return p_; }
  long g(int i) const { return pow_z(p_, i).get_si() - 1; }
  // Unit part of the i-th [p^2]-series coefficient, 0 <= i <= p^2-1.
  const LocalScalar& w(long i) const;
  const LocalScalar& u1() const { return w(g(1)); }

  // q_i^{[0]} = q_i(w_1, ..., w_i), 0 <= i <= p-2.
  const LocalScalar& q0(long i) const;
  // q_i^{[s]}: s-fold windowed convolution; q_i^{[0]} at s = 0.
  LocalScalar q_conv(long i, int s) const;

  // qhat^{[0]} at part m (1 <= m <= p+1; m = p+1 is the g2 case) and offset
  // 0 <= off <= p-2. w-indices at or above g2 drop out of the convolution;
  // the residue-indexed correction applies only while mp-1 <= g2.
  LocalScalar qhat0(int m, long off) const;
  // qhat^{[s]} indexed by a composition and offset 0 <= off <= (s+1)(p-2);
  // zero outside the defined offset range.
  LocalScalar qhat(const Composition& iota, long off) const;

private:
  long p_;
  Convention conv_;
  std::vector<LocalScalar> w_;
  std::vector<LocalScalar> q0_;
};

const FamilyTable& family_table(long p, Convention conv);

// ---- composite tensor expressions ------------------------------------------
struct SigmaSums {
  TensorElement s1, s2, s3;
};

// The three sums of the p^{k+1}-relation (for [a,b], context n = 2):
//   S1 = sum_{t=0}^{k-1}          c_t      p^{k-t-1}   v^{t g1}        (A+B)^{[a,b-t g1]}
//   S2 = sum_{t=1}^{[(k-1)/2]}    c'_t     p^{k-2t-1}  v^{t g2}        (A+B)^{[a,b-t g2]}
//   S3 = sum_{r,t}                c_{r,t}  p^{k-2r-t-1} v^{r g2+t g1}  (A+B)^{[a,b-r g2-t g1]}
SigmaSums sigma_sums(long a, long b, int k, const ModuleContext& ctx);

// Full right-hand side of the p^{k+1}[a,b] relation (k >= 2, n = 2).
TensorElement teoosa_rhs(long a, long b, int k, const ModuleContext& ctx);

// f_i = (i+3) g1 + 1.
long f_index(long i, long g1);

// S_k^{[a,b]} and S_{k,nn}^{[a,b]} as raw (non-normalized) elements.
std::pair<TensorElement, TensorElement> s_terms(long a, long b, int k, int nn,
                                                const ModuleContext& ctx);

// Explicit displayed part of the S_k - p^{k+1} S_{k,nn} reduction
// (0 <= nn <= k-5); the catch-all remainder is checked structurally by the
// verifier, not constructed here.
TensorElement sdif_rhs(long a, long b, int k, int nn, const ModuleContext& ctx);
long sdif_f(int k, long t, int nn, long g1);
long sdif_h1(int k, long t, long g1);
long sdif_h2(long t, int nn, long g1, long g2);

// Right-hand sides of the p^2[a, nn*g1] relations (context n = 2):
// 3 <= nn <= p+1 uses unbounded compositions; nn >= p+2 adds the g2-branch
// rows and caps composition entries at p+1.
TensorElement part_rhs(long a, int nn, const ModuleContext& ctx);
TensorElement relcp_rhs(long a, int nn, const ModuleContext& ctx);

}  // namespace kuhom

#endif
