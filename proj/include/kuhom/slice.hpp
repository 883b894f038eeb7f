#ifndef KUHOM_SLICE_HPP
#define KUHOM_SLICE_HPP

#include <kuhom/tensor.hpp>

#include <optional>
#include <vector>

namespace kuhom {

// Monomial generator v^m [i,j] of a weight slice (weight = m + i + j).
struct MonoKey {
  long m = 0, i = 0, j = 0;
  auto operator<=>(const MonoKey&) const = default;
};

// p^n v^m [i,j] + sum_{t=1}^{p^n-1} a_{t,n} v^{m+t} [i, j-t], the relation
// instance adjoined as an explicit column (never applied via normal form).
TensorElement relation_instance(const ModuleContext& ctx, long m, long i, long j);
TensorElement boundary_of_monomial_raw(const ModuleContext& ctx, long m, long i, long j);

// The exact linear system of one internal-degree slice: all weight-W
// monomial generators, their raw boundary images, and all relation columns.
struct SliceSystem {
  ModuleContext ctx;
  long W = 0;
  std::vector<MonoKey> basis;
  std::vector<std::vector<std::pair<size_t, LocalScalar>>> boundary_cols;
  std::vector<std::vector<std::pair<size_t, LocalScalar>>> relation_cols;

  std::optional<size_t> basis_index(const MonoKey& key) const;
};

SliceSystem build_slice(const ModuleContext& ctx, long W);

// Replayable witness: x = sum boundary coeff * d(v^m[i,j])
//                       + sum relation coeff * rel(m,i,j)
//                       + sum custom coeff * column.
struct Certificate {
  std::vector<std::pair<MonoKey, LocalScalar>> boundary;
  std::vector<std::pair<MonoKey, LocalScalar>> relations;
  std::vector<std::pair<TensorElement, LocalScalar>> custom;
};

TensorElement certificate_expand(const Certificate& cert, const ModuleContext& ctx);
bool certificate_replay(const Certificate& cert, const TensorElement& x, const ModuleContext& ctx);

struct MembershipResult {
  bool inside = false;
  Certificate cert;
};

struct MembershipOptions {
  bool boundary_cols = true;
  bool relation_cols = true;
  // Restrict boundary generators to filtration strictly below / at most F.
  std::optional<long> boundary_filtration_lt;
  std::optional<long> boundary_filtration_le;
  // Drop a single boundary generator's column from the system.
  std::optional<MonoKey> exclude_gen;
  std::vector<TensorElement> custom_cols;
};

// Decides x in Im d_{k+1} + relations (or the span configured in opts) by
// exact elimination over Z_(p) with minimal-valuation full pivoting. Inside
// answers carry a certificate that is re-verified by direct expansion before
// returning. Throws std::invalid_argument on non-homogeneous input.
MembershipResult membership(const TensorElement& x, const ModuleContext& ctx,
                            const MembershipOptions& opts = {});

// Minimal e in {0,...,emax} with p^e * column(gen) in the span of the other
// configured columns; nullopt when none. Used for "up to units" leading-term
// analysis of certificates.
std::optional<long> min_shift_valuation(const MonoKey& gen, const ModuleContext& ctx,
                                        const MembershipOptions& opts, long emax);

struct SliceInvariants {
  std::vector<long> divisors;  // valuations s with divisor p^s, s >= 1, sorted
  size_t unit_pivots = 0;      // pivots with s = 0 (trivial quotient factors)
  size_t free_rank = 0;        // basis dim minus total pivot count
  size_t boundary_rank = 0;    // rank of the boundary restricted to the slice
  size_t kernel_rank = 0;      // dim of its kernel on the slice
  size_t dim = 0;

  // order of the torsion part, as p^e; nullopt when free rank > 0
  std::optional<mpz_class> torsion_order(long p) const;
};

SliceInvariants elementary_divisors(const ModuleContext& ctx, long W);

// Same computation with a seeded permutation of rows and columns; the
// divisor multiset must not depend on the enumeration order.
SliceInvariants elementary_divisors_shuffled(const ModuleContext& ctx, long W,
                                             unsigned long seed);

struct Staircase {
  std::optional<long> m0;  // min m with v^m [1,1] in Im d + relations
  std::optional<long> m1;  // min m with p v^m [1,1] in Im d + relations
  bool p2_in = false;      // p^2 [1,1] = 0 in the module
  Certificate cert_m0, cert_m1, cert_p2;
};

Staircase annihilator_staircase(const ModuleContext& ctx, long v_max);
long default_v_max(const ModuleContext& ctx);

enum class ModPNAnswer { Inside, Outside, Inconclusive };

// Independent oracle: the same membership question over Z/p^N with
// unit-pivot elimination. Conclusive answers must agree with membership().
ModPNAnswer crosscheck_modpN(const TensorElement& x, const ModuleContext& ctx, int N,
                             const MembershipOptions& opts = {});

}  // namespace kuhom

#endif
