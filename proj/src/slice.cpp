#include <kuhom/slice.hpp>

#include <algorithm>
#include <random>

namespace kuhom {

TensorElement relation_instance(const ModuleContext& ctx, long m, long i, long j) {
  const PSeries& rel = ctx.relation_series();
  TensorElement r;
  r.add(LocalScalar(pow_z(ctx.p, ctx.n)), m, i, j);
  for (long t = 1; t < static_cast<long>(rel.size()); ++t) {
    if (j - t <= 0) break;
    r.add(rel.a(t), m + t, i, j - t);
  }
  return r;
}

TensorElement boundary_of_monomial_raw(const ModuleContext& ctx, long m, long i, long j) {
  return apply_boundary_raw(TensorElement::monomial(LocalScalar(1), m, i, j), ctx);
}

std::optional<size_t> SliceSystem::basis_index(const MonoKey& key) const {
  auto it = std::lower_bound(basis.begin(), basis.end(), key);
  if (it == basis.end() || *it != key) return std::nullopt;
  return static_cast<size_t>(it - basis.begin());
}

namespace {

std::vector<std::pair<size_t, LocalScalar>> to_column(const TensorElement& e,
                                                      const SliceSystem& sys) {
  std::vector<std::pair<size_t, LocalScalar>> col;
  for (const auto& [key, poly] : e.terms())
    for (const auto& [m, c] : poly.coeffs()) {
      auto idx = sys.basis_index(MonoKey{m, key.i, key.j});
      if (!idx)
        throw std::logic_error("slice column leaves the weight slice");
      col.emplace_back(*idx, c);
    }
  std::sort(col.begin(), col.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return col;
}

}  // namespace

SliceSystem build_slice(const ModuleContext& ctx, long W) {
  if (W < 2) throw std::invalid_argument("build_slice: W must be >= 2");
  SliceSystem sys;
  sys.ctx = ctx;
  sys.W = W;
  for (long m = 0; m <= W - 2; ++m)
    for (long i = 1; i <= W - m - 1; ++i) sys.basis.push_back(MonoKey{m, i, W - m - i});
  std::sort(sys.basis.begin(), sys.basis.end());
  sys.boundary_cols.reserve(sys.basis.size());
  sys.relation_cols.reserve(sys.basis.size());
  for (const MonoKey& g : sys.basis) {
    sys.boundary_cols.push_back(to_column(boundary_of_monomial_raw(ctx, g.m, g.i, g.j), sys));
    sys.relation_cols.push_back(to_column(relation_instance(ctx, g.m, g.i, g.j), sys));
  }
  return sys;
}

TensorElement certificate_expand(const Certificate& cert, const ModuleContext& ctx) {
  TensorElement acc;
  for (const auto& [gen, c] : cert.boundary)
    acc += boundary_of_monomial_raw(ctx, gen.m, gen.i, gen.j).scaled(c);
  for (const auto& [gen, c] : cert.relations)
    acc += relation_instance(ctx, gen.m, gen.i, gen.j).scaled(c);
  for (const auto& [col, c] : cert.custom) acc += col.scaled(c);
  return acc;
}

bool certificate_replay(const Certificate& cert, const TensorElement& x,
                        const ModuleContext& ctx) {
  return certificate_expand(cert, ctx) == x;
}

namespace {

// Dense elimination over Z_(p) with minimal-valuation full pivoting.
// Forward-only row operations (pivot rows freeze once chosen) keep every
// multiplier entry/pivot inside Z_(p); pivot valuations are non-decreasing,
// the frozen pivot block is upper triangular in pivot order with all its
// entries of valuation >= the row's pivot valuation, and the pivot
// valuations are the elementary divisor exponents of the column span.
struct Elimination {
  long p;
  size_t rows, cols;
  std::vector<std::vector<LocalScalar>> a;  // row-major
  std::vector<LocalScalar> x;
  bool with_x = false;
  std::vector<std::tuple<size_t, size_t, long>> pivots;  // (row, col, valuation)
  std::vector<char> row_done, col_done;

  Elimination(long p_, size_t r, size_t c)
      : p(p_), rows(r), cols(c), a(r, std::vector<LocalScalar>(c)), row_done(r, 0), col_done(c, 0) {}

  void attach_x(std::vector<LocalScalar> v) {
    x = std::move(v);
    with_x = true;
  }

  void run() {
    long bound = 0;
    while (true) {
      bool found = false;
      size_t pr = 0, pc = 0;
      long pv = 0;
      for (size_t r = 0; r < rows && !(found && pv == bound); ++r) {
        if (row_done[r]) continue;
        for (size_t c = 0; c < cols; ++c) {
          if (col_done[c] || a[r][c].is_zero()) continue;
          long v = *valuation(a[r][c], p);
          if (!found || v < pv) {
            found = true;
            pv = v;
            pr = r;
            pc = c;
            if (pv == bound) break;
          }
        }
      }
      if (!found) break;
      bound = pv;
      pivots.emplace_back(pr, pc, pv);
      row_done[pr] = 1;
      col_done[pc] = 1;
      const LocalScalar piv = a[pr][pc];
      for (size_t r = 0; r < rows; ++r) {
        if (row_done[r] || a[r][pc].is_zero()) continue;
        LocalScalar f = a[r][pc] / piv;
        for (size_t c = 0; c < cols; ++c) {
          if (a[pr][c].is_zero()) continue;
          a[r][c] -= f * a[pr][c];
        }
        if (with_x && !x[pr].is_zero()) x[r] -= f * x[pr];
      }
    }
  }

  // After run() with x attached: solve A y = x over Z_(p), zero values on
  // non-pivot columns, back-substituting in reverse pivot order; nullopt
  // when no Z_(p)-solution exists.
  std::optional<std::vector<LocalScalar>> solve() const {
    std::vector<LocalScalar> y(cols);
    std::vector<char> row_has_pivot(rows, 0);
    for (const auto& [r, c, v] : pivots) row_has_pivot[r] = 1;
    for (size_t r = 0; r < rows; ++r)
      if (!row_has_pivot[r] && !x[r].is_zero()) return std::nullopt;
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
      const auto& [r, c, v] = *it;
      LocalScalar residual = x[r];
      for (auto jt = pivots.rbegin(); jt != it; ++jt) {
        const auto& [rj, cj, vj] = *jt;
        if (!a[r][cj].is_zero() && !y[cj].is_zero()) residual -= a[r][cj] * y[cj];
      }
      if (residual.is_zero()) continue;
      if (*valuation(residual, p) < v) return std::nullopt;
      y[c] = residual / a[r][c];
    }
    return y;
  }
};

struct ColumnSet {
  // Tagged columns: kind 0 = boundary (gen), 1 = relation (gen), 2 = custom.
  struct Tagged {
    int kind;
    MonoKey gen;
    size_t custom_index;
    std::vector<std::pair<size_t, LocalScalar>> entries;
  };
  std::vector<Tagged> cols;
};

ColumnSet assemble_columns(const SliceSystem& sys, const MembershipOptions& opts) {
  ColumnSet set;
  if (opts.boundary_cols) {
    for (size_t g = 0; g < sys.basis.size(); ++g) {
      const MonoKey& gen = sys.basis[g];
      long filt = sys.ctx.filtration_of(gen.i, gen.j);
      if (opts.boundary_filtration_lt && filt >= *opts.boundary_filtration_lt) continue;
      if (opts.boundary_filtration_le && filt > *opts.boundary_filtration_le) continue;
      if (opts.exclude_gen && gen == *opts.exclude_gen) continue;
      if (sys.boundary_cols[g].empty()) continue;
      set.cols.push_back({0, gen, 0, sys.boundary_cols[g]});
    }
  }
  for (size_t c = 0; c < opts.custom_cols.size(); ++c) {
    if (opts.custom_cols[c].is_zero()) continue;
    set.cols.push_back({2, MonoKey{}, c, to_column(opts.custom_cols[c], sys)});
  }
  if (opts.relation_cols) {
    for (size_t g = 0; g < sys.basis.size(); ++g) {
      if (sys.relation_cols[g].empty()) continue;
      set.cols.push_back({1, sys.basis[g], 0, sys.relation_cols[g]});
    }
  }
  return set;
}

std::vector<LocalScalar> element_vector(const TensorElement& x, const SliceSystem& sys) {
  std::vector<LocalScalar> v(sys.basis.size());
  for (const auto& [key, poly] : x.terms())
    for (const auto& [m, c] : poly.coeffs()) {
      auto idx = sys.basis_index(MonoKey{m, key.i, key.j});
      if (!idx) throw std::invalid_argument("element does not lie in the weight slice");
      v[*idx] = c;
    }
  return v;
}

}  // namespace

MembershipResult membership(const TensorElement& x, const ModuleContext& ctx,
                            const MembershipOptions& opts) {
  MembershipResult res;
  if (x.is_zero()) {
    res.inside = true;
    return res;
  }
  auto W = homogeneous_weight(x);
  if (!W) throw std::invalid_argument("membership: input not weight-homogeneous");
  SliceSystem sys = build_slice(ctx, *W);
  ColumnSet set = assemble_columns(sys, opts);
  Elimination elim(ctx.p, sys.basis.size(), set.cols.size());
  for (size_t c = 0; c < set.cols.size(); ++c)
    for (const auto& [r, val] : set.cols[c].entries) elim.a[r][c] = val;
  elim.attach_x(element_vector(x, sys));
  elim.run();
  auto y = elim.solve();
  if (!y) return res;
  res.inside = true;
  for (size_t c = 0; c < y->size(); ++c) {
    if ((*y)[c].is_zero()) continue;
    const auto& tag = set.cols[c];
    if (tag.kind == 0)
      res.cert.boundary.emplace_back(tag.gen, (*y)[c]);
    else if (tag.kind == 1)
      res.cert.relations.emplace_back(tag.gen, (*y)[c]);
    else
      res.cert.custom.emplace_back(opts.custom_cols[tag.custom_index], (*y)[c]);
  }
  if (!certificate_replay(res.cert, x, ctx))
    throw std::logic_error("membership: certificate failed replay");
  return res;
}

std::optional<long> min_shift_valuation(const MonoKey& gen, const ModuleContext& ctx,
                                        const MembershipOptions& opts, long emax) {
  TensorElement col = boundary_of_monomial_raw(ctx, gen.m, gen.i, gen.j);
  if (col.is_zero()) return 0;
  MembershipOptions rest = opts;
  rest.exclude_gen = gen;
  for (long e = 0; e <= emax; ++e) {
    TensorElement target = col.scaled(LocalScalar(pow_z(ctx.p, e)));
    if (membership(target, ctx, rest).inside) return e;
  }
  return std::nullopt;
}

std::optional<mpz_class> SliceInvariants::torsion_order(long p) const {
  if (free_rank > 0) return std::nullopt;
  long total = 0;
  for (long s : divisors) total += s;
  return pow_z(p, total);
}

SliceInvariants elementary_divisors(const ModuleContext& ctx, long W) {
  SliceSystem sys = build_slice(ctx, W);
  SliceInvariants inv;
  inv.dim = sys.basis.size();
  MembershipOptions all;
  ColumnSet set = assemble_columns(sys, all);
  Elimination elim(ctx.p, sys.basis.size(), set.cols.size());
  for (size_t c = 0; c < set.cols.size(); ++c)
    for (const auto& [r, val] : set.cols[c].entries) elim.a[r][c] = val;
  elim.run();
  for (const auto& [r, c, v] : elim.pivots) {
    if (v == 0)
      inv.unit_pivots++;
    else
      inv.divisors.push_back(v);
  }
  std::sort(inv.divisors.begin(), inv.divisors.end());
  inv.free_rank = inv.dim - elim.pivots.size();

  MembershipOptions bonly;
  bonly.relation_cols = false;
  ColumnSet bset = assemble_columns(sys, bonly);
  Elimination belim(ctx.p, sys.basis.size(), bset.cols.size());
  for (size_t c = 0; c < bset.cols.size(); ++c)
    for (const auto& [r, val] : bset.cols[c].entries) belim.a[r][c] = val;
  belim.run();
  inv.boundary_rank = belim.pivots.size();
  inv.kernel_rank = inv.dim - inv.boundary_rank;
  return inv;
}

SliceInvariants elementary_divisors_shuffled(const ModuleContext& ctx, long W,
                                             unsigned long seed) {
  SliceSystem sys = build_slice(ctx, W);
  MembershipOptions all;
  ColumnSet set = assemble_columns(sys, all);
  std::vector<size_t> rperm(sys.basis.size()), cperm(set.cols.size());
  for (size_t i = 0; i < rperm.size(); ++i) rperm[i] = i;
  for (size_t i = 0; i < cperm.size(); ++i) cperm[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(rperm.begin(), rperm.end(), rng);
  std::shuffle(cperm.begin(), cperm.end(), rng);
  Elimination elim(ctx.p, sys.basis.size(), set.cols.size());
  for (size_t c = 0; c < set.cols.size(); ++c)
    for (const auto& [r, val] : set.cols[c].entries) elim.a[rperm[r]][cperm[c]] = val;
  elim.run();
  SliceInvariants inv;
  inv.dim = sys.basis.size();
  for (const auto& [r, c, v] : elim.pivots) {
    if (v == 0)
      inv.unit_pivots++;
    else
      inv.divisors.push_back(v);
  }
  std::sort(inv.divisors.begin(), inv.divisors.end());
  inv.free_rank = inv.dim - elim.pivots.size();
  return inv;
}

long default_v_max(const ModuleContext& ctx) {
  return (ctx.k * ctx.p + 2) * ctx.g(1) + 2 * ctx.g(1);
}

Staircase annihilator_staircase(const ModuleContext& ctx, long v_max) {
  Staircase st;
  TensorElement p2 = TensorElement::monomial(LocalScalar(pow_z(ctx.p, 2)), 0, 1, 1);
  MembershipResult p2res = membership(p2, ctx);
  st.p2_in = p2res.inside;
  st.cert_p2 = p2res.cert;
  for (long m = 0; m <= v_max && (!st.m0 || !st.m1); ++m) {
    if (!st.m1) {
      TensorElement pv = TensorElement::monomial(LocalScalar(ctx.p), m, 1, 1);
      MembershipResult r = membership(pv, ctx);
      if (r.inside) {
        st.m1 = m;
        st.cert_m1 = r.cert;
      }
    }
    if (!st.m0) {
      TensorElement v = TensorElement::monomial(LocalScalar(1), m, 1, 1);
      MembershipResult r = membership(v, ctx);
      if (r.inside) {
        st.m0 = m;
        st.cert_m0 = r.cert;
      }
    }
  }
  return st;
}

ModPNAnswer crosscheck_modpN(const TensorElement& x, const ModuleContext& ctx, int N,
                             const MembershipOptions& opts) {
  if (x.is_zero()) return ModPNAnswer::Inside;
  auto W = homogeneous_weight(x);
  if (!W) throw std::invalid_argument("crosscheck_modpN: input not weight-homogeneous");
  SliceSystem sys = build_slice(ctx, *W);
  ColumnSet set = assemble_columns(sys, opts);
  const mpz_class mod = pow_z(ctx.p, N);
  size_t rows = sys.basis.size(), cols = set.cols.size();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  std::vector<mpz_class> xv(rows);
  auto clamp = [&](mpz_class v) {
    v %= mod;
    if (sgn(v) < 0) v += mod;
    return v;
  };
  auto val_of = [&](const mpz_class& v) -> int {  // capped at N; v already in [0, mod)
    if (sgn(v) == 0) return N;
    mpz_class rem;
    mpz_class vv = v;
    return static_cast<int>(
        mpz_remove(rem.get_mpz_t(), vv.get_mpz_t(), mpz_class(ctx.p).get_mpz_t()));
  };
  for (size_t c = 0; c < cols; ++c)
    for (const auto& [r, val] : set.cols[c].entries) a[r][c] = reduce_mod(val, ctx.p, N);
  {
    std::vector<LocalScalar> ex = element_vector(x, sys);
    for (size_t r = 0; r < rows; ++r)
      if (!ex[r].is_zero()) xv[r] = reduce_mod(ex[r], ctx.p, N);
  }
  // Valuation-normalized pivoting: a pivot p^v u is usable because every
  // remaining active entry has valuation >= v, so the multiplier
  // (entry / p^v) u^{-1} clears it exactly mod p^N. Row operations with
  // integer multipliers are invertible mod p^N, so solvability mod p^N is
  // decided exactly; the headroom guard below keeps "Inside" conclusive
  // as a statement over Z_(p).
  std::vector<char> row_done(rows, 0), col_done(cols, 0);
  std::vector<std::tuple<size_t, size_t, int>> pivots;
  while (true) {
    bool found = false;
    size_t pr = 0, pc = 0;
    int pv = N;
    for (size_t r = 0; r < rows; ++r) {
      if (row_done[r]) continue;
      for (size_t c = 0; c < cols; ++c) {
        if (col_done[c] || sgn(a[r][c]) == 0) continue;
        int v = val_of(a[r][c]);
        if (v < pv) {
          pv = v;
          pr = r;
          pc = c;
          found = true;
        }
      }
    }
    if (!found || pv >= N) break;
    row_done[pr] = 1;
    col_done[pc] = 1;
    pivots.emplace_back(pr, pc, pv);
    mpz_class pvz = pow_z(ctx.p, pv);
    mpz_class unit = a[pr][pc] / pvz;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
    for (size_t r = 0; r < rows; ++r) {
      if (row_done[r] || sgn(a[r][pc]) == 0) continue;
      mpz_class f = clamp((a[r][pc] / pvz) * inv);
      for (size_t c = 0; c < cols; ++c) {
        if (sgn(a[pr][c]) == 0) continue;
        a[r][c] = clamp(a[r][c] - f * a[pr][c]);
      }
      if (sgn(xv[pr]) != 0) xv[r] = clamp(xv[r] - f * xv[pr]);
    }
  }
  std::vector<char> row_has_pivot(rows, 0);
  for (const auto& [r, c, v] : pivots) row_has_pivot[r] = 1;
  for (size_t r = 0; r < rows; ++r)
    if (!row_has_pivot[r] && sgn(xv[r]) != 0) return ModPNAnswer::Outside;
  std::vector<mpz_class> y(cols);
  int max_pivot_val = 0;
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [r, c, v] = *it;
    max_pivot_val = std::max(max_pivot_val, v);
    mpz_class residual = xv[r];
    for (auto jt = pivots.rbegin(); jt != it; ++jt) {
      const auto& [rj, cj, vj] = *jt;
      if (sgn(a[r][cj]) != 0 && sgn(y[cj]) != 0) residual = clamp(residual - a[r][cj] * y[cj]);
    }
    if (sgn(residual) == 0) continue;
    if (val_of(residual) < v) return ModPNAnswer::Outside;
    mpz_class pvz = pow_z(ctx.p, v);
    mpz_class unit = a[r][c] / pvz;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());
    y[c] = clamp((residual / pvz) * inv);
  }
  if (max_pivot_val + ctx.n + 2 <= N) return ModPNAnswer::Inside;
  return ModPNAnswer::Inconclusive;
}

}  // namespace kuhom
