#ifndef KUHOM_TESTS_ORACLES_HPP
#define KUHOM_TESTS_ORACLES_HPP

// Test-only oracles, independent of the production solver:
//  - integer Smith normal form over Z with classic gcd pivoting,
//  - brute-force span closure mod p^N for small slices.

#include <kuhom/slice.hpp>

#include <cstdint>
#include <unordered_set>
#include <vector>

namespace kuhom::oracles {

// Dense integer matrix of one slice: boundary columns then relation columns.
inline std::vector<std::vector<mpz_class>> slice_matrix(const SliceSystem& sys) {
  size_t rows = sys.basis.size();
  std::vector<std::vector<mpz_class>> a(rows);
  auto push = [&](const std::vector<std::pair<size_t, LocalScalar>>& col) {
    for (size_t r = 0; r < rows; ++r) a[r].push_back(0);
    size_t c = a[0].size() - 1;
    for (const auto& [r, v] : col) {
      if (v.den() != 1) throw std::logic_error("slice column is not integral");
      a[r][c] = v.num();
    }
  };
  for (const auto& col : sys.boundary_cols) push(col);
  for (const auto& col : sys.relation_cols) push(col);
  return a;
}

// Elementary divisors over Z by repeated gcd reduction; returns the diagonal
// (no sign, zero-padded to min(rows, cols)).
inline std::vector<mpz_class> integer_smith(std::vector<std::vector<mpz_class>> a) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<mpz_class> diag;
  size_t t = 0;
  while (t < rows && t < cols) {
    size_t pr = t, pc = t;
    bool found = false;
    mpz_class best;
    for (size_t r = t; r < rows; ++r)
      for (size_t c = t; c < cols; ++c) {
        if (sgn(a[r][c]) == 0) continue;
        mpz_class v = abs(a[r][c]);
        if (!found || v < best) {
          best = v;
          pr = r;
          pc = c;
          found = true;
        }
      }
    if (!found) break;
    std::swap(a[t], a[pr]);
    for (size_t r = 0; r < rows; ++r) std::swap(a[r][t], a[r][pc]);
    bool clean = true;
    for (size_t r = t + 1; r < rows; ++r) {
      if (sgn(a[r][t]) == 0) continue;
      mpz_class q = a[r][t] / a[t][t];
      if (sgn(q) != 0)
        for (size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
      if (sgn(a[r][t]) != 0) clean = false;
    }
    for (size_t c = t + 1; c < cols; ++c) {
      if (sgn(a[t][c]) == 0) continue;
      mpz_class q = a[t][c] / a[t][t];
      if (sgn(q) != 0)
        for (size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
      if (sgn(a[t][c]) != 0) clean = false;
    }
    if (!clean) continue;  // smaller pivot may have appeared
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  return diag;
}

// p-part valuations (> 0 only) of the integer divisors, sorted.
inline std::vector<long> integer_smith_p_valuations(const SliceSystem& sys, long p) {
  std::vector<long> vals;
  for (const mpz_class& d : integer_smith(slice_matrix(sys))) {
    mpz_class rem, dd = d;
    long v = static_cast<long>(
        mpz_remove(rem.get_mpz_t(), dd.get_mpz_t(), mpz_class(p).get_mpz_t()));
    if (v > 0) vals.push_back(v);
  }
  std::sort(vals.begin(), vals.end());
  return vals;
}

struct SpanCount {
  bool feasible = false;
  mpz_class span_size;   // |column span mod p^N|
  mpz_class coker_size;  // p^{N d} / |span|
};

// Literal closure of the subgroup of (Z/p^N)^d generated by the columns.
// Vectors are packed base-p^N into 128 bits; infeasible sizes bail out.
inline SpanCount enumerate_span(const SliceSystem& sys, int N, size_t cap = (1u << 22)) {
  SpanCount out;
  long p = sys.ctx.p;
  size_t d = sys.basis.size();
  mpz_class modz = pow_z(p, N);
  unsigned long mod = modz.get_ui();
  double bits = static_cast<double>(d) * std::log2(static_cast<double>(mod));
  if (bits > 120) return out;

  std::vector<std::vector<unsigned long>> gens;
  auto add_gen = [&](const std::vector<std::pair<size_t, LocalScalar>>& col) {
    std::vector<unsigned long> g(d, 0);
    bool nonzero = false;
    for (const auto& [r, v] : col) {
      g[r] = reduce_mod(v, p, N).get_ui();
      nonzero = nonzero || g[r] != 0;
    }
    if (nonzero) gens.push_back(std::move(g));
  };
  for (const auto& col : sys.boundary_cols) add_gen(col);
  for (const auto& col : sys.relation_cols) add_gen(col);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  auto pack = [&](const std::vector<unsigned long>& v) {
    unsigned __int128 key = 0;
    for (size_t i = 0; i < d; ++i) key = key * mod + v[i];
    return key;
  };
  struct Hash {
    size_t operator()(unsigned __int128 k) const {
      uint64_t lo = static_cast<uint64_t>(k), hi = static_cast<uint64_t>(k >> 64);
      uint64_t x = lo ^ (hi * 0x9e3779b97f4a7c15ULL);
      x ^= x >> 33;
      x *= 0xff51afd7ed558ccdULL;
      x ^= x >> 33;
      return static_cast<size_t>(x);
    }
  };

  std::unordered_set<unsigned __int128, Hash> seen;
  std::vector<std::vector<unsigned long>> frontier{std::vector<unsigned long>(d, 0)};
  seen.insert(pack(frontier[0]));
  while (!frontier.empty()) {
    std::vector<unsigned long> cur = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& g : gens) {
      std::vector<unsigned long> nxt(d);
      for (size_t i = 0; i < d; ++i) {
        nxt[i] = cur[i] + g[i];
        if (nxt[i] >= mod) nxt[i] -= mod;
      }
      if (seen.insert(pack(nxt)).second) {
        if (seen.size() > cap) return out;
        frontier.push_back(std::move(nxt));
      }
    }
  }
  out.feasible = true;
  out.span_size = static_cast<unsigned long>(seen.size());
  mpz_class total;
  mpz_pow_ui(total.get_mpz_t(), modz.get_mpz_t(), static_cast<unsigned long>(d));
  out.coker_size = total / out.span_size;
  return out;
}

// Expected |coker mod p^N| from the exact divisors: free summands contribute
// p^N each, torsion p^{min(s, N)}.
inline mpz_class expected_coker_mod(const SliceInvariants& inv, long p, int N) {
  long e = static_cast<long>(inv.free_rank) * N;
  for (long s : inv.divisors) e += std::min<long>(s, N);
  return pow_z(p, e);
}

}  // namespace kuhom::oracles

#endif
