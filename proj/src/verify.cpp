#include <kuhom/verify.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace kuhom {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::UnsupportedRange: return "unsupported-range";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

TensorElement mono(const LocalScalar& c, long m, long i, long j) {
  return TensorElement::monomial(c, m, i, j);
}

Json replay_certificate(const TensorElement& x, const Certificate& cert) {
  return Json{{"type", "certificate"},
              {"x", element_to_json(x)},
              {"certificate", certificate_to_json(cert)}};
}

Json replay_nf_zero(const TensorElement& diff) {
  return Json{{"type", "nf-zero"}, {"diff", element_to_json(diff)}};
}

struct InstanceBuilder {
  ClaimInstance inst;
  std::vector<Json> replays;

  InstanceBuilder(const std::string& claim, Json params) {
    inst.claim = claim;
    inst.params = std::move(params);
    inst.verdict = Verdict::Pass;
  }

  void fail(const std::string& what, Json witness = Json()) {
    inst.verdict = Verdict::Fail;
    Json f = Json{{"what", what}};
    if (!witness.is_null()) f["witness"] = std::move(witness);
    inst.payload["failures"].push_back(std::move(f));
  }

  void note(const std::string& key, Json value) { inst.payload[key] = std::move(value); }

  ClaimInstance finish() {
    if (!replays.empty() && inst.verdict == Verdict::Pass) inst.payload["replay"] = replays;
    return std::move(inst);
  }
};

void check_nf_equal(InstanceBuilder& b, const TensorElement& lhs, const TensorElement& rhs,
                    const ModuleContext& ctx, const Json& tag) {
  TensorElement diff = lhs - rhs;
  TensorElement nf = normal_form(diff, ctx);
  if (nf.is_zero()) {
    b.replays.push_back(replay_nf_zero(diff));
  } else {
    Json w = tag;
    w["nonzero_normal_form"] = element_to_json(nf);
    b.fail("normal form of difference is nonzero", w);
  }
}

bool check_inside(InstanceBuilder& b, const TensorElement& x, const ModuleContext& ctx,
                  const MembershipOptions& opts, const Json& tag,
                  Certificate* cert_out = nullptr) {
  MembershipResult r = membership(x, ctx, opts);
  if (r.inside) {
    b.replays.push_back(replay_certificate(x, r.cert));
    if (cert_out) *cert_out = r.cert;
    return true;
  }
  Json w = tag;
  w["x"] = element_to_json(x);
  b.fail("membership refused", w);
  return false;
}

void check_outside(InstanceBuilder& b, const TensorElement& x, const ModuleContext& ctx,
                   const Json& tag) {
  MembershipResult r = membership(x, ctx);
  if (r.inside) {
    Json w = tag;
    w["x"] = element_to_json(x);
    w["certificate"] = certificate_to_json(r.cert);
    b.fail("element unexpectedly inside", w);
  }
}

LocalScalar cert_coeff_at(const Certificate& cert, const MonoKey& gen) {
  for (const auto& [g, c] : cert.boundary)
    if (g == gen) return c;
  return LocalScalar(0);
}

// A certificate whose `gen`-coefficient has valuation d exists iff the found
// coefficient already has it, or p^e * column(gen) lies in the span of the
// other columns for some e <= d (the coefficient is then shiftable).
bool leading_val_achievable(const Certificate& cert, const MonoKey& gen, long d,
                            const ModuleContext& ctx, const MembershipOptions& opts) {
  LocalScalar c0 = cert_coeff_at(cert, gen);
  if (!c0.is_zero() && *valuation(c0, ctx.p) == d) return true;
  auto e = min_shift_valuation(gen, ctx, opts, d);
  return e.has_value() && *e <= d;
}

template <typename F>
ClaimInstance timed_instance(const std::string& claim, Json params, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  InstanceBuilder b(claim, std::move(params));
  try {
    body(b);
  } catch (const std::exception& e) {
    b.fail(std::string("exception: ") + e.what());
  }
  ClaimInstance inst = b.finish();
  inst.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return inst;
}

}  // namespace

TensorElement random_homogeneous(const ModuleContext& ctx, long W, size_t terms,
                                 std::mt19937_64& rng) {
  TensorElement x;
  std::uniform_int_distribution<long> numd(-6 * ctx.p, 6 * ctx.p);
  long dens2[] = {1, 3, 5, 9};
  long dens3[] = {1, 2, 5, 8};
  for (size_t t = 0; t < terms; ++t) {
    long i = 1 + static_cast<long>(rng() % static_cast<unsigned long>(W - 1));
    long j = 1 + static_cast<long>(rng() % static_cast<unsigned long>(std::max<long>(1, W - i)));
    long m = W - i - j;
    if (m < 0) continue;
    long den = (ctx.p == 2 ? dens2 : dens3)[rng() % 4];
    x.add(LocalScalar(numd(rng), den), m, i, j);
  }
  return x;
}

std::vector<ClaimInstance> verify_lemma_torsion(long p, int n, int k_max, long a_max,
                                                Convention conv) {
  std::vector<ClaimInstance> out;
  for (int k = 0; k <= k_max; ++k) {
    Json params{{"p", p}, {"n", n}, {"k", k}, {"a_max", a_max},
                {"convention", convention_name(conv)}};
    out.push_back(timed_instance("lemma-torsion", params, [&](InstanceBuilder& b) {
      ModuleContext ctx(p, n, std::max(n - 1, 2), conv);
      LocalScalar pw(pow_z(p, n + k));
      long bmax = (k + 1) * ctx.g(1);
      for (long a = 1; a <= a_max; ++a)
        for (long bb = 1; bb <= bmax; ++bb)
          check_nf_equal(b, mono(pw, 0, a, bb), TensorElement(), ctx, Json{{"a", a}, {"b", bb}});
    }));
  }
  // the lemma makes no assertion just past the b-range; report that honestly
  long probe_b = k_max >= 0 ? (k_max + 1) * (p - 1) + 1 : 1;
  Json probe{{"p", p}, {"n", n}, {"k", k_max}, {"b", probe_b},
             {"convention", convention_name(conv)}};
  out.push_back(timed_instance("lemma-torsion", probe, [&](InstanceBuilder& b) {
    b.inst.verdict = Verdict::UnsupportedRange;
    b.note("note", "b exceeds (k+1)*g1; out of the lemma's range");
  }));
  return out;
}

std::vector<ClaimInstance> verify_teoosa(long p, int k, long a_max, long b_max,
                                         Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"k", k}, {"a_max", a_max}, {"b_max", b_max},
              {"convention", convention_name(conv)}};
  out.push_back(timed_instance("teoosa", params, [&](InstanceBuilder& b) {
    if (k < 2) {
      b.inst.verdict = Verdict::UnsupportedRange;
      return;
    }
    ModuleContext ctx(p, 2, k, conv);
    LocalScalar pw(pow_z(p, k + 1));
    for (long a = 1; a <= a_max; ++a)
      for (long bb = 1; bb <= b_max; ++bb)
        check_nf_equal(b, mono(pw, 0, a, bb), teoosa_rhs(a, bb, k, ctx), ctx,
                       Json{{"a", a}, {"b", bb}});
  }));
  return out;
}

std::vector<ClaimInstance> verify_ck(int k_max_even) {
  std::vector<ClaimInstance> out;
  for (int k = 2; k <= k_max_even; k += 2) {
    out.push_back(timed_instance("ck", Json{{"k", k}}, [&](InstanceBuilder& b) {
      for (long t = k / 2; t <= k + 2; ++t) {
        if (cd_c(k, t) != 0) b.fail("c_k(t) != 0", Json{{"t", t}});
        if (cd_d(k, t) != 0) b.fail("d_k(t) != 0", Json{{"t", t}});
      }
      if (cd_c(k + 1, k / 2) != cd_d(k, k / 2 - 1)) b.fail("c_{k+1}(k/2) != d_k(k/2-1)");
      if (cd_d(k + 1, k / 2) != 0) b.fail("d_{k+1}(k/2) != 0");
      for (long t = k / 2 + 1; t <= k + 2; ++t) {
        if (cd_c(k + 1, t) != 0) b.fail("c_{k+1}(t) != 0", Json{{"t", t}});
        if (cd_d(k + 1, t) != 0) b.fail("d_{k+1}(t) != 0", Json{{"t", t}});
      }
    }));
  }
  return out;
}

namespace {

// Sigma-shaped template columns for the structural residual check: the
// level-(k+2) sums for [a,b] plus the level-(k+1) sums shifted by the S-term
// prefactors, each carrying its template p-power. Membership of the residual
// in the Z_(p)-span of these columns (plus relations) is the machine form
// of "the remainder is a Sigma".
std::vector<TensorElement> sigma_template_columns(long a, long b, int k, int nn,
                                                  const ModuleContext& ctx) {
  long g1 = ctx.g(1), g2 = ctx.g(2);
  std::vector<TensorElement> cols;
  auto add_ab = [&](long ppow, long shift) {
    if (ppow < 0) return;
    auto [A, B] = ab_sums(a, b - shift, ctx);
    TensorElement col = (A + B).scaled(LocalScalar(pow_z(ctx.p, ppow)), shift);
    if (!col.is_zero()) cols.push_back(std::move(col));
  };
  for (long t = 0; t <= k; ++t) add_ab(k - t, t * g1);
  for (long t = 1; t <= k / 2; ++t) add_ab(k - 2 * t, t * g2);
  for (long r = 1; r <= (k - 1) / 2; ++r)
    for (long t = 1; t <= k - 2 * r; ++t) add_ab(k - 2 * r - t, r * g2 + t * g1);
  std::vector<long> shifts = {g1, ctx.p * g1, f_index(-1, g1) * g1};
  for (long i = 0; i <= nn; ++i) shifts.push_back(f_index(i, g1) * g1);
  for (long X : shifts) {
    for (long t = 0; t <= k - 1; ++t) add_ab(k - 1 - t, X + t * g1);
    for (long t = 1; t <= (k - 1) / 2; ++t) add_ab(k - 1 - 2 * t, X + t * g2);
    for (long r = 1; r <= (k - 2) / 2; ++r)
      for (long t = 1; t <= k - 1 - 2 * r; ++t) add_ab(k - 1 - 2 * r - t, X + r * g2 + t * g1);
  }
  return cols;
}

void sdif_structural_check(InstanceBuilder& b, long p, int k, int nn, long a, long bb,
                           Convention conv) {
  ModuleContext ctx(p, 2, k, conv);
  auto [sk, skn] = s_terms(a, bb, k, nn, ctx);
  TensorElement d = sk - skn.scaled(LocalScalar(pow_z(p, k + 1))) - sdif_rhs(a, bb, k, nn, ctx);
  if (d.is_zero()) return;
  MembershipOptions opts;
  opts.boundary_cols = false;
  opts.custom_cols = sigma_template_columns(a, bb, k, nn, ctx);
  check_inside(b, d, ctx, opts, Json{{"a", a}, {"b", bb}, {"residual_check", "sigma-shape"}});
}

}  // namespace

std::vector<ClaimInstance> verify_sdif(long p, int k, int nn, Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"k", k}, {"nn", nn}, {"convention", convention_name(conv)}};
  out.push_back(timed_instance("sdif", params, [&](InstanceBuilder& b) {
    if (nn < 0 || nn > k - 5) {
      b.inst.verdict = Verdict::UnsupportedRange;
      return;
    }
    long g1 = p - 1;
    long tmax = (k - 2) / 2;
    long bmax = sdif_f(k, tmax, nn, g1) + 2 * g1;
    for (long a : {1L, 2L})
      for (long bb : {bmax, bmax + 1}) sdif_structural_check(b, p, k, nn, a, bb, conv);
  }));
  return out;
}

std::vector<ClaimInstance> verify_nuevo(long p, int k, Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"k", k}, {"convention", convention_name(conv)}};
  out.push_back(timed_instance("nuevo", params, [&](InstanceBuilder& b) {
    ModuleContext ctx(p, 2, k, conv);
    long g1 = ctx.g(1), g2 = ctx.g(2);
    for (long a = 1; a <= g2; ++a)
      for (long bb = 1; bb <= g1 * g1; ++bb) {
        TensorElement x = mono(LocalScalar(p), k * g1, a, bb);
        MonoKey lead{0, a, bb + k * g1};
        MembershipOptions opts;
        opts.boundary_filtration_le = ctx.filtration_of(lead.i, lead.j);
        Certificate cert;
        if (!check_inside(b, x, ctx, opts, Json{{"a", a}, {"b", bb}}, &cert)) continue;
        if (!leading_val_achievable(cert, lead, 0, ctx, opts))
          b.fail("no certificate with unit leading coefficient", Json{{"a", a}, {"b", bb}});
      }
  }));
  return out;
}

std::vector<ClaimInstance> verify_nuevo2(long p, int k, Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"k", k}, {"convention", convention_name(conv)}};
  out.push_back(timed_instance("nuevo2", params, [&](InstanceBuilder& b) {
    ModuleContext ctx(p, 2, k, conv);
    long g1 = ctx.g(1);
    TensorElement x = mono(LocalScalar(p), k * g1, p, g1 * g1 + 1);
    MonoKey lead{0, p, g1 * g1 + k * g1 + 1};
    MembershipOptions opts;
    opts.boundary_filtration_le = ctx.filtration_of(lead.i, lead.j);
    Certificate cert;
    if (!check_inside(b, x, ctx, opts, Json::object(), &cert)) return;
    if (!leading_val_achievable(cert, lead, 0, ctx, opts))
      b.fail("no certificate with unit leading coefficient");
  }));
  return out;
}

std::vector<ClaimInstance> verify_dife(long p, int k, Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"k", k}, {"convention", convention_name(conv)}};
  out.push_back(timed_instance("dife", params, [&](InstanceBuilder& b) {
    ModuleContext ctx(p, 2, k, conv);
    long g1 = ctx.g(1);

    // a) d([1, k g1 + 1]) is a unit multiple of p v^{k g1} [1,1]
    TensorElement img = apply_boundary(TensorElement::generator(1, k * g1 + 1), ctx);
    bool shape_ok = img.monomial_count() == 1;
    if (shape_ok) {
      const auto& [key, poly] = *img.terms().begin();
      const auto& [m, c] = *poly.coeffs().begin();
      shape_ok = key.i == 1 && key.j == 1 && m == k * g1 && *valuation(c, p) == 1;
    }
    if (!shape_ok)
      b.fail("boundary image is not unit * p v^{k g1} [1,1]",
             Json{{"image", element_to_json(img)}});
    else
      b.note("differential_a", element_to_json(img));

    // b) v^{(kp+2) g1} [1,1] has a preimage led by p [p, (pk+1) g1 + 1]
    TensorElement x = mono(LocalScalar(1), (k * p + 2) * g1, 1, 1);
    MonoKey lead{0, p, (p * k + 1) * g1 + 1};
    MembershipOptions opts;
    Certificate cert;
    if (check_inside(b, x, ctx, opts, Json{{"item", "b"}}, &cert)) {
      if (!leading_val_achievable(cert, lead, 1, ctx, opts))
        b.fail("no certificate led by p * [p, (pk+1) g1 + 1]");
    }

    // minimality of both exponents
    check_outside(b, mono(LocalScalar(1), (k * p + 2) * g1 - 1, 1, 1), ctx,
                  Json{{"item", "b-minimality"}});
    check_outside(b, mono(LocalScalar(p), k * g1 - 1, 1, 1), ctx,
                  Json{{"item", "a-minimality"}});

    if (k >= 6) {
      // derivation path of the S-term pipeline: the stated leading term
      // completes with strictly lower filtration terms, and the S-term
      // reduction holds one level down at this instance
      TensorElement seed =
          apply_boundary_raw(mono(LocalScalar(p), 0, p, (p * k + 1) * g1 + 1), ctx);
      MembershipOptions low;
      low.boundary_filtration_lt = ctx.filtration_of(lead.i, lead.j);
      check_inside(b, x - seed, ctx, low, Json{{"item", "b-completion"}});
      sdif_structural_check(b, p, k - 1, k - 6, 1, (p * k + 1) * g1 + 1, conv);
    }
  }));
  return out;
}

std::vector<ClaimInstance> verify_cp(long p, int k, const std::vector<long>& as,
                                     Convention conv) {
  std::vector<ClaimInstance> out;
  for (long a : as) {
    Json params{{"p", p}, {"k", k}, {"a", a}, {"convention", convention_name(conv)}};
    out.push_back(timed_instance("cp", params, [&](InstanceBuilder& b) {
      ModuleContext ctx(p, 2, k, conv);
      long g1 = ctx.g(1);
      TensorElement img = apply_boundary_raw(TensorElement::generator(a, k * g1), ctx);
      MembershipOptions opts;
      opts.boundary_filtration_lt = ctx.filtration_of(a, k * g1);
      check_inside(b, img, ctx, opts, Json::object());
    }));
  }
  return out;
}

std::vector<ClaimInstance> verify_part(long p, int nn, long a_max, Convention conv) {
  std::vector<ClaimInstance> out;
  for (long a = 1; a <= a_max; ++a) {
    Json params{{"p", p}, {"nn", nn}, {"a", a}, {"convention", convention_name(conv)}};
    out.push_back(timed_instance("part", params, [&](InstanceBuilder& b) {
      if (nn < 3 || nn > p + 1) {
        b.inst.verdict = Verdict::UnsupportedRange;
        return;
      }
      ModuleContext ctx(p, 2, 2, conv);
      TensorElement lhs = mono(LocalScalar(pow_z(p, 2)), 0, a, nn * ctx.g(1));
      check_nf_equal(b, lhs, part_rhs(a, nn, ctx), ctx, Json::object());
    }));
  }
  return out;
}

std::vector<ClaimInstance> verify_relcp(long p, int nn, long a_max, Convention conv) {
  std::vector<ClaimInstance> out;
  for (long a = 1; a <= a_max; ++a) {
    Json params{{"p", p}, {"nn", nn}, {"a", a}, {"convention", convention_name(conv)}};
    out.push_back(timed_instance("relcp", params, [&](InstanceBuilder& b) {
      if (nn < p + 2) {
        b.inst.verdict = Verdict::UnsupportedRange;
        return;
      }
      ModuleContext ctx(p, 2, 2, conv);
      TensorElement lhs = mono(LocalScalar(pow_z(p, 2)), 0, a, nn * ctx.g(1));
      check_nf_equal(b, lhs, relcp_rhs(a, nn, ctx), ctx, Json::object());
    }));
  }
  return out;
}

std::vector<ClaimInstance> verify_diagonal(long p, int e, Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"e", e}, {"convention", convention_name(conv)}};
  out.push_back(timed_instance("diagonal", params, [&](InstanceBuilder& b) {
    if (e < 2) {
      b.inst.verdict = Verdict::UnsupportedRange;
      return;
    }
    ModuleContext ctx(p, e, e - 1, conv);  // boundary uses [p^e]
    Json table = Json::array();
    for (int t = 0; t <= e - 1; ++t) {
      long gt = ctx.g(t), gt1 = ctx.g(t + 1);
      TensorElement x = mono(LocalScalar(pow_z(p, e - t - 1)), gt + gt1, 1, 1);
      MembershipResult r = membership(x, ctx);
      Json row{{"t", t}, {"inside", r.inside}};
      if (r.inside) {
        LocalScalar c0 = cert_coeff_at(r.cert, MonoKey{0, gt + 1, gt1 + 1});
        row["leading_matches"] = !c0.is_zero() && *valuation(c0, p) == t;
        b.replays.push_back(replay_certificate(x, r.cert));
      } else {
        b.fail("diagonal differential target not hit", Json{{"t", t}});
      }
      table.push_back(std::move(row));
    }
    b.note("table", table);
  }));
  return out;
}

std::vector<ClaimInstance> verify_ann(long p, int k, Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"k", k}, {"convention", convention_name(conv)}};
  out.push_back(timed_instance("ann", params, [&](InstanceBuilder& b) {
    ModuleContext ctx(p, 2, k, conv);
    long g1 = ctx.g(1);
    Staircase st = annihilator_staircase(ctx, default_v_max(ctx));
    if (!st.p2_in) b.fail("p^2 [1,1] not annihilated");
    if (!st.m0) {
      if (b.inst.verdict == Verdict::Pass) b.inst.verdict = Verdict::Inconclusive;
      b.note("m0", "not found <= v_max");
    } else if (*st.m0 != (k * p + 2) * g1) {
      b.fail("m0 differs from (kp+2)*g1", Json{{"m0", *st.m0}});
    }
    if (!st.m1) {
      if (b.inst.verdict == Verdict::Pass) b.inst.verdict = Verdict::Inconclusive;
      b.note("m1", "not found <= v_max");
    } else if (*st.m1 != k * g1 && *st.m1 != (k - 1) * g1) {
      b.fail("m1 matches neither k*g1 nor (k-1)*g1", Json{{"m1", *st.m1}});
    }
    if (st.m0) b.note("m0", *st.m0);
    if (st.m1) {
      b.note("m1", *st.m1);
      b.note("m1_formula", *st.m1 == k * g1 ? "k*g1" : "(k-1)*g1");
    }
    b.note("p2_in", st.p2_in);
    if (st.m0)
      b.replays.push_back(replay_certificate(mono(LocalScalar(1), *st.m0, 1, 1), st.cert_m0));
    if (st.m1)
      b.replays.push_back(replay_certificate(mono(LocalScalar(p), *st.m1, 1, 1), st.cert_m1));
    b.replays.push_back(replay_certificate(mono(LocalScalar(pow_z(p, 2)), 0, 1, 1), st.cert_p2));
    if (st.m0) {
      // staircase monotonicity: the v-shifted m0 certificate replays at m0+1
      Certificate shifted;
      for (const auto& [g, c] : st.cert_m0.boundary)
        shifted.boundary.emplace_back(MonoKey{g.m + 1, g.i, g.j}, c);
      for (const auto& [g, c] : st.cert_m0.relations)
        shifted.relations.emplace_back(MonoKey{g.m + 1, g.i, g.j}, c);
      if (!certificate_replay(shifted, mono(LocalScalar(1), *st.m0 + 1, 1, 1), ctx))
        b.fail("shifted m0 certificate does not replay at m0+1");
    }
  }));
  return out;
}

std::vector<ClaimInstance> verify_nf_uniqueness(long p, int n, int k, int samples,
                                                unsigned long seed, Convention conv) {
  std::vector<ClaimInstance> out;
  Json params{{"p", p}, {"n", n}, {"k", k}, {"samples", samples}, {"seed", seed},
              {"convention", convention_name(conv)}};
  out.push_back(timed_instance("nf-unique", params, [&](InstanceBuilder& b) {
    ModuleContext ctx(p, n, k, conv);
    std::mt19937_64 rng(seed);
    MembershipOptions relonly;
    relonly.boundary_cols = false;
    int checked = 0;
    for (int s = 0; s < samples; ++s) {
      long W = 4 + static_cast<long>(rng() % 5);
      TensorElement x = random_homogeneous(ctx, W, 3, rng);
      if (normal_form(x, ctx, NormalFormStrategy::LowFirst) !=
          normal_form(x, ctx, NormalFormStrategy::HighFirstItemized)) {
        b.fail("reduction strategies disagree", Json{{"x", element_to_json(x)}});
        continue;
      }
      TensorElement y = x;
      for (int t = 0; t < 2; ++t) {
        long i = 1 + static_cast<long>(rng() % static_cast<unsigned long>(W - 1));
        long j =
            1 + static_cast<long>(rng() % static_cast<unsigned long>(std::max<long>(1, W - i)));
        long m = W - i - j;
        if (m < 0) continue;
        long c = static_cast<long>(rng() % 7) - 3;
        if (c == 0) continue;
        y += relation_instance(ctx, m, i, j).scaled(LocalScalar(c));
      }
      bool nf_zero = normal_form(x - y, ctx).is_zero();
      bool span = membership(x - y, ctx, relonly).inside;
      if (!nf_zero || !span) {
        b.fail("relation-span difference not detected",
               Json{{"x", element_to_json(x)}, {"y", element_to_json(y)}});
        continue;
      }
      TensorElement z = random_homogeneous(ctx, W, 2, rng);
      bool nfz = normal_form(x - z, ctx).is_zero();
      bool inz = membership(x - z, ctx, relonly).inside;
      if (nfz != inz)
        b.fail("nf-zero and relation-span membership disagree",
               Json{{"x", element_to_json(x)}, {"z", element_to_json(z)}});
      if (normal_form(x, ctx) == normal_form(z, ctx) && !nfz)
        b.fail("equal normal forms but differing cosets",
               Json{{"x", element_to_json(x)}, {"z", element_to_json(z)}});
      ++checked;
    }
    b.note("samples_checked", checked);
  }));
  return out;
}

std::vector<std::string> claim_ids() {
  return {"lemma-torsion", "teoosa", "ck", "sdif", "nuevo", "nuevo2", "dife",
          "cp", "part", "relcp", "diagonal", "ann", "nf-unique", "all"};
}

bool is_claim_id(const std::string& id) {
  auto ids = claim_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace {

std::vector<long> or_default(const std::vector<long>& v, std::vector<long> d) {
  return v.empty() ? d : v;
}
std::vector<int> or_default(const std::vector<int>& v, std::vector<int> d) {
  return v.empty() ? d : v;
}

using TaskList = std::vector<std::function<std::vector<ClaimInstance>()>>;

void enqueue(const std::string& id, const VerifyOptions& o, TaskList& tasks) {
  Convention cv = o.convention;
  if (id == "lemma-torsion") {
    for (long p : or_default(o.ps, {2, 3}))
      for (int n : or_default(o.ns, {2, 3})) {
        int kmax = o.ks.empty() ? (n == 2 ? 4 : 3) : o.ks.back();
        long amax = o.as.empty() ? 5 : o.as.back();
        tasks.push_back([=] { return verify_lemma_torsion(p, n, kmax, amax, cv); });
      }
  } else if (id == "teoosa") {
    for (long p : or_default(o.ps, {2, 3}))
      for (int k : or_default(o.ks, {2, 3, 4, 5})) {
        long amax = o.as.empty() ? 3 : o.as.back();
        long g1 = p - 1, g2 = p * p - 1;
        long bmax = o.bs.empty() ? (k + 2) * g1 + g2 : o.bs.back();
        tasks.push_back([=] { return verify_teoosa(p, k, amax, bmax, cv); });
      }
  } else if (id == "ck") {
    int kmax = o.ks.empty() ? 20 : o.ks.back();
    tasks.push_back([=] { return verify_ck(kmax); });
  } else if (id == "sdif") {
    for (long p : or_default(o.ps, {2}))
      for (int k : or_default(o.ks, {5, 6, 7})) {
        std::vector<int> nns = o.ns;
        if (nns.empty())
          for (int x = 0; x <= k - 5; ++x) nns.push_back(x);
        for (int nn : nns) tasks.push_back([=] { return verify_sdif(p, k, nn, cv); });
      }
  } else if (id == "nuevo") {
    for (long p : or_default(o.ps, {2, 3}))
      for (int k : or_default(o.ks, {2, 3}))
        tasks.push_back([=] { return verify_nuevo(p, k, cv); });
  } else if (id == "nuevo2") {
    for (long p : or_default(o.ps, {2, 3}))
      for (int k : or_default(o.ks, {2, 3}))
        tasks.push_back([=] { return verify_nuevo2(p, k, cv); });
  } else if (id == "dife") {
    for (long p : or_default(o.ps, {2, 3}))
      for (int k : or_default(o.ks, {2, 3}))
        tasks.push_back([=] { return verify_dife(p, k, cv); });
    if (o.ps.empty() && o.ks.empty())
      tasks.push_back([=] { return verify_dife(2, 6, cv); });  // S-term pipeline instance
  } else if (id == "cp") {
    for (long p : or_default(o.ps, {2, 3}))
      for (int k : or_default(o.ks, {2, 3})) {
        long g1 = p - 1;
        std::vector<long> as = o.as;
        if (as.empty()) {
          if (o.cp_all_a)
            for (long a = 1; a <= 3 * g1; ++a) as.push_back(a);
          else
            as = {g1, 2 * g1, 3 * g1};
        }
        tasks.push_back([=] { return verify_cp(p, k, as, cv); });
      }
  } else if (id == "part") {
    std::vector<std::pair<long, int>> grid;
    if (o.ps.empty() && o.ns.empty())
      grid = {{2, 3}, {3, 3}, {3, 4}, {5, 3}};
    else
      for (long p : or_default(o.ps, {3}))
        for (int nn : or_default(o.ns, {3})) grid.emplace_back(p, nn);
    for (auto [p, nn] : grid) {
      long amax = o.as.empty() ? (p == 5 ? 1 : 3) : o.as.back();
      tasks.push_back([=] { return verify_part(p, nn, amax, cv); });
    }
  } else if (id == "relcp") {
    std::vector<std::pair<long, int>> grid;
    if (o.ps.empty() && o.ns.empty())
      grid = {{3, 5}, {3, 6}};
    else
      for (long p : or_default(o.ps, {3}))
        for (int nn : or_default(o.ns, {5})) grid.emplace_back(p, nn);
    for (auto [p, nn] : grid) {
      long amax = o.as.empty() ? 3 : o.as.back();
      tasks.push_back([=] { return verify_relcp(p, nn, amax, cv); });
    }
  } else if (id == "diagonal") {
    std::vector<std::pair<long, int>> grid;
    if (o.ps.empty() && o.ns.empty())
      grid = {{2, 2}, {2, 3}, {3, 2}};
    else
      for (long p : or_default(o.ps, {2}))
        for (int e : or_default(o.ns, {2})) grid.emplace_back(p, e);
    for (auto [p, e] : grid) tasks.push_back([=] { return verify_diagonal(p, e, cv); });
  } else if (id == "ann") {
    std::vector<std::pair<long, int>> grid;
    if (o.ps.empty() && o.ks.empty())
      grid = {{2, 2}, {2, 3}, {2, 4}, {3, 2}};
    else
      for (long p : or_default(o.ps, {2}))
        for (int k : or_default(o.ks, {2})) grid.emplace_back(p, k);
    for (auto [p, k] : grid) tasks.push_back([=] { return verify_ann(p, k, cv); });
  } else if (id == "nf-unique") {
    for (long p : or_default(o.ps, {2, 3}))
      tasks.push_back([=] { return verify_nf_uniqueness(p, 2, 2, 200, o.seed, cv); });
  } else {
    throw std::invalid_argument("unknown claim id: " + id);
  }
}

}  // namespace

std::vector<ClaimInstance> run_claim(const std::string& id, const VerifyOptions& opts) {
  TaskList tasks;
  if (id == "all") {
    for (const std::string& c : claim_ids())
      if (c != "all") enqueue(c, opts, tasks);
  } else {
    enqueue(id, opts, tasks);
  }
  std::vector<std::vector<ClaimInstance>> buckets(tasks.size());
  if (opts.jobs <= 1) {
    for (size_t i = 0; i < tasks.size(); ++i) buckets[i] = tasks[i]();
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    int nw = std::min<int>(opts.jobs, static_cast<int>(tasks.size()));
    for (int w = 0; w < nw; ++w)
      workers.emplace_back([&] {
        while (true) {
          size_t i = next.fetch_add(1);
          if (i >= tasks.size()) break;
          buckets[i] = tasks[i]();
        }
      });
    for (auto& th : workers) th.join();
  }
  std::vector<ClaimInstance> out;
  for (auto& bucket : buckets)
    for (auto& inst : bucket) out.push_back(std::move(inst));
  return out;
}

Json report_to_json(const std::vector<ClaimInstance>& instances) {
  Json arr = Json::array();
  int fails = 0, inconclusive = 0;
  for (const auto& inst : instances) {
    if (inst.verdict == Verdict::Fail) fails++;
    if (inst.verdict == Verdict::Inconclusive) inconclusive++;
    arr.push_back(Json{{"claim", inst.claim},
                       {"params", inst.params},
                       {"verdict", verdict_name(inst.verdict)},
                       {"seconds", inst.seconds},
                       {"payload", inst.payload}});
  }
  return Json{{"instances", std::move(arr)},
              {"failures", fails},
              {"inconclusive", inconclusive}};
}

bool all_pass(const std::vector<ClaimInstance>& instances) {
  for (const auto& inst : instances)
    if (inst.verdict == Verdict::Fail || inst.verdict == Verdict::Inconclusive) return false;
  return true;
}

std::vector<ClaimInstance> replay_report(const Json& report) {
  std::vector<ClaimInstance> out;
  for (const auto& entry : report.at("instances")) {
    ClaimInstance inst;
    inst.claim = entry.at("claim").get<std::string>();
    inst.params = entry.at("params");
    inst.verdict = Verdict::Pass;
    std::string orig = entry.at("verdict").get<std::string>();
    if (orig != "pass") {
      inst.verdict = orig == "fail" ? Verdict::Fail : Verdict::UnsupportedRange;
      inst.payload["note"] = "not replayed (original verdict is not pass)";
      out.push_back(std::move(inst));
      continue;
    }
    long p = inst.params.value("p", 2L);
    int n = inst.params.value("n", 2);
    int k = inst.params.value("k", 2);
    if (inst.params.contains("e")) {
      n = inst.params["e"].get<int>();
      k = n - 1;
    }
    if (k < n - 1) k = n - 1;
    if (k < 2 && n <= 2) k = 2;
    Convention cv = convention_from_name(inst.params.value("convention", "unsigned"));
    ModuleContext ctx(p, n, k, cv);
    const Json& payload = entry.at("payload");
    int replayed = 0;
    if (payload.contains("replay")) {
      for (const auto& r : payload.at("replay")) {
        std::string type = r.at("type").get<std::string>();
        bool ok = false;
        if (type == "certificate") {
          ok = certificate_replay(certificate_from_json(r.at("certificate")),
                                  element_from_json(r.at("x")), ctx);
        } else if (type == "nf-zero") {
          ok = normal_form(element_from_json(r.at("diff")), ctx).is_zero();
        }
        if (!ok) {
          inst.verdict = Verdict::Fail;
          inst.payload["failures"].push_back(Json{{"what", "replay failed"}, {"entry", r}});
        }
        ++replayed;
      }
    }
    inst.payload["replayed"] = replayed;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace kuhom
