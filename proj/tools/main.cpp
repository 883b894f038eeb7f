#include <kuhom/verify.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <thread>
#include <fstream>
#include <iostream>

using namespace kuhom;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 pass, 1 claim failure, 2 usage/parse error, 3 inconclusive
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

std::string iso_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

struct Output {
  std::string format = "json";
  std::string out_path;

  // Wraps the deterministic payload in a manifest envelope; only the
  // timestamps differ between identical runs.
  void emit(const Json& payload, const std::string& command, const Json& params,
            const std::string& started) {
    Json doc{{"manifest",
              Json{{"tool", "kuhom"},
                   {"version", kVersion},
                   {"command", command},
                   {"params", params},
                   {"started", started},
                   {"finished", iso_now()}}},
             {"payload", payload}};
    std::string text = doc.dump(2) + "\n";
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      f << text;
    } else {
      std::cout << text;
    }
  }
};

Convention parse_convention(const std::string& s) { return convention_from_name(s); }

TensorElement read_element(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open element file: " + path);
  Json j = Json::parse(f);
  return element_from_json(j);
}

std::string poly_text(const KuPoly& p) { return p.str(); }

void print_element_text(const TensorElement& e) {
  if (e.is_zero()) {
    std::cout << "0\n";
    return;
  }
  for (const auto& [key, poly] : e.terms())
    std::cout << "[" << key.i << "," << key.j << "]  " << poly_text(poly) << "\n";
}

int cmd_series(long p, int n, const std::string& conv, Output& out, const std::string& cmdline,
               const std::string& started) {
  const PSeries& s = m_series(p, n, parse_convention(conv));
  if (out.format == "text") {
    for (size_t t = 0; t < s.size(); ++t)
      std::cout << "a_" << t << " = " << s.a(static_cast<long>(t)).str()
                << (t > 0 ? " * v^" + std::to_string(t) : "") << "\n";
    return kExitPass;
  }
  out.emit(series_to_json(s), cmdline, Json{{"p", p}, {"n", n}, {"convention", conv}}, started);
  return kExitPass;
}

int cmd_nf(long p, int n, int k, const std::string& conv, const std::string& in, Output& out,
           const std::string& cmdline, const std::string& started) {
  ModuleContext ctx(p, n, std::max(k, n - 1), parse_convention(conv));
  TensorElement x = read_element(in);
  TensorElement nf = normal_form(x, ctx);
  if (out.format == "text") {
    print_element_text(nf);
    return kExitPass;
  }
  out.emit(element_to_json(nf), cmdline,
           Json{{"p", p}, {"n", n}, {"k", ctx.k}, {"convention", conv}, {"in", in}}, started);
  return kExitPass;
}

int cmd_boundary(long p, int n, int k, const std::string& conv, const std::string& in,
                 Output& out, const std::string& cmdline, const std::string& started) {
  ModuleContext ctx(p, n, k, parse_convention(conv));
  TensorElement img = apply_boundary(read_element(in), ctx);
  if (out.format == "text") {
    print_element_text(img);
    return kExitPass;
  }
  out.emit(element_to_json(img), cmdline,
           Json{{"p", p}, {"n", n}, {"k", k}, {"convention", conv}, {"in", in}}, started);
  return kExitPass;
}

int cmd_ann(long p, int k, long vmax, const std::string& conv, Output& out,
            const std::string& cmdline, const std::string& started) {
  ModuleContext ctx(p, 2, k, parse_convention(conv));
  if (vmax < 0) vmax = default_v_max(ctx);
  Staircase st = annihilator_staircase(ctx, vmax);
  Json payload{{"p", p}, {"k", k}};
  if (st.m0)
    payload["m0"] = *st.m0;
  else
    payload["m0"] = "not found <= vmax";
  if (st.m1)
    payload["m1"] = *st.m1;
  else
    payload["m1"] = "not found <= vmax";
  payload["p2"] = st.p2_in;
  Json certs = Json::object();
  if (st.m0) certs["m0"] = certificate_to_json(st.cert_m0);
  if (st.m1) certs["m1"] = certificate_to_json(st.cert_m1);
  certs["p2"] = certificate_to_json(st.cert_p2);
  payload["certificates"] = std::move(certs);
  if (out.format == "text") {
    std::cout << "p=" << p << " k=" << k;
    std::cout << "  m0=" << (st.m0 ? std::to_string(*st.m0) : "not found");
    std::cout << "  m1=" << (st.m1 ? std::to_string(*st.m1) : "not found");
    std::cout << "  p^2 annihilates: " << (st.p2_in ? "yes" : "no") << "\n";
  } else {
    out.emit(payload, cmdline, Json{{"p", p}, {"k", k}, {"vmax", vmax}, {"convention", conv}},
             started);
  }
  return (st.m0 && st.m1) ? kExitPass : kExitInconclusive;
}

int cmd_homology(long p, int k, long wmin, long wmax, const std::string& conv, Output& out,
                 const std::string& cmdline, const std::string& started) {
  ModuleContext ctx(p, 2, k, parse_convention(conv));
  Json rows = Json::array();
  for (long W = wmin; W <= wmax; ++W) {
    SliceInvariants inv = elementary_divisors(ctx, W);
    Json row{{"W", W}, {"dim", inv.dim}, {"free_rank", inv.free_rank},
             {"kernel_rank", inv.kernel_rank}};
    Json divs = Json::array();
    for (long s : inv.divisors) divs.push_back(s);
    row["divisor_valuations"] = std::move(divs);
    auto order = inv.torsion_order(p);
    row["torsion_order"] = order ? Json(order->get_str()) : Json("infinite");
    if (out.format == "text") {
      std::cout << "W=" << W << "  coker =";
      if (inv.divisors.empty())
        std::cout << " 0";
      else
        for (long s : inv.divisors) std::cout << " Z/" << pow_z(p, s).get_str();
      if (inv.free_rank > 0) std::cout << " + free^" << inv.free_rank;
      std::cout << "  (ker rank " << inv.kernel_rank << ")\n";
    }
    rows.push_back(std::move(row));
  }
  if (out.format != "text")
    out.emit(Json{{"slices", std::move(rows)}}, cmdline,
             Json{{"p", p}, {"k", k}, {"wmin", wmin}, {"wmax", wmax}, {"convention", conv}},
             started);
  return kExitPass;
}

int cmd_families(long p, int k, Output& out, const std::string& cmdline,
                 const std::string& started) {
  Json cd = Json::array();
  for (int kk = 2; kk <= k; ++kk)
    for (long t = 0; t <= kk / 2 + 1; ++t)
      cd.push_back(Json{{"k", kk}, {"t", t}, {"c", cd_c(kk, t).get_str()},
                        {"d", cd_d(kk, t).get_str()}});
  Json pik_rows = Json::array();
  for (int i = 0; i <= std::min(k - 3, 8); ++i)
    for (long t = 0; t <= 3; ++t)
      pik_rows.push_back(Json{{"i", i}, {"k", k}, {"t", t}, {"value", pik(i, k, t).get_str()}});
  const FamilyTable& tab = family_table(p, Convention::Unsigned);
  Json w = Json::array(), q = Json::array();
  for (long i = 0; i <= tab.g(2); ++i) w.push_back(tab.w(i).str());
  for (long i = 0; i <= p - 2; ++i) q.push_back(tab.q0(i).str());
  Json payload{{"cd", std::move(cd)}, {"pik", std::move(pik_rows)},
               {"w_units", std::move(w)}, {"q0", std::move(q)}};
  if (out.format == "text") {
    std::cout << payload.dump(2) << "\n";
    return kExitPass;
  }
  out.emit(payload, cmdline, Json{{"p", p}, {"k", k}}, started);
  return kExitPass;
}

// An ann payload carries bare certificates; rebuild the elements they must
// expand to and re-validate without re-solving.
std::vector<ClaimInstance> replay_ann_payload(const Json& payload) {
  long p = payload.at("p").get<long>();
  int k = payload.at("k").get<int>();
  ModuleContext ctx(p, 2, k);
  ClaimInstance inst;
  inst.claim = "ann";
  inst.params = Json{{"p", p}, {"k", k}};
  inst.verdict = Verdict::Pass;
  const Json& certs = payload.at("certificates");
  auto check = [&](const char* key, const TensorElement& x) {
    if (!certs.contains(key)) return;
    bool ok = certificate_replay(certificate_from_json(certs.at(key)), x, ctx);
    if (!ok) {
      inst.verdict = Verdict::Fail;
      inst.payload["failures"].push_back(Json{{"what", std::string(key) + " replay failed"}});
    }
  };
  if (payload.at("m0").is_number())
    check("m0", TensorElement::monomial(LocalScalar(1), payload.at("m0").get<long>(), 1, 1));
  if (payload.at("m1").is_number())
    check("m1", TensorElement::monomial(LocalScalar(p), payload.at("m1").get<long>(), 1, 1));
  check("p2", TensorElement::monomial(LocalScalar(pow_z(p, 2)), 0, 1, 1));
  return {inst};
}

int cmd_verify(const std::string& claim, const VerifyOptions& vo, const std::string& replay_in,
               Output& out, const std::string& cmdline, const std::string& started) {
  std::vector<ClaimInstance> instances;
  if (claim == "replay") {
    if (replay_in.empty()) {
      std::cerr << "verify replay requires --in REPORT.json\n";
      return kExitUsage;
    }
    std::ifstream f(replay_in);
    if (!f) {
      std::cerr << "cannot open " << replay_in << "\n";
      return kExitUsage;
    }
    Json report = Json::parse(f);
    const Json& body = report.contains("payload") ? report.at("payload") : report;
    if (body.contains("certificates"))
      instances = replay_ann_payload(body);
    else
      instances = replay_report(body);
  } else {
    instances = run_claim(claim, vo);
  }
  int fails = 0, inconclusive = 0;
  for (const auto& inst : instances) {
    if (inst.verdict == Verdict::Fail) fails++;
    if (inst.verdict == Verdict::Inconclusive) inconclusive++;
    if (out.format == "text")
      std::cout << inst.claim << " " << inst.params.dump() << " -> "
                << verdict_name(inst.verdict) << "\n";
  }
  if (out.format == "text")
    std::cout << instances.size() << " instance(s), " << fails << " failure(s), "
              << inconclusive << " inconclusive\n";
  else
    out.emit(report_to_json(instances), cmdline, Json{{"claim", claim}}, started);
  if (fails > 0) return kExitFail;
  if (inconclusive > 0) return kExitInconclusive;
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  std::string started = iso_now();
  std::string cmdline;
  for (int i = 0; i < argc; ++i) {
    if (i) cmdline += ' ';
    cmdline += argv[i];
  }

  CLI::App app{"exact ku-homology calculator for cyclic p-groups"};
  app.require_subcommand(1);

  long p = 2;
  int n = 2, k = 2;
  long vmax = -1, wmin = 2, wmax = 8;
  std::string conv = "unsigned", in_file, grid = "default";
  Output out;
  VerifyOptions vo;
  std::vector<long> opt_ps, opt_as, opt_bs;
  std::vector<int> opt_ks, opt_ns;
  unsigned long seed = 1;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 0) jobs = 1;
  bool cp_all_a = false;
  std::string claim;

  auto add_common = [&](CLI::App* c, bool with_n, bool with_k) {
    c->add_option("--p", p, "prime");
    if (with_n) c->add_option("--n", n, "second-factor exponent");
    if (with_k) c->add_option("--k", k, "boundary index (uses the [p^{k+1}]-series)");
    c->add_option("--convention", conv, "series convention: unsigned|signed")
        ->check(CLI::IsMember({"unsigned", "signed"}));
    c->add_option("--format", out.format, "output format: json|text")
        ->check(CLI::IsMember({"json", "text"}));
    c->add_option("--out", out.out_path, "write JSON output to FILE");
  };

  auto* series = app.add_subcommand("series", "dump the [p^n]-series");
  add_common(series, true, false);

  auto* nf = app.add_subcommand("nf", "normal form of an element file");
  add_common(nf, true, true);
  nf->add_option("--in", in_file, "element JSON file")->required();

  auto* boundary = app.add_subcommand("boundary", "boundary image of an element file");
  add_common(boundary, true, true);
  boundary->add_option("--in", in_file, "element JSON file")->required();

  auto* ann = app.add_subcommand("ann", "annihilator staircase of the toral class");
  add_common(ann, false, true);
  ann->add_option("--vmax", vmax, "largest v-exponent searched");

  auto* homology = app.add_subcommand("homology", "per-weight cokernel slices");
  add_common(homology, false, true);
  homology->add_option("--wmin", wmin, "first weight");
  homology->add_option("--wmax", wmax, "last weight");

  auto* families = app.add_subcommand("families", "combinatorial family tables");
  auto* dump = families->add_subcommand("dump", "dump cd/pik/w/q tables");
  dump->add_option("--p", p, "prime");
  dump->add_option("--k", k, "table depth");
  dump->add_option("--format", out.format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  dump->add_option("--out", out.out_path, "write JSON output to FILE");

  auto* verify = app.add_subcommand("verify", "machine-check the computed identities");
  verify->add_option("claim", claim, "claim id or 'all' or 'replay'")->required();
  verify->add_option("--p", opt_ps, "primes");
  verify->add_option("--k", opt_ks, "boundary indices");
  verify->add_option("--n", opt_ns, "second-factor exponents / family index");
  verify->add_option("--a", opt_as, "first-factor indices");
  verify->add_option("--b", opt_bs, "second-factor indices");
  verify->add_option("--grid", grid, "grid preset: default|smoke")
      ->check(CLI::IsMember({"default", "smoke"}));
  verify->add_option("--seed", seed, "seed for randomized claims");
  verify->add_option("--jobs", jobs, "worker threads");
  verify->add_flag("--all-a", cp_all_a, "cp: check every a, not only g1-multiples");
  verify->add_option("--convention", conv, "series convention")
      ->check(CLI::IsMember({"unsigned", "signed"}));
  verify->add_option("--format", out.format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--out", out.out_path, "write JSON report to FILE");
  verify->add_option("--in", in_file, "report file for 'replay'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (series->parsed()) return cmd_series(p, n, conv, out, cmdline, started);
    if (nf->parsed()) return cmd_nf(p, n, std::max(k, n - 1), conv, in_file, out, cmdline, started);
    if (boundary->parsed()) return cmd_boundary(p, n, k, conv, in_file, out, cmdline, started);
    if (ann->parsed()) return cmd_ann(p, k, vmax, conv, out, cmdline, started);
    if (homology->parsed()) return cmd_homology(p, k, wmin, wmax, conv, out, cmdline, started);
    if (families->parsed()) {
      if (!dump->parsed()) {
        std::cerr << "families requires the 'dump' subcommand\n";
        return kExitUsage;
      }
      return cmd_families(p, k, out, cmdline, started);
    }
    if (verify->parsed()) {
      if (claim != "replay" && !is_claim_id(claim)) {
        std::cerr << "unknown claim id: " << claim << "\n";
        return kExitUsage;
      }
      vo.ps = opt_ps;
      vo.ks = opt_ks;
      vo.ns = opt_ns;
      vo.as = opt_as;
      vo.bs = opt_bs;
      vo.seed = seed;
      vo.jobs = jobs;
      vo.cp_all_a = cp_all_a;
      vo.convention = parse_convention(conv);
      if (grid == "smoke") {
        if (vo.ps.empty()) vo.ps = {2};
        if (vo.ks.empty()) vo.ks = {2};
      }
      return cmd_verify(claim, vo, in_file, out, cmdline, started);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
