#ifndef KUHOM_VERIFY_HPP
#define KUHOM_VERIFY_HPP

#include <kuhom/families.hpp>
#include <kuhom/json_io.hpp>
#include <kuhom/slice.hpp>

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace kuhom {

enum class Verdict { Pass, Fail, UnsupportedRange, Inconclusive };

const char* verdict_name(Verdict v);

// One checked instance of one claim: parameters, verdict, and a replayable
// payload (certificate or counterexample witness).
struct ClaimInstance {
  std::string claim;
  Json params;
  Verdict verdict = Verdict::Fail;
  Json payload;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::vector<long> ps;      // empty = claim default
  std::vector<int> ks;       // empty = claim default
  std::vector<int> ns;       // empty = claim default
  std::vector<long> as;      // empty = claim default
  std::vector<long> bs;      // empty = claim default
  Convention convention = Convention::Unsigned;
  unsigned long seed = 1;
  int jobs = 1;
  bool cp_all_a = false;     // cp claim: check every a, not only g1-multiples
};

std::vector<std::string> claim_ids();
bool is_claim_id(const std::string& id);

// Runs one claim (or "all") over its parameter grid; instances are computed
// through a worker pool and returned in deterministic order.
std::vector<ClaimInstance> run_claim(const std::string& id, const VerifyOptions& opts);

// Re-validates the certificates embedded in a report (as produced by
// report_to_json) without re-solving. Returns per-instance verdicts.
std::vector<ClaimInstance> replay_report(const Json& report);

Json report_to_json(const std::vector<ClaimInstance>& instances);

bool all_pass(const std::vector<ClaimInstance>& instances);

// Individual claim drivers (exposed for tests).
std::vector<ClaimInstance> verify_lemma_torsion(long p, int n, int k_max, long a_max,
                                                Convention conv);
std::vector<ClaimInstance> verify_teoosa(long p, int k, long a_max, long b_max, Convention conv);
std::vector<ClaimInstance> verify_ck(int k_max_even);
std::vector<ClaimInstance> verify_sdif(long p, int k, int nn, Convention conv);
std::vector<ClaimInstance> verify_nuevo(long p, int k, Convention conv);
std::vector<ClaimInstance> verify_nuevo2(long p, int k, Convention conv);
std::vector<ClaimInstance> verify_dife(long p, int k, Convention conv);
std::vector<ClaimInstance> verify_cp(long p, int k, const std::vector<long>& as, Convention conv);
std::vector<ClaimInstance> verify_part(long p, int nn, long a_max, Convention conv);
std::vector<ClaimInstance> verify_relcp(long p, int nn, long a_max, Convention conv);
std::vector<ClaimInstance> verify_diagonal(long p, int e, Convention conv);
std::vector<ClaimInstance> verify_ann(long p, int k, Convention conv);
std::vector<ClaimInstance> verify_nf_uniqueness(long p, int n, int k, int samples,
                                                unsigned long seed, Convention conv);

// Random weight-homogeneous element generator shared by property tests.
TensorElement random_homogeneous(const ModuleContext& ctx, long W, size_t terms,
                                 std::mt19937_64& rng);

}  // namespace kuhom

#endif
