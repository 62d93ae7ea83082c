#pragma once

// Certified lower bounds for the growth rate of a non-elementary subgroup:
// escalate the generating set until it contains a loxodromic element b, pick
// f outside E(b), amplify to h = f b^n, conjugate h^k by a set S0 of
// representatives of distinct E(h)-cosets and certify that the conjugates
// freely generate a free group T.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loxgrow/generating_set.hpp"
#include "loxgrow/growth.hpp"
#include "loxgrow/hypcore.hpp"
#include "loxgrow/space.hpp"

namespace loxgrow {

struct SearchOptions {
  int max_n = 64;
  int max_k = 8;
  int exact_check_len = 6;
  // Negative selects the default: 0 on tree backends, 1e-9 otherwise.
  double eps_margin = -1.0;
  int n_test = 6;
  std::size_t candidate_budget = 256;
  std::size_t exact_word_cap = 5'000'000;
  int kappa_cap = 64;
  std::size_t memory_cap = 2'000'000;
};

struct PipelineOptions {
  SearchOptions search;
  int max_rounds = 6;
  // Extra displacement requirement before the loxodromic search; 0 = none.
  double threshold_multiple = 0.0;
  bool skip_delta_check = false;
  std::uint64_t seed = 7;
  std::size_t delta_sample = 500;
};

double default_eps_margin(const Space& space);

struct EscalationResult {
  GeneratingSet S_eff;
  int rounds = 0;
  DisplacementRecord displacement;
};

// Replaces S by S^{<=2} until the minimal candidate displacement exceeds
// threshold_multiple * delta (any positive value on trees). Throws
// LikelyElementary after max_rounds unsuccessful rounds.
EscalationResult escalate(const Space& space, const GeneratingSet& S,
                          double threshold_multiple, int max_rounds,
                          std::size_t candidate_budget = 256,
                          std::size_t memory_cap = 2'000'000);

struct ShortLoxodromic {
  GroupElement b;
  Point o;
  double tau = 0.0;
};

// Searches S and S*S for the loxodromic element of largest translation
// length (ties: shorter word, then canonical order). Throws
// NoLoxodromicFound.
ShortLoxodromic find_short_loxodromic(const Space& space, const GeneratingSet& S,
                                      std::size_t candidate_budget = 256);

struct ElementaryTest {
  bool member = false;
  bool heuristic = false;  // float backend: axis overlap signal only
};

// g in E(b): some n in [1, n_test] with g b^n g^-1 = b^{+-n}.
ElementaryTest in_elementary(const Space& space, const GroupElement& b,
                             const GroupElement& g, int n_test = 6);

// First s in S with s not in E(b). Throws AllElementary.
GroupElement find_independent(const Space& space, const GeneratingSet& S,
                              const GroupElement& b, int n_test = 6);

struct GeometricCheck {
  bool valid = false;
  double m = 0.0;
  double p_max = 0.0;
  double margin = 0.0;
};

// m = min_{a in T+-} d(x, ax); p_max = max over a, c in T+-, c != a^-1, of
// <a^-1 x, c x>_x; valid iff m > 0 and p_max <= m/8 - delta/2 - eps_margin.
GeometricCheck certify_free_geometric(const Space& space,
                                      std::span<const GroupElement> T,
                                      const Point& x, double delta,
                                      double eps_margin);

// True iff no nonempty reduced T-word of length <= L is the identity.
// Throws ExactWordProblemUnavailable on the float backend and
// BudgetExceeded when the reduced words of length <= (L + 1) / 2 outnumber
// word_cap.
bool certify_free_exact(const Space& space, std::span<const GroupElement> T,
                        int L, std::size_t word_cap = 5'000'000);

struct FreeBasisCertificate {
  Point x;
  double delta = 0.0;
  GroupElement b, f, h;
  int n = 0;
  int k = 0;
  std::vector<GroupElement> S0;
  std::vector<GroupElement> T;
  int r = 0;
  double m = 0.0;
  double p_max = 0.0;
  double margin = 0.0;
  double eps_margin = 0.0;
  bool geometric_valid = false;
  int exact_check_len = 0;
  std::optional<bool> exact_verified;  // unset on the float backend
  int kappa = 0;
  bool kappa_exact = false;
  double omega_lower = 0.0;
  int escalation_rounds = 0;
  // Monitored, not asserted: r >= #S / (2 N0).
  double rank_floor = 0.0;
  bool rank_floor_met = false;
};

// Diagonal (n, k) search, smallest (n + k, n) first. Geometric certificates
// win over the whole grid; otherwise the first pair passing the exact check
// is returned, marked exact-only. Throws SearchExhausted.
FreeBasisCertificate build_free_basis(const Space& space,
                                      const GeneratingSet& S_eff,
                                      const GeneratingSet& S,
                                      const GroupElement& b,
                                      const GroupElement& f, int rounds,
                                      const SearchOptions& search);

// log(2r - 1) / kappa; 0 when r < 2. Throws InvalidCertificate when neither
// certificate kind holds.
double omega_lower_bound(const FreeBasisCertificate& cert);

// Whole pipeline from the user generating set to a certificate.
FreeBasisCertificate free_basis_pipeline(const Space& space,
                                         const GeneratingSet& S,
                                         const PipelineOptions& options);

struct TheoremReport {
  bool elementary = false;
  std::string diagnosis;
  std::optional<FreeBasisCertificate> certificate;
  GrowthTable table;
  double omega_lower = 0.0;
  double omega_hat = std::numeric_limits<double>::quiet_NaN();
  double omega_upper = std::numeric_limits<double>::quiet_NaN();
  double log_card_S = 0.0;
  double theta_hat = std::numeric_limits<double>::quiet_NaN();
  bool ordered = true;  // omega_lower <= omega_upper + 1e-9
};

// Runs the pipeline and ball_sizes to n_max. Elementary subgroups are
// reported through the elementary flag; other errors propagate.
TheoremReport verify_theorem(const Space& space, const GeneratingSet& S,
                             int n_max, const PipelineOptions& options,
                             const GrowthOptions& growth);

}  // namespace loxgrow
