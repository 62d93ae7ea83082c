#include "loxgrow/freebasis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "absl/container/flat_hash_set.h"
#include "loxgrow/errors.hpp"
#include "loxgrow/half_plane.hpp"

namespace loxgrow {

double default_eps_margin(const Space& space) {
  return space.kind() == BackendKind::kHalfPlane ? 1e-9 : 0.0;
}

namespace {

bool displacement_passes(const Space& space, double value,
                         double threshold_multiple) {
  if (space.delta() == 0.0) return value > 0.0;
  return value > threshold_multiple * space.delta();
}

bool is_loxodromic(const Space& space, const GroupElement& g) {
  const Classification c = space.classify(g);
  return c.type == IsometryType::kLoxodromic && !c.boundary;
}

// T together with its inverses: index 2i is T[i], index 2i + 1 its inverse.
std::vector<GroupElement> with_inverses(const Space& space,
                                        std::span<const GroupElement> T) {
  std::vector<GroupElement> out;
  out.reserve(2 * T.size());
  for (const GroupElement& t : T) {
    out.push_back(t);
    out.push_back(space.invert(t));
  }
  return out;
}

}  // namespace

EscalationResult escalate(const Space& space, const GeneratingSet& S,
                          double threshold_multiple, int max_rounds,
                          std::size_t candidate_budget,
                          std::size_t memory_cap) {
  if (max_rounds < 0) throw OutOfRange("max_rounds must be nonnegative");
  GeneratingSet current = S;
  for (int rounds = 0;; ++rounds) {
    DisplacementRecord d = min_displacement_search(space, current, candidate_budget);
    if (displacement_passes(space, d.value, threshold_multiple)) {
      return {std::move(current), rounds, std::move(d)};
    }
    if (rounds == max_rounds) {
      throw LikelyElementary("displacement stays at " + std::to_string(d.value) +
                             " after " + std::to_string(max_rounds) +
                             " escalation rounds");
    }
    current = product_ball_set(space, current, 2, memory_cap);
  }
}

ShortLoxodromic find_short_loxodromic(const Space& space, const GeneratingSet& S,
                                      std::size_t candidate_budget) {
  if (S.size() == 0) throw ConfigError("find_short_loxodromic needs a nonempty set");
  absl::flat_hash_set<std::string> seen;
  std::optional<GroupElement> best;
  double best_tau = 0.0;
  const double tol = space.exact() ? 0.0 : 1e-9;
  auto consider = [&](GroupElement g) {
    if (!seen.insert(space.key(g)).second) return;
    if (!is_loxodromic(space, g)) return;
    const double tau = space.translation_length(g).value_or(0.0);
    bool better = !best;
    if (!better) {
      if (tau > best_tau + tol) {
        better = true;
      } else if (tau >= best_tau - tol) {
        if (g.word.size() != best->word.size()) {
          better = g.word.size() < best->word.size();
        } else {
          better = space.canonical_less(g, *best);
        }
      }
    }
    if (better) {
      best_tau = tau;
      best = std::move(g);
    }
  };
  for (const GroupElement& s : S) consider(s);
  for (const GroupElement& s : S) {
    for (const GroupElement& t : S) consider(space.compose(s, t));
  }
  if (!best) {
    throw NoLoxodromicFound("no loxodromic element in S or S*S");
  }
  DisplacementRecord d = min_displacement_search(space, S, candidate_budget);
  return {std::move(*best), std::move(d.point), best_tau};
}

ElementaryTest in_elementary(const Space& space, const GroupElement& b,
                             const GroupElement& g, int n_test) {
  if (n_test < 1) throw OutOfRange("n_test must be positive");
  if (!space.exact()) {
    const auto& hp = dynamic_cast<const HalfPlane&>(space);
    const Point o = HalfPlane::axis_point(hp.as_real(b)).value_or(PlanePoint(0.0, 1.0));
    const double step = space.dist(o, space.apply(b, o));
    const double diameter = axis_overlap_diameter(space, b, g, o, 1.0, 8);
    return {diameter > kOverlapSuspicionFactor * step, true};
  }
  const GroupElement ginv = space.invert(g);
  GroupElement bn = space.identity();
  for (int n = 1; n <= n_test; ++n) {
    bn = space.compose(bn, b);
    const GroupElement c = space.compose(space.compose(g, bn), ginv);
    if (space.equal(c, bn) || space.equal(c, space.invert(bn))) return {true, false};
  }
  return {false, false};
}

GroupElement find_independent(const Space& space, const GeneratingSet& S,
                              const GroupElement& b, int n_test) {
  for (const GroupElement& s : S) {
    if (!in_elementary(space, b, s, n_test).member) return s;
  }
  throw AllElementary("every generator lies in E(" + space.describe(b) +
                      "): the subgroup is elementary");
}

GeometricCheck certify_free_geometric(const Space& space,
                                      std::span<const GroupElement> T,
                                      const Point& x, double delta,
                                      double eps_margin) {
  if (T.empty()) throw ConfigError("certify_free_geometric needs a nonempty T");
  const std::vector<GroupElement> letters = with_inverses(space, T);
  std::vector<Point> moved;    // a x
  std::vector<Point> back;     // a^-1 x
  for (std::size_t i = 0; i < letters.size(); ++i) {
    moved.push_back(space.apply(letters[i], x));
  }
  for (std::size_t i = 0; i < letters.size(); ++i) back.push_back(moved[i ^ 1]);

  GeometricCheck c;
  c.m = std::numeric_limits<double>::infinity();
  for (const Point& p : moved) c.m = std::min(c.m, space.dist(x, p));
  for (std::size_t a = 0; a < letters.size(); ++a) {
    for (std::size_t e = 0; e < letters.size(); ++e) {
      if (e == (a ^ 1)) continue;
      c.p_max = std::max(c.p_max, gromov_product(space, back[a], moved[e], x));
    }
  }
  c.margin = c.m / 8.0 - delta / 2.0 - c.p_max;
  c.valid = c.m > 0.0 && c.margin >= eps_margin;
  return c;
}

bool certify_free_exact(const Space& space, std::span<const GroupElement> T,
                        int L, std::size_t word_cap) {
  if (!space.exact()) {
    throw ExactWordProblemUnavailable("exact freeness check needs an exact backend");
  }
  if (L < 1) throw OutOfRange("certify_free_exact needs L >= 1");
  if (T.empty()) throw ConfigError("certify_free_exact needs a nonempty T");
  // A reduced relation of length <= L exists iff two distinct reduced words
  // of length <= L / 2 coincide, or for odd L a word of length L / 2 + 1
  // coincides with one of length <= L / 2.
  const int half = L / 2;
  const int last_len = (L + 1) / 2;
  const std::size_t letters_n = 2 * T.size();
  double total = 1.0, layer = static_cast<double>(letters_n);
  for (int l = 1; l <= last_len; ++l) {
    total += layer;
    layer *= static_cast<double>(letters_n - 1);
  }
  if (total > static_cast<double>(word_cap)) {
    throw BudgetExceeded("exact freeness check needs " + std::to_string(total) +
                         " words, cap is " + std::to_string(word_cap));
  }
  const std::vector<GroupElement> letters = with_inverses(space, T);
  absl::flat_hash_set<std::string> seen;
  seen.insert(space.key(space.identity()));
  struct Word {
    GroupElement g;
    std::size_t last;
  };
  std::vector<Word> frontier{{space.identity(), letters_n}};
  for (int l = 1; l <= last_len; ++l) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (std::size_t i = 0; i < letters_n; ++i) {
        if (w.last < letters_n && i == (w.last ^ 1)) continue;
        GroupElement g = space.compose(w.g, letters[i]);
        if (l > half) {
          if (seen.contains(space.key(g))) return false;
          continue;
        }
        if (!seen.insert(space.key(g)).second) return false;
        next.push_back({std::move(g), i});
      }
    }
    frontier = std::move(next);
  }
  return true;
}

namespace {

struct Amplified {
  bool usable = false;
  GroupElement h;
  std::vector<GroupElement> S0;
};

Amplified amplify(const Space& space, const GeneratingSet& S_eff,
                  const GroupElement& b, const GroupElement& f, int n,
                  int n_test) {
  Amplified a;
  try {
    a.h = space.compose(f, space.power(b, n));
    a.h.word = f.word;
    for (int i = 0; i < n; ++i) a.h.word += b.word;
    if (!is_loxodromic(space, a.h)) return a;
    for (const GroupElement& s : S_eff) {
      const GroupElement sinv = space.invert(s);
      bool fresh = true;
      for (const GroupElement& chosen : a.S0) {
        if (in_elementary(space, a.h, space.compose(sinv, chosen), n_test).member) {
          fresh = false;
          break;
        }
      }
      if (fresh) a.S0.push_back(s);
    }
    a.usable = a.S0.size() >= 2;
  } catch (const ArithmeticOverflow&) {
    a.usable = false;
  }
  return a;
}

std::vector<GroupElement> conjugates(const Space& space,
                                     const std::vector<GroupElement>& S0,
                                     const GroupElement& h, int k) {
  GroupElement hk = space.power(h, k);
  hk.word.clear();
  for (int i = 0; i < k; ++i) hk.word += h.word;
  std::vector<GroupElement> T;
  for (const GroupElement& s : S0) T.push_back(space.conjugate(s, hk));
  return T;
}

int constructive_kappa(int rounds, int n, int k) {
  const int unit = 1 << rounds;
  return 2 * unit + k * (unit + 2 * n * unit);
}

}  // namespace

FreeBasisCertificate build_free_basis(const Space& space,
                                      const GeneratingSet& S_eff,
                                      const GeneratingSet& S,
                                      const GroupElement& b,
                                      const GroupElement& f, int rounds,
                                      const SearchOptions& search) {
  if (search.max_n < 1 || search.max_k < 1) {
    throw OutOfRange("max_n and max_k must be positive");
  }
  const double eps = search.eps_margin < 0.0 ? default_eps_margin(space)
                                             : search.eps_margin;
  const double delta = space.delta();
  const std::vector<Point> candidates =
      space.basepoint_candidates(S_eff.span(), search.candidate_budget);

  std::vector<std::optional<Amplified>> cache(search.max_n + 1);
  auto amplified = [&](int n) -> const Amplified& {
    if (!cache[n]) cache[n] = amplify(space, S_eff, b, f, n, search.n_test);
    return *cache[n];
  };

  struct Pick {
    int n = 0, k = 0;
    std::vector<GroupElement> T;
    Point x;
    GeometricCheck check;
  };
  std::optional<Pick> pick;

  auto for_each_pair = [&](const std::function<bool(int, int)>& visit) {
    for (int total = 2; total <= search.max_n + search.max_k; ++total) {
      for (int n = 1; n <= search.max_n; ++n) {
        const int k = total - n;
        if (k < 1 || k > search.max_k) continue;
        if (visit(n, k)) return;
      }
    }
  };

  auto best_basepoint = [&](const std::vector<GroupElement>& T) {
    std::optional<std::pair<Point, GeometricCheck>> best;
    for (const Point& x : candidates) {
      GeometricCheck c = certify_free_geometric(space, T, x, delta, eps);
      if (!best || c.margin > best->second.margin) best.emplace(x, c);
    }
    return *best;
  };

  for_each_pair([&](int n, int k) {
    const Amplified& a = amplified(n);
    if (!a.usable) return false;
    try {
      std::vector<GroupElement> T = conjugates(space, a.S0, a.h, k);
      auto [x, check] = best_basepoint(T);
      if (!check.valid) return false;
      pick = Pick{n, k, std::move(T), std::move(x), check};
      return true;
    } catch (const ArithmeticOverflow&) {
      return false;
    }
  });

  if (!pick && space.exact()) {
    for_each_pair([&](int n, int k) {
      const Amplified& a = amplified(n);
      if (!a.usable) return false;
      try {
        std::vector<GroupElement> T = conjugates(space, a.S0, a.h, k);
        if (!certify_free_exact(space, T, search.exact_check_len,
                                search.exact_word_cap)) {
          return false;
        }
        auto [x, check] = best_basepoint(T);
        pick = Pick{n, k, std::move(T), std::move(x), check};
        return true;
      } catch (const BudgetExceeded&) {
        return false;
      }
    });
  }
  if (!pick) {
    throw SearchExhausted("no certified (n, k) with n <= " +
                          std::to_string(search.max_n) + ", k <= " +
                          std::to_string(search.max_k));
  }

  const Amplified& a = amplified(pick->n);
  FreeBasisCertificate cert;
  cert.x = pick->x;
  cert.delta = delta;
  cert.b = b;
  cert.f = f;
  cert.h = a.h;
  cert.n = pick->n;
  cert.k = pick->k;
  cert.S0 = a.S0;
  cert.T = std::move(pick->T);
  cert.r = static_cast<int>(cert.T.size());
  cert.m = pick->check.m;
  cert.p_max = pick->check.p_max;
  cert.margin = pick->check.margin;
  cert.eps_margin = eps;
  cert.geometric_valid = pick->check.valid;
  cert.exact_check_len = search.exact_check_len;
  if (space.exact()) {
    try {
      cert.exact_verified = certify_free_exact(space, cert.T, search.exact_check_len,
                                               search.exact_word_cap);
    } catch (const BudgetExceeded&) {
      cert.exact_verified.reset();
    }
  }
  cert.escalation_rounds = rounds;

  cert.kappa_exact = true;
  cert.kappa = 0;
  try {
    for (const GroupElement& t : cert.T) {
      const std::optional<int> len =
          word_length_in_S(space, S, t, search.kappa_cap, search.memory_cap);
      if (!len) {
        cert.kappa_exact = false;
        break;
      }
      cert.kappa = std::max(cert.kappa, *len);
    }
  } catch (const BudgetExceeded&) {
    cert.kappa_exact = false;
  }
  if (!cert.kappa_exact) cert.kappa = constructive_kappa(rounds, cert.n, cert.k);
  cert.omega_lower = omega_lower_bound(cert);

  cert.rank_floor = static_cast<double>(S.size()) / (2.0 * space.torsion_bound());
  cert.rank_floor_met = cert.r >= cert.rank_floor;
  return cert;
}

double omega_lower_bound(const FreeBasisCertificate& cert) {
  if (!cert.geometric_valid && !cert.exact_verified.value_or(false)) {
    throw InvalidCertificate("certificate is neither geometric nor exact valid");
  }
  if (cert.r < 2) return 0.0;
  if (cert.kappa < 1) throw InvalidCertificate("kappa must be positive");
  return std::log(2.0 * cert.r - 1.0) / cert.kappa;
}

FreeBasisCertificate free_basis_pipeline(const Space& space,
                                         const GeneratingSet& S,
                                         const PipelineOptions& options) {
  if (!options.skip_delta_check) {
    const double observed = estimate_delta(space, options.delta_sample, options.seed);
    if (observed > space.delta()) {
      throw ConfigError("empirical four-point defect " + std::to_string(observed) +
                        " exceeds the configured delta " +
                        std::to_string(space.delta()));
    }
  }
  const SearchOptions& search = options.search;
  GeneratingSet S_eff = S;
  int rounds = 0;
  if (options.threshold_multiple > 0.0) {
    EscalationResult e = escalate(space, S, options.threshold_multiple,
                                  options.max_rounds, search.candidate_budget,
                                  search.memory_cap);
    S_eff = std::move(e.S_eff);
    rounds = e.rounds;
  }
  std::optional<ShortLoxodromic> lox;
  while (!lox) {
    try {
      lox = find_short_loxodromic(space, S_eff, search.candidate_budget);
    } catch (const NoLoxodromicFound&) {
      if (rounds >= options.max_rounds) {
        throw LikelyElementary("no loxodromic element after " +
                               std::to_string(rounds) + " escalation rounds");
      }
      S_eff = product_ball_set(space, S_eff, 2, search.memory_cap);
      ++rounds;
    }
  }
  const GroupElement f = find_independent(space, S_eff, lox->b, search.n_test);
  return build_free_basis(space, S_eff, S, lox->b, f, rounds, search);
}

TheoremReport verify_theorem(const Space& space, const GeneratingSet& S,
                             int n_max, const PipelineOptions& options,
                             const GrowthOptions& growth) {
  TheoremReport report;
  report.log_card_S = std::log(static_cast<double>(S.size()));
  try {
    report.certificate = free_basis_pipeline(space, S, options);
  } catch (const ElementaryDetected& e) {
    report.elementary = true;
    report.diagnosis = e.what();
    return report;
  }
  report.omega_lower = report.certificate->omega_lower;

  GrowthOptions g = growth;
  g.n_max = n_max;
  report.table = ball_sizes(space, S, g);
  if (report.table.max_radius() >= 2) {
    const GrowthBrackets br = growth_brackets(report.table);
    report.omega_upper = br.omega_upper;
    report.omega_hat = br.omega_hat;
    if (S.size() >= 2) report.theta_hat = br.omega_hat / report.log_card_S;
    report.ordered = report.omega_lower <= report.omega_upper + 1e-9;
  }
  return report;
}

}  // namespace loxgrow
