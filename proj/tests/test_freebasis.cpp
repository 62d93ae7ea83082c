#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "helpers.hpp"
#include "loxgrow/errors.hpp"
#include "loxgrow/freebasis.hpp"

namespace loxgrow {
namespace {

using testing::el;
using testing::gens;

std::vector<GroupElement> elems(const Space& s, std::vector<std::string> words) {
  std::vector<GroupElement> out;
  for (const auto& w : words) out.push_back(s.evaluate(w));
  return out;
}

TEST(EpsMargin, DefaultsPerBackend) {
  EXPECT_EQ(default_eps_margin(*testing::free_group()), 0.0);
  EXPECT_EQ(default_eps_margin(*testing::psl_tree()), 0.0);
  EXPECT_EQ(default_eps_margin(*testing::plane({kPslS})), 1e-9);
}

TEST(Escalate, Examples) {
  auto f = testing::free_group();
  EXPECT_EQ(escalate(*f, gens(*f, {"a", "b"}), 0.0, 6).rounds, 0);

  auto h = testing::plane({kPslS, kPslST, testing::kPslSTSquared});
  const EscalationResult e = escalate(*h, gens(*h, {"a", "b", "c"}), 1.0, 6);
  EXPECT_GE(e.rounds, 1);
  EXPECT_GT(e.displacement.value, 1.0);

  auto parabolic = testing::plane({IntMatrix{1, 1, 0, 1}});
  EXPECT_THROW(escalate(*parabolic, gens(*parabolic, {"a"}), 28.0, 6), LikelyElementary);
}

TEST(FindShortLoxodromic, Examples) {
  auto f = testing::free_group();
  const ShortLoxodromic fl = find_short_loxodromic(*f, gens(*f, {"a", "b"}));
  EXPECT_EQ(fl.tau, 2.0);
  EXPECT_EQ(std::get<std::string>(fl.b.canonical), "aa");

  auto p = testing::psl_tree();
  const ShortLoxodromic pl = find_short_loxodromic(*p, gens(*p, {"a", "b", "bb"}));
  EXPECT_EQ(pl.tau, 2.0);
  EXPECT_EQ(std::get<std::string>(pl.b.canonical).size(), 2u);

  auto h = testing::plane({kPslS, kPslST, testing::kPslSTSquared});
  const GeneratingSet S = gens(*h, {"a", "b", "c"});
  EXPECT_THROW(find_short_loxodromic(*h, S), NoLoxodromicFound);
  const ShortLoxodromic hl = find_short_loxodromic(*h, product_ball_set(*h, S, 2));
  const IntMatrix m = std::get<IntMatrix>(hl.b.canonical);
  EXPECT_EQ(std::abs(m.a + m.d), 3);
}

TEST(InElementary, Examples) {
  auto f = testing::free_group();
  const GroupElement x = el(*f, "a");
  EXPECT_TRUE(in_elementary(*f, x, el(*f, "A")).member);
  EXPECT_TRUE(in_elementary(*f, x, el(*f, "aaa")).member);
  EXPECT_FALSE(in_elementary(*f, x, el(*f, "b")).member);
  EXPECT_FALSE(in_elementary(*f, x, el(*f, "b")).heuristic);

  auto p = testing::psl_tree();
  EXPECT_FALSE(in_elementary(*p, el(*p, "ab"), el(*p, "a")).member);
  EXPECT_TRUE(in_elementary(*p, el(*p, "ab"), el(*p, "abab")).member);
}

TEST(InElementary, FloatBackendIsFlaggedHeuristic) {
  auto h = testing::float_plane(
      {RealMatrix::from(testing::kSanovA), RealMatrix::from(testing::kSanovB)});
  const GroupElement b = el(*h, "ab");
  const ElementaryTest same = in_elementary(*h, b, el(*h, "abab"));
  EXPECT_TRUE(same.heuristic);
  EXPECT_TRUE(same.member);
  EXPECT_FALSE(in_elementary(*h, b, el(*h, "a")).member);
}

TEST(FindIndependent, Examples) {
  auto f = testing::free_group();
  EXPECT_EQ(find_independent(*f, gens(*f, {"a", "b"}), el(*f, "aa")).word, "b");
  auto f1 = testing::free_group(1);
  EXPECT_THROW(find_independent(*f1, gens(*f1, {"a"}), el(*f1, "a")), AllElementary);
  auto p = testing::psl_tree();
  EXPECT_EQ(std::get<std::string>(
                find_independent(*p, gens(*p, {"a", "b", "bb"}), el(*p, "ab")).canonical),
            "a");
}

TEST(CertifyGeometric, Examples) {
  auto f = testing::free_group();
  const auto squares = elems(*f, {"aa", "bb"});
  const GeometricCheck sq = certify_free_geometric(*f, squares, f->origin(), 0.0, 0.0);
  EXPECT_TRUE(sq.valid);
  EXPECT_EQ(sq.m, 2.0);
  EXPECT_EQ(sq.p_max, 0.0);
  EXPECT_EQ(sq.margin, 0.25);

  // <(ba)^-1, a^-1>_1 = 1 for the pair (ba, a^-1), so the pairwise test fails.
  const GeometricCheck skew = certify_free_geometric(*f, elems(*f, {"a", "ba"}), f->origin(), 0.0, 0.0);
  EXPECT_FALSE(skew.valid);
  EXPECT_EQ(skew.m, 1.0);
  EXPECT_EQ(skew.p_max, 1.0);

  auto h = testing::plane({testing::kSanovA, testing::kSanovB});
  const std::vector<GroupElement> powers{h->power(el(*h, "a"), 8), h->power(el(*h, "b"), 8)};
  // Parabolic powers: the pair (A^8, A^8) alone has product
  // 2 asinh(8) - asinh(16) at i, far above m/8 - 1/2.
  const GeometricCheck hp = certify_free_geometric(*h, powers, PlanePoint(0, 1), 1.0, 1e-9);
  EXPECT_NEAR(hp.m, 2 * std::asinh(8.0), 1e-9);
  EXPECT_GE(hp.p_max, 2 * std::asinh(8.0) - std::asinh(16.0) - 1e-9);
  EXPECT_FALSE(hp.valid);
  EXPECT_TRUE(certify_free_exact(*h, powers, 5));
}

TEST(CertifyExact, Examples) {
  auto f = testing::free_group();
  EXPECT_TRUE(certify_free_exact(*f, elems(*f, {"aa", "bb"}), 6));
  EXPECT_FALSE(certify_free_exact(*f, elems(*f, {"a", "aa"}), 3));
  EXPECT_TRUE(certify_free_exact(*f, elems(*f, {"a", "aa"}), 2));
  auto h = testing::plane({testing::kSanovA, testing::kSanovB});
  EXPECT_TRUE(certify_free_exact(*h, elems(*h, {"a", "b"}), 5));
  EXPECT_THROW(certify_free_exact(*f, elems(*f, {"a", "b"}), 12, 1000), BudgetExceeded);
  auto fl = testing::float_plane({RealMatrix::from(testing::kSanovA)});
  EXPECT_THROW(certify_free_exact(*fl, elems(*fl, {"a"}), 2), ExactWordProblemUnavailable);
}

// Naive oracle: walk every nonempty reduced T-word up to length L.
bool naive_free_up_to(const Space& s, const std::vector<GroupElement>& T, int L) {
  std::vector<GroupElement> letters;
  for (const GroupElement& t : T) {
    letters.push_back(t);
    letters.push_back(s.invert(t));
  }
  std::function<bool(const GroupElement&, std::size_t, int)> walk =
      [&](const GroupElement& w, std::size_t last, int len) {
        if (len == L) return true;
        for (std::size_t i = 0; i < letters.size(); ++i) {
          if (len > 0 && i == (last ^ 1)) continue;
          const GroupElement next = s.compose(w, letters[i]);
          if (s.is_identity(next) || !walk(next, i, len + 1)) return false;
        }
        return true;
      };
  return walk(s.identity(), 0, 0);
}

TEST(CertifyExact, OddLengthRelation) {
  auto f = testing::free_group();
  EXPECT_FALSE(certify_free_exact(*f, elems(*f, {"a", "b", "ab"}), 3));
  EXPECT_TRUE(certify_free_exact(*f, elems(*f, {"a", "b", "ab"}), 2));
}

TEST(CertifyExact, MatchesNaiveEnumeration) {
  int agree_free = 0, agree_relation = 0;
  for (auto& space : testing::sample_spaces()) {
    const Space& s = *space;
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<GroupElement> T;
      const int r = 2 + static_cast<int>(rng() % 2);
      for (int i = 0; i < r; ++i) T.push_back(s.random_element(rng, 1 + static_cast<int>(rng() % 3)));
      const int L = 1 + static_cast<int>(rng() % 5);
      bool naive = false;
      try {
        naive = naive_free_up_to(s, T, L);
      } catch (const ArithmeticOverflow&) {
        continue;
      }
      EXPECT_EQ(certify_free_exact(s, T, L), naive) << s.describe(T[0]) << " L=" << L;
      ++(naive ? agree_free : agree_relation);
    }
  }
  EXPECT_GT(agree_free, 10);
  EXPECT_GT(agree_relation, 10);
}

// The central cross-oracle: a valid geometric certificate implies freeness up
// to every tested length, and reduced words move the basepoint linearly.
TEST(CertifyGeometric, SoundAgainstExactChecker) {
  struct Case { std::unique_ptr<Space> space; std::vector<std::string> letters; };
  std::vector<Case> cases;
  cases.push_back({testing::free_group(2), {"a", "b"}});
  cases.push_back({testing::psl_tree(), {"a", "b"}});
  cases.push_back({testing::plane({testing::kSanovA, testing::kSanovB}), {"a", "b"}});
  int valid_seen = 0;
  for (const Case& c : cases) {
    const Space& s = *c.space;
    std::mt19937_64 rng(41);
    const std::vector<GroupElement> seed_gens = elems(s, c.letters);
    for (int trial = 0; trial < 600; ++trial) {
      std::vector<GroupElement> T;
      const int r = 2 + static_cast<int>(rng() % 2);
      for (int i = 0; i < r; ++i) T.push_back(s.random_element(rng, 4 + static_cast<int>(rng() % 6)));
      if (std::any_of(T.begin(), T.end(), [&](const GroupElement& t) { return s.is_identity(t); })) continue;
      for (const Point& x : s.basepoint_candidates(seed_gens, 8)) {
        const GeometricCheck g = certify_free_geometric(s, T, x, s.delta(), default_eps_margin(s));
        if (!g.valid) continue;
        ++valid_seen;
        EXPECT_TRUE(certify_free_exact(s, T, 4));
        for (int w = 0; w < 20; ++w) {
          const int len = 1 + static_cast<int>(rng() % 8);
          GroupElement W = s.identity();
          int last = -1;
          for (int i = 0; i < len; ++i) {
            int letter;
            do letter = static_cast<int>(rng() % (2 * T.size()));
            while (last >= 0 && (letter ^ 1) == last);
            last = letter;
            const GroupElement& t = T[letter / 2];
            W = s.compose(W, letter % 2 ? s.invert(t) : t);
          }
          EXPECT_GE(s.dist(x, s.apply(W, x)), len * g.m / 2 - 1e-9);
        }
      }
    }
  }
  EXPECT_GT(valid_seen, 20);
}

TEST(OmegaLowerBound, Formula) {
  FreeBasisCertificate c;
  c.r = 2;
  c.kappa = 10;
  c.geometric_valid = true;
  EXPECT_NEAR(omega_lower_bound(c), std::log(3.0) / 10, 1e-15);
  c.r = 1;
  EXPECT_EQ(omega_lower_bound(c), 0.0);
  c.r = 2;
  c.geometric_valid = false;
  EXPECT_THROW(omega_lower_bound(c), InvalidCertificate);
  c.exact_verified = true;
  EXPECT_NEAR(omega_lower_bound(c), std::log(3.0) / 10, 1e-15);
}

void expect_consistent(const Space& s, const GeneratingSet& S, const FreeBasisCertificate& c) {
  EXPECT_GE(c.r, 2);
  EXPECT_EQ(c.T.size(), static_cast<std::size_t>(c.r));
  EXPECT_EQ(c.S0.size(), c.T.size());
  EXPECT_TRUE(s.equal(c.h, s.compose(c.f, s.power(c.b, c.n))));
  const GroupElement hk = s.power(c.h, c.k);
  for (std::size_t i = 0; i < c.T.size(); ++i) {
    EXPECT_TRUE(s.equal(c.T[i], s.conjugate(c.S0[i], hk)));
    EXPECT_TRUE(s.equal(s.evaluate(c.T[i].word), c.T[i]));
  }
  EXPECT_TRUE(c.geometric_valid || c.exact_verified.value_or(false));
  if (c.geometric_valid) EXPECT_GE(c.margin, c.eps_margin);
  if (c.kappa_exact) {
    int longest = 0;
    for (const GroupElement& t : c.T) longest = std::max(longest, *word_length_in_S(s, S, t, 64));
    EXPECT_EQ(longest, c.kappa);
  }
  EXPECT_NEAR(c.omega_lower, std::log(2.0 * c.r - 1) / c.kappa, 1e-15);
}

TEST(Pipeline, FreeGroup) {
  auto f = testing::free_group();
  const GeneratingSet S = gens(*f, {"a", "b"});
  const FreeBasisCertificate c = free_basis_pipeline(*f, S, PipelineOptions{});
  expect_consistent(*f, S, c);
  EXPECT_EQ(c.r, 4);
  EXPECT_LE(c.k, 4);
  EXPECT_EQ(c.escalation_rounds, 0);
  EXPECT_GT(c.omega_lower, 0.0);
  EXPECT_LE(c.omega_lower, std::log(3.0));
  EXPECT_TRUE(c.kappa_exact);
  EXPECT_TRUE(c.rank_floor_met);
}

TEST(Pipeline, PslTree) {
  auto p = testing::psl_tree();
  const GeneratingSet S = gens(*p, {"a", "b", "bb"});
  const FreeBasisCertificate c = free_basis_pipeline(*p, S, PipelineOptions{});
  expect_consistent(*p, S, c);
  EXPECT_GE(c.r, 2);
  EXPECT_GT(c.omega_lower, 0.0);
}

TEST(Pipeline, PslHalfPlaneNeedsEscalation) {
  auto h = testing::plane({kPslS, kPslST, testing::kPslSTSquared});
  const GeneratingSet S = gens(*h, {"a", "b", "c"});
  const FreeBasisCertificate c = free_basis_pipeline(*h, S, PipelineOptions{});
  expect_consistent(*h, S, c);
  EXPECT_GE(c.escalation_rounds, 1);
}

TEST(Pipeline, ElementaryInputs) {
  auto f1 = testing::free_group(1);
  EXPECT_THROW(free_basis_pipeline(*f1, gens(*f1, {"a"}), PipelineOptions{}), ElementaryDetected);
  auto parabolic = testing::plane({IntMatrix{1, 1, 0, 1}});
  EXPECT_THROW(free_basis_pipeline(*parabolic, gens(*parabolic, {"a"}), PipelineOptions{}),
               LikelyElementary);
  auto f = testing::free_group();
  EXPECT_THROW(free_basis_pipeline(*f, gens(*f, {"ab", "abab"}), PipelineOptions{}),
               ElementaryDetected);
}

TEST(Pipeline, DeterministicAndOrderedAcrossRandomSets) {
  auto f = testing::free_group();
  std::mt19937_64 rng(43);
  int certified = 0;
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<std::string> words;
    for (int i = 0; i < 2; ++i) words.push_back(f->random_element(rng, 3).word);
    GeneratingSet S;
    try {
      S = gens(*f, words);
    } catch (const EmptyAfterReduction&) {
      continue;
    }
    try {
      const TheoremReport r = verify_theorem(*f, S, 8, PipelineOptions{}, GrowthOptions{});
      if (r.elementary) continue;
      ++certified;
      EXPECT_TRUE(r.ordered);
      EXPECT_LE(r.omega_lower, r.omega_upper + 1e-9);
      expect_consistent(*f, S, *r.certificate);
      const FreeBasisCertificate again = free_basis_pipeline(*f, S, PipelineOptions{});
      EXPECT_EQ(again.kappa, r.certificate->kappa);
      EXPECT_EQ(again.T.size(), r.certificate->T.size());
    } catch (const SearchExhausted&) {
    }
  }
  EXPECT_GT(certified, 3);
}

TEST(VerifyTheorem, Examples) {
  auto f = testing::free_group();
  GrowthOptions g;
  g.n_max = 13;
  g.memory_cap = 4'000'000;
  const TheoremReport r = verify_theorem(*f, gens(*f, {"a", "b"}), 13, PipelineOptions{}, g);
  EXPECT_FALSE(r.elementary);
  EXPECT_GT(r.omega_lower, 0.0);
  EXPECT_LE(r.omega_upper - std::log(3.0), 0.06);
  EXPECT_TRUE(r.ordered);
  EXPECT_NEAR(r.log_card_S, std::log(4.0), 1e-15);

  auto p = testing::psl_tree();
  const TheoremReport pr = verify_theorem(*p, gens(*p, {"a", "b", "bb"}), 12, PipelineOptions{}, {});
  EXPECT_GT(pr.omega_lower, 0.0);
  EXPECT_GT(pr.omega_hat, 0.0);
  EXPECT_GT(pr.omega_upper, 0.0);
  EXPECT_TRUE(pr.ordered);

  auto f1 = testing::free_group(1);
  const TheoremReport er = verify_theorem(*f1, gens(*f1, {"a"}), 6, PipelineOptions{}, {});
  EXPECT_TRUE(er.elementary);
  EXPECT_FALSE(er.certificate.has_value());
  EXPECT_FALSE(er.diagnosis.empty());
}

}  // namespace
}  // namespace loxgrow
