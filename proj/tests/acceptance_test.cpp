// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "loxgrow/errors.hpp"
#include "loxgrow/free_group_tree.hpp"
#include "loxgrow/free_product_tree.hpp"
#include "loxgrow/freebasis.hpp"
#include "loxgrow/growth.hpp"
#include "loxgrow/half_plane.hpp"
#include "loxgrow/hypcore.hpp"
#include "loxgrow/psl2z.hpp"

namespace {

using namespace loxgrow;
using Clock = std::chrono::steady_clock;

const IntMatrix kSanovA{1, 2, 0, 1};
const IntMatrix kSanovB{1, 0, 2, 1};
const IntMatrix kSTSquared{-1, -1, 1, 0};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t free_ball(int n) {
  std::uint64_t p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return 2 * p - 1;
}

GeneratingSet from_words(const Space& s, std::vector<std::string> words) {
  return make_generating_set(s, std::span<const std::string>(words), true);
}

struct Result {
  bool pass = false;
  std::string detail;
};

struct Shared {
  GrowthTable f2_table;
  double f2_seconds = 0;
};

Result ac1(Shared& sh) {
  auto f = make_space(BackendConfig::free_group(2));
  const GeneratingSet S = from_words(*f, {"a", "b"});
  GrowthOptions o;
  o.n_max = 13;
  const auto t0 = Clock::now();
  sh.f2_table = ball_sizes(*f, S, o);
  sh.f2_seconds = seconds_since(t0);
  const GrowthTable& t = sh.f2_table;
  bool ok = !t.budget_exceeded && t.max_radius() == 13 && t.peak_stored <= o.memory_cap;
  for (int n = 0; ok && n <= 13; ++n) ok = t.ball[n] == free_ball(n);
  ok = ok && sh.f2_seconds <= 60.0;
  std::ostringstream d;
  d << "a_13=" << (t.max_radius() >= 13 ? t.ball[13] : 0) << " time=" << sh.f2_seconds
    << "s peak_stored=" << t.peak_stored << " cap=" << o.memory_cap;
  return {ok, d.str()};
}

Result ac2(Shared& sh) {
  const GrowthTable& t = sh.f2_table;
  if (t.max_radius() < 13) return {false, "no complete radius-13 table"};
  const double gap = t.upper[13] - std::log(3.0);
  bool mono = true;
  for (int n = 2; n <= 13; ++n) mono = mono && t.upper[n] <= t.upper[n - 1];
  std::ostringstream d;
  d << "omega_upper-log3=" << gap << " bound=" << std::log(2.0) / 13 << " nonincreasing=" << mono;
  return {gap <= std::log(2.0) / 13 && gap >= 0 && mono, d.str()};
}

Result ac3() {
  const std::vector<IntMatrix> m{kSanovA, kSanovB};
  auto h = make_space(BackendConfig::half_plane(Arithmetic::kExactInteger),
                      std::span<const IntMatrix>(m));
  GrowthOptions o;
  o.n_max = 10;
  const auto t0 = Clock::now();
  const GrowthTable t = ball_sizes(*h, from_words(*h, {"a", "b"}), o);
  const double secs = seconds_since(t0);
  bool ok = !t.budget_exceeded && t.max_radius() == 10 && secs <= 60.0;
  for (int n = 0; ok && n <= 10; ++n) ok = t.ball[n] == free_ball(n);
  std::ostringstream d;
  d << "a_10=" << (t.max_radius() >= 10 ? t.ball[10] : 0) << " time=" << secs << "s";
  return {ok, d.str()};
}

Result ac4(Shared& sh) {
  auto f = make_space(BackendConfig::free_group(2));
  const GeneratingSet S = from_words(*f, {"a", "b"});
  PipelineOptions opts;
  GrowthOptions g;
  g.n_max = 13;
  const TheoremReport r = verify_theorem(*f, S, 13, opts, g);
  if (!r.certificate) return {false, "no certificate: " + r.diagnosis};
  const FreeBasisCertificate& c = *r.certificate;
  const bool exact6 = certify_free_exact(*f, c.T, 6);
  bool deterministic = true;
  for (int workers : {1, 2, 4}) {
    GrowthOptions gw = g;
    gw.workers = workers;
    gw.n_max = 10;
    const TheoremReport again = verify_theorem(*f, S, 10, opts, gw);
    deterministic = deterministic && again.certificate &&
                    again.certificate->kappa == c.kappa && again.certificate->r == c.r &&
                    again.certificate->n == c.n && again.certificate->k == c.k &&
                    again.omega_lower == r.omega_lower &&
                    again.table.ball == std::vector<std::uint64_t>(
                                            sh.f2_table.ball.begin(),
                                            sh.f2_table.ball.begin() +
                                                std::min<std::size_t>(11, sh.f2_table.ball.size()));
  }
  const bool ok = c.r >= 2 && exact6 && r.omega_lower > 0 && r.omega_lower <= std::log(3.0) &&
                  r.omega_lower <= r.omega_upper && deterministic;
  std::ostringstream d;
  d << "r=" << c.r << " n=" << c.n << " k=" << c.k << " kappa=" << c.kappa
    << " exact(L=6)=" << exact6 << " omega_lower=" << r.omega_lower
    << " omega_upper=" << r.omega_upper << " deterministic=" << deterministic;
  return {ok, d.str()};
}

Result ac5() {
  std::vector<std::unique_ptr<Space>> spaces;
  spaces.push_back(make_space(BackendConfig::free_group(2)));
  spaces.push_back(make_space(BackendConfig::free_product(2, 3)));
  const std::vector<IntMatrix> m{kSanovA, kSanovB};
  spaces.push_back(make_space(BackendConfig::half_plane(Arithmetic::kExactInteger),
                              std::span<const IntMatrix>(m)));
  int sets = 0, valid = 0, violations = 0, words = 0, word_violations = 0;
  std::string first_violation;
  std::mt19937_64 rng(2024);
  for (const auto& sp : spaces) {
    const Space& s = *sp;
    const std::vector<GroupElement> seeds{s.evaluate("a"), s.evaluate("b")};
    const std::vector<Point> xs = s.basepoint_candidates(seeds, 32);
    for (int trial = 0; trial < 600; ++trial) {
      std::vector<GroupElement> T;
      const int r = 2 + static_cast<int>(rng() % 2);
      // Powers of short random elements on trees; on the plane, words short
      // enough that length-6 products stay within 64-bit entries.
      const bool plane = s.kind() == BackendKind::kHalfPlane;
      for (int i = 0; i < r; ++i) {
        const int len = plane ? 3 + static_cast<int>(rng() % 3) : 2 + static_cast<int>(rng() % 4);
        const int power = plane ? 1 : 1 + static_cast<int>(rng() % 4);
        T.push_back(s.power(s.random_element(rng, len), power));
      }
      bool degenerate = false;
      for (const GroupElement& t : T) degenerate = degenerate || s.is_identity(t);
      if (degenerate) continue;
      ++sets;
      for (const Point& x : xs) {
        const GeometricCheck g = certify_free_geometric(s, T, x, s.delta(), default_eps_margin(s));
        if (!g.valid) continue;
        ++valid;
        if (!certify_free_exact(s, T, 6, 50'000'000)) ++violations;
        for (int w = 0; w < 10; ++w) {
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
          ++words;
          if (s.dist(x, s.apply(W, x)) < len * g.m / 2 - 1e-9) {
            ++word_violations;
            if (first_violation.empty()) {
              std::ostringstream v;
              v << " [" << to_string(s.kind()) << " x=" << s.describe(x) << " T=";
              for (const GroupElement& t : T) v << s.describe(t) << ",";
              v << " W=" << s.describe(W) << " |W|=" << len << " m=" << g.m
                << " p_max=" << g.p_max << " d=" << s.dist(x, s.apply(W, x)) << "]";
              first_violation = v.str();
            }
          }
        }
        break;
      }
    }
  }
  std::ostringstream d;
  d << "T-sets=" << sets << " geometric-valid=" << valid << " exact violations=" << violations
    << " reduced words=" << words << " displacement violations=" << word_violations
    << first_violation;
  return {sets >= 200 && valid >= 50 && violations == 0 && words >= 200 && word_violations == 0,
          d.str()};
}

Result ac6() {
  const std::vector<IntMatrix> m{kPslS, kPslST};
  auto h = make_space(BackendConfig::half_plane(Arithmetic::kExactInteger),
                      std::span<const IntMatrix>(m));
  auto p = make_space(BackendConfig::free_product(2, 3));
  const GroupElement th = h->evaluate("ab");
  const GroupElement tp = p->evaluate("ab");
  const IntMatrix mt = std::get<IntMatrix>(th.canonical);
  const Classification ch = h->classify(th);
  const Classification cp = p->classify(tp);
  const double tau = *p->translation_length(tp);
  const bool ok = std::llabs(mt.a + mt.d) == 2 && ch.type == IsometryType::kParabolic &&
                  cp.type == IsometryType::kLoxodromic && tau == 2.0 &&
                  mt == kPslT;
  std::ostringstream d;
  d << "half_plane: " << h->describe(th) << " " << to_string(ch.type)
    << "; free_product_tree: " << to_string(cp.type) << " tau=" << tau;
  return {ok, d.str()};
}

Result ac7() {
  const std::vector<IntMatrix> m{kPslS, kPslST, kSTSquared};
  auto h = make_space(BackendConfig::half_plane(Arithmetic::kExactInteger),
                      std::span<const IntMatrix>(m));
  const GeneratingSet S = from_words(*h, {"a", "b", "c"});
  // Brute force: traces of every product of at most four generators.
  std::vector<IntMatrix> layer{IntMatrix::identity()};
  std::int64_t max_tr2 = 0, min_tr_above_2 = -1;
  for (int len = 1; len <= 4; ++len) {
    std::vector<IntMatrix> next;
    for (const IntMatrix& x : layer) {
      for (const GroupElement& s : S) {
        const IntMatrix y = multiply(x, std::get<IntMatrix>(s.canonical));
        next.push_back(y);
        const std::int64_t tr = std::llabs(y.a + y.d);
        if (len <= 2) max_tr2 = std::max(max_tr2, tr);
        if (tr > 2 && (min_tr_above_2 < 0 || tr < min_tr_above_2)) min_tr_above_2 = tr;
      }
    }
    layer = std::move(next);
  }
  bool round0_fails = false;
  try {
    find_short_loxodromic(*h, S);
  } catch (const NoLoxodromicFound&) {
    round0_fails = true;
  }
  int rounds = 0;
  std::int64_t found_tr = 0;
  GeneratingSet cur = S;
  while (rounds < 2 && found_tr == 0) {
    cur = product_ball_set(*h, cur, 2);
    ++rounds;
    try {
      const ShortLoxodromic b = find_short_loxodromic(*h, cur);
      const IntMatrix bm = std::get<IntMatrix>(b.b.canonical);
      found_tr = std::llabs(bm.a + bm.d);
    } catch (const NoLoxodromicFound&) {
    }
  }
  const FreeBasisCertificate c = free_basis_pipeline(*h, S, PipelineOptions{});
  const IntMatrix pb = std::get<IntMatrix>(c.b.canonical);
  const bool ok = max_tr2 <= 2 && round0_fails && found_tr == 3 && min_tr_above_2 == 3 &&
                  c.escalation_rounds >= 1 && c.escalation_rounds <= 2 &&
                  std::llabs(pb.a + pb.d) == 3;
  std::ostringstream d;
  d << "max|tr| on S.S=" << max_tr2 << " round0 fails=" << round0_fails
    << " rounds=" << rounds << " |tr(b)|=" << found_tr
    << " brute-force min |tr|>2 on S^<=4=" << min_tr_above_2
    << " pipeline rounds=" << c.escalation_rounds;
  return {ok, d.str()};
}

Result ac8() {
  const std::vector<RealMatrix> m{RealMatrix{2.0, 0.0, 0.0, 0.5}};
  auto h = make_space(BackendConfig::half_plane(Arithmetic::kFloat),
                      std::span<const RealMatrix>(m));
  const double d12 = h->dist(PlanePoint(0, 1), PlanePoint(0, 2));
  const GroupElement g = h->evaluate("a");
  const TranslationBracket on = translation_length_bracket(*h, g, PlanePoint(0, 1), 64);
  const TranslationBracket off = translation_length_bracket(*h, g, PlanePoint(1, 1), 64);
  const double l2 = std::log(2.0);
  const bool ok = std::abs(d12 - l2) <= 1e-12 && on.upper == 2 * l2 &&
                  std::abs(off.estimate - 2 * l2) <= 1e-6;
  std::ostringstream d;
  d.precision(17);
  d << "dist(i,2i)=" << d12 << " upper(i)=" << on.upper << " estimate(1+i)=" << off.estimate;
  return {ok, d.str()};
}

Result ac9() {
  std::vector<std::unique_ptr<Space>> spaces;
  spaces.push_back(make_space(BackendConfig::free_group(2)));
  spaces.push_back(make_space(BackendConfig::free_product(2, 3)));
  const std::vector<IntMatrix> m{kSanovA, kSanovB};
  spaces.push_back(make_space(BackendConfig::half_plane(Arithmetic::kExactInteger),
                              std::span<const IntMatrix>(m)));
  bool ok = true;
  std::ostringstream d;
  for (const auto& s : spaces) {
    std::mt19937_64 rng(99);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const Point p0 = s->random_point(rng), p1 = s->random_point(rng),
                  p2 = s->random_point(rng), p3 = s->random_point(rng);
      worst = std::max(worst, four_point_defect(*s, p0, p1, p2, p3));
    }
    ok = ok && worst <= s->delta();
    d << to_string(s->kind()) << " max defect=" << worst << " (delta " << s->delta() << "); ";
    if (s->kind() != BackendKind::kHalfPlane) {
      const double est = estimate_delta(*s, 500, 7);
      ok = ok && est == 0.0;
      d << "estimate=" << est << "; ";
    }
  }
  return {ok, d.str()};
}

Result ac10() {
  auto f = make_space(BackendConfig::free_group(2));
  const GeneratingSet S = from_words(*f, {"a", "b"});
  std::vector<double> theta;
  bool close = true;
  std::ostringstream d;
  for (int n = 1; n <= 4; ++n) {
    const GeneratingSet Tn = n == 1 ? S : product_ball_set(*f, S, n);
    GrowthOptions o;
    o.n_max = 13 / n;
    const GrowthTable t = ball_sizes(*f, Tn, o);
    if (t.budget_exceeded) return {false, "budget exceeded at n=" + std::to_string(n)};
    const double th = theta_ratio(t, Tn);
    const double closed = n * std::log(3.0) / std::log(2 * std::pow(3.0, n) - 2);
    close = close && std::abs(th - closed) <= 0.02;
    theta.push_back(th);
    d << "n=" << n << " theta=" << th << " closed=" << closed << "; ";
  }
  bool increasing = true;
  for (std::size_t i = 1; i < theta.size(); ++i) increasing = increasing && theta[i] > theta[i - 1];
  return {close && increasing, d.str()};
}

int cli_exit(const std::string& config) {
  const auto path = std::filesystem::temp_directory_path() / "loxgrow_acceptance.json";
  std::ofstream(path) << config;
  std::string a0 = "loxgrow", a1 = "verify-bound", a2 = "--config", a3 = path.string();
  char* argv[] = {a0.data(), a1.data(), a2.data(), a3.data()};
  std::ostringstream out, err;
  const int code = cli::run(4, argv, out, err);
  std::filesystem::remove(path);
  return code;
}

Result ac11() {
  const int rank1 = cli_exit(
      R"({"backend":{"kind":"free_group_tree","rank":1},"generators":["a"]})");
  const int parabolic = cli_exit(
      R"({"backend":{"kind":"half_plane"},"generators":[[[1,1],[0,1]]],"budgets":{"max_rounds":6}})");
  std::ostringstream d;
  d << "rank-1 exit=" << rank1 << " parabolic exit=" << parabolic;
  return {rank1 == 2 && parabolic == 2, d.str()};
}

}  // namespace

int main() {
  Shared shared;
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"AC1 exact F2 ball counts to n=13", [&] { return ac1(shared); }},
      {"AC2 certified upper bracket", [&] { return ac2(shared); }},
      {"AC3 Sanov pair matches F2 counts", ac3},
      {"AC4 F2 pipeline certificate", [&] { return ac4(shared); }},
      {"AC5 geometric vs exact soundness", ac5},
      {"AC6 cross-backend classification", ac6},
      {"AC7 escalation exercise", ac7},
      {"AC8 metric numerics", ac8},
      {"AC9 four-point invariants", ac9},
      {"AC10 theta ratio for S^n", ac10},
      {"AC11 failure exit codes", ac11},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
