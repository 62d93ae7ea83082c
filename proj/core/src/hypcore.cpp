#include "loxgrow/hypcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "loxgrow/errors.hpp"
#include "loxgrow/generating_set.hpp"

namespace loxgrow {

double gromov_product(const Space& space, const Point& x, const Point& y,
                      const Point& o) {
  const double v = 0.5 * (space.dist(x, o) + space.dist(y, o) - space.dist(x, y));
  return std::max(v, 0.0);
}

double four_point_defect(const Space& space, const Point& p0, const Point& p1,
                         const Point& p2, const Point& p3) {
  const std::array<const Point*, 4> pts{&p0, &p1, &p2, &p3};
  std::array<std::array<double, 4>, 4> d{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      d[i][j] = d[j][i] = space.dist(*pts[i], *pts[j]);
    }
  }
  auto gp = [&](int x, int y, int o) {
    return 0.5 * (d[x][o] + d[y][o] - d[x][y]);
  };
  double worst = 0.0;
  for (int o = 0; o < 4; ++o) {
    for (int z = 0; z < 4; ++z) {
      if (z == o) continue;
      std::array<int, 2> rest{};
      int n = 0;
      for (int i = 0; i < 4; ++i) {
        if (i != o && i != z) rest[n++] = i;
      }
      const auto [x, y] = rest;
      worst = std::max(worst, std::min(gp(x, z, o), gp(z, y, o)) - gp(x, y, o));
    }
  }
  return worst;
}

double estimate_delta(const Space& space, std::size_t sample_size,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < sample_size; ++s) {
    const Point a = space.random_point(rng);
    const Point b = space.random_point(rng);
    const Point c = space.random_point(rng);
    const Point e = space.random_point(rng);
    worst = std::max(worst, four_point_defect(space, a, b, c, e));
  }
  return worst;
}

double estimate_delta(const Space& space, std::span<const Point> pool,
                      std::size_t quadruples, std::uint64_t seed) {
  std::vector<Point> distinct;
  for (const Point& p : pool) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](const Point& q) { return space.same_point(p, q); });
    if (!seen) distinct.push_back(p);
  }
  if (distinct.size() < 4) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, distinct.size() - 1);
  double worst = 0.0;
  for (std::size_t s = 0; s < quadruples; ++s) {
    std::array<std::size_t, 4> idx{};
    for (int i = 0; i < 4; ++i) {
      bool clash = true;
      while (clash) {
        idx[i] = pick(rng);
        clash = std::find(idx.begin(), idx.begin() + i, idx[i]) != idx.begin() + i;
      }
    }
    worst = std::max(worst, four_point_defect(space, distinct[idx[0]], distinct[idx[1]],
                                              distinct[idx[2]], distinct[idx[3]]));
  }
  return worst;
}

bool loxodromic_criterion(const Space& space, const GroupElement& g,
                          const Point& o, double delta) {
  const Point go = space.apply(g, o);
  const Point ggo = space.apply(g, go);
  return space.dist(o, go) > 2.0 * gromov_product(space, o, ggo, go) + 6.0 * delta;
}

bool product_loxodromic_criterion(const Space& space, const GroupElement& g,
                                  const GroupElement& h, const Point& o,
                                  double delta) {
  const Point go = space.apply(g, o);
  const Point ho = space.apply(h, o);
  const Point ginv_o = space.apply(space.invert(g), o);
  const Point hinv_o = space.apply(space.invert(h), o);
  const double lhs = 0.25 * std::min(space.dist(go, o), space.dist(ho, o));
  const double rhs = std::max(gromov_product(space, go, hinv_o, o),
                              gromov_product(space, ginv_o, ho, o));
  return lhs > rhs + delta;
}

Chain Chain::from_points(const Space& space, std::vector<Point> points) {
  if (points.size() < 2) throw ConfigError("a chain needs at least 2 points");
  Chain c;
  c.points = std::move(points);
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    c.gaps.push_back(space.dist(c.points[i], c.points[i + 1]));
  }
  for (std::size_t i = 1; i + 1 < c.points.size(); ++i) {
    c.products.push_back(
        gromov_product(space, c.points[i - 1], c.points[i + 1], c.points[i]));
  }
  return c;
}

double Chain::gap_sum() const {
  double s = 0.0;
  for (double d : gaps) s += d;
  return s;
}

namespace {

// 1-based accessors: d(i) = d(x_i, x_{i+1}), p(i) = <x_{i-1}, x_{i+1}>_{x_i}.
struct ChainView {
  const Chain& c;
  double d(std::size_t i) const { return c.gaps[i - 1]; }
  double p(std::size_t i) const { return c.products[i - 2]; }
  std::size_t k() const { return c.points.size(); }
};

}  // namespace

double chain_lower_bound(const Chain& chain, double delta) {
  const ChainView v{chain};
  for (std::size_t i = 2; i + 2 <= v.k(); ++i) {
    const double used = v.p(i) + v.p(i + 1);
    if (used > v.d(i) - 3.0 * delta || used >= v.d(i)) {
      throw HypothesisFailed(static_cast<int>(i));
    }
  }
  double bound = chain.gap_sum();
  for (double p : chain.products) bound -= 2.0 * (p + delta);
  return bound;
}

bool chain_condition_holds(const Chain& chain, double delta) {
  const ChainView v{chain};
  if (v.k() < 3) throw ConfigError("chain_condition_holds needs k >= 3");
  for (double d : chain.gaps) {
    if (d <= 0.0) return false;
  }
  for (std::size_t i = 2; i + 2 <= v.k(); ++i) {
    if (v.p(i) + v.p(i + 1) > v.d(i) / 4.0 - delta) return false;
  }
  for (std::size_t i = 2; i + 1 <= v.k(); ++i) {
    if (v.p(i) > std::min(v.d(i - 1), v.d(i)) / 4.0 - delta) return false;
  }
  return true;
}

TranslationBracket translation_length_bracket(const Space& space,
                                              const GroupElement& g,
                                              const Point& o, int N) {
  if (N < 2) throw OutOfRange("translation_length_bracket needs N >= 2");
  TranslationBracket out{std::numeric_limits<double>::infinity(), 0.0};
  Point p = o;
  double at_n = 0.0;
  for (int m = 1; m <= 2 * N; ++m) {
    p = space.apply(g, p);
    if (m <= N) out.upper = std::min(out.upper, space.dist(o, p) / m);
    if (m == N) at_n = space.dist(o, p);
    if (m == 2 * N) out.estimate = (space.dist(o, p) - at_n) / N;
  }
  return out;
}

DisplacementRecord displacement(const Space& space,
                                std::span<const GroupElement> S,
                                const Point& x) {
  if (S.empty()) throw ConfigError("displacement needs a nonempty set");
  DisplacementRecord r{x, {}, 0.0};
  r.per_generator.reserve(S.size());
  for (const GroupElement& s : S) {
    const double d = space.dist(x, space.apply(s, x));
    r.per_generator.emplace_back(s, d);
    r.value = std::max(r.value, d);
  }
  return r;
}

DisplacementRecord displacement(const Space& space, const GeneratingSet& S,
                                const Point& x) {
  return displacement(space, S.span(), x);
}

DisplacementRecord min_displacement_search(const Space& space,
                                           const GeneratingSet& S,
                                           std::size_t budget) {
  if (budget < 1) throw OutOfRange("min_displacement_search needs budget >= 1");
  const std::vector<Point> candidates = space.basepoint_candidates(S.span(), budget);
  std::optional<DisplacementRecord> best;
  for (const Point& x : candidates) {
    DisplacementRecord r = displacement(space, S, x);
    if (!best || r.value < best->value) best = std::move(r);
  }
  if (!best) best = displacement(space, S, space.origin());
  return *best;
}

namespace {

std::vector<Point> sample_axis(const Space& space, const GroupElement& b,
                               const Point& o, int window) {
  const bool tree = space.kind() != BackendKind::kHalfPlane;
  const GroupElement binv = space.invert(b);
  std::vector<Point> orbit{o};
  Point fwd = o, bwd = o;
  std::vector<Point> back;
  for (int i = 1; i <= window; ++i) {
    fwd = space.apply(b, fwd);
    bwd = space.apply(binv, bwd);
    orbit.push_back(fwd);
    back.push_back(bwd);
  }
  std::reverse(back.begin(), back.end());
  back.insert(back.end(), orbit.begin(), orbit.end());

  std::vector<Point> out;
  for (std::size_t i = 0; i < back.size(); ++i) {
    out.push_back(back[i]);
    if (i + 1 == back.size()) break;
    const double d = space.dist(back[i], back[i + 1]);
    if (tree) {
      const int steps = static_cast<int>(std::lround(d));
      for (int t = 1; t < steps; ++t) {
        out.push_back(space.geodesic_point(back[i], back[i + 1], t));
      }
    } else {
      for (int j = 1; j < 4; ++j) {
        out.push_back(space.geodesic_point(back[i], back[i + 1], d * j / 4.0));
      }
    }
  }
  return out;
}

}  // namespace

double axis_overlap_diameter(const Space& space, const GroupElement& b,
                             const GroupElement& f, const Point& o,
                             double theta, int window) {
  if (window < 1) throw OutOfRange("axis_overlap_diameter needs window >= 1");
  if (space.classify(b).type != IsometryType::kLoxodromic) {
    throw NotLoxodromic("axis_overlap_diameter: " + space.describe(b) +
                        " is not loxodromic");
  }
  const double radius = theta * space.dist(o, space.apply(b, o));
  const std::vector<Point> alpha = sample_axis(space, b, o, window);
  std::vector<Point> moved;
  moved.reserve(alpha.size());
  for (const Point& p : alpha) moved.push_back(space.apply(f, p));

  const double slack = space.kind() == BackendKind::kHalfPlane ? 1e-9 : 0.0;
  std::vector<const Point*> near;
  for (const Point& p : alpha) {
    for (const Point& q : moved) {
      if (space.dist(p, q) <= radius + slack) {
        near.push_back(&p);
        break;
      }
    }
  }
  double diameter = 0.0;
  for (std::size_t i = 0; i < near.size(); ++i) {
    for (std::size_t j = i + 1; j < near.size(); ++j) {
      diameter = std::max(diameter, space.dist(*near[i], *near[j]));
    }
  }
  return diameter;
}

}  // namespace loxgrow
