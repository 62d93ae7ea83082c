#pragma once

// Coarse geometry of delta-hyperbolic spaces evaluated on a concrete backend:
// Gromov products, an empirical four-point defect, sufficient loxodromy tests,
// local-to-global chain bounds and displacement functionals.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "loxgrow/space.hpp"

namespace loxgrow {

class GeneratingSet;

// <x, y>_o = (d(x, o) + d(y, o) - d(x, y)) / 2.
double gromov_product(const Space& space, const Point& x, const Point& y,
                      const Point& o);

// Largest violation of <x,y>_o >= min(<x,z>_o, <z,y>_o) over the 12 ways of
// assigning the roles (o, z) inside the quadruple. Never negative.
double four_point_defect(const Space& space, const Point& p0, const Point& p1,
                         const Point& p2, const Point& p3);

// Max defect over sample_size seeded random quadruples; a lower bound for any
// valid delta.
double estimate_delta(const Space& space, std::size_t sample_size,
                      std::uint64_t seed);
// Same over quadruples drawn from a fixed pool; 0 when the pool has fewer
// than 4 distinct points.
double estimate_delta(const Space& space, std::span<const Point> pool,
                      std::size_t quadruples, std::uint64_t seed);

// d(o, go) > 2 <o, g^2 o>_{go} + 6 delta  implies g loxodromic.
bool loxodromic_criterion(const Space& space, const GroupElement& g,
                          const Point& o, double delta);

// min(d(go,o), d(ho,o)) / 4 > max(<go, h^-1 o>_o, <g^-1 o, ho>_o) + delta
// implies gh loxodromic.
bool product_loxodromic_criterion(const Space& space, const GroupElement& g,
                                  const GroupElement& h, const Point& o,
                                  double delta);

// Points x_1..x_k with gaps d_i = d(x_i, x_{i+1}) and interior Gromov
// products p_i = <x_{i-1}, x_{i+1}>_{x_i}, stored 0-based: gaps[j] is
// d(x_{j+1}, x_{j+2}) and products[j] belongs to x_{j+2}.
struct Chain {
  std::vector<Point> points;
  std::vector<double> gaps;
  std::vector<double> products;

  static Chain from_points(const Space& space, std::vector<Point> points);
  std::size_t size() const { return points.size(); }
  double gap_sum() const;
};

// sum d_i - 2 sum (p_i + delta), a lower bound for d(x_1, x_k) once
// p_i + p_{i+1} <= d_i - 3 delta and p_i + p_{i+1} < d_i for 2 <= i <= k-2.
// Throws HypothesisFailed with the first failing i otherwise.
double chain_lower_bound(const Chain& chain, double delta);

// True when the chain certifies d(x_1, x_k) >= sum d_i / 2:
//   p_i + p_{i+1} <= d_i / 4 - delta      for 2 <= i <= k-2, and
//   p_i <= min(d_{i-1}, d_i) / 4 - delta  for every interior i,
//   d_i > 0                               for every gap.
// The second family covers the two end products the pair conditions miss
// (and all of k = 3).
bool chain_condition_holds(const Chain& chain, double delta);

struct TranslationBracket {
  double upper;     // min_{m <= N} d(o, g^m o) / m, certified >= tau(g)
  double estimate;  // (d(o, g^{2N} o) - d(o, g^N o)) / N
};

TranslationBracket translation_length_bracket(const Space& space,
                                              const GroupElement& g,
                                              const Point& o, int N);

struct DisplacementRecord {
  Point point;
  std::vector<std::pair<GroupElement, double>> per_generator;
  double value = 0.0;  // max over per_generator
};

DisplacementRecord displacement(const Space& space, const GeneratingSet& S,
                                const Point& x);
DisplacementRecord displacement(const Space& space,
                                std::span<const GroupElement> S,
                                const Point& x);

// Minimum of displacement over basepoint_candidates(S, budget); first
// candidate wins ties.
DisplacementRecord min_displacement_search(const Space& space,
                                           const GeneratingSet& S,
                                           std::size_t budget);

// Diameter of the samples of the quasi-axis alpha = U b^i [o, bo], |i| <=
// window, lying within theta * d(o, bo) of f * alpha. Sampling heuristic.
double axis_overlap_diameter(const Space& space, const GroupElement& b,
                             const GroupElement& f, const Point& o,
                             double theta, int window);

// Overlap above this multiple of d(o, bo) is read as f in E(b).
inline constexpr double kOverlapSuspicionFactor = 6.0;

}  // namespace loxgrow
