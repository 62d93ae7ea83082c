#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "loxgrow/generating_set.hpp"
#include "loxgrow/space.hpp"

namespace loxgrow {

struct GrowthOptions {
  int n_max = 10;
  std::size_t memory_cap = 2'000'000;  // stored elements
  int workers = 1;
};

// Ball and sphere counts for radii 0..last_complete_radius. When the memory
// cap interrupts the search the table is partial and budget_exceeded is set.
struct GrowthTable {
  std::vector<std::uint64_t> ball;
  std::vector<std::uint64_t> sphere;
  std::vector<double> upper;           // min_{1<=m<=n} log(a_m) / m; NaN at 0
  std::vector<double> ratio_estimate;  // log(a_n / a_{n-1}); NaN at 0
  bool budget_exceeded = false;
  int requested_radius = 0;
  int last_complete_radius = 0;
  std::size_t peak_stored = 0;

  int max_radius() const { return static_cast<int>(ball.size()) - 1; }
};

GrowthTable ball_sizes(const Space& space, const GeneratingSet& S,
                       const GrowthOptions& options);

struct GrowthBrackets {
  double omega_upper;  // certified: omega <= omega_upper
  double omega_hat;    // last consecutive ratio, uncertified
};

GrowthBrackets growth_brackets(const GrowthTable& table);

// Least squares slope of log a_n against n over the upper half of the radii.
double omega_fit(const GrowthTable& table);

// omega_hat / log #S.
double theta_ratio(const GrowthTable& table, const GeneratingSet& S);

// Header n,ball,sphere,upper_bound,ratio_estimate; 9 significant digits.
std::string growth_csv(const GrowthTable& table);

}  // namespace loxgrow
