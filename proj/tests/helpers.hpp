#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "loxgrow/free_group_tree.hpp"
#include "loxgrow/free_product_tree.hpp"
#include "loxgrow/generating_set.hpp"
#include "loxgrow/half_plane.hpp"
#include "loxgrow/psl2z.hpp"

namespace loxgrow::testing {

inline std::unique_ptr<Space> free_group(int rank = 2) {
  return make_space(BackendConfig::free_group(rank));
}

inline std::unique_ptr<Space> psl_tree() {
  return make_space(BackendConfig::free_product(2, 3));
}

inline std::unique_ptr<Space> plane(std::vector<IntMatrix> gens) {
  return make_space(BackendConfig::half_plane(Arithmetic::kExactInteger),
                    std::span<const IntMatrix>(gens));
}

inline std::unique_ptr<Space> float_plane(std::vector<RealMatrix> gens) {
  return make_space(BackendConfig::half_plane(Arithmetic::kFloat),
                    std::span<const RealMatrix>(gens));
}

inline const IntMatrix kSanovA{1, 2, 0, 1};
inline const IntMatrix kSanovB{1, 0, 2, 1};
inline const IntMatrix kPslSTSquared{-1, -1, 1, 0};

// One space per backend kind, plus the modular group on the half plane.
inline std::vector<std::unique_ptr<Space>> sample_spaces() {
  std::vector<std::unique_ptr<Space>> out;
  out.push_back(free_group(2));
  out.push_back(psl_tree());
  out.push_back(plane({kSanovA, kSanovB}));
  out.push_back(plane({kPslS, kPslST}));
  return out;
}

inline GeneratingSet gens(const Space& space, std::vector<std::string> words,
                          bool symmetrize = true) {
  return make_generating_set(space, std::span<const std::string>(words), symmetrize);
}

inline GroupElement el(const Space& space, const std::string& word) {
  return space.evaluate(word);
}

// Ball sizes by plain breadth-first search over GroupElement keys.
inline std::vector<std::size_t> naive_balls(const Space& space,
                                            const GeneratingSet& S, int n) {
  std::vector<std::size_t> out{1};
  std::vector<std::string> seen{space.key(space.identity())};
  std::vector<GroupElement> frontier{space.identity()};
  for (int r = 1; r <= n; ++r) {
    std::vector<GroupElement> next;
    for (const GroupElement& x : frontier) {
      for (const GroupElement& s : S) {
        GroupElement y = space.compose(x, s);
        const std::string k = space.key(y);
        if (std::find(seen.begin(), seen.end(), k) == seen.end()) {
          seen.push_back(k);
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
    out.push_back(seen.size());
  }
  return out;
}

}  // namespace loxgrow::testing
