#include "loxgrow/generating_set.hpp"

#include <algorithm>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "loxgrow/errors.hpp"

namespace loxgrow {

bool GeneratingSet::contains(const Space& space, const GroupElement& g) const {
  return std::any_of(elements_.begin(), elements_.end(),
                     [&](const GroupElement& s) { return space.equal(s, g); });
}

GeneratingSet make_generating_set(const Space& space,
                                  std::vector<GroupElement> elements,
                                  bool symmetrize) {
  GeneratingSet out;
  for (const GroupElement& g : elements) out.source_words_.push_back(g.word);

  absl::flat_hash_map<std::string, GroupElement> unique;
  auto insert = [&](GroupElement g) {
    if (space.is_identity(g)) return;
    std::string k = space.key(g);
    unique.try_emplace(std::move(k), std::move(g));
  };
  for (GroupElement& g : elements) {
    if (symmetrize) insert(space.invert(g));
    insert(std::move(g));
  }
  if (unique.empty()) {
    throw EmptyAfterReduction("generating set reduces to the identity");
  }
  out.elements_.reserve(unique.size());
  for (auto& [k, g] : unique) out.elements_.push_back(std::move(g));
  std::sort(out.elements_.begin(), out.elements_.end(),
            [&](const GroupElement& x, const GroupElement& y) {
              return space.canonical_less(x, y);
            });
  if (!symmetrize) {
    for (const GroupElement& g : out.elements_) {
      if (!unique.contains(space.key(space.invert(g)))) {
        throw ConfigError("generating set is not symmetric: missing inverse of " +
                          space.describe(g));
      }
    }
  }
  return out;
}

GeneratingSet make_generating_set(const Space& space,
                                  std::span<const std::string> words,
                                  bool symmetrize) {
  std::vector<GroupElement> elements;
  elements.reserve(words.size());
  for (const std::string& w : words) elements.push_back(space.evaluate(w));
  return make_generating_set(space, std::move(elements), symmetrize);
}

GeneratingSet product_ball_set(const Space& space, const GeneratingSet& S,
                               int n, std::size_t element_cap) {
  if (n < 1) throw OutOfRange("product_ball_set needs n >= 1");
  absl::flat_hash_set<std::string> seen;
  std::vector<GroupElement> all;
  GroupElement one = space.identity();
  seen.insert(space.key(one));
  std::vector<GroupElement> frontier{one};
  for (int radius = 1; radius <= n && !frontier.empty(); ++radius) {
    std::vector<GroupElement> next;
    for (const GroupElement& x : frontier) {
      for (const GroupElement& s : S) {
        GroupElement y = space.compose(x, s);
        if (seen.insert(space.key(y)).second) {
          next.push_back(y);
          all.push_back(std::move(y));
          if (all.size() + 1 > element_cap) {
            throw BudgetExceeded("S^{<=" + std::to_string(n) +
                                 "} exceeds the element cap of " +
                                 std::to_string(element_cap));
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return make_generating_set(space, std::move(all), false);
}

std::optional<int> word_length_in_S(const Space& space, const GeneratingSet& S,
                                    const GroupElement& g, int cap,
                                    std::size_t element_cap) {
  if (cap < 1) throw OutOfRange("word_length_in_S needs cap >= 1");
  if (space.is_identity(g)) return 0;

  struct Side {
    absl::flat_hash_map<std::string, int> depth_of;
    std::vector<GroupElement> frontier;
    int depth = 0;
  };
  Side fwd, bwd;
  fwd.depth_of.emplace(space.key(space.identity()), 0);
  fwd.frontier.push_back(space.identity());
  bwd.depth_of.emplace(space.key(g), 0);
  bwd.frontier.push_back(g);

  // Expanding whole layers, the first layer that meets the other side yields
  // the exact distance as the minimum over that layer.
  while (fwd.depth + bwd.depth < cap) {
    Side& grow = fwd.frontier.size() <= bwd.frontier.size() ? fwd : bwd;
    const Side& other = &grow == &fwd ? bwd : fwd;
    if (grow.frontier.empty()) return std::nullopt;
    std::optional<int> best;
    std::vector<GroupElement> next;
    for (const GroupElement& x : grow.frontier) {
      for (const GroupElement& s : S) {
        GroupElement y = space.compose(x, s);
        std::string k = space.key(y);
        if (grow.depth_of.contains(k)) continue;
        if (auto it = other.depth_of.find(k); it != other.depth_of.end()) {
          const int total = grow.depth + 1 + it->second;
          if (!best || total < *best) best = total;
        }
        grow.depth_of.emplace(std::move(k), grow.depth + 1);
        next.push_back(std::move(y));
      }
      if (fwd.depth_of.size() + bwd.depth_of.size() > element_cap) {
        throw BudgetExceeded("word length search exceeds the element cap");
      }
    }
    grow.frontier = std::move(next);
    ++grow.depth;
    if (best) return *best <= cap ? best : std::nullopt;
  }
  return std::nullopt;
}

}  // namespace loxgrow
