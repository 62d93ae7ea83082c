#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loxgrow/space.hpp"

namespace loxgrow {

inline constexpr std::size_t kDefaultElementCap = 2'000'000;

// Finite symmetric generating set: closed under inverses, identity free,
// deduplicated by canonical form and sorted by Space::canonical_less.
class GeneratingSet {
 public:
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::span<const GroupElement> span() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  // Words the caller supplied, for reporting.
  const std::vector<std::string>& source_words() const { return source_words_; }

  bool contains(const Space& space, const GroupElement& g) const;

 private:
  friend GeneratingSet make_generating_set(const Space&,
                                           std::vector<GroupElement>, bool);

  std::vector<GroupElement> elements_;
  std::vector<std::string> source_words_;
};

// Throws EmptyAfterReduction when nothing but identities was given, and
// ConfigError when symmetrize is false but the input is not symmetric.
GeneratingSet make_generating_set(const Space& space,
                                  std::vector<GroupElement> elements,
                                  bool symmetrize);
GeneratingSet make_generating_set(const Space& space,
                                  std::span<const std::string> words,
                                  bool symmetrize);

// S^{<=n} minus the identity. Throws BudgetExceeded past element_cap.
GeneratingSet product_ball_set(const Space& space, const GeneratingSet& S,
                               int n,
                               std::size_t element_cap = kDefaultElementCap);

// Exact word length d_S(1, g) by bidirectional breadth-first search, or
// nullopt when it exceeds cap. Throws BudgetExceeded past element_cap stored
// elements.
std::optional<int> word_length_in_S(
    const Space& space, const GeneratingSet& S, const GroupElement& g, int cap,
    std::size_t element_cap = kDefaultElementCap);

}  // namespace loxgrow
