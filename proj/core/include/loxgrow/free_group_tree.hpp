#pragma once

#include <string>
#include <string_view>

#include "loxgrow/space.hpp"

namespace loxgrow {

// Free group of rank r on symbols a, b, c, ... acting on its Cayley tree.
// Points are vertices (reduced words); the metric is integral.
class FreeGroupTree final : public Space {
 public:
  explicit FreeGroupTree(BackendConfig config);

  int rank() const { return config().rank; }

  // Sort key of a letter: a < A < b < B < ...
  static int letter_rank(char c) {
    return c >= 'a' ? 2 * (c - 'a') : 2 * (c - 'A') + 1;
  }
  static char inverse_letter(char c) {
    return c >= 'a' ? static_cast<char>(c - 'a' + 'A')
                    : static_cast<char>(c - 'A' + 'a');
  }
  static std::string reduce(std::string_view word);
  // reduce(x + y) for already reduced x, y.
  static std::string multiply(std::string_view x, std::string_view y);
  static bool shortlex_less(std::string_view x, std::string_view y);
  static std::string cyclic_core(std::string_view reduced);

  bool exact() const override { return true; }
  std::string alphabet() const override;

  GroupElement identity() const override;
  GroupElement generator(char symbol) const override;
  GroupElement compose(const GroupElement& x,
                       const GroupElement& y) const override;
  GroupElement invert(const GroupElement& x) const override;
  bool is_identity(const GroupElement& x) const override;
  bool equal(const GroupElement& x, const GroupElement& y) const override;
  bool canonical_less(const GroupElement& x,
                      const GroupElement& y) const override;
  std::string key(const GroupElement& x) const override;

  Point origin() const override { return TreeVertex{}; }
  double dist(const Point& x, const Point& y) const override;
  Point apply(const GroupElement& g, const Point& x) const override;
  Point geodesic_point(const Point& x, const Point& y,
                       double t) const override;
  bool same_point(const Point& x, const Point& y) const override;

  Classification classify(const GroupElement& g) const override;
  std::optional<double> translation_length(
      const GroupElement& g) const override;

  std::vector<Point> basepoint_candidates(std::span<const GroupElement> S,
                                          std::size_t budget) const override;
  Point random_point(std::mt19937_64& rng) const override;

  using Space::describe;
  std::string describe(const Point& p) const override;

 private:
  const std::string& canon(const GroupElement& x) const;
  const std::string& vertex(const Point& p) const;
};

}  // namespace loxgrow
