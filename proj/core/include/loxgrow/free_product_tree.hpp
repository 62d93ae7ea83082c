#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loxgrow/space.hpp"

namespace loxgrow {

struct Syllable {
  int factor;  // 0 -> generator a, 1 -> generator b
  int power;   // 1 .. order(factor) - 1
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

// Z/p * Z/q = <a> * <b> acting on its Bass-Serre tree. Vertices are cosets
// g<a> and g<b>; edges are the elements g, joining g<a> to g<b>.
//
// Canonical forms spell each syllable out with lowercase letters, so "abb"
// is a * b^2. The uppercase input letters A and B denote a^-1 and b^-1.
class FreeProductTree final : public Space {
 public:
  explicit FreeProductTree(BackendConfig config);

  int order(int factor) const { return config().orders[factor]; }

  std::vector<Syllable> syllables(std::string_view canonical) const;
  static std::string encode(std::span<const Syllable> syllables);
  // Canonical product of canonical strings.
  std::string multiply(std::string_view x, std::string_view y) const;
  std::string inverse(std::string_view x) const;
  // Syllable length after cyclic reduction.
  int cyclic_length(std::string_view canonical) const;
  // Coset vertex g * A_factor with a reduced representative.
  CosetVertex vertex(std::string_view g, int factor) const;

  bool exact() const override { return true; }
  std::string alphabet() const override { return "ab"; }

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

  // The <a>-vertex at the identity.
  Point origin() const override { return CosetVertex{"", 0}; }
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
  const CosetVertex& coset(const Point& p) const;
  // Normal form of rep(x)^-1 rep(y) with the leading x.factor syllable and
  // the trailing y.factor syllable stripped.
  std::vector<Syllable> relative_path(const CosetVertex& x,
                                      const CosetVertex& y) const;
};

}  // namespace loxgrow
