#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "loxgrow/space.hpp"

namespace loxgrow {

// Subgroup of PSL(2, R) acting on the upper half plane by Moebius maps.
// With exact_integer arithmetic the generators are integer matrices and the
// word problem is decided by comparing sign-normalized products; with float
// arithmetic equality is up to kIdentityTolerance.
class HalfPlane final : public Space {
 public:
  HalfPlane(BackendConfig config, std::vector<IntMatrix> generators);
  HalfPlane(BackendConfig config, std::vector<RealMatrix> generators);

  bool integral() const {
    return config().arithmetic == Arithmetic::kExactInteger;
  }

  GroupElement from_matrix(const IntMatrix& m, Word word = {}) const;
  GroupElement from_matrix(const RealMatrix& m, Word word = {}) const;
  // Float matrix of a float-backend element; throws on integer elements.
  RealMatrix real_matrix(const GroupElement& g) const;
  // Floating point image of any matrix element.
  RealMatrix as_real(const GroupElement& g) const;
  std::size_t generator_count() const;

  static PlanePoint moebius(const RealMatrix& m, PlanePoint z);
  static double plane_dist(PlanePoint z, PlanePoint w);
  // Point of the axis of a loxodromic element closest to the top of its
  // semicircle (or at height 1 for vertical axes).
  static std::optional<PlanePoint> axis_point(const RealMatrix& m);

  bool exact() const override { return integral(); }
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

  Point origin() const override { return PlanePoint(0.0, 1.0); }
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

  std::string describe(const GroupElement& g) const override;
  std::string describe(const Point& p) const override;

  // Quantized entries used as the hash key of float elements.
  static std::array<std::int64_t, 4> quantize(const RealMatrix& m);

 private:
  const PlanePoint& plane(const Point& p) const;

  std::vector<IntMatrix> int_generators_;
  std::vector<RealMatrix> real_generators_;
};

}  // namespace loxgrow
