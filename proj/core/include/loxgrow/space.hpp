#pragma once

// Hyperbolic-space backends: a group acting by isometries on a proper
// geodesic space, with exact group arithmetic wherever the backend allows it.
//
// Three concrete backends exist:
//   * FreeGroupTree    -- F_r acting on its Cayley tree (delta = 0);
//   * FreeProductTree  -- Z/p * Z/q acting on its Bass-Serre tree (delta = 0);
//   * HalfPlane        -- a subgroup of PSL(2, R) acting on the upper half
//                         plane by Moebius maps, with exact integer or
//                         floating point matrices.
//
// Group elements are values: a word over generator symbols (lowercase letter
// = generator, uppercase = inverse) plus the backend canonical form used for
// equality, ordering and hashing.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "loxgrow/matrix.hpp"

namespace loxgrow {

enum class BackendKind { kFreeGroupTree, kFreeProductTree, kHalfPlane };
enum class Arithmetic { kExactInteger, kFloat };

std::string to_string(BackendKind kind);
std::string to_string(Arithmetic arithmetic);

struct BackendConfig {
  BackendKind kind = BackendKind::kFreeGroupTree;
  int rank = 2;                       // free_group_tree
  std::array<int, 2> orders{2, 3};    // free_product_tree
  Arithmetic arithmetic = Arithmetic::kExactInteger;  // half_plane
  double delta = 0.0;
  int torsion_bound = 1;              // N_0

  // Defaults per kind: delta 0 on trees, 1.0 on the half plane.
  static BackendConfig free_group(int rank);
  static BackendConfig free_product(int p, int q);
  static BackendConfig half_plane(Arithmetic arithmetic, double delta = 1.0);

  // Throws ConfigError on violated invariants.
  void validate() const;
};

// Identity tolerance of the floating point backend.
inline constexpr double kIdentityTolerance = 1e-9;

using Word = std::string;

Word invert_word(std::string_view word);

// Canonical forms: reduced word (free group), lowercase syllable string such
// as "abb" = a*b^2 (free product), normalized matrix (half plane).
using Canonical = std::variant<std::string, IntMatrix, RealMatrix>;

struct GroupElement {
  Word word;
  Canonical canonical;
};

struct TreeVertex {
  std::string word;  // reduced word of the vertex in the Cayley tree
  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
};

// Vertex rep * A_factor of the Bass-Serre tree. rep never ends in a syllable
// of its own factor.
struct CosetVertex {
  std::string rep;
  int factor = 0;
  friend bool operator==(const CosetVertex&, const CosetVertex&) = default;
};

using PlanePoint = std::complex<double>;

using Point = std::variant<TreeVertex, CosetVertex, PlanePoint>;

enum class IsometryType { kIdentity, kElliptic, kParabolic, kLoxodromic };

std::string to_string(IsometryType type);

struct Classification {
  IsometryType type = IsometryType::kIdentity;
  // Set when a floating point trace sits within tolerance of 2.
  bool boundary = false;
};

class Space {
 public:
  explicit Space(BackendConfig config);
  virtual ~Space() = default;

  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;

  const BackendConfig& config() const { return config_; }
  BackendKind kind() const { return config_.kind; }
  double delta() const { return config_.delta; }
  int torsion_bound() const { return config_.torsion_bound; }

  // True when equality of canonical forms decides the word problem exactly.
  virtual bool exact() const = 0;
  // Generator symbols available to words, lowercase only.
  virtual std::string alphabet() const = 0;

  virtual GroupElement identity() const = 0;
  // Element for one symbol; uppercase gives the inverse.
  virtual GroupElement generator(char symbol) const = 0;
  GroupElement evaluate(std::string_view word) const;

  virtual GroupElement compose(const GroupElement& x,
                               const GroupElement& y) const = 0;
  virtual GroupElement invert(const GroupElement& x) const = 0;
  virtual bool is_identity(const GroupElement& x) const = 0;
  virtual bool equal(const GroupElement& x, const GroupElement& y) const = 0;
  // Strict weak order on canonical forms; the deterministic order used by
  // every search and tie-break.
  virtual bool canonical_less(const GroupElement& x,
                              const GroupElement& y) const = 0;
  // Byte key suitable for hashing; equal elements give equal keys (float
  // backend: after quantization).
  virtual std::string key(const GroupElement& x) const = 0;

  GroupElement power(const GroupElement& g, long n) const;
  GroupElement conjugate(const GroupElement& s, const GroupElement& g) const {
    return compose(compose(s, g), invert(s));
  }

  virtual Point origin() const = 0;
  virtual double dist(const Point& x, const Point& y) const = 0;
  virtual Point apply(const GroupElement& g, const Point& x) const = 0;
  // Point p on a geodesic [x, y] with d(x, p) = t. Tree backends need
  // integral t.
  virtual Point geodesic_point(const Point& x, const Point& y,
                               double t) const = 0;
  virtual bool same_point(const Point& x, const Point& y) const = 0;

  virtual Classification classify(const GroupElement& g) const = 0;
  // Asymptotic translation length; total on every backend here.
  virtual std::optional<double> translation_length(
      const GroupElement& g) const = 0;

  // Deterministic search set for the displacement infimum: the orbit of the
  // origin under S^{<=2} plus backend-specific extras, at most budget long.
  virtual std::vector<Point> basepoint_candidates(
      std::span<const GroupElement> generators, std::size_t budget) const = 0;

  // Seeded samples for property checks and delta estimation.
  virtual Point random_point(std::mt19937_64& rng) const = 0;
  GroupElement random_element(std::mt19937_64& rng, int max_len) const;

  virtual std::string describe(const GroupElement& g) const;
  virtual std::string describe(const Point& p) const = 0;

 protected:
  // Appends the S^{<=2} orbit of each seed to out, deduplicated.
  void append_orbit(std::span<const GroupElement> generators,
                    std::span<const Point> seeds, std::size_t budget,
                    std::vector<Point>& out) const;

 private:
  BackendConfig config_;
};

// Builds the backend. Half plane spaces take their generator matrices here:
// symbol 'a' is the first matrix, 'b' the second and so on.
std::unique_ptr<Space> make_space(const BackendConfig& config,
                                  std::span<const IntMatrix> matrices = {});
std::unique_ptr<Space> make_space(const BackendConfig& config,
                                  std::span<const RealMatrix> matrices);

}  // namespace loxgrow
