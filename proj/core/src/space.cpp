#include "loxgrow/space.hpp"

#include <algorithm>
#include <cctype>

#include "loxgrow/errors.hpp"
#include "loxgrow/free_group_tree.hpp"
#include "loxgrow/free_product_tree.hpp"
#include "loxgrow/half_plane.hpp"

namespace loxgrow {

std::string to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kFreeGroupTree: return "free_group_tree";
    case BackendKind::kFreeProductTree: return "free_product_tree";
    case BackendKind::kHalfPlane: return "half_plane";
  }
  return "?";
}

std::string to_string(Arithmetic arithmetic) {
  return arithmetic == Arithmetic::kExactInteger ? "exact_integer" : "float";
}

std::string to_string(IsometryType type) {
  switch (type) {
    case IsometryType::kIdentity: return "identity";
    case IsometryType::kElliptic: return "elliptic";
    case IsometryType::kParabolic: return "parabolic";
    case IsometryType::kLoxodromic: return "loxodromic";
  }
  return "?";
}

BackendConfig BackendConfig::free_group(int rank) {
  BackendConfig c;
  c.kind = BackendKind::kFreeGroupTree;
  c.rank = rank;
  return c;
}

BackendConfig BackendConfig::free_product(int p, int q) {
  BackendConfig c;
  c.kind = BackendKind::kFreeProductTree;
  c.orders = {p, q};
  return c;
}

BackendConfig BackendConfig::half_plane(Arithmetic arithmetic, double delta) {
  BackendConfig c;
  c.kind = BackendKind::kHalfPlane;
  c.arithmetic = arithmetic;
  c.delta = delta;
  return c;
}

void BackendConfig::validate() const {
  if (torsion_bound < 1) throw ConfigError("torsion_bound must be positive");
  switch (kind) {
    case BackendKind::kFreeGroupTree:
      if (rank < 1 || rank > 26) throw ConfigError("rank must lie in [1, 26]");
      if (delta != 0.0) throw ConfigError("tree backends have delta = 0");
      if (torsion_bound != 1) {
        throw ConfigError("free groups are torsion free: torsion_bound = 1");
      }
      break;
    case BackendKind::kFreeProductTree:
      if (orders[0] < 2 || orders[1] < 2) {
        throw ConfigError("factor orders must be at least 2");
      }
      if (orders[0] == 2 && orders[1] == 2) {
        throw ConfigError("Z/2 * Z/2 is elementary (infinite dihedral)");
      }
      if (delta != 0.0) throw ConfigError("tree backends have delta = 0");
      break;
    case BackendKind::kHalfPlane:
      if (!(delta > 0.0)) throw ConfigError("half_plane needs delta > 0");
      break;
  }
}

Word invert_word(std::string_view word) {
  Word out(word.rbegin(), word.rend());
  for (char& c : out) {
    c = std::isupper(static_cast<unsigned char>(c))
            ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
            : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

Space::Space(BackendConfig config) : config_(config) { config_.validate(); }

GroupElement Space::evaluate(std::string_view word) const {
  GroupElement acc = identity();
  for (char c : word) acc = compose(acc, generator(c));
  acc.word = std::string(word);
  return acc;
}

GroupElement Space::power(const GroupElement& g, long n) const {
  GroupElement base = n < 0 ? invert(g) : g;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n)
                          : static_cast<unsigned long>(n);
  GroupElement acc = identity();
  while (e > 0) {
    if (e & 1UL) acc = compose(acc, base);
    e >>= 1;
    if (e > 0) base = compose(base, base);
  }
  return acc;
}

GroupElement Space::random_element(std::mt19937_64& rng, int max_len) const {
  const std::string letters = alphabet();
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::bernoulli_distribution inverse(0.5);
  std::string word;
  for (int i = 0; i < max_len; ++i) {
    char c = letters[pick(rng)];
    if (inverse(rng)) c = static_cast<char>(std::toupper(c));
    word.push_back(c);
  }
  return evaluate(word);
}

std::string Space::describe(const GroupElement& g) const {
  const auto* s = std::get_if<std::string>(&g.canonical);
  if (s != nullptr) return s->empty() ? std::string("1") : *s;
  return g.word;
}

void Space::append_orbit(std::span<const GroupElement> generators,
                         std::span<const Point> seeds, std::size_t budget,
                         std::vector<Point>& out) const {
  auto add = [&](Point p) {
    if (out.size() >= budget) return;
    for (const Point& q : out) {
      if (same_point(p, q)) return;
    }
    out.push_back(std::move(p));
  };
  for (const Point& seed : seeds) add(seed);
  for (const Point& seed : seeds) {
    for (const GroupElement& s : generators) add(apply(s, seed));
  }
  for (const Point& seed : seeds) {
    for (const GroupElement& s : generators) {
      const Point once = apply(s, seed);
      for (const GroupElement& t : generators) add(apply(t, once));
    }
  }
}

std::unique_ptr<Space> make_space(const BackendConfig& config,
                                  std::span<const IntMatrix> matrices) {
  switch (config.kind) {
    case BackendKind::kFreeGroupTree:
      return std::make_unique<FreeGroupTree>(config);
    case BackendKind::kFreeProductTree:
      return std::make_unique<FreeProductTree>(config);
    case BackendKind::kHalfPlane:
      return std::make_unique<HalfPlane>(
          config, std::vector<IntMatrix>(matrices.begin(), matrices.end()));
  }
  throw ConfigError("unknown backend kind");
}

std::unique_ptr<Space> make_space(const BackendConfig& config,
                                  std::span<const RealMatrix> matrices) {
  if (config.kind != BackendKind::kHalfPlane) {
    if (!matrices.empty()) throw ConfigError("matrices need a half_plane backend");
    return make_space(config, std::span<const IntMatrix>{});
  }
  return std::make_unique<HalfPlane>(
      config, std::vector<RealMatrix>(matrices.begin(), matrices.end()));
}

}  // namespace loxgrow
