#include "loxgrow/free_product_tree.hpp"

#include <cmath>

#include "loxgrow/errors.hpp"

namespace loxgrow {

namespace {

char factor_letter(int factor) { return factor == 0 ? 'a' : 'b'; }

void push_syllable(std::vector<Syllable>& out, Syllable s, int order) {
  if (!out.empty() && out.back().factor == s.factor) {
    const int p = (out.back().power + s.power) % order;
    if (p == 0) {
      out.pop_back();
    } else {
      out.back().power = p;
    }
  } else {
    out.push_back(s);
  }
}

}  // namespace

FreeProductTree::FreeProductTree(BackendConfig config) : Space(config) {
  if (this->config().kind != BackendKind::kFreeProductTree) {
    throw ConfigError("FreeProductTree needs kind free_product_tree");
  }
}

std::vector<Syllable> FreeProductTree::syllables(
    std::string_view canonical) const {
  std::vector<Syllable> out;
  for (char c : canonical) {
    const int f = c == 'a' ? 0 : c == 'b' ? 1 : -1;
    if (f < 0) throw BackendMismatch("not a free product normal form");
    if (!out.empty() && out.back().factor == f) {
      ++out.back().power;
    } else {
      out.push_back({f, 1});
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].power >= order(out[i].factor)) {
      throw BackendMismatch("syllable power exceeds the factor order");
    }
  }
  return out;
}

std::string FreeProductTree::encode(std::span<const Syllable> syllables) {
  std::string out;
  for (const Syllable& s : syllables) out.append(s.power, factor_letter(s.factor));
  return out;
}

std::string FreeProductTree::multiply(std::string_view x,
                                      std::string_view y) const {
  std::vector<Syllable> acc = syllables(x);
  for (const Syllable& s : syllables(y)) push_syllable(acc, s, order(s.factor));
  return encode(acc);
}

std::string FreeProductTree::inverse(std::string_view x) const {
  std::vector<Syllable> syl = syllables(x);
  std::vector<Syllable> out;
  out.reserve(syl.size());
  for (auto it = syl.rbegin(); it != syl.rend(); ++it) {
    out.push_back({it->factor, order(it->factor) - it->power});
  }
  return encode(out);
}

int FreeProductTree::cyclic_length(std::string_view canonical) const {
  std::vector<Syllable> syl = syllables(canonical);
  std::size_t lo = 0, hi = syl.size();
  while (hi - lo >= 2 && syl[lo].factor == syl[hi - 1].factor) {
    const int p = (syl[lo].power + syl[hi - 1].power) % order(syl[lo].factor);
    --hi;
    if (p == 0) {
      ++lo;
    } else {
      syl[lo].power = p;
    }
  }
  return static_cast<int>(hi - lo);
}

CosetVertex FreeProductTree::vertex(std::string_view g, int factor) const {
  std::vector<Syllable> syl = syllables(g);
  if (!syl.empty() && syl.back().factor == factor) syl.pop_back();
  return {encode(syl), factor};
}

const std::string& FreeProductTree::canon(const GroupElement& x) const {
  const auto* s = std::get_if<std::string>(&x.canonical);
  if (s == nullptr) throw BackendMismatch("element is not a free product word");
  return *s;
}

const CosetVertex& FreeProductTree::coset(const Point& p) const {
  const auto* v = std::get_if<CosetVertex>(&p);
  if (v == nullptr) throw BackendMismatch("point is not a Bass-Serre vertex");
  return *v;
}

GroupElement FreeProductTree::identity() const { return {"", std::string{}}; }

GroupElement FreeProductTree::generator(char symbol) const {
  switch (symbol) {
    case 'a': return {"a", std::string("a")};
    case 'b': return {"b", std::string("b")};
    case 'A': return {"A", std::string(order(0) - 1, 'a')};
    case 'B': return {"B", std::string(order(1) - 1, 'b')};
    default:
      throw ConfigError(std::string("unknown generator symbol '") + symbol +
                        "' (free products use a, b)");
  }
}

GroupElement FreeProductTree::compose(const GroupElement& x,
                                      const GroupElement& y) const {
  return {x.word + y.word, multiply(canon(x), canon(y))};
}

GroupElement FreeProductTree::invert(const GroupElement& x) const {
  return {invert_word(x.word), inverse(canon(x))};
}

bool FreeProductTree::is_identity(const GroupElement& x) const {
  return canon(x).empty();
}

bool FreeProductTree::equal(const GroupElement& x,
                            const GroupElement& y) const {
  return canon(x) == canon(y);
}

bool FreeProductTree::canonical_less(const GroupElement& x,
                                     const GroupElement& y) const {
  const std::string& u = canon(x);
  const std::string& v = canon(y);
  if (u.size() != v.size()) return u.size() < v.size();
  return u < v;
}

std::string FreeProductTree::key(const GroupElement& x) const {
  return canon(x);
}

// Path from x to y: after normalizing, y = base * u * A_j with u an
// alternating normal form of L syllables that neither starts in x's factor
// nor ends in j. The tree distance is 0 when u is empty and the factors agree,
// else L + 1.
std::vector<Syllable> FreeProductTree::relative_path(
    const CosetVertex& x, const CosetVertex& y) const {
  std::vector<Syllable> u = syllables(multiply(inverse(x.rep), y.rep));
  if (!u.empty() && u.back().factor == y.factor) u.pop_back();
  if (!u.empty() && u.front().factor == x.factor) u.erase(u.begin());
  return u;
}

double FreeProductTree::dist(const Point& x, const Point& y) const {
  const CosetVertex& u = coset(x);
  const CosetVertex& v = coset(y);
  const std::size_t len = relative_path(u, v).size();
  if (len == 0 && u.factor == v.factor) return 0.0;
  return static_cast<double>(len + 1);
}

Point FreeProductTree::apply(const GroupElement& g, const Point& x) const {
  const CosetVertex& v = coset(x);
  return vertex(multiply(canon(g), v.rep), v.factor);
}

Point FreeProductTree::geodesic_point(const Point& x, const Point& y,
                                      double t) const {
  const CosetVertex& u = coset(x);
  const CosetVertex& v = coset(y);
  const double total = dist(x, y);
  const double rounded = std::round(t);
  if (std::abs(t - rounded) > 1e-9 || rounded < 0 || rounded > total) {
    throw OutOfRange("geodesic parameter must be an integer in [0, d(x,y)]");
  }
  const auto steps = static_cast<std::size_t>(rounded);
  if (steps == 0) return u;
  // base absorbs the stripped leading syllable, so x = base * A_{x.factor}.
  std::vector<Syllable> full = syllables(multiply(inverse(u.rep), v.rep));
  std::string base = u.rep;
  if (!full.empty() && full.front().factor == u.factor) {
    base = multiply(base, encode(std::span(full).first(1)));
  }
  const std::vector<Syllable> path = relative_path(u, v);
  const std::string prefix =
      encode(std::span(path).first(std::min(steps - 1, path.size())));
  const int factor = steps % 2 == 0 ? u.factor : 1 - u.factor;
  return vertex(multiply(base, prefix), factor);
}

bool FreeProductTree::same_point(const Point& x, const Point& y) const {
  return coset(x) == coset(y);
}

Classification FreeProductTree::classify(const GroupElement& g) const {
  if (canon(g).empty()) return {IsometryType::kIdentity, false};
  return {cyclic_length(canon(g)) <= 1 ? IsometryType::kElliptic
                                       : IsometryType::kLoxodromic,
          false};
}

std::optional<double> FreeProductTree::translation_length(
    const GroupElement& g) const {
  const int len = cyclic_length(canon(g));
  return len >= 2 ? static_cast<double>(len) : 0.0;
}

std::vector<Point> FreeProductTree::basepoint_candidates(
    std::span<const GroupElement> S, std::size_t budget) const {
  std::vector<Point> out;
  const Point seeds[] = {CosetVertex{"", 0}, CosetVertex{"", 1}};
  append_orbit(S, seeds, budget, out);
  return out;
}

Point FreeProductTree::random_point(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<int> factor(0, 1);
  const GroupElement g = random_element(rng, len(rng));
  return vertex(canon(g), factor(rng));
}

std::string FreeProductTree::describe(const Point& p) const {
  const CosetVertex& v = coset(p);
  return (v.rep.empty() ? std::string("1") : v.rep) +
         (v.factor == 0 ? "<a>" : "<b>");
}

}  // namespace loxgrow
