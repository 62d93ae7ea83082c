#include "loxgrow/free_group_tree.hpp"

#include <algorithm>
#include <cmath>

#include "loxgrow/errors.hpp"

namespace loxgrow {

FreeGroupTree::FreeGroupTree(BackendConfig config) : Space(config) {
  if (this->config().kind != BackendKind::kFreeGroupTree) {
    throw ConfigError("FreeGroupTree needs kind free_group_tree");
  }
}

std::string FreeGroupTree::alphabet() const {
  std::string out;
  for (int i = 0; i < rank(); ++i) out.push_back(static_cast<char>('a' + i));
  return out;
}

std::string FreeGroupTree::reduce(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    if (!out.empty() && out.back() == inverse_letter(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string FreeGroupTree::multiply(std::string_view x, std::string_view y) {
  std::size_t cancel = 0;
  while (cancel < x.size() && cancel < y.size() &&
         x[x.size() - 1 - cancel] == inverse_letter(y[cancel])) {
    ++cancel;
  }
  std::string out;
  out.reserve(x.size() + y.size() - 2 * cancel);
  out.append(x.substr(0, x.size() - cancel));
  out.append(y.substr(cancel));
  return out;
}

bool FreeGroupTree::shortlex_less(std::string_view x, std::string_view y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return letter_rank(x[i]) < letter_rank(y[i]);
  }
  return false;
}

std::string FreeGroupTree::cyclic_core(std::string_view reduced) {
  std::size_t lo = 0, hi = reduced.size();
  while (hi - lo >= 2 && reduced[lo] == inverse_letter(reduced[hi - 1])) {
    ++lo;
    --hi;
  }
  return std::string(reduced.substr(lo, hi - lo));
}

const std::string& FreeGroupTree::canon(const GroupElement& x) const {
  const auto* s = std::get_if<std::string>(&x.canonical);
  if (s == nullptr) throw BackendMismatch("element is not a free group word");
  for (char c : *s) {
    const int idx = c >= 'a' ? c - 'a' : c - 'A';
    if (idx < 0 || idx >= rank()) {
      throw BackendMismatch("letter outside the rank of this free group");
    }
  }
  return *s;
}

const std::string& FreeGroupTree::vertex(const Point& p) const {
  const auto* v = std::get_if<TreeVertex>(&p);
  if (v == nullptr) throw BackendMismatch("point is not a Cayley tree vertex");
  return v->word;
}

GroupElement FreeGroupTree::identity() const { return {"", std::string{}}; }

GroupElement FreeGroupTree::generator(char symbol) const {
  const int idx = symbol >= 'a' ? symbol - 'a' : symbol - 'A';
  if (idx < 0 || idx >= rank() || (symbol > 'Z' && symbol < 'a')) {
    throw ConfigError(std::string("unknown generator symbol '") + symbol +
                      "'");
  }
  return {std::string(1, symbol), std::string(1, symbol)};
}

GroupElement FreeGroupTree::compose(const GroupElement& x,
                                    const GroupElement& y) const {
  std::string c = multiply(canon(x), canon(y));
  return {c, std::move(c)};
}

GroupElement FreeGroupTree::invert(const GroupElement& x) const {
  std::string c = invert_word(canon(x));
  return {c, std::move(c)};
}

bool FreeGroupTree::is_identity(const GroupElement& x) const {
  return canon(x).empty();
}

bool FreeGroupTree::equal(const GroupElement& x, const GroupElement& y) const {
  return canon(x) == canon(y);
}

bool FreeGroupTree::canonical_less(const GroupElement& x,
                                   const GroupElement& y) const {
  return shortlex_less(canon(x), canon(y));
}

std::string FreeGroupTree::key(const GroupElement& x) const { return canon(x); }

double FreeGroupTree::dist(const Point& x, const Point& y) const {
  const std::string& u = vertex(x);
  const std::string& v = vertex(y);
  std::size_t common = 0;
  while (common < u.size() && common < v.size() && u[common] == v[common]) {
    ++common;
  }
  return static_cast<double>(u.size() + v.size() - 2 * common);
}

Point FreeGroupTree::apply(const GroupElement& g, const Point& x) const {
  return TreeVertex{multiply(canon(g), vertex(x))};
}

Point FreeGroupTree::geodesic_point(const Point& x, const Point& y,
                                    double t) const {
  const std::string& u = vertex(x);
  const std::string& v = vertex(y);
  const double total = dist(x, y);
  const double rounded = std::round(t);
  if (std::abs(t - rounded) > 1e-9 || rounded < 0 || rounded > total) {
    throw OutOfRange("geodesic parameter must be an integer in [0, d(x,y)]");
  }
  std::size_t common = 0;
  while (common < u.size() && common < v.size() && u[common] == v[common]) {
    ++common;
  }
  const auto steps = static_cast<std::size_t>(rounded);
  const std::size_t up = u.size() - common;
  if (steps <= up) return TreeVertex{u.substr(0, u.size() - steps)};
  return TreeVertex{v.substr(0, common + (steps - up))};
}

bool FreeGroupTree::same_point(const Point& x, const Point& y) const {
  return vertex(x) == vertex(y);
}

Classification FreeGroupTree::classify(const GroupElement& g) const {
  return {canon(g).empty() ? IsometryType::kIdentity
                           : IsometryType::kLoxodromic,
          false};
}

std::optional<double> FreeGroupTree::translation_length(
    const GroupElement& g) const {
  return static_cast<double>(cyclic_core(canon(g)).size());
}

std::vector<Point> FreeGroupTree::basepoint_candidates(
    std::span<const GroupElement> S, std::size_t budget) const {
  std::vector<Point> out;
  const Point seeds[] = {origin()};
  append_orbit(S, seeds, budget, out);
  return out;
}

Point FreeGroupTree::random_point(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> len(0, 8);
  return TreeVertex{canon(random_element(rng, len(rng)))};
}

std::string FreeGroupTree::describe(const Point& p) const {
  const std::string& v = vertex(p);
  return v.empty() ? std::string("1") : v;
}

}  // namespace loxgrow
