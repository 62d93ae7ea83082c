#include "loxgrow/half_plane.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "loxgrow/errors.hpp"

namespace loxgrow {

namespace {

constexpr double kDetTolerance = 1e-9;
constexpr double kQuantum = 1e6;

RealMatrix unit_determinant(const RealMatrix& m) {
  const double det = m.det();
  if (!(det > 0.0)) throw NotInGroup("matrix determinant must be 1");
  const double s = 1.0 / std::sqrt(det);
  return RealMatrix{m.a * s, m.b * s, m.c * s, m.d * s}.normalized();
}

double max_entry(const RealMatrix& m) {
  return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c),
                   std::abs(m.d)});
}

}  // namespace

HalfPlane::HalfPlane(BackendConfig config, std::vector<IntMatrix> generators)
    : Space(config) {
  if (this->config().kind != BackendKind::kHalfPlane) {
    throw ConfigError("HalfPlane needs kind half_plane");
  }
  if (generators.size() > 26) throw ConfigError("at most 26 generators");
  for (const IntMatrix& m : generators) {
    if (m.det() != 1) throw NotInGroup("matrix " + m.to_string() + " has det != 1");
    if (integral()) {
      int_generators_.push_back(m.normalized());
    } else {
      real_generators_.push_back(RealMatrix::from(m).normalized());
    }
  }
}

HalfPlane::HalfPlane(BackendConfig config, std::vector<RealMatrix> generators)
    : Space(config) {
  if (this->config().kind != BackendKind::kHalfPlane) {
    throw ConfigError("HalfPlane needs kind half_plane");
  }
  if (generators.size() > 26) throw ConfigError("at most 26 generators");
  for (const RealMatrix& m : generators) {
    if (integral()) {
      for (double v : {m.a, m.b, m.c, m.d}) {
        if (v != std::round(v) || std::abs(v) > 9.0e15) {
          throw NotInGroup("exact_integer arithmetic needs integer entries");
        }
      }
      const IntMatrix im{static_cast<std::int64_t>(m.a),
                         static_cast<std::int64_t>(m.b),
                         static_cast<std::int64_t>(m.c),
                         static_cast<std::int64_t>(m.d)};
      if (im.det() != 1) {
        throw NotInGroup("matrix " + im.to_string() + " has det != 1");
      }
      int_generators_.push_back(im.normalized());
    } else {
      if (std::abs(m.det() - 1.0) > kDetTolerance) {
        throw NotInGroup("matrix " + m.to_string() + " has det != 1");
      }
      real_generators_.push_back(unit_determinant(m));
    }
  }
}

std::size_t HalfPlane::generator_count() const {
  return integral() ? int_generators_.size() : real_generators_.size();
}

std::string HalfPlane::alphabet() const {
  std::string out;
  for (std::size_t i = 0; i < generator_count(); ++i) {
    out.push_back(static_cast<char>('a' + i));
  }
  return out;
}

GroupElement HalfPlane::from_matrix(const IntMatrix& m, Word word) const {
  if (m.det() != 1) throw NotInGroup("matrix " + m.to_string() + " has det != 1");
  if (integral()) return {std::move(word), m.normalized()};
  return {std::move(word), RealMatrix::from(m).normalized()};
}

GroupElement HalfPlane::from_matrix(const RealMatrix& m, Word word) const {
  if (integral()) {
    for (double v : {m.a, m.b, m.c, m.d}) {
      if (v != std::round(v) || std::abs(v) > 9.0e15) {
        throw NotInGroup("exact_integer arithmetic needs integer entries");
      }
    }
    return from_matrix(IntMatrix{static_cast<std::int64_t>(m.a),
                                 static_cast<std::int64_t>(m.b),
                                 static_cast<std::int64_t>(m.c),
                                 static_cast<std::int64_t>(m.d)},
                       std::move(word));
  }
  if (std::abs(m.det() - 1.0) > kDetTolerance) {
    throw NotInGroup("matrix " + m.to_string() + " has det != 1");
  }
  return {std::move(word), unit_determinant(m)};
}

RealMatrix HalfPlane::real_matrix(const GroupElement& g) const {
  if (const auto* im = std::get_if<IntMatrix>(&g.canonical)) {
    if (!integral()) throw BackendMismatch("integer matrix on a float backend");
    return RealMatrix::from(*im);
  }
  if (const auto* rm = std::get_if<RealMatrix>(&g.canonical)) {
    if (integral()) throw BackendMismatch("float matrix on an exact backend");
    return *rm;
  }
  throw BackendMismatch("element is not a matrix");
}

RealMatrix HalfPlane::as_real(const GroupElement& g) const {
  if (const auto* im = std::get_if<IntMatrix>(&g.canonical)) {
    return RealMatrix::from(*im);
  }
  return real_matrix(g);
}

PlanePoint HalfPlane::moebius(const RealMatrix& m, PlanePoint z) {
  if (m.c == 0.0) return (m.a * z + m.b) / m.d;
  // With det 1, gz = a/c - 1/(c (cz + d)); the imaginary part Im z / |cz + d|^2
  // avoids the cancellation in ad - bc for large entries.
  const PlanePoint q = m.c * z + m.d;
  const double re = m.a / m.c - (1.0 / (m.c * q)).real();
  return {re, z.imag() / std::norm(q)};
}

double HalfPlane::plane_dist(PlanePoint z, PlanePoint w) {
  if (z.real() == w.real()) return std::abs(std::log(z.imag() / w.imag()));
  // 2 asinh(|z - w| / (2 sqrt(Im z Im w))) equals
  // arccosh(1 + |z - w|^2 / (2 Im z Im w)) without cancellation near 0.
  return 2.0 * std::asinh(std::abs(z - w) /
                          (2.0 * std::sqrt(z.imag() * w.imag())));
}

std::optional<PlanePoint> HalfPlane::axis_point(const RealMatrix& m) {
  const double tr = std::abs(m.trace());
  if (tr <= 2.0 + kIdentityTolerance) return std::nullopt;
  if (std::abs(m.c) < 1e-15) {
    // Vertical axis through the finite fixed point b / (d - a).
    return PlanePoint(m.b / (m.d - m.a), 1.0);
  }
  const double disc = m.trace() * m.trace() - 4.0;
  const double center = (m.a - m.d) / (2.0 * m.c);
  const double radius = std::sqrt(disc) / (2.0 * std::abs(m.c));
  return PlanePoint(center, radius);
}

const PlanePoint& HalfPlane::plane(const Point& p) const {
  const auto* z = std::get_if<PlanePoint>(&p);
  if (z == nullptr) throw BackendMismatch("point is not in the half plane");
  return *z;
}

GroupElement HalfPlane::identity() const {
  if (integral()) return {"", IntMatrix::identity()};
  return {"", RealMatrix::identity()};
}

GroupElement HalfPlane::generator(char symbol) const {
  const bool inverse = symbol >= 'A' && symbol <= 'Z';
  const int idx = inverse ? symbol - 'A' : symbol - 'a';
  if (idx < 0 || static_cast<std::size_t>(idx) >= generator_count()) {
    throw ConfigError(std::string("unknown generator symbol '") + symbol + "'");
  }
  if (integral()) {
    const IntMatrix& m = int_generators_[idx];
    return {std::string(1, symbol), (inverse ? m.inverse() : m).normalized()};
  }
  const RealMatrix& m = real_generators_[idx];
  return {std::string(1, symbol), (inverse ? m.inverse() : m).normalized()};
}

GroupElement HalfPlane::compose(const GroupElement& x,
                                const GroupElement& y) const {
  if (integral()) {
    const auto* p = std::get_if<IntMatrix>(&x.canonical);
    const auto* q = std::get_if<IntMatrix>(&y.canonical);
    if (p == nullptr || q == nullptr) {
      throw BackendMismatch("integer matrix expected");
    }
    return {x.word + y.word, multiply(*p, *q).normalized()};
  }
  return {x.word + y.word,
          unit_determinant(multiply(real_matrix(x), real_matrix(y)))};
}

GroupElement HalfPlane::invert(const GroupElement& x) const {
  if (integral()) {
    const auto* p = std::get_if<IntMatrix>(&x.canonical);
    if (p == nullptr) throw BackendMismatch("integer matrix expected");
    return {invert_word(x.word), p->inverse().normalized()};
  }
  return {invert_word(x.word), real_matrix(x).inverse().normalized()};
}

bool HalfPlane::is_identity(const GroupElement& x) const {
  if (integral()) {
    const auto* p = std::get_if<IntMatrix>(&x.canonical);
    if (p == nullptr) throw BackendMismatch("integer matrix expected");
    return p->normalized() == IntMatrix::identity();
  }
  return projective_distance(real_matrix(x), RealMatrix::identity()) <=
         kIdentityTolerance;
}

bool HalfPlane::equal(const GroupElement& x, const GroupElement& y) const {
  if (integral()) {
    const auto* p = std::get_if<IntMatrix>(&x.canonical);
    const auto* q = std::get_if<IntMatrix>(&y.canonical);
    if (p == nullptr || q == nullptr) {
      throw BackendMismatch("integer matrix expected");
    }
    return p->normalized() == q->normalized();
  }
  const RealMatrix u = real_matrix(x);
  const RealMatrix v = real_matrix(y);
  const double scale = std::max({1.0, max_entry(u), max_entry(v)});
  return projective_distance(u, v) <= kIdentityTolerance * scale;
}

bool HalfPlane::canonical_less(const GroupElement& x,
                               const GroupElement& y) const {
  if (integral()) {
    const auto* p = std::get_if<IntMatrix>(&x.canonical);
    const auto* q = std::get_if<IntMatrix>(&y.canonical);
    if (p == nullptr || q == nullptr) {
      throw BackendMismatch("integer matrix expected");
    }
    return *p < *q;
  }
  if (equal(x, y)) return false;
  return real_matrix(x) < real_matrix(y);
}

std::array<std::int64_t, 4> HalfPlane::quantize(const RealMatrix& m) {
  const RealMatrix n = m.normalized();
  auto q = [](double v) {
    return static_cast<std::int64_t>(std::llround(v * kQuantum));
  };
  return {q(n.a), q(n.b), q(n.c), q(n.d)};
}

std::string HalfPlane::key(const GroupElement& x) const {
  std::string out(4 * sizeof(std::int64_t), '\0');
  if (integral()) {
    const auto* p = std::get_if<IntMatrix>(&x.canonical);
    if (p == nullptr) throw BackendMismatch("integer matrix expected");
    const std::int64_t v[4] = {p->a, p->b, p->c, p->d};
    std::memcpy(out.data(), v, sizeof v);
  } else {
    const auto v = quantize(real_matrix(x));
    std::memcpy(out.data(), v.data(), sizeof(std::int64_t) * 4);
  }
  return out;
}

double HalfPlane::dist(const Point& x, const Point& y) const {
  return plane_dist(plane(x), plane(y));
}

Point HalfPlane::apply(const GroupElement& g, const Point& x) const {
  return moebius(as_real(g), plane(x));
}

Point HalfPlane::geodesic_point(const Point& x, const Point& y,
                                double t) const {
  const PlanePoint z = plane(x);
  const PlanePoint w = plane(y);
  const double total = plane_dist(z, w);
  const double slack = 1e-12 * std::max(1.0, total);
  if (t < -slack || t > total + slack) {
    throw OutOfRange("geodesic parameter outside [0, d(x,y)]");
  }
  t = std::clamp(t, 0.0, total);
  if (total == 0.0) return z;
  // Move x to i by an affine map, then walk along the disk-model ray.
  const PlanePoint w1 = (w - z.real()) / z.imag();
  const PlanePoint i(0.0, 1.0);
  const PlanePoint disk = (w1 - i) / (w1 + i);
  const PlanePoint dir = disk / std::abs(disk);
  const PlanePoint p = std::tanh(t / 2.0) * dir;
  const PlanePoint back = i * (1.0 + p) / (1.0 - p);
  return PlanePoint(back.real() * z.imag() + z.real(), back.imag() * z.imag());
}

bool HalfPlane::same_point(const Point& x, const Point& y) const {
  const PlanePoint z = plane(x);
  const PlanePoint w = plane(y);
  return std::abs(z - w) <= 1e-12 * std::max(1.0, std::abs(z));
}

Classification HalfPlane::classify(const GroupElement& g) const {
  if (integral()) {
    const auto* p = std::get_if<IntMatrix>(&g.canonical);
    if (p == nullptr) throw BackendMismatch("integer matrix expected");
    const std::int64_t tr = p->trace() < 0 ? -p->trace() : p->trace();
    if (tr < 2) return {IsometryType::kElliptic, false};
    if (tr > 2) return {IsometryType::kLoxodromic, false};
    return {is_identity(g) ? IsometryType::kIdentity : IsometryType::kParabolic,
            false};
  }
  const double tr = std::abs(real_matrix(g).trace());
  if (std::abs(tr - 2.0) <= kIdentityTolerance) {
    if (is_identity(g)) return {IsometryType::kIdentity, false};
    return {IsometryType::kParabolic, true};
  }
  return {tr < 2.0 ? IsometryType::kElliptic : IsometryType::kLoxodromic,
          false};
}

std::optional<double> HalfPlane::translation_length(
    const GroupElement& g) const {
  if (classify(g).type != IsometryType::kLoxodromic) return 0.0;
  const double tr = std::abs(as_real(g).trace());
  return 2.0 * std::acosh(tr / 2.0);
}

std::vector<Point> HalfPlane::basepoint_candidates(
    std::span<const GroupElement> S, std::size_t budget) const {
  std::vector<Point> out;
  const Point seeds[] = {origin()};
  append_orbit(S, seeds, budget, out);
  for (const GroupElement& s : S) {
    if (out.size() >= budget) break;
    if (classify(s).type != IsometryType::kLoxodromic) continue;
    if (auto z = axis_point(as_real(s))) {
      const Point p = *z;
      const bool seen = std::any_of(out.begin(), out.end(), [&](const Point& q) {
        return same_point(p, q);
      });
      if (!seen) out.push_back(p);
    }
  }
  return out;
}

Point HalfPlane::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> x(-2.0, 2.0);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return PlanePoint(x(rng), std::exp(u(rng)));
}

std::string HalfPlane::describe(const GroupElement& g) const {
  const std::string m = integral()
                            ? std::get<IntMatrix>(g.canonical).to_string()
                            : real_matrix(g).to_string();
  return g.word.empty() ? m : g.word + " = " + m;
}

std::string HalfPlane::describe(const Point& p) const {
  const PlanePoint z = plane(p);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

}  // namespace loxgrow
