#include "loxgrow/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "loxgrow/errors.hpp"

namespace loxgrow {

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) {
    throw ArithmeticOverflow("integer matrix entry overflow");
  }
  return r;
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) {
    throw ArithmeticOverflow("integer matrix entry overflow");
  }
  return r;
}

}  // namespace

std::int64_t IntMatrix::det() const {
  return checked_add(checked_mul(a, d), -checked_mul(b, c));
}

IntMatrix IntMatrix::normalized() const {
  const std::int64_t lead = a != 0 ? a : b != 0 ? b : c != 0 ? c : d;
  if (lead < 0) return {-a, -b, -c, -d};
  return *this;
}

std::string IntMatrix::to_string() const {
  return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" +
         std::to_string(c) + "," + std::to_string(d) + "]]";
}

IntMatrix multiply(const IntMatrix& x, const IntMatrix& y) {
  return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
          checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
          checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
          checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
}

RealMatrix RealMatrix::normalized() const {
  // Entries below this magnitude are treated as zero when picking the sign.
  constexpr double kZero = 1e-12;
  double lead = d;
  for (double v : {a, b, c}) {
    if (std::abs(v) > kZero) {
      lead = v;
      break;
    }
  }
  if (lead < 0) return {-a, -b, -c, -d};
  return *this;
}

std::string RealMatrix::to_string() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[[%.17g,%.17g],[%.17g,%.17g]]", a, b, c, d);
  return buf;
}

RealMatrix multiply(const RealMatrix& x, const RealMatrix& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

double projective_distance(const RealMatrix& x, const RealMatrix& y) {
  auto maxdiff = [](const RealMatrix& p, const RealMatrix& q, double s) {
    return std::max({std::abs(p.a - s * q.a), std::abs(p.b - s * q.b),
                     std::abs(p.c - s * q.c), std::abs(p.d - s * q.d)});
  };
  return std::min(maxdiff(x, y, 1.0), maxdiff(x, y, -1.0));
}

}  // namespace loxgrow
