#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace loxgrow {

// 2x2 integer matrix [[a, b], [c, d]], read as an element of PSL(2, Z).
struct IntMatrix {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  friend auto operator<=>(const IntMatrix&, const IntMatrix&) = default;
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  static IntMatrix identity() { return {}; }

  std::int64_t det() const;   // throws ArithmeticOverflow
  std::int64_t trace() const { return a + d; }

  // Projective sign normalization: first nonzero of (a, b, c, d) positive.
  IntMatrix normalized() const;
  // Inverse in SL(2, Z), assuming det == 1.
  IntMatrix inverse() const { return {d, -b, -c, a}; }

  std::string to_string() const;
};

// Checked product; throws ArithmeticOverflow when an entry leaves int64.
IntMatrix multiply(const IntMatrix& x, const IntMatrix& y);

struct RealMatrix {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  friend auto operator<=>(const RealMatrix&, const RealMatrix&) = default;
  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

  static RealMatrix identity() { return {}; }
  static RealMatrix from(const IntMatrix& m) {
    return {static_cast<double>(m.a), static_cast<double>(m.b),
            static_cast<double>(m.c), static_cast<double>(m.d)};
  }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  RealMatrix normalized() const;
  RealMatrix inverse() const { return {d, -b, -c, a}; }
  std::string to_string() const;
};

RealMatrix multiply(const RealMatrix& x, const RealMatrix& y);

// Max-entry distance between x and +-y (projective comparison).
double projective_distance(const RealMatrix& x, const RealMatrix& y);

}  // namespace loxgrow
