#include "loxgrow/psl2z.hpp"

#include <cmath>
#include <vector>

#include "loxgrow/errors.hpp"
#include "loxgrow/free_product_tree.hpp"

namespace loxgrow {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw ArithmeticOverflow("entry overflow in PSL(2,Z) reduction");
  }
  return static_cast<std::int64_t>(v);
}

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

const FreeProductTree& modular_tree() {
  static const FreeProductTree tree(BackendConfig::free_product(2, 3));
  return tree;
}

// T^q as a syllable string: T = ab, T^-1 = b^2 a.
std::string t_power(const FreeProductTree& tree, Wide q) {
  if (q > 1'000'000 || q < -1'000'000) {
    throw ArithmeticOverflow("translation power too large to spell out");
  }
  std::string out;
  const std::string step = q > 0 ? "ab" : "bba";
  for (Wide i = 0; i < (q > 0 ? q : -q); ++i) out = tree.multiply(out, step);
  return out;
}

}  // namespace

IntMatrix psl2z_evaluate(std::string_view word) {
  IntMatrix acc = IntMatrix::identity();
  for (char c : word) {
    switch (c) {
      case 'a':
      case 'A': acc = multiply(acc, kPslS); break;
      case 'b': acc = multiply(acc, kPslST); break;
      case 'B': acc = multiply(acc, kPslST.inverse()); break;
      default: throw ConfigError(std::string("unknown PSL(2,Z) symbol '") + c + "'");
    }
  }
  return acc.normalized();
}

std::string psl2z_normal_form(const IntMatrix& input) {
  if (input.det() != 1) {
    throw NotInGroup("matrix " + input.to_string() + " has det != 1");
  }
  const FreeProductTree& tree = modular_tree();
  Wide a = input.a, b = input.b, c = input.c, d = input.d;
  std::string word;
  // m = T^q S (S T^-q m); each round shrinks |c| strictly.
  while (c != 0) {
    const Wide q = floor_div(a, c);
    const Wide a1 = a - q * c;
    const Wide b1 = b - q * d;
    word = tree.multiply(word, t_power(tree, q));
    word = tree.multiply(word, "a");
    const Wide na = -c, nb = -d;
    a = na;
    b = nb;
    c = a1;
    d = b1;
    narrow(a);
    narrow(b);
    narrow(c);
    narrow(d);
  }
  // Now m = +-[[1, x], [0, 1]] with a = d = +-1.
  word = tree.multiply(word, t_power(tree, a * b));
  return word;
}

std::string psl2z_normal_form(const RealMatrix& m) {
  for (double v : {m.a, m.b, m.c, m.d}) {
    if (v != std::round(v) || std::abs(v) > 9.0e15) {
      throw NotInGroup("PSL(2,Z) needs integer entries");
    }
  }
  return psl2z_normal_form(IntMatrix{static_cast<std::int64_t>(m.a),
                                     static_cast<std::int64_t>(m.b),
                                     static_cast<std::int64_t>(m.c),
                                     static_cast<std::int64_t>(m.d)});
}

GroupElement psl2z_normal_form(const FreeProductTree& space,
                               const IntMatrix& m) {
  if (space.order(0) != 2 || space.order(1) != 3) {
    throw BackendMismatch("PSL(2,Z) normal forms live in Z/2 * Z/3");
  }
  return space.evaluate(psl2z_normal_form(m));
}

}  // namespace loxgrow
