#pragma once

// Bridge between the two models of PSL(2, Z) = Z/2 * Z/3: integer matrices on
// the half plane and syllable words on the Bass-Serre tree, with
//   a -> S  = [[0, -1], [1, 0]]   (order 2)
//   b -> ST = [[0, -1], [1, 1]]   (order 3).

#include <string>
#include <string_view>

#include "loxgrow/matrix.hpp"
#include "loxgrow/space.hpp"

namespace loxgrow {

class FreeProductTree;

inline constexpr IntMatrix kPslS{0, -1, 1, 0};
inline constexpr IntMatrix kPslST{0, -1, 1, 1};
inline constexpr IntMatrix kPslT{1, 1, 0, 1};

// Sign-normalized matrix of a word over a, b, A, B.
IntMatrix psl2z_evaluate(std::string_view word);

// Free product normal form (lowercase syllable string, "" = identity) of an
// integer matrix with det 1. Throws NotInGroup otherwise.
std::string psl2z_normal_form(const IntMatrix& m);
// Same, after checking that every entry is an integer.
std::string psl2z_normal_form(const RealMatrix& m);
// The normal form as an element of a free_product_tree(2, 3) backend.
GroupElement psl2z_normal_form(const FreeProductTree& space, const IntMatrix& m);

}  // namespace loxgrow
