#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ribcat/category.hpp"
#include "ribcat/fusion.hpp"

namespace ribcat {

// A marked point on a surface boundary component: a simple label and an
// orientation sign.
struct Mark {
  std::string label;
  int sign = +1;
  bool operator==(const Mark&) const = default;
};

// Entry of a decorated type: a non-negative integer (a genus handle count,
// contributing a rainbow of that many free colors) or a mark.
using TypeEntry = std::variant<int, Mark>;

// Decorated surface type (m, n; a_1, ..., a_p): m left boundary points,
// n right boundary points, entries in left-to-right order.
struct DecoratedType {
  int m = 0;
  int n = 0;
  std::vector<TypeEntry> entries;
  bool operator==(const DecoratedType&) const = default;
};

// Parses "(m,n; e, e, ...)" where e is a non-negative integer or "(W,+)" /
// "(W,-)".  Whitespace is free; the entry list may be empty.
DecoratedType parse_type(const std::string& text);
std::string type_to_string(const DecoratedType& t);

// (l,m;A) o (m,n;B) = (l,n; A, m-1, B).  Throws NotComposable if the inner
// boundary counts differ.
DecoratedType compose_types(const DecoratedType& t, const DecoratedType& s);

// Sum of the integer entries.
int genus_plus(const DecoratedType& t);

// A point of the index set attached to a type: per entry, a tuple of labels
// (length = the integer entry, empty for marks).
struct ColorIndex {
  std::vector<std::vector<int>> parts;
  bool operator==(const ColorIndex&) const = default;
  bool operator<(const ColorIndex& o) const { return parts < o.parts; }
};

// All indices in lexicographic order (leftmost slot most significant, labels
// ascending).  Marks must name simple labels of the category; non-labels
// throw NotSupported.
std::vector<ColorIndex> enumerate_indices(const ModularCategoryData& cat,
                                          const DecoratedType& t);

// Product of the label dimensions over all slots (marks contribute 1).
// Real by construction for the bundled categories; returned as real part.
double index_dim(const ModularCategoryData& cat, const ColorIndex& zeta);

// Lexicographic tuples of I^n (row/column grids of 2-matrices).
std::vector<std::vector<int>> enumerate_tuples(const ModularCategoryData& cat, int n);

// Boundary of the module object for (t, zeta) with side colors i (left,
// length m) and j (right, length n):
//   duals of i_1..i_m, then per entry either the mark token or the rainbow
//   (z_1,+)..(z_a,+),(z_a,-)..(z_1,-), then j_n..j_1 as plus tokens.
// Throws IndexArityMismatch on wrong side or index arity.
std::vector<SignedColor> phi_boundary(const ModularCategoryData& cat,
                                      const DecoratedType& t, const ColorIndex& zeta,
                                      const std::vector<int>& i,
                                      const std::vector<int>& j);

std::string index_to_string(const ModularCategoryData& cat, const ColorIndex& zeta);

}  // namespace ribcat
