#pragma once

#include <map>
#include <string>
#include <vector>

#include "ribcat/diagram.hpp"
#include "ribcat/fusion.hpp"

namespace ribcat {

// A coupon color: a basis element of the hom-space between the coupon's
// domain and codomain boundaries, i.e. the matrix unit sending one fusion
// tree at `charge` to another.
struct CouponColor {
  int charge = 0;
  std::vector<int> domain_tree;
  std::vector<int> codomain_tree;
};

// Assignment of labels to the open variables of a diagram.  Rainbow entries
// color $vars, surgery entries color ?components, coupon entries pick basis
// elements for named coupons.
struct Coloring {
  std::map<std::string, int> rainbow;
  std::map<std::string, int> surgery;
  std::map<std::string, CouponColor> coupons;
};

// Operator invariant of a fully colored diagram: one dense block per total
// charge, mapping the bottom fusion-tree space to the top one.  Slices act
// locally (R-symbol conjugated by F-moves for braids, twist eigenvalues,
// pivot-weighted births/deaths).  Throws UncoloredVariable when a variable
// has no color and NotSupported on fusion multiplicities.
BlockMorphism evaluate_F(const ModularCategoryData& cat, const RibbonDiagram& d,
                         const Coloring& coloring);

// Same, with the fusion trees grown from a fixed initial charge instead of
// the unit; evaluate_F is the initial = 0 case.
BlockMorphism evaluate_F_rel(const ModularCategoryData& cat,
                             const RibbonDiagram& d, const Coloring& coloring,
                             int initial);

// Unit-charge block of the diagram with its bottom rainbow pairs colored by
// zeta (flattened in order of first appearance), top pairs by eta and
// surgery components by lambda: the map Hom(1, bottom) -> Hom(1, top).
Eigen::MatrixXcd evaluate_F0(const ModularCategoryData& cat,
                             const RibbonDiagram& d, const ColorIndex& zeta,
                             const ColorIndex& eta,
                             const std::map<std::string, int>& lambda);

}  // namespace ribcat
