#pragma once

#include <array>
#include <vector>

#include "ribcat/category.hpp"

namespace ribcat {

// A boundary strand: simple label plus orientation; sign -1 reads as the dual
// object.  Signs are resolved to dual labels before any tree combinatorics.
struct SignedColor {
  int label = 0;
  int sign = +1;
  bool operator==(const SignedColor&) const = default;
};

int resolved_label(const ModularCategoryData& cat, SignedColor c);

// Left-nested fusion trees over a boundary sequence, one sector per total
// charge.  A tree is the list of intermediate charges after each leg, starting
// from `initial` (the unit unless a relative space is wanted); the last entry
// is the total charge.  Trees are stored in lexicographic order.
struct StateSpace {
  std::vector<SignedColor> boundary;
  std::vector<int> legs;  // resolved labels
  int initial = 0;
  std::vector<std::vector<std::vector<int>>> trees;  // [charge][index][position]

  int charges() const { return static_cast<int>(trees.size()); }
  int dim(int k) const { return static_cast<int>(trees[k].size()); }
  long tree_index(int k, const std::vector<int>& t) const;  // -1 if absent
};

StateSpace make_state_space(const ModularCategoryData& cat,
                            std::vector<SignedColor> boundary, int initial = 0);

// dim Hom(V_k, V_initial (x) X_1 (x) ... (x) X_n), by the fusion-count
// recursion.  Works for any multiplicities.
long hom_dim(const ModularCategoryData& cat, const std::vector<SignedColor>& boundary,
             int k, int initial = 0);

// A morphism between state spaces, one dense block per total charge.
struct BlockMorphism {
  StateSpace source;
  StateSpace target;
  std::vector<Eigen::MatrixXcd> blocks;  // blocks[k]: dim_target(k) x dim_source(k)
};

bool same_boundary(const StateSpace& a, const StateSpace& b);

BlockMorphism identity_morphism(const StateSpace& s);
BlockMorphism zero_morphism(const StateSpace& source, const StateSpace& target);

// f followed by g; requires f.target and g.source to carry the same boundary.
// Throws BoundaryMismatch otherwise, ShapeMismatch on malformed blocks.
BlockMorphism compose(const BlockMorphism& f, const BlockMorphism& g);

// Canonical splitting of Hom(1, V(x)W) through the middle charge:
//   u_i : Hom(1, V(x)V_i*) (x) Hom(1, V_i(x)W) -> Hom(1, V(x)W),
//   x (x) y |-> (id_V (x) d_{V_i} (x) id_W)(x (x) y).
// In the left-nested basis every u_i is a weighted matching of basis trees,
// so the assembled map is square and invertible whenever the weights are.
struct SplittingU {
  std::vector<SignedColor> left, right;
  std::vector<long> left_dim, right_dim;   // per middle label i
  std::vector<Scalar> weight;              // per middle label i
  std::vector<std::array<int, 3>> columns; // (i, x-tree, y-tree) per column
  Eigen::MatrixXcd forward;                // rows: unit-charge trees of V(+)W
  Eigen::MatrixXcd inverse;
};

SplittingU splitting_u(const ModularCategoryData& cat,
                       const std::vector<SignedColor>& V,
                       const std::vector<SignedColor>& W);

}  // namespace ribcat
