#pragma once

#include <string>
#include <vector>

#include "ribcat/diagram.hpp"
#include "ribcat/evaluate.hpp"
#include "ribcat/types.hpp"

namespace ribcat {

// Surgery link of a diagram: per ?component framing and the integer linking
// matrix (diagonal = framing).  Components in order of first appearance.
struct SurgeryData {
  std::vector<std::string> components;
  std::vector<int> framing;
  std::vector<std::vector<int>> linking;
  int mu = 0;
};

// Threads strand identity through the slices and collects self-crossings,
// twists and inter-component crossings of the surgery strands.  Crossing
// signs are orientation-aware (braid sense times both token signs), which
// makes the expanded bend macro writhe-neutral, so caps contribute nothing.
// Throws UnclosedSurgeryComponent if a ?name touches the boundary, survives
// the slices, or its cups trace more than one circle.
SurgeryData trace_surgery(const RibbonDiagram& d);

// Signature (n+ minus n-) of a symmetric integer matrix by exact rational
// congruence diagonalization; zero-diagonal blocks are handled by the
// hyperbolic-pair rule, each pair contributing 0.
int signature(const std::vector<std::vector<int>>& B);

// {L, Omega}: sum over colorings lambda of the surgery components of
// dim(lambda) * F(diagram).  `base` supplies coupon (and any fixed rainbow)
// colors; its surgery entries are ignored.  Throws OpenBoundary unless the
// boundary is empty.  The lambda terms are evaluated across `jobs` threads
// and reduced in a fixed order, so results do not depend on jobs.
Scalar bracket(const ModularCategoryData& cat, const RibbonDiagram& d,
               const Coloring& base = {}, int jobs = 1);

// Closed invariant Delta^sigma * D^(-sigma - mu - 1) * {L, Omega}.
Scalar tau_closed(const ModularCategoryData& cat, const RibbonDiagram& d,
                  const Coloring& base = {}, int jobs = 1);

// Block matrices of a diagram read as a cobordism between the index sets of
// a bottom type t and a top type s: entry (eta, zeta) maps Hom(1, bottom
// colored by zeta) to Hom(1, top colored by eta).
struct BlockTable {
  std::vector<ColorIndex> source;
  std::vector<ColorIndex> target;
  // entry[e][z]: target dim x source dim
  std::vector<std::vector<Eigen::MatrixXcd>> entry;
};

// Delta^sigma * D^(-gplus - sigma - mu) * dim(eta) * sum_lambda dim(lambda)
// * F0 for every (zeta, eta), with gplus the total genus of s.  Validates
// that the diagram's bottom/top rainbow variable counts match the integer
// entries of t and s (TypeMismatch otherwise).  Deterministic across jobs.
BlockTable tau_blocks(const ModularCategoryData& cat, const RibbonDiagram& d,
                      const DecoratedType& t, const DecoratedType& s,
                      int jobs = 1);

// x^n for integer n of either sign.
Scalar ipow(Scalar x, int n);

}  // namespace ribcat
