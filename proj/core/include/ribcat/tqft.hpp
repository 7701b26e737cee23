#pragma once

#include <string>
#include <vector>

#include "ribcat/surgery.hpp"
#include "ribcat/types.hpp"

namespace ribcat {

// Basis vector of a module entry: a color index together with a fusion tree
// of the unit-charge hom space at that index.
struct BasisVector {
  ColorIndex zeta;
  std::vector<int> tree;
};

// Free module descriptor: dimension plus labeled basis.
struct ModuleDesc {
  std::vector<BasisVector> basis;
  long dim() const { return static_cast<long>(basis.size()); }
};

// Matrix of modules indexed by lexicographic label tuples: rows by I^m,
// columns by I^n.
struct TwoMatrix {
  std::vector<std::vector<int>> rows, cols;
  std::vector<std::vector<ModuleDesc>> entry;  // [row][col]
};

// Matrix of linear maps between the entries of two TwoMatrix shapes.
struct TwoHom {
  std::vector<std::vector<Eigen::MatrixXcd>> entry;  // [row][col]
};

// Composition anomaly record: k = (D/Delta)^(sigma1 + sigma2 - sigma).
struct AnomalyLedger {
  Scalar k = 1.0;
  int sigma1 = 0, sigma2 = 0, sigma = 0;
};

// Dimension of the object assigned to a boundary count: rank^n (1 for the
// empty boundary).
long X_object(const ModularCategoryData& cat, int n);

// Identity 1-cell on n boundary circles: diagonal entries the ground ring.
TwoMatrix identity_twomatrix(const ModularCategoryData& cat, int n);

// The 2-matrix of a decorated surface: entry (i, j) is the direct sum over
// zeta of Hom(1, Phi(t; zeta; i, j)), basis ordered by zeta then tree.
TwoMatrix X_one_morphism(const ModularCategoryData& cat, const DecoratedType& t);

// Entry (h, j) = direct sum over the middle tuple i of A[h][i] (x) B[i][j].
// Product basis labels keep the middle tuple as an extra color-index part
// between the factors' parts; trees are concatenated.
TwoMatrix twomatrix_multiply(const ModularCategoryData& cat, const TwoMatrix& A,
                             const TwoMatrix& B);

// Invertible map from twomatrix_multiply(X(t1), X(t2)) to X(t1 o t2): on the
// (mid, zeta1, zeta2) summand it caps the innermost interface pair and reads
// the leftover middle rainbow as the inserted integer entry of the composite
// type, colored by the reversed tail of the middle tuple.
TwoHom structural_iso_u(const ModularCategoryData& cat, const DecoratedType& t1,
                        const DecoratedType& t2);

// X of a 2-morphism presented by a diagram whose side bands are the through
// variables (first m names: left, last n: right).  For each (i, j) the bands
// are colored and the block formula is applied; entries map X(t)[i][j] to
// X(s)[i][j].  The (i, j) grid is evaluated across `jobs` threads.
TwoHom X_two_morphism(const ModularCategoryData& cat, const RibbonDiagram& d,
                      const DecoratedType& t, const DecoratedType& s,
                      int jobs = 1);

// f then g, entrywise matrix product.
TwoHom vcompose_twohom(const TwoHom& f, const TwoHom& g);

// Horizontal composition against the product shapes: entry (h, j) is the
// direct sum over the middle tuple of Kronecker products f[h][i] (x) g[i][j].
TwoHom hcompose_twohom(const ModularCategoryData& cat, const TwoHom& f,
                       const TwoHom& g, const TwoMatrix& Xt1,
                       const TwoMatrix& Xt2, const TwoMatrix& Xs1,
                       const TwoMatrix& Xs2);

// A diagram standing for the formal identity 2-morphism: no slices, equal
// boundaries.
bool is_formal_identity(const RibbonDiagram& d);

struct VerticalResult {
  TwoHom concat;        // X of the stacked diagram
  TwoHom chain;         // k * X(d2) . X(d1)
  AnomalyLedger anomaly;
  double residual = 0;  // worst scaled entry difference
};

// Stacks d1 (t -> s) under d2 (s -> r), computes X both ways and the
// anomaly k from the three exact signatures.  A formal identity factor
// gives k = 1 and passes the other factor through.
VerticalResult vertical_compose_X(const ModularCategoryData& cat,
                                  const RibbonDiagram& d1,
                                  const RibbonDiagram& d2,
                                  const DecoratedType& t, const DecoratedType& s,
                                  const DecoratedType& r, int jobs = 1);

struct HorizontalResult {
  TwoHom composite;     // X of the assembled diagram
  double residual = 0;  // intertwining defect |X(M1 o M2) u1 - u2 (X1 o X2)|
};

// Glues d1 (t1 -> s1, sides (l, m)) to d2 (t2 -> s2, sides (m, n)) along the
// m shared bands and checks the structural-isomorphism intertwining.
HorizontalResult horizontal_compose_X(const ModularCategoryData& cat,
                                      const RibbonDiagram& d1,
                                      const RibbonDiagram& d2,
                                      const DecoratedType& t1,
                                      const DecoratedType& s1,
                                      const DecoratedType& t2,
                                      const DecoratedType& s2, int jobs = 1);

struct AxiomResult {
  std::string name;
  bool pass = false;
  double residual = 0;
};

// Built-in axiom suite: anomaly cocycle (exact), vertical projectivity,
// nontrivial-anomaly sample, formal-identity units, interchange, horizontal
// intertwining, u invertibility.
std::vector<AxiomResult> verify_axioms(const ModularCategoryData& cat,
                                       double tol = 1e-8, int jobs = 1);

}  // namespace ribcat
