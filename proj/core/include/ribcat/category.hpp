#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "ribcat/scalar.hpp"

namespace ribcat {

// Skeletal data of a modular fusion category over the complex numbers.
//
// Labels are 0-based indices into `labels`; index 0 is the tensor unit.
// Fusion multiplicities are stored in full, but every basis-level operation
// (F lookup, tree spaces, the diagram evaluator) requires N <= 1 and throws
// NotSupported otherwise.
//
// F-symbol convention: fmatrix(a,b,c,d) is the change of basis on the space
// of trees a (x) b (x) c -> d,
//     |(ab)_e c; d>  =  sum_g  F[e,g]  |a (bc)_g; d>,
// rows indexed by the admissible left channels e (ascending), columns by the
// right channels g (ascending).  F-symbols with a unit outer leg are not
// stored; lookups synthesize the 1x1 identity for them.
//
// R-symbol convention: rsymbol(a,b,c) is the eigenvalue of the positive
// braiding a (x) b -> b (x) a on the fusion channel c.
struct ModularCategoryData {
  std::vector<std::string> labels;
  std::vector<int> dual;
  std::vector<int> fusion;  // N[(i*k + j)*k + c], k = rank
  std::map<std::array<int, 4>, Eigen::MatrixXcd> fsymbols;
  std::map<std::array<int, 3>, Scalar> rsymbols;
  std::vector<Scalar> twist;
  std::vector<Scalar> qdim;
  std::vector<Scalar> pivot;
  double tolerance = 1e-9;

  int rank() const { return static_cast<int>(labels.size()); }

  int nmult(int a, int b, int c) const {
    int k = rank();
    return fusion[(static_cast<size_t>(a) * k + b) * k + c];
  }
  bool admissible(int a, int b, int c) const { return nmult(a, b, c) > 0; }

  // Channels c with N(a,b,c) = 1, ascending.  Throws NotSupported on N > 1.
  std::vector<int> channels(int a, int b) const;

  // Left channels e of the tree space a(x)b(x)c -> d (rows of the F-matrix).
  std::vector<int> left_channels(int a, int b, int c, int d) const;
  // Right channels g (columns of the F-matrix).
  std::vector<int> right_channels(int a, int b, int c, int d) const;

  // F-matrix with unit-leg synthesis; throws ConsistencyError if a stored
  // matrix is missing or has the wrong shape for an admissible key.
  Eigen::MatrixXcd fmatrix(int a, int b, int c, int d) const;
  Scalar rsymbol(int a, int b, int c) const;

  // Birth/death normalization.  cap_coeff is the file's pivot; cup_coeff is
  // fixed by exactness of the zig-zag:  cup * cap * (F^{c,c*,c}_c)_{11} = 1.
  Scalar cap_coeff(int c) const { return pivot[c]; }
  Scalar cup_coeff(int c) const;

  int find_label(const std::string& name) const;  // -1 if absent
};

// Global rank D = sqrt(sum dim^2) (principal branch) and the Gauss sum
// Delta = sum twist^{-1} dim^2.  delta_sum throws DegenerateCategory when
// |Delta| falls below the file tolerance.
Scalar rank_d(const ModularCategoryData& cat);
Scalar delta_sum(const ModularCategoryData& cat);

// Unnormalized S-matrix from double-braiding traces:
//   S[a][b] = sum_c N(a,b,c) dim(c) twist(c) / (twist(a) twist(b)).
Eigen::MatrixXcd s_matrix(const ModularCategoryData& cat);

struct AxiomCheck {
  std::string name;
  bool pass;
  double residual;  // worst deviation; modularity reports 0 when S is
                    // invertible and 1/|det S| when it is not
};

// All axiom residuals, in validation order.  Never throws on a mere failure;
// throws NotSupported if multiplicities prevent a check from running.
std::vector<AxiomCheck> axiom_residuals(const ModularCategoryData& cat);

// Throws ConsistencyError naming the first failed axiom.
void validate_category(const ModularCategoryData& cat);

// Parses a category file (JSON with scalar-grammar strings; labels 1-based on
// disk).  With validate=true runs validate_category before returning.
ModularCategoryData load_category(const std::string& json_text, bool validate = true);
ModularCategoryData load_category_file(const std::string& path, bool validate = true);

}  // namespace ribcat
