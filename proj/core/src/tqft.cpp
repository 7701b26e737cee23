#include "ribcat/tqft.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "ribcat/errors.hpp"
#include "parallel.hpp"

namespace ribcat {
namespace {

Token label_token(const ModularCategoryData& cat, int label, int sign) {
  return {TokenKind::Colored, cat.labels[label], sign};
}

std::vector<Token> boundary_tokens(const ModularCategoryData& cat,
                                   const std::vector<SignedColor>& b) {
  std::vector<Token> out;
  out.reserve(b.size());
  for (const SignedColor& sc : b) out.push_back(label_token(cat, sc.label, sc.sign));
  return out;
}

double scaled_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return 1e9;
  if (!a.size()) return 0;
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double twohom_diff(const TwoHom& a, const TwoHom& b) {
  if (a.entry.size() != b.entry.size()) return 1e9;
  double worst = 0;
  for (size_t r = 0; r < a.entry.size(); ++r) {
    if (a.entry[r].size() != b.entry[r].size()) return 1e9;
    for (size_t c = 0; c < a.entry[r].size(); ++c)
      worst = std::max(worst, scaled_diff(a.entry[r][c], b.entry[r][c]));
  }
  return worst;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

long X_object(const ModularCategoryData& cat, int n) {
  long out = 1;
  for (int k = 0; k < n; ++k) out *= cat.rank();
  return out;
}

TwoMatrix identity_twomatrix(const ModularCategoryData& cat, int n) {
  TwoMatrix X;
  X.rows = enumerate_tuples(cat, n);
  X.cols = X.rows;
  X.entry.assign(X.rows.size(), std::vector<ModuleDesc>(X.cols.size()));
  for (size_t d = 0; d < X.rows.size(); ++d)
    X.entry[d][d].basis.push_back({ColorIndex{}, {}});
  return X;
}

TwoMatrix X_one_morphism(const ModularCategoryData& cat, const DecoratedType& t) {
  TwoMatrix X;
  X.rows = enumerate_tuples(cat, t.m);
  X.cols = enumerate_tuples(cat, t.n);
  std::vector<ColorIndex> zetas = enumerate_indices(cat, t);
  X.entry.assign(X.rows.size(), std::vector<ModuleDesc>(X.cols.size()));
  for (size_t r = 0; r < X.rows.size(); ++r)
    for (size_t c = 0; c < X.cols.size(); ++c) {
      ModuleDesc& mod = X.entry[r][c];
      for (const ColorIndex& z : zetas) {
        std::vector<SignedColor> b = phi_boundary(cat, t, z, X.rows[r], X.cols[c]);
        StateSpace ss = make_state_space(cat, b);
        for (const std::vector<int>& tree : ss.trees[0]) mod.basis.push_back({z, tree});
      }
    }
  return X;
}

TwoMatrix twomatrix_multiply(const ModularCategoryData& cat, const TwoMatrix& A,
                             const TwoMatrix& B) {
  if (A.cols != B.rows)
    throw ShapeMismatch("middle index sets differ: " +
                        std::to_string(A.cols.size()) + " vs " +
                        std::to_string(B.rows.size()));
  TwoMatrix P;
  P.rows = A.rows;
  P.cols = B.cols;
  P.entry.assign(P.rows.size(), std::vector<ModuleDesc>(P.cols.size()));
  for (size_t h = 0; h < P.rows.size(); ++h)
    for (size_t j = 0; j < P.cols.size(); ++j) {
      ModuleDesc& mod = P.entry[h][j];
      for (size_t mid = 0; mid < A.cols.size(); ++mid)
        for (const BasisVector& a : A.entry[h][mid].basis)
          for (const BasisVector& b : B.entry[mid][j].basis) {
            BasisVector v;
            v.zeta.parts = a.zeta.parts;
            v.zeta.parts.push_back(A.cols[mid]);
            v.zeta.parts.insert(v.zeta.parts.end(), b.zeta.parts.begin(),
                                b.zeta.parts.end());
            v.tree = a.tree;
            v.tree.insert(v.tree.end(), b.tree.begin(), b.tree.end());
            mod.basis.push_back(std::move(v));
          }
    }
  return P;
}

TwoHom structural_iso_u(const ModularCategoryData& cat, const DecoratedType& t1,
                        const DecoratedType& t2) {
  DecoratedType comp = compose_types(t1, t2);
  int m = t1.n;
  TwoMatrix X1 = X_one_morphism(cat, t1);
  TwoMatrix X2 = X_one_morphism(cat, t2);
  TwoMatrix Xc = X_one_morphism(cat, comp);
  std::vector<ColorIndex> z1s = enumerate_indices(cat, t1);
  std::vector<ColorIndex> z2s = enumerate_indices(cat, t2);

  TwoHom u;
  u.entry.resize(X1.rows.size());
  for (size_t h = 0; h < X1.rows.size(); ++h) {
    for (size_t j = 0; j < X2.cols.size(); ++j) {
      // Row offsets of the composite module, one run of trees per index.
      std::map<ColorIndex, long> row_at;
      {
        long r = 0;
        for (const BasisVector& v : Xc.entry[h][j].basis) {
          if (!row_at.count(v.zeta)) row_at[v.zeta] = r;
          ++r;
        }
      }
      long total_cols = 0;
      for (size_t mid = 0; mid < X1.cols.size(); ++mid)
        total_cols += X1.entry[h][mid].dim() * X2.entry[mid][j].dim();
      Eigen::MatrixXcd U =
          Eigen::MatrixXcd::Zero(Xc.entry[h][j].dim(), total_cols);

      long base = 0;
      for (size_t mid = 0; mid < X1.cols.size(); ++mid) {
        const std::vector<int>& i = X1.cols[mid];
        long dimB = X2.entry[mid][j].dim();
        // Start offsets of each zeta run inside the factor bases.
        std::map<ColorIndex, long> astart, bstart;
        for (long p = 0; p < X1.entry[h][mid].dim(); ++p) {
          const ColorIndex& z = X1.entry[h][mid].basis[p].zeta;
          if (!astart.count(z)) astart[z] = p;
        }
        for (long p = 0; p < dimB; ++p) {
          const ColorIndex& z = X2.entry[mid][j].basis[p].zeta;
          if (!bstart.count(z)) bstart[z] = p;
        }
        for (const ColorIndex& z1 : z1s)
          for (const ColorIndex& z2 : z2s) {
            std::vector<SignedColor> left =
                phi_boundary(cat, t1, z1, X1.rows[h], i);
            std::vector<SignedColor> right =
                phi_boundary(cat, t2, z2, i, X2.cols[j]);
            RibbonDiagram d;
            d.bottom = boundary_tokens(cat, left);
            std::vector<Token> rt = boundary_tokens(cat, right);
            d.bottom.insert(d.bottom.end(), rt.begin(), rt.end());
            int P = static_cast<int>(left.size());
            Generator cap;
            cap.kind = GenKind::Cap;
            cap.pos = P;
            cap.color = label_token(cat, i[0], +1);
            d.slices.push_back(cap);
            d.top = d.bottom;
            d.top.erase(d.top.begin() + (P - 1), d.top.begin() + (P + 1));
            BlockMorphism f = evaluate_F(cat, d, {});
            if (!f.source.dim(0) || !f.target.dim(0)) continue;

            ColorIndex zc;
            zc.parts = z1.parts;
            std::vector<int> kappa(i.rbegin(), i.rend() - 1);
            zc.parts.push_back(kappa);
            zc.parts.insert(zc.parts.end(), z2.parts.begin(), z2.parts.end());

            long a0 = astart.count(z1) ? astart[z1] : -1;
            long b0 = bstart.count(z2) ? bstart[z2] : -1;
            if (a0 < 0 || b0 < 0) continue;
            long r0 = row_at.at(zc);
            // Factor trees concatenate to bottom trees of the cap diagram.
            for (long c1 = 0; c1 + a0 < X1.entry[h][mid].dim(); ++c1) {
              const BasisVector& av = X1.entry[h][mid].basis[a0 + c1];
              if (!(av.zeta == z1)) break;
              for (long c2 = 0; c2 + b0 < dimB; ++c2) {
                const BasisVector& bv = X2.entry[mid][j].basis[b0 + c2];
                if (!(bv.zeta == z2)) break;
                std::vector<int> cat_tree = av.tree;
                cat_tree.insert(cat_tree.end(), bv.tree.begin(), bv.tree.end());
                long src = f.source.tree_index(0, cat_tree);
                if (src < 0)
                  throw ShapeMismatch("factor tree missing in glued space");
                long col = base + (a0 + c1) * dimB + (b0 + c2);
                for (long r = 0; r < static_cast<long>(f.target.trees[0].size());
                     ++r)
                  U(r0 + r, col) = f.blocks[0](r, src);
              }
            }
          }
        base += X1.entry[h][mid].dim() * dimB;
      }
      u.entry[h].push_back(std::move(U));
    }
  }
  return u;
}

bool is_formal_identity(const RibbonDiagram& d) {
  return d.slices.empty() && d.coupons.empty() && d.bottom == d.top;
}

TwoHom X_two_morphism(const ModularCategoryData& cat, const RibbonDiagram& d,
                      const DecoratedType& t, const DecoratedType& s,
                      int jobs) {
  if (t.m != s.m || t.n != s.n)
    throw TypeMismatch("side counts of source and target types differ");
  int m = t.m, n = t.n;
  VariableSummary vars = diagram_variables(d);
  if (static_cast<int>(vars.through.size()) != m + n)
    throw TypeMismatch("diagram has " + std::to_string(vars.through.size()) +
                       " vertical bands, types need " + std::to_string(m + n));

  std::vector<std::vector<int>> is = enumerate_tuples(cat, m);
  std::vector<std::vector<int>> js = enumerate_tuples(cat, n);
  TwoHom X;
  X.entry.assign(is.size(), std::vector<Eigen::MatrixXcd>(js.size()));
  detail::parallel_for(is.size() * js.size(), jobs, [&](std::size_t cell) {
    size_t r = cell / js.size(), c = cell % js.size();
    std::map<std::string, int> colors;
    for (int k = 0; k < m; ++k) colors[vars.through[k]] = is[r][k];
    // Right bands appear in boundary order j_n .. j_1.
    for (int k = 0; k < n; ++k) colors[vars.through[m + k]] = js[c][n - 1 - k];
    RibbonDiagram colored = substitute_vars(cat, d, colors);
    BlockTable tb = tau_blocks(cat, colored, t, s, 1);

    std::vector<long> rd(tb.target.size(), 0), cd(tb.source.size(), 0);
    for (size_t e = 0; e < tb.target.size(); ++e) rd[e] = tb.entry[e][0].rows();
    for (size_t z = 0; z < tb.source.size(); ++z) cd[z] = tb.entry[0][z].cols();
    long rows = 0, cols = 0;
    for (long v : rd) rows += v;
    for (long v : cd) cols += v;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, cols);
    long ro = 0;
    for (size_t e = 0; e < tb.target.size(); ++e) {
      long co = 0;
      for (size_t z = 0; z < tb.source.size(); ++z) {
        M.block(ro, co, rd[e], cd[z]) = tb.entry[e][z];
        co += cd[z];
      }
      ro += rd[e];
    }
    X.entry[r][c] = std::move(M);
  });
  return X;
}

TwoHom vcompose_twohom(const TwoHom& f, const TwoHom& g) {
  TwoHom out;
  out.entry.resize(f.entry.size());
  for (size_t r = 0; r < f.entry.size(); ++r)
    for (size_t c = 0; c < f.entry[r].size(); ++c) {
      if (g.entry[r][c].cols() != f.entry[r][c].rows())
        throw ShapeMismatch("stacked blocks do not chain");
      out.entry[r].push_back(g.entry[r][c] * f.entry[r][c]);
    }
  return out;
}

TwoHom hcompose_twohom(const ModularCategoryData& cat, const TwoHom& f,
                       const TwoHom& g, const TwoMatrix& Xt1,
                       const TwoMatrix& Xt2, const TwoMatrix& Xs1,
                       const TwoMatrix& Xs2) {
  size_t mids = Xt1.cols.size();
  TwoHom out;
  out.entry.resize(Xt1.rows.size());
  for (size_t h = 0; h < Xt1.rows.size(); ++h)
    for (size_t j = 0; j < Xt2.cols.size(); ++j) {
      long rows = 0, cols = 0;
      for (size_t mid = 0; mid < mids; ++mid) {
        rows += Xs1.entry[h][mid].dim() * Xs2.entry[mid][j].dim();
        cols += Xt1.entry[h][mid].dim() * Xt2.entry[mid][j].dim();
      }
      Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, cols);
      long ro = 0, co = 0;
      for (size_t mid = 0; mid < mids; ++mid) {
        Eigen::MatrixXcd blk = kron(f.entry[h][mid], g.entry[mid][j]);
        M.block(ro, co, blk.rows(), blk.cols()) = blk;
        ro += blk.rows();
        co += blk.cols();
      }
      out.entry[h].push_back(std::move(M));
    }
  (void)cat;
  return out;
}

VerticalResult vertical_compose_X(const ModularCategoryData& cat,
                                  const RibbonDiagram& d1,
                                  const RibbonDiagram& d2,
                                  const DecoratedType& t, const DecoratedType& s,
                                  const DecoratedType& r, int jobs) {
  VerticalResult out;
  bool f1 = is_formal_identity(d1), f2 = is_formal_identity(d2);
  if (f1 || f2) {
    const RibbonDiagram& real = f1 ? d2 : d1;
    const DecoratedType& from = f1 ? s : t;
    const DecoratedType& to = f1 ? r : s;
    out.concat = X_two_morphism(cat, real, from, to, jobs);
    out.chain = out.concat;
    out.anomaly = {};
    out.residual = 0;
    return out;
  }
  RibbonDiagram dc = vertical_concat(d1, d2);
  out.anomaly.sigma1 = signature(trace_surgery(d1).linking);
  out.anomaly.sigma2 = signature(trace_surgery(d2).linking);
  out.anomaly.sigma = signature(trace_surgery(dc).linking);
  out.anomaly.k = ipow(rank_d(cat) / delta_sum(cat),
                       out.anomaly.sigma1 + out.anomaly.sigma2 - out.anomaly.sigma);
  out.concat = X_two_morphism(cat, dc, t, r, jobs);
  TwoHom X1 = X_two_morphism(cat, d1, t, s, jobs);
  TwoHom X2 = X_two_morphism(cat, d2, s, r, jobs);
  out.chain = vcompose_twohom(X1, X2);
  for (auto& row : out.chain.entry)
    for (auto& e : row) e *= out.anomaly.k;
  out.residual = twohom_diff(out.concat, out.chain);
  return out;
}

HorizontalResult horizontal_compose_X(const ModularCategoryData& cat,
                                      const RibbonDiagram& d1,
                                      const RibbonDiagram& d2,
                                      const DecoratedType& t1,
                                      const DecoratedType& s1,
                                      const DecoratedType& t2,
                                      const DecoratedType& s2, int jobs) {
  int m = t1.n;
  if (s1.n != m || t2.m != m || s2.m != m)
    throw TypeMismatch("shared boundary counts disagree");
  DecoratedType tc = compose_types(t1, t2);
  DecoratedType sc = compose_types(s1, s2);
  RibbonDiagram glued = horizontal_assemble(d1, d2, m);

  HorizontalResult out;
  out.composite = X_two_morphism(cat, glued, tc, sc, jobs);
  TwoHom X1 = X_two_morphism(cat, d1, t1, s1, jobs);
  TwoHom X2 = X_two_morphism(cat, d2, t2, s2, jobs);
  TwoHom XX = hcompose_twohom(cat, X1, X2, X_one_morphism(cat, t1),
                              X_one_morphism(cat, t2), X_one_morphism(cat, s1),
                              X_one_morphism(cat, s2));
  TwoHom ut = structural_iso_u(cat, t1, t2);
  TwoHom us = structural_iso_u(cat, s1, s2);
  double worst = 0;
  for (size_t h = 0; h < out.composite.entry.size(); ++h)
    for (size_t j = 0; j < out.composite.entry[h].size(); ++j) {
      Eigen::MatrixXcd lhs = out.composite.entry[h][j] * ut.entry[h][j];
      Eigen::MatrixXcd rhs = us.entry[h][j] * XX.entry[h][j];
      worst = std::max(worst, scaled_diff(lhs, rhs));
    }
  out.residual = worst;
  return out;
}

namespace {

RibbonDiagram cylinder(const std::string& decor = "") {
  return parse_diagram("bottom: $l- $r+\n" + decor + "top: $l- $r+\n");
}

// Disjoint f-framed unknot beside the two bands of a cylinder.
RibbonDiagram cylinder_ring(int f) {
  std::string s = "slice cup[?R] @3\n";
  for (int k = 0; k < std::abs(f); ++k)
    s += f > 0 ? "slice twist+ @3\n" : "slice twist- @3\n";
  s += "slice cap[?R] @3\n";
  return cylinder(s);
}

// Torus-block 2-morphisms with a +1-framed ring around one leg of the top
// cup (or bottom cap).  Stacking ring_top under ring_bottom links both rings
// with the junction circle, so the signature stops being additive.
RibbonDiagram torus_ring_top() {
  return parse_diagram(
      "bottom: $z+ $z-\n"
      "slice cap[$z] @1\n"
      "slice cup[$w] @1\n"
      "slice cup[?R] @1\n"
      "slice twist+ @1\n"
      "slice braid- @2\n"
      "slice braid+ @1\n"
      "slice cap[?R] @2\n"
      "top: $w+ $w-\n");
}

RibbonDiagram torus_ring_bottom() {
  return parse_diagram(
      "bottom: $z+ $z-\n"
      "slice cup[?R] @1\n"
      "slice twist+ @1\n"
      "slice braid- @2\n"
      "slice braid+ @1\n"
      "slice cap[?R] @2\n"
      "slice cap[$z] @1\n"
      "slice cup[$w] @1\n"
      "top: $w+ $w-\n");
}

int sig_of(const std::vector<std::vector<int>>& B) { return signature(B); }

}  // namespace

std::vector<AxiomResult> verify_axioms(const ModularCategoryData& cat,
                                       double tol, int jobs) {
  std::vector<AxiomResult> report;
  DecoratedType t11 = parse_type("(1,1;)");

  {
    // Cocycle: both sides of the anomaly identity carry the same exponent.
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> entry(-3, 3);
    std::uniform_int_distribution<int> size(1, 3);
    int worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<int> dims = {size(rng), size(rng), size(rng)};
      int n = dims[0] + dims[1] + dims[2];
      std::vector<std::vector<int>> L(n, std::vector<int>(n, 0));
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) L[r][c] = L[c][r] = entry(rng);
      auto sub = [&](int from, int to) {
        std::vector<std::vector<int>> S;
        for (int r = from; r < to; ++r)
          S.push_back(std::vector<int>(L[r].begin() + from, L[r].begin() + to));
        return S;
      };
      int b1 = dims[0], b2 = dims[0] + dims[1];
      int s1 = sig_of(sub(0, b1)), s2 = sig_of(sub(b1, b2));
      int s3 = sig_of(sub(b2, n));
      int s12 = sig_of(sub(0, b2)), s23 = sig_of(sub(b1, n));
      int s123 = sig_of(sub(0, n));
      int lhs = (s1 + s23 - s123) + (s2 + s3 - s23);
      int rhs = (s12 + s3 - s123) + (s1 + s2 - s12);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    report.push_back({"anomaly-cocycle", worst == 0, double(worst)});
  }

  {
    double worst = 0;
    std::vector<std::pair<RibbonDiagram, RibbonDiagram>> samples = {
        {cylinder(), cylinder_ring(1)},
        {cylinder_ring(-1), cylinder("slice twist+ @2\n")},
        {cylinder_ring(1), cylinder_ring(1)},
    };
    for (const auto& [a, b] : samples)
      worst = std::max(
          worst, vertical_compose_X(cat, a, b, t11, t11, t11, jobs).residual);
    report.push_back({"vertical-projectivity", worst < tol, worst});
  }

  {
    DecoratedType torus = parse_type("(0,0;1)");
    VerticalResult v =
        vertical_compose_X(cat, torus_ring_top(), torus_ring_bottom(), torus,
                           torus, torus, jobs);
    int expo = v.anomaly.sigma1 + v.anomaly.sigma2 - v.anomaly.sigma;
    bool pass = v.residual < tol && expo == 1;
    report.push_back({"vertical-anomaly-sample", pass, v.residual});
  }

  {
    RibbonDiagram formal = cylinder();
    formal.slices.clear();
    RibbonDiagram d = cylinder_ring(1);
    VerticalResult a = vertical_compose_X(cat, formal, d, t11, t11, t11, jobs);
    VerticalResult b = vertical_compose_X(cat, d, formal, t11, t11, t11, jobs);
    bool pass = a.anomaly.k == Scalar(1.0) && b.anomaly.k == Scalar(1.0);
    double worst = std::max(
        {a.residual, b.residual,
         twohom_diff(a.concat, X_two_morphism(cat, d, t11, t11, jobs))});
    report.push_back({"identity-units", pass && worst < tol, worst});
  }

  {
    RibbonDiagram f11 = cylinder(), f12 = cylinder("slice twist+ @2\n");
    RibbonDiagram f21 = cylinder("slice twist- @1\n"), f22 = cylinder();
    RibbonDiagram hv = vertical_concat(horizontal_assemble(f11, f12, 1),
                                       horizontal_assemble(f21, f22, 1));
    RibbonDiagram vh = horizontal_assemble(vertical_concat(f11, f21),
                                           vertical_concat(f12, f22), 1);
    DecoratedType tc = compose_types(t11, t11);
    TwoHom a = X_two_morphism(cat, hv, tc, tc, jobs);
    TwoHom b = X_two_morphism(cat, vh, tc, tc, jobs);
    double worst = twohom_diff(a, b);
    report.push_back({"interchange", worst < tol, worst});
  }

  {
    double worst = horizontal_compose_X(cat, cylinder(), cylinder(), t11, t11,
                                        t11, t11, jobs)
                       .residual;
    worst = std::max(worst, horizontal_compose_X(
                                cat, cylinder(), cylinder("slice twist+ @2\n"),
                                t11, t11, t11, t11, jobs)
                                .residual);
    DecoratedType t12 = parse_type("(1,2;)");
    DecoratedType t21 = parse_type("(2,1;)");
    RibbonDiagram id12 = parse_diagram("bottom: $l- $b+ $a+\ntop: $l- $b+ $a+\n");
    RibbonDiagram id21 =
        parse_diagram("bottom: $a- $b- $r+\ntop: $a- $b- $r+\n");
    worst = std::max(worst, horizontal_compose_X(cat, id12, id21, t12, t12, t21,
                                                 t21, jobs)
                                .residual);
    report.push_back({"horizontal-intertwining", worst < tol, worst});
  }

  {
    double smin = 1e9;
    for (const auto& [a, b] :
         std::vector<std::pair<std::string, std::string>>{
             {"(1,1;)", "(1,1;)"}, {"(1,2;)", "(2,1;)"}, {"(2,1;)", "(1,2;)"}}) {
      TwoHom u = structural_iso_u(cat, parse_type(a), parse_type(b));
      for (const auto& row : u.entry)
        for (const Eigen::MatrixXcd& e : row) {
          if (!e.size()) continue;
          Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
          if (svd.singularValues().size())
            smin = std::min(smin, svd.singularValues().minCoeff());
        }
    }
    report.push_back({"u-invertible", smin > 1e-6, smin});
  }

  return report;
}

}  // namespace ribcat
