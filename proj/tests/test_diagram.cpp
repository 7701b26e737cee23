#include <doctest.h>

#include <cmath>

#include "ribcat/errors.hpp"
#include "ribcat/evaluate.hpp"

using namespace ribcat;

namespace {

ModularCategoryData bundled(const std::string& name) {
  return load_category_file(std::string(RIBCAT_DATA_DIR) + "/" + name + ".mtc");
}

double block_diff(const BlockMorphism& f, const BlockMorphism& g) {
  double worst = 0;
  for (size_t k = 0; k < f.blocks.size(); ++k) {
    if (f.blocks[k].rows() != g.blocks[k].rows() ||
        f.blocks[k].cols() != g.blocks[k].cols())
      return 1e9;
    if (f.blocks[k].size())
      worst = std::max(worst, (f.blocks[k] - g.blocks[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

// The one scalar of a closed diagram evaluation.
Scalar closed_value(const ModularCategoryData& cat, const RibbonDiagram& d,
                    const Coloring& col = {}) {
  BlockMorphism f = evaluate_F(cat, d, col);
  REQUIRE(f.blocks[0].rows() == 1);
  REQUIRE(f.blocks[0].cols() == 1);
  return f.blocks[0](0, 0);
}

}  // namespace

TEST_CASE("DSL parses boundaries, slices and comments") {
  RibbonDiagram d = parse_diagram(
      "# a braid on two strands\n"
      "bottom: t+ t+\n"
      "slice braid+ @1\n"
      "slice id\n"
      "top: t+ t+\n");
  CHECK(d.bottom.size() == 2);
  CHECK(d.slices.size() == 2);
  CHECK(d.slices[0].kind == GenKind::BraidP);
  CHECK(d.slices[0].pos == 1);
  CHECK(d.slices[0].line == 3);

  // Bare variables: first occurrence +, second -.
  RibbonDiagram v = parse_diagram("bottom: $a $a\nslice cap[$a] @1\ntop:\n");
  CHECK(v.bottom[0] == Token{TokenKind::Rainbow, "a", +1});
  CHECK(v.bottom[1] == Token{TokenKind::Rainbow, "a", -1});

  // Explicit-signed variables override inference.
  RibbonDiagram w =
      parse_diagram("bottom: $a- $b+\nslice braid+ @1\ntop: $b+ $a-\n");
  CHECK(w.bottom[0].sign == -1);
  CHECK(w.top[1].name == "a");
}

TEST_CASE("DSL rejects malformed input with line numbers") {
  auto line_of = [](const char* text) -> std::string {
    try {
      parse_diagram(text);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  CHECK(line_of("bottom: t+\nslice wobble @1\ntop: t+\n").find("line 2") !=
        std::string::npos);
  CHECK(line_of("bottom: t+\nslice braid+ @1\ntop: t+\n").find("line 2") !=
        std::string::npos);  // braid needs two strands
  CHECK(line_of("bottom: t+ t+\ntop: t+ t-\n").find("position 2") !=
        std::string::npos);

  CHECK_THROWS_AS(parse_diagram("bottom: t+\ntop: t+ t+\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("top: t+\nbottom: t+\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("bottom: t+\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("bottom: $a $a $a\ntop:\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("bottom: t\ntop: t\n"), ParseError);
  CHECK_THROWS_AS(
      parse_diagram("bottom: t+ t-\nslice cap[s] @1\ntop:\n"), ParseError);
  CHECK_THROWS_AS(
      parse_diagram("bottom: t+ t+\nslice cap[t] @1\ntop:\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("bottom: t+\nslice twist+ @4\ntop: t+\n"),
                  StrandCountError);

  // Surgery strands may not touch the boundary.
  CHECK_THROWS_AS(parse_diagram("bottom: ?A\ntop: ?A\n"),
                  UnclosedSurgeryComponent);
  CHECK_THROWS_AS(parse_diagram("bottom:\nslice cup[?A] @1\ntop: ?A ?A\n"),
                  UnclosedSurgeryComponent);

  // A variable must either pair up or run through.
  CHECK_THROWS_AS(parse_diagram("bottom: $a $a\ntop: $a $a\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("bottom: $a t+\ntop: $a- t+\n"), ParseError);
}

TEST_CASE("diagram text round-trips") {
  const char* text =
      "bottom: $z $z\n"
      "slice cup[?A] @2\n"
      "slice braid+ @3\n"
      "slice braid- @2\n"
      "slice cap[?A] @3\n"
      "slice cap[$z] @1\n"
      "top:\n";
  RibbonDiagram d = parse_diagram(text);
  RibbonDiagram d2 = parse_diagram(diagram_to_string(d));
  CHECK(d.bottom == d2.bottom);
  CHECK(d.top == d2.top);
  REQUIRE(d.slices.size() == d2.slices.size());
  for (size_t k = 0; k < d.slices.size(); ++k) {
    CHECK(d.slices[k].kind == d2.slices[k].kind);
    CHECK(d.slices[k].pos == d2.slices[k].pos);
    CHECK(d.slices[k].color == d2.slices[k].color);
  }
}

TEST_CASE("standard half-graphs have the module boundary shape") {
  ModularCategoryData fib = bundled("fibonacci");
  int t = fib.find_label("t");

  RibbonDiagram empty = build_rt(fib, parse_type("(0,0;)"), {}, {});
  CHECK(empty.bottom.empty());
  CHECK(empty.slices.empty());
  CHECK(empty.top.empty());

  RibbonDiagram strip = build_rt(fib, parse_type("(1,1;)"), {t}, {t});
  REQUIRE(strip.bottom.size() == 2);
  CHECK(strip.bottom[0] == Token{TokenKind::Colored, "t", -1});
  CHECK(strip.bottom[1] == Token{TokenKind::Colored, "t", +1});
  CHECK(strip.slices.empty());
  CHECK(strip.top == strip.bottom);

  RibbonDiagram torus = build_rt(fib, parse_type("(0,0; 1)"), {}, {});
  REQUIRE(torus.bottom.size() == 2);
  CHECK(torus.bottom[0].kind == TokenKind::Rainbow);
  CHECK(torus.bottom[0].name == torus.bottom[1].name);
  CHECK(torus.slices.size() == 1);
  CHECK(torus.slices[0].kind == GenKind::Cap);
  CHECK(torus.top.empty());
  VariableSummary vs = diagram_variables(torus);
  CHECK(vs.bottom_pairs.size() == 1);

  // Genus 2 entry: nested rainbow, caps innermost first.
  RibbonDiagram g2 = build_rt(fib, parse_type("(1,0; 2)"), {t}, {});
  REQUIRE(g2.bottom.size() == 5);
  CHECK(g2.bottom[1].name == g2.bottom[4].name);
  CHECK(g2.bottom[2].name == g2.bottom[3].name);
  REQUIRE(g2.slices.size() == 2);
  CHECK(g2.slices[0].color.name == g2.bottom[2].name);
  CHECK(g2.top == std::vector<Token>{Token{TokenKind::Colored, "t", -1}});

  CHECK_THROWS_AS(build_rt(fib, parse_type("(1,1;)"), {}, {t}),
                  IndexArityMismatch);
}

TEST_CASE("omega gadgets have the documented shape") {
  RibbonDiagram w0 = build_omega(0);
  CHECK(w0.bottom.empty());
  CHECK(w0.slices.empty());

  RibbonDiagram w1 = build_omega(1);
  CHECK(w1.bottom.size() == 2);
  CHECK(w1.top.size() == 2);
  VariableSummary vs1 = diagram_variables(w1);
  CHECK(vs1.bottom_pairs.size() == 1);
  CHECK(vs1.top_pairs.size() == 1);

  RibbonDiagram w2 = build_omega(2);
  CHECK(w2.bottom.size() == 4);
  CHECK(w2.top.size() == 4);
  VariableSummary vs2 = diagram_variables(w2);
  CHECK(vs2.bottom_pairs.size() == 2);
  CHECK(vs2.top_pairs.size() == 2);
  // Nested order: first bottom variable outermost on top as well.
  CHECK(w2.top[0].name == "y1");
  CHECK(w2.top[1].name == "y2");
  int rings = 0;
  for (const Generator& g : w2.slices)
    if (g.kind == GenKind::Cup && g.color.kind == TokenKind::Surgery) ++rings;
  CHECK(rings == 2);
}

TEST_CASE("evaluation reproduces twists, loops and zig-zags") {
  for (const char* name : {"semion", "fibonacci"}) {
    ModularCategoryData cat = bundled(name);
    for (int c = 0; c < cat.rank(); ++c) {
      const std::string L = cat.labels[c];
      CAPTURE(name);
      CAPTURE(L);

      // Identity strand.
      RibbonDiagram idd = parse_diagram("bottom: " + L + "+\ntop: " + L + "+\n");
      BlockMorphism f = evaluate_F(cat, idd, {});
      CHECK(block_diff(f, identity_morphism(f.source)) < 1e-12);

      // Twist eigenvalue.
      RibbonDiagram tw = parse_diagram("bottom: " + L + "+\nslice twist+ @1\ntop: " +
                                       L + "+\n");
      CHECK(std::abs(evaluate_F(cat, tw, {}).blocks[c](0, 0) - cat.twist[c]) <
            1e-12);

      // Unknot: cup then cap.
      RibbonDiagram circ = parse_diagram("bottom:\nslice cup[" + L +
                                         "] @1\nslice cap[" + L + "] @1\ntop:\n");
      CHECK(std::abs(closed_value(cat, circ) - cat.qdim[c]) < 1e-12);

      // Both zig-zags are exact.
      RibbonDiagram zig = parse_diagram("bottom: " + L + "+\nslice cup[" + L +
                                        "] @1\nslice cap[" + L + "] @2\ntop: " +
                                        L + "+\n");
      BlockMorphism fz = evaluate_F(cat, zig, {});
      CHECK(block_diff(fz, identity_morphism(fz.source)) < 1e-12);

      RibbonDiagram zag = parse_diagram("bottom: " + L + "-\nslice cup[" + L +
                                        "] @2\nslice cap[" + L + "] @1\ntop: " +
                                        L + "-\n");
      BlockMorphism fz2 = evaluate_F(cat, zag, {});
      CHECK(block_diff(fz2, identity_morphism(fz2.source)) < 1e-12);
    }
  }
}

TEST_CASE("braids satisfy the ribbon identities") {
  for (const char* name : {"semion", "fibonacci"}) {
    ModularCategoryData cat = bundled(name);
    for (int i = 0; i < cat.rank(); ++i)
      for (int j = 0; j < cat.rank(); ++j)
        for (int si : {+1, -1})
          for (int sj : {+1, -1}) {
            CAPTURE(name);
            std::string bi = cat.labels[i] + (si > 0 ? "+" : "-");
            std::string bj = cat.labels[j] + (sj > 0 ? "+" : "-");
            RibbonDiagram d = parse_diagram("bottom: " + bi + " " + bj +
                                            "\nslice braid+ @1\nslice braid- @1\n"
                                            "top: " + bi + " " + bj + "\n");
            BlockMorphism f = evaluate_F(cat, d, {});
            CHECK(block_diff(f, identity_morphism(f.source)) < 1e-10);
          }

    // Monodromy eigenvalues: v_k / (v_i v_j) on charge k (balancing).
    for (int i = 0; i < cat.rank(); ++i)
      for (int j = 0; j < cat.rank(); ++j) {
        RibbonDiagram d = parse_diagram(
            "bottom: " + cat.labels[i] + "+ " + cat.labels[j] +
            "+\nslice braid+ @1\nslice braid+ @1\ntop: " + cat.labels[i] +
            "+ " + cat.labels[j] + "+\n");
        BlockMorphism f = evaluate_F(cat, d, {});
        for (int k = 0; k < cat.rank(); ++k) {
          if (!f.blocks[k].size()) continue;
          Scalar want = cat.twist[k] / (cat.twist[i] * cat.twist[j]);
          CHECK((f.blocks[k] -
                 want * Eigen::MatrixXcd::Identity(f.blocks[k].rows(),
                                                   f.blocks[k].cols()))
                    .cwiseAbs()
                    .maxCoeff() < 1e-10);
        }
      }
  }
}

TEST_CASE("framing: twists match kinked strands") {
  // A positive kink (braid then cap on a cup pair) equals a positive twist.
  for (const char* name : {"semion", "fibonacci"}) {
    ModularCategoryData cat = bundled(name);
    for (int c = 1; c < cat.rank(); ++c) {
      const std::string L = cat.labels[c];
      // Closed unknot with one positive twist = v_c * d_c.
      RibbonDiagram d = parse_diagram("bottom:\nslice cup[" + L +
                                      "] @1\nslice twist+ @1\nslice cap[" + L +
                                      "] @1\ntop:\n");
      CHECK(std::abs(closed_value(cat, d) - cat.twist[c] * cat.qdim[c]) <
            1e-12);
      // Twist on either leg of the cup agrees (rotational symmetry).
      RibbonDiagram d2 = parse_diagram("bottom:\nslice cup[" + L +
                                       "] @1\nslice twist+ @2\nslice cap[" + L +
                                       "] @1\ntop:\n");
      CHECK(std::abs(closed_value(cat, d2) - cat.twist[c] * cat.qdim[c]) <
            1e-12);
    }
  }
}

TEST_CASE("surgery rings act by the S-matrix") {
  for (const char* name : {"semion", "fibonacci"}) {
    ModularCategoryData cat = bundled(name);
    Eigen::MatrixXcd S = s_matrix(cat);
    for (int c = 0; c < cat.rank(); ++c) {
      RibbonDiagram d;
      d.bottom = {Token{TokenKind::Colored, cat.labels[c], +1}};
      d.top = d.bottom;
      append_ring(d, "A", 1, 1);
      validate_diagram(d);
      for (int a = 0; a < cat.rank(); ++a) {
        Coloring col;
        col.surgery["A"] = a;
        BlockMorphism f = evaluate_F(cat, d, col);
        Scalar got = f.blocks[c](0, 0);
        Scalar want = S(a, c) / cat.qdim[c];
        CAPTURE(name);
        CHECK(std::abs(got - want) < 1e-10);
      }
    }
  }
}

TEST_CASE("encircling sum projects onto the matching color") {
  for (const char* name : {"semion", "fibonacci"}) {
    ModularCategoryData cat = bundled(name);
    Scalar D2 = rank_d(cat) * rank_d(cat);
    for (int i = 0; i < cat.rank(); ++i)
      for (int j = 0; j < cat.rank(); ++j)
        for (int init = 0; init < cat.rank(); ++init) {
          CAPTURE(name);
          CAPTURE(i);
          CAPTURE(j);
          CAPTURE(init);
          RibbonDiagram d;
          d.bottom = {Token{TokenKind::Colored, cat.labels[j], +1},
                      Token{TokenKind::Colored, cat.labels[i], -1}};
          d.top = d.bottom;
          append_ring(d, "A", 1, 2);
          validate_diagram(d);

          BlockMorphism total;
          for (int a = 0; a < cat.rank(); ++a) {
            Coloring col;
            col.surgery["A"] = a;
            BlockMorphism f = evaluate_F_rel(cat, d, col, init);
            if (a == 0) {
              total = f;
              for (auto& b : total.blocks) b *= cat.qdim[0];
            } else {
              for (size_t k = 0; k < total.blocks.size(); ++k)
                total.blocks[k] += cat.qdim[a] * f.blocks[k];
            }
          }

          BlockMorphism expect;
          if (i == j) {
            RibbonDiagram pr = parse_diagram(
                "bottom: " + cat.labels[i] + "+ " + cat.labels[i] +
                "-\nslice cap[" + cat.labels[i] + "] @1\nslice cup[" +
                cat.labels[i] + "] @1\ntop: " + cat.labels[i] + "+ " +
                cat.labels[i] + "-\n");
            expect = evaluate_F_rel(cat, pr, {}, init);
            Scalar w = D2 / cat.qdim[i];
            for (auto& b : expect.blocks) b *= w;
          } else {
            expect = total;
            for (auto& b : expect.blocks) b.setZero();
          }
          CHECK(block_diff(total, expect) < 1e-8);
        }
  }
}

TEST_CASE("omega gadget averages to the identity") {
  for (const char* name : {"semion", "fibonacci"}) {
    ModularCategoryData cat = bundled(name);
    double D2 = std::abs(rank_d(cat) * rank_d(cat));

    // n = 1.
    RibbonDiagram w1 = build_omega(1);
    for (int z = 0; z < cat.rank(); ++z)
      for (int y = 0; y < cat.rank(); ++y) {
        CAPTURE(name);
        CAPTURE(z);
        CAPTURE(y);
        Eigen::MatrixXcd sum;
        for (int a = 0; a < cat.rank(); ++a) {
          Coloring col;
          col.rainbow = {{"z1", z}, {"y1", y}};
          col.surgery = {{"A1", a}};
          Eigen::MatrixXcd F = evaluate_F(cat, w1, col).blocks[0];
          if (a == 0)
            sum = cat.qdim[a] * F;
          else
            sum += cat.qdim[a] * F;
        }
        sum *= cat.qdim[y] / D2;
        Eigen::MatrixXcd want =
            (z == y) ? Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())
                     : Eigen::MatrixXcd::Zero(sum.rows(), sum.cols()).eval();
        CHECK((sum - want).cwiseAbs().maxCoeff() < 1e-8);
      }

    // n = 2, all index pairs, lambda pairs summed.
    RibbonDiagram w2 = build_omega(2);
    for (int z1 = 0; z1 < cat.rank(); ++z1)
      for (int z2 = 0; z2 < cat.rank(); ++z2)
        for (int y1 = 0; y1 < cat.rank(); ++y1)
          for (int y2 = 0; y2 < cat.rank(); ++y2) {
            CAPTURE(name);
            CAPTURE(z1);
            CAPTURE(z2);
            CAPTURE(y1);
            CAPTURE(y2);
            Eigen::MatrixXcd sum;
            bool first = true;
            for (int a1 = 0; a1 < cat.rank(); ++a1)
              for (int a2 = 0; a2 < cat.rank(); ++a2) {
                Coloring col;
                col.rainbow = {{"z1", z1}, {"z2", z2}, {"y1", y1}, {"y2", y2}};
                col.surgery = {{"A1", a1}, {"A2", a2}};
                Eigen::MatrixXcd F = evaluate_F(cat, w2, col).blocks[0];
                Scalar w = cat.qdim[a1] * cat.qdim[a2];
                if (first) {
                  sum = w * F;
                  first = false;
                } else {
                  sum += w * F;
                }
              }
            sum *= cat.qdim[y1] * cat.qdim[y2] / (D2 * D2);
            Eigen::MatrixXcd want =
                (z1 == y1 && z2 == y2)
                    ? Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())
                    : Eigen::MatrixXcd::Zero(sum.rows(), sum.cols()).eval();
            CHECK((sum - want).cwiseAbs().maxCoeff() < 1e-8);
          }
  }
}

TEST_CASE("vertical stacking is functorial") {
  ModularCategoryData fib = bundled("fibonacci");
  RibbonDiagram a = parse_diagram(
      "bottom: t+ t+\nslice braid+ @1\nslice twist+ @2\ntop: t+ t+\n");
  RibbonDiagram b = parse_diagram(
      "bottom: t+ t+\nslice cup[t] @2\nslice braid- @3\ntop: t+ t+ t+ t-\n");
  RibbonDiagram ab = vertical_concat(a, b);
  BlockMorphism fa = evaluate_F(fib, a, {});
  BlockMorphism fb = evaluate_F(fib, b, {});
  BlockMorphism fab = evaluate_F(fib, ab, {});
  CHECK(block_diff(fab, compose(fa, fb)) < 1e-10);

  // Identity diagram is neutral.
  RibbonDiagram idd = parse_diagram("bottom: t+ t+\ntop: t+ t+\n");
  RibbonDiagram ida = vertical_concat(idd, a);
  CHECK(block_diff(evaluate_F(fib, ida, {}), fa) < 1e-12);

  CHECK_THROWS_AS(
      vertical_concat(a, parse_diagram("bottom: t+ t-\ntop: t+ t-\n")),
      BoundaryTypeMismatch);
  CHECK_THROWS_AS(
      vertical_concat(a, parse_diagram("bottom: t+\ntop: t+\n")),
      BoundaryTypeMismatch);
}

TEST_CASE("stacking a cup pair onto a cap pair closes a surgery circle") {
  ModularCategoryData fib = bundled("fibonacci");
  RibbonDiagram up = parse_diagram("bottom:\nslice cup[$a] @1\ntop: $a $a\n");
  RibbonDiagram down = parse_diagram("bottom: $b $b\nslice cap[$b] @1\ntop:\n");
  RibbonDiagram closed = vertical_concat(up, down);
  CHECK(closed.bottom.empty());
  CHECK(closed.top.empty());
  VariableSummary vs = diagram_variables(closed);
  CHECK(vs.bottom_pairs.empty());
  CHECK(vs.top_pairs.empty());
  CHECK(vs.through.empty());
  // One fresh surgery component; coloring it by c gives the loop value.
  std::string sname;
  for (const Generator& g : closed.slices)
    if (g.kind == GenKind::Cup) {
      REQUIRE(g.color.kind == TokenKind::Surgery);
      sname = g.color.name;
    }
  REQUIRE(!sname.empty());
  for (int c = 0; c < fib.rank(); ++c) {
    Coloring col;
    col.surgery[sname] = c;
    CHECK(std::abs(closed_value(fib, closed, col) - fib.qdim[c]) < 1e-10);
  }

  // Through variables are identified by name across the junction.
  RibbonDiagram t1 = parse_diagram("bottom: $v t+\ntop: $v t+\n");
  RibbonDiagram t2 = parse_diagram("bottom: $w t+\nslice twist+ @2\ntop: $w t+\n");
  RibbonDiagram t12 = vertical_concat(t1, t2);
  VariableSummary vt = diagram_variables(t12);
  REQUIRE(vt.through.size() == 1);
  CHECK(vt.through[0] == "v");
}

TEST_CASE("tensored diagrams factor through relative evaluations") {
  ModularCategoryData fib = bundled("fibonacci");
  RibbonDiagram a = parse_diagram("bottom: t+ t+\nslice braid+ @1\ntop: t+ t+\n");
  RibbonDiagram b = parse_diagram(
      "bottom: t+ t-\nslice twist- @1\nslice cap[t] @1\nslice cup[t] @1\n"
      "top: t+ t-\n");
  RibbonDiagram ab = tensor_diagram(a, b);
  BlockMorphism f = evaluate_F(fib, ab, {});
  BlockMorphism fa = evaluate_F(fib, a, {});

  for (int k = 0; k < fib.rank(); ++k) {
    for (int r = 0; r < f.blocks[k].rows(); ++r)
      for (int c = 0; c < f.blocks[k].cols(); ++c) {
        const std::vector<int>& tr_t = f.target.trees[k][r];
        const std::vector<int>& tr_s = f.source.trees[k][c];
        // Split the trees at the boundary between the two factors.
        size_t n1 = a.bottom.size();
        int mid_t = tr_t[n1 - 1], mid_s = tr_s[n1 - 1];
        Scalar want = 0.0;
        if (mid_t == mid_s) {
          std::vector<int> t1(tr_t.begin(), tr_t.begin() + n1);
          std::vector<int> s1(tr_s.begin(), tr_s.begin() + n1);
          std::vector<int> t2(tr_t.begin() + n1, tr_t.end());
          std::vector<int> s2(tr_s.begin() + n1, tr_s.end());
          BlockMorphism fb = evaluate_F_rel(fib, b, {}, mid_s);
          long i1 = fa.target.tree_index(mid_t, t1);
          long j1 = fa.source.tree_index(mid_s, s1);
          long i2 = fb.target.tree_index(k, t2);
          long j2 = fb.source.tree_index(k, s2);
          REQUIRE(i1 >= 0);
          REQUIRE(j1 >= 0);
          REQUIRE(i2 >= 0);
          REQUIRE(j2 >= 0);
          want = fa.blocks[mid_s](i1, j1) * fb.blocks[k](i2, j2);
        }
        CHECK(std::abs(f.blocks[k](r, c) - want) < 1e-8);
      }
  }
}

TEST_CASE("horizontal gluing removes the shared bands") {
  ModularCategoryData fib = bundled("fibonacci");
  int t = fib.find_label("t");
  DecoratedType t11 = parse_type("(1,1;)");
  RibbonDiagram r1 = build_rt(fib, t11, {t}, {t});
  RibbonDiagram r2 = build_rt(fib, t11, {t}, {t});
  RibbonDiagram glued = horizontal_assemble(r1, r2, 1);
  CHECK(glued.bottom.size() == 2);
  CHECK(glued.top.size() == 2);
  CHECK(glued.slices.empty());

  // m = 2: the middle band pair turns into an omega_1 handle.
  RibbonDiagram a = build_rt(fib, parse_type("(1,2;)"), {t}, {t, t});
  RibbonDiagram b = build_rt(fib, parse_type("(2,1;)"), {t, t}, {t});
  RibbonDiagram ab = horizontal_assemble(a, b, 2);
  CHECK(ab.bottom.size() == 4);
  // The middle band keeps its top exits; the composite matches the glued
  // type with that slot colored.
  CHECK(ab.top.size() == 4);
  VariableSummary vs = diagram_variables(ab);
  CHECK(vs.bottom_pairs.size() == 1);  // the handle slot of (1,1; 1)
  int rings = 0;
  for (const Generator& g : ab.slices)
    if (g.kind == GenKind::Cup && g.color.kind == TokenKind::Surgery) ++rings;
  CHECK(rings == 1);

  // A surgery ring tangled with the glued band is rejected.  d2's shared
  // band is its first column, d1's is its last.
  RibbonDiagram ringed = build_rt(fib, t11, {t}, {t});
  append_ring(ringed, "R", 1, 1);
  validate_diagram(ringed);
  CHECK_THROWS_AS(horizontal_assemble(r1, ringed, 1), TangledBoundaryBand);
  RibbonDiagram ringed1 = build_rt(fib, t11, {t}, {t});
  append_ring(ringed1, "R", 2, 1);
  validate_diagram(ringed1);
  CHECK_THROWS_AS(horizontal_assemble(ringed1, r2, 1), TangledBoundaryBand);
}
