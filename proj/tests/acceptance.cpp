// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ribcat/category.hpp"
#include "ribcat/errors.hpp"
#include "ribcat/tqft.hpp"

using namespace ribcat;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(int num, const char* what, bool pass, const std::string& detail) {
  printf("criterion %2d %-4s %s (%s)\n", num, pass ? "PASS" : "FAIL", what,
         detail.c_str());
  if (!pass) ++failures;
}

ModularCategoryData bundled(const std::string& name) {
  return load_category_file(std::string(RIBCAT_DATA_DIR) + "/" + name + ".mtc");
}

const std::vector<std::string> kAll = {"trivial", "semion", "fibonacci"};

RibbonDiagram closed_diagram(const std::string& slices) {
  return parse_diagram("bottom:\n" + slices + "top:\n");
}

RibbonDiagram unknot(int framing) {
  std::string s = "slice cup[?A] @1\n";
  for (int k = 0; k < std::abs(framing); ++k)
    s += framing > 0 ? "slice twist+ @1\n" : "slice twist- @1\n";
  s += "slice cap[?A] @1\n";
  return closed_diagram(s);
}

RibbonDiagram hopf() {
  return closed_diagram(
      "slice cup[?A] @1\nslice cup[?B] @2\nslice braid+ @3\nslice braid+ @3\n"
      "slice cap[?B] @2\nslice cap[?A] @1\n");
}

void criterion1() {
  bool pass = true;
  std::ostringstream d;
  for (const auto& name : kAll) {
    auto cat = bundled(name);
    auto t0 = Clock::now();
    double worst = 0;
    for (const AxiomCheck& a : axiom_residuals(cat))
      worst = std::max(worst, a.residual);
    double ms = ms_since(t0);
    pass = pass && worst < 1e-9 && ms < 1000;
    d << name << " " << worst << " " << ms << "ms  ";
  }
  report(1, "category consistency < 1e-9, < 1s", pass, d.str());
}

void criterion2() {
  bool pass = true;
  std::ostringstream d;
  for (const auto& name : kAll) {
    auto cat = bundled(name);
    Scalar D = rank_d(cat);
    double dev = std::abs(delta_sum(cat) * std::conj(delta_sum(cat)) - D * D);
    pass = pass && dev < 1e-8;
    d << name << " " << dev << "  ";
  }
  report(2, "|Delta conj(Delta) - D^2| < 1e-8", pass, d.str());
}

void criterion3() {
  bool pass = true;
  std::ostringstream d;
  for (const auto& name : kAll) {
    auto cat = bundled(name);
    Scalar Dinv = 1.0 / rank_d(cat);
    std::vector<std::pair<RibbonDiagram, Scalar>> cases = {
        {closed_diagram(""), Dinv},
        {unknot(0), Scalar(1.0)},
        {unknot(1), Dinv},
        {unknot(-1), Dinv}};
    double worst = 0, slowest = 0;
    for (const auto& [diag, want] : cases) {
      auto t0 = Clock::now();
      worst = std::max(worst, std::abs(tau_closed(cat, diag) - want));
      slowest = std::max(slowest, ms_since(t0));
    }
    pass = pass && worst < 1e-8 && slowest < 1000;
    d << name << " " << worst << " " << slowest << "ms  ";
  }
  report(3, "tau of empty / 0- / +1- / -1-unknot", pass, d.str());
}

void criterion4() {
  bool pass = true;
  std::ostringstream d;
  for (const auto& name : kAll) {
    auto cat = bundled(name);
    Scalar D = rank_d(cat);
    std::vector<RibbonDiagram> pool = {unknot(0), unknot(1), unknot(-1),
                                       hopf()};
    double worst = 0;
    for (const RibbonDiagram& a : pool)
      for (const RibbonDiagram& b : pool) {
        Scalar lhs = tau_closed(cat, tensor_diagram(a, b));
        Scalar rhs = D * tau_closed(cat, a) * tau_closed(cat, b);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    pass = pass && worst < 1e-8;
    d << name << " " << worst << "  ";
  }
  report(4, "connected-sum multiplicativity D tau tau", pass, d.str());
}

void criterion5() {
  bool pass = true;
  double worst = 0;
  auto t0 = Clock::now();
  for (const char* name : {"semion", "fibonacci"}) {
    auto cat = bundled(name);
    Scalar D2 = rank_d(cat) * rank_d(cat);
    for (int n = 1; n <= 2; ++n) {
      RibbonDiagram w = build_omega(n);
      std::vector<std::string> zv, yv, av;
      for (int l = 1; l <= n; ++l) {
        zv.push_back("z" + std::to_string(l));
        yv.push_back("y" + std::to_string(l));
        av.push_back("A" + std::to_string(l));
      }
      for (const auto& zt : enumerate_tuples(cat, n))
        for (const auto& yt : enumerate_tuples(cat, n)) {
          Eigen::MatrixXcd sum;
          bool first = true;
          for (const auto& at : enumerate_tuples(cat, n)) {
            Coloring col;
            Scalar w_a = 1.0;
            for (int l = 0; l < n; ++l) {
              col.rainbow[zv[l]] = zt[l];
              col.rainbow[yv[l]] = yt[l];
              col.surgery[av[l]] = at[l];
              w_a *= cat.qdim[at[l]];
            }
            Eigen::MatrixXcd F = evaluate_F(cat, w, col).blocks[0];
            if (first) {
              sum = w_a * F;
              first = false;
            } else {
              sum += w_a * F;
            }
          }
          Scalar w_y = 1.0;
          for (int l = 0; l < n; ++l) w_y *= cat.qdim[yt[l]];
          sum *= w_y / ipow(D2, n);
          Eigen::MatrixXcd want = (zt == yt)
                                      ? Eigen::MatrixXcd::Identity(sum.rows(),
                                                                   sum.cols())
                                      : Eigen::MatrixXcd::Zero(sum.rows(),
                                                               sum.cols())
                                            .eval();
          if (sum.size())
            worst = std::max(worst, (sum - want).cwiseAbs().maxCoeff());
        }
    }
  }
  double ms = ms_since(t0);
  pass = worst < 1e-8 && ms < 30000;
  std::ostringstream d;
  d << "worst " << worst << " " << ms << "ms";
  report(5, "omega gluing lemma n=1,2", pass, d.str());
}

void criterion6() {
  bool pass = true;
  double worst = 0;
  for (const auto& name : kAll) {
    auto cat = bundled(name);
    Scalar D2 = rank_d(cat) * rank_d(cat);
    for (int i = 0; i < cat.rank(); ++i)
      for (int j = 0; j < cat.rank(); ++j)
        for (int init = 0; init < cat.rank(); ++init) {
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
            for (auto& b : expect.blocks) b *= D2 / cat.qdim[i];
          }
          for (size_t k = 0; k < total.blocks.size(); ++k) {
            if (!total.blocks[k].size()) continue;
            Eigen::MatrixXcd want =
                i == j ? expect.blocks[k]
                       : Eigen::MatrixXcd::Zero(total.blocks[k].rows(),
                                                total.blocks[k].cols())
                             .eval();
            worst = std::max(worst,
                             (total.blocks[k] - want).cwiseAbs().maxCoeff());
          }
        }
  }
  pass = worst < 1e-8;
  std::ostringstream d;
  d << "worst " << worst;
  report(6, "encircling-ring color projector", pass, d.str());
}

void criterion7() {
  auto fib = bundled("fibonacci");
  std::vector<std::string> pool = {"0", "1", "(t,+)"};
  std::vector<std::vector<std::string>> seqs = {{}};
  for (const auto& a : pool) {
    seqs.push_back({a});
    for (const auto& b : pool) seqs.push_back({a, b});
  }
  std::vector<DecoratedType> types;
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n)
      for (const auto& seq : seqs) {
        std::string s = "(" + std::to_string(m) + "," + std::to_string(n) + ";";
        for (size_t k = 0; k < seq.size(); ++k) s += (k ? "," : "") + seq[k];
        types.push_back(parse_type(s + ")"));
      }
  std::map<std::string, TwoMatrix> cache;
  auto X = [&](const DecoratedType& t) -> const TwoMatrix& {
    auto it = cache.find(type_to_string(t));
    if (it == cache.end())
      it = cache.emplace(type_to_string(t), X_one_morphism(fib, t)).first;
    return it->second;
  };
  long pairs = 0, bad = 0;
  for (const DecoratedType& t1 : types) {
    if (t1.n == 0) continue;
    for (const DecoratedType& t2 : types) {
      if (t2.m != t1.n) continue;
      TwoMatrix P = twomatrix_multiply(fib, X(t1), X(t2));
      const TwoMatrix& C = X(compose_types(t1, t2));
      for (size_t r = 0; r < P.entry.size(); ++r)
        for (size_t c = 0; c < P.entry[r].size(); ++c)
          if (P.entry[r][c].dim() != C.entry[r][c].dim()) ++bad;
      ++pairs;
    }
  }
  std::ostringstream d;
  d << pairs << " composable pairs, " << bad << " dim mismatches";
  report(7, "2-matrix dimension functoriality", bad == 0 && pairs == 2 * 39 * 39,
         d.str());
}

void criterion8() {
  auto fib = bundled("fibonacci");
  DecoratedType torus = parse_type("(0,0;1)");
  RibbonDiagram top = parse_diagram(
      "bottom: $z+ $z-\nslice cap[$z] @1\nslice cup[$w] @1\n"
      "slice cup[?R] @1\nslice twist+ @1\nslice braid- @2\nslice braid+ @1\n"
      "slice cap[?R] @2\ntop: $w+ $w-\n");
  RibbonDiagram bot = parse_diagram(
      "bottom: $z+ $z-\nslice cup[?R] @1\nslice twist+ @1\nslice braid- @2\n"
      "slice braid+ @1\nslice cap[?R] @2\nslice cap[$z] @1\n"
      "slice cup[$w] @1\ntop: $w+ $w-\n");
  VerticalResult linked = vertical_compose_X(fib, top, bot, torus, torus, torus);
  int e = linked.anomaly.sigma1 + linked.anomaly.sigma2 - linked.anomaly.sigma;
  bool pass = e == 1 && linked.residual < 1e-8 &&
              std::abs(linked.anomaly.k - ipow(rank_d(fib) / delta_sum(fib), e)) <
                  1e-12;

  // Block-diagonal assembly keeps the signature additive: k is exactly 1.
  DecoratedType t11 = parse_type("(1,1;)");
  auto ring = [&](int s) {
    std::string tw = s > 0 ? "slice twist+ @3\n" : "slice twist- @3\n";
    return parse_diagram("bottom: $l- $r+\nslice cup[?R] @3\n" + tw +
                         "slice cap[?R] @3\ntop: $l- $r+\n");
  };
  VerticalResult add = vertical_compose_X(fib, ring(1), ring(-1), t11, t11, t11);
  pass = pass && add.anomaly.k == Scalar(1.0) &&
         add.anomaly.sigma == add.anomaly.sigma1 + add.anomaly.sigma2 &&
         add.residual < 1e-8;

  // Cocycle identity on random symmetric integer triples, exact.
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> size(1, 3);
  int worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int d1 = size(rng), d2 = size(rng), d3 = size(rng);
    int n = d1 + d2 + d3;
    std::vector<std::vector<int>> L(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) L[r][c] = L[c][r] = entry(rng);
    auto sub = [&](int from, int to) {
      std::vector<std::vector<int>> S;
      for (int r = from; r < to; ++r)
        S.push_back(std::vector<int>(L[r].begin() + from, L[r].begin() + to));
      return S;
    };
    int s1 = signature(sub(0, d1)), s2 = signature(sub(d1, d1 + d2));
    int s3 = signature(sub(d1 + d2, n));
    int s12 = signature(sub(0, d1 + d2)), s23 = signature(sub(d1, n));
    int s123 = signature(sub(0, n));
    int lhs = (s1 + s23 - s123) + (s2 + s3 - s23);
    int rhs = (s12 + s3 - s123) + (s1 + s2 - s12);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  pass = pass && worst == 0;

  std::ostringstream d;
  d << "exponent " << e << ", residual " << linked.residual
    << ", cocycle defect " << worst;
  report(8, "vertical anomaly and cocycle", pass, d.str());
}

void criterion9() {
  bool pass = true;
  double worst = 0;
  auto t0 = Clock::now();
  for (const char* name : {"semion", "fibonacci"}) {
    auto cat = bundled(name);
    DecoratedType t11 = parse_type("(1,1;)");
    RibbonDiagram cyl = parse_diagram("bottom: $l- $r+\nslice id\ntop: $l- $r+\n");
    RibbonDiagram tw =
        parse_diagram("bottom: $l- $r+\nslice twist+ @2\ntop: $l- $r+\n");
    worst = std::max(
        worst, horizontal_compose_X(cat, cyl, cyl, t11, t11, t11, t11).residual);
    worst = std::max(
        worst, horizontal_compose_X(cat, cyl, tw, t11, t11, t11, t11).residual);
    DecoratedType t12 = parse_type("(1,2;)");
    DecoratedType t21 = parse_type("(2,1;)");
    RibbonDiagram id12 =
        parse_diagram("bottom: $l- $b+ $a+\nslice id\ntop: $l- $b+ $a+\n");
    RibbonDiagram id21 =
        parse_diagram("bottom: $a- $b- $r+\nslice id\ntop: $a- $b- $r+\n");
    worst = std::max(
        worst,
        horizontal_compose_X(cat, id12, id21, t12, t12, t21, t21).residual);
  }
  double ms = ms_since(t0);
  pass = worst < 1e-8 && ms < 60000;
  std::ostringstream d;
  d << "worst " << worst << " " << ms << "ms";
  report(9, "horizontal intertwining m=1,2", pass, d.str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10() {
  std::string cli = RIBCAT_CLI;
  std::string cat = std::string(RIBCAT_DATA_DIR) + "/fibonacci.mtc";
  std::string sample = std::string(RIBCAT_SAMPLES_DIR) + "/torus_omega1.rib";
  std::string fa = "/tmp/ribcat_acceptance_functor.json";
  std::string fb = "/tmp/ribcat_acceptance_tau.json";
  int rc1 = std::system((cli + " eval-functor --category " + cat + " " +
                         sample + " --out json > " + fa)
                            .c_str());
  int rc2 = std::system((cli + " eval-tau --category " + cat + " " + sample +
                         " --out json > " + fb)
                            .c_str());
  bool pass = rc1 == 0 && rc2 == 0;
  std::string detail = "cli runs";
  if (pass) {
    auto ja = nlohmann::ordered_json::parse(slurp(fa));
    auto jb = nlohmann::ordered_json::parse(slurp(fb));
    std::string a = ja.at("blocks").dump();
    std::string b = jb.at("blocks").dump();
    pass = !a.empty() && a == b;
    detail = "blocks sections " + std::to_string(a.size()) + " bytes, " +
             (pass ? "identical" : "DIFFER");
  }
  report(10, "closed functor output equals tau blocks byte-for-byte", pass,
         detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures) printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
