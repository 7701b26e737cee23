#include "ribcat/evaluate.hpp"

#include <algorithm>

#include "ribcat/errors.hpp"

namespace ribcat {

namespace {

int index_of(const std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

struct FCache {
  const ModularCategoryData& cat;
  std::map<std::array<int, 4>, Eigen::MatrixXcd> fwd, inv;

  const Eigen::MatrixXcd& F(int a, int b, int c, int d) {
    std::array<int, 4> key{a, b, c, d};
    auto it = fwd.find(key);
    if (it == fwd.end()) it = fwd.emplace(key, cat.fmatrix(a, b, c, d)).first;
    return it->second;
  }
  const Eigen::MatrixXcd& Finv(int a, int b, int c, int d) {
    std::array<int, 4> key{a, b, c, d};
    auto it = inv.find(key);
    if (it == inv.end())
      it = inv.emplace(key, cat.fmatrix(a, b, c, d).inverse().eval()).first;
    return it->second;
  }
};

struct Engine {
  const ModularCategoryData& cat;
  FCache fc;
  int initial;
  std::vector<SignedColor> bnd;
  StateSpace space;
  std::vector<Eigen::MatrixXcd> blocks;  // [charge]: dim_current x dim_source

  Engine(const ModularCategoryData& c, std::vector<SignedColor> bottom, int init)
      : cat(c), fc{c}, initial(init) {
    bnd = std::move(bottom);
    space = make_state_space(cat, bnd, initial);
    blocks.resize(cat.rank());
    for (int k = 0; k < cat.rank(); ++k)
      blocks[k] = Eigen::MatrixXcd::Identity(space.dim(k), space.dim(k));
  }

  int t_at(const std::vector<int>& tr, int j) const {
    return j == 0 ? initial : tr[j - 1];
  }

  void advance(std::vector<SignedColor> nb,
               const std::vector<Eigen::MatrixXcd>& action, StateSpace ns) {
    for (int k = 0; k < cat.rank(); ++k) blocks[k] = action[k] * blocks[k];
    bnd = std::move(nb);
    space = std::move(ns);
  }

  void apply_twist(int p, int sgn) {
    int x = space.legs[p - 1];
    Scalar v = sgn > 0 ? cat.twist[x] : Scalar(1.0) / cat.twist[x];
    for (auto& b : blocks) b *= v;
  }

  void apply_braid(int p, bool positive) {
    int x = space.legs[p - 1];
    int y = space.legs[p];
    std::vector<SignedColor> nb = bnd;
    std::swap(nb[p - 1], nb[p]);
    StateSpace ns = make_state_space(cat, nb, initial);
    std::vector<Eigen::MatrixXcd> act(cat.rank());
    for (int k = 0; k < cat.rank(); ++k) {
      act[k] = Eigen::MatrixXcd::Zero(ns.dim(k), space.dim(k));
      for (int idx = 0; idx < space.dim(k); ++idx) {
        const std::vector<int>& tr = space.trees[k][idx];
        int A = t_at(tr, p - 1), B = tr[p], u = tr[p - 1];
        const Eigen::MatrixXcd& F1 = fc.F(A, x, y, B);
        const Eigen::MatrixXcd& F2i = fc.Finv(A, y, x, B);
        std::vector<int> lc1 = cat.left_channels(A, x, y, B);
        std::vector<int> rc1 = cat.right_channels(A, x, y, B);
        std::vector<int> lc2 = cat.left_channels(A, y, x, B);
        std::vector<int> rc2 = cat.right_channels(A, y, x, B);
        int row_u = index_of(lc1, u);
        for (int bi = 0; bi < static_cast<int>(rc1.size()); ++bi) {
          int b = rc1[bi];
          Scalar r = positive ? cat.rsymbol(x, y, b)
                              : Scalar(1.0) / cat.rsymbol(y, x, b);
          int b2 = index_of(rc2, b);
          if (b2 < 0) continue;
          for (int ui = 0; ui < static_cast<int>(lc2.size()); ++ui) {
            Scalar coef = F1(row_u, bi) * r * F2i(b2, ui);
            std::vector<int> tr2 = tr;
            tr2[p - 1] = lc2[ui];
            long j = ns.tree_index(k, tr2);
            if (j >= 0) act[k](j, idx) += coef;
          }
        }
      }
    }
    advance(std::move(nb), act, std::move(ns));
  }

  void apply_cup(int p, int c) {
    int cd = cat.dual[c];
    std::vector<SignedColor> nb = bnd;
    nb.insert(nb.begin() + (p - 1), {SignedColor{c, +1}, SignedColor{c, -1}});
    StateSpace ns = make_state_space(cat, nb, initial);
    Scalar beta = cat.cup_coeff(c);
    std::vector<Eigen::MatrixXcd> act(cat.rank());
    for (int k = 0; k < cat.rank(); ++k) {
      act[k] = Eigen::MatrixXcd::Zero(ns.dim(k), space.dim(k));
      for (int idx = 0; idx < space.dim(k); ++idx) {
        const std::vector<int>& tr = space.trees[k][idx];
        int A = t_at(tr, p - 1);
        const Eigen::MatrixXcd& Fi = fc.Finv(A, c, cd, A);
        std::vector<int> lc = cat.left_channels(A, c, cd, A);
        std::vector<int> rc = cat.right_channels(A, c, cd, A);
        int row1 = index_of(rc, 0);
        if (row1 < 0) continue;
        for (int ui = 0; ui < static_cast<int>(lc.size()); ++ui) {
          std::vector<int> tr2 = tr;
          tr2.insert(tr2.begin() + (p - 1), {lc[ui], A});
          long j = ns.tree_index(k, tr2);
          if (j >= 0) act[k](j, idx) += beta * Fi(row1, ui);
        }
      }
    }
    advance(std::move(nb), act, std::move(ns));
  }

  // Death of a (c,-),(c,+) pair at p, p+1.
  void apply_cap_primitive(int p, int c) {
    int l1 = resolved_label(cat, bnd[p - 1]);
    int l2 = resolved_label(cat, bnd[p]);
    std::vector<SignedColor> nb = bnd;
    nb.erase(nb.begin() + (p - 1), nb.begin() + (p + 1));
    StateSpace ns = make_state_space(cat, nb, initial);
    Scalar gamma = cat.cap_coeff(c);
    std::vector<Eigen::MatrixXcd> act(cat.rank());
    for (int k = 0; k < cat.rank(); ++k) {
      act[k] = Eigen::MatrixXcd::Zero(ns.dim(k), space.dim(k));
      for (int idx = 0; idx < space.dim(k); ++idx) {
        const std::vector<int>& tr = space.trees[k][idx];
        int A = t_at(tr, p - 1), u = tr[p - 1], B = tr[p];
        if (B != A) continue;
        const Eigen::MatrixXcd& F1 = fc.F(A, l1, l2, A);
        std::vector<int> lc = cat.left_channels(A, l1, l2, A);
        std::vector<int> rc = cat.right_channels(A, l1, l2, A);
        int row = index_of(lc, u), col = index_of(rc, 0);
        if (row < 0 || col < 0) continue;
        std::vector<int> tr2 = tr;
        tr2.erase(tr2.begin() + (p - 1), tr2.begin() + (p + 1));
        long j = ns.tree_index(k, tr2);
        if (j >= 0) act[k](j, idx) += gamma * F1(row, col);
      }
    }
    advance(std::move(nb), act, std::move(ns));
  }

  void apply_cap(int p, int c) {
    if (bnd[p - 1].sign < 0) {
      apply_cap_primitive(p, c);
    } else {
      // The other death bend: straighten with a twist and a braid first.
      apply_twist(p, +1);
      apply_braid(p, true);
      apply_cap_primitive(p, c);
    }
  }

  void apply_coupon(const std::vector<SignedColor>& dom,
                    const std::vector<SignedColor>& cod, int p,
                    const CouponColor& color) {
    const int n = static_cast<int>(dom.size());
    const int m = static_cast<int>(cod.size());
    StateSpace bundle_in = make_state_space(cat, dom, 0);
    StateSpace bundle_out = make_state_space(cat, cod, 0);
    int w0 = color.charge;
    if (w0 < 0 || w0 >= cat.rank() ||
        bundle_in.tree_index(w0, color.domain_tree) < 0 ||
        bundle_out.tree_index(w0, color.codomain_tree) < 0)
      throw NotSupported("coupon color is not a basis element");

    std::vector<SignedColor> nb(bnd.begin(), bnd.begin() + (p - 1));
    nb.insert(nb.end(), cod.begin(), cod.end());
    nb.insert(nb.end(), bnd.begin() + (p - 1 + n), bnd.end());
    StateSpace ns = make_state_space(cat, nb, initial);

    // Per left charge A: change of basis between absolute segment trees and
    // (middle charge, bundle tree) pairs, one block per exit charge B.
    struct SegMaps {
      StateSpace abs_in, abs_out;
      std::map<int, Eigen::MatrixXcd> seg;  // B -> abs_out(B) x abs_in(B)
    };
    std::map<int, SegMaps> per_A;
    auto lifted_list = [&](const StateSpace& bundle, int A, int B) {
      std::vector<std::pair<int, int>> out;  // (w, tree index)
      for (int w = 0; w < cat.rank(); ++w) {
        if (!cat.admissible(A, w, B)) continue;
        for (int tix = 0; tix < bundle.dim(w); ++tix) out.emplace_back(w, tix);
      }
      return out;
    };
    auto lift_matrix = [&](const StateSpace& abs, const StateSpace& bundle,
                           int A, int B) {
      const auto lifted = lifted_list(bundle, A, B);
      const int nl = static_cast<int>(lifted.size());
      Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(nl, abs.dim(B));
      for (int col = 0; col < abs.dim(B); ++col) {
        const std::vector<int>& seg = abs.trees[B][col];
        for (int row = 0; row < nl; ++row) {
          auto [w, tix] = lifted[row];
          const std::vector<int>& tau = bundle.trees[w][tix];
          Scalar coef = 1.0;
          int s_prev = A, w_prev = 0;
          for (size_t q = 0; q < seg.size(); ++q) {
            int x = bundle.legs[q];
            int s = seg[q], g = tau[q];
            const Eigen::MatrixXcd& F = fc.F(A, w_prev, x, s);
            std::vector<int> lc = cat.left_channels(A, w_prev, x, s);
            std::vector<int> rc = cat.right_channels(A, w_prev, x, s);
            int ri = index_of(lc, s_prev), ci = index_of(rc, g);
            if (ri < 0 || ci < 0) {
              coef = 0.0;
              break;
            }
            coef *= F(ri, ci);
            s_prev = s;
            w_prev = g;
          }
          C(row, col) = coef;
        }
      }
      return C;
    };

    for (int k = 0; k < cat.rank(); ++k)
      for (const std::vector<int>& tr : space.trees[k]) {
        int A = t_at(tr, p - 1);
        if (per_A.count(A)) continue;
        SegMaps sm{make_state_space(
                       cat,
                       std::vector<SignedColor>(bnd.begin() + (p - 1),
                                                bnd.begin() + (p - 1 + n)),
                       A),
                   make_state_space(cat, cod, A),
                   {}};
        for (int B = 0; B < cat.rank(); ++B) {
          if (sm.abs_in.dim(B) == 0 && sm.abs_out.dim(B) == 0) continue;
          Eigen::MatrixXcd C_in = lift_matrix(sm.abs_in, bundle_in, A, B);
          Eigen::MatrixXcd C_out = lift_matrix(sm.abs_out, bundle_out, A, B);
          auto in_list = lifted_list(bundle_in, A, B);
          auto out_list = lifted_list(bundle_out, A, B);
          int rin = -1, rout = -1;
          for (size_t q = 0; q < in_list.size(); ++q)
            if (in_list[q] ==
                std::make_pair(w0, static_cast<int>(bundle_in.tree_index(
                                       w0, color.domain_tree))))
              rin = static_cast<int>(q);
          for (size_t q = 0; q < out_list.size(); ++q)
            if (out_list[q] ==
                std::make_pair(w0, static_cast<int>(bundle_out.tree_index(
                                       w0, color.codomain_tree))))
              rout = static_cast<int>(q);
          Eigen::MatrixXcd M =
              Eigen::MatrixXcd::Zero(sm.abs_out.dim(B), sm.abs_in.dim(B));
          if (rin >= 0 && rout >= 0 && sm.abs_in.dim(B) > 0 &&
              sm.abs_out.dim(B) > 0) {
            Eigen::MatrixXcd unit =
                Eigen::MatrixXcd::Zero(out_list.size(), in_list.size());
            unit(rout, rin) = 1.0;
            M = C_out.inverse() * unit * C_in;
          }
          sm.seg.emplace(B, std::move(M));
        }
        per_A.emplace(A, std::move(sm));
      }

    std::vector<Eigen::MatrixXcd> act(cat.rank());
    for (int k = 0; k < cat.rank(); ++k) {
      act[k] = Eigen::MatrixXcd::Zero(ns.dim(k), space.dim(k));
      for (int idx = 0; idx < space.dim(k); ++idx) {
        const std::vector<int>& tr = space.trees[k][idx];
        int A = t_at(tr, p - 1);
        int B = t_at(tr, p - 1 + n);
        const SegMaps& sm = per_A.at(A);
        auto segit = sm.seg.find(B);
        if (segit == sm.seg.end()) continue;
        std::vector<int> seg_in(tr.begin() + (p - 1), tr.begin() + (p - 1 + n));
        long cin = sm.abs_in.tree_index(B, seg_in);
        if (cin < 0) continue;
        for (int cout = 0; cout < sm.abs_out.dim(B); ++cout) {
          Scalar coef = segit->second(cout, cin);
          if (coef == Scalar(0.0)) continue;
          std::vector<int> tr2(tr.begin(), tr.begin() + (p - 1));
          const std::vector<int>& seg_out = sm.abs_out.trees[B][cout];
          tr2.insert(tr2.end(), seg_out.begin(), seg_out.end());
          tr2.insert(tr2.end(), tr.begin() + (p - 1 + n), tr.end());
          long j = ns.tree_index(k, tr2);
          if (j >= 0) act[k](j, idx) += coef;
        }
      }
    }
    advance(std::move(nb), act, std::move(ns));
    (void)m;
  }
};

SignedColor resolve_token(const ModularCategoryData& cat, const Token& t,
                          const Coloring& col) {
  switch (t.kind) {
    case TokenKind::Colored: {
      int l = cat.find_label(t.name);
      if (l < 0) throw NotSupported("label '" + t.name + "' is not simple");
      return {l, t.sign};
    }
    case TokenKind::Rainbow: {
      auto it = col.rainbow.find(t.name);
      if (it == col.rainbow.end())
        throw UncoloredVariable("no color for $" + t.name);
      return {it->second, t.sign};
    }
    case TokenKind::Surgery: {
      auto it = col.surgery.find(t.name);
      if (it == col.surgery.end())
        throw UncoloredVariable("no color for ?" + t.name);
      return {it->second, t.sign};
    }
  }
  return {};
}

int resolve_color(const ModularCategoryData& cat, const Token& c,
                  const Coloring& col) {
  switch (c.kind) {
    case TokenKind::Colored: {
      int l = cat.find_label(c.name);
      if (l < 0) throw NotSupported("label '" + c.name + "' is not simple");
      return l;
    }
    case TokenKind::Rainbow: {
      auto it = col.rainbow.find(c.name);
      if (it == col.rainbow.end())
        throw UncoloredVariable("no color for $" + c.name);
      return it->second;
    }
    case TokenKind::Surgery: {
      auto it = col.surgery.find(c.name);
      if (it == col.surgery.end())
        throw UncoloredVariable("no color for ?" + c.name);
      return it->second;
    }
  }
  return 0;
}

}  // namespace

BlockMorphism evaluate_F_rel(const ModularCategoryData& cat,
                             const RibbonDiagram& d, const Coloring& coloring,
                             int initial) {
  validate_diagram(d);
  std::vector<SignedColor> bottom;
  for (const Token& t : d.bottom) bottom.push_back(resolve_token(cat, t, coloring));
  Engine eng(cat, bottom, initial);
  for (const Generator& g : d.slices) {
    switch (g.kind) {
      case GenKind::Id:
        break;
      case GenKind::BraidP:
        eng.apply_braid(g.pos, true);
        break;
      case GenKind::BraidM:
        eng.apply_braid(g.pos, false);
        break;
      case GenKind::TwistP:
        eng.apply_twist(g.pos, +1);
        break;
      case GenKind::TwistM:
        eng.apply_twist(g.pos, -1);
        break;
      case GenKind::Cup:
        eng.apply_cup(g.pos, resolve_color(cat, g.color, coloring));
        break;
      case GenKind::Cap:
        eng.apply_cap(g.pos, resolve_color(cat, g.color, coloring));
        break;
      case GenKind::Coupon: {
        auto cit = coloring.coupons.find(g.coupon);
        if (cit == coloring.coupons.end())
          throw UncoloredVariable("no color for coupon '" + g.coupon + "'");
        const CouponDecl& decl = d.coupons.at(g.coupon);
        std::vector<SignedColor> dom, cod;
        for (const Token& t : decl.domain)
          dom.push_back(resolve_token(cat, t, coloring));
        for (const Token& t : decl.codomain)
          cod.push_back(resolve_token(cat, t, coloring));
        eng.apply_coupon(dom, cod, g.pos, cit->second);
        break;
      }
    }
  }
  BlockMorphism out;
  out.source = make_state_space(cat, bottom, initial);
  out.target = eng.space;
  out.blocks = eng.blocks;
  return out;
}

BlockMorphism evaluate_F(const ModularCategoryData& cat, const RibbonDiagram& d,
                         const Coloring& coloring) {
  return evaluate_F_rel(cat, d, coloring, 0);
}

Eigen::MatrixXcd evaluate_F0(const ModularCategoryData& cat,
                             const RibbonDiagram& d, const ColorIndex& zeta,
                             const ColorIndex& eta,
                             const std::map<std::string, int>& lambda) {
  VariableSummary vs = diagram_variables(d);
  if (!vs.through.empty())
    throw UncoloredVariable("through variable $" + vs.through.front() +
                            " has no index slot");
  std::vector<int> zflat, eflat;
  for (const auto& part : zeta.parts)
    zflat.insert(zflat.end(), part.begin(), part.end());
  for (const auto& part : eta.parts)
    eflat.insert(eflat.end(), part.begin(), part.end());
  if (zflat.size() != vs.bottom_pairs.size())
    throw IndexArityMismatch("bottom index has " +
                             std::to_string(zflat.size()) + " labels for " +
                             std::to_string(vs.bottom_pairs.size()) +
                             " rainbow pairs");
  if (eflat.size() != vs.top_pairs.size())
    throw IndexArityMismatch("top index has " + std::to_string(eflat.size()) +
                             " labels for " +
                             std::to_string(vs.top_pairs.size()) +
                             " rainbow pairs");
  Coloring col;
  for (size_t q = 0; q < zflat.size(); ++q)
    col.rainbow[vs.bottom_pairs[q]] = zflat[q];
  for (size_t q = 0; q < eflat.size(); ++q)
    col.rainbow[vs.top_pairs[q]] = eflat[q];
  col.surgery = lambda;
  BlockMorphism f = evaluate_F(cat, d, col);
  return f.blocks[0];
}

}  // namespace ribcat
