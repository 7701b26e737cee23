#include "ribcat/fusion.hpp"

#include <algorithm>

#include "ribcat/errors.hpp"

namespace ribcat {

int resolved_label(const ModularCategoryData& cat, SignedColor c) {
  return c.sign > 0 ? c.label : cat.dual[c.label];
}

long StateSpace::tree_index(int k, const std::vector<int>& t) const {
  const auto& list = trees[k];
  auto it = std::lower_bound(list.begin(), list.end(), t);
  if (it == list.end() || *it != t) return -1;
  return it - list.begin();
}

StateSpace make_state_space(const ModularCategoryData& cat,
                            std::vector<SignedColor> boundary, int initial) {
  StateSpace s;
  s.boundary = std::move(boundary);
  s.initial = initial;
  for (SignedColor c : s.boundary) s.legs.push_back(resolved_label(cat, c));
  s.trees.resize(cat.rank());

  std::vector<int> partial(s.legs.size());
  auto extend = [&](auto&& self, size_t pos, int charge) -> void {
    if (pos == s.legs.size()) {
      s.trees[charge].push_back(partial);
      return;
    }
    for (int c : cat.channels(charge, s.legs[pos])) {
      partial[pos] = c;
      self(self, pos + 1, c);
    }
  };
  extend(extend, 0, initial);
  return s;
}

long hom_dim(const ModularCategoryData& cat, const std::vector<SignedColor>& boundary,
             int k, int initial) {
  std::vector<long> counts(cat.rank(), 0);
  counts[initial] = 1;
  for (SignedColor sc : boundary) {
    int x = resolved_label(cat, sc);
    std::vector<long> next(cat.rank(), 0);
    for (int a = 0; a < cat.rank(); ++a)
      if (counts[a])
        for (int c = 0; c < cat.rank(); ++c)
          next[c] += counts[a] * cat.nmult(a, x, c);
    counts = std::move(next);
  }
  return counts[k];
}

bool same_boundary(const StateSpace& a, const StateSpace& b) {
  return a.initial == b.initial && a.boundary == b.boundary;
}

BlockMorphism identity_morphism(const StateSpace& s) {
  BlockMorphism m{s, s, {}};
  for (int k = 0; k < s.charges(); ++k)
    m.blocks.push_back(Eigen::MatrixXcd::Identity(s.dim(k), s.dim(k)));
  return m;
}

BlockMorphism zero_morphism(const StateSpace& source, const StateSpace& target) {
  BlockMorphism m{source, target, {}};
  for (int k = 0; k < source.charges(); ++k)
    m.blocks.push_back(Eigen::MatrixXcd::Zero(target.dim(k), source.dim(k)));
  return m;
}

BlockMorphism compose(const BlockMorphism& f, const BlockMorphism& g) {
  if (!same_boundary(f.target, g.source))
    throw BoundaryMismatch("composition boundaries do not chain");
  if (f.blocks.size() != g.blocks.size())
    throw ShapeMismatch("charge sector counts differ");
  BlockMorphism out{f.source, g.target, {}};
  for (size_t k = 0; k < f.blocks.size(); ++k) {
    if (g.blocks[k].cols() != f.blocks[k].rows())
      throw ShapeMismatch("block shapes do not chain at charge " + std::to_string(k));
    out.blocks.push_back(g.blocks[k] * f.blocks[k]);
  }
  return out;
}

SplittingU splitting_u(const ModularCategoryData& cat,
                       const std::vector<SignedColor>& V,
                       const std::vector<SignedColor>& W) {
  SplittingU u;
  u.left = V;
  u.right = W;

  StateSpace vs = make_state_space(cat, V);
  std::vector<SignedColor> vw = V;
  vw.insert(vw.end(), W.begin(), W.end());
  StateSpace target = make_state_space(cat, vw);
  long rows = target.dim(0);

  long cols = 0;
  for (int i = 0; i < cat.rank(); ++i) {
    // Hom(1, V (x) V_i*) is the charge-i sector of V; Hom(1, V_i (x) W) is the
    // space of W-trees run from initial charge i down to the unit.
    u.left_dim.push_back(vs.dim(i));
    StateSpace wi = make_state_space(cat, W, i);
    u.right_dim.push_back(wi.dim(0));
    cols += u.left_dim[i] * u.right_dim[i];

    auto frows = cat.left_channels(i, cat.dual[i], i, i);
    auto fcols = cat.right_channels(i, cat.dual[i], i, i);
    long r0 = std::find(frows.begin(), frows.end(), 0) - frows.begin();
    long c0 = std::find(fcols.begin(), fcols.end(), 0) - fcols.begin();
    Scalar f11 = cat.fmatrix(i, cat.dual[i], i, i)(r0, c0);
    u.weight.push_back(cat.cap_coeff(i) * f11);
  }

  u.forward = Eigen::MatrixXcd::Zero(rows, cols);
  u.inverse = Eigen::MatrixXcd::Zero(cols, rows);
  long col = 0;
  for (int i = 0; i < cat.rank(); ++i) {
    StateSpace wi = make_state_space(cat, W, i);
    for (long x = 0; x < u.left_dim[i]; ++x)
      for (long y = 0; y < u.right_dim[i]; ++y, ++col) {
        u.columns.push_back({i, static_cast<int>(x), static_cast<int>(y)});
        std::vector<int> t = vs.trees[i][x];
        const std::vector<int>& wtree = wi.trees[0][y];
        t.insert(t.end(), wtree.begin(), wtree.end());
        long row = target.tree_index(0, t);
        if (row < 0)
          throw ShapeMismatch("splitting tree missing from the composite basis");
        u.forward(row, col) = u.weight[i];
        u.inverse(col, row) = Scalar(1.0, 0.0) / u.weight[i];
      }
  }
  return u;
}

}  // namespace ribcat
