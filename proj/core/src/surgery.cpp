#include "ribcat/surgery.hpp"

#include "ribcat/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <boost/rational.hpp>

#include "parallel.hpp"

namespace ribcat {
namespace {

struct Dsu {
  std::vector<int> parent;
  int fresh() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Strand {
  Token tok;
  int node;
};

struct Crossing {
  int a, b;  // raw node ids
  int sign;
};

}  // namespace

SurgeryData trace_surgery(const RibbonDiagram& d) {
  for (const Token& t : d.bottom)
    if (t.kind == TokenKind::Surgery)
      throw UnclosedSurgeryComponent("surgery component ?" + t.name +
                                     " reaches the bottom boundary");
  for (const Token& t : d.top)
    if (t.kind == TokenKind::Surgery)
      throw UnclosedSurgeryComponent("surgery component ?" + t.name +
                                     " reaches the top boundary");

  Dsu dsu;
  std::vector<Strand> st;
  st.reserve(d.bottom.size());
  for (const Token& t : d.bottom) st.push_back({t, dsu.fresh()});

  std::vector<Crossing> crossings;
  std::vector<std::pair<int, int>> twists;  // raw node, +-1
  std::vector<std::string> order;           // names by first cup
  std::map<std::string, std::vector<int>> name_nodes;

  auto surgery = [](const Token& t) { return t.kind == TokenKind::Surgery; };

  for (const Generator& g : d.slices) {
    int p = g.pos;
    switch (g.kind) {
      case GenKind::Id:
        break;
      case GenKind::BraidP:
      case GenKind::BraidM: {
        Strand& a = st[p - 1];
        Strand& b = st[p];
        if (surgery(a.tok) && surgery(b.tok)) {
          int sense = g.kind == GenKind::BraidP ? +1 : -1;
          crossings.push_back({a.node, b.node, sense * a.tok.sign * b.tok.sign});
        }
        std::swap(a, b);
        break;
      }
      case GenKind::TwistP:
      case GenKind::TwistM: {
        Strand& a = st[p - 1];
        if (surgery(a.tok))
          twists.push_back({a.node, g.kind == GenKind::TwistP ? +1 : -1});
        break;
      }
      case GenKind::Cup: {
        int n1 = dsu.fresh();
        int n2 = dsu.fresh();
        dsu.unite(n1, n2);
        Token plus = g.color, minus = g.color;
        plus.sign = +1;
        minus.sign = -1;
        st.insert(st.begin() + (p - 1), {{plus.kind, plus.name, +1}, n1});
        st.insert(st.begin() + p, {{minus.kind, minus.name, -1}, n2});
        if (g.color.kind == TokenKind::Surgery) {
          if (!name_nodes.count(g.color.name)) order.push_back(g.color.name);
          name_nodes[g.color.name].push_back(n1);
        }
        break;
      }
      case GenKind::Cap: {
        dsu.unite(st[p - 1].node, st[p].node);
        st.erase(st.begin() + (p - 1), st.begin() + (p + 1));
        break;
      }
      case GenKind::Coupon: {
        const CouponDecl& decl = d.coupons.at(g.coupon);
        st.erase(st.begin() + (p - 1), st.begin() + (p - 1 + g.coupon_in));
        for (int k = 0; k < g.coupon_out; ++k)
          st.insert(st.begin() + (p - 1 + k), {decl.codomain[k], dsu.fresh()});
        break;
      }
    }
  }

  for (const Strand& s : st)
    if (surgery(s.tok))
      throw UnclosedSurgeryComponent("surgery component ?" + s.tok.name +
                                     " is never closed");

  SurgeryData out;
  out.components = order;
  out.mu = static_cast<int>(order.size());
  std::map<int, int> root_index;
  for (int k = 0; k < out.mu; ++k) {
    const std::vector<int>& nodes = name_nodes[order[k]];
    int root = dsu.find(nodes[0]);
    for (int n : nodes)
      if (dsu.find(n) != root)
        throw UnclosedSurgeryComponent("surgery name ?" + order[k] +
                                       " traces more than one circle");
    root_index[root] = k;
  }

  out.framing.assign(out.mu, 0);
  out.linking.assign(out.mu, std::vector<int>(out.mu, 0));
  std::vector<std::vector<int>> inter(out.mu, std::vector<int>(out.mu, 0));
  for (const Crossing& c : crossings) {
    int i = root_index.at(dsu.find(c.a));
    int j = root_index.at(dsu.find(c.b));
    if (i == j)
      out.framing[i] += c.sign;
    else {
      inter[i][j] += c.sign;
      inter[j][i] += c.sign;
    }
  }
  for (const auto& [node, s] : twists) out.framing[root_index.at(dsu.find(node))] += s;

  for (int i = 0; i < out.mu; ++i) {
    out.linking[i][i] = out.framing[i];
    for (int j = i + 1; j < out.mu; ++j) {
      if (inter[i][j] % 2 != 0)
        throw Error("odd inter-component crossing sum between ?" +
                    order[i] + " and ?" + order[j]);
      out.linking[i][j] = out.linking[j][i] = inter[i][j] / 2;
    }
  }
  return out;
}

int signature(const std::vector<std::vector<int>>& B) {
  using Q = boost::rational<long long>;
  // Compare against a rational-typed zero throughout: under C++20 rewritten
  // candidates, boost 1.74's int-vs-rational operator== recurses on itself.
  const Q qzero(0);
  int n = static_cast<int>(B.size());
  std::vector<std::vector<Q>> M(n, std::vector<Q>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) M[r][c] = Q(B[r][c]);

  auto swap_rc = [&](int a, int b) {
    std::swap(M[a], M[b]);
    for (int r = 0; r < n; ++r) std::swap(M[r][a], M[r][b]);
  };

  int sig = 0;
  int k = 0;
  while (k < n) {
    if (M[k][k] == qzero) {
      int piv = -1;
      for (int j = k + 1; j < n; ++j)
        if (M[j][j] != qzero) {
          piv = j;
          break;
        }
      if (piv >= 0) {
        swap_rc(k, piv);
      } else {
        int j = -1;
        for (int c = k + 1; c < n && j < 0; ++c)
          if (M[k][c] != qzero) j = c;
        if (j < 0) {
          ++k;  // zero row: null direction
          continue;
        }
        // Hyperbolic pair (k, j): signature 0, clear everything against it.
        Q a = M[k][j];
        for (int r = 0; r < n; ++r) {
          if (r == k || r == j) continue;
          Q fk = M[r][j] / a;  // coefficient on row k
          Q fj = M[r][k] / a;  // coefficient on row j
          for (int c = 0; c < n; ++c) M[r][c] -= fk * M[k][c] + fj * M[j][c];
          for (int c = 0; c < n; ++c) M[c][r] = M[r][c];
        }
        swap_rc(k + 1, j);
        k += 2;
        continue;
      }
    }
    Q pivot = M[k][k];
    sig += pivot > qzero ? 1 : -1;
    for (int r = k + 1; r < n; ++r) {
      Q f = M[r][k] / pivot;
      if (f == qzero) continue;
      for (int c = k; c < n; ++c) M[r][c] -= f * M[k][c];
      for (int c = k; c < n; ++c) M[c][r] = M[r][c];
    }
    ++k;
  }
  return sig;
}

Scalar ipow(Scalar x, int n) {
  if (n < 0) return Scalar(1.0) / ipow(x, -n);
  Scalar out(1.0);
  for (int k = 0; k < n; ++k) out *= x;
  return out;
}

Scalar bracket(const ModularCategoryData& cat, const RibbonDiagram& d,
               const Coloring& base, int jobs) {
  if (!d.bottom.empty() || !d.top.empty())
    throw OpenBoundary("bracket needs a closed diagram");
  SurgeryData L = trace_surgery(d);
  std::vector<std::vector<int>> lambdas = enumerate_tuples(cat, L.mu);
  std::vector<Scalar> terms(lambdas.size());
  detail::parallel_for(lambdas.size(), jobs, [&](std::size_t k) {
    Coloring col = base;
    col.surgery.clear();
    double dim = 1.0;
    for (int c = 0; c < L.mu; ++c) {
      col.surgery[L.components[c]] = lambdas[k][c];
      dim *= cat.qdim[lambdas[k][c]].real();
    }
    terms[k] = dim * evaluate_F(cat, d, col).blocks[0](0, 0);
  });
  Scalar out(0.0);
  for (const Scalar& t : terms) out += t;
  return out;
}

Scalar tau_closed(const ModularCategoryData& cat, const RibbonDiagram& d,
                  const Coloring& base, int jobs) {
  SurgeryData L = trace_surgery(d);
  int sigma = signature(L.linking);
  Scalar delta = delta_sum(cat);
  Scalar D = rank_d(cat);
  return ipow(delta, sigma) * ipow(D, -sigma - L.mu - 1) *
         bracket(cat, d, base, jobs);
}

BlockTable tau_blocks(const ModularCategoryData& cat, const RibbonDiagram& d,
                      const DecoratedType& t, const DecoratedType& s,
                      int jobs) {
  auto rainbow_names = [](const std::vector<Token>& side) {
    std::vector<std::string> names;
    for (const Token& tok : side)
      if (tok.kind == TokenKind::Rainbow &&
          std::find(names.begin(), names.end(), tok.name) == names.end())
        names.push_back(tok.name);
    return names;
  };
  int bottom_vars = static_cast<int>(rainbow_names(d.bottom).size());
  int top_vars = static_cast<int>(rainbow_names(d.top).size());
  if (bottom_vars != genus_plus(t))
    throw TypeMismatch("bottom has " + std::to_string(bottom_vars) +
                       " rainbow variables but the source type needs " +
                       std::to_string(genus_plus(t)));
  if (top_vars != genus_plus(s))
    throw TypeMismatch("top has " + std::to_string(top_vars) +
                       " rainbow variables but the target type needs " +
                       std::to_string(genus_plus(s)));

  SurgeryData L = trace_surgery(d);
  int sigma = signature(L.linking);
  int gplus = genus_plus(s);
  Scalar delta = delta_sum(cat);
  Scalar D = rank_d(cat);
  Scalar pref = ipow(delta, sigma) * ipow(D, -gplus - sigma - L.mu);
  std::vector<std::vector<int>> lambdas = enumerate_tuples(cat, L.mu);

  BlockTable out;
  out.source = enumerate_indices(cat, t);
  out.target = enumerate_indices(cat, s);
  out.entry.assign(out.target.size(), std::vector<Eigen::MatrixXcd>(out.source.size()));

  std::size_t cells = out.target.size() * out.source.size();
  detail::parallel_for(cells, jobs, [&](std::size_t cell) {
    std::size_t e = cell / out.source.size();
    std::size_t z = cell % out.source.size();
    Eigen::MatrixXcd sum;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      std::map<std::string, int> lam;
      double dim = 1.0;
      for (int c = 0; c < L.mu; ++c) {
        lam[L.components[c]] = lambdas[k][c];
        dim *= cat.qdim[lambdas[k][c]].real();
      }
      Eigen::MatrixXcd F = evaluate_F0(cat, d, out.source[z], out.target[e], lam);
      if (k == 0)
        sum = dim * F;
      else
        sum += dim * F;
    }
    out.entry[e][z] = (pref * index_dim(cat, out.target[e])) * sum;
  });
  return out;
}

}  // namespace ribcat
