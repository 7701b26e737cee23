#include "ribcat/category.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "ribcat/errors.hpp"

namespace ribcat {

std::vector<int> ModularCategoryData::channels(int a, int b) const {
  std::vector<int> out;
  for (int c = 0; c < rank(); ++c) {
    int n = nmult(a, b, c);
    if (n > 1)
      throw NotSupported("fusion multiplicity N(" + labels[a] + "," + labels[b] + ";" +
                         labels[c] + ") = " + std::to_string(n) + " > 1");
    if (n == 1) out.push_back(c);
  }
  return out;
}

std::vector<int> ModularCategoryData::left_channels(int a, int b, int c, int d) const {
  std::vector<int> out;
  for (int e : channels(a, b))
    if (admissible(e, c, d)) out.push_back(e);
  return out;
}

std::vector<int> ModularCategoryData::right_channels(int a, int b, int c, int d) const {
  std::vector<int> out;
  for (int g : channels(b, c))
    if (admissible(a, g, d)) out.push_back(g);
  return out;
}

Eigen::MatrixXcd ModularCategoryData::fmatrix(int a, int b, int c, int d) const {
  auto rows = left_channels(a, b, c, d);
  auto cols = right_channels(a, b, c, d);
  if (rows.size() != cols.size())
    throw ConsistencyError("unit", 1.0,
                           "tree space " + labels[a] + "(x)" + labels[b] + "(x)" +
                               labels[c] + " -> " + labels[d] +
                               " has mismatched channel counts");
  long n = static_cast<long>(rows.size());
  if (a == 0 || b == 0 || c == 0) return Eigen::MatrixXcd::Identity(n, n);
  auto it = fsymbols.find({a, b, c, d});
  if (it == fsymbols.end()) {
    if (n == 0) return Eigen::MatrixXcd(0, 0);
    throw ConsistencyError("pentagon", 1.0,
                           "missing F-matrix for (" + labels[a] + "," + labels[b] + "," +
                               labels[c] + ";" + labels[d] + ")");
  }
  if (it->second.rows() != n || it->second.cols() != n)
    throw ConsistencyError("pentagon", 1.0,
                           "F-matrix for (" + labels[a] + "," + labels[b] + "," +
                               labels[c] + ";" + labels[d] + ") has wrong shape");
  return it->second;
}

Scalar ModularCategoryData::rsymbol(int a, int b, int c) const {
  if (a == 0 || b == 0) return Scalar(1.0, 0.0);
  auto it = rsymbols.find({a, b, c});
  if (it == rsymbols.end())
    throw ConsistencyError("hexagon", 1.0,
                           "missing R-symbol for (" + labels[a] + "," + labels[b] + ";" +
                               labels[c] + ")");
  return it->second;
}

Scalar ModularCategoryData::cup_coeff(int c) const {
  int cd = dual[c];
  Eigen::MatrixXcd f = fmatrix(c, cd, c, c);
  auto rows = left_channels(c, cd, c, c);
  auto cols = right_channels(c, cd, c, c);
  auto r0 = std::find(rows.begin(), rows.end(), 0);
  auto c0 = std::find(cols.begin(), cols.end(), 0);
  if (r0 == rows.end() || c0 == cols.end())
    throw ConsistencyError("duality", 1.0,
                           "no unit channel in " + labels[c] + "(x)dual zig-zag space");
  Scalar f11 = f(r0 - rows.begin(), c0 - cols.begin());
  if (std::abs(f11) < 1e-14)
    throw ConsistencyError("duality", 1.0,
                           "(F^{c,c*,c}_c)_{11} vanishes for " + labels[c]);
  return Scalar(1.0, 0.0) / (pivot[c] * f11);
}

int ModularCategoryData::find_label(const std::string& name) const {
  for (int i = 0; i < rank(); ++i)
    if (labels[i] == name) return i;
  return -1;
}

Scalar rank_d(const ModularCategoryData& cat) {
  Scalar s = 0.0;
  for (int i = 0; i < cat.rank(); ++i) s += cat.qdim[i] * cat.qdim[i];
  return std::sqrt(s);
}

Scalar delta_sum(const ModularCategoryData& cat) {
  Scalar s = 0.0;
  for (int i = 0; i < cat.rank(); ++i)
    s += cat.qdim[i] * cat.qdim[i] / cat.twist[i];
  if (std::abs(s) <= cat.tolerance)
    throw DegenerateCategory("Gauss sum Delta is numerically zero");
  return s;
}

Eigen::MatrixXcd s_matrix(const ModularCategoryData& cat) {
  int k = cat.rank();
  Eigen::MatrixXcd s(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Scalar acc = 0.0;
      for (int c = 0; c < k; ++c)
        if (cat.admissible(a, b, c))
          acc += cat.qdim[c] * cat.twist[c] / (cat.twist[a] * cat.twist[b]);
      s(a, b) = acc;
    }
  return s;
}

namespace {

// Entry of fmatrix(a,b,c,d) at row channel e, column channel g.
Scalar fent(const ModularCategoryData& cat, int a, int b, int c, int d, int e, int g) {
  auto rows = cat.left_channels(a, b, c, d);
  auto cols = cat.right_channels(a, b, c, d);
  auto r = std::find(rows.begin(), rows.end(), e);
  auto cc = std::find(cols.begin(), cols.end(), g);
  if (r == rows.end() || cc == cols.end())
    throw ConsistencyError("unit", 1.0, "inadmissible F-matrix entry requested");
  Eigen::MatrixXcd f = cat.fmatrix(a, b, c, d);
  return f(r - rows.begin(), cc - cols.begin());
}

double unit_residual(const ModularCategoryData& cat) {
  int k = cat.rank();
  double worst = 0.0;
  for (int j = 0; j < k; ++j)
    for (int c = 0; c < k; ++c) {
      worst = std::max(worst, std::abs(cat.nmult(0, j, c) - (j == c ? 1.0 : 0.0)));
      worst = std::max(worst, std::abs(cat.nmult(j, 0, c) - (j == c ? 1.0 : 0.0)));
    }
  return worst;
}

double duality_residual(const ModularCategoryData& cat) {
  int k = cat.rank();
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    if (cat.dual[i] < 0 || cat.dual[i] >= k || cat.dual[cat.dual[i]] != i)
      worst = std::max(worst, 1.0);
    for (int j = 0; j < k; ++j)
      worst = std::max(worst,
                       std::abs(cat.nmult(i, j, 0) - (j == cat.dual[i] ? 1.0 : 0.0)));
    int id = cat.dual[i];
    if (id >= 0 && id < k) {
      worst = std::max(worst, std::abs(cat.qdim[id] - cat.qdim[i]));
      worst = std::max(worst, std::abs(cat.twist[id] - cat.twist[i]));
    }
    if (std::abs(cat.pivot[i]) <= cat.tolerance) worst = std::max(worst, 1.0);
  }
  worst = std::max(worst, std::abs(cat.pivot[0] - Scalar(1.0, 0.0)));
  return worst;
}

double qdim_residual(const ModularCategoryData& cat) {
  int k = cat.rank();
  double worst = 0.0;
  worst = std::max(worst, std::abs(cat.qdim[0] - Scalar(1.0, 0.0)));
  worst = std::max(worst, std::abs(cat.twist[0] - Scalar(1.0, 0.0)));
  for (int i = 0; i < k; ++i)
    if (std::abs(cat.twist[i]) <= cat.tolerance) worst = std::max(worst, 1.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Scalar s = 0.0;
      for (int c = 0; c < k; ++c)
        s += static_cast<double>(cat.nmult(i, j, c)) * cat.qdim[c];
      worst = std::max(worst, std::abs(cat.qdim[i] * cat.qdim[j] - s));
    }
  return worst;
}

// ((ab)c)d -> a(b(cd)) along both routes:
//   F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]
double pentagon_residual(const ModularCategoryData& cat) {
  int k = cat.rank();
  double worst = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d)
          for (int e = 0; e < k; ++e)
            for (int f : cat.channels(a, b))
              for (int g : cat.channels(f, c)) {
                if (!cat.admissible(g, d, e)) continue;
                for (int l : cat.channels(c, d)) {
                  if (!cat.admissible(f, l, e)) continue;
                  for (int kk : cat.channels(b, l)) {
                    if (!cat.admissible(a, kk, e)) continue;
                    Scalar lhs = fent(cat, f, c, d, e, g, l) *
                                 fent(cat, a, b, l, e, f, kk);
                    Scalar rhs = 0.0;
                    for (int h : cat.channels(b, c)) {
                      if (!cat.admissible(a, h, g) || !cat.admissible(h, d, kk))
                        continue;
                      rhs += fent(cat, a, b, c, g, f, h) *
                             fent(cat, a, h, d, e, g, kk) *
                             fent(cat, b, c, d, kk, h, l);
                    }
                    worst = std::max(worst, std::abs(lhs - rhs));
                  }
                }
              }
  return worst;
}

// Both hexagon identities, entrywise:
//   R^{ca}_e F^{acb}_d[e,g] R^{cb}_g       = sum_f F^{cab}_d[e,f] R^{cf}_d     F^{abc}_d[f,g]
//   (R^{ac}_e)^-1 F^{acb}_d[e,g] (R^{bc}_g)^-1 = sum_f F^{cab}_d[e,f] (R^{fc}_d)^-1 F^{abc}_d[f,g]
double hexagon_residual(const ModularCategoryData& cat) {
  int k = cat.rank();
  double worst = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d)
          for (int e : cat.left_channels(a, c, b, d))
            for (int g : cat.right_channels(a, c, b, d)) {
              Scalar fmid = fent(cat, a, c, b, d, e, g);
              Scalar lhs1 = cat.rsymbol(c, a, e) * fmid * cat.rsymbol(c, b, g);
              Scalar rac = cat.rsymbol(a, c, e);
              Scalar rbc = cat.rsymbol(b, c, g);
              if (std::abs(rac) < 1e-14 || std::abs(rbc) < 1e-14)
                return std::max(worst, 1.0);
              Scalar lhs2 = fmid / (rac * rbc);
              Scalar rhs1 = 0.0, rhs2 = 0.0;
              for (int f : cat.channels(a, b)) {
                if (!cat.admissible(c, f, d) || !cat.admissible(f, c, d)) continue;
                Scalar fl = fent(cat, c, a, b, d, e, f);
                Scalar fr = fent(cat, a, b, c, d, f, g);
                Scalar rfc = cat.rsymbol(f, c, d);
                if (std::abs(rfc) < 1e-14) return std::max(worst, 1.0);
                rhs1 += fl * cat.rsymbol(c, f, d) * fr;
                rhs2 += fl / rfc * fr;
              }
              worst = std::max(worst, std::abs(lhs1 - rhs1));
              worst = std::max(worst, std::abs(lhs2 - rhs2));
            }
  return worst;
}

double modularity_residual(const ModularCategoryData& cat) {
  double det = std::abs(s_matrix(cat).determinant());
  if (det > cat.tolerance) return 0.0;
  return 1.0 / std::max(det, 1e-300);
}

}  // namespace

std::vector<AxiomCheck> axiom_residuals(const ModularCategoryData& cat) {
  std::vector<AxiomCheck> out;
  auto push = [&](const std::string& name, double r) {
    out.push_back({name, r < cat.tolerance, r});
  };
  push("unit", unit_residual(cat));
  push("duality", duality_residual(cat));
  push("qdim", qdim_residual(cat));
  push("pentagon", pentagon_residual(cat));
  push("hexagon", hexagon_residual(cat));
  push("modularity", modularity_residual(cat));
  return out;
}

void validate_category(const ModularCategoryData& cat) {
  for (const auto& c : axiom_residuals(cat))
    if (!c.pass)
      throw ConsistencyError(c.name, c.residual,
                             "axiom '" + c.name + "' violated, worst residual " +
                                 std::to_string(c.residual));
}

namespace {

Scalar json_scalar(const nlohmann::json& v) {
  if (v.is_number()) return Scalar(v.get<double>(), 0.0);
  if (v.is_string()) return parse_scalar(v.get<std::string>());
  throw ParseError("scalar field must be a number or a grammar string");
}

int file_index(const nlohmann::json& v, int rank, const char* what) {
  if (!v.is_number_integer())
    throw ParseError(std::string(what) + " index must be an integer");
  int i = v.get<int>();
  if (i < 1 || i > rank)
    throw ParseError(std::string(what) + " index " + std::to_string(i) +
                     " out of range 1.." + std::to_string(rank));
  return i - 1;
}

std::vector<Scalar> scalar_list(const nlohmann::json& j, const char* field, int rank) {
  if (!j.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  const auto& arr = j.at(field);
  if (!arr.is_array() || static_cast<int>(arr.size()) != rank)
    throw ParseError(std::string("field '") + field + "' must list one scalar per label");
  std::vector<Scalar> out;
  for (const auto& v : arr) out.push_back(json_scalar(v));
  return out;
}

}  // namespace

ModularCategoryData load_category(const std::string& json_text, bool validate) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("category file must be a JSON object");

  ModularCategoryData cat;
  if (!j.contains("labels") || !j.at("labels").is_array() || j.at("labels").empty())
    throw ParseError("missing or empty field 'labels'");
  for (const auto& l : j.at("labels")) {
    if (!l.is_string()) throw ParseError("labels must be strings");
    cat.labels.push_back(l.get<std::string>());
  }
  int k = cat.rank();
  {
    std::set<std::string> seen(cat.labels.begin(), cat.labels.end());
    if (static_cast<int>(seen.size()) != k) throw ParseError("duplicate label names");
  }

  if (j.contains("tolerance")) {
    if (!j.at("tolerance").is_number() || j.at("tolerance").get<double>() < 0.0)
      throw ParseError("tolerance must be a nonnegative number");
    cat.tolerance = j.at("tolerance").get<double>();
  }

  if (!j.contains("dual") || !j.at("dual").is_array() ||
      static_cast<int>(j.at("dual").size()) != k)
    throw ParseError("field 'dual' must list one label index per label");
  for (const auto& v : j.at("dual")) cat.dual.push_back(file_index(v, k, "dual"));

  cat.fusion.assign(static_cast<size_t>(k) * k * k, 0);
  if (!j.contains("fusion") || !j.at("fusion").is_array())
    throw ParseError("missing field 'fusion'");
  for (const auto& ent : j.at("fusion")) {
    if (!ent.is_array() || ent.size() != 4)
      throw ParseError("fusion entries must be [i,j,k,N]");
    int a = file_index(ent[0], k, "fusion");
    int b = file_index(ent[1], k, "fusion");
    int c = file_index(ent[2], k, "fusion");
    if (!ent[3].is_number_integer() || ent[3].get<int>() < 0)
      throw ParseError("fusion multiplicity must be a nonnegative integer");
    size_t at = (static_cast<size_t>(a) * k + b) * k + c;
    if (cat.fusion[at] != 0)
      throw ParseError("duplicate fusion entry for (" + cat.labels[a] + "," +
                       cat.labels[b] + ";" + cat.labels[c] + ")");
    cat.fusion[at] = ent[3].get<int>();
  }

  if (j.contains("F")) {
    if (!j.at("F").is_array()) throw ParseError("field 'F' must be a list");
    for (const auto& ent : j.at("F")) {
      if (!ent.is_object() || !ent.contains("key") || !ent.contains("matrix"))
        throw ParseError("F entries must be {key:[a,b,c,d], matrix:[[..]]}");
      const auto& key = ent.at("key");
      if (!key.is_array() || key.size() != 4) throw ParseError("F key must be [a,b,c,d]");
      std::array<int, 4> idx{};
      for (int t = 0; t < 4; ++t) idx[t] = file_index(key[t], k, "F");
      if (idx[0] == 0 || idx[1] == 0 || idx[2] == 0)
        throw ParseError("F-matrices with a unit leg are implicit; remove the entry");
      const auto& m = ent.at("matrix");
      if (!m.is_array() || m.empty()) throw ParseError("F matrix must be a nonempty array");
      long rows = static_cast<long>(m.size());
      long cols = static_cast<long>(m[0].size());
      Eigen::MatrixXcd mat(rows, cols);
      for (long r = 0; r < rows; ++r) {
        if (!m[r].is_array() || static_cast<long>(m[r].size()) != cols)
          throw ParseError("F matrix rows have uneven length");
        for (long c = 0; c < cols; ++c) mat(r, c) = json_scalar(m[r][c]);
      }
      if (cat.fsymbols.count(idx)) throw ParseError("duplicate F entry");
      cat.fsymbols[idx] = mat;
    }
  }

  if (j.contains("R")) {
    if (!j.at("R").is_array()) throw ParseError("field 'R' must be a list");
    for (const auto& ent : j.at("R")) {
      if (!ent.is_object() || !ent.contains("key") || !ent.contains("value"))
        throw ParseError("R entries must be {key:[a,b,c], value:scalar}");
      const auto& key = ent.at("key");
      if (!key.is_array() || key.size() != 3) throw ParseError("R key must be [a,b,c]");
      std::array<int, 3> idx{};
      for (int t = 0; t < 3; ++t) idx[t] = file_index(key[t], k, "R");
      if (idx[0] == 0 || idx[1] == 0)
        throw ParseError("R-symbols with a unit factor are implicit; remove the entry");
      if (cat.rsymbols.count(idx)) throw ParseError("duplicate R entry");
      cat.rsymbols[idx] = json_scalar(ent.at("value"));
    }
  }

  cat.twist = scalar_list(j, "twist", k);
  cat.qdim = scalar_list(j, "qdim", k);
  cat.pivot = scalar_list(j, "pivot", k);

  // Structural completeness, before any axiom arithmetic.
  bool mult_free = true;
  for (int x : cat.fusion)
    if (x > 1) mult_free = false;
  for (int a = 1; a < k; ++a)
    for (int b = 1; b < k; ++b) {
      for (int c = 0; c < k; ++c) {
        int n = cat.nmult(a, b, c);
        if (n > 1) continue;  // caught by NotSupported at use sites
        if (n == 1 && !cat.rsymbols.count({a, b, c}))
          throw ParseError("missing R-symbol for (" + cat.labels[a] + "," +
                           cat.labels[b] + ";" + cat.labels[c] + ")");
        if (n == 0 && cat.rsymbols.count({a, b, c}))
          throw ParseError("R-symbol given for inadmissible channel (" + cat.labels[a] +
                           "," + cat.labels[b] + ";" + cat.labels[c] + ")");
      }
      for (int c = 1; c < k && mult_free; ++c)
        for (int d = 0; d < k; ++d) {
          size_t nl = cat.left_channels(a, b, c, d).size();
          size_t nr = cat.right_channels(a, b, c, d).size();
          bool have = cat.fsymbols.count({a, b, c, d}) > 0;
          if (nl > 0 && nr > 0 && !have)
            throw ParseError("missing F-matrix for (" + cat.labels[a] + "," +
                             cat.labels[b] + "," + cat.labels[c] + ";" + cat.labels[d] +
                             ")");
          if ((nl == 0 || nr == 0) && have)
            throw ParseError("F-matrix given for empty tree space (" + cat.labels[a] +
                             "," + cat.labels[b] + "," + cat.labels[c] + ";" +
                             cat.labels[d] + ")");
          if (have) {
            const auto& m = cat.fsymbols.at({a, b, c, d});
            if (m.rows() != static_cast<long>(nl) || m.cols() != static_cast<long>(nr))
              throw ParseError("F-matrix for (" + cat.labels[a] + "," + cat.labels[b] +
                               "," + cat.labels[c] + ";" + cat.labels[d] +
                               ") has shape " + std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols()) + ", expected " +
                               std::to_string(nl) + "x" + std::to_string(nr));
          }
        }
    }

  if (validate) validate_category(cat);
  return cat;
}

ModularCategoryData load_category_file(const std::string& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open category file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_category(ss.str(), validate);
}

}  // namespace ribcat
