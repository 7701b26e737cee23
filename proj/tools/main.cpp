#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ribcat/category.hpp"
#include "ribcat/errors.hpp"
#include "ribcat/tqft.hpp"

using json = nlohmann::ordered_json;
using namespace ribcat;

namespace {

json scalar_json(Scalar z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

std::string scalar_text(Scalar z) {
  char buf[64];
  snprintf(buf, sizeof buf, "(%.12g, %.12g)", z.real(), z.imag());
  return buf;
}

// Shared block serializer: eval-functor output and the eval-tau block section
// must match byte for byte on closed inputs, so both go through this.
json blocks_json(const ModularCategoryData& cat, const RibbonDiagram& d,
                 const DecoratedType& t, const DecoratedType& s, int jobs) {
  VariableSummary vars = diagram_variables(d);
  int m = t.m, n = t.n;
  if (t.m != s.m || t.n != s.n)
    throw TypeMismatch("side counts of source and target types differ");
  if (static_cast<int>(vars.through.size()) != m + n)
    throw TypeMismatch("diagram bands do not match the declared types");

  json out;
  out["type_bottom"] = type_to_string(t);
  out["type_top"] = type_to_string(s);
  json cells = json::array();
  for (const std::vector<int>& i : enumerate_tuples(cat, m))
    for (const std::vector<int>& j : enumerate_tuples(cat, n)) {
      std::map<std::string, int> colors;
      for (int k = 0; k < m; ++k) colors[vars.through[k]] = i[k];
      for (int k = 0; k < n; ++k) colors[vars.through[m + k]] = j[n - 1 - k];
      BlockTable tb =
          tau_blocks(cat, substitute_vars(cat, d, colors), t, s, jobs);
      json cell;
      json il = json::array(), jl = json::array();
      for (int v : i) il.push_back(cat.labels[v]);
      for (int v : j) jl.push_back(cat.labels[v]);
      cell["i"] = il;
      cell["j"] = jl;
      json entries = json::array();
      for (size_t e = 0; e < tb.target.size(); ++e)
        for (size_t z = 0; z < tb.source.size(); ++z) {
          json ent;
          ent["eta"] = index_to_string(cat, tb.target[e]);
          ent["zeta"] = index_to_string(cat, tb.source[z]);
          ent["matrix"] = matrix_json(tb.entry[e][z]);
          entries.push_back(ent);
        }
      cell["entries"] = entries;
      cells.push_back(cell);
    }
  out["cells"] = cells;
  return out;
}

void print_blocks_text(const json& blocks) {
  printf("blocks %s -> %s\n", blocks["type_bottom"].get<std::string>().c_str(),
         blocks["type_top"].get<std::string>().c_str());
  for (const json& cell : blocks["cells"]) {
    std::string i, j;
    for (const json& v : cell["i"]) i += (i.empty() ? "" : ",") + v.get<std::string>();
    for (const json& v : cell["j"]) j += (j.empty() ? "" : ",") + v.get<std::string>();
    printf("  cell i=(%s) j=(%s)\n", i.c_str(), j.c_str());
    for (const json& ent : cell["entries"]) {
      printf("    eta=%s zeta=%s\n", ent["eta"].get<std::string>().c_str(),
             ent["zeta"].get<std::string>().c_str());
      for (const json& row : ent["matrix"]) {
        printf("     ");
        for (const json& v : row)
          printf(" (%.12g, %.12g)", v[0].get<double>(), v[1].get<double>());
        printf("\n");
      }
    }
  }
}

void emit(const json& report, bool as_json) {
  if (as_json) printf("%s\n", report.dump(2).c_str());
}

struct CommonOpts {
  std::string category;
  std::string out = "text";
  double tolerance = 1e-8;
  int jobs = 1;
};

int run_check_category(const CommonOpts& o, double tol) {
  ModularCategoryData cat = load_category_file(o.category, false);
  std::vector<AxiomCheck> report = axiom_residuals(cat);
  bool pass = true;
  for (const AxiomCheck& a : report) pass = pass && a.residual < tol;

  Scalar D = rank_d(cat);
  Scalar delta = delta_sum(cat);
  if (o.out == "json") {
    json rep;
    rep["schema"] = 1;
    rep["command"] = "check-category";
    rep["rank"] = cat.rank();
    json labels = json::array();
    for (const std::string& l : cat.labels) labels.push_back(l);
    rep["labels"] = labels;
    rep["D"] = scalar_json(D);
    rep["delta"] = scalar_json(delta);
    rep["tolerance"] = tol;
    json ax = json::array();
    for (const AxiomCheck& a : report) {
      json e;
      e["name"] = a.name;
      e["residual"] = a.residual;
      e["pass"] = a.residual < tol;
      ax.push_back(e);
    }
    rep["axioms"] = ax;
    rep["pass"] = pass;
    emit(rep, true);
  } else {
    printf("category: %zu labels\n", cat.labels.size());
    printf("D     = %s\n", scalar_text(D).c_str());
    printf("Delta = %s\n", scalar_text(delta).c_str());
    for (const AxiomCheck& a : report)
      printf("%-12s %-4s residual %.3e\n", a.name.c_str(),
             a.residual < tol ? "pass" : "FAIL", a.residual);
    printf("%s\n", pass ? "OK" : "FAILED");
  }
  return pass ? 0 : 1;
}

int run_eval_tau(const CommonOpts& o, const std::string& path) {
  ModularCategoryData cat = load_category_file(o.category);
  CobordismFile cob = parse_cobordism_file(path);
  if (cob.has_types && (cob.bottom.m || cob.bottom.n || cob.top.m || cob.top.n))
    throw OpenBoundary("eval-tau needs a closed input (types with m = n = 0)");

  bool closed = cob.diagram.bottom.empty() && cob.diagram.top.empty();
  json rep;
  rep["schema"] = 1;
  rep["command"] = "eval-tau";
  if (closed) {
    SurgeryData sd = trace_surgery(cob.diagram);
    int sigma = signature(sd.linking);
    Scalar br = bracket(cat, cob.diagram, {}, o.jobs);
    Scalar tau = tau_closed(cat, cob.diagram, {}, o.jobs);
    rep["tau"] = scalar_json(tau);
    rep["sigma"] = sigma;
    rep["mu"] = sd.mu;
    rep["bracket"] = scalar_json(br);
    if (o.out != "json") {
      printf("tau     = %s\n", scalar_text(tau).c_str());
      printf("sigma   = %d\n", sigma);
      printf("mu      = %d\n", sd.mu);
      printf("bracket = %s\n", scalar_text(br).c_str());
    }
  }
  if (cob.has_types) {
    json blocks = blocks_json(cat, cob.diagram, cob.bottom, cob.top, o.jobs);
    rep["blocks"] = blocks;
    if (o.out != "json") print_blocks_text(blocks);
  } else if (!closed) {
    throw OpenBoundary("diagram has boundary strands and no type header");
  }
  emit(rep, o.out == "json");
  return 0;
}

int run_eval_functor(const CommonOpts& o, const std::string& path) {
  ModularCategoryData cat = load_category_file(o.category);
  CobordismFile cob = parse_cobordism_file(path);
  if (!cob.has_types)
    throw ParseError("eval-functor needs 'type bottom:' and 'type top:' headers");
  json blocks = blocks_json(cat, cob.diagram, cob.bottom, cob.top, o.jobs);
  json rep;
  rep["schema"] = 1;
  rep["command"] = "eval-functor";
  rep["blocks"] = blocks;
  if (o.out == "json")
    emit(rep, true);
  else
    print_blocks_text(blocks);
  return 0;
}

int run_verify(const CommonOpts& o) {
  // No up-front consistency gate: a broken category should surface as
  // failing suite entries, not a load error.
  ModularCategoryData cat = load_category_file(o.category, false);
  std::vector<AxiomResult> report = verify_axioms(cat, o.tolerance, o.jobs);
  bool pass = true;
  for (const AxiomResult& r : report) pass = pass && r.pass;
  if (o.out == "json") {
    json rep;
    rep["schema"] = 1;
    rep["command"] = "verify";
    rep["tolerance"] = o.tolerance;
    json ax = json::array();
    for (const AxiomResult& r : report) {
      json e;
      e["name"] = r.name;
      e["pass"] = r.pass;
      e["residual"] = r.residual;
      ax.push_back(e);
    }
    rep["axioms"] = ax;
    rep["pass"] = pass;
    emit(rep, true);
  } else {
    for (const AxiomResult& r : report)
      printf("%-26s %-4s residual %.3e\n", r.name.c_str(),
             r.pass ? "pass" : "FAIL", r.residual);
    printf("%s\n", pass ? "OK" : "FAILED");
  }
  return pass ? 0 : 1;
}

int run_compose_types(const CommonOpts& o, const std::vector<std::string>& ts) {
  std::vector<DecoratedType> parsed;
  for (const std::string& s : ts) parsed.push_back(parse_type(s));
  DecoratedType acc = parsed[0];
  for (size_t k = 1; k < parsed.size(); ++k) acc = compose_types(acc, parsed[k]);
  if (o.out == "json") {
    json rep;
    rep["schema"] = 1;
    rep["command"] = "compose-types";
    json in = json::array();
    for (const DecoratedType& t : parsed) in.push_back(type_to_string(t));
    rep["inputs"] = in;
    rep["result"] = type_to_string(acc);
    emit(rep, true);
  } else {
    printf("%s\n", type_to_string(acc).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular-category ribbon evaluator and extended TQFT toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string diagram_path;
  std::vector<std::string> type_args;
  double check_tol = 1e-9;

  auto add_common = [&](CLI::App* sub, bool needs_category) {
    if (needs_category)
      sub->add_option("--category", o.category, "category file (.mtc)")
          ->required();
    sub->add_option("--out", o.out, "output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--jobs", o.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand("check-category",
                                       "validate a category file and report "
                                       "per-axiom residuals");
  add_common(check, true);
  check->add_option("--tolerance", check_tol, "residual bound");

  CLI::App* tau = app.add_subcommand(
      "eval-tau", "closed 3-manifold invariant of a surgery diagram");
  add_common(tau, true);
  tau->add_option("diagram", diagram_path, "diagram file")->required();

  CLI::App* fun = app.add_subcommand(
      "eval-functor", "block matrices of a typed cobordism diagram");
  add_common(fun, true);
  fun->add_option("diagram", diagram_path, "cobordism file with type headers")
      ->required();

  CLI::App* ver =
      app.add_subcommand("verify", "run the functor axiom suite");
  add_common(ver, true);
  ver->add_option("--tolerance", o.tolerance, "residual bound");

  CLI::App* comp =
      app.add_subcommand("compose-types", "compose decorated types left to right");
  add_common(comp, false);
  comp->add_option("types", type_args, "type strings, e.g. \"(1,2;)\"")
      ->expected(-2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check_category(o, check_tol);
    if (tau->parsed()) return run_eval_tau(o, diagram_path);
    if (fun->parsed()) return run_eval_functor(o, diagram_path);
    if (ver->parsed()) return run_verify(o);
    if (comp->parsed()) return run_compose_types(o, type_args);
  } catch (const ParseError& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
