#include "ribcat/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ribcat/errors.hpp"

namespace ribcat {

namespace {

std::string token_text(const Token& t);

std::string at_line(int line) {
  return line ? "line " + std::to_string(line) + ": " : "";
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// label+ label- $v $v+ $v- ?name ; bare $v signs counted per boundary line.
Token parse_boundary_token(const std::string& w, int line,
                           std::map<std::string, int>& seen) {
  Token t;
  if (w[0] == '$') {
    t.kind = TokenKind::Rainbow;
    std::string body = w.substr(1);
    if (!body.empty() && (body.back() == '+' || body.back() == '-')) {
      t.sign = body.back() == '+' ? +1 : -1;
      body.pop_back();
      if (!valid_name(body))
        throw ParseError("bad variable token '" + w + "'", line);
      t.name = body;
      seen[t.name]++;
    } else {
      if (!valid_name(body))
        throw ParseError("bad variable token '" + w + "'", line);
      t.name = body;
      int n = seen[t.name]++;
      if (n >= 2)
        throw ParseError("variable $" + t.name +
                             " appears more than twice on one boundary",
                         line);
      t.sign = n == 0 ? +1 : -1;
    }
    return t;
  }
  if (w[0] == '?') {
    t.kind = TokenKind::Surgery;
    t.name = w.substr(1);
    if (!valid_name(t.name))
      throw ParseError("bad surgery token '" + w + "'", line);
    return t;
  }
  if (w.size() < 2 || (w.back() != '+' && w.back() != '-'))
    throw ParseError("boundary token '" + w + "' needs a +/- sign", line);
  t.kind = TokenKind::Colored;
  t.sign = w.back() == '+' ? +1 : -1;
  t.name = w.substr(0, w.size() - 1);
  if (!valid_name(t.name))
    throw ParseError("bad label token '" + w + "'", line);
  return t;
}

Token parse_color(const std::string& w, int line) {
  Token t;
  if (w.empty()) throw ParseError("empty cup/cap color", line);
  if (w[0] == '$') {
    t.kind = TokenKind::Rainbow;
    t.name = w.substr(1);
  } else if (w[0] == '?') {
    t.kind = TokenKind::Surgery;
    t.name = w.substr(1);
  } else {
    t.kind = TokenKind::Colored;
    t.name = w;
  }
  if (!valid_name(t.name)) throw ParseError("bad color '" + w + "'", line);
  return t;
}

Generator parse_slice(const std::vector<std::string>& words, int line) {
  if (words.empty()) throw ParseError("empty slice", line);
  Generator g;
  g.line = line;
  std::string head = words[0];
  std::string payload;
  auto br = head.find('[');
  if (br != std::string::npos) {
    if (head.back() != ']') throw ParseError("unterminated '[' in slice", line);
    payload = head.substr(br + 1, head.size() - br - 2);
    head = head.substr(0, br);
  }
  size_t need_at = 1;
  if (head == "id") {
    if (words.size() != 1) throw ParseError("'id' takes no arguments", line);
    g.kind = GenKind::Id;
    return g;
  } else if (head == "braid+")
    g.kind = GenKind::BraidP;
  else if (head == "braid-")
    g.kind = GenKind::BraidM;
  else if (head == "twist+")
    g.kind = GenKind::TwistP;
  else if (head == "twist-")
    g.kind = GenKind::TwistM;
  else if (head == "cup")
    g.kind = GenKind::Cup;
  else if (head == "cap")
    g.kind = GenKind::Cap;
  else if (head == "coupon")
    g.kind = GenKind::Coupon;
  else
    throw ParseError("unknown generator '" + words[0] + "'", line);

  if (g.kind == GenKind::Cup || g.kind == GenKind::Cap) {
    g.color = parse_color(payload, line);
  } else if (g.kind == GenKind::Coupon) {
    if (!valid_name(payload)) throw ParseError("bad coupon name", line);
    g.coupon = payload;
  } else if (!payload.empty()) {
    throw ParseError("generator '" + head + "' takes no color", line);
  }

  if (words.size() < need_at + 1 || words[need_at][0] != '@')
    throw ParseError("expected '@<position>'", line);
  try {
    g.pos = std::stoi(words[need_at].substr(1));
  } catch (...) {
    throw ParseError("bad position '" + words[need_at] + "'", line);
  }
  if (g.pos < 1) throw ParseError("positions are 1-based", line);

  if (g.kind == GenKind::Coupon) {
    if (words.size() != 3) throw ParseError("coupon needs 'n->m'", line);
    auto arrow = words[2].find("->");
    if (arrow == std::string::npos) throw ParseError("coupon needs 'n->m'", line);
    try {
      g.coupon_in = std::stoi(words[2].substr(0, arrow));
      g.coupon_out = std::stoi(words[2].substr(arrow + 2));
    } catch (...) {
      throw ParseError("bad coupon arity '" + words[2] + "'", line);
    }
    if (g.coupon_in < 0 || g.coupon_out < 0)
      throw ParseError("coupon arities must be non-negative", line);
  } else if (words.size() != 2) {
    throw ParseError("unexpected trailing tokens in slice", line);
  }
  return g;
}

}  // namespace

// Applies one generator to the running token list; bookkeeping checks only.
static void apply_generator(std::vector<Token>& toks, const Generator& g,
                            const std::map<std::string, CouponDecl>& coupons) {
  const int n = static_cast<int>(toks.size());
  const int p = g.pos;
  auto range_error = [&](const char* what) {
    throw StrandCountError(at_line(g.line) + std::string(what) + " position " +
                           std::to_string(p) + " out of range (" +
                           std::to_string(n) + " strands)");
  };
  switch (g.kind) {
    case GenKind::Id:
      return;
    case GenKind::BraidP:
    case GenKind::BraidM:
      if (p > n - 1) range_error("braid");
      std::swap(toks[p - 1], toks[p]);
      return;
    case GenKind::TwistP:
    case GenKind::TwistM:
      if (p > n) range_error("twist");
      return;
    case GenKind::Cup: {
      if (p > n + 1) range_error("cup");
      Token plus{g.color.kind, g.color.name, +1};
      Token minus{g.color.kind, g.color.name, -1};
      toks.insert(toks.begin() + (p - 1), {plus, minus});
      return;
    }
    case GenKind::Cap: {
      if (p > n - 1) range_error("cap");
      const Token& a = toks[p - 1];
      const Token& b = toks[p];
      if (a.kind != g.color.kind || a.name != g.color.name ||
          b.kind != g.color.kind || b.name != g.color.name)
        throw ParseError("cap color does not match the strands at position " +
                             std::to_string(p),
                         g.line);
      if (a.sign != -b.sign)
        throw ParseError("cap needs opposite orientations at position " +
                             std::to_string(p),
                         g.line);
      toks.erase(toks.begin() + (p - 1), toks.begin() + (p + 1));
      return;
    }
    case GenKind::Coupon: {
      auto it = coupons.find(g.coupon);
      if (it == coupons.end())
        throw ParseError("coupon '" + g.coupon + "' is not declared", g.line);
      const CouponDecl& decl = it->second;
      if (static_cast<int>(decl.domain.size()) != g.coupon_in ||
          static_cast<int>(decl.codomain.size()) != g.coupon_out)
        throw ParseError("coupon '" + g.coupon + "' arity disagrees with its "
                         "declaration",
                         g.line);
      if (p + g.coupon_in - 1 > n) range_error("coupon");
      for (int k = 0; k < g.coupon_in; ++k)
        if (!(toks[p - 1 + k] == decl.domain[k]))
          throw ParseError("coupon '" + g.coupon +
                               "' domain does not match the strands",
                           g.line);
      toks.erase(toks.begin() + (p - 1), toks.begin() + (p - 1 + g.coupon_in));
      toks.insert(toks.begin() + (p - 1), decl.codomain.begin(),
                  decl.codomain.end());
      return;
    }
  }
}

static void check_boundary_variables(const RibbonDiagram& d) {
  struct Occ {
    int bottom = 0, top = 0;
    int bottom_sign_sum = 0, top_sign_sum = 0;
  };
  std::map<std::string, Occ> occ;
  for (const Token& t : d.bottom)
    if (t.kind == TokenKind::Rainbow) {
      occ[t.name].bottom++;
      occ[t.name].bottom_sign_sum += t.sign;
    }
  for (const Token& t : d.top)
    if (t.kind == TokenKind::Rainbow) {
      occ[t.name].top++;
      occ[t.name].top_sign_sum += t.sign;
    }
  for (const auto& [name, o] : occ) {
    if (o.bottom > 2 || o.top > 2)
      throw ParseError("variable $" + name + " appears more than twice");
    if (o.bottom == 2) {
      if (o.top != 0)
        throw ParseError("variable $" + name +
                         " cannot appear in both boundaries as a pair");
      if (o.bottom_sign_sum != 0)
        throw ParseError("paired variable $" + name +
                         " needs opposite orientations");
    } else if (o.bottom == 1) {
      if (o.top != 1)
        throw ParseError("variable $" + name +
                         " must run through to the top exactly once");
      if (o.bottom_sign_sum != o.top_sign_sum)
        throw ParseError("through variable $" + name +
                         " changes orientation");
    } else if (o.top == 2 && o.top_sign_sum != 0) {
      throw ParseError("paired variable $" + name +
                       " needs opposite orientations");
    }
  }
}

void validate_diagram(const RibbonDiagram& d) {
  for (const Token& t : d.bottom)
    if (t.kind == TokenKind::Surgery)
      throw UnclosedSurgeryComponent("surgery strand ?" + t.name +
                                     " on the bottom boundary");
  for (const auto& [name, decl] : d.coupons)
    for (const Token& t : decl.domain)
      if (t.kind != TokenKind::Colored)
        throw ParseError("coupon '" + name + "' boundaries must be colored");
  for (const auto& [name, decl] : d.coupons)
    for (const Token& t : decl.codomain)
      if (t.kind != TokenKind::Colored)
        throw ParseError("coupon '" + name + "' boundaries must be colored");

  std::vector<Token> toks = d.bottom;
  for (const Generator& g : d.slices) apply_generator(toks, g, d.coupons);

  for (const Token& t : toks)
    if (t.kind == TokenKind::Surgery)
      throw UnclosedSurgeryComponent("surgery strand ?" + t.name +
                                     " exits through the top");
  for (const Token& t : d.top)
    if (t.kind == TokenKind::Surgery)
      throw UnclosedSurgeryComponent("surgery strand ?" + t.name +
                                     " listed on the top boundary");
  if (toks.size() != d.top.size())
    throw ParseError("top boundary lists " + std::to_string(d.top.size()) +
                     " strands but the slices produce " +
                     std::to_string(toks.size()));
  for (size_t k = 0; k < toks.size(); ++k)
    if (!(toks[k] == d.top[k]))
      throw ParseError("top boundary mismatch at position " +
                       std::to_string(k + 1) + " (declared " +
                       token_text(d.top[k]) + ", slices give " +
                       token_text(toks[k]) + ")");
  check_boundary_variables(d);
}

RibbonDiagram parse_diagram(const std::string& text) {
  RibbonDiagram d;
  bool have_bottom = false, have_top = false;
  int bottom_line = 0, top_line = 0;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::vector<std::string> words = split_ws(raw);
    if (words.empty()) continue;
    if (words[0] == "type")
      throw ParseError("type headers belong to cobordism files", lineno);
    if (words[0] == "bottom:") {
      if (have_bottom) throw ParseError("duplicate bottom boundary", lineno);
      if (have_top) throw ParseError("bottom after top", lineno);
      have_bottom = true;
      bottom_line = lineno;
      std::map<std::string, int> seen;
      for (size_t k = 1; k < words.size(); ++k)
        d.bottom.push_back(parse_boundary_token(words[k], lineno, seen));
    } else if (words[0] == "top:") {
      if (!have_bottom) throw ParseError("top before bottom", lineno);
      if (have_top) throw ParseError("duplicate top boundary", lineno);
      have_top = true;
      top_line = lineno;
      std::map<std::string, int> seen;
      for (size_t k = 1; k < words.size(); ++k)
        d.top.push_back(parse_boundary_token(words[k], lineno, seen));
    } else if (words[0] == "slice") {
      if (!have_bottom) throw ParseError("slice before bottom", lineno);
      if (have_top) throw ParseError("slice after top", lineno);
      d.slices.push_back(
          parse_slice(std::vector<std::string>(words.begin() + 1, words.end()),
                      lineno));
    } else if (words[0] == "coupon") {
      if (words.size() < 3 || words[1].back() != ':')
        throw ParseError("coupon declaration needs 'coupon name: ... -> ...'",
                         lineno);
      std::string name = words[1].substr(0, words[1].size() - 1);
      if (!valid_name(name)) throw ParseError("bad coupon name", lineno);
      if (d.coupons.count(name))
        throw ParseError("duplicate coupon '" + name + "'", lineno);
      CouponDecl decl;
      std::map<std::string, int> seen;
      bool after_arrow = false;
      for (size_t k = 2; k < words.size(); ++k) {
        if (words[k] == "->") {
          if (after_arrow) throw ParseError("duplicate '->'", lineno);
          after_arrow = true;
          continue;
        }
        (after_arrow ? decl.codomain : decl.domain)
            .push_back(parse_boundary_token(words[k], lineno, seen));
      }
      if (!after_arrow) throw ParseError("coupon declaration needs '->'", lineno);
      d.coupons[name] = decl;
    } else {
      throw ParseError("unrecognized line '" + words[0] + " ...'", lineno);
    }
  }
  if (!have_bottom) throw ParseError("missing bottom boundary", lineno);
  if (!have_top) throw ParseError("missing top boundary", lineno);
  (void)bottom_line;
  (void)top_line;
  validate_diagram(d);
  return d;
}

RibbonDiagram parse_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_diagram(ss.str());
}

CobordismFile parse_cobordism(const std::string& text) {
  CobordismFile cf;
  std::ostringstream body;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  bool saw_bottom_type = false, saw_top_type = false;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string stripped = raw;
    auto hash = stripped.find('#');
    if (hash != std::string::npos) stripped.erase(hash);
    std::vector<std::string> words = split_ws(stripped);
    if (!words.empty() && words[0] == "type") {
      if (words.size() < 2 || (words[1] != "bottom:" && words[1] != "top:"))
        throw ParseError("type header needs 'type bottom:' or 'type top:'",
                         lineno);
      std::string rest;
      for (size_t k = 2; k < words.size(); ++k) rest += words[k];
      try {
        if (words[1] == "bottom:") {
          if (saw_bottom_type)
            throw ParseError("duplicate bottom type", lineno);
          cf.bottom = parse_type(rest);
          saw_bottom_type = true;
        } else {
          if (saw_top_type) throw ParseError("duplicate top type", lineno);
          cf.top = parse_type(rest);
          saw_top_type = true;
        }
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
      body << '\n';
    } else {
      body << raw << '\n';
    }
  }
  if (saw_bottom_type != saw_top_type)
    throw ParseError("cobordism files need both type headers");
  cf.has_types = saw_bottom_type;
  cf.diagram = parse_diagram(body.str());
  return cf;
}

CobordismFile parse_cobordism_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cobordism(ss.str());
}

namespace {

std::string token_text(const Token& t) {
  switch (t.kind) {
    case TokenKind::Colored:
      return t.name + (t.sign > 0 ? "+" : "-");
    case TokenKind::Rainbow:
      return "$" + t.name + (t.sign > 0 ? "+" : "-");
    case TokenKind::Surgery:
      return "?" + t.name;
  }
  return {};
}

std::string color_text(const Token& c) {
  switch (c.kind) {
    case TokenKind::Colored:
      return c.name;
    case TokenKind::Rainbow:
      return "$" + c.name;
    case TokenKind::Surgery:
      return "?" + c.name;
  }
  return {};
}

}  // namespace

std::string diagram_to_string(const RibbonDiagram& d) {
  std::ostringstream os;
  for (const auto& [name, decl] : d.coupons) {
    os << "coupon " << name << ":";
    for (const Token& t : decl.domain) os << ' ' << token_text(t);
    os << " ->";
    for (const Token& t : decl.codomain) os << ' ' << token_text(t);
    os << '\n';
  }
  os << "bottom:";
  for (const Token& t : d.bottom) os << ' ' << token_text(t);
  os << '\n';
  for (const Generator& g : d.slices) {
    os << "slice ";
    switch (g.kind) {
      case GenKind::Id:
        os << "id";
        break;
      case GenKind::BraidP:
        os << "braid+ @" << g.pos;
        break;
      case GenKind::BraidM:
        os << "braid- @" << g.pos;
        break;
      case GenKind::TwistP:
        os << "twist+ @" << g.pos;
        break;
      case GenKind::TwistM:
        os << "twist- @" << g.pos;
        break;
      case GenKind::Cup:
        os << "cup[" << color_text(g.color) << "] @" << g.pos;
        break;
      case GenKind::Cap:
        os << "cap[" << color_text(g.color) << "] @" << g.pos;
        break;
      case GenKind::Coupon:
        os << "coupon[" << g.coupon << "] @" << g.pos << ' ' << g.coupon_in
           << "->" << g.coupon_out;
        break;
    }
    os << '\n';
  }
  os << "top:";
  for (const Token& t : d.top) os << ' ' << token_text(t);
  os << '\n';
  return os.str();
}

// --- builders ---------------------------------------------------------------

RibbonDiagram build_rt(const ModularCategoryData& cat, const DecoratedType& t,
                       const std::vector<int>& i, const std::vector<int>& j) {
  if (static_cast<int>(i.size()) != t.m)
    throw IndexArityMismatch("left index needs " + std::to_string(t.m) +
                             " labels");
  if (static_cast<int>(j.size()) != t.n)
    throw IndexArityMismatch("right index needs " + std::to_string(t.n) +
                             " labels");
  auto check_label = [&](int v) {
    if (v < 0 || v >= cat.rank())
      throw IndexArityMismatch("label index out of range");
  };
  for (int v : i) check_label(v);
  for (int v : j) check_label(v);

  RibbonDiagram d;
  for (int v : i) d.bottom.push_back({TokenKind::Colored, cat.labels[v], -1});
  int entry_no = 0;
  std::vector<std::pair<int, int>> rainbow;  // (entry index, width)
  for (const TypeEntry& e : t.entries) {
    ++entry_no;
    if (const int* a = std::get_if<int>(&e)) {
      for (int r = 1; r <= *a; ++r)
        d.bottom.push_back(
            {TokenKind::Rainbow, "z" + std::to_string(entry_no) + "_" +
                                     std::to_string(r),
             +1});
      for (int r = *a; r >= 1; --r)
        d.bottom.push_back(
            {TokenKind::Rainbow, "z" + std::to_string(entry_no) + "_" +
                                     std::to_string(r),
             -1});
      rainbow.emplace_back(entry_no, *a);
    } else {
      const Mark& mk = std::get<Mark>(e);
      int w = cat.find_label(mk.label);
      if (w < 0)
        throw NotSupported("mark color '" + mk.label + "' is not simple");
      d.bottom.push_back({TokenKind::Colored, mk.label, mk.sign});
    }
  }
  for (int r = t.n - 1; r >= 0; --r)
    d.bottom.push_back({TokenKind::Colored, cat.labels[j[r]], +1});

  // Cap each rainbow innermost first; earlier entries are already gone when a
  // later one is processed, so the base offset counts marks only.
  int base = t.m;
  int seen_entry = 0;
  for (const TypeEntry& e : t.entries) {
    ++seen_entry;
    if (const int* a = std::get_if<int>(&e)) {
      for (int r = *a; r >= 1; --r) {
        Generator g;
        g.kind = GenKind::Cap;
        g.color = {TokenKind::Rainbow,
                   "z" + std::to_string(seen_entry) + "_" + std::to_string(r),
                   +1};
        g.pos = base + r;
        d.slices.push_back(g);
      }
    } else {
      ++base;
    }
  }

  for (int v : i) d.top.push_back({TokenKind::Colored, cat.labels[v], -1});
  for (const TypeEntry& e : t.entries)
    if (const Mark* mk = std::get_if<Mark>(&e))
      d.top.push_back({TokenKind::Colored, mk->label, mk->sign});
  for (int r = t.n - 1; r >= 0; --r)
    d.top.push_back({TokenKind::Colored, cat.labels[j[r]], +1});

  validate_diagram(d);
  return d;
}

void append_ring(RibbonDiagram& d, const std::string& name, int p, int w) {
  Generator g;
  g.kind = GenKind::Cup;
  g.color = {TokenKind::Surgery, name, +1};
  g.pos = p;
  d.slices.push_back(g);
  for (int k = 1; k <= w; ++k) {
    Generator b;
    b.kind = GenKind::BraidP;
    b.pos = p + k;
    d.slices.push_back(b);
  }
  for (int k = 0; k < w; ++k) {
    Generator b;
    b.kind = GenKind::BraidM;
    b.pos = p + k;
    d.slices.push_back(b);
  }
  Generator c;
  c.kind = GenKind::Cap;
  c.color = {TokenKind::Surgery, name, +1};
  c.pos = p + w;
  d.slices.push_back(c);
}

RibbonDiagram build_omega(int n) {
  if (n < 0) throw StrandCountError("omega needs n >= 0");
  RibbonDiagram d;
  auto zvar = [](int l) { return "z" + std::to_string(l); };
  auto yvar = [](int l) { return "y" + std::to_string(l); };
  for (int l = 1; l <= n; ++l)
    d.bottom.push_back({TokenKind::Rainbow, zvar(l), +1});
  for (int l = n; l >= 1; --l)
    d.bottom.push_back({TokenKind::Rainbow, zvar(l), -1});

  auto push = [&](GenKind k, int pos, Token color = {}) {
    Generator g;
    g.kind = k;
    g.pos = pos;
    g.color = color;
    d.slices.push_back(g);
  };

  // Stage l: tokens are z1+..zl+ zl-..z1- then the finished inner cups.
  for (int l = n; l >= 1; --l) {
    push(GenKind::Cup, l + 2, {TokenKind::Rainbow, yvar(l), +1});
    append_ring(d, "A" + std::to_string(l), l + 1, 2);
    push(GenKind::Cap, l, {TokenKind::Rainbow, zvar(l), +1});
    // Walk the fresh cup to its nested slot: minus leg past the remaining
    // z tail and the inner block, plus leg past the z tail.  Crossings over
    // outer tails and over inner cups take opposite senses so each ringed
    // tube stays on one side of the others.
    int P = l - 1;                 // z heads left of the cup
    int T = l - 1;                 // z tails to cross
    int B = 2 * (n - l);           // finished inner block
    for (int s = 1; s <= T; ++s) push(GenKind::BraidP, P + 1 + s);
    for (int s = 1; s <= B; ++s) push(GenKind::BraidM, P + 1 + T + s);
    for (int s = 1; s <= T; ++s) push(GenKind::BraidP, P + s);
  }

  for (int l = 1; l <= n; ++l)
    d.top.push_back({TokenKind::Rainbow, yvar(l), +1});
  for (int l = n; l >= 1; --l)
    d.top.push_back({TokenKind::Rainbow, yvar(l), -1});

  validate_diagram(d);
  return d;
}

namespace {

std::set<std::string> variable_names(const RibbonDiagram& d, TokenKind kind) {
  std::set<std::string> names;
  auto scan = [&](const Token& t) {
    if (t.kind == kind) names.insert(t.name);
  };
  for (const Token& t : d.bottom) scan(t);
  for (const Token& t : d.top) scan(t);
  for (const Generator& g : d.slices)
    if (g.kind == GenKind::Cup || g.kind == GenKind::Cap) scan(g.color);
  return names;
}

void rename_tokens(RibbonDiagram& d, TokenKind kind,
                   const std::map<std::string, std::string>& ren) {
  auto fix = [&](Token& t) {
    if (t.kind != kind) return;
    auto it = ren.find(t.name);
    if (it != ren.end()) t.name = it->second;
  };
  for (Token& t : d.bottom) fix(t);
  for (Token& t : d.top) fix(t);
  for (Generator& g : d.slices)
    if (g.kind == GenKind::Cup || g.kind == GenKind::Cap) fix(g.color);
}

void recolor_variable(RibbonDiagram& d, const std::string& var,
                      const std::string& label) {
  auto fix = [&](Token& t) {
    if (t.kind == TokenKind::Rainbow && t.name == var) {
      t.kind = TokenKind::Colored;
      t.name = label;
    }
  };
  for (Token& t : d.bottom) fix(t);
  for (Token& t : d.top) fix(t);
  for (Generator& g : d.slices)
    if (g.kind == GenKind::Cup || g.kind == GenKind::Cap) fix(g.color);
}

void make_surgery_variable(RibbonDiagram& d, const std::string& var,
                           const std::string& surgery) {
  auto fix = [&](Token& t) {
    if (t.kind == TokenKind::Rainbow && t.name == var) {
      t.kind = TokenKind::Surgery;
      t.name = surgery;
    }
  };
  for (Token& t : d.bottom) fix(t);
  for (Token& t : d.top) fix(t);
  for (Generator& g : d.slices)
    if (g.kind == GenKind::Cup || g.kind == GenKind::Cap) fix(g.color);
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  std::string name = base;
  int k = 1;
  while (used.count(name)) name = base + "_" + std::to_string(k++);
  used.insert(name);
  return name;
}

// Renames d2's rainbow/surgery variables away from d1's.
void sanitize_names(const RibbonDiagram& d1, RibbonDiagram& d2) {
  for (TokenKind kind : {TokenKind::Rainbow, TokenKind::Surgery}) {
    std::set<std::string> used = variable_names(d1, kind);
    std::set<std::string> own = variable_names(d2, kind);
    for (const std::string& n : own) used.insert(n);
    std::map<std::string, std::string> ren;
    for (const std::string& n : own)
      if (variable_names(d1, kind).count(n)) ren[n] = fresh_name(n + "_r", used);
    if (!ren.empty()) rename_tokens(d2, kind, ren);
  }
}

}  // namespace

RibbonDiagram tensor_diagram(const RibbonDiagram& d1, const RibbonDiagram& d2c) {
  RibbonDiagram d2 = d2c;
  sanitize_names(d1, d2);
  RibbonDiagram out;
  out.bottom = d1.bottom;
  out.bottom.insert(out.bottom.end(), d2.bottom.begin(), d2.bottom.end());
  out.slices = d1.slices;
  const int shift = static_cast<int>(d1.top.size());
  for (Generator g : d2.slices) {
    g.pos += shift;
    out.slices.push_back(g);
  }
  out.top = d1.top;
  out.top.insert(out.top.end(), d2.top.begin(), d2.top.end());
  out.coupons = d1.coupons;
  for (const auto& [name, decl] : d2.coupons) {
    if (out.coupons.count(name))
      throw ParseError("duplicate coupon '" + name + "' in tensor");
    out.coupons[name] = decl;
  }
  validate_diagram(out);
  return out;
}

namespace {

// Strand-id simulation: returns final ids, fills `touched` (ids acted on by
// braid/twist/cap/coupon) and a remapped slice list with one boundary column
// (id `drop`) deleted.
struct IdTrace {
  std::vector<long> final_ids;
  std::set<long> touched;
};

IdTrace trace_ids(const RibbonDiagram& d) {
  IdTrace tr;
  std::vector<long> ids(d.bottom.size());
  long next = 0;
  for (size_t k = 0; k < ids.size(); ++k) ids[k] = next++;
  for (const Generator& g : d.slices) {
    const int p = g.pos;
    switch (g.kind) {
      case GenKind::Id:
        break;
      case GenKind::BraidP:
      case GenKind::BraidM:
        tr.touched.insert(ids[p - 1]);
        tr.touched.insert(ids[p]);
        std::swap(ids[p - 1], ids[p]);
        break;
      case GenKind::TwistP:
      case GenKind::TwistM:
        tr.touched.insert(ids[p - 1]);
        break;
      case GenKind::Cup:
        ids.insert(ids.begin() + (p - 1), {next, next + 1});
        next += 2;
        break;
      case GenKind::Cap:
        tr.touched.insert(ids[p - 1]);
        tr.touched.insert(ids[p]);
        ids.erase(ids.begin() + (p - 1), ids.begin() + (p + 1));
        break;
      case GenKind::Coupon: {
        for (int k = 0; k < g.coupon_in; ++k) tr.touched.insert(ids[p - 1 + k]);
        ids.erase(ids.begin() + (p - 1), ids.begin() + (p - 1 + g.coupon_in));
        std::vector<long> fresh(g.coupon_out);
        for (long& v : fresh) v = next++;
        ids.insert(ids.begin() + (p - 1), fresh.begin(), fresh.end());
        break;
      }
    }
  }
  tr.final_ids = std::move(ids);
  return tr;
}

// Deletes one untouched boundary band (bottom position `col`, 0-based) from a
// diagram, remapping slice positions.
std::vector<Generator> drop_band_slices(const RibbonDiagram& d, int col) {
  std::vector<Generator> out;
  std::vector<bool> is_band(d.bottom.size(), false);
  is_band[col] = true;
  // `band_at` tracks the band's current 1-based position.
  int band_at = col + 1;
  int count = static_cast<int>(d.bottom.size());
  for (const Generator& g : d.slices) {
    Generator h = g;
    const int p = g.pos;
    auto shifted = [&](int q) { return q > band_at ? q - 1 : q; };
    switch (g.kind) {
      case GenKind::Id:
        break;
      case GenKind::BraidP:
      case GenKind::BraidM:
        h.pos = shifted(p);
        break;
      case GenKind::TwistP:
      case GenKind::TwistM:
        h.pos = shifted(p);
        break;
      case GenKind::Cup:
        h.pos = shifted(p);
        if (p <= band_at) band_at += 2;
        count += 2;
        break;
      case GenKind::Cap:
        h.pos = shifted(p);
        if (p + 1 < band_at) band_at -= 2;
        count -= 2;
        break;
      case GenKind::Coupon:
        h.pos = shifted(p);
        if (p + g.coupon_in - 1 < band_at)
          band_at += g.coupon_out - g.coupon_in;
        count += g.coupon_out - g.coupon_in;
        break;
    }
    out.push_back(h);
  }
  return out;
}

}  // namespace

RibbonDiagram horizontal_assemble(const RibbonDiagram& d1c,
                                  const RibbonDiagram& d2c, int m) {
  if (m < 1) throw NotComposable("horizontal gluing needs m >= 1");
  validate_diagram(d1c);
  validate_diagram(d2c);
  RibbonDiagram d1 = d1c;
  RibbonDiagram d2 = d2c;
  sanitize_names(d1, d2);
  const int B1 = static_cast<int>(d1.bottom.size());
  const int B2 = static_cast<int>(d2.bottom.size());
  const int T1 = static_cast<int>(d1.top.size());
  const int T2 = static_cast<int>(d2.top.size());
  if (B1 < m || T1 < m || B2 < m || T2 < m)
    throw TangledBoundaryBand("boundaries are too small for m = " +
                              std::to_string(m));

  IdTrace tr1 = trace_ids(d1);
  IdTrace tr2 = trace_ids(d2);
  // d1: bands are the last m bottom columns, matching the last m top slots.
  for (int k = 0; k < m; ++k) {
    long id = static_cast<long>(B1 - m + k);
    if (tr1.touched.count(id))
      throw TangledBoundaryBand("a right boundary band of the left factor is "
                                "tangled");
    if (tr1.final_ids[T1 - m + k] != id)
      throw TangledBoundaryBand("right boundary bands of the left factor are "
                                "permuted");
  }
  for (int k = 0; k < m; ++k) {
    long id = static_cast<long>(k);
    if (tr2.touched.count(id))
      throw TangledBoundaryBand("a left boundary band of the right factor is "
                                "tangled");
    if (tr2.final_ids[k] != id)
      throw TangledBoundaryBand("left boundary bands of the right factor are "
                                "permuted");
  }

  // Fresh middle names, then identify band pairs through omega_{m-1}.
  std::set<std::string> used = variable_names(d1, TokenKind::Rainbow);
  for (const std::string& s : variable_names(d2, TokenKind::Rainbow))
    used.insert(s);
  std::set<std::string> used_surg = variable_names(d1, TokenKind::Surgery);
  for (const std::string& s : variable_names(d2, TokenKind::Surgery))
    used_surg.insert(s);

  RibbonDiagram omega = build_omega(m - 1);
  {
    std::map<std::string, std::string> ren_r;
    for (const std::string& s : variable_names(omega, TokenKind::Rainbow))
      ren_r[s] = fresh_name("g" + s, used);
    rename_tokens(omega, TokenKind::Rainbow, ren_r);
    std::map<std::string, std::string> ren_s;
    for (const std::string& s : variable_names(omega, TokenKind::Surgery))
      ren_s[s] = fresh_name("g" + s, used_surg);
    rename_tokens(omega, TokenKind::Surgery, ren_s);
  }

  for (int k = 1; k <= m - 1; ++k) {
    // Pair k: d1 bottom column B1-m+k-1 (0-based), d2 bottom column k
    // (0-based), omega top variable at slot k-1.
    const Token a = d1.bottom[B1 - m + k - 1];
    const Token b = d2.bottom[k];
    const Token y = omega.top[k - 1];
    if (a.kind == TokenKind::Colored && b.kind == TokenKind::Colored) {
      if (a.name != b.name)
        throw BoundaryTypeMismatch("glued bands carry different colors");
      recolor_variable(omega, y.name, a.name);
    } else if (a.kind == TokenKind::Colored) {
      recolor_variable(d2, b.name, a.name);
      recolor_variable(omega, y.name, a.name);
    } else if (b.kind == TokenKind::Colored) {
      recolor_variable(d1, a.name, b.name);
      recolor_variable(omega, y.name, b.name);
    } else {
      rename_tokens(d1, TokenKind::Rainbow, {{a.name, y.name}});
      rename_tokens(d2, TokenKind::Rainbow, {{b.name, y.name}});
    }
  }

  std::vector<Generator> s1 = drop_band_slices(d1, B1 - 1);
  std::vector<Generator> s2 = drop_band_slices(d2, 0);

  RibbonDiagram out;
  out.bottom.assign(d1.bottom.begin(), d1.bottom.end() - m);
  out.bottom.insert(out.bottom.end(), omega.bottom.begin(), omega.bottom.end());
  out.bottom.insert(out.bottom.end(), d2.bottom.begin() + m, d2.bottom.end());

  const int off_omega = B1 - m;
  for (Generator g : omega.slices) {
    g.pos += off_omega;
    out.slices.push_back(g);
  }
  for (const Generator& g : s1) out.slices.push_back(g);
  const int off2 = T1 - 1;
  for (Generator g : s2) {
    g.pos += off2;
    out.slices.push_back(g);
  }

  out.top.assign(d1.top.begin(), d1.top.end() - 1);
  out.top.insert(out.top.end(), d2.top.begin() + 1, d2.top.end());
  out.coupons = d1.coupons;
  for (const auto& [name, decl] : d2.coupons) {
    if (out.coupons.count(name))
      throw ParseError("duplicate coupon '" + name + "' in gluing");
    out.coupons[name] = decl;
  }
  validate_diagram(out);
  return out;
}

RibbonDiagram vertical_concat(const RibbonDiagram& d1c,
                              const RibbonDiagram& d2c) {
  validate_diagram(d1c);
  validate_diagram(d2c);
  RibbonDiagram d1 = d1c;
  RibbonDiagram d2 = d2c;
  sanitize_names(d1, d2);
  if (d1.top.size() != d2.bottom.size())
    throw BoundaryTypeMismatch("stacked boundaries have different widths");

  const int W = static_cast<int>(d1.top.size());

  // Union-find over junction variable slots: "1:name" and "2:name".
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find =
      [&](const std::string& x) -> std::string {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    return it->second = find(it->second);
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  };
  std::map<std::string, std::string> color_of;  // class root -> label

  for (int k = 0; k < W; ++k) {
    const Token& a = d1.top[k];
    const Token& b = d2.bottom[k];
    if (a.sign != b.sign)
      throw BoundaryTypeMismatch("orientation mismatch at position " +
                                 std::to_string(k + 1));
    if (a.kind == TokenKind::Colored && b.kind == TokenKind::Colored) {
      if (a.name != b.name)
        throw BoundaryTypeMismatch("color mismatch at position " +
                                   std::to_string(k + 1));
    } else if (a.kind == TokenKind::Rainbow && b.kind == TokenKind::Rainbow) {
      unite("1:" + a.name, "2:" + b.name);
    } else if (a.kind == TokenKind::Rainbow) {
      color_of[find("1:" + a.name)] = b.name;
      parent.try_emplace("1:" + a.name, "1:" + a.name);
    } else {
      color_of[find("2:" + b.name)] = a.name;
      parent.try_emplace("2:" + b.name, "2:" + b.name);
    }
  }
  // Re-root colors after all unions.
  {
    std::map<std::string, std::string> fixed;
    for (auto& [slot, label] : color_of) {
      std::string r = find(slot);
      auto it = fixed.find(r);
      if (it != fixed.end() && it->second != label)
        throw BoundaryTypeMismatch("conflicting colors for glued bands");
      fixed[r] = label;
    }
    color_of = std::move(fixed);
  }

  // Occurrence counts at the junction per variable.
  std::map<std::string, int> occ;
  for (int k = 0; k < W; ++k) {
    if (d1.top[k].kind == TokenKind::Rainbow) occ["1:" + d1.top[k].name]++;
    if (d2.bottom[k].kind == TokenKind::Rainbow) occ["2:" + d2.bottom[k].name]++;
  }
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [slot, cnt] : occ) members[find(slot)].push_back(slot);

  std::set<std::string> used_r = variable_names(d1, TokenKind::Rainbow);
  for (const std::string& s : variable_names(d2, TokenKind::Rainbow))
    used_r.insert(s);
  std::set<std::string> used_s = variable_names(d1, TokenKind::Surgery);
  for (const std::string& s : variable_names(d2, TokenKind::Surgery))
    used_s.insert(s);

  for (const auto& [root, slots] : members) {
    auto colored = color_of.find(root);
    if (colored != color_of.end()) {
      for (const std::string& slot : slots) {
        const std::string name = slot.substr(2);
        if (slot[0] == '1')
          recolor_variable(d1, name, colored->second);
        else
          recolor_variable(d2, name, colored->second);
      }
      continue;
    }
    bool closed = true;
    for (const std::string& slot : slots)
      if (occ.at(slot) != 2) closed = false;
    if (closed) {
      std::string surg = fresh_name("j", used_s);
      for (const std::string& slot : slots) {
        const std::string name = slot.substr(2);
        if (slot[0] == '1')
          make_surgery_variable(d1, name, surg);
        else
          make_surgery_variable(d2, name, surg);
      }
    } else {
      std::string var;
      for (const std::string& slot : slots)
        if (slot[0] == '1') var = slot.substr(2);
      if (var.empty()) var = fresh_name("v", used_r);
      for (const std::string& slot : slots) {
        const std::string name = slot.substr(2);
        if (name == var) continue;
        if (slot[0] == '1')
          rename_tokens(d1, TokenKind::Rainbow, {{name, var}});
        else
          rename_tokens(d2, TokenKind::Rainbow, {{name, var}});
      }
    }
  }

  for (int k = 0; k < W; ++k)
    if (!(d1.top[k] == d2.bottom[k]))
      throw BoundaryTypeMismatch("boundary tokens disagree at position " +
                                 std::to_string(k + 1) + " after gluing");

  RibbonDiagram out;
  out.bottom = d1.bottom;
  out.slices = d1.slices;
  out.slices.insert(out.slices.end(), d2.slices.begin(), d2.slices.end());
  out.top = d2.top;
  out.coupons = d1.coupons;
  for (const auto& [name, decl] : d2.coupons) {
    if (out.coupons.count(name))
      throw ParseError("duplicate coupon '" + name + "' in stacking");
    out.coupons[name] = decl;
  }
  validate_diagram(out);
  return out;
}

RibbonDiagram substitute_vars(const ModularCategoryData& cat,
                              const RibbonDiagram& d,
                              const std::map<std::string, int>& labels) {
  RibbonDiagram out = d;
  for (const auto& [var, lbl] : labels) {
    if (lbl < 0 || lbl >= cat.rank())
      throw UncoloredVariable("label index out of range for $" + var);
    recolor_variable(out, var, cat.labels[lbl]);
  }
  return out;
}

VariableSummary diagram_variables(const RibbonDiagram& d) {
  VariableSummary vs;
  std::map<std::string, std::pair<int, int>> occ;
  std::vector<std::string> order;
  for (const Token& t : d.bottom)
    if (t.kind == TokenKind::Rainbow) {
      if (!occ.count(t.name)) order.push_back(t.name);
      occ[t.name].first++;
    }
  for (const Token& t : d.top)
    if (t.kind == TokenKind::Rainbow) {
      if (!occ.count(t.name)) order.push_back(t.name);
      occ[t.name].second++;
    }
  for (const std::string& name : order) {
    auto [nb, nt] = occ[name];
    if (nb == 2)
      vs.bottom_pairs.push_back(name);
    else if (nb == 1)
      vs.through.push_back(name);
    else if (nt == 2)
      vs.top_pairs.push_back(name);
  }
  return vs;
}

}  // namespace ribcat
