#include "ribcat/types.hpp"

#include <cctype>
#include <sstream>

#include "ribcat/errors.hpp"

namespace ribcat {

namespace {

void skip_ws(const std::string& s, size_t& p) {
  while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
}

bool eat(const std::string& s, size_t& p, char c) {
  skip_ws(s, p);
  if (p < s.size() && s[p] == c) {
    ++p;
    return true;
  }
  return false;
}

int parse_nat(const std::string& s, size_t& p) {
  skip_ws(s, p);
  size_t start = p;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
  if (p == start) throw ParseError("expected a non-negative integer in type");
  return std::stoi(s.substr(start, p - start));
}

std::string parse_word(const std::string& s, size_t& p) {
  skip_ws(s, p);
  size_t start = p;
  while (p < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[p])) || s[p] == '_'))
    ++p;
  if (p == start) throw ParseError("expected a label name in type");
  return s.substr(start, p - start);
}

}  // namespace

DecoratedType parse_type(const std::string& text) {
  size_t p = 0;
  DecoratedType t;
  if (!eat(text, p, '(')) throw ParseError("type must start with '('");
  t.m = parse_nat(text, p);
  if (!eat(text, p, ',')) throw ParseError("expected ',' after left count");
  t.n = parse_nat(text, p);
  if (!eat(text, p, ';')) throw ParseError("expected ';' after boundary counts");
  skip_ws(text, p);
  bool first = true;
  while (true) {
    skip_ws(text, p);
    if (p < text.size() && text[p] == ')') {
      ++p;
      break;
    }
    if (!first && !eat(text, p, ','))
      throw ParseError("expected ',' between type entries");
    skip_ws(text, p);
    if (p >= text.size()) throw ParseError("unterminated type");
    if (text[p] == '(') {
      ++p;
      Mark mk;
      mk.label = parse_word(text, p);
      if (!eat(text, p, ',')) throw ParseError("expected ',' in mark");
      skip_ws(text, p);
      if (p >= text.size() || (text[p] != '+' && text[p] != '-'))
        throw ParseError("mark sign must be '+' or '-'");
      mk.sign = text[p] == '+' ? +1 : -1;
      ++p;
      if (!eat(text, p, ')')) throw ParseError("unterminated mark");
      t.entries.emplace_back(mk);
    } else {
      t.entries.emplace_back(parse_nat(text, p));
    }
    first = false;
  }
  skip_ws(text, p);
  if (p != text.size()) throw ParseError("trailing characters after type");
  return t;
}

std::string type_to_string(const DecoratedType& t) {
  std::ostringstream os;
  os << '(' << t.m << ',' << t.n << ';';
  for (size_t k = 0; k < t.entries.size(); ++k) {
    os << (k ? ", " : " ");
    if (const int* a = std::get_if<int>(&t.entries[k]))
      os << *a;
    else {
      const Mark& mk = std::get<Mark>(t.entries[k]);
      os << '(' << mk.label << ',' << (mk.sign > 0 ? '+' : '-') << ')';
    }
  }
  os << ')';
  return os.str();
}

DecoratedType compose_types(const DecoratedType& t, const DecoratedType& s) {
  if (t.n != s.m)
    throw NotComposable("cannot compose " + type_to_string(t) + " with " +
                        type_to_string(s) + ": inner boundary counts differ");
  if (t.n == 0) throw NotComposable("cannot compose along an empty boundary");
  DecoratedType r;
  r.m = t.m;
  r.n = s.n;
  r.entries = t.entries;
  r.entries.emplace_back(t.n - 1);
  r.entries.insert(r.entries.end(), s.entries.begin(), s.entries.end());
  return r;
}

int genus_plus(const DecoratedType& t) {
  int g = 0;
  for (const auto& e : t.entries)
    if (const int* a = std::get_if<int>(&e)) g += *a;
  return g;
}

namespace {

int mark_label(const ModularCategoryData& cat, const Mark& mk) {
  int w = cat.find_label(mk.label);
  if (w < 0)
    throw NotSupported("mark color '" + mk.label +
                       "' is not a simple label of the category");
  return w;
}

}  // namespace

std::vector<ColorIndex> enumerate_indices(const ModularCategoryData& cat,
                                          const DecoratedType& t) {
  // Validate marks up front so the empty-slot case still reports bad colors.
  for (const auto& e : t.entries)
    if (const Mark* mk = std::get_if<Mark>(&e)) mark_label(cat, *mk);

  std::vector<int> slot_entry;  // entry index per free slot
  for (size_t k = 0; k < t.entries.size(); ++k)
    if (const int* a = std::get_if<int>(&t.entries[k]))
      for (int r = 0; r < *a; ++r) slot_entry.push_back(static_cast<int>(k));

  std::vector<ColorIndex> out;
  std::vector<int> slots(slot_entry.size(), 0);
  const int k = cat.rank();
  while (true) {
    ColorIndex zeta;
    zeta.parts.assign(t.entries.size(), {});
    for (size_t s = 0; s < slots.size(); ++s)
      zeta.parts[slot_entry[s]].push_back(slots[s]);
    out.push_back(std::move(zeta));
    int carry = static_cast<int>(slots.size()) - 1;
    while (carry >= 0 && ++slots[carry] == k) slots[carry--] = 0;
    if (carry < 0) break;
  }
  return out;
}

double index_dim(const ModularCategoryData& cat, const ColorIndex& zeta) {
  double d = 1.0;
  for (const auto& part : zeta.parts)
    for (int lbl : part) d *= cat.qdim[lbl].real();
  return d;
}

std::vector<std::vector<int>> enumerate_tuples(const ModularCategoryData& cat, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> tup(n, 0);
  const int k = cat.rank();
  while (true) {
    out.push_back(tup);
    int carry = n - 1;
    while (carry >= 0 && ++tup[carry] == k) tup[carry--] = 0;
    if (carry < 0) break;
  }
  return out;
}

std::vector<SignedColor> phi_boundary(const ModularCategoryData& cat,
                                      const DecoratedType& t, const ColorIndex& zeta,
                                      const std::vector<int>& i,
                                      const std::vector<int>& j) {
  if (static_cast<int>(i.size()) != t.m || static_cast<int>(j.size()) != t.n)
    throw IndexArityMismatch("side index arity does not match type " +
                             type_to_string(t));
  if (zeta.parts.size() != t.entries.size())
    throw IndexArityMismatch("color index has wrong entry count for type " +
                             type_to_string(t));
  std::vector<SignedColor> b;
  for (int v : i) b.push_back({v, -1});
  for (size_t k = 0; k < t.entries.size(); ++k) {
    if (const int* a = std::get_if<int>(&t.entries[k])) {
      if (static_cast<int>(zeta.parts[k].size()) != *a)
        throw IndexArityMismatch("color tuple arity mismatch in entry " +
                                 std::to_string(k + 1));
      for (int r = 0; r < *a; ++r) b.push_back({zeta.parts[k][r], +1});
      for (int r = *a - 1; r >= 0; --r) b.push_back({zeta.parts[k][r], -1});
    } else {
      if (!zeta.parts[k].empty())
        throw IndexArityMismatch("mark entries carry no free colors");
      const Mark& mk = std::get<Mark>(t.entries[k]);
      b.push_back({mark_label(cat, mk), mk.sign});
    }
  }
  for (int r = t.n - 1; r >= 0; --r) b.push_back({j[r], +1});
  return b;
}

std::string index_to_string(const ModularCategoryData& cat, const ColorIndex& zeta) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (const auto& part : zeta.parts) {
    for (int lbl : part) {
      if (!first) os << ',';
      os << cat.labels[lbl];
      first = false;
    }
  }
  os << ')';
  return os.str();
}

}  // namespace ribcat
