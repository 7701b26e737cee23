#include "ribcat/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "ribcat/errors.hpp"

namespace ribcat {
namespace {

struct Cursor {
  const std::string& s;
  size_t p = 0;

  void skip() {
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
  }
  bool eat(char c) {
    skip();
    if (p < s.size() && s[p] == c) {
      ++p;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return p < s.size() ? s[p] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("bad scalar '" + s + "': " + what);
  }
};

Scalar parse_expr(Cursor& c);

Scalar parse_atom(Cursor& c) {
  c.skip();
  if (c.p >= c.s.size()) c.fail("unexpected end");
  char ch = c.s[c.p];
  if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
    size_t start = c.p;
    while (c.p < c.s.size() &&
           (std::isdigit(static_cast<unsigned char>(c.s[c.p])) || c.s[c.p] == '.'))
      ++c.p;
    return Scalar(std::strtod(c.s.substr(start, c.p - start).c_str(), nullptr), 0.0);
  }
  if (std::isalpha(static_cast<unsigned char>(ch))) {
    size_t start = c.p;
    while (c.p < c.s.size() && std::isalpha(static_cast<unsigned char>(c.s[c.p]))) ++c.p;
    std::string name = c.s.substr(start, c.p - start);
    if (name == "i") return Scalar(0.0, 1.0);
    if (name == "pi") return Scalar(M_PI, 0.0);
    if (name == "sqrt" || name == "exp") {
      if (!c.eat('(')) c.fail(name + " needs parentheses");
      Scalar arg = parse_expr(c);
      if (!c.eat(')')) c.fail("missing ')'");
      return name == "sqrt" ? std::sqrt(arg) : std::exp(arg);
    }
    c.fail("unknown name '" + name + "'");
  }
  if (ch == '(') {
    ++c.p;
    Scalar v = parse_expr(c);
    if (!c.eat(')')) c.fail("missing ')'");
    return v;
  }
  c.fail("unexpected character");
}

Scalar parse_factor(Cursor& c) {
  if (c.eat('-')) return -parse_factor(c);
  if (c.eat('+')) return parse_factor(c);
  Scalar v = parse_atom(c);
  if (c.eat('^')) {
    bool neg = c.eat('-');
    c.skip();
    size_t start = c.p;
    while (c.p < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.p]))) ++c.p;
    if (start == c.p) c.fail("'^' needs an integer exponent");
    long n = std::strtol(c.s.substr(start, c.p - start).c_str(), nullptr, 10);
    Scalar r = std::pow(v, Scalar(static_cast<double>(n), 0.0));
    return neg ? Scalar(1.0, 0.0) / r : r;
  }
  return v;
}

Scalar parse_term(Cursor& c) {
  Scalar v = parse_factor(c);
  for (;;) {
    if (c.eat('*'))
      v *= parse_factor(c);
    else if (c.eat('/'))
      v /= parse_factor(c);
    else
      return v;
  }
}

Scalar parse_expr(Cursor& c) {
  Scalar v = parse_term(c);
  for (;;) {
    if (c.eat('+'))
      v += parse_term(c);
    else if (c.eat('-'))
      v -= parse_term(c);
    else
      return v;
  }
}

}  // namespace

Scalar parse_scalar(const std::string& text) {
  Cursor c{text};
  Scalar v = parse_expr(c);
  c.skip();
  if (c.p != text.size()) c.fail("trailing input");
  return v;
}

}  // namespace ribcat
