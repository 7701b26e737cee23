#pragma once

#include <map>
#include <string>
#include <vector>

#include "ribcat/types.hpp"

namespace ribcat {

// A strand endpoint in a slice presentation.
//   Colored: a fixed simple label (name is the label string).
//   Rainbow: an open color variable ($name), resolved by a Coloring.
//   Surgery: a surgery-link strand (?name); never reaches the boundary.
enum class TokenKind { Colored, Rainbow, Surgery };

struct Token {
  TokenKind kind = TokenKind::Colored;
  std::string name;
  int sign = +1;
  bool operator==(const Token&) const = default;
};

enum class GenKind { Id, BraidP, BraidM, TwistP, TwistM, Cup, Cap, Coupon };

struct Generator {
  GenKind kind = GenKind::Id;
  int pos = 1;  // 1-based on the current strand list
  Token color;  // cup/cap color (sign field unused)
  std::string coupon;
  int coupon_in = 0;
  int coupon_out = 0;
  int line = 0;  // source line when parsed, 0 for built diagrams
};

// Domain/codomain token lists of a named coupon slot (Colored tokens only).
struct CouponDecl {
  std::vector<Token> domain, codomain;
};

// A ribbon diagram in generic slice position, read bottom to top.
struct RibbonDiagram {
  std::vector<Token> bottom;
  std::vector<Generator> slices;
  std::vector<Token> top;
  std::map<std::string, CouponDecl> coupons;
};

// Parses the line-oriented DSL:
//   bottom: <tok> ...          tokens: label+ label- $var $var+ $var-
//   slice <gen>                id | braid+ @p | braid- @p | twist+ @p |
//                              twist- @p | cup[color] @p | cap[color] @p |
//                              coupon[name] @p n->m
//   top: <tok> ...
//   coupon name: <tok> ... -> <tok> ...   (declares a coupon slot)
// '#' starts a comment.  Bare $var signs are inferred per boundary line:
// first occurrence +, second -.  Cup/cap colors may be a label, $var or
// ?name (surgery).  Throws ParseError, StrandCountError,
// UnclosedSurgeryComponent.
RibbonDiagram parse_diagram(const std::string& text);
RibbonDiagram parse_diagram_file(const std::string& path);

// Re-runs strand bookkeeping on an in-memory diagram (builders call this).
void validate_diagram(const RibbonDiagram& d);

// Cobordism file: two "type bottom:/type top:" header lines, then a diagram.
struct CobordismFile {
  DecoratedType bottom;
  DecoratedType top;
  RibbonDiagram diagram;
  bool has_types = false;
};

CobordismFile parse_cobordism(const std::string& text);
CobordismFile parse_cobordism_file(const std::string& path);

// Textual form that parse_diagram accepts back.
std::string diagram_to_string(const RibbonDiagram& d);

// --- builders ---------------------------------------------------------------

// Standard half-graph for (t, i, j): bottom is the module boundary pattern
// (side strands colored from i and j, marks fixed, integer entries as open
// rainbow variables), rainbows are closed by caps innermost first, side
// strands and marks run through to the top.
RibbonDiagram build_rt(const ModularCategoryData& cat, const DecoratedType& t,
                       const std::vector<int>& i, const std::vector<int>& j);

// The n-ring gluing gadget: n bottom rainbow variables $z<l>, n top rainbow
// variables $y<l>, one surgery ring ?A<l> around each (z-leg, y-leg) pair.
// Nested rainbow order (z1/y1 outermost).
RibbonDiagram build_omega(int n);

// Appends the slices of a surgery ring ?name around the w strands currently
// at positions p..p+w-1.
void append_ring(RibbonDiagram& d, const std::string& name, int p, int w);

// Juxtaposition: d2's strands to the right of d1's.
RibbonDiagram tensor_diagram(const RibbonDiagram& d1, const RibbonDiagram& d2);

// Horizontal gluing along m shared boundary bands: drops d1's rightmost and
// d2's leftmost band (which must be untouched by every slice), merges the
// remaining m-1 band pairs through a fresh omega_{m-1} placed underneath.
// Throws TangledBoundaryBand when a dropped or merged band is tangled.
RibbonDiagram horizontal_assemble(const RibbonDiagram& d1,
                                  const RibbonDiagram& d2, int m);

// Vertical stacking: d1's top boundary must match d2's bottom tokenwise
// (variables by position, colors by label).  Matched rainbow pairs (a cup
// variable of d1 against a cap variable of d2) fuse into fresh 0-framed
// surgery components; through variables keep d1's names.  Throws
// BoundaryTypeMismatch.
RibbonDiagram vertical_concat(const RibbonDiagram& d1, const RibbonDiagram& d2);

// Replaces rainbow variables by fixed labels (tokens and cup/cap colors).
RibbonDiagram substitute_vars(const ModularCategoryData& cat,
                              const RibbonDiagram& d,
                              const std::map<std::string, int>& labels);

// All rainbow variable names, in order of first appearance, split by where
// the pair lives.
struct VariableSummary {
  std::vector<std::string> bottom_pairs;  // capped rainbow pairs from bottom
  std::vector<std::string> top_pairs;     // cup pairs exiting through top
  std::vector<std::string> through;       // one bottom + one top occurrence
};

VariableSummary diagram_variables(const RibbonDiagram& d);

}  // namespace ribcat
