#pragma once

#include <complex>
#include <string>

namespace ribcat {

using Scalar = std::complex<double>;

// Evaluates one scalar literal from a category file.  Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+') factor | atom ('^' integer)?
//   atom   := number | 'i' | 'pi' | 'sqrt' '(' expr ')' | 'exp' '(' expr ')'
//           | '(' expr ')'
// Throws ParseError on malformed input.
Scalar parse_scalar(const std::string& text);

}  // namespace ribcat
