#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "engelkit/expr.hpp"

namespace engelkit {

// Names an expression may mention. Coordinates become Coord nodes, parameters
// stay symbolic Named nodes, substitutions are spliced in at parse time (used
// for rationally bound parameters), and basis names become Coord nodes that a
// caller linearizes afterwards (form and field tokens such as dx or @x).
struct SymbolTable {
  std::vector<std::string> coordinates;
  std::vector<std::string> parameters;
  std::map<std::string, Expr> substitutions;
  std::vector<std::string> basis;
};

// Grammar:
//   sum     := signed (('+' | '-') signed)*
//   signed  := '-' signed | product
//   product := power (('*' | '/') power)*
//   power   := atom ['^' ['-'] integer]
//   atom    := number | name | func '(' sum ')' | '(' sum ')'
//   func    := 'sin' | 'cos' | 'exp' | 'ln'
//   number  := digits ['.' digits]
//   name    := ('@' | letter | '_') (letter | digit | '_')*
// `pi` is always defined. Literal arithmetic on rationals is folded.
Expr parse(std::string_view text, const SymbolTable& symbols);

}  // namespace engelkit
