#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "probint/model.hpp"
#include "probint/rational.hpp"

namespace probint::predparse {

// Grammar (whitespace-insensitive, keywords lowercase):
//   expr   := or
//   or     := and { "or" and }
//   and    := not { "and" not }
//   not    := "not" not | atom
//   atom   := cmp | "(" expr ")"
//   cmp    := sum [ ("=="|"!="|"<="|"<"|">="|">") sum ]   (chains rejected)
//   sum    := term { ("+"|"-") term }
//   term   := factor { "*" factor }
//   factor := INT | INT "/" INT | "x" "[" INT "]" | "-" factor | "(" sum ")"
// Division exists only inside the rational literal form. Coordinate
// indices are 1-based as written.

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOp { And, Or };

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct IntLit {
  Integer value;
};
struct RatLit {
  Rational value;
};
struct CoordRef {
  int index;  // 1-based
};
struct Neg {
  AstPtr child;
};
struct ArithBin {
  char op;  // '+', '-', '*'
  AstPtr lhs, rhs;
};
struct Compare {
  CmpOp op;
  AstPtr lhs, rhs;
};
struct Not {
  AstPtr child;
};
struct BoolBin {
  BoolOp op;
  AstPtr lhs, rhs;
};

struct Ast {
  std::variant<IntLit, RatLit, CoordRef, Neg, ArithBin, Compare, Not, BoolBin>
      node;
  std::size_t offset = 0;  // 1-based position of the node's first token
};

bool ast_equal(const Ast& a, const Ast& b);

// Throws InputError with a 1-based character offset on syntax or structural
// type errors. The result is always boolean-typed.
AstPtr parse_predicate(std::string_view text);

// Canonical text form; parse_predicate(unparse(ast)) reproduces the tree.
std::string unparse(const Ast& ast);

// 1-based coordinate indices referenced anywhere in the tree, sorted, unique.
std::vector<int> referenced_coords(const Ast& ast);

// Evaluates the predicate over every tuple of the referenced coordinates and
// returns the normalized (minimal-support) event. Requires every referenced
// coordinate to exist and to have numeric atoms; throws InputError otherwise.
model::Event compile_predicate(const model::ProductSpace& space, const Ast& ast,
                               const std::string& name);

}  // namespace probint::predparse
