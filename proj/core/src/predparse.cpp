#include "probint/predparse.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace probint::predparse {

namespace {

[[noreturn]] void fail(std::size_t offset, const std::string& what) {
  throw InputError("predicate parse error at offset " + std::to_string(offset) +
                   ": " + what);
}

enum class TokKind { Int, Word, Sym, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;      // word or symbol spelling
  Integer value;         // for Int
  std::size_t offset = 0;  // 1-based
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t offset = i + 1;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Token t{TokKind::Int, std::string(text.substr(i, j - i)), 0, offset};
      t.value = Integer(t.text, 10);
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
      std::string word(text.substr(i, j - i));
      if (word != "x" && word != "and" && word != "or" && word != "not")
        fail(offset, "unknown word '" + word + "'");
      out.push_back({TokKind::Word, std::move(word), 0, offset});
      i = j;
      continue;
    }
    auto two = [&](const char* s) {
      return i + 1 < n && text[i] == s[0] && text[i + 1] == s[1];
    };
    if (two("==") || two("!=") || two("<=") || two(">=")) {
      out.push_back({TokKind::Sym, std::string(text.substr(i, 2)), 0, offset});
      i += 2;
      continue;
    }
    if (std::string_view("()[]+-*/<>").find(c) != std::string_view::npos) {
      out.push_back({TokKind::Sym, std::string(1, c), 0, offset});
      ++i;
      continue;
    }
    fail(offset, std::string("unexpected character '") + c + "'");
  }
  out.push_back({TokKind::End, "", 0, n + 1});
  return out;
}

// Binary operator precedence used by both the parser and unparse:
//   or = 1, and = 2, (not = 3, prefix), comparisons = 4 (non-associative),
//   +,- = 5, * = 6, (unary minus = 7, prefix), primaries = 8.
struct OpInfo {
  int prec = 0;
  bool is_cmp = false;
  bool is_bool = false;
  CmpOp cmp{};
  BoolOp boolean{};
  char arith = 0;
};

bool classify(const Token& t, OpInfo& info) {
  if (t.kind == TokKind::Word) {
    if (t.text == "or") {
      info = {1, false, true, {}, BoolOp::Or, 0};
      return true;
    }
    if (t.text == "and") {
      info = {2, false, true, {}, BoolOp::And, 0};
      return true;
    }
    return false;
  }
  if (t.kind != TokKind::Sym) return false;
  if (t.text == "==") info = {4, true, false, CmpOp::Eq, {}, 0};
  else if (t.text == "!=") info = {4, true, false, CmpOp::Ne, {}, 0};
  else if (t.text == "<") info = {4, true, false, CmpOp::Lt, {}, 0};
  else if (t.text == "<=") info = {4, true, false, CmpOp::Le, {}, 0};
  else if (t.text == ">") info = {4, true, false, CmpOp::Gt, {}, 0};
  else if (t.text == ">=") info = {4, true, false, CmpOp::Ge, {}, 0};
  else if (t.text == "+") info = {5, false, false, {}, {}, '+'};
  else if (t.text == "-") info = {5, false, false, {}, {}, '-'};
  else if (t.text == "*") info = {6, false, false, {}, {}, '*'};
  else return false;
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  AstPtr run() {
    AstPtr root = parse(1);
    if (peek().kind != TokKind::End)
      fail(peek().offset, "unexpected trailing input");
    return root;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  void expect_sym(const std::string& s, const std::string& what) {
    if (peek().kind != TokKind::Sym || peek().text != s)
      fail(peek().offset, what);
    ++pos_;
  }

  AstPtr parse(int min_prec) {
    AstPtr left = parse_unary();
    while (true) {
      OpInfo op;
      if (!classify(peek(), op) || op.prec < min_prec) break;
      const std::size_t op_offset = take().offset;
      AstPtr right = parse(op.prec + 1);
      if (op.is_cmp) {
        OpInfo next;
        if (classify(peek(), next) && next.is_cmp)
          fail(peek().offset, "comparison chains are not allowed");
        left = std::make_shared<Ast>(
            Ast{Compare{op.cmp, left, right}, left->offset});
      } else if (op.is_bool) {
        left = std::make_shared<Ast>(
            Ast{BoolBin{op.boolean, left, right}, left->offset});
      } else {
        left = std::make_shared<Ast>(
            Ast{ArithBin{op.arith, left, right}, left->offset});
      }
      (void)op_offset;
    }
    return left;
  }

  AstPtr parse_unary() {
    const Token& t = peek();
    if (t.kind == TokKind::Word && t.text == "not") {
      const std::size_t off = take().offset;
      // "not" binds looser than comparisons: child includes any cmp.
      AstPtr child = parse(4);
      return std::make_shared<Ast>(Ast{Not{child}, off});
    }
    if (t.kind == TokKind::Sym && t.text == "-") {
      const std::size_t off = take().offset;
      AstPtr child = parse_unary();
      return std::make_shared<Ast>(Ast{Neg{child}, off});
    }
    return parse_primary();
  }

  AstPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == TokKind::Int) {
      const Token num = take();
      if (peek().kind == TokKind::Sym && peek().text == "/") {
        ++pos_;
        if (peek().kind != TokKind::Int)
          fail(peek().offset, "expected integer after '/' in rational literal");
        const Token den = take();
        if (den.value == 0)
          fail(den.offset, "zero denominator in rational literal");
        Rational v(num.value, den.value);
        v.canonicalize();
        return std::make_shared<Ast>(Ast{RatLit{v}, num.offset});
      }
      return std::make_shared<Ast>(Ast{IntLit{num.value}, num.offset});
    }
    if (t.kind == TokKind::Word && t.text == "x") {
      const std::size_t off = take().offset;
      expect_sym("[", "expected '[' after 'x'");
      if (peek().kind != TokKind::Int)
        fail(peek().offset, "expected coordinate index");
      const Token idx = take();
      if (!idx.value.fits_sint_p() || idx.value.get_si() < 1)
        fail(idx.offset, "coordinate index must be a positive integer");
      expect_sym("]", "expected ']' after coordinate index");
      return std::make_shared<Ast>(
          Ast{CoordRef{static_cast<int>(idx.value.get_si())}, off});
    }
    if (t.kind == TokKind::Sym && t.text == "(") {
      ++pos_;
      AstPtr inner = parse(1);
      expect_sym(")", "expected ')'");
      return inner;
    }
    fail(t.offset, "expected an operand");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

enum class Type { Arith, Bool };

Type type_check(const Ast& ast) {
  return std::visit(
      [&](const auto& node) -> Type {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, RatLit> ||
                      std::is_same_v<T, CoordRef>) {
          return Type::Arith;
        } else if constexpr (std::is_same_v<T, Neg>) {
          if (type_check(*node.child) != Type::Arith)
            fail(node.child->offset, "operand of '-' must be arithmetic");
          return Type::Arith;
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          if (type_check(*node.lhs) != Type::Arith)
            fail(node.lhs->offset, std::string("left operand of '") + node.op +
                                       "' must be arithmetic");
          if (type_check(*node.rhs) != Type::Arith)
            fail(node.rhs->offset, std::string("right operand of '") + node.op +
                                       "' must be arithmetic");
          return Type::Arith;
        } else if constexpr (std::is_same_v<T, Compare>) {
          if (type_check(*node.lhs) != Type::Arith)
            fail(node.lhs->offset, "comparison operand must be arithmetic");
          if (type_check(*node.rhs) != Type::Arith)
            fail(node.rhs->offset, "comparison operand must be arithmetic");
          return Type::Bool;
        } else if constexpr (std::is_same_v<T, Not>) {
          if (type_check(*node.child) != Type::Bool)
            fail(node.child->offset, "operand of 'not' must be boolean");
          return Type::Bool;
        } else {
          static_assert(std::is_same_v<T, BoolBin>);
          if (type_check(*node.lhs) != Type::Bool)
            fail(node.lhs->offset, "operand of 'and'/'or' must be boolean");
          if (type_check(*node.rhs) != Type::Bool)
            fail(node.rhs->offset, "operand of 'and'/'or' must be boolean");
          return Type::Bool;
        }
      },
      ast.node);
}

int node_prec(const Ast& ast) {
  return std::visit(
      [](const auto& node) -> int {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, BoolBin>)
          return node.op == BoolOp::Or ? 1 : 2;
        else if constexpr (std::is_same_v<T, Not>)
          return 3;
        else if constexpr (std::is_same_v<T, Compare>)
          return 4;
        else if constexpr (std::is_same_v<T, ArithBin>)
          return node.op == '*' ? 6 : 5;
        else if constexpr (std::is_same_v<T, Neg>)
          return 7;
        else
          return 8;
      },
      ast.node);
}

const char* cmp_spelling(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

void unparse_into(const Ast& ast, std::string& out);

void child_into(const Ast& child, int own_prec, bool needs_strictly_higher,
                std::string& out) {
  const int p = node_prec(child);
  const bool wrap = needs_strictly_higher ? (p <= own_prec) : (p < own_prec);
  if (wrap) out += '(';
  unparse_into(child, out);
  if (wrap) out += ')';
}

void unparse_into(const Ast& ast, std::string& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          out += node.value.get_str();
        } else if constexpr (std::is_same_v<T, RatLit>) {
          out += to_fraction_string(node.value);
        } else if constexpr (std::is_same_v<T, CoordRef>) {
          out += "x[" + std::to_string(node.index) + "]";
        } else if constexpr (std::is_same_v<T, Neg>) {
          out += '-';
          child_into(*node.child, 7, false, out);
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          const int p = node.op == '*' ? 6 : 5;
          child_into(*node.lhs, p, false, out);
          out += ' ';
          out += node.op;
          out += ' ';
          child_into(*node.rhs, p, true, out);
        } else if constexpr (std::is_same_v<T, Compare>) {
          child_into(*node.lhs, 4, false, out);
          out += ' ';
          out += cmp_spelling(node.op);
          out += ' ';
          child_into(*node.rhs, 4, true, out);
        } else if constexpr (std::is_same_v<T, Not>) {
          out += "not ";
          child_into(*node.child, 3, false, out);
        } else {
          static_assert(std::is_same_v<T, BoolBin>);
          const int p = node.op == BoolOp::Or ? 1 : 2;
          child_into(*node.lhs, p, false, out);
          out += node.op == BoolOp::Or ? " or " : " and ";
          child_into(*node.rhs, p, true, out);
        }
      },
      ast.node);
}

void collect_coords(const Ast& ast, std::vector<int>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, CoordRef>) {
          out.push_back(node.index);
        } else if constexpr (std::is_same_v<T, Neg> || std::is_same_v<T, Not>) {
          collect_coords(*node.child, out);
        } else if constexpr (std::is_same_v<T, ArithBin> ||
                             std::is_same_v<T, Compare> ||
                             std::is_same_v<T, BoolBin>) {
          collect_coords(*node.lhs, out);
          collect_coords(*node.rhs, out);
        }
      },
      ast.node);
}

Rational eval_arith(const Ast& ast, const std::vector<int>& support,
                    const std::vector<std::size_t>& digit,
                    const model::ProductSpace& space);

bool eval_bool(const Ast& ast, const std::vector<int>& support,
               const std::vector<std::size_t>& digit,
               const model::ProductSpace& space) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Compare>) {
          const Rational l = eval_arith(*node.lhs, support, digit, space);
          const Rational r = eval_arith(*node.rhs, support, digit, space);
          const int c = cmp(l, r);
          switch (node.op) {
            case CmpOp::Eq: return c == 0;
            case CmpOp::Ne: return c != 0;
            case CmpOp::Lt: return c < 0;
            case CmpOp::Le: return c <= 0;
            case CmpOp::Gt: return c > 0;
            case CmpOp::Ge: return c >= 0;
          }
          return false;
        } else if constexpr (std::is_same_v<T, Not>) {
          return !eval_bool(*node.child, support, digit, space);
        } else if constexpr (std::is_same_v<T, BoolBin>) {
          if (node.op == BoolOp::And)
            return eval_bool(*node.lhs, support, digit, space) &&
                   eval_bool(*node.rhs, support, digit, space);
          return eval_bool(*node.lhs, support, digit, space) ||
                 eval_bool(*node.rhs, support, digit, space);
        } else {
          throw InputError("predicate evaluation reached a non-boolean node");
        }
      },
      ast.node);
}

Rational eval_arith(const Ast& ast, const std::vector<int>& support,
                    const std::vector<std::size_t>& digit,
                    const model::ProductSpace& space) {
  return std::visit(
      [&](const auto& node) -> Rational {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return Rational(node.value);
        } else if constexpr (std::is_same_v<T, RatLit>) {
          return node.value;
        } else if constexpr (std::is_same_v<T, CoordRef>) {
          const int coord = node.index - 1;
          const std::size_t pos =
              std::lower_bound(support.begin(), support.end(), coord) -
              support.begin();
          const model::Atom& a = space.coords[coord].atoms[digit[pos]];
          return Rational(Integer(static_cast<long>(std::get<long long>(a))));
        } else if constexpr (std::is_same_v<T, Neg>) {
          return -eval_arith(*node.child, support, digit, space);
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          const Rational l = eval_arith(*node.lhs, support, digit, space);
          const Rational r = eval_arith(*node.rhs, support, digit, space);
          if (node.op == '+') return l + r;
          if (node.op == '-') return l - r;
          return l * r;
        } else {
          throw InputError("predicate evaluation reached a non-arithmetic node");
        }
      },
      ast.node);
}

}  // namespace

bool ast_equal(const Ast& a, const Ast& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, RatLit>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, CoordRef>) {
          return na.index == nb.index;
        } else if constexpr (std::is_same_v<T, Neg> || std::is_same_v<T, Not>) {
          return ast_equal(*na.child, *nb.child);
        } else if constexpr (std::is_same_v<T, ArithBin>) {
          return na.op == nb.op && ast_equal(*na.lhs, *nb.lhs) &&
                 ast_equal(*na.rhs, *nb.rhs);
        } else if constexpr (std::is_same_v<T, Compare>) {
          return na.op == nb.op && ast_equal(*na.lhs, *nb.lhs) &&
                 ast_equal(*na.rhs, *nb.rhs);
        } else {
          static_assert(std::is_same_v<T, BoolBin>);
          return na.op == nb.op && ast_equal(*na.lhs, *nb.lhs) &&
                 ast_equal(*na.rhs, *nb.rhs);
        }
      },
      a.node);
}

AstPtr parse_predicate(std::string_view text) {
  Parser parser(text);
  AstPtr root = parser.run();
  if (type_check(*root) != Type::Bool)
    fail(root->offset, "predicate must be boolean, found arithmetic expression");
  return root;
}

std::string unparse(const Ast& ast) {
  std::string out;
  unparse_into(ast, out);
  return out;
}

std::vector<int> referenced_coords(const Ast& ast) {
  std::vector<int> out;
  collect_coords(ast, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

model::Event compile_predicate(const model::ProductSpace& space, const Ast& ast,
                               const std::string& name) {
  if (type_check(ast) != Type::Bool)
    fail(ast.offset, "predicate must be boolean, found arithmetic expression");
  const std::vector<int> refs = referenced_coords(ast);
  std::vector<int> support;
  for (int k : refs) {
    if (k > static_cast<int>(space.dim()))
      throw InputError("predicate references x[" + std::to_string(k) +
                       "] but the space has " + std::to_string(space.dim()) +
                       " coordinates");
    for (const model::Atom& a : space.coords[k - 1].atoms)
      if (!std::holds_alternative<long long>(a))
        throw InputError("predicate references coordinate '" +
                         space.coords[k - 1].name +
                         "' which has non-numeric atoms");
    support.push_back(k - 1);
  }

  std::uint64_t cells = 1;
  for (int j : support) {
    const std::size_t a = space.atom_count(j);
    if (cells > (std::uint64_t{1} << 24) / a + 1)
      throw ResourceError("predicate '" + name +
                          "' spans too many tuples to tabulate");
    cells *= a;
  }

  model::Event raw;
  raw.name = name;
  raw.support = support;
  raw.table.assign(cells, 0);
  std::vector<std::size_t> digit(support.size(), 0);
  for (std::uint64_t idx = 0; idx < cells; ++idx) {
    raw.table[idx] = eval_bool(ast, support, digit, space) ? 1 : 0;
    // Mixed radix increment, last support coordinate fastest.
    for (std::size_t d = support.size(); d-- > 0;) {
      if (++digit[d] < space.atom_count(support[d])) break;
      digit[d] = 0;
    }
  }
  return model::normalize_support(space, raw);
}

}  // namespace probint::predparse
