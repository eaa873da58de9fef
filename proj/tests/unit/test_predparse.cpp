#include <doctest.h>

#include <string>

#include "probint/predparse.hpp"

using namespace probint;
using namespace probint::predparse;

namespace {

model::ProductSpace numeric_space(const std::vector<int>& sizes) {
  model::ProductSpace s;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    model::CoordinateSpace c;
    c.name = "xi" + std::to_string(j + 1);
    for (int i = 0; i < sizes[j]; ++i) {
      c.atoms.emplace_back(static_cast<long long>(i));
      Rational p(1, sizes[j]);
      p.canonicalize();
      c.probs.push_back(p);
    }
    s.coords.push_back(c);
  }
  return s;
}

std::string error_of(std::string_view text) {
  try {
    parse_predicate(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("syntax errors carry 1-based offsets") {
  CHECK(error_of("x[1] >") ==
        "predicate parse error at offset 7: expected an operand");
  CHECK(error_of("1 < x[1] < 3") ==
        "predicate parse error at offset 10: comparison chains are not "
        "allowed");
  CHECK(error_of("x[1] < one").find("unknown word 'one'") != std::string::npos);
  CHECK(error_of("x[0] == 0").find("coordinate index must be a positive") !=
        std::string::npos);
  CHECK(error_of("x[1] < 1/0").find("zero denominator") != std::string::npos);
  CHECK(error_of("(x[1] < 1").find("expected ')'") != std::string::npos);
  CHECK(error_of("x[1] < 1)").find("unexpected trailing input") !=
        std::string::npos);
  CHECK(error_of("x[1] ? 1").find("unexpected character '?'") !=
        std::string::npos);
  CHECK(error_of("") .find("expected an operand") != std::string::npos);
}

TEST_CASE("type errors carry offsets and directions") {
  CHECK(error_of("x[1] and x[2]").find("operand of 'and'/'or' must be "
                                       "boolean") != std::string::npos);
  CHECK(error_of("not x[1]").find("operand of 'not' must be boolean") !=
        std::string::npos);
  CHECK(error_of("x[1] + 1") ==
        "predicate parse error at offset 1: predicate must be boolean, found "
        "arithmetic expression");
  CHECK(error_of("(x[1] < 1) + 2 == 2").find("left operand of '+' must be "
                                             "arithmetic") !=
        std::string::npos);
  CHECK(error_of("-(x[1] < 1) == 0").find("operand of '-' must be arithmetic") !=
        std::string::npos);
  CHECK(error_of("(x[1] < 1) == (x[2] < 1)")
            .find("comparison operand must be arithmetic") !=
        std::string::npos);
}

TEST_CASE("boolean structure parses where it should") {
  // 'not' binds a full comparison, so this is not(x[1] == 1).
  CHECK_NOTHROW(parse_predicate("not x[1] == 1"));
  CHECK_NOTHROW(parse_predicate("not not x[1] == 1"));
  CHECK_NOTHROW(parse_predicate("x[1] == 1 and x[2] == 2 or x[3] == 3"));
  CHECK_NOTHROW(parse_predicate("1 < 2"));
  CHECK_NOTHROW(parse_predicate("-x[1] <= -1/2"));
}

TEST_CASE("unparse produces canonical text") {
  CHECK(unparse(*parse_predicate("x[1]+2*x[2]==5")) ==
        "x[1] + 2 * x[2] == 5");
  CHECK(unparse(*parse_predicate("(x[1]+1)*x[2]<=3")) ==
        "(x[1] + 1) * x[2] <= 3");
  CHECK(unparse(*parse_predicate("x[1]-(x[2]-1)>0")) ==
        "x[1] - (x[2] - 1) > 0");
  CHECK(unparse(*parse_predicate("not(x[1]==1 or x[2]==2)")) ==
        "not (x[1] == 1 or x[2] == 2)");
  CHECK(unparse(*parse_predicate("-x[1]<0")) == "-x[1] < 0");
  // Rational literals are canonicalized.
  CHECK(unparse(*parse_predicate("x[1] < 2/4")) == "x[1] < 1/2");
}

TEST_CASE("unparse round-trips through the parser") {
  const char* cases[] = {
      "x[1] + 2 * x[2] <= 7 and not (x[3] == 1 or x[1] != 0)",
      "x[1] * (x[2] + 1) >= 3 or x[2] < 1/3",
      "-x[1] - -2 < 1/2",
      "not not x[1] >= 0",
      "x[1] == 0 and x[2] == 0 and x[3] == 0",
      "1 + 2 + 3 < x[1] * x[1] * x[1]",
  };
  for (const char* text : cases) {
    AstPtr a = parse_predicate(text);
    std::string printed = unparse(*a);
    AstPtr b = parse_predicate(printed);
    CHECK_MESSAGE(ast_equal(*a, *b), printed);
    CHECK(unparse(*b) == printed);
  }
}

TEST_CASE("ast_equal compares structure and exact values") {
  CHECK(ast_equal(*parse_predicate("x[1] < 2/4"), *parse_predicate("x[1]<1/2")));
  CHECK_FALSE(ast_equal(*parse_predicate("x[1] < 1"), *parse_predicate("x[1] <= 1")));
  CHECK_FALSE(ast_equal(*parse_predicate("x[1] < 1"), *parse_predicate("x[2] < 1")));
  CHECK_FALSE(ast_equal(*parse_predicate("x[1] < 1 and x[2] < 1"),
                        *parse_predicate("x[2] < 1 and x[1] < 1")));
}

TEST_CASE("referenced_coords is sorted and unique") {
  AstPtr a = parse_predicate("x[3] + x[1] * x[3] < x[2]");
  CHECK(referenced_coords(*a) == std::vector<int>{1, 2, 3});
  CHECK(referenced_coords(*parse_predicate("1 < 2")).empty());
}

TEST_CASE("compile_predicate matches hand-built truth tables") {
  model::ProductSpace space = numeric_space({2, 3});

  model::Event e = compile_predicate(
      space, *parse_predicate("x[1] == 1 and x[2] >= 1"), "E");
  CHECK(e.support == std::vector<int>{0, 1});
  CHECK(e.table == std::vector<std::uint8_t>{0, 0, 0, 0, 1, 1});

  e = compile_predicate(space, *parse_predicate("x[1] < 1/2"), "E");
  CHECK(e.support == std::vector<int>{0});
  CHECK(e.table == std::vector<std::uint8_t>{1, 0});

  // Quadratic with roots 1 and 2 over x[2] in {0,1,2}.
  e = compile_predicate(
      space, *parse_predicate("x[2]*x[2] - 3*x[2] + 2 == 0"), "E");
  CHECK(e.support == std::vector<int>{1});
  CHECK(e.table == std::vector<std::uint8_t>{0, 1, 1});

  // Tautology over a referenced coordinate collapses to empty support.
  e = compile_predicate(space, *parse_predicate("x[2] >= 0"), "E");
  CHECK(e.support.empty());
  REQUIRE(e.table.size() == 1);
  CHECK(e.table[0] == 1);

  // Constant predicate with no references.
  e = compile_predicate(space, *parse_predicate("1 < 2"), "E");
  CHECK(e.support.empty());
  CHECK(e.table[0] == 1);

  // Exact rational comparison: 1/3 < x[2]/3 nowhere on {0,1,2}/3... check
  // a strict boundary case instead: x[2] <= 4/3 keeps atoms 0 and 1.
  e = compile_predicate(space, *parse_predicate("x[2] <= 4/3"), "E");
  CHECK(e.table == std::vector<std::uint8_t>{1, 1, 0});
}

TEST_CASE("compile_predicate input validation") {
  model::ProductSpace space = numeric_space({2, 2});
  CHECK_THROWS_AS(
      compile_predicate(space, *parse_predicate("x[3] == 0"), "E"),
      InputError);

  model::ProductSpace strings;
  model::CoordinateSpace c;
  c.name = "s";
  c.atoms = {model::Atom(std::string("a")), model::Atom(std::string("b"))};
  c.probs = {Rational(1, 2), Rational(1, 2)};
  strings.coords.push_back(c);
  CHECK_THROWS_AS(
      compile_predicate(strings, *parse_predicate("x[1] == 0"), "E"),
      InputError);
}

TEST_CASE("compile_predicate enforces the cell budget") {
  model::ProductSpace space = numeric_space({500, 500, 500});
  CHECK_THROWS_AS(
      compile_predicate(
          space, *parse_predicate("x[1] + x[2] + x[3] == 0"), "E"),
      ResourceError);
}
