#include "cterm/parse.hpp"
#include "cterm/program.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cterm;
using testsupport::for_each_point;

namespace {

void check_pointwise(const Dnf& d, size_t dim, long box, const std::function<bool(const std::vector<long>&)>& ref) {
  for_each_point(dim, -box, box, [&](const std::vector<Int>& p) {
    std::vector<long> v;
    for (const auto& x : p) v.push_back(x.get_si());
    CHECK(eval_dnf(d, p) == ref(v));
  });
}

}  // namespace

TEST_CASE("set formulas evaluate like their C++ reading") {
  std::vector<std::string> vars{"x", "y"};
  check_pointwise(parse_formula("x <= 3", vars, false), 2, 5, [](auto v) { return v[0] <= 3; });
  check_pointwise(parse_formula("x != 0", vars, false), 2, 5, [](auto v) { return v[0] != 0; });
  check_pointwise(parse_formula("-x + y >= 2 || (x < y && !(y > 1))", vars, false), 2, 5,
                  [](auto v) { return -v[0] + v[1] >= 2 || (v[0] < v[1] && !(v[1] > 1)); });
  check_pointwise(parse_formula("0 <= x < y <= 3", vars, false), 2, 5,
                  [](auto v) { return 0 <= v[0] && v[0] < v[1] && v[1] <= 3; });
  check_pointwise(parse_formula("2 | x + y", vars, false), 2, 5, [](auto v) { return (v[0] + v[1]) % 2 == 0; });
  check_pointwise(parse_formula("3x - 2*y = 1 # comment", vars, false), 2, 5,
                  [](auto v) { return 3 * v[0] - 2 * v[1] == 1; });
  check_pointwise(parse_formula("true", vars, false), 2, 2, [](auto) { return true; });
  check_pointwise(parse_formula("false || x == 1", vars, false), 2, 2, [](auto v) { return v[0] == 1; });
}

TEST_CASE("relations: id macro and havoc of unmentioned primed variables") {
  std::vector<std::string> vars{"x", "y"};
  Dnf r = parse_formula("x > 0 && x' == x - 1", vars, true);
  CHECK(r.nvars == 4);
  check_pointwise(r, 4, 3, [](auto v) { return v[0] > 0 && v[2] == v[0] - 1; });
  Dnf id = parse_formula("id(x, y)", vars, true);
  check_pointwise(id, 4, 3, [](auto v) { return v[2] == v[0] && v[3] == v[1]; });
  Dnf aff = parse_formula("x' == 2x + y + 1 && y' == y", vars, true);
  check_pointwise(aff, 4, 4, [](auto v) { return v[2] == 2 * v[0] + v[1] + 1 && v[3] == v[1]; });
}

TEST_CASE("inferred relation variables") {
  ParsedRelation pr = parse_relation("y >= 0 && x' <= x - 1 && y' == y");
  CHECK(pr.vars == std::vector<std::string>{"y", "x"});
  CHECK(pr.rel.nvars == 4);
  CHECK(relation_names({"a", "b"}) == std::vector<std::string>{"a", "b", "a'", "b'"});
}

TEST_CASE("parse errors carry a position") {
  std::vector<std::string> vars{"x"};
  try {
    parse_formula("x <= \n  3 +", vars, false);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_formula("z <= 1", vars, false), ParseError);
  CHECK_THROWS_AS(parse_formula("x' <= 1", vars, false), ParseError);
  CHECK_THROWS_AS(parse_formula("x * x <= 1", vars, false), ParseError);
  CHECK_THROWS_AS(parse_formula("(x <= 1", vars, false), ParseError);
  CHECK_THROWS_AS(parse_formula("x @ 1", vars, false), ParseError);
}

TEST_CASE("program files") {
  Program p = parse_program(
      "vars x, y;\n"
      "init l1;\n"
      "l1 -> l2 : x != 0 && id(x, y);\n"
      "l2 -> l1 : x' == x - 1 && id(y);\n"
      "l2 -> l3 : ;\n");
  CHECK(p.vars == std::vector<std::string>{"x", "y"});
  CHECK(p.states == std::vector<std::string>{"l1", "l2", "l3"});
  CHECK(p.transitions.size() == 3);
  // != becomes two octagonal disjuncts
  CHECK(p.transitions[0].label.disjuncts.size() == 2);
  CHECK(p.transitions[2].label.disjuncts.size() == 1);
  CHECK(p.state("l3") == std::optional<size_t>(2));
  CHECK_FALSE(p.state("nope").has_value());

  Program empty = parse_program("vars x; init a;");
  CHECK(empty.transitions.empty());
  CHECK(empty.states == std::vector<std::string>{"a"});

  // without `init` the first state mentioned is initial
  CHECK(parse_program("vars x; b -> a : true;").init == 0);
  CHECK_THROWS_AS(parse_program("vars x;"), ParseError);
  CHECK_THROWS_AS(parse_program("vars x; init a; a -> b : x <= 1"), ParseError);
  CHECK_THROWS_AS(parse_program("vars x; init a; a -> b : x' == y;"), ParseError);
  // non-octagonal guard with a havoc update is neither octagonal nor affine
  CHECK_THROWS_AS(parse_program("vars x, y, z; init a; a -> a : x + y + z <= 3;"), FragmentError);
  // affine label accepted
  Program aff = parse_program("vars x; init a; a -> a : x >= 0 && x' == 2x + 1;");
  CHECK(aff.transitions.size() == 1);
}
