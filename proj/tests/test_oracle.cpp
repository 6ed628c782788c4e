#include "cterm/oracle.hpp"
#include "cterm/parse.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cterm;

namespace {

Dnf rel(const std::string& text, const std::vector<std::string>& vars) { return parse_formula(text, vars, true); }

bool has(const std::vector<Valuation>& s, const Valuation& v) { return std::find(s.begin(), s.end(), v) != s.end(); }

}  // namespace

TEST_CASE("box indexing round-trips") {
  BoxDomain b;
  b.lo = {Int(-2), Int(0), Int(3)};
  b.hi = {Int(1), Int(2), Int(3)};
  CHECK(b.size() == 12);
  for (size_t k = 0; k < b.size(); ++k) {
    Valuation v = b.point(k);
    CHECK(b.contains(v));
    CHECK(b.index(v) == k);
  }
  CHECK_FALSE(b.contains({Int(2), Int(0), Int(3)}));
}

TEST_CASE("membership") {
  std::vector<std::string> vars{"x"};
  CHECK(eval_membership(parse_formula("x <= 3", vars, false), {Int(3)}));
  CHECK_FALSE(eval_membership(parse_formula("2 | x", vars, false), {Int(3)}));
  AffineRel a = *affine_from_conj(rel("x >= 0 && x' == 2x + 1", vars).disjuncts[0], 1);
  CHECK(eval_membership(a, {Int(2), Int(5)}));
  CHECK_FALSE(eval_membership(a, {Int(2), Int(4)}));
  CHECK_FALSE(eval_membership(a, {Int(-1), Int(-1)}));
}

TEST_CASE("successor enumeration matches brute force") {
  for (int iter = 0; iter < 60; ++iter) {
    const size_t n = static_cast<size_t>(testsupport::rand_int(1, 2));
    Dnf r = octagon_to_dnf(testsupport::random_relation(n, static_cast<size_t>(testsupport::rand_int(1, 4)), 3));
    if (testsupport::rand_int(0, 1)) r.disjuncts.push_back({PAtom::div(2, {{static_cast<int>(n), 1}}, 0)});
    BoxDomain box = BoxDomain::cube(n, -4, 4);
    box.for_each([&](const Valuation& x) {
      std::set<Valuation> got, want;
      for_each_successor(r, x, box, [&](const Valuation& y) {
        got.insert(y);
        return true;
      });
      box.for_each([&](const Valuation& y) {
        Valuation xy = x;
        xy.insert(xy.end(), y.begin(), y.end());
        if (eval_dnf(r, xy)) want.insert(y);
      });
      CHECK(got == want);
    });
  }
}

TEST_CASE("lasso search") {
  std::vector<std::string> vars{"x"};
  BoxDomain box = BoxDomain::cube(1, -5, 5);
  auto l = find_lasso(rel("x' == x", vars), box, {Int(0)});
  REQUIRE(l.has_value());
  CHECK(l->stem.empty());
  CHECK(l->cycle == std::vector<Valuation>{{Int(0)}});
  for (long s = -5; s <= 5; ++s) CHECK_FALSE(find_lasso(rel("x >= 0 && x' == x - 1", vars), box, {Int(s)}));
  // a lasso must step correctly along the relation
  Dnf flip = rel("x' == -x && x >= 1 || x' == x - 1 && x <= 0 && x >= -2", vars);
  auto f = find_lasso(flip, box, {Int(3)});
  CHECK_FALSE(f.has_value());
  Dnf loop = rel("x >= 1 && x' == x - 1 || x == 0 && x' == 3", vars);
  auto g = find_lasso(loop, box, {Int(5)});
  REQUIRE(g.has_value());
  std::vector<Valuation> run = g->stem;
  run.insert(run.end(), g->cycle.begin(), g->cycle.end());
  run.push_back(g->cycle.front());
  for (size_t i = 0; i + 1 < run.size(); ++i) CHECK(eval_dnf(loop, {run[i][0], run[i + 1][0]}));
  CHECK(g->cycle.size() == 4);
}

TEST_CASE("lasso through the third branch of the running program") {
  Program p = parse_program(
      "vars x, y; init l1;\n"
      "l1 -> l2 : x != 0 && id(x, y);\n"
      "l2 -> l3 : id(x, y);\n"
      "l3 -> l4 : y' == x && id(x);\n"
      "l4 -> l1 : x' == x - 1 && id(y);\n"
      "l2 -> l5 : id(x, y);\n"
      "l5 -> l6 : y > 0 && id(x, y);\n"
      "l6 -> l1 : y' == y - 1 && id(x);\n"
      "l5 -> l7 : y <= 0 && id(x, y);\n"
      "l7 -> l1 : id(x, y);\n"
      "l1 -> l8 : x == 0 && id(x, y);\n");
  BoxDomain box = BoxDomain::cube(2, -8, 8);
  auto l = find_lasso(p, box, {Int(1), Int(0)});
  REQUIRE(l.has_value());
  bool via7 = false;
  for (const auto& c : l->cycle) via7 = via7 || p.states[c.state] == "l7";
  CHECK(via7);
  CHECK_FALSE(find_lasso(p, box, {Int(0), Int(4)}).has_value());
}

TEST_CASE("in-box Kleene fixpoint") {
  std::vector<std::string> xy{"x", "y"};
  BoxDomain box = BoxDomain::cube(2, -8, 8);
  CHECK(kleene_fixpoint_pre(rel("id(x, y)", xy), box).size() == box.size());
  CHECK(kleene_fixpoint_pre(rel("x >= 0 && x' == x - 1", {"x"}), BoxDomain::cube(1, -8, 8)).empty());
  auto s = kleene_fixpoint_pre(testsupport::running_relations()[5], box);
  CHECK(s.size() == 8 * 9);
  for (const auto& v : s) CHECK((v[0] >= 1 && v[1] <= 0));
  // points with an in-box lasso are exactly the fixpoint
  Dnf r = rel("x >= y && x' == x - 1 && y' == y - 1 || x < y && x' == x && y' == y - 1", xy);
  auto fp = kleene_fixpoint_pre(r, box);
  box.for_each([&](const Valuation& v) { CHECK(has(fp, v) == find_lasso(r, box, v).has_value()); });
}

TEST_CASE("bounded runs of a straight-line program") {
  Program p = parse_program("vars x; init a; a -> b : x' == x + 1; b -> c : x >= 0 && x' == 2x;");
  BoxDomain box = BoxDomain::cube(1, -4, 4);
  auto runs = bounded_runs(p, 0, 2, box, 5);
  std::set<std::pair<Valuation, Valuation>> want;
  for (long x = -4; x <= 4; ++x)
    if (x + 1 >= 0 && x + 1 <= 4 && 2 * (x + 1) <= 4) want.insert({{Int(x)}, {Int(2 * (x + 1))}});
  CHECK(runs == want);
}
