#include "cterm/linarith.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cterm;
using testsupport::rand_int;

namespace {
LinTerm x(int v, long c = 1) { return LinTerm::var(v, c); }
LinTerm k(long c) { return LinTerm(Rational(c)); }
}  // namespace

TEST_CASE("lp_feasible on contradictory and trivial systems") {
  LinSys s;
  s.nvars = 1;
  s.add(x(0) - k(1), Rel::LE);   // x <= 1
  s.add(k(2) - x(0), Rel::LE);   // x >= 2
  CHECK_FALSE(lp_feasible(s).feasible);

  LinSys t;
  t.nvars = 1;
  t.add(-x(0), Rel::LE);
  auto r = lp_feasible(t);
  REQUIRE(r.feasible);
  CHECK(r.model[0] >= 0);
}

TEST_CASE("lp_sup examples") {
  LinSys s;
  s.nvars = 1;
  s.add(-x(0), Rel::LE);
  s.add(x(0) - k(5), Rel::LE);
  auto r = lp_sup(s, x(0) + k(1));
  REQUIRE(r.status == LpStatus::Value);
  CHECK(r.value == 6);

  LinSys u;
  u.nvars = 1;
  u.add(-x(0), Rel::LE);
  CHECK(lp_sup(u, x(0)).status == LpStatus::Unbounded);

  LinSys w;
  w.nvars = 2;
  w.add(x(0) - k(1), Rel::LE);
  w.add(x(1) - k(1), Rel::LE);
  auto rw = lp_sup(w, x(0) + x(1));
  REQUIRE(rw.status == LpStatus::Value);
  CHECK(rw.value == 2);
}

TEST_CASE("lp_sup is exact on k*x <= 1") {
  for (long kk = 1; kk <= 20; ++kk) {
    LinSys s;
    s.nvars = 1;
    s.add(x(0, kk) - k(1), Rel::LE);
    auto r = lp_sup(s, x(0));
    REQUIRE(r.status == LpStatus::Value);
    CHECK(r.value == Rational(1, kk));
  }
}

TEST_CASE("entails examples") {
  LinSys s;
  s.nvars = 1;
  s.add(x(0) - k(1), Rel::LE);
  CHECK(entails(s, {x(0) - k(2), Rel::LE}));
  CHECK_FALSE(entails(s, {x(0), Rel::LE}));

  LinSys o;
  o.nvars = 2;
  o.add(x(0) + x(1) - k(5), Rel::LE);
  o.add(x(0) - x(1) - k(1), Rel::LE);
  CHECK(entails(o, {x(0) - k(3), Rel::LE}));
  // Integer points of [-10,10]^2 inside o all satisfy x0 <= 3.
  bool all = true;
  for (long a = -10; a <= 10; ++a)
    for (long b = -10; b <= 10; ++b)
      if (a + b <= 5 && a - b <= 1 && a > 3) all = false;
  CHECK(all);
}

TEST_CASE("lp_feasible agrees with Fourier-Motzkin on random systems") {
  for (int iter = 0; iter < 400; ++iter) {
    LinSys s;
    s.nvars = static_cast<int>(rand_int(1, 4));
    int nrows = static_cast<int>(rand_int(1, 8));
    for (int r = 0; r < nrows; ++r) {
      LinTerm t(Rational(rand_int(-3, 3)));
      for (int v = 0; v < s.nvars; ++v) t.set_coeff(v, rand_int(-3, 3));
      long kind = rand_int(0, 5);
      s.add(t, kind == 0 ? Rel::EQ : kind == 1 ? Rel::LT : Rel::LE);
    }
    auto r = lp_feasible(s);
    CHECK(r.feasible == testsupport::fm_feasible(s));
    if (r.feasible) {
      for (const auto& row : s.rows) {
        Rational v = row.term.eval(r.model);
        bool ok = row.rel == Rel::LE ? v <= 0 : row.rel == Rel::LT ? v < 0 : v == 0;
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("entailment is transitive on samples") {
  int checked = 0;
  for (int iter = 0; iter < 300; ++iter) {
    LinSys s;
    s.nvars = 3;
    for (int r = 0; r < 4; ++r) {
      LinTerm t(Rational(rand_int(-3, 3)));
      for (int v = 0; v < 3; ++v) t.set_coeff(v, rand_int(-2, 2));
      s.add(t, Rel::LE);
    }
    LinRow a, b;
    a.term = LinTerm(Rational(rand_int(-3, 3)));
    b.term = LinTerm(Rational(rand_int(-3, 3)));
    for (int v = 0; v < 3; ++v) {
      a.term.set_coeff(v, rand_int(-2, 2));
      b.term.set_coeff(v, rand_int(-2, 2));
    }
    if (entails(s, a)) {
      LinSys s2 = s;
      s2.rows.push_back(a);
      if (entails(s2, b)) {
        ++checked;
        CHECK(entails(s, b));
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("farkas_template finds a ranking function for a counter") {
  // Variables: 0 = x, 1 = x'. Unknowns: 0 = a, 1 = h.
  LinSys s;
  s.nvars = 2;
  s.add(x(1) - x(0) + k(1), Rel::LE);  // x - x' >= 1
  s.add(-x(0), Rel::LE);               // x >= 0
  TemplateRow dec;  // a*x' - a*x + 1 <= 0
  dec.coeffs[0] = LinTerm::var(0, -1);
  dec.coeffs[1] = LinTerm::var(0, 1);
  dec.constant = LinTerm(Rational(1));
  TemplateRow bnd;  // h - a*x <= 0
  bnd.coeffs[0] = LinTerm::var(0, -1);
  bnd.constant = LinTerm::var(1, 1);
  auto w = farkas_template(s, {dec, bnd}, 2);
  REQUIRE(w.has_value());
  Rational a = (*w)[0], h = (*w)[1];
  CHECK(a >= 1);
  CHECK(h <= 0);

  LinSys id;
  id.nvars = 2;
  id.add(x(1) - x(0), Rel::EQ);
  CHECK_FALSE(farkas_template(id, {dec, bnd}, 2).has_value());
}
