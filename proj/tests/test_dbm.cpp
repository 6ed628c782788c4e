#include "cterm/dbm.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cterm;
using testsupport::rand_int;

namespace {
const XInt INF = XInt::inf();

Dbm from_rows(const std::vector<std::vector<XInt>>& rows) {
  Dbm d(rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.size(); ++j) d.set(i, j, rows[i][j]);
  return d;
}

Dbm random_dbm(size_t n, long lo, long hi, int inf_one_in) {
  Dbm d(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rand_int(0, inf_one_in - 1) == 0) continue;
      d.set(i, j, XInt(rand_int(lo, hi)));
    }
  return d;
}

bool sat(const Dbm& d, const std::vector<long>& p) {
  for (size_t i = 0; i < d.dim(); ++i)
    for (size_t j = 0; j < d.dim(); ++j)
      if (!d.at(i, j).is_inf() && XInt(p[i] - p[j]) > d.at(i, j)) return false;
  return true;
}
}  // namespace

TEST_CASE("closure of the zigzag relation matches the reference matrix") {
  // x1..x4 = 0..3, x1'..x4' = 4..7; constraint v_i - v_j <= c at (i, j).
  Dbm m(8);
  m.set(1, 4, -1);  // x2 - x1' <= -1
  m.set(2, 5, 0);   // x3 - x2' <= 0
  m.set(0, 6, 0);   // x1 - x3' <= 0
  m.set(7, 3, 0);   // x4' - x4 <= 0
  m.set(6, 3, 0);   // x3' - x4 <= 0
  Dbm c = fw_close(m);
  REQUIRE_FALSE(c.is_bottom());
  Dbm expected(8);
  expected.set(0, 3, 0);
  expected.set(0, 6, 0);
  expected.set(1, 4, -1);
  expected.set(2, 5, 0);
  expected.set(6, 3, 0);
  expected.set(7, 3, 0);
  CHECK(c == expected);
}

TEST_CASE("closure of an unconstrained matrix") {
  Dbm m(4);
  Dbm c = fw_close(m);
  CHECK(c == Dbm(4));
}

TEST_CASE("consistency examples") {
  CHECK_FALSE(is_consistent(from_rows({{0, -1}, {0, 0}})));
  CHECK(is_consistent(from_rows({{0, 5}, {-5, 0}})));
  CHECK(is_consistent(Dbm(3)));
}

TEST_CASE("closure agrees with path enumeration") {
  for (int iter = 0; iter < 500; ++iter) {
    size_t n = static_cast<size_t>(rand_int(1, 5));
    Dbm m = random_dbm(n, -4, 4, 3);
    Dbm c = fw_close(m);
    Dbm p = testsupport::path_enum_closure(m, n + 1);
    bool neg = false;
    for (size_t i = 0; i < n; ++i)
      if (p.at(i, i) < XInt(0)) neg = true;
    CHECK(c.is_bottom() == neg);
    if (!c.is_bottom()) {
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) CHECK(c.at(i, j) == p.at(i, j));
    }
  }
}

TEST_CASE("closure is idempotent and respects the growth bound") {
  for (int iter = 0; iter < 300; ++iter) {
    size_t n = static_cast<size_t>(rand_int(2, 6));
    Dbm m = random_dbm(n, -4, 6, 2);
    Dbm c = fw_close(m);
    if (c.is_bottom()) continue;
    CHECK(fw_close(c) == c);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (!c.at(i, j).is_inf()) CHECK(abs(c.at(i, j).value()) <= Int(6) * (Int(1) << n));
  }
}

TEST_CASE("ordering and equivalence") {
  Dbm a = fw_close(from_rows({{0, 1}, {INF, 0}}));
  Dbm b = fw_close(from_rows({{0, 2}, {INF, 0}}));
  CHECK(dbm_leq(a, b));
  CHECK_FALSE(dbm_eq(a, b));
  CHECK(dbm_eq(a, a));
}

TEST_CASE("ordering agrees with point inclusion") {
  for (int iter = 0; iter < 300; ++iter) {
    Dbm a = fw_close(random_dbm(2, -3, 3, 2));
    Dbm b = fw_close(random_dbm(2, -3, 3, 2));
    if (a.is_bottom() || b.is_bottom()) continue;
    bool incl = true;
    for (long p = -6; p <= 6; ++p)
      for (long q = -6; q <= 6; ++q)
        if (sat(a, {p, q}) && !sat(b, {p, q})) incl = false;
    // Two variables: a difference system is shift invariant, so the box decides inclusion.
    CHECK(dbm_leq(a, b) == incl);
  }
}

TEST_CASE("projection") {
  // x - z <= 1, z - y <= 2 over (x, y, z).
  Dbm m(3);
  m.set(0, 2, 1);
  m.set(2, 1, 2);
  Dbm p = dbm_project(fw_close(m), {0, 1});
  CHECK(p.at(0, 1) == XInt(3));
  CHECK(p.at(1, 0).is_inf());
  Dbm c = fw_close(m);
  CHECK(dbm_project(c, {0, 1, 2}) == c);
  CHECK_THROWS(dbm_project(m, {0}));
}

TEST_CASE("projection agrees with point projection") {
  for (int iter = 0; iter < 60; ++iter) {
    Dbm c = fw_close(random_dbm(4, -3, 3, 2));
    if (c.is_bottom()) continue;
    Dbm p = dbm_project(c, {0, 1});
    for (long a = -5; a <= 5; ++a)
      for (long b = -5; b <= 5; ++b) {
        bool ex = false;
        for (long z = -15; z <= 15 && !ex; ++z)
          for (long w = -15; w <= 15 && !ex; ++w)
            if (sat(c, {a, b, z, w})) ex = true;
        CHECK(ex == sat(p, {a, b}));
      }
  }
}

TEST_CASE("composition") {
  Dbm id = dbm_identity_relation(1);
  Dbm dec(2);  // x' = x - 1 over (x, x')
  dec.set(1, 0, -1);
  dec.set(0, 1, 1);
  Dbm two = dbm_compose(dec, dec);
  CHECK(two.at(1, 0) == XInt(-2));
  CHECK(two.at(0, 1) == XInt(2));
  CHECK(dbm_eq(dbm_compose(dec, id), fw_close(dec)));
}

TEST_CASE("composition agrees with relational join") {
  for (int iter = 0; iter < 60; ++iter) {
    // Relations over 2 variables (dimension 4).
    Dbm a = random_dbm(4, -2, 2, 2), b = random_dbm(4, -2, 2, 2);
    Dbm c = dbm_compose(a, b);
    std::vector<std::vector<long>> pa, pb;
    for (long x0 = -3; x0 <= 3; ++x0)
      for (long x1 = -3; x1 <= 3; ++x1)
        for (long y0 = -3; y0 <= 3; ++y0)
          for (long y1 = -3; y1 <= 3; ++y1) {
            if (sat(a, {x0, x1, y0, y1})) pa.push_back({x0, x1, y0, y1});
            if (sat(b, {x0, x1, y0, y1})) pb.push_back({x0, x1, y0, y1});
          }
    // Every joined pair is in the composition.
    for (const auto& p : pa)
      for (const auto& q : pb)
        if (p[2] == q[0] && p[3] == q[1]) {
          if (c.is_bottom()) {
            CHECK(false);
          } else {
            CHECK(sat(c, {p[0], p[1], q[2], q[3]}));
          }
        }
    // Every composed pair inside a small box has a witness in a larger box.
    if (!c.is_bottom()) {
      for (long x0 = -2; x0 <= 2; ++x0)
        for (long x1 = -2; x1 <= 2; ++x1)
          for (long z0 = -2; z0 <= 2; ++z0)
            for (long z1 = -2; z1 <= 2; ++z1) {
              if (!sat(c, {x0, x1, z0, z1})) continue;
              bool w = false;
              for (long y0 = -12; y0 <= 12 && !w; ++y0)
                for (long y1 = -12; y1 <= 12 && !w; ++y1)
                  if (sat(a, {x0, x1, y0, y1}) && sat(b, {y0, y1, z0, z1})) w = true;
              CHECK(w);
            }
    }
  }
}

TEST_CASE("composition is associative on consistent triples") {
  for (int iter = 0; iter < 100; ++iter) {
    Dbm a = random_dbm(4, -2, 3, 2), b = random_dbm(4, -2, 3, 2), c = random_dbm(4, -2, 3, 2);
    Dbm l = dbm_compose(dbm_compose(a, b), c);
    Dbm r = dbm_compose(a, dbm_compose(b, c));
    CHECK(l.is_bottom() == r.is_bottom());
    if (!l.is_bottom() && !r.is_bottom()) CHECK(dbm_eq(l, r));
  }
}

TEST_CASE("min and add_rate") {
  Dbm m = fw_close(from_rows({{0, 3}, {-1, 0}}));
  CHECK(dbm_min(m, m) == m);
  Dbm zero = from_rows({{0, 0}, {0, 0}});
  CHECK(dbm_add_rate(m, zero, 7) == m);
  // Pre-image block of the third power plus one period of rates gives the sixth power.
  Dbm m3(4), lam(4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) lam.set(i, j, 0);
  for (size_t i = 0; i < 3; ++i) {
    m3.set(i, 3, -1);
    lam.set(i, 3, -1);
  }
  Dbm m6 = dbm_add_rate(m3, lam, 1);
  CHECK(m6.at(0, 3) == XInt(-2));
  CHECK(m6.at(0, 1).is_inf());
}
