#include "cterm/closure.hpp"
#include "cterm/term_oct.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cterm;
using namespace testsupport;

namespace {

Octagon decrement(bool guarded) {
  return oct_of(2, {oa_eq(1, 0, -1), guarded ? std::vector<OctAtom>{oa_unary(0, -1, 0)} : std::vector<OctAtom>{}});
}

bool same(const Octagon& a, const Octagon& b) {
  if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
  return oct_eq(a, b);
}

Octagon iterate(const Octagon& r, long n) {
  Octagon acc = tight_close(r);
  for (long k = 1; k < n && !acc.is_bottom(); ++k) acc = oct_compose(acc, r);
  return acc;
}

}  // namespace

TEST_CASE("fast power of a decrement") {
  Octagon r = decrement(false);
  CHECK(fast_power(r, 1) == tight_close(r));
  for (int k = 0; k <= 10; ++k) {
    long n = 1L << k;
    CHECK(same(fast_power(r, Int(n)), oct_of(2, {oa_eq(1, 0, -n)})));
  }
  CHECK_THROWS(fast_power(r, 0));
}

TEST_CASE("fast power agrees with iterated composition") {
  for (int iter = 0; iter < 40; ++iter) {
    Octagon r = random_relation(static_cast<size_t>(rand_int(1, 2)), static_cast<size_t>(rand_int(2, 5)), 4);
    Octagon acc = tight_close(r);
    for (long n = 2; n <= 64; ++n) {
      if (!acc.is_bottom()) acc = oct_compose(acc, r);
      CHECK(same(fast_power(r, Int(n)), acc));
    }
  }
}

TEST_CASE("non-termination sets of the running example relations") {
  auto rs = running_relations();
  std::vector<Octagon> want = {
      oct_of(2, {{oa_unary(0, 1, -1)}}),
      Octagon::bottom(2),
      Octagon::bottom(2),
      Octagon::bottom(2),
      oct_of(2, {{oa_unary(0, 1, -1), oa_unary(1, 1, 0)}}),
      oct_of(2, {{oa_unary(0, -1, -1), oa_unary(1, 1, 0)}}),
      Octagon::bottom(2),
  };
  for (size_t i = 0; i < rs.size(); ++i) {
    CAPTURE(i);
    WntResult w = wnt(rs[i]);
    CHECK(same(w.set, want[i]));
    CHECK(w.n1 == 625);
    CHECK(w.n2 == 626);
    CHECK(is_well_founded(rs[i]) == want[i].is_bottom());
  }
}

TEST_CASE("simple non-termination sets") {
  CHECK(is_well_founded(decrement(true)));
  CHECK(same(wnt(decrement(false)).set, Octagon::top(1)));
  CHECK(same(wnt(oct_identity(2)).set, Octagon::top(2)));
  CHECK_FALSE(is_well_founded(oct_identity(1)));
  CHECK(is_well_founded(Octagon::bottom(2)));
  // x' = x + 1 while x <= 10
  CHECK(is_well_founded(oct_of(2, {oa_eq(1, 0, 1), {oa_unary(0, 1, 10)}})));
  // x' = -x: an oscillation around zero never terminates
  Octagon flip = oct_of(2, {{oa(1, 1, 0, 1, 0), oa(1, -1, 0, -1, 0)}});
  CHECK(same(wnt(flip).set, Octagon::top(1)));
}

TEST_CASE("non-termination set is recurrent and matches the closed form") {
  for (int iter = 0; iter < 120; ++iter) {
    Octagon r = random_relation(static_cast<size_t>(rand_int(1, 2)), static_cast<size_t>(rand_int(2, 6)), 4);
    const size_t n = r.nvars() / 2;
    Octagon w = wnt(r).set;
    if (!w.is_bottom()) {
      CHECK(w.is_tight());
      Octagon step = oct_domain(oct_meet(r, oct_lift_to_relation(w, true)));
      CHECK(oct_leq(w, step));
    }
    DetectOptions opt;
    opt.mode = PeriodMode::PreImage;
    opt.max_b = 40;
    opt.max_c = 12;
    auto cf = wnt_via_closed_form(r, opt);
    if (cf) CHECK(same(*cf, w));
    for (long m = 1; m <= 4; ++m) CHECK(strengthen_check(r, m));
    // The set is contained in every element of the pre-image chain.
    if (!w.is_bottom())
      for (long k = 1; k <= 6; ++k) {
        Octagon p = iterate(r, k);
        REQUIRE_FALSE(p.is_bottom());
        std::vector<size_t> keep;
        for (size_t v = 0; v < n; ++v) keep.push_back(v);
        CHECK(oct_leq(w, oct_project(p, keep)));
      }
  }
}

TEST_CASE("strengthening keeps the non-termination set") {
  for (const auto& r : running_relations())
    for (long m = 1; m <= 4; ++m) CHECK(strengthen_check(r, m));
  CHECK(strengthen_check(decrement(true), 2));
  CHECK(strengthen_check(oct_identity(2), 3));
}
