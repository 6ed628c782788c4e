#include "cterm/closure.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cterm;
using testsupport::rand_int;

namespace {

OctAtom diff(int i, int j, long c) {  // x_i - x_j <= c
  OctAtom a;
  a.i = i;
  a.si = 1;
  a.j = j;
  a.sj = -1;
  a.c = c;
  return a;
}
OctAtom unary(int i, int si, long c) {
  OctAtom a;
  a.i = i;
  a.si = si;
  a.c = c;
  return a;
}
std::vector<OctAtom> eq_diff(int i, int j, long c) { return {diff(i, j, c), diff(j, i, -c)}; }

// The zigzag relation over x1..x4 (0..3), primed 4..7.
Octagon zigzag() {
  return Octagon::from_atoms(8, {diff(1, 4, -1), diff(2, 5, 0), diff(0, 6, 0), diff(7, 3, 0), diff(6, 3, 0)});
}

// Expected unprimed blocks, entries (i, 4) for i = 1, 2, 3 (nullopt = infinity).  Cross-checked
// against Presburger composition in "zigzag pre-images agree with Presburger composition".
const std::vector<std::array<std::optional<long>, 3>> kZigzagPre = {
    {0, std::nullopt, std::nullopt}, {0, -1, std::nullopt}, {0, -1, -1},  {-1, -1, -1}, {-1, -2, -1}, {-1, -2, -2},
    {-2, -2, -2},                    {-2, -3, -2},          {-2, -3, -3}, {-3, -3, -3}, {-3, -4, -3}};

void check_block(const Dbm& m, size_t n_index) {
  // m is the 8x8 dual matrix of an octagon over x1..x4; the difference block reads (2i, 2j).
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) {
      XInt got = m.at(2 * i, 2 * j);
      if (i == j) {
        CHECK(got == XInt(0));
      } else if (j == 3) {
        auto want = kZigzagPre[n_index][i];
        if (want)
          CHECK(got == XInt(*want));
        else
          CHECK(got.is_inf());
      } else {
        CHECK(got.is_inf());
      }
    }
}

Octagon decrement(bool guarded) {
  std::vector<OctAtom> a = eq_diff(1, 0, -1);  // x' - x = -1
  if (guarded) a.push_back(unary(0, -1, 0));  // x >= 0
  return Octagon::from_atoms(2, a);
}

Octagon random_relation(size_t n, size_t natoms) {
  std::vector<OctAtom> atoms;
  for (size_t k = 0; k < natoms; ++k) {
    OctAtom a;
    a.i = static_cast<int>(rand_int(0, static_cast<long>(2 * n) - 1));
    a.si = rand_int(0, 1) ? 1 : -1;
    if (rand_int(0, 3) != 0) {
      do a.j = static_cast<int>(rand_int(0, static_cast<long>(2 * n) - 1));
      while (a.j == a.i);
      a.sj = rand_int(0, 1) ? 1 : -1;
    }
    a.c = rand_int(-3, 3);
    atoms.push_back(a);
  }
  return Octagon::from_atoms(2 * n, atoms);
}

}  // namespace

TEST_CASE("pre-image blocks of the zigzag relation") {
  auto pre = kleene_pre_sequence(zigzag(), 11);
  for (size_t n = 0; n < 11; ++n) check_block(pre[n].dbm(), n);
}

TEST_CASE("zigzag pre-images agree with Presburger composition") {
  auto d = [](int i, int j, long c) { return PAtom::le({{i, 1}, {j, -1}}, -c); };
  Dnf r = Dnf::of(8, {d(1, 4, -1), d(2, 5, 0), d(0, 6, 0), d(7, 3, 0), d(6, 3, 0)});
  Dnf p = r;
  for (size_t n = 1; n <= 5; ++n) {
    if (n > 1) p = rel_compose(p, r);
    Dnf pre = exists(p, {4, 5, 6, 7});
    for (int i = 0; i < 3; ++i) {
      auto want = kZigzagPre[n - 1][static_cast<size_t>(i)];
      if (!want) {
        // unbounded: x_i - x_4 >= 5 is reachable
        CHECK(dnf_sat(dnf_and(pre, Dnf::of(8, {PAtom::le({{i, -1}, {3, 1}}, 5)}))));
        continue;
      }
      CHECK(dnf_sat(dnf_and(pre, Dnf::of(8, {PAtom::le({{i, -1}, {3, 1}}, *want)}))));
      CHECK_FALSE(dnf_sat(dnf_and(pre, Dnf::of(8, {PAtom::le({{i, -1}, {3, 1}}, *want + 1)}))));
    }
  }
}

TEST_CASE("pre-image period of the zigzag relation") {
  DetectOptions opt;
  opt.mode = PeriodMode::PreImage;
  PeriodResult r = detect_period(zigzag(), opt);
  REQUIRE(r.status == PeriodStatus::Found);
  CHECK(r.cert.b == 3);
  CHECK(r.cert.c == 3);
  REQUIRE(r.cert.rates.size() == 3);
  for (const Dbm& lam : r.cert.rates) {
    CHECK(lam == r.cert.rates[0]);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) {
        XInt want = (j == 3 && i < 3) ? XInt(-1) : XInt(0);
        if (r.cert.base[0].dbm().at(2 * i, 2 * j).is_inf())
          CHECK(lam.at(2 * i, 2 * j).is_inf());
        else
          CHECK(lam.at(2 * i, 2 * j) == want);
      }
  }
  for (long n = 1; n <= 11; ++n) check_block(r.cert.predict(n).dbm(), static_cast<size_t>(n - 1));
}

TEST_CASE("parametric closure of the zigzag pre-image family") {
  // Difference block of pre^3 plus k times the rates; closing and evaluating gives pre^{3+3k}.
  Dbm base(4), lam(4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) lam.set(i, j, 0);
  for (size_t i = 0; i < 3; ++i) {
    base.set(i, 3, XInt(*kZigzagPre[2][i]));
    lam.set(i, 3, -1);
  }
  ExtParamDbm c = param_fw(ExtParamDbm::from_rates(base, lam, 0));
  for (long k = 0; k <= 2; ++k) {
    Dbm m = eval_at(c, {{0, k}});
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) {
        auto want = (j == 3 && i < 3) ? kZigzagPre[static_cast<size_t>(2 + 3 * k)][i] : std::optional<long>();
        if (i == j)
          CHECK(m.at(i, j) == XInt(0));
        else if (want)
          CHECK(m.at(i, j) == XInt(*want));
        else
          CHECK(m.at(i, j).is_inf());
      }
  }
}

TEST_CASE("period of a decrement") {
  PeriodResult r = detect_period(decrement(false));
  REQUIRE(r.status == PeriodStatus::Found);
  CHECK(r.cert.b == 1);
  CHECK(r.cert.c == 1);
  // dual indices: +x = 0, +x' = 2
  CHECK(r.cert.rates[0].at(2, 0) == XInt(-1));
  CHECK(r.cert.rates[0].at(0, 2) == XInt(1));

  PeriodResult g = detect_period(decrement(true));
  CHECK(g.status == PeriodStatus::Found);
}

TEST_CASE("closed form of the guarded decrement") {
  auto f = pre_closed_form(decrement(true));
  REQUIRE(f.has_value());
  CHECK_FALSE(f->empty);
  // pre^{b+k}: x >= k + b - 1
  bool found = false;
  for (const auto& bd : f->bounds())
    if (bd.atom.unary() && bd.atom.si == -1) {
      found = true;
      CHECK(bd.d == -1);
      CHECK(bd.atom.c == -(f->b - 1));
    }
  CHECK(found);
  auto w = wnt_via_closed_form(decrement(true));
  REQUIRE(w.has_value());
  CHECK(w->is_bottom());

  auto u = wnt_via_closed_form(Octagon::from_atoms(2, eq_diff(1, 0, 0)));
  REQUIRE(u.has_value());
  CHECK(oct_eq(*u, Octagon::top(1)));
}

TEST_CASE("Kleene sequence of the guarded decrement") {
  auto pre = kleene_pre_sequence(decrement(true), 8);
  for (long n = 1; n <= 8; ++n)
    CHECK(oct_eq(pre[static_cast<size_t>(n - 1)], tight_close(Octagon::from_atoms(1, {unary(0, -1, -(n - 1))}))));
}

TEST_CASE("finite powers give a finite closure") {
  // 0 <= x <= 1, x' = x + 1
  std::vector<OctAtom> a = eq_diff(1, 0, 1);
  a.push_back(unary(0, -1, 0));
  a.push_back(unary(0, 1, 1));
  Octagon r = Octagon::from_atoms(2, a);
  PeriodResult p = detect_period(r);
  CHECK(p.status == PeriodStatus::NotStarConsistent);
  CHECK(p.inconsistent_power == 3);
  auto cl = reflexive_transitive_closure(r);
  REQUIRE(cl.has_value());
  CHECK(cl->octs.size() == 2);
  CHECK(cl->families.empty());
  Dnf d = cl->to_dnf();
  for (long x = -3; x <= 4; ++x)
    for (long y = -3; y <= 4; ++y) {
      bool want = x == y || (x >= 0 && x <= 1 && y == x + 1) || (x == 0 && y == 2);
      CHECK(eval_dnf(d, {Int(x), Int(y)}) == want);
    }
}

TEST_CASE("closure of an incrementing loop with a bound") {
  // Variables x, y, y0, m, n; primed 5..9.  x < m, x' = x + 1, y' = y + 1, rest preserved.
  std::vector<OctAtom> a{diff(0, 3, -1)};
  for (auto v : eq_diff(5, 0, 1)) a.push_back(v);
  for (auto v : eq_diff(6, 1, 1)) a.push_back(v);
  for (int v = 2; v <= 4; ++v)
    for (auto e : eq_diff(5 + v, v, 0)) a.push_back(e);
  Octagon r = Octagon::from_atoms(10, a);
  auto cl = reflexive_transitive_closure(r);
  REQUIRE(cl.has_value());
  Dnf got = cl->to_dnf();
  // identity, or x' - x = y' - y, x' >= x + 1, m >= x', m n y0 preserved
  Conj step{PAtom::eq({{5, 1}, {0, -1}, {6, -1}, {1, 1}}, 0), PAtom::le({{0, 1}, {5, -1}}, 1),
            PAtom::le({{5, 1}, {3, -1}}, 0)};
  for (int v = 2; v <= 4; ++v) step.push_back(PAtom::eq({{5 + v, 1}, {v, -1}}, 0));
  Dnf want = dnf_or(rel_identity(5), Dnf::of(10, step));
  CHECK(equivalent(got, want));
}

TEST_CASE("certificates predict every power") {
  int found = 0;
  for (int iter = 0; iter < 60; ++iter) {
    size_t n = static_cast<size_t>(rand_int(1, 2));
    Octagon r = random_relation(n, static_cast<size_t>(rand_int(1, 4)));
    DetectOptions opt;
    opt.max_b = 8;
    opt.max_c = 4;
    for (PeriodMode mode : {PeriodMode::Full, PeriodMode::PreImage}) {
      opt.mode = mode;
      PeriodResult p = detect_period(r, opt);
      if (p.status != PeriodStatus::Found) continue;
      ++found;
      Octagon pw = tight_close(r);
      for (long k = 1; k <= 25; ++k) {
        if (k > 1) pw = oct_compose(pw, tight_close(r));
        REQUIRE_FALSE(pw.is_bottom());
        Octagon want = pw;
        if (mode == PeriodMode::PreImage) {
          std::vector<size_t> keep;
          for (size_t v = 0; v < n; ++v) keep.push_back(v);
          want = oct_project(pw, keep);
        }
        CHECK(oct_eq(p.cert.predict(k), want));
      }
    }
  }
  CHECK(found > 20);
}

TEST_CASE("Kleene chains descend") {
  for (int iter = 0; iter < 60; ++iter) {
    Octagon r = random_relation(2, static_cast<size_t>(rand_int(1, 5)));
    auto pre = kleene_pre_sequence(r, 12);
    for (size_t k = 0; k + 1 < pre.size(); ++k) CHECK(oct_leq(pre[k + 1], pre[k]));
  }
}

TEST_CASE("transitive closure agrees with powers") {
  for (int iter = 0; iter < 30; ++iter) {
    Octagon r = random_relation(1, static_cast<size_t>(rand_int(1, 3)));
    DetectOptions opt;
    opt.max_b = 8;
    opt.max_c = 4;
    auto cl = transitive_closure(r, false, opt);
    if (!cl) continue;
    Dnf d = cl->to_dnf();
    std::vector<Octagon> pw{tight_close(r)};
    for (int k = 1; k < 40; ++k) pw.push_back(oct_compose(pw.back(), pw[0]));
    for (long x = -5; x <= 5; ++x)
      for (long y = -5; y <= 5; ++y) {
        bool in_power = false;
        for (const auto& p : pw)
          if (!p.is_bottom() && p.contains({Int(x), Int(y)})) in_power = true;
        CHECK(eval_dnf(d, {Int(x), Int(y)}) == in_power);
      }
  }
}
