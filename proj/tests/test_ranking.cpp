#include "cterm/ranking.hpp"
#include "cterm/term_oct.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cterm;
using namespace testsupport;

namespace {

LinTerm lin(std::initializer_list<std::pair<int, long>> cs) {
  LinTerm t;
  for (auto [v, c] : cs) t.set_coeff(v, c);
  return t;
}

Octagon guarded_decrement() { return oct_of(2, {oa_eq(1, 0, -1), {oa_unary(0, -1, 0)}}); }

bool same(const Octagon& a, const Octagon& b) {
  if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
  return oct_eq(a, b);
}

}  // namespace

TEST_CASE("witness relation") {
  // x >= 1 and x' <= 0: the second step is impossible
  CHECK(witness_relation(oct_of(2, {{oa_unary(0, -1, -1), oa_unary(1, 1, 0)}})).is_bottom());
  Octagon dec = oct_of(2, {oa_eq(1, 0, -1)});
  CHECK(same(witness_relation(dec), dec));
  // x >= 0, x' = x - 1: four steps need x >= 3
  CHECK(same(witness_relation(guarded_decrement()), oct_of(2, {oa_eq(1, 0, -1), {oa_unary(0, -1, -3)}})));
  CHECK_FALSE(witness_relation(zigzag_relation()).is_bottom());
}

TEST_CASE("ranking function synthesis on small relations") {
  LrfResult r = synthesize_lrf(guarded_decrement());
  REQUIRE(r.status == LrfStatus::Found);
  CHECK(r.witness.function == lin({{0, 1}}));
  CHECK(r.witness.decrease == 1);
  CHECK(r.witness.lower_bound == 0);
  CHECK(synthesize_lrf(oct_identity(1)).status == LrfStatus::NotFound);
  CHECK(synthesize_lrf(Octagon::bottom(2)).status == LrfStatus::TriviallyWF);
  CHECK(verify_lrf(guarded_decrement(), lin({{0, 1}}), 1, 0));
  CHECK_FALSE(verify_lrf(guarded_decrement(), lin({{0, -1}}), 1, 0));
  CHECK_FALSE(verify_lrf(guarded_decrement(), lin({{0, 1}}), 2, 0));
  CHECK_FALSE(verify_lrf(guarded_decrement(), lin({{0, 1}}), 1, 1));
}

TEST_CASE("zigzag relation needs the witness for boundedness") {
  Octagon r = zigzag_relation();
  CHECK(is_well_founded(r));
  LinTerm f = lin({{0, -1}, {1, -1}, {2, -1}, {3, 3}});
  LinSys sys = oct_to_linsys(tight_close(r));
  LinTerm fp = lin({{4, -1}, {5, -1}, {6, -1}, {7, 3}});
  CHECK(entails(sys, {fp - f + LinTerm(1), Rel::LE}));
  CHECK(lp_inf(sys, f).status == LpStatus::Unbounded);
  CHECK_FALSE(verify_lrf(r, f, 1, -1000));
  Octagon v = witness_relation(r);
  LpResult lo = lp_inf(oct_to_linsys(v), f);
  REQUIRE(lo.status == LpStatus::Value);
  CHECK(verify_lrf(v, f, 1, Int(lo.value.get_num() / lo.value.get_den())));
  LrfResult s = synthesize_lrf(v);
  REQUIRE(s.status == LrfStatus::Found);
  CHECK(verify_lrf(v, s.witness.function, s.witness.decrease, s.witness.lower_bound));
}

TEST_CASE("termination proofs of the running example relations") {
  auto rs = running_relations();
  for (size_t i : {1, 2, 3, 6}) {
    TerminationProof p = prove_termination(rs[i]);
    CHECK(p.well_founded);
    if (!p.trivial)
      CHECK(verify_lrf(p.witness.witness_relation, p.witness.function, p.witness.decrease, p.witness.lower_bound));
  }
  TerminationProof p1 = prove_termination(rs[0]);
  CHECK_FALSE(p1.well_founded);
  CHECK(same(p1.wnt_set, oct_of(2, {{oa_unary(0, 1, -1)}})));
  TerminationProof pid = prove_termination(oct_identity(2));
  CHECK_FALSE(pid.well_founded);
  CHECK(same(pid.wnt_set, Octagon::top(2)));
}

TEST_CASE("well-founded exactly when the witness has a ranking function") {
  for (int iter = 0; iter < 100; ++iter) {
    Octagon r = random_relation(static_cast<size_t>(rand_int(1, 2)), static_cast<size_t>(rand_int(2, 6)), 4);
    Octagon v = witness_relation(r);
    LrfResult s = synthesize_lrf(v);
    CHECK(is_well_founded(r) == (s.status != LrfStatus::NotFound));
    if (s.status == LrfStatus::Found)
      CHECK(verify_lrf(v, s.witness.function, s.witness.decrease, s.witness.lower_bound));
    CHECK(same(wnt(r).set, wnt(v).set));
  }
}
