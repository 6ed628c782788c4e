#pragma once

#include "cterm/linarith.hpp"
#include "cterm/octagon.hpp"

namespace cterm {

struct RankingWitness {
  Octagon witness_relation;  // over 2N variables
  LinTerm function;          // integer coefficients over x_0..x_{N-1}
  Int decrease = 1;
  Int lower_bound;
};

// R and exists x'. R^{4N^2}, tight; bottom when that power is empty.
Octagon witness_relation(const Octagon& r);

enum class LrfStatus { Found, NotFound, TriviallyWF };

struct LrfResult {
  LrfStatus status = LrfStatus::NotFound;
  RankingWitness witness;
};

LrfResult synthesize_lrf(const Octagon& v);

// v |= f(x) - f(x') >= decrease  and  v |= f(x) >= h, over the rationals.
bool verify_lrf(const Octagon& v, const LinTerm& f, const Int& decrease, const Int& h);

struct TerminationProof {
  bool well_founded = false;
  bool trivial = false;  // witness relation empty
  RankingWitness witness;
  Octagon wnt_set;  // when not well-founded
};

// Throws std::logic_error when the relation is well-founded but no ranking function is found.
TerminationProof prove_termination(const Octagon& r);

}  // namespace cterm
