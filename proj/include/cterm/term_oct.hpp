#pragma once

#include "cterm/octagon.hpp"

namespace cterm {

// Octagon of R^n by repeated squaring; bottom as soon as a partial power is empty.
Octagon fast_power(const Octagon& r, const Int& n);

struct WntResult {
  Octagon set;  // over N variables; bottom when R is well-founded
  Int n1;       // 5^{2N}
  Int n2;       // 5^{2N} + 1
  bool w_consistent = false;
  bool stable = false;  // unprimed blocks of R^{n1} and R^{n2} coincide
};

// Weakest non-termination set of an octagonal relation over 2N variables.
WntResult wnt(const Octagon& r);
bool is_well_founded(const Octagon& r);

// exists x'. R^m  over N variables.
Octagon domain_of_power(const Octagon& r, long m);
// wnt(r) == wnt(r and exists x''. R^m(x', x'')); always true.
bool strengthen_check(const Octagon& r, long m);

}  // namespace cterm
