#pragma once

#include <optional>
#include <vector>

#include "cterm/presburger.hpp"

namespace cterm {

using IntVector = std::vector<Int>;
using IntMatrix = std::vector<IntVector>;
using Poly = std::vector<Rational>;  // coefficients in ascending degree

IntMatrix mat_identity(size_t n);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
IntMatrix mat_pow(const IntMatrix& a, unsigned long k);
IntVector mat_vec(const IntMatrix& a, const IntVector& v);

// x' = A x + b  guarded by  C x >= d  (componentwise).
struct AffineRel {
  size_t n = 0;
  IntMatrix A;
  IntVector b;
  IntMatrix C;
  IntVector d;

  // Successor of a point, or nullopt when the guard fails.
  std::optional<IntVector> step(const IntVector& x) const;
  bool guard_holds(const IntVector& x) const;
  // The relation over x, x' as a conjunction.
  Conj to_conj() const;
};

// Reads a conjunction over 2n variables as an affine relation: one equation x'_i = ... per
// primed variable, everything else over unprimed variables only.
std::optional<AffineRel> affine_from_conj(const Conj& c, size_t n);

// lcm{ d in 1..2n^2 : phi(d) <= n }
unsigned long monoid_exponent_bound(size_t n);
bool is_finite_monoid(const IntMatrix& a);

// Least b <= n and least c with A^{b+c} = A^b.
struct MonoidPeriod {
  unsigned long b = 0;
  unsigned long c = 1;
};
std::optional<MonoidPeriod> monoid_period(const IntMatrix& a);

// Exact non-termination set of an affine relation whose matrix generates a finite monoid.
// Throws std::invalid_argument otherwise.
Dnf finite_monoid_wnt(const AffineRel& r);
// Transitive closure (R+) of such a relation, over 2n variables.
Dnf finite_monoid_closure(const AffineRel& r);

// x_{n+1} = 1 convention: A_h = [[A, b], [0, 1]], C_h = [C, -d] so the guard reads C_h x_h >= 0.
struct HomogenizedRel {
  IntMatrix A_h;
  IntMatrix C_h;
};
HomogenizedRel homogenize(const AffineRel& r);

Poly char_poly(const IntMatrix& a);

// (A^{kL + r})_{ij} = p[r][i][j](k) for every k >= k0.
struct PolyClosedForm {
  size_t n = 0;
  unsigned long L = 1;
  unsigned long k0 = 0;
  std::vector<std::vector<std::vector<Poly>>> p;

  IntMatrix eval(unsigned long r, unsigned long k) const;
};

Rational poly_eval(const Poly& p, const Rational& k);

// nullopt when some nonzero eigenvalue is not a root of unity.
std::optional<PolyClosedForm> poly_matrix_power(const IntMatrix& a);

struct SufficientOptions {
  // Also list guard violations at steps 0 .. prefix_steps-1.
  unsigned long prefix_steps = 0;
};

// States from which the loop certainly terminates; nullopt when A is not polynomially bounded.
std::optional<Dnf> sufficient_termination(const AffineRel& r, const SufficientOptions& opt = {});

}  // namespace cterm
