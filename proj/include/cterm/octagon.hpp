#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cterm/dbm.hpp"
#include "cterm/linarith.hpp"

namespace cterm {

// si * x_i + sj * x_j <= c, or si * x_i <= c when j < 0.  Signs are +1 or -1.
struct OctAtom {
  int i = 0;
  int si = 1;
  int j = -1;
  int sj = 1;
  Int c;

  bool unary() const { return j < 0; }
  bool operator==(const OctAtom& o) const { return i == o.i && si == o.si && j == o.j && sj == o.sj && c == o.c; }
};

// Index of the dual variable standing for sign * x_v.
inline size_t dual(size_t v, int sign) { return 2 * v + (sign > 0 ? 0 : 1); }
inline size_t bar(size_t k) { return k ^ 1U; }

// Octagonal constraint over m variables as a coherent 2m x 2m matrix on dual variables
// (index 2v is +x_v, index 2v+1 is -x_v).
class Octagon {
 public:
  Octagon() = default;
  static Octagon top(size_t nvars);
  static Octagon bottom(size_t nvars);
  // Encodes atoms; the result is not closed.
  static Octagon from_atoms(size_t nvars, const std::vector<OctAtom>& atoms);
  static Octagon from_dbm(const Dbm& m, bool tight);

  size_t nvars() const { return nvars_; }
  bool is_bottom() const { return m_.is_bottom(); }
  bool is_tight() const { return tight_; }
  const Dbm& dbm() const { return m_; }
  const XInt& at(size_t a, size_t b) const { return m_.at(a, b); }

  // Adds an atom (meet); clears the tight flag.
  void add(const OctAtom& a);
  // Decodes finite entries into atoms (one atom per coherent pair).
  std::vector<OctAtom> atoms() const;
  bool contains(const std::vector<Int>& point) const;

  bool operator==(const Octagon& o) const { return nvars_ == o.nvars_ && m_ == o.m_; }
  std::string str(const std::vector<std::string>& names) const;

 private:
  size_t nvars_ = 0;
  Dbm m_;
  bool tight_ = false;
};

Octagon tight_close(const Octagon& o);
bool oct_is_consistent(const Octagon& o);

// Relations over N program variables use 2N variables ordered x_1..x_N, x'_1..x'_N.
Octagon oct_identity(size_t n);
Octagon oct_compose(const Octagon& a, const Octagon& b);
// Keeps the listed variables (in order) of a tight octagon.
Octagon oct_project(const Octagon& o, const std::vector<size_t>& keep_vars);
// Eliminates the listed variables of an octagon (tightly closing it first if needed).
Octagon oct_exists(const Octagon& o, const std::vector<size_t>& drop_vars);
Octagon oct_meet(const Octagon& a, const Octagon& b);
// Embeds an octagon over N variables as a constraint on the unprimed (or primed) side of a relation.
Octagon oct_lift_to_relation(const Octagon& guard, bool primed);
// Set of states having a successor: projection of a relation onto its unprimed half.
Octagon oct_domain(const Octagon& rel);

bool oct_leq(const Octagon& a, const Octagon& b);
bool oct_eq(const Octagon& a, const Octagon& b);

// Item for hulling: either an octagon or a rational polyhedron over the same variables.
struct HullItem {
  std::optional<Octagon> oct;
  std::optional<LinSys> poly;
};
Octagon oct_hull(size_t nvars, const std::vector<HullItem>& items);

Int max_coef(const Octagon& o);

// Linear term for the octagonal difference y_a - y_b over the original variables.
LinTerm dual_difference(size_t a, size_t b);
// Rational system of an octagon's finite entries.
LinSys oct_to_linsys(const Octagon& o);

}  // namespace cterm
