#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cterm/linarith.hpp"
#include "cterm/octagon.hpp"

namespace cterm {

// Integer atom over variables 0..n-1:
//   Le:  sum + constant <= 0
//   Eq:  sum + constant == 0
//   Div: modulus | sum + constant
struct PAtom {
  enum Kind { Le, Eq, Div };
  Kind kind = Le;
  std::map<int, Int> coeffs;  // no zero entries
  Int constant = 0;
  Int modulus = 0;  // Div only

  Int coeff(int v) const;
  bool mentions(int v) const { return coeffs.count(v) != 0; }
  bool operator==(const PAtom& o) const;
  bool operator<(const PAtom& o) const;

  static PAtom le(std::map<int, Int> coeffs, Int constant);
  static PAtom eq(std::map<int, Int> coeffs, Int constant);
  static PAtom div(Int modulus, std::map<int, Int> coeffs, Int constant);
};

using Conj = std::vector<PAtom>;

// Finite disjunction of conjunctions. No disjuncts means false; an empty conjunction means true.
struct Dnf {
  int nvars = 0;
  std::vector<Conj> disjuncts;

  static Dnf falsity(int nvars) { return Dnf{nvars, {}}; }
  static Dnf truth(int nvars) { return Dnf{nvars, {Conj{}}}; }
  static Dnf of(int nvars, Conj c) { return Dnf{nvars, {std::move(c)}}; }
  bool is_false() const { return disjuncts.empty(); }
};

enum class Truth { True, False, Open };

// Brings an atom into canonical form; reports atoms that became ground.
Truth normalize_atom(PAtom& a);
// Normalizes all atoms, drops true ones, merges opposite bounds. Returns false if found unsatisfiable.
bool normalize_conj(Conj& c);

bool conj_sat(const Conj& c);
bool dnf_sat(const Dnf& d);

// Exact integer elimination of one variable; the result does not mention v.
Dnf eliminate_var(const Conj& c, int nvars, int v);
Dnf exists(const Dnf& d, const std::vector<int>& vars);

Dnf dnf_and(const Dnf& a, const Dnf& b);
Dnf dnf_or(const Dnf& a, const Dnf& b);
Dnf negate_atom(const PAtom& a, int nvars);
Dnf dnf_not(const Dnf& d);

bool conj_entails(const Conj& a, const Conj& b);
bool entails(const Dnf& a, const Dnf& b);
bool equivalent(const Dnf& a, const Dnf& b);

// Drops unsatisfiable and subsumed disjuncts and redundant atoms.
Dnf simplify(const Dnf& d);
// Replaces pairs of octagonal disjuncts by their hull when the hull stays inside the union.
Dnf coalesce(const Dnf& d);

// Variable v becomes map[v] in a formula over new_nvars variables.
Dnf rename_vars(const Dnf& d, const std::vector<int>& map, int new_nvars);
Conj rename_conj(const Conj& c, const std::vector<int>& map);

bool eval_atom(const PAtom& a, const std::vector<Int>& point);
bool eval_conj(const Conj& c, const std::vector<Int>& point);
bool eval_dnf(const Dnf& d, const std::vector<Int>& point);

std::string atom_str(const PAtom& a, const std::vector<std::string>& names);
std::string conj_str(const Conj& c, const std::vector<std::string>& names);
std::string dnf_str(const Dnf& d, const std::vector<std::string>& names);

bool is_octagonal(const Conj& c);
Dnf octagon_to_dnf(const Octagon& o);
Conj octagon_to_conj(const Octagon& o);  // precondition: o consistent
std::optional<Octagon> conj_to_octagon(const Conj& c, int nvars);
LinSys conj_to_linsys(const Conj& c, int nvars);
// Smallest octagon containing the integer points of c (divisibility atoms are ignored).
Octagon conj_oct_hull(const Conj& c, int nvars);

// Relations over N variables use 2N variables ordered x, x'.
Dnf rel_identity(int n);
Dnf rel_compose(const Dnf& a, const Dnf& b);
// States with a successor in `set` (a formula over N variables).
Dnf rel_preimage(const Dnf& rel, const Dnf& set);
Dnf rel_image(const Dnf& rel, const Dnf& set);
// Embeds a formula over N variables on the unprimed (or primed) side of a relation.
Dnf lift_to_relation(const Dnf& set, bool primed);

}  // namespace cterm
