#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cterm/closure.hpp"
#include "cterm/presburger.hpp"

namespace cterm {

struct Transition {
  size_t src = 0;
  size_t dst = 0;
  Dnf label;  // over x, x'
  size_t line = 0;
};

struct Program {
  std::vector<std::string> vars;
  std::vector<std::string> states;
  size_t init = 0;
  std::vector<Transition> transitions;

  size_t nvars() const { return vars.size(); }
  std::optional<size_t> state(const std::string& name) const;
};

// Program file: `vars x, y;`, `init l1;`, optional `states a, b;`, then `l1 -> l2 : <formula>;`.
// Throws ParseError, or FragmentError for a label disjunct that is neither octagonal nor affine.
Program parse_program(const std::string& text);

struct ProgramOptions {
  DetectOptions detect;
  size_t max_disjuncts = 256;
  // Rounds of X := X or X.X when closing several self-loops at once.
  int saturation_rounds = 8;
};

// Elementary cycles as lists of transition indices, each starting at its least state.
std::vector<std::vector<size_t>> elementary_cycles(const Program& p, size_t limit = 10000);

struct FlatResult {
  bool flat = true;
  std::string reason;
};
FlatResult is_flat(const Program& p);

// Composition of the labels of consecutive transitions.
Dnf path_relation(const Program& p, const std::vector<size_t>& path);

// The label as a single octagon, when it is equivalent to one.
std::optional<Octagon> dnf_as_octagon(const Dnf& d);
// Least octagon containing every disjunct (divisibility atoms ignored).
Octagon dnf_oct_hull(const Dnf& d);

struct RelResult {
  Dnf rel;
  bool exact = true;
  bool budget_exhausted = false;  // a period search, saturation or disjunct cap gave up
};

// R* of the union of `loops` (relations over 2N variables).
RelResult loop_closure(const std::vector<Dnf>& loops, size_t n, const ProgramOptions& opt = {});

// Runs of length >= 1 from q_in to q_out, by state elimination.
RelResult transitive_relation(const Program& p, size_t q_in, size_t q_out, const ProgramOptions& opt = {});
// Adds the identity when q_in == q_out.
RelResult reflexive_transitive_relation(const Program& p, size_t q_in, size_t q_out,
                                        const ProgramOptions& opt = {});

struct SetResult {
  Dnf set;
  bool exact = true;
  bool budget_exhausted = false;
};
// Valuations reachable at q from any valuation at the initial state.
SetResult reach_set(const Program& p, size_t q, const ProgramOptions& opt = {});

struct StateContribution {
  size_t state = 0;
  std::string method;  // "single-cycle" or "tinv"
  Dnf wnt;             // at q
  Dnf pre;             // pulled back to the initial state
  bool exact = true;
};

struct PrecondResult {
  Dnf precondition;  // over x
  std::vector<StateContribution> per_state;
  bool flat = false;
  bool exact = false;
  bool budget_exhausted = false;
};

PrecondResult nt_program(const Program& p, const ProgramOptions& opt = {});

}  // namespace cterm
