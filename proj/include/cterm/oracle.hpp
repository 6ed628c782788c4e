#pragma once

#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cterm/affine.hpp"
#include "cterm/closure.hpp"
#include "cterm/program.hpp"

namespace cterm {

using Valuation = std::vector<Int>;

// Integer box, one closed interval per variable.
struct BoxDomain {
  std::vector<Int> lo, hi;

  static BoxDomain cube(size_t n, long lo, long hi);
  size_t dim() const { return lo.size(); }
  bool contains(const Valuation& v) const;
  size_t size() const;
  size_t index(const Valuation& v) const;
  Valuation point(size_t idx) const;
  void for_each(const std::function<void(const Valuation&)>& f) const;
};

bool eval_membership(const Dnf& f, const Valuation& v);
bool eval_membership(const Octagon& o, const Valuation& v);
// v holds x followed by x'.
bool eval_membership(const AffineRel& a, const Valuation& v);
bool eval_membership(const ParamOctUnion& u, const Valuation& v);

// Calls f on every successor of x under rel (over 2N variables) inside the box, stopping when f returns false.
// Successors reachable through several disjuncts may be reported more than once.
void for_each_successor(const Dnf& rel, const Valuation& x, const BoxDomain& box,
                        const std::function<bool(const Valuation&)>& f);

struct Lasso {
  std::vector<Valuation> stem;   // starts with the start valuation, excludes the cycle entry
  std::vector<Valuation> cycle;  // the last element steps back to the first
};
// An infinite run from start that never leaves the box, if one exists.
std::optional<Lasso> find_lasso(const Dnf& rel, const BoxDomain& box, const Valuation& start);

struct Config {
  size_t state = 0;
  Valuation val;
  bool operator==(const Config& o) const { return state == o.state && val == o.val; }
};
struct ProgramLasso {
  std::vector<Config> stem;
  std::vector<Config> cycle;
};
// Starts at (p.init, start).
std::optional<ProgramLasso> find_lasso(const Program& p, const BoxDomain& box, const Valuation& start);

// Box points admitting an infinite run inside the box: the greatest fixpoint of the in-box pre-image.
std::vector<Valuation> kleene_fixpoint_pre(const Dnf& rel, const BoxDomain& box);
std::vector<Valuation> kleene_fixpoint_pre(const Octagon& rel, const BoxDomain& box);
// Initial valuations admitting an infinite program run inside the box.
std::vector<Valuation> nonterminating_starts(const Program& p, const BoxDomain& box);

// Endpoint pairs of runs from q_in to q_out with 1..max_len transitions whose valuations stay in the box.
std::set<std::pair<Valuation, Valuation>> bounded_runs(const Program& p, size_t q_in, size_t q_out,
                                                       const BoxDomain& box, size_t max_len);

}  // namespace cterm
