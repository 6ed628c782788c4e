#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cterm/dbm.hpp"
#include "cterm/presburger.hpp"

namespace cterm {

// Affine term  constant + sum_p rates[p] * k_p  over non-negative integer parameters k_p.
struct ParamTerm {
  std::map<int, Int> rates;  // no zero entries
  Int constant = 0;

  ParamTerm() = default;
  explicit ParamTerm(Int c) : constant(std::move(c)) {}
  ParamTerm(Int c, int param, Int rate);

  Int rate(int p) const;
  Int eval(const std::map<int, Int>& valuation) const;
  ParamTerm operator+(const ParamTerm& o) const;
  bool operator==(const ParamTerm& o) const { return rates == o.rates && constant == o.constant; }
  bool operator<(const ParamTerm& o) const;
  std::string str(const std::vector<std::string>& param_names = {}) const;
};

// t <= s for every non-negative valuation (componentwise on rates and constant).
bool term_leq(const ParamTerm& t, const ParamTerm& s);

using TermSet = std::vector<ParamTerm>;

// Antichain of the minimal terms of s (duplicates collapsed).
TermSet min_terms(const TermSet& s);
// Pointwise minimum of a set at a valuation; infinity for the empty set.
XInt eval_set(const TermSet& s, const std::map<int, Int>& valuation);

// Square matrix whose entries are sets of parametric terms; an empty set is infinity.
class ExtParamDbm {
 public:
  ExtParamDbm() = default;
  explicit ExtParamDbm(size_t dim) : dim_(dim), e_(dim * dim) {}
  static ExtParamDbm from_dbm(const Dbm& m);
  // base + k_param * rate, entries infinite wherever base is.
  static ExtParamDbm from_rates(const Dbm& base, const Dbm& rate, int param);

  size_t dim() const { return dim_; }
  const TermSet& at(size_t i, size_t j) const { return e_[i * dim_ + j]; }
  TermSet& at(size_t i, size_t j) { return e_[i * dim_ + j]; }
  void add(size_t i, size_t j, const ParamTerm& t);

  bool operator==(const ExtParamDbm& o) const;
  std::set<int> params() const;

 private:
  size_t dim_ = 0;
  std::vector<TermSet> e_;
};

Dbm eval_at(const ExtParamDbm& m, const std::map<int, Int>& valuation);

// Parametric Floyd-Warshall over paths of bounded length; entries are minimized antichains.
ExtParamDbm param_fw(const ExtParamDbm& m);

// Constraint encoded by the matrix as a formula over variables followed by parameters
// (parameter p becomes variable nvars + p, constrained non-negative).  Octagonal
// matrices are read on dual variables.
Dnf param_dbm_formula(const ExtParamDbm& m, bool octagonal, int nparams);

// exists k >= 0 . phi_m for a single parameter (index 0).
Dnf param_exists_k(const ExtParamDbm& m, bool octagonal = false);

}  // namespace cterm
