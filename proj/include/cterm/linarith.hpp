#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cterm/xint.hpp"

namespace cterm {

// Linear term: constant + sum of coefficient * variable. Zero coefficients are never stored.
class LinTerm {
 public:
  LinTerm() = default;
  explicit LinTerm(const Rational& c) : constant_(c) {}
  static LinTerm var(int v, const Rational& coeff = 1);

  const std::map<int, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }
  Rational coeff(int v) const;
  void set_coeff(int v, const Rational& c);
  void add_coeff(int v, const Rational& c);
  void set_constant(const Rational& c) { constant_ = c; }

  LinTerm operator+(const LinTerm& o) const;
  LinTerm operator-(const LinTerm& o) const;
  LinTerm operator-() const;
  LinTerm operator*(const Rational& k) const;
  bool operator==(const LinTerm& o) const { return coeffs_ == o.coeffs_ && constant_ == o.constant_; }

  Rational eval(const std::map<int, Rational>& model) const;
  bool is_constant() const { return coeffs_.empty(); }
  std::string str() const;

 private:
  std::map<int, Rational> coeffs_;
  Rational constant_ = 0;
};

enum class Rel { LE, LT, EQ };  // term REL 0

struct LinRow {
  LinTerm term;
  Rel rel = Rel::LE;
};

struct LinSys {
  int nvars = 0;
  std::vector<LinRow> rows;

  void add(const LinTerm& t, Rel r) { rows.push_back({t, r}); }
};

struct LpFeasible {
  bool feasible = false;
  std::map<int, Rational> model;
};

enum class LpStatus { Value, Unbounded, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::map<int, Rational> point;  // an optimal point when status == Value
};

LpFeasible lp_feasible(const LinSys& sys);
LpResult lp_sup(const LinSys& sys, const LinTerm& obj);
LpResult lp_inf(const LinSys& sys, const LinTerm& obj);
bool entails(const LinSys& sys, const LinRow& row);

// A row whose coefficients are linear expressions over unknowns u_0..u_{k-1}:
//   sum_v coeffs[v](u) * v + constant(u)  REL  0     (REL in {LE, EQ})
struct TemplateRow {
  std::map<int, LinTerm> coeffs;
  LinTerm constant;
  Rel rel = Rel::LE;
};

// Finds values of the unknowns such that every template row is entailed by sys,
// certified by non-negative Farkas multipliers. Strict rows of sys are used as
// their non-strict closure. Returns nullopt when no such values exist.
std::optional<std::map<int, Rational>> farkas_template(const LinSys& sys, const std::vector<TemplateRow>& rows,
                                                       int n_unknowns);

}  // namespace cterm
