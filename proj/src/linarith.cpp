#include "cterm/linarith.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace cterm {

LinTerm LinTerm::var(int v, const Rational& coeff) {
  LinTerm t;
  t.set_coeff(v, coeff);
  return t;
}

Rational LinTerm::coeff(int v) const {
  auto it = coeffs_.find(v);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void LinTerm::set_coeff(int v, const Rational& c) {
  if (c == 0) {
    coeffs_.erase(v);
  } else {
    coeffs_[v] = c;
  }
}

void LinTerm::add_coeff(int v, const Rational& c) { set_coeff(v, coeff(v) + c); }

LinTerm LinTerm::operator+(const LinTerm& o) const {
  LinTerm r = *this;
  for (const auto& [v, c] : o.coeffs_) r.add_coeff(v, c);
  r.constant_ += o.constant_;
  return r;
}

LinTerm LinTerm::operator-(const LinTerm& o) const { return *this + (-o); }

LinTerm LinTerm::operator-() const { return *this * Rational(-1); }

LinTerm LinTerm::operator*(const Rational& k) const {
  LinTerm r;
  if (k == 0) return r;
  for (const auto& [v, c] : coeffs_) r.coeffs_[v] = c * k;
  r.constant_ = constant_ * k;
  return r;
}

Rational LinTerm::eval(const std::map<int, Rational>& model) const {
  Rational s = constant_;
  for (const auto& [v, c] : coeffs_) {
    auto it = model.find(v);
    if (it != model.end()) s += c * it->second;
  }
  return s;
}

std::string LinTerm::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs_) {
    if (!first) os << " + ";
    os << c.get_str() << "*v" << v;
    first = false;
  }
  if (first || constant_ != 0) {
    if (!first) os << " + ";
    os << constant_.get_str();
  }
  return os.str();
}

namespace {

// maximize c.x subject to A x (<= | =) b, with per-variable sign restriction.
struct StdLp {
  int n = 0;
  std::vector<bool> nonneg;
  std::vector<std::vector<Rational>> a;
  std::vector<bool> is_eq;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

struct StdRes {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_(rows, std::vector<Rational>(cols + 1)), basis_(rows, -1) {}

  Rational& at(int i, int j) { return t_[i][j]; }
  Rational& rhs(int i) { return t_[i][n_]; }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int col, std::vector<Rational>& obj) {
    Rational p = t_[r][col];
    for (int j = 0; j <= n_; ++j) {
      if (t_[r][j] != 0) t_[r][j] /= p;
    }
    for (int i = 0; i < m_; ++i) {
      if (i == r || t_[i][col] == 0) continue;
      Rational f = t_[i][col];
      for (int j = 0; j <= n_; ++j) {
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
      }
    }
    if (obj[col] != 0) {
      Rational f = obj[col];
      for (int j = 0; j <= n_; ++j) {
        if (t_[r][j] != 0) obj[j] -= f * t_[r][j];
      }
    }
    basis_[r] = col;
  }

  // Maximizes; obj holds reduced costs (entering when negative) and obj[n] = current value.
  // Columns >= limit are never chosen to enter. Returns false when unbounded.
  bool optimize(std::vector<Rational>& obj, int limit) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (obj[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][n_] / t_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, obj);
    }
  }

  void drop_row(int r) {
    t_.erase(t_.begin() + r);
    basis_.erase(basis_.begin() + r);
    --m_;
  }

 private:
  int m_;
  int n_;
  std::vector<std::vector<Rational>> t_;
  std::vector<int> basis_;
};

StdRes solve_std(const StdLp& lp) {
  const int m = static_cast<int>(lp.a.size());
  // Column layout: structural (split free vars), slacks, artificials.
  std::vector<int> pos_col(lp.n), neg_col(lp.n, -1);
  int ncol = 0;
  for (int j = 0; j < lp.n; ++j) {
    pos_col[j] = ncol++;
    if (!lp.nonneg[j]) neg_col[j] = ncol++;
  }
  const int n_struct = ncol;
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m; ++i) {
    if (!lp.is_eq[i]) slack_col[i] = ncol++;
  }
  const int n_real = ncol;
  const int n_total = n_real + m;
  Tableau tab(m, n_total);
  for (int i = 0; i < m; ++i) {
    bool flip = lp.b[i] < 0;
    Rational s = flip ? -1 : 1;
    for (int j = 0; j < lp.n; ++j) {
      const Rational& v = lp.a[i][j];
      if (v == 0) continue;
      tab.at(i, pos_col[j]) = s * v;
      if (neg_col[j] >= 0) tab.at(i, neg_col[j]) = -s * v;
    }
    if (slack_col[i] >= 0) tab.at(i, slack_col[i]) = s;
    tab.at(i, n_real + i) = 1;
    tab.rhs(i) = s * lp.b[i];
    tab.basis()[i] = n_real + i;
  }
  // Phase 1: maximize -sum(artificials).
  std::vector<Rational> obj(n_total + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n_real; ++j) obj[j] -= tab.at(i, j);
    obj[n_total] -= tab.rhs(i);
  }
  tab.optimize(obj, n_real);
  StdRes res;
  if (obj[n_total] != 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis.
  for (int i = 0; i < tab.rows();) {
    if (tab.basis()[i] >= n_real) {
      int col = -1;
      for (int j = 0; j < n_real; ++j) {
        if (tab.at(i, j) != 0) {
          col = j;
          break;
        }
      }
      if (col < 0) {
        tab.drop_row(i);
        continue;
      }
      tab.pivot(i, col, obj);
    }
    ++i;
  }
  // Phase 2.
  std::vector<Rational> cost(n_total, 0);
  for (int j = 0; j < lp.n; ++j) {
    cost[pos_col[j]] = lp.c[j];
    if (neg_col[j] >= 0) cost[neg_col[j]] = -lp.c[j];
  }
  std::vector<Rational> obj2(n_total + 1);
  for (int j = 0; j < n_real; ++j) obj2[j] = -cost[j];
  for (int i = 0; i < tab.rows(); ++i) {
    int bv = tab.basis()[i];
    Rational cb = cost[bv];
    if (cb == 0) continue;
    for (int j = 0; j <= n_total; ++j) {
      Rational v = j == n_total ? tab.rhs(i) : tab.at(i, j);
      if (v != 0) obj2[j] += cb * v;
    }
  }
  // Artificial columns are excluded from entering; clear them to keep the row consistent.
  for (int j = n_real; j < n_total; ++j) obj2[j] = 0;
  bool bounded = tab.optimize(obj2, n_real);
  std::vector<Rational> colval(n_total, 0);
  for (int i = 0; i < tab.rows(); ++i) colval[tab.basis()[i]] = tab.rhs(i);
  res.x.assign(lp.n, 0);
  for (int j = 0; j < lp.n; ++j) {
    res.x[j] = colval[pos_col[j]];
    if (neg_col[j] >= 0) res.x[j] -= colval[neg_col[j]];
  }
  (void)n_struct;
  if (!bounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Value;
  res.value = obj2[n_total];
  return res;
}

struct Indexed {
  std::vector<int> vars;  // position -> variable id
  std::map<int, int> index;
};

Indexed collect_vars(const LinSys& sys, const LinTerm* extra) {
  Indexed ix;
  std::set<int> vs;
  for (const auto& r : sys.rows)
    for (const auto& kv : r.term.coeffs()) vs.insert(kv.first);
  if (extra)
    for (const auto& kv : extra->coeffs()) vs.insert(kv.first);
  for (int v : vs) {
    ix.index[v] = static_cast<int>(ix.vars.size());
    ix.vars.push_back(v);
  }
  return ix;
}

// Builds the LP over the closure of sys (strict rows relaxed). Extra column `t` appended when
// with_t: strict rows become term + t <= 0 and t <= 1.
StdLp build_lp(const LinSys& sys, const Indexed& ix, bool with_t) {
  StdLp lp;
  lp.n = static_cast<int>(ix.vars.size()) + (with_t ? 1 : 0);
  lp.nonneg.assign(lp.n, false);
  lp.c.assign(lp.n, 0);
  for (const auto& r : sys.rows) {
    std::vector<Rational> row(lp.n, 0);
    for (const auto& [v, c] : r.term.coeffs()) row[ix.index.at(v)] = c;
    if (with_t && r.rel == Rel::LT) row[lp.n - 1] = 1;
    lp.a.push_back(row);
    lp.is_eq.push_back(r.rel == Rel::EQ);
    lp.b.push_back(-r.term.constant());
  }
  if (with_t) {
    std::vector<Rational> row(lp.n, 0);
    row[lp.n - 1] = 1;
    lp.a.push_back(row);
    lp.is_eq.push_back(false);
    lp.b.push_back(1);
  }
  return lp;
}

bool has_strict(const LinSys& sys) {
  for (const auto& r : sys.rows)
    if (r.rel == Rel::LT) return true;
  return false;
}

std::map<int, Rational> to_model(const Indexed& ix, const std::vector<Rational>& x) {
  std::map<int, Rational> m;
  for (size_t i = 0; i < ix.vars.size(); ++i) m[ix.vars[i]] = x[i];
  return m;
}

}  // namespace

LpFeasible lp_feasible(const LinSys& sys) {
  // Constant rows are decided directly.
  LinSys rest;
  rest.nvars = sys.nvars;
  for (const auto& r : sys.rows) {
    if (r.term.is_constant()) {
      const Rational& c = r.term.constant();
      bool ok = r.rel == Rel::LE ? c <= 0 : r.rel == Rel::LT ? c < 0 : c == 0;
      if (!ok) return {};
    } else {
      rest.rows.push_back(r);
    }
  }
  Indexed ix = collect_vars(rest, nullptr);
  bool strict = has_strict(rest);
  StdLp lp = build_lp(rest, ix, strict);
  if (strict) lp.c[lp.n - 1] = 1;
  StdRes r = solve_std(lp);
  LpFeasible out;
  if (r.status == LpStatus::Infeasible) return out;
  if (strict && !(r.value > 0)) return out;
  out.feasible = true;
  out.model = to_model(ix, r.x);
  for (int v = 0; v < sys.nvars; ++v) out.model.emplace(v, 0);
  return out;
}

LpResult lp_sup(const LinSys& sys, const LinTerm& obj) {
  LpResult res;
  if (has_strict(sys) && !lp_feasible(sys).feasible) return res;
  LinSys rest;
  rest.nvars = sys.nvars;
  for (const auto& r : sys.rows) {
    if (r.term.is_constant()) {
      const Rational& c = r.term.constant();
      bool ok = r.rel == Rel::LE ? c <= 0 : r.rel == Rel::LT ? c < 0 : c == 0;
      if (!ok) return res;
    } else {
      rest.rows.push_back(r);
    }
  }
  Indexed ix = collect_vars(rest, &obj);
  StdLp lp = build_lp(rest, ix, false);
  for (const auto& [v, c] : obj.coeffs()) lp.c[ix.index.at(v)] = c;
  StdRes r = solve_std(lp);
  res.status = r.status;
  if (r.status == LpStatus::Value) {
    res.value = r.value + obj.constant();
    res.point = to_model(ix, r.x);
  }
  return res;
}

LpResult lp_inf(const LinSys& sys, const LinTerm& obj) {
  LpResult r = lp_sup(sys, -obj);
  if (r.status == LpStatus::Value) r.value = -r.value;
  return r;
}

bool entails(const LinSys& sys, const LinRow& row) {
  auto refutes = [&](const LinTerm& t, Rel rel) {
    LinSys s = sys;
    s.add(t, rel);
    return !lp_feasible(s).feasible;
  };
  switch (row.rel) {
    case Rel::LE:
      return refutes(-row.term, Rel::LT);  // no point with term > 0
    case Rel::LT:
      return refutes(-row.term, Rel::LE);  // no point with term >= 0
    case Rel::EQ:
      return refutes(-row.term, Rel::LT) && refutes(row.term, Rel::LT);
  }
  return false;
}

std::optional<std::map<int, Rational>> farkas_template(const LinSys& sys, const std::vector<TemplateRow>& rows,
                                                       int n_unknowns) {
  if (!lp_feasible(sys).feasible) {
    // Everything is entailed by an empty system; any assignment works.
    std::map<int, Rational> m;
    for (int u = 0; u < n_unknowns; ++u) m[u] = 0;
    return m;
  }
  std::set<int> vars;
  for (const auto& r : sys.rows)
    for (const auto& kv : r.term.coeffs()) vars.insert(kv.first);
  for (const auto& t : rows)
    for (const auto& kv : t.coeffs) vars.insert(kv.first);
  // LP columns: unknowns, then for each target row (split EQ into two) one multiplier per sys row and a slack.
  struct Target {
    const TemplateRow* row;
    Rational sign;
  };
  std::vector<Target> targets;
  for (const auto& t : rows) {
    targets.push_back({&t, 1});
    if (t.rel == Rel::EQ) targets.push_back({&t, -1});
  }
  const int nrows = static_cast<int>(sys.rows.size());
  const int per_target = nrows + 1;
  StdLp lp;
  lp.n = n_unknowns + static_cast<int>(targets.size()) * per_target;
  lp.nonneg.assign(lp.n, true);
  for (int u = 0; u < n_unknowns; ++u) lp.nonneg[u] = false;
  lp.c.assign(lp.n, 0);
  for (size_t ti = 0; ti < targets.size(); ++ti) {
    const int base = n_unknowns + static_cast<int>(ti) * per_target;
    for (int k = 0; k < nrows; ++k) {
      if (sys.rows[k].rel == Rel::EQ) lp.nonneg[base + k] = false;
    }
    const TemplateRow& tr = *targets[ti].row;
    const Rational& sg = targets[ti].sign;
    // For each variable: sum_k lambda_k a_kv - sg * coeff_v(u) = 0.
    for (int v : vars) {
      std::vector<Rational> row(lp.n, 0);
      Rational rhs = 0;
      for (int k = 0; k < nrows; ++k) row[base + k] = sys.rows[k].term.coeff(v);
      auto it = tr.coeffs.find(v);
      if (it != tr.coeffs.end()) {
        for (const auto& [u, c] : it->second.coeffs()) row[u] -= sg * c;
        rhs += sg * it->second.constant();
      }
      lp.a.push_back(row);
      lp.is_eq.push_back(true);
      lp.b.push_back(rhs);
    }
    // Constants: sg*const(u) = sum_k lambda_k b_k - lambda_0.
    std::vector<Rational> row(lp.n, 0);
    for (int k = 0; k < nrows; ++k) row[base + k] = sys.rows[k].term.constant();
    row[base + nrows] = -1;
    for (const auto& [u, c] : tr.constant.coeffs()) row[u] -= sg * c;
    lp.a.push_back(row);
    lp.is_eq.push_back(true);
    lp.b.push_back(sg * tr.constant.constant());
  }
  StdRes r = solve_std(lp);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  std::map<int, Rational> m;
  for (int u = 0; u < n_unknowns; ++u) m[u] = r.x[u];
  return m;
}

}  // namespace cterm
