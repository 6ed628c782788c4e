#include "cterm/pdbm.hpp"

#include <algorithm>
#include <sstream>

namespace cterm {

ParamTerm::ParamTerm(Int c, int param, Int rate) : constant(std::move(c)) {
  if (rate != 0) rates[param] = std::move(rate);
}

Int ParamTerm::rate(int p) const {
  auto it = rates.find(p);
  return it == rates.end() ? Int(0) : it->second;
}

Int ParamTerm::eval(const std::map<int, Int>& valuation) const {
  Int v = constant;
  for (const auto& [p, r] : rates) v += r * valuation.at(p);
  return v;
}

ParamTerm ParamTerm::operator+(const ParamTerm& o) const {
  ParamTerm r = *this;
  r.constant += o.constant;
  for (const auto& [p, a] : o.rates) {
    Int& slot = r.rates[p];
    slot += a;
    if (slot == 0) r.rates.erase(p);
  }
  return r;
}

bool ParamTerm::operator<(const ParamTerm& o) const {
  if (rates != o.rates) return rates < o.rates;
  return constant < o.constant;
}

std::string ParamTerm::str(const std::vector<std::string>& names) const {
  std::ostringstream os;
  os << constant.get_str();
  for (const auto& [p, r] : rates) {
    std::string name = static_cast<size_t>(p) < names.size() ? names[static_cast<size_t>(p)] : "k" + std::to_string(p);
    os << (r < 0 ? " - " : " + ");
    Int a = abs(r);
    if (a != 1) os << a.get_str() << "*";
    os << name;
  }
  return os.str();
}

bool term_leq(const ParamTerm& t, const ParamTerm& s) {
  if (t.constant > s.constant) return false;
  for (const auto& [p, r] : t.rates)
    if (r > s.rate(p)) return false;
  for (const auto& [p, r] : s.rates)
    if (t.rate(p) > r) return false;
  return true;
}

TermSet min_terms(const TermSet& s) {
  TermSet sorted = s;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  TermSet out;
  for (size_t i = 0; i < sorted.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < sorted.size() && !dominated; ++j)
      if (j != i && term_leq(sorted[j], sorted[i])) dominated = true;
    if (!dominated) out.push_back(sorted[i]);
  }
  return out;
}

XInt eval_set(const TermSet& s, const std::map<int, Int>& valuation) {
  XInt best = XInt::inf();
  for (const auto& t : s) best = xmin(best, XInt(t.eval(valuation)));
  return best;
}

ExtParamDbm ExtParamDbm::from_dbm(const Dbm& m) {
  ExtParamDbm r(m.dim());
  for (size_t i = 0; i < m.dim(); ++i)
    for (size_t j = 0; j < m.dim(); ++j)
      if (m.at(i, j).is_finite()) r.at(i, j).push_back(ParamTerm(m.at(i, j).value()));
  return r;
}

ExtParamDbm ExtParamDbm::from_rates(const Dbm& base, const Dbm& rate, int param) {
  ExtParamDbm r(base.dim());
  for (size_t i = 0; i < base.dim(); ++i)
    for (size_t j = 0; j < base.dim(); ++j) {
      if (!base.at(i, j).is_finite()) continue;
      Int a = rate.at(i, j).is_finite() ? rate.at(i, j).value() : Int(0);
      r.at(i, j).push_back(ParamTerm(base.at(i, j).value(), param, a));
    }
  return r;
}

void ExtParamDbm::add(size_t i, size_t j, const ParamTerm& t) {
  TermSet& s = at(i, j);
  s.push_back(t);
  s = min_terms(s);
}

bool ExtParamDbm::operator==(const ExtParamDbm& o) const {
  if (dim_ != o.dim_) return false;
  for (size_t k = 0; k < e_.size(); ++k) {
    TermSet a = min_terms(e_[k]), b = min_terms(o.e_[k]);
    if (a != b) return false;
  }
  return true;
}

std::set<int> ExtParamDbm::params() const {
  std::set<int> ps;
  for (const auto& s : e_)
    for (const auto& t : s)
      for (const auto& kv : t.rates) ps.insert(kv.first);
  return ps;
}

Dbm eval_at(const ExtParamDbm& m, const std::map<int, Int>& valuation) {
  Dbm d(m.dim());
  for (size_t i = 0; i < m.dim(); ++i)
    for (size_t j = 0; j < m.dim(); ++j) d.set(i, j, eval_set(m.at(i, j), valuation));
  return d;
}

namespace {

struct Tagged {
  ParamTerm t;
  int len;
};

// MinLength followed by MinTerms.
std::vector<Tagged> minimize(std::vector<Tagged> s) {
  std::sort(s.begin(), s.end(), [](const Tagged& a, const Tagged& b) {
    if (!(a.t == b.t)) return a.t < b.t;
    return a.len < b.len;
  });
  std::vector<Tagged> shortest;
  for (auto& x : s)
    if (shortest.empty() || !(shortest.back().t == x.t)) shortest.push_back(std::move(x));
  std::vector<Tagged> out;
  for (size_t i = 0; i < shortest.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < shortest.size() && !dominated; ++j)
      if (j != i && term_leq(shortest[j].t, shortest[i].t)) dominated = true;
    if (!dominated) out.push_back(shortest[i]);
  }
  return out;
}

}  // namespace

ExtParamDbm param_fw(const ExtParamDbm& m) {
  const size_t n = m.dim();
  std::vector<std::vector<Tagged>> cur(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      auto& c = cur[i * n + j];
      for (const auto& t : m.at(i, j)) c.push_back({t, 1});
      if (i == j) c.push_back({ParamTerm(0), 0});
      c = minimize(std::move(c));
    }
  for (size_t k = 0; k < n; ++k) {
    const int cap = static_cast<int>(k) + 2;  // 1-based pivot + 1
    // Paths through pivot k are built from the previous round only.
    const std::vector<std::vector<Tagged>> prev = cur;
    for (size_t i = 0; i < n; ++i) {
      const std::vector<Tagged>& left = prev[i * n + k];
      if (left.empty()) continue;
      for (size_t j = 0; j < n; ++j) {
        const std::vector<Tagged>& right = prev[k * n + j];
        if (right.empty()) continue;
        std::vector<Tagged> t = cur[i * n + j];
        bool added = false;
        for (const auto& a : left)
          for (const auto& b : right) {
            if (a.len + b.len > cap) continue;
            t.push_back({a.t + b.t, a.len + b.len});
            added = true;
          }
        if (added) cur[i * n + j] = minimize(std::move(t));
      }
    }
  }
  ExtParamDbm r(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (const auto& x : cur[i * n + j]) r.at(i, j).push_back(x.t);
  return r;
}

Dnf param_dbm_formula(const ExtParamDbm& m, bool octagonal, int nparams) {
  const int nvars = static_cast<int>(octagonal ? m.dim() / 2 : m.dim());
  Conj c;
  for (int p = 0; p < nparams; ++p) c.push_back(PAtom::le({{nvars + p, -1}}, 0));
  for (size_t i = 0; i < m.dim(); ++i)
    for (size_t j = 0; j < m.dim(); ++j)
      for (const auto& t : m.at(i, j)) {
        std::map<int, Int> co;
        if (octagonal) {
          co[static_cast<int>(i / 2)] += (i % 2 == 0) ? 1 : -1;
          co[static_cast<int>(j / 2)] -= (j % 2 == 0) ? 1 : -1;
        } else if (i != j) {
          co[static_cast<int>(i)] += 1;
          co[static_cast<int>(j)] -= 1;
        }
        for (const auto& [p, r] : t.rates) co[nvars + p] -= r;
        c.push_back(PAtom::le(std::move(co), -t.constant));
      }
  Dnf d = Dnf::falsity(nvars + nparams);
  if (normalize_conj(c)) d.disjuncts.push_back(std::move(c));
  return d;
}

Dnf param_exists_k(const ExtParamDbm& m, bool octagonal) {
  Dnf f = param_dbm_formula(m, octagonal, 1);
  const int nvars = f.nvars - 1;
  Dnf r = exists(f, {nvars});
  r.nvars = nvars;
  return r;
}

}  // namespace cterm
