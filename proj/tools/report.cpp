#include "report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cterm::report {

Dnf canonical(const Dnf& d) {
  Dnf out = d;
  for (auto& c : out.disjuncts)
    std::sort(c.begin(), c.end(), [](const PAtom& a, const PAtom& b) {
      bool da = a.kind == PAtom::Div, db = b.kind == PAtom::Div;
      if (da != db) return db;
      return a < b;
    });
  std::sort(out.disjuncts.begin(), out.disjuncts.end());
  return out;
}

json int_to_json(const Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::invalid_argument("expected an integer");
}

namespace {

json coeffs_to_json(const std::map<int, Int>& co, const std::vector<std::string>& names) {
  json o = json::object();
  for (const auto& [v, k] : co) o[names.at(static_cast<size_t>(v))] = int_to_json(k);
  return o;
}

std::map<int, Int> coeffs_from_json(const json& j, const std::vector<std::string>& names) {
  std::map<int, Int> co;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto pos = std::find(names.begin(), names.end(), it.key());
    if (pos == names.end()) throw std::invalid_argument("unknown variable '" + it.key() + "'");
    co[static_cast<int>(pos - names.begin())] = int_from_json(it.value());
  }
  return co;
}

}  // namespace

json formula_to_json(const Dnf& d, const std::vector<std::string>& names) {
  Dnf c = canonical(d);
  json dnf = json::array();
  for (const auto& conj : c.disjuncts) {
    json atoms = json::array(), divs = json::array();
    for (const auto& a : conj) {
      if (a.kind == PAtom::Div) {
        divs.push_back({{"modulus", int_to_json(a.modulus)},
                        {"coeffs", coeffs_to_json(a.coeffs, names)},
                        {"constant", int_to_json(a.constant)}});
      } else {
        atoms.push_back({{"coeffs", coeffs_to_json(a.coeffs, names)},
                         {"op", a.kind == PAtom::Le ? "<=" : "=="},
                         {"rhs", int_to_json(-a.constant)}});
      }
    }
    dnf.push_back({{"atoms", atoms}, {"divisibility", divs}});
  }
  return {{"text", dnf_str(c, names)}, {"dnf", dnf}};
}

Dnf formula_from_json(const json& j, const std::vector<std::string>& names) {
  Dnf d = Dnf::falsity(static_cast<int>(names.size()));
  for (const auto& conj : j.at("dnf")) {
    Conj c;
    for (const auto& a : conj.at("atoms")) {
      const std::string op = a.at("op").get<std::string>();
      auto co = coeffs_from_json(a.at("coeffs"), names);
      Int rhs = int_from_json(a.at("rhs"));
      if (op == "<=")
        c.push_back(PAtom::le(std::move(co), -rhs));
      else if (op == "==")
        c.push_back(PAtom::eq(std::move(co), -rhs));
      else
        throw std::invalid_argument("unknown operator '" + op + "'");
    }
    for (const auto& a : conj.at("divisibility"))
      c.push_back(PAtom::div(int_from_json(a.at("modulus")), coeffs_from_json(a.at("coeffs"), names),
                             int_from_json(a.at("constant"))));
    d.disjuncts.push_back(std::move(c));
  }
  return d;
}

std::string term_text(const LinTerm& f, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  auto put = [&](const Rational& c, const std::string& name) {
    Rational a = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    if (name.empty())
      os << a.get_str();
    else if (a == 1)
      os << name;
    else
      os << a.get_str() << "*" << name;
    first = false;
  };
  for (const auto& [v, c] : f.coeffs()) put(c, names.at(static_cast<size_t>(v)));
  if (first || f.constant() != 0) put(f.constant(), "");
  return os.str();
}

namespace {

std::vector<size_t> state_order(const PrecondResult& r, const Program& p) {
  std::vector<size_t> idx(r.per_state.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return p.states[r.per_state[a].state] < p.states[r.per_state[b].state];
  });
  return idx;
}

}  // namespace

json precond_to_json(const PrecondResult& r, const Program& p) {
  json per = json::array();
  for (size_t i : state_order(r, p)) {
    const auto& sc = r.per_state[i];
    per.push_back({{"state", p.states[sc.state]},
                   {"method", sc.method},
                   {"exact", sc.exact},
                   {"wnt", formula_to_json(sc.wnt, p.vars)},
                   {"pre", formula_to_json(sc.pre, p.vars)}});
  }
  return {{"status", r.budget_exhausted ? "budget-exhausted" : "ok"},
          {"flat", r.flat},
          {"exact", r.exact},
          {"vars", p.vars},
          {"precondition", formula_to_json(r.precondition, p.vars)},
          {"per_state", per}};
}

PrecondResult precond_from_json(const json& j, const Program& p) {
  PrecondResult r;
  r.budget_exhausted = j.at("status").get<std::string>() != "ok";
  r.flat = j.at("flat").get<bool>();
  r.exact = j.at("exact").get<bool>();
  r.precondition = formula_from_json(j.at("precondition"), p.vars);
  for (const auto& s : j.at("per_state")) {
    StateContribution sc;
    auto q = p.state(s.at("state").get<std::string>());
    if (!q) throw std::invalid_argument("unknown state");
    sc.state = *q;
    sc.method = s.at("method").get<std::string>();
    sc.exact = s.at("exact").get<bool>();
    sc.wnt = formula_from_json(s.at("wnt"), p.vars);
    sc.pre = formula_from_json(s.at("pre"), p.vars);
    r.per_state.push_back(std::move(sc));
  }
  return r;
}

std::string precond_to_text(const PrecondResult& r, const Program& p) {
  std::ostringstream os;
  os << "precondition: " << dnf_str(canonical(r.precondition), p.vars) << "\n";
  os << "flat: " << (r.flat ? "yes" : "no") << "\n";
  os << "exact: " << (r.exact ? "yes" : "no") << "\n";
  if (r.budget_exhausted) os << "budget: exhausted (result is a sound over-approximation)\n";
  for (size_t i : state_order(r, p)) {
    const auto& sc = r.per_state[i];
    os << "state " << p.states[sc.state] << " [" << sc.method << (sc.exact ? "" : ", approximate") << "]\n";
    os << "  wnt: " << dnf_str(canonical(sc.wnt), p.vars) << "\n";
    os << "  pre: " << dnf_str(canonical(sc.pre), p.vars) << "\n";
  }
  return os.str();
}

}  // namespace cterm::report
