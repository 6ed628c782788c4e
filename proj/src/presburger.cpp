#include "cterm/presburger.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cterm {

using Coeffs = std::map<int, Int>;

Int PAtom::coeff(int v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Int(0) : it->second;
}

bool PAtom::operator==(const PAtom& o) const {
  return kind == o.kind && coeffs == o.coeffs && constant == o.constant && modulus == o.modulus;
}

bool PAtom::operator<(const PAtom& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (coeffs != o.coeffs) return coeffs < o.coeffs;
  if (constant != o.constant) return constant < o.constant;
  return modulus < o.modulus;
}

PAtom PAtom::le(Coeffs coeffs, Int constant) {
  PAtom a;
  a.kind = Le;
  a.coeffs = std::move(coeffs);
  a.constant = std::move(constant);
  return a;
}

PAtom PAtom::eq(Coeffs coeffs, Int constant) {
  PAtom a = le(std::move(coeffs), std::move(constant));
  a.kind = Eq;
  return a;
}

PAtom PAtom::div(Int modulus, Coeffs coeffs, Int constant) {
  PAtom a = le(std::move(coeffs), std::move(constant));
  a.kind = Div;
  a.modulus = std::move(modulus);
  return a;
}

namespace {

void drop_zeros(Coeffs& c) {
  for (auto it = c.begin(); it != c.end();) {
    if (it->second == 0)
      it = c.erase(it);
    else
      ++it;
  }
}

Coeffs negated(const Coeffs& c) {
  Coeffs r;
  for (const auto& [v, k] : c) r[v] = -k;
  return r;
}

Int coeff_gcd(const Coeffs& c) {
  Int g = 0;
  for (const auto& kv : c) g = gcd(g, kv.second);
  return g;
}

// a := a * k (k > 0 for inequalities).
void scale_atom(PAtom& a, const Int& k) {
  for (auto& kv : a.coeffs) kv.second *= k;
  a.constant *= k;
  if (a.kind == PAtom::Div) a.modulus *= k;
}

// Adds k * (coeffs, constant) to the linear part of a.
void add_linear(PAtom& a, const Coeffs& c, const Int& cst, const Int& k) {
  for (const auto& [v, x] : c) a.coeffs[v] += k * x;
  a.constant += k * cst;
  drop_zeros(a.coeffs);
}

}  // namespace

Truth normalize_atom(PAtom& a) {
  drop_zeros(a.coeffs);
  switch (a.kind) {
    case PAtom::Le: {
      if (a.coeffs.empty()) return a.constant <= 0 ? Truth::True : Truth::False;
      Int g = coeff_gcd(a.coeffs);
      if (g != 1) {
        for (auto& kv : a.coeffs) kv.second /= g;
        a.constant = ceil_div(a.constant, g);
      }
      return Truth::Open;
    }
    case PAtom::Eq: {
      if (a.coeffs.empty()) return a.constant == 0 ? Truth::True : Truth::False;
      Int g = coeff_gcd(a.coeffs);
      if (mod_pos(a.constant, g) != 0) return Truth::False;
      if (g != 1) {
        for (auto& kv : a.coeffs) kv.second /= g;
        a.constant /= g;
      }
      if (a.coeffs.begin()->second < 0) {
        for (auto& kv : a.coeffs) kv.second = -kv.second;
        a.constant = -a.constant;
      }
      return Truth::Open;
    }
    case PAtom::Div: {
      Int m = abs(a.modulus);
      if (m == 0) {
        a.kind = PAtom::Eq;
        a.modulus = 0;
        return normalize_atom(a);
      }
      for (auto& kv : a.coeffs) kv.second = mod_pos(kv.second, m);
      drop_zeros(a.coeffs);
      a.constant = mod_pos(a.constant, m);
      if (m == 1) return Truth::True;
      if (a.coeffs.empty()) return a.constant == 0 ? Truth::True : Truth::False;
      Int g = gcd(m, coeff_gcd(a.coeffs));
      if (mod_pos(a.constant, g) != 0) return Truth::False;
      if (g != 1) {
        m /= g;
        for (auto& kv : a.coeffs) kv.second /= g;
        a.constant /= g;
      }
      a.modulus = m;
      if (m == 1) return Truth::True;
      return Truth::Open;
    }
  }
  return Truth::Open;
}

bool normalize_conj(Conj& c) {
  std::map<Coeffs, Int> le;  // coeffs -> strongest constant
  std::map<Coeffs, Int> eq;
  std::set<PAtom> divs;
  for (PAtom a : c) {
    Truth t = normalize_atom(a);
    if (t == Truth::False) {
      c = {PAtom::le({}, 1)};
      return false;
    }
    if (t == Truth::True) continue;
    if (a.kind == PAtom::Le) {
      auto it = le.find(a.coeffs);
      if (it == le.end())
        le.emplace(a.coeffs, a.constant);
      else if (a.constant > it->second)
        it->second = a.constant;
    } else if (a.kind == PAtom::Eq) {
      auto it = eq.find(a.coeffs);
      if (it == eq.end()) {
        eq.emplace(a.coeffs, a.constant);
      } else if (it->second != a.constant) {
        c = {PAtom::le({}, 1)};
        return false;
      }
    } else {
      divs.insert(a);
    }
  }
  // Opposite bounds: t + c1 <= 0 and -t + c2 <= 0 mean -c2 <= t <= -c1.
  std::vector<Coeffs> to_erase;
  for (auto& [co, c1] : le) {
    Coeffs neg = negated(co);
    auto it = le.find(neg);
    if (it == le.end() || co > neg) continue;
    const Int& c2 = it->second;
    if (c1 + c2 > 0) {
      c = {PAtom::le({}, 1)};
      return false;
    }
    if (c1 + c2 == 0) {
      PAtom e = PAtom::eq(co, c1);
      normalize_atom(e);
      auto ei = eq.find(e.coeffs);
      if (ei != eq.end() && ei->second != e.constant) {
        c = {PAtom::le({}, 1)};
        return false;
      }
      eq[e.coeffs] = e.constant;
      to_erase.push_back(co);
      to_erase.push_back(neg);
    }
  }
  for (const auto& co : to_erase) le.erase(co);
  // Bounds implied or contradicted by equalities on the same term.
  for (auto it = le.begin(); it != le.end();) {
    bool drop = false;
    for (int sgn : {1, -1}) {
      Coeffs key = sgn == 1 ? it->first : negated(it->first);
      auto ei = eq.find(key);
      if (ei == eq.end()) continue;
      // term = sgn * key, key + e = 0 so term = -sgn*e; need -sgn*e + c <= 0.
      Int val = -Int(sgn) * ei->second;
      if (val + it->second > 0) {
        c = {PAtom::le({}, 1)};
        return false;
      }
      drop = true;
    }
    if (drop)
      it = le.erase(it);
    else
      ++it;
  }
  Conj out;
  for (const auto& [co, k] : le) out.push_back(PAtom::le(co, k));
  for (const auto& [co, k] : eq) out.push_back(PAtom::eq(co, k));
  for (const auto& d : divs) out.push_back(d);
  std::sort(out.begin(), out.end());
  c = std::move(out);
  return true;
}

bool is_octagonal(const Conj& c) {
  for (const auto& a : c) {
    if (a.kind == PAtom::Div) return false;
    if (a.coeffs.size() > 2) return false;
    for (const auto& kv : a.coeffs)
      if (kv.second != 1 && kv.second != -1) return false;
  }
  return true;
}

namespace {

int max_var(const Conj& c) {
  int m = -1;
  for (const auto& a : c)
    if (!a.coeffs.empty()) m = std::max(m, a.coeffs.rbegin()->first);
  return m;
}

void add_oct_atoms(std::vector<OctAtom>& out, const Coeffs& co, const Int& bound) {
  auto it = co.begin();
  OctAtom o;
  o.i = it->first;
  o.si = it->second > 0 ? 1 : -1;
  ++it;
  if (it != co.end()) {
    o.j = it->first;
    o.sj = it->second > 0 ? 1 : -1;
  }
  o.c = bound;
  out.push_back(o);
}

Octagon build_octagon(const Conj& c, int nvars) {
  std::vector<OctAtom> atoms;
  for (const auto& a : c) {
    if (a.coeffs.empty()) continue;
    add_oct_atoms(atoms, a.coeffs, -a.constant);
    if (a.kind == PAtom::Eq) add_oct_atoms(atoms, negated(a.coeffs), a.constant);
  }
  return Octagon::from_atoms(static_cast<size_t>(nvars), atoms);
}

struct Elim {
  std::vector<PAtom> keep, eqs, les, divs;
};

Elim split_on(const Conj& c, int v) {
  Elim e;
  for (const auto& a : c) {
    if (!a.mentions(v))
      e.keep.push_back(a);
    else if (a.kind == PAtom::Eq)
      e.eqs.push_back(a);
    else if (a.kind == PAtom::Le)
      e.les.push_back(a);
    else
      e.divs.push_back(a);
  }
  return e;
}

// Estimated blowup of eliminating v; lower is cheaper.
long elim_cost(const Conj& c, int v) {
  Elim e = split_on(c, v);
  if (!e.eqs.empty()) {
    for (const auto& a : e.eqs)
      if (abs(a.coeff(v)) == 1) return 0;
    return 1;
  }
  long lo = 0, up = 0;
  bool unit_lo = true, unit_up = true;
  for (const auto& a : e.les) {
    Int k = a.coeff(v);
    if (k > 0) {
      ++up;
      if (k != 1) unit_up = false;
    } else {
      ++lo;
      if (k != -1) unit_lo = false;
    }
  }
  if (e.divs.empty()) {
    if (lo == 0 || up == 0) return 0;
    if (unit_lo || unit_up) return 2 + lo * up - lo - up;
  }
  Int l = 1;
  for (const auto& a : e.les) l = lcm(l, abs(a.coeff(v)));
  for (const auto& a : e.divs) l = lcm(l, abs(a.coeff(v)));
  Int delta = l;
  for (const auto& a : e.divs) delta = lcm(delta, a.modulus * l / abs(a.coeff(v)));
  long side = (lo == 0 || up == 0) ? 1 : std::min(lo, up);
  long d = delta.fits_slong_p() ? delta.get_si() : std::numeric_limits<long>::max() / 4;
  if (d > 1000000) return std::numeric_limits<long>::max() / 2;
  return 1000 + side * d * static_cast<long>(c.size());
}

bool conj_sat_rec(Conj c, int depth);

}  // namespace

Dnf eliminate_var(const Conj& c, int nvars, int v) {
  Dnf out = Dnf::falsity(nvars);
  Elim e = split_on(c, v);
  if (e.eqs.empty() && e.les.empty() && e.divs.empty()) {
    out.disjuncts.push_back(c);
    return out;
  }
  if (!e.eqs.empty()) {
    // Substitute through the equality with the smallest coefficient on v.
    size_t best = 0;
    for (size_t i = 1; i < e.eqs.size(); ++i)
      if (abs(e.eqs[i].coeff(v)) < abs(e.eqs[best].coeff(v))) best = i;
    PAtom q = e.eqs[best];
    if (q.coeff(v) < 0) {
      for (auto& kv : q.coeffs) kv.second = -kv.second;
      q.constant = -q.constant;
    }
    Int a = q.coeff(v);
    Coeffs t = q.coeffs;
    t.erase(v);
    const Int& tc = q.constant;
    // a*v = -t
    Conj r = e.keep;
    auto rewrite = [&](PAtom x) {
      Int k = x.coeff(v);
      x.coeffs.erase(v);
      if (a != 1) scale_atom(x, a);
      add_linear(x, t, tc, -k);
      r.push_back(std::move(x));
    };
    for (size_t i = 0; i < e.eqs.size(); ++i)
      if (i != best) rewrite(e.eqs[i]);
    for (const auto& x : e.les) rewrite(x);
    for (const auto& x : e.divs) rewrite(x);
    if (a != 1) r.push_back(PAtom::div(a, t, tc));
    if (normalize_conj(r)) out.disjuncts.push_back(std::move(r));
    return out;
  }
  std::vector<const PAtom*> lo, up;
  bool unit_lo = true, unit_up = true;
  for (const auto& a : e.les) {
    if (a.coeff(v) > 0) {
      up.push_back(&a);
      if (a.coeff(v) != 1) unit_up = false;
    } else {
      lo.push_back(&a);
      if (a.coeff(v) != -1) unit_lo = false;
    }
  }
  if (e.divs.empty()) {
    if (lo.empty() || up.empty()) {
      Conj r = e.keep;
      if (normalize_conj(r)) out.disjuncts.push_back(std::move(r));
      return out;
    }
    if (unit_lo || unit_up) {
      Conj r = e.keep;
      for (const PAtom* u : up)
        for (const PAtom* l : lo) {
          Int cu = u->coeff(v), cl = -l->coeff(v);
          PAtom x = PAtom::le({}, 0);
          Coeffs tu = u->coeffs, tl = l->coeffs;
          tu.erase(v);
          tl.erase(v);
          add_linear(x, tu, u->constant, cl);
          add_linear(x, tl, l->constant, cu);
          r.push_back(std::move(x));
        }
      if (normalize_conj(r)) out.disjuncts.push_back(std::move(r));
      return out;
    }
  }
  // Cooper: scale so v has coefficient +-l everywhere, then substitute l*v by w with l | w.
  Int l = 1;
  for (const auto& a : e.les) l = lcm(l, abs(a.coeff(v)));
  for (const auto& a : e.divs) l = lcm(l, abs(a.coeff(v)));
  std::vector<PAtom> scaled;  // coefficient of v is +-1 and stands for w
  for (const auto* group : {&e.les, &e.divs})
    for (PAtom a : *group) {
      Int k = a.coeff(v);
      Int f = l / abs(k);
      if (f != 1) scale_atom(a, f);
      a.coeffs[v] = k > 0 ? 1 : -1;
      scaled.push_back(std::move(a));
    }
  if (l != 1) scaled.push_back(PAtom::div(l, {{v, 1}}, 0));
  Int delta = 1;
  for (const auto& a : scaled)
    if (a.kind == PAtom::Div) delta = lcm(delta, a.modulus);
  // w := expr (coeffs, constant)
  auto substitute = [&](const Coeffs& ec, const Int& econst, bool only_divs) {
    Conj r = e.keep;
    for (PAtom a : scaled) {
      if (only_divs && a.kind != PAtom::Div) continue;
      Int s = a.coeff(v);
      a.coeffs.erase(v);
      add_linear(a, ec, econst, s);
      r.push_back(std::move(a));
    }
    if (normalize_conj(r)) out.disjuncts.push_back(std::move(r));
  };
  std::vector<const PAtom*> slo, sup;
  for (const auto& a : scaled) {
    if (a.kind != PAtom::Le) continue;
    (a.coeff(v) > 0 ? sup : slo).push_back(&a);
  }
  if (!delta.fits_slong_p() || delta > 100000000) throw std::runtime_error("eliminate_var: modulus too large");
  const long d = delta.get_si();
  if (slo.empty() || sup.empty()) {
    for (long j = 0; j < d; ++j) substitute({}, Int(j), true);
    return out;
  }
  const bool use_lower = slo.size() <= sup.size();
  for (const PAtom* b : use_lower ? slo : sup) {
    Coeffs t = b->coeffs;
    t.erase(v);
    // lower: -w + t <= 0, w = t + j.  upper: w + t <= 0, w = -t - j.
    for (long j = 0; j < d; ++j) {
      if (use_lower) {
        substitute(t, b->constant + j, false);
      } else {
        substitute(negated(t), -b->constant - j, false);
      }
    }
  }
  return out;
}

namespace {

bool conj_sat_rec(Conj c, int depth) {
  if (!normalize_conj(c)) return false;
  if (c.empty()) return true;
  const int nv = max_var(c) + 1;
  if (is_octagonal(c)) return !tight_close(build_octagon(c, nv)).is_bottom();
  bool has_div = false;
  for (const auto& a : c)
    if (a.kind == PAtom::Div) has_div = true;
  if (!lp_feasible(conj_to_linsys(c, nv)).feasible) return false;
  (void)has_div;
  std::set<int> vars;
  for (const auto& a : c)
    for (const auto& kv : a.coeffs) vars.insert(kv.first);
  int best = -1;
  long best_cost = 0;
  for (int v : vars) {
    long k = elim_cost(c, v);
    if (best < 0 || k < best_cost) {
      best = v;
      best_cost = k;
    }
  }
  Dnf d = eliminate_var(c, nv, best);
  for (auto& dj : d.disjuncts)
    if (conj_sat_rec(std::move(dj), depth + 1)) return true;
  return false;
}

}  // namespace

bool conj_sat(const Conj& c) { return conj_sat_rec(c, 0); }

bool dnf_sat(const Dnf& d) {
  for (const auto& c : d.disjuncts)
    if (conj_sat(c)) return true;
  return false;
}

namespace {

void dedupe(std::vector<Conj>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Conj concat(const Conj& a, const Conj& b) {
  Conj r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

}  // namespace

Dnf exists(const Dnf& d, const std::vector<int>& vars) {
  Dnf out = Dnf::falsity(d.nvars);
  for (const auto& c0 : d.disjuncts) {
    std::vector<Conj> work{c0};
    std::set<int> todo(vars.begin(), vars.end());
    // Eliminate per conjunction, each time picking the cheapest remaining variable.
    std::vector<std::pair<Conj, std::set<int>>> stack;
    stack.emplace_back(c0, todo);
    while (!stack.empty()) {
      auto [c, rem] = std::move(stack.back());
      stack.pop_back();
      if (!normalize_conj(c)) continue;
      // Drop variables no longer mentioned.
      for (auto it = rem.begin(); it != rem.end();) {
        bool used = false;
        for (const auto& a : c)
          if (a.mentions(*it)) used = true;
        if (!used)
          it = rem.erase(it);
        else
          ++it;
      }
      if (rem.empty()) {
        out.disjuncts.push_back(std::move(c));
        continue;
      }
      int best = -1;
      long best_cost = 0;
      for (int v : rem) {
        long k = elim_cost(c, v);
        if (best < 0 || k < best_cost) {
          best = v;
          best_cost = k;
        }
      }
      Dnf r = eliminate_var(c, d.nvars, best);
      rem.erase(best);
      for (auto& dj : r.disjuncts) {
        if (r.disjuncts.size() > 1 && !conj_sat(dj)) continue;
        stack.emplace_back(std::move(dj), rem);
      }
    }
  }
  dedupe(out.disjuncts);
  return out;
}

Dnf dnf_and(const Dnf& a, const Dnf& b) {
  if (a.nvars != b.nvars) throw std::invalid_argument("dnf_and: variable count mismatch");
  Dnf out = Dnf::falsity(a.nvars);
  for (const auto& x : a.disjuncts)
    for (const auto& y : b.disjuncts) {
      Conj c = concat(x, y);
      if (normalize_conj(c)) out.disjuncts.push_back(std::move(c));
    }
  dedupe(out.disjuncts);
  return out;
}

Dnf dnf_or(const Dnf& a, const Dnf& b) {
  if (a.nvars != b.nvars) throw std::invalid_argument("dnf_or: variable count mismatch");
  Dnf out = a;
  out.disjuncts.insert(out.disjuncts.end(), b.disjuncts.begin(), b.disjuncts.end());
  dedupe(out.disjuncts);
  return out;
}

Dnf negate_atom(const PAtom& a, int nvars) {
  Dnf out = Dnf::falsity(nvars);
  switch (a.kind) {
    case PAtom::Le:
      out.disjuncts.push_back({PAtom::le(negated(a.coeffs), -a.constant + 1)});
      break;
    case PAtom::Eq:
      out.disjuncts.push_back({PAtom::le(a.coeffs, a.constant + 1)});
      out.disjuncts.push_back({PAtom::le(negated(a.coeffs), -a.constant + 1)});
      break;
    case PAtom::Div: {
      Int m = abs(a.modulus);
      for (Int r = 1; r < m; ++r) out.disjuncts.push_back({PAtom::div(m, a.coeffs, a.constant + r)});
      break;
    }
  }
  return out;
}

Dnf dnf_not(const Dnf& d) {
  Dnf acc = Dnf::truth(d.nvars);
  for (const auto& c : d.disjuncts) {
    Dnf nc = Dnf::falsity(d.nvars);
    for (const auto& a : c) nc = dnf_or(nc, negate_atom(a, d.nvars));
    acc = dnf_and(acc, nc);
    Dnf pruned = Dnf::falsity(d.nvars);
    for (auto& x : acc.disjuncts)
      if (conj_sat(x)) pruned.disjuncts.push_back(std::move(x));
    acc = std::move(pruned);
  }
  return acc;
}

namespace {

bool atom_entailed(const Conj& a, const PAtom& atom) {
  for (const auto& piece : negate_atom(atom, 0).disjuncts)
    if (conj_sat(concat(a, piece))) return false;
  return true;
}

// True when cur together with the negations of rest[idx..] is unsatisfiable.
bool refute(const Conj& cur, const std::vector<const Conj*>& rest, size_t idx) {
  if (!conj_sat(cur)) return true;
  if (idx == rest.size()) return false;
  const Conj& b = *rest[idx];
  if (!conj_sat(concat(cur, b))) return refute(cur, rest, idx + 1);
  for (const auto& atom : b)
    for (const auto& piece : negate_atom(atom, 0).disjuncts)
      if (!refute(concat(cur, piece), rest, idx + 1)) return false;
  return true;
}

}  // namespace

bool conj_entails(const Conj& a, const Conj& b) {
  if (!conj_sat(a)) return true;
  for (const auto& atom : b)
    if (!atom_entailed(a, atom)) return false;
  return true;
}

bool entails(const Dnf& a, const Dnf& b) {
  for (const auto& ca : a.disjuncts) {
    if (!conj_sat(ca)) continue;
    bool single = false;
    for (const auto& cb : b.disjuncts)
      if (conj_entails(ca, cb)) {
        single = true;
        break;
      }
    if (single) continue;
    std::vector<const Conj*> rest;
    for (const auto& cb : b.disjuncts) rest.push_back(&cb);
    if (!refute(ca, rest, 0)) return false;
  }
  return true;
}

bool equivalent(const Dnf& a, const Dnf& b) { return entails(a, b) && entails(b, a); }

namespace {

// Removes atoms implied by the remaining ones; octagonal conjunctions are first put in tight form.
// Substitutes v == k into the other atoms.
Conj substitute_constants(Conj c) {
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < c.size() && !changed; ++i) {
      const PAtom& e = c[i];
      if (e.kind != PAtom::Eq || e.coeffs.size() != 1) continue;
      const auto [v, k] = *e.coeffs.begin();
      if (e.constant % k != 0) continue;
      const Int val = -e.constant / k;
      for (size_t j = 0; j < c.size(); ++j) {
        if (j == i || !c[j].mentions(v)) continue;
        PAtom& a = c[j];
        a.constant += a.coeff(v) * val;
        a.coeffs.erase(v);
        changed = true;
      }
    }
    if (changed && !normalize_conj(c)) return c;
  }
  return c;
}

Conj reduce_conj(Conj c, int nvars) {
  c = substitute_constants(std::move(c));
  if (is_octagonal(c)) {
    Octagon t = tight_close(build_octagon(c, nvars));
    std::vector<OctAtom> atoms = t.atoms();
    std::vector<bool> alive(atoms.size(), true);
    // binary atoms are tried for removal before unary bounds
    std::vector<size_t> order(atoms.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_partition(order.begin(), order.end(), [&](size_t i) { return !atoms[i].unary(); });
    for (size_t i : order) {
      std::vector<OctAtom> others;
      for (size_t j = 0; j < atoms.size(); ++j)
        if (j != i && alive[j]) others.push_back(atoms[j]);
      Octagon o = tight_close(Octagon::from_atoms(static_cast<size_t>(nvars), others));
      Octagon with = o;
      with.add(atoms[i]);
      if (tight_close(with) == o) alive[i] = false;
    }
    Conj r;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (!alive[i]) continue;
      const OctAtom& a = atoms[i];
      Coeffs co{{a.i, Int(a.si)}};
      if (!a.unary()) co[a.j] += a.sj;
      r.push_back(PAtom::le(co, -a.c));
    }
    normalize_conj(r);
    return r;
  }
  std::vector<bool> alive(c.size(), true);
  for (size_t i = 0; i < c.size(); ++i) {
    Conj others;
    for (size_t j = 0; j < c.size(); ++j)
      if (j != i && alive[j]) others.push_back(c[j]);
    if (atom_entailed(others, c[i])) alive[i] = false;
  }
  Conj r;
  for (size_t i = 0; i < c.size(); ++i)
    if (alive[i]) r.push_back(c[i]);
  normalize_conj(r);
  return r;
}

}  // namespace

Dnf simplify(const Dnf& d) {
  std::vector<Conj> cs;
  for (Conj c : d.disjuncts) {
    if (!normalize_conj(c)) continue;
    if (!conj_sat(c)) continue;
    cs.push_back(reduce_conj(std::move(c), d.nvars));
  }
  dedupe(cs);
  std::vector<bool> alive(cs.size(), true);
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = 0; j < cs.size(); ++j) {
      if (i == j || !alive[j]) continue;
      if (conj_entails(cs[i], cs[j])) {
        alive[i] = false;
        break;
      }
    }
  Dnf out = Dnf::falsity(d.nvars);
  for (size_t i = 0; i < cs.size(); ++i)
    if (alive[i]) out.disjuncts.push_back(std::move(cs[i]));
  return out;
}

Dnf coalesce(const Dnf& d) {
  Dnf cur = simplify(d);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < cur.disjuncts.size() && !changed; ++i) {
      if (!is_octagonal(cur.disjuncts[i])) continue;
      for (size_t j = i + 1; j < cur.disjuncts.size() && !changed; ++j) {
        if (!is_octagonal(cur.disjuncts[j])) continue;
        Octagon a = conj_oct_hull(cur.disjuncts[i], d.nvars);
        Octagon b = conj_oct_hull(cur.disjuncts[j], d.nvars);
        Octagon h = oct_hull(static_cast<size_t>(d.nvars), {HullItem{a, std::nullopt}, HullItem{b, std::nullopt}});
        Dnf hd = octagon_to_dnf(h);
        if (!entails(hd, cur)) continue;
        Dnf next = Dnf::falsity(d.nvars);
        next.disjuncts = hd.disjuncts;
        for (size_t k = 0; k < cur.disjuncts.size(); ++k)
          if (k != i && k != j) next.disjuncts.push_back(cur.disjuncts[k]);
        cur = simplify(next);
        changed = true;
      }
    }
  }
  return cur;
}

Conj rename_conj(const Conj& c, const std::vector<int>& map) {
  Conj r;
  r.reserve(c.size());
  for (const auto& a : c) {
    PAtom b = a;
    b.coeffs.clear();
    for (const auto& [v, k] : a.coeffs) b.coeffs[map.at(static_cast<size_t>(v))] += k;
    drop_zeros(b.coeffs);
    r.push_back(std::move(b));
  }
  return r;
}

Dnf rename_vars(const Dnf& d, const std::vector<int>& map, int new_nvars) {
  Dnf out = Dnf::falsity(new_nvars);
  for (const auto& c : d.disjuncts) out.disjuncts.push_back(rename_conj(c, map));
  return out;
}

bool eval_atom(const PAtom& a, const std::vector<Int>& p) {
  Int s = a.constant;
  for (const auto& [v, k] : a.coeffs) s += k * p.at(static_cast<size_t>(v));
  switch (a.kind) {
    case PAtom::Le:
      return s <= 0;
    case PAtom::Eq:
      return s == 0;
    case PAtom::Div:
      return a.modulus == 0 ? s == 0 : mod_pos(s, a.modulus) == 0;
  }
  return false;
}

bool eval_conj(const Conj& c, const std::vector<Int>& p) {
  for (const auto& a : c)
    if (!eval_atom(a, p)) return false;
  return true;
}

bool eval_dnf(const Dnf& d, const std::vector<Int>& p) {
  for (const auto& c : d.disjuncts)
    if (eval_conj(c, p)) return true;
  return false;
}

namespace {

std::string name_of(const std::vector<std::string>& names, int v) {
  return static_cast<size_t>(v) < names.size() ? names[static_cast<size_t>(v)] : "v" + std::to_string(v);
}

std::string linear_str(const Coeffs& co, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, k] : co) {
    Int a = abs(k);
    if (first)
      os << (k < 0 ? "-" : "");
    else
      os << (k < 0 ? " - " : " + ");
    if (a != 1) os << a.get_str() << "*";
    os << name_of(names, v);
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace

std::string atom_str(const PAtom& a, const std::vector<std::string>& names) {
  if (a.kind == PAtom::Div) {
    std::string s = linear_str(a.coeffs, names);
    if (a.constant > 0) s += " + " + a.constant.get_str();
    if (a.constant < 0) s += " - " + Int(-a.constant).get_str();
    return a.modulus.get_str() + " | " + s;
  }
  bool all_neg = !a.coeffs.empty(), any_neg = false;
  for (const auto& kv : a.coeffs) {
    if (kv.second > 0) all_neg = false;
    if (kv.second < 0) any_neg = true;
  }
  const char* op = a.kind == PAtom::Eq ? " == " : " <= ";
  if (any_neg && !all_neg) {
    // positive terms on the left, the rest on the right
    Coeffs pos, neg;
    for (const auto& [v, k] : a.coeffs) (k > 0 ? pos[v] : neg[v]) = abs(k);
    std::string rhs = linear_str(neg, names);
    if (a.constant < 0) rhs += " + " + Int(-a.constant).get_str();
    if (a.constant > 0) rhs += " - " + a.constant.get_str();
    return linear_str(pos, names) + op + rhs;
  }
  if (a.kind == PAtom::Eq) return linear_str(a.coeffs, names) + " == " + Int(-a.constant).get_str();
  if (all_neg) return linear_str(negated(a.coeffs), names) + " >= " + a.constant.get_str();
  return linear_str(a.coeffs, names) + " <= " + Int(-a.constant).get_str();
}

std::string conj_str(const Conj& c, const std::vector<std::string>& names) {
  if (c.empty()) return "true";
  std::string s;
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) s += " && ";
    s += atom_str(c[i], names);
  }
  return s;
}

std::string dnf_str(const Dnf& d, const std::vector<std::string>& names) {
  if (d.disjuncts.empty()) return "false";
  if (d.disjuncts.size() == 1) return conj_str(d.disjuncts[0], names);
  std::string s;
  for (size_t i = 0; i < d.disjuncts.size(); ++i) {
    if (i) s += " || ";
    const Conj& c = d.disjuncts[i];
    if (c.size() > 1)
      s += "(" + conj_str(c, names) + ")";
    else
      s += conj_str(c, names);
  }
  return s;
}

Conj octagon_to_conj(const Octagon& o) {
  if (o.is_bottom()) return {PAtom::le({}, 1)};
  Conj r;
  for (const auto& a : tight_close(o).atoms()) {
    Coeffs co{{a.i, Int(a.si)}};
    if (!a.unary()) co[a.j] += a.sj;
    r.push_back(PAtom::le(co, -a.c));
  }
  normalize_conj(r);
  return r;
}

Dnf octagon_to_dnf(const Octagon& o) {
  const int n = static_cast<int>(o.nvars());
  if (tight_close(o).is_bottom()) return Dnf::falsity(n);
  return Dnf::of(n, octagon_to_conj(o));
}

std::optional<Octagon> conj_to_octagon(const Conj& c0, int nvars) {
  Conj c = c0;
  if (!normalize_conj(c)) return Octagon::bottom(static_cast<size_t>(nvars));
  if (!is_octagonal(c)) return std::nullopt;
  return build_octagon(c, nvars);
}

LinSys conj_to_linsys(const Conj& c, int nvars) {
  LinSys s;
  s.nvars = nvars;
  for (const auto& a : c) {
    if (a.kind == PAtom::Div) continue;
    LinTerm t{Rational(a.constant)};
    for (const auto& [v, k] : a.coeffs) t.set_coeff(v, Rational(k));
    s.add(t, a.kind == PAtom::Eq ? Rel::EQ : Rel::LE);
  }
  return s;
}

Octagon conj_oct_hull(const Conj& c, int nvars) {
  auto o = conj_to_octagon(c, nvars);
  if (o) return tight_close(*o);
  if (!conj_sat(c)) return Octagon::bottom(static_cast<size_t>(nvars));
  HullItem item;
  item.poly = conj_to_linsys(c, nvars);
  return oct_hull(static_cast<size_t>(nvars), {item});
}

Dnf rel_identity(int n) {
  Conj c;
  for (int i = 0; i < n; ++i) c.push_back(PAtom::eq({{i, 1}, {n + i, -1}}, 0));
  return Dnf::of(2 * n, c);
}

Dnf rel_compose(const Dnf& a, const Dnf& b) {
  if (a.nvars != b.nvars || a.nvars % 2 != 0) throw std::invalid_argument("rel_compose: bad dimensions");
  const int n = a.nvars / 2;
  std::vector<int> ma(2 * n), mb(2 * n), mid;
  for (int i = 0; i < n; ++i) {
    ma[i] = i;
    ma[n + i] = 2 * n + i;
    mb[i] = 2 * n + i;
    mb[n + i] = n + i;
    mid.push_back(2 * n + i);
  }
  Dnf big = Dnf::falsity(3 * n);
  for (const auto& x : a.disjuncts)
    for (const auto& y : b.disjuncts) {
      Conj c = concat(rename_conj(x, ma), rename_conj(y, mb));
      if (normalize_conj(c)) big.disjuncts.push_back(std::move(c));
    }
  Dnf r = exists(big, mid);
  Dnf out = Dnf::falsity(2 * n);
  for (auto& c : r.disjuncts)
    if (conj_sat(c)) out.disjuncts.push_back(std::move(c));
  return out;
}

Dnf lift_to_relation(const Dnf& set, bool primed) {
  const int n = set.nvars;
  std::vector<int> map(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) map[static_cast<size_t>(i)] = primed ? n + i : i;
  return rename_vars(set, map, 2 * n);
}

Dnf rel_preimage(const Dnf& rel, const Dnf& set) {
  const int n = rel.nvars / 2;
  if (set.nvars != n) throw std::invalid_argument("rel_preimage: dimension mismatch");
  Dnf both = dnf_and(rel, lift_to_relation(set, true));
  std::vector<int> primed;
  for (int i = 0; i < n; ++i) primed.push_back(n + i);
  Dnf r = exists(both, primed);
  r.nvars = n;
  Dnf out = Dnf::falsity(n);
  for (auto& c : r.disjuncts)
    if (conj_sat(c)) out.disjuncts.push_back(std::move(c));
  return out;
}

Dnf rel_image(const Dnf& rel, const Dnf& set) {
  const int n = rel.nvars / 2;
  if (set.nvars != n) throw std::invalid_argument("rel_image: dimension mismatch");
  Dnf both = dnf_and(rel, lift_to_relation(set, false));
  std::vector<int> unprimed;
  for (int i = 0; i < n; ++i) unprimed.push_back(i);
  Dnf r = exists(both, unprimed);
  std::vector<int> map(static_cast<size_t>(2 * n), 0);
  for (int i = 0; i < n; ++i) map[static_cast<size_t>(n + i)] = i;
  Dnf out = Dnf::falsity(n);
  for (auto& c : rename_vars(r, map, n).disjuncts)
    if (conj_sat(c)) out.disjuncts.push_back(std::move(c));
  return out;
}

}  // namespace cterm
