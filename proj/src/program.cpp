#include "cterm/program.hpp"

#include <functional>
#include <map>

#include "cterm/affine.hpp"
#include "cterm/term_oct.hpp"

namespace cterm {

std::optional<size_t> Program::state(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return i;
  return std::nullopt;
}

std::vector<std::vector<size_t>> elementary_cycles(const Program& p, size_t limit) {
  std::vector<std::vector<size_t>> out_edges(p.states.size());
  for (size_t t = 0; t < p.transitions.size(); ++t) out_edges[p.transitions[t].src].push_back(t);
  std::vector<std::vector<size_t>> cycles;
  std::vector<bool> on_path(p.states.size(), false);
  std::vector<size_t> path;
  std::function<void(size_t, size_t)> dfs = [&](size_t start, size_t v) {
    for (size_t t : out_edges[v]) {
      if (cycles.size() >= limit) return;
      const size_t w = p.transitions[t].dst;
      if (w < start) continue;
      if (w == start) {
        path.push_back(t);
        cycles.push_back(path);
        path.pop_back();
      } else if (!on_path[w]) {
        on_path[w] = true;
        path.push_back(t);
        dfs(start, w);
        path.pop_back();
        on_path[w] = false;
      }
    }
  };
  for (size_t s = 0; s < p.states.size() && cycles.size() < limit; ++s) {
    on_path[s] = true;
    dfs(s, s);
    on_path[s] = false;
  }
  return cycles;
}

Dnf path_relation(const Program& p, const std::vector<size_t>& path) {
  const int n = static_cast<int>(p.nvars());
  Dnf r = rel_identity(n);
  for (size_t t : path) r = simplify(rel_compose(r, p.transitions[t].label));
  return r;
}

Octagon dnf_oct_hull(const Dnf& d) {
  const size_t n = static_cast<size_t>(d.nvars);
  std::vector<HullItem> items;
  for (const auto& c : d.disjuncts) {
    Octagon o = conj_oct_hull(c, d.nvars);
    if (!o.is_bottom()) items.push_back({o, std::nullopt});
  }
  if (items.empty()) return Octagon::bottom(n);
  return oct_hull(n, items);
}

std::optional<Octagon> dnf_as_octagon(const Dnf& d) {
  if (!dnf_sat(d)) return Octagon::bottom(static_cast<size_t>(d.nvars));
  if (d.disjuncts.size() == 1) {
    auto o = conj_to_octagon(d.disjuncts[0], d.nvars);
    if (o) return tight_close(*o);
  }
  Octagon h = tight_close(dnf_oct_hull(d));
  if (entails(octagon_to_dnf(h), d)) return h;
  return std::nullopt;
}

namespace {

// Hull-merges a formula whose disjunct count exceeds the cap.
Dnf cap_disjuncts(Dnf d, const ProgramOptions& opt, bool& exact, bool& budget) {
  if (d.disjuncts.size() <= opt.max_disjuncts) return d;
  exact = false;
  budget = true;
  return octagon_to_dnf(dnf_oct_hull(d));
}

Dnf domain_of(const Dnf& rel, int n) {
  std::vector<int> primed;
  for (int i = 0; i < n; ++i) primed.push_back(n + i);
  Dnf d = exists(rel, primed);
  d.nvars = n;
  return simplify(d);
}

Dnf image_of(const Dnf& rel, int n) { return simplify(rel_image(rel, Dnf::truth(n))); }

// Octagon closure, certified or not.
std::optional<Dnf> octagon_star(const Octagon& o, const ProgramOptions& opt) {
  auto u = reflexive_transitive_closure(o, opt.detect);
  if (!u) return std::nullopt;
  return simplify(u->to_dnf());
}

}  // namespace

RelResult loop_closure(const std::vector<Dnf>& loops, size_t n, const ProgramOptions& opt) {
  const int ni = static_cast<int>(n), nv = 2 * ni;
  RelResult res;
  Dnf id = rel_identity(ni);
  if (loops.empty()) {
    res.rel = id;
    return res;
  }
  std::vector<Conj> parts;
  for (const auto& l : loops)
    for (const auto& c : l.disjuncts) parts.push_back(c);
  if (parts.empty()) {
    res.rel = id;
    return res;
  }
  // one finite-monoid affine loop: exact closure
  if (loops.size() == 1 && parts.size() == 1 && !is_octagonal(parts[0])) {
    auto a = affine_from_conj(parts[0], n);
    if (a && is_finite_monoid(a->A)) {
      res.rel = simplify(dnf_or(id, finite_monoid_closure(*a)));
      return res;
    }
  }
  // all parts octagonal: close each, then saturate under composition
  bool all_oct = true;
  for (const auto& c : parts) all_oct = all_oct && is_octagonal(c);
  if (all_oct) {
    Dnf x = Dnf::falsity(nv);
    bool ok = true;
    for (const auto& c : parts) {
      auto o = conj_to_octagon(c, nv);
      auto s = o ? transitive_closure(*o, false, opt.detect) : std::nullopt;
      if (!s) {
        ok = false;
        res.budget_exhausted = true;
        break;
      }
      x = dnf_or(x, s->to_dnf());
    }
    x = simplify(x);
    for (int round = 0; ok && round < opt.saturation_rounds; ++round) {
      if (parts.size() == 1) {
        res.rel = simplify(dnf_or(id, x));
        return res;
      }
      if (x.disjuncts.size() * x.disjuncts.size() > opt.max_disjuncts) {
        res.budget_exhausted = true;
        break;
      }
      Dnf y = simplify(dnf_or(x, rel_compose(x, x)));
      if (y.disjuncts.size() > opt.max_disjuncts) {
        res.budget_exhausted = true;
        break;
      }
      if (entails(y, x)) {
        res.rel = simplify(dnf_or(id, x));
        return res;
      }
      x = y;
      if (round + 1 == opt.saturation_rounds) res.budget_exhausted = true;
    }
  }
  // octagonal hull of the loops, then its closure
  Dnf all = Dnf{nv, parts};
  Octagon h = tight_close(dnf_oct_hull(all));
  res.exact = parts.size() == 1 && is_octagonal(parts[0]);
  if (auto t = octagon_star(h, opt)) {
    res.rel = *t;
    return res;
  }
  // no period within budget: runs of length >= 1 go from the domain to the image
  res.exact = false;
  res.budget_exhausted = true;
  Dnf hd = octagon_to_dnf(h);
  Dnf step = dnf_and(lift_to_relation(domain_of(hd, ni), false), lift_to_relation(image_of(hd, ni), true));
  res.rel = simplify(dnf_or(id, step));
  return res;
}

RelResult transitive_relation(const Program& p, size_t q_in, size_t q_out, const ProgramOptions& opt) {
  const size_t s = p.states.size(), in = s, out = s + 1;
  const int n = static_cast<int>(p.nvars());
  struct Edge {
    size_t src, dst;
    Dnf label;
  };
  std::vector<Edge> edges;
  for (const auto& t : p.transitions) {
    if (t.label.is_false()) continue;
    edges.push_back({t.src, t.dst, t.label});
  }
  if (q_in != q_out) {
    edges.push_back({in, q_in, rel_identity(n)});
    edges.push_back({q_out, out, rel_identity(n)});
  } else {
    // runs of length >= 1 from q back to q
    std::vector<Edge> extra;
    for (const auto& e : edges) {
      if (e.src == q_in) extra.push_back({in, e.dst, e.label});
      if (e.dst == q_in) extra.push_back({e.src, out, e.label});
      if (e.src == q_in && e.dst == q_in) extra.push_back({in, out, e.label});
    }
    edges.insert(edges.end(), extra.begin(), extra.end());
  }
  RelResult res;
  for (size_t q = 0; q < s; ++q) {
    std::vector<Dnf> loops;
    std::vector<const Edge*> ins, outs;
    for (const auto& e : edges) {
      if (e.src == q && e.dst == q)
        loops.push_back(e.label);
      else if (e.dst == q)
        ins.push_back(&e);
      else if (e.src == q)
        outs.push_back(&e);
    }
    std::vector<Edge> next;
    if (!ins.empty() && !outs.empty()) {
      RelResult t = loop_closure(loops, p.nvars(), opt);
      res.exact = res.exact && t.exact;
      res.budget_exhausted = res.budget_exhausted || t.budget_exhausted;
      for (const Edge* a : ins) {
        Dnf at = simplify(rel_compose(a->label, t.rel));
        if (at.is_false()) continue;
        for (const Edge* b : outs) {
          Dnf l = simplify(rel_compose(at, b->label));
          l = cap_disjuncts(std::move(l), opt, res.exact, res.budget_exhausted);
          if (!l.is_false()) next.push_back({a->src, b->dst, std::move(l)});
        }
      }
    }
    for (auto& e : edges)
      if (e.src != q && e.dst != q) next.push_back(std::move(e));
    edges = std::move(next);
  }
  res.rel = Dnf::falsity(2 * n);
  for (const auto& e : edges)
    if (e.src == in && e.dst == out) res.rel = dnf_or(res.rel, e.label);
  res.rel = cap_disjuncts(simplify(res.rel), opt, res.exact, res.budget_exhausted);
  return res;
}

RelResult reflexive_transitive_relation(const Program& p, size_t q_in, size_t q_out, const ProgramOptions& opt) {
  RelResult r = transitive_relation(p, q_in, q_out, opt);
  if (q_in == q_out) r.rel = simplify(dnf_or(r.rel, rel_identity(static_cast<int>(p.nvars()))));
  return r;
}

SetResult reach_set(const Program& p, size_t q, const ProgramOptions& opt) {
  RelResult r = reflexive_transitive_relation(p, p.init, q, opt);
  return {image_of(r.rel, static_cast<int>(p.nvars())), r.exact, r.budget_exhausted};
}

FlatResult is_flat(const Program& p) {
  FlatResult f;
  auto cycles = elementary_cycles(p);
  std::vector<int> count(p.states.size(), 0);
  for (const auto& c : cycles)
    for (size_t t : c) ++count[p.transitions[t].src];
  for (size_t q = 0; q < p.states.size(); ++q)
    if (count[q] > 1) {
      f.flat = false;
      f.reason = "state " + p.states[q] + " lies on " + std::to_string(count[q]) + " elementary cycles";
      return f;
    }
  for (const auto& c : cycles) {
    Dnf r = path_relation(p, c);
    if (dnf_as_octagon(r)) continue;
    if (r.disjuncts.size() == 1) {
      auto a = affine_from_conj(r.disjuncts[0], p.nvars());
      if (a && is_finite_monoid(a->A)) continue;
    }
    f.flat = false;
    f.reason = "the cycle through " + p.states[p.transitions[c[0]].src] +
               " is neither octagonal nor finite-monoid affine";
    return f;
  }
  return f;
}

namespace {

// Non-termination set of one relation: exact for octagons and finite-monoid affine maps,
// an over-approximation for polynomially bounded ones; nullopt otherwise.
std::optional<Dnf> single_cycle_wnt(const Dnf& r, size_t n, bool& exact) {
  const int ni = static_cast<int>(n);
  if (auto o = dnf_as_octagon(r)) {
    exact = true;
    if (o->is_bottom()) return Dnf::falsity(ni);
    return octagon_to_dnf(wnt(*o).set);
  }
  if (r.disjuncts.size() != 1) return std::nullopt;
  auto a = affine_from_conj(r.disjuncts[0], n);
  if (!a) return std::nullopt;
  if (is_finite_monoid(a->A)) {
    exact = true;
    return finite_monoid_wnt(*a);
  }
  auto s = sufficient_termination(*a);
  if (!s) return std::nullopt;
  exact = false;
  Dnf guard = domain_of(Dnf::of(2 * ni, a->to_conj()), ni);
  return simplify(dnf_and(guard, dnf_not(*s)));
}

}  // namespace

PrecondResult nt_program(const Program& p, const ProgramOptions& opt) {
  PrecondResult res;
  const int n = static_cast<int>(p.nvars());
  res.flat = is_flat(p).flat;
  bool exact = true;
  res.precondition = Dnf::falsity(n);
  auto cycles = elementary_cycles(p);
  std::vector<std::vector<size_t>> through(p.states.size());
  for (size_t i = 0; i < cycles.size(); ++i)
    for (size_t t : cycles[i]) through[p.transitions[t].src].push_back(i);
  for (size_t q = 0; q < p.states.size(); ++q) {
    if (through[q].empty()) continue;
    StateContribution sc;
    sc.state = q;
    std::optional<Dnf> w;
    if (through[q].size() == 1) {
      // rotate the cycle to start at q
      std::vector<size_t> c = cycles[through[q][0]];
      while (p.transitions[c[0]].src != q) std::rotate(c.begin(), c.begin() + 1, c.end());
      bool ex = false;
      w = single_cycle_wnt(path_relation(p, c), p.nvars(), ex);
      if (w) {
        sc.method = "single-cycle";
        sc.exact = ex;
      }
    }
    if (!w) {
      sc.method = "tinv";
      RelResult plus = transitive_relation(p, q, q, opt);
      SetResult reach = reach_set(p, q, opt);
      sc.exact = plus.exact && reach.exact;
      res.budget_exhausted = res.budget_exhausted || plus.budget_exhausted || reach.budget_exhausted;
      Dnf tinv = simplify(dnf_and(plus.rel, lift_to_relation(reach.set, false)));
      Dnf acc = Dnf::falsity(n);
      for (const auto& c : tinv.disjuncts) {
        Octagon o = conj_oct_hull(c, 2 * n);
        if (!is_octagonal(c)) sc.exact = false;
        for (const auto& a : c)
          if (a.kind == PAtom::Div) sc.exact = false;
        Octagon ws = wnt(o).set;
        if (!ws.is_bottom()) acc = dnf_or(acc, octagon_to_dnf(ws));
      }
      w = simplify(acc);
    }
    sc.wnt = *w;
    if (!sc.wnt.is_false()) {
      RelResult star = reflexive_transitive_relation(p, p.init, q, opt);
      sc.exact = sc.exact && star.exact;
      res.budget_exhausted = res.budget_exhausted || star.budget_exhausted;
      sc.pre = simplify(rel_preimage(star.rel, sc.wnt));
      res.precondition = dnf_or(res.precondition, sc.pre);
    } else {
      sc.pre = Dnf::falsity(n);
    }
    exact = exact && sc.exact;
    res.per_state.push_back(std::move(sc));
  }
  res.precondition = cap_disjuncts(coalesce(res.precondition), opt, exact, res.budget_exhausted);
  res.exact = res.flat && exact;
  return res;
}

}  // namespace cterm
