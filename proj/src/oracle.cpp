#include "cterm/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cterm {

BoxDomain BoxDomain::cube(size_t n, long lo, long hi) {
  BoxDomain b;
  b.lo.assign(n, Int(lo));
  b.hi.assign(n, Int(hi));
  return b;
}

bool BoxDomain::contains(const Valuation& v) const {
  for (size_t i = 0; i < dim(); ++i)
    if (v[i] < lo[i] || v[i] > hi[i]) return false;
  return true;
}

size_t BoxDomain::size() const {
  size_t s = 1;
  for (size_t i = 0; i < dim(); ++i) {
    Int w = hi[i] - lo[i] + 1;
    if (w <= 0) return 0;
    s *= w.get_ui();
  }
  return s;
}

size_t BoxDomain::index(const Valuation& v) const {
  size_t idx = 0;
  for (size_t i = 0; i < dim(); ++i) {
    Int w = hi[i] - lo[i] + 1;
    Int off = v[i] - lo[i];
    idx = idx * w.get_ui() + off.get_ui();
  }
  return idx;
}

Valuation BoxDomain::point(size_t idx) const {
  Valuation v(dim());
  for (size_t i = dim(); i-- > 0;) {
    unsigned long w = Int(hi[i] - lo[i] + 1).get_ui();
    v[i] = lo[i] + Int(idx % w);
    idx /= w;
  }
  return v;
}

void BoxDomain::for_each(const std::function<void(const Valuation&)>& f) const {
  const size_t n = size();
  for (size_t k = 0; k < n; ++k) f(point(k));
}

bool eval_membership(const Dnf& f, const Valuation& v) { return eval_dnf(f, v); }
bool eval_membership(const Octagon& o, const Valuation& v) { return o.contains(v); }

bool eval_membership(const AffineRel& a, const Valuation& v) {
  IntVector x(v.begin(), v.begin() + static_cast<long>(a.n));
  auto y = a.step(x);
  if (!y) return false;
  for (size_t i = 0; i < a.n; ++i)
    if ((*y)[i] != v[a.n + i]) return false;
  return true;
}

bool eval_membership(const ParamOctUnion& u, const Valuation& v) { return eval_dnf(u.to_dnf(), v); }

namespace {

// Backtracking over the primed variables of one conjunct with the unprimed part fixed.
struct SuccessorSearch {
  const Conj& c;
  size_t n;
  const BoxDomain& box;
  const std::function<bool(const Valuation&)>& f;
  std::vector<Int> val;               // 2n entries
  std::vector<std::vector<size_t>> by_last;  // atoms whose highest primed variable is n+k
  bool stop = false;

  SuccessorSearch(const Conj& c_, size_t n_, const BoxDomain& b, const std::function<bool(const Valuation&)>& f_,
                  const Valuation& x)
      : c(c_), n(n_), box(b), f(f_), val(2 * n_), by_last(n_) {
    for (size_t i = 0; i < n; ++i) val[i] = x[i];
    for (size_t a = 0; a < c.size(); ++a) {
      int last = -1;
      for (const auto& kv : c[a].coeffs) last = std::max(last, kv.first);
      if (last >= static_cast<int>(n)) by_last[static_cast<size_t>(last) - n].push_back(a);
    }
  }

  Int partial(const PAtom& a, size_t upto) const {
    Int s = a.constant;
    for (const auto& [v, k] : a.coeffs)
      if (static_cast<size_t>(v) < upto) s += k * val[static_cast<size_t>(v)];
    return s;
  }

  bool unprimed_ok() const {
    for (const auto& a : c) {
      bool primed = false;
      for (const auto& kv : a.coeffs)
        if (kv.first >= static_cast<int>(n)) primed = true;
      if (!primed && !eval_atom(a, val)) return false;
    }
    return true;
  }

  void run(size_t k) {
    if (stop) return;
    if (k == n) {
      Valuation y(val.begin() + static_cast<long>(n), val.end());
      if (!f(y)) stop = true;
      return;
    }
    const size_t v = n + k;
    Int lo = box.lo[k], hi = box.hi[k];
    // Bounds from atoms in which v is the last unassigned variable.
    for (size_t a : by_last[k]) {
      const PAtom& at = c[a];
      if (at.kind == PAtom::Div) continue;
      Int coef = at.coeff(static_cast<int>(v));
      Int rest = partial(at, v);  // coef * v + rest (<= or ==) 0
      if (at.kind == PAtom::Eq) {
        if (rest % coef != 0) return;
        Int e = -rest / coef;
        lo = std::max(lo, e);
        hi = std::min(hi, e);
      } else if (coef > 0) {
        Int b;
        mpz_fdiv_q(b.get_mpz_t(), Int(-rest).get_mpz_t(), coef.get_mpz_t());
        hi = std::min(hi, b);
      } else {
        Int b;
        mpz_cdiv_q(b.get_mpz_t(), rest.get_mpz_t(), Int(-coef).get_mpz_t());
        lo = std::max(lo, b);
      }
    }
    for (Int t = lo; t <= hi && !stop; ++t) {
      val[v] = t;
      bool ok = true;
      for (size_t a : by_last[k])
        if (c[a].kind == PAtom::Div && !eval_atom(c[a], val)) ok = false;
      if (ok) run(k + 1);
    }
  }
};

}  // namespace

void for_each_successor(const Dnf& rel, const Valuation& x, const BoxDomain& box,
                        const std::function<bool(const Valuation&)>& f) {
  const size_t n = static_cast<size_t>(rel.nvars) / 2;
  for (const auto& c : rel.disjuncts) {
    SuccessorSearch s(c, n, box, f, x);
    if (!s.unprimed_ok()) continue;
    s.run(0);
    if (s.stop) return;
  }
}

namespace {

// Generic in-box graph over integer node ids.
template <class Succ>
std::optional<std::pair<std::vector<size_t>, std::vector<size_t>>> dfs_lasso(size_t start, Succ succ) {
  // colour: 1 on stack, 2 finished
  std::map<size_t, int> colour;
  struct Frame {
    size_t node;
    std::vector<size_t> next;
    size_t pos = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({start, succ(start)});
  colour[start] = 1;
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.pos == top.next.size()) {
      colour[top.node] = 2;
      stack.pop_back();
      continue;
    }
    size_t m = top.next[top.pos++];
    int col = colour.count(m) ? colour[m] : 0;
    if (col == 1) {
      std::vector<size_t> stem, cycle;
      size_t k = 0;
      while (stack[k].node != m) stem.push_back(stack[k++].node);
      for (; k < stack.size(); ++k) cycle.push_back(stack[k].node);
      return std::make_pair(stem, cycle);
    }
    if (col == 0) {
      colour[m] = 1;
      stack.push_back({m, succ(m)});
    }
  }
  return std::nullopt;
}

std::vector<size_t> successor_ids(const Dnf& rel, const BoxDomain& box, const Valuation& x) {
  std::vector<size_t> out;
  for_each_successor(rel, x, box, [&](const Valuation& y) {
    out.push_back(box.index(y));
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::optional<Lasso> find_lasso(const Dnf& rel, const BoxDomain& box, const Valuation& start) {
  if (!box.contains(start)) return std::nullopt;
  auto r = dfs_lasso(box.index(start), [&](size_t id) { return successor_ids(rel, box, box.point(id)); });
  if (!r) return std::nullopt;
  Lasso l;
  for (size_t id : r->first) l.stem.push_back(box.point(id));
  for (size_t id : r->second) l.cycle.push_back(box.point(id));
  return l;
}

std::optional<ProgramLasso> find_lasso(const Program& p, const BoxDomain& box, const Valuation& start) {
  if (!box.contains(start)) return std::nullopt;
  const size_t states = p.states.size();
  auto succ = [&](size_t id) {
    const size_t q = id % states;
    const Valuation v = box.point(id / states);
    std::vector<size_t> out;
    for (const auto& t : p.transitions) {
      if (t.src != q) continue;
      for (size_t y : successor_ids(t.label, box, v)) out.push_back(y * states + t.dst);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto r = dfs_lasso(box.index(start) * states + p.init, succ);
  if (!r) return std::nullopt;
  ProgramLasso l;
  for (size_t id : r->first) l.stem.push_back({id % states, box.point(id / states)});
  for (size_t id : r->second) l.cycle.push_back({id % states, box.point(id / states)});
  return l;
}

std::vector<Valuation> kleene_fixpoint_pre(const Dnf& rel, const BoxDomain& box) {
  const size_t total = box.size();
  std::vector<char> alive(total, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t k = 0; k < total; ++k) {
      if (!alive[k]) continue;
      bool has = false;
      for_each_successor(rel, box.point(k), box, [&](const Valuation& y) {
        if (alive[box.index(y)]) has = true;
        return !has;
      });
      if (!has) {
        alive[k] = 0;
        changed = true;
      }
    }
  }
  std::vector<Valuation> out;
  for (size_t k = 0; k < total; ++k)
    if (alive[k]) out.push_back(box.point(k));
  return out;
}

std::vector<Valuation> kleene_fixpoint_pre(const Octagon& rel, const BoxDomain& box) {
  return kleene_fixpoint_pre(octagon_to_dnf(rel), box);
}

std::vector<Valuation> nonterminating_starts(const Program& p, const BoxDomain& box) {
  const size_t states = p.states.size();
  const size_t total = box.size() * states;
  std::vector<char> alive(total, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t id = 0; id < total; ++id) {
      if (!alive[id]) continue;
      const size_t q = id % states;
      const Valuation v = box.point(id / states);
      bool has = false;
      for (const auto& t : p.transitions) {
        if (t.src != q || has) continue;
        for_each_successor(t.label, v, box, [&](const Valuation& y) {
          if (alive[box.index(y) * states + t.dst]) has = true;
          return !has;
        });
      }
      if (!has) {
        alive[id] = 0;
        changed = true;
      }
    }
  }
  std::vector<Valuation> out;
  for (size_t k = 0; k < box.size(); ++k)
    if (alive[k * states + p.init]) out.push_back(box.point(k));
  return out;
}

std::set<std::pair<Valuation, Valuation>> bounded_runs(const Program& p, size_t q_in, size_t q_out,
                                                       const BoxDomain& box, size_t max_len) {
  const size_t states = p.states.size();
  std::set<std::pair<Valuation, Valuation>> out;
  box.for_each([&](const Valuation& x) {
    // frontier of configurations reached with exactly `len` transitions
    std::set<size_t> seen, frontier{box.index(x) * states + q_in};
    for (size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
      std::set<size_t> next;
      for (size_t id : frontier) {
        const size_t q = id % states;
        const Valuation v = box.point(id / states);
        for (const auto& t : p.transitions) {
          if (t.src != q) continue;
          for (size_t y : successor_ids(t.label, box, v)) {
            size_t nid = y * states + t.dst;
            if (seen.insert(nid).second) next.insert(nid);
          }
        }
      }
      for (size_t id : next)
        if (id % states == q_out) out.insert({x, box.point(id / states)});
      frontier = std::move(next);
    }
  });
  return out;
}

}  // namespace cterm
