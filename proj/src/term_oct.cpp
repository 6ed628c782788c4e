#include "cterm/term_oct.hpp"

#include <stdexcept>

namespace cterm {

namespace {

std::vector<size_t> first_half(size_t n) {
  std::vector<size_t> v;
  for (size_t i = 0; i < n; ++i) v.push_back(i);
  return v;
}

}  // namespace

Octagon fast_power(const Octagon& r, const Int& n) {
  if (n < 1) throw std::invalid_argument("fast_power: n must be positive");
  const size_t nv = r.nvars();
  Octagon base = tight_close(r);
  if (base.is_bottom()) return Octagon::bottom(nv);
  std::optional<Octagon> acc;
  Int e = n;
  for (;;) {
    if (mpz_odd_p(e.get_mpz_t())) {
      acc = acc ? oct_compose(*acc, base) : base;
      if (acc->is_bottom()) return Octagon::bottom(nv);
    }
    e >>= 1;
    if (e == 0) break;
    base = oct_compose(base, base);
    if (base.is_bottom()) return Octagon::bottom(nv);
  }
  return *acc;
}

WntResult wnt(const Octagon& r) {
  if (r.nvars() % 2 != 0) throw std::invalid_argument("wnt: relation must have 2N variables");
  const size_t n = r.nvars() / 2;
  WntResult res;
  mpz_ui_pow_ui(res.n1.get_mpz_t(), 5, 2 * n);
  res.n2 = res.n1 + 1;
  res.set = Octagon::bottom(n);
  Octagon v = fast_power(r, res.n1);
  if (v.is_bottom()) return res;
  Octagon w = oct_compose(v, tight_close(r));
  res.w_consistent = !w.is_bottom();
  if (!res.w_consistent) return res;
  Octagon pv = oct_project(v, first_half(n));
  Octagon pw = oct_project(w, first_half(n));
  res.stable = oct_eq(pv, pw);
  if (res.stable) res.set = pv;
  return res;
}

bool is_well_founded(const Octagon& r) { return wnt(r).set.is_bottom(); }

Octagon domain_of_power(const Octagon& r, long m) {
  const size_t n = r.nvars() / 2;
  Octagon p = fast_power(r, Int(m));
  if (p.is_bottom()) return Octagon::bottom(n);
  return oct_project(p, first_half(n));
}

bool strengthen_check(const Octagon& r, long m) {
  const size_t n = r.nvars() / 2;
  Octagon dom = domain_of_power(r, m);
  Octagon rm = dom.is_bottom() ? Octagon::bottom(2 * n) : oct_meet(r, oct_lift_to_relation(dom, true));
  Octagon a = wnt(r).set, b = wnt(rm).set;
  if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
  return oct_eq(a, b);
}

}  // namespace cterm
