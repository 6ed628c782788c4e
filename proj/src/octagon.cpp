#include "cterm/octagon.hpp"

#include <sstream>
#include <stdexcept>

namespace cterm {

Octagon Octagon::top(size_t nvars) {
  Octagon o;
  o.nvars_ = nvars;
  o.m_ = Dbm(2 * nvars);
  o.tight_ = true;
  return o;
}

Octagon Octagon::bottom(size_t nvars) {
  Octagon o;
  o.nvars_ = nvars;
  o.m_ = Dbm::bottom(2 * nvars);
  o.tight_ = true;
  return o;
}

Octagon Octagon::from_atoms(size_t nvars, const std::vector<OctAtom>& atoms) {
  Octagon o = top(nvars);
  for (const auto& a : atoms) o.add(a);
  return o;
}

Octagon Octagon::from_dbm(const Dbm& m, bool tight) {
  if (m.dim() % 2 != 0) throw std::invalid_argument("octagon matrix must have even dimension");
  Octagon o;
  o.nvars_ = m.dim() / 2;
  o.m_ = m;
  o.tight_ = tight;
  return o;
}

void Octagon::add(const OctAtom& at) {
  if (m_.is_bottom()) return;
  if (at.i < 0 || static_cast<size_t>(at.i) >= nvars_ || (at.j >= 0 && static_cast<size_t>(at.j) >= nvars_))
    throw std::out_of_range("octagon atom variable out of range");
  tight_ = false;
  const size_t a = dual(at.i, at.si);
  if (at.unary()) {
    XInt c = XInt(Int(2 * at.c));
    m_.meet(a, bar(a), c);
    return;
  }
  const size_t b = dual(at.j, -at.sj);
  XInt c(at.c);
  m_.meet(a, b, c);
  m_.meet(bar(b), bar(a), c);
}

std::vector<OctAtom> Octagon::atoms() const {
  std::vector<OctAtom> out;
  if (m_.is_bottom()) {
    // 0 <= -1 over variable 0 (or a ground contradiction when there are no variables).
    OctAtom a;
    a.i = 0;
    a.si = 1;
    a.j = 0;
    a.sj = -1;
    a.c = -1;
    out.push_back(a);
    return out;
  }
  const size_t n = 2 * nvars_;
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const XInt& c = m_.at(a, b);
      if (c.is_inf()) continue;
      const size_t ca = bar(b), cb = bar(a);
      if (std::make_pair(ca, cb) < std::make_pair(a, b)) continue;
      OctAtom at;
      at.i = static_cast<int>(a / 2);
      at.si = a % 2 == 0 ? 1 : -1;
      if (b == bar(a)) {
        at.j = -1;
        at.c = floor_div(c.value(), 2);
      } else {
        at.j = static_cast<int>(b / 2);
        at.sj = b % 2 == 0 ? -1 : 1;
        at.c = c.value();
      }
      out.push_back(at);
    }
  }
  return out;
}

bool Octagon::contains(const std::vector<Int>& p) const {
  if (m_.is_bottom()) return false;
  const size_t n = 2 * nvars_;
  auto yv = [&](size_t k) { return k % 2 == 0 ? p[k / 2] : Int(-p[k / 2]); };
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      const XInt& c = m_.at(a, b);
      if (c.is_inf()) continue;
      if (yv(a) - yv(b) > c.value()) return false;
    }
  return true;
}

namespace {
std::string var_name(const std::vector<std::string>& names, size_t v) {
  return v < names.size() ? names[v] : "x" + std::to_string(v + 1);
}
}  // namespace

std::string Octagon::str(const std::vector<std::string>& names) const {
  if (is_bottom()) return "false";
  std::ostringstream os;
  bool first = true;
  for (const auto& a : atoms()) {
    if (!first) os << " && ";
    first = false;
    os << (a.si < 0 ? "-" : "") << var_name(names, a.i);
    if (!a.unary()) os << (a.sj < 0 ? " - " : " + ") << var_name(names, a.j);
    os << " <= " << a.c.get_str();
  }
  if (first) return "true";
  return os.str();
}

Octagon tight_close(const Octagon& o) {
  if (o.is_bottom()) return o;
  if (o.is_tight()) return o;
  const size_t n = 2 * o.nvars();
  Dbm c = fw_close(o.dbm());
  if (c.is_bottom()) return Octagon::bottom(o.nvars());
  std::vector<XInt> h(n);
  for (size_t i = 0; i < n; ++i) h[i] = c.at(i, bar(i)).half_floor();
  for (size_t i = 0; i < n; i += 2) {
    if (h[i].is_inf() || h[i + 1].is_inf()) continue;
    if (h[i] + h[i + 1] < XInt(0)) return Octagon::bottom(o.nvars());
  }
  XInt* d = c.data();
  for (size_t i = 0; i < n; ++i) {
    if (h[i].is_inf()) continue;
    for (size_t j = 0; j < n; ++j) {
      const XInt& hj = h[bar(j)];
      if (hj.is_inf()) continue;
      XInt s = h[i] + hj;
      if (s < d[i * n + j]) d[i * n + j] = std::move(s);
    }
  }
  c.mark_closed(true);
  return Octagon::from_dbm(c, true);
}

bool oct_is_consistent(const Octagon& o) { return !tight_close(o).is_bottom(); }

Octagon oct_identity(size_t n) {
  Octagon o = Octagon::top(2 * n);
  for (size_t i = 0; i < n; ++i) {
    o.add({static_cast<int>(n + i), 1, static_cast<int>(i), -1, Int(0)});
    o.add({static_cast<int>(i), 1, static_cast<int>(n + i), -1, Int(0)});
  }
  return tight_close(o);
}

namespace {
// Copies the matrix of `src` into `dst` with variable v mapped to map[v] (meet).
void embed(Dbm& dst, const Octagon& src, const std::vector<size_t>& map) {
  const size_t n = 2 * src.nvars();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      const XInt& c = src.at(a, b);
      if (c.is_inf()) continue;
      size_t ta = 2 * map[a / 2] + (a % 2), tb = 2 * map[b / 2] + (b % 2);
      dst.meet(ta, tb, c);
    }
}
}  // namespace

Octagon oct_compose(const Octagon& a, const Octagon& b) {
  if (a.nvars() != b.nvars() || a.nvars() % 2 != 0) throw std::invalid_argument("oct_compose: bad dimensions");
  const size_t n = a.nvars() / 2;
  if (a.is_bottom() || b.is_bottom()) return Octagon::bottom(2 * n);
  Octagon big = Octagon::top(3 * n);
  Dbm m = big.dbm();
  std::vector<size_t> ma(2 * n), mb(2 * n);
  for (size_t v = 0; v < 2 * n; ++v) {
    ma[v] = v;
    mb[v] = v + n;
  }
  embed(m, a, ma);
  embed(m, b, mb);
  Octagon t = tight_close(Octagon::from_dbm(m, false));
  if (t.is_bottom()) return Octagon::bottom(2 * n);
  std::vector<size_t> keep;
  for (size_t v = 0; v < n; ++v) keep.push_back(v);
  for (size_t v = 0; v < n; ++v) keep.push_back(2 * n + v);
  return oct_project(t, keep);
}

Octagon oct_project(const Octagon& o, const std::vector<size_t>& keep_vars) {
  if (!o.is_tight()) throw std::invalid_argument("oct_project: octagon is not tightly closed");
  if (o.is_bottom()) return Octagon::bottom(keep_vars.size());
  std::vector<size_t> keep;
  for (size_t v : keep_vars) {
    keep.push_back(2 * v);
    keep.push_back(2 * v + 1);
  }
  return Octagon::from_dbm(dbm_project(o.dbm(), keep), true);
}

Octagon oct_exists(const Octagon& o, const std::vector<size_t>& drop_vars) {
  Octagon t = tight_close(o);
  std::vector<bool> drop(o.nvars(), false);
  for (size_t v : drop_vars) drop.at(v) = true;
  std::vector<size_t> keep;
  for (size_t v = 0; v < o.nvars(); ++v)
    if (!drop[v]) keep.push_back(v);
  return oct_project(t, keep);
}

Octagon oct_meet(const Octagon& a, const Octagon& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("oct_meet: dimension mismatch");
  if (a.is_bottom()) return a;
  if (b.is_bottom()) return b;
  return Octagon::from_dbm(dbm_min(a.dbm(), b.dbm()), false);
}

Octagon oct_lift_to_relation(const Octagon& guard, bool primed) {
  const size_t n = guard.nvars();
  if (guard.is_bottom()) return Octagon::bottom(2 * n);
  Octagon r = Octagon::top(2 * n);
  Dbm m = r.dbm();
  std::vector<size_t> map(n);
  for (size_t v = 0; v < n; ++v) map[v] = primed ? n + v : v;
  embed(m, guard, map);
  return Octagon::from_dbm(m, false);
}

Octagon oct_domain(const Octagon& rel) {
  const size_t n = rel.nvars() / 2;
  std::vector<size_t> keep;
  for (size_t v = 0; v < n; ++v) keep.push_back(v);
  return oct_project(tight_close(rel), keep);
}

bool oct_leq(const Octagon& a0, const Octagon& b0) {
  if (a0.nvars() != b0.nvars()) throw std::invalid_argument("oct_leq: dimension mismatch");
  Octagon a = tight_close(a0), b = tight_close(b0);
  if (a.is_bottom()) return true;
  if (b.is_bottom()) return false;
  return dbm_leq(a.dbm(), b.dbm());
}

bool oct_eq(const Octagon& a, const Octagon& b) {
  Octagon ta = tight_close(a), tb = tight_close(b);
  return ta == tb;
}

LinTerm dual_difference(size_t a, size_t b) {
  LinTerm t;
  if (a == b) return t;
  t.add_coeff(static_cast<int>(a / 2), a % 2 == 0 ? 1 : -1);
  t.add_coeff(static_cast<int>(b / 2), b % 2 == 0 ? -1 : 1);
  return t;
}

LinSys oct_to_linsys(const Octagon& o) {
  LinSys s;
  s.nvars = static_cast<int>(o.nvars());
  if (o.is_bottom()) {
    s.add(LinTerm(1), Rel::LE);
    return s;
  }
  const size_t n = 2 * o.nvars();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const XInt& c = o.at(a, b);
      if (c.is_inf()) continue;
      if (std::make_pair(bar(b), bar(a)) < std::make_pair(a, b)) continue;
      s.add(dual_difference(a, b) - LinTerm(Rational(c.value())), Rel::LE);
    }
  return s;
}

Octagon oct_hull(size_t nvars, const std::vector<HullItem>& items) {
  const size_t n = 2 * nvars;
  bool any = false;
  Dbm acc(n);
  for (const auto& item : items) {
    Dbm m(n);
    if (item.oct) {
      Octagon t = tight_close(*item.oct);
      if (t.is_bottom()) continue;
      m = t.dbm();
    } else if (item.poly) {
      if (!lp_feasible(*item.poly).feasible) continue;
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
          if (a == b) continue;
          LpResult r = lp_sup(*item.poly, dual_difference(a, b));
          if (r.status == LpStatus::Value) {
            Int num = r.value.get_num(), den = r.value.get_den();
            m.set(a, b, XInt(floor_div(num, den)));
          } else {
            m.set(a, b, XInt::inf());
          }
        }
    } else {
      continue;
    }
    if (!any) {
      acc = m;
      any = true;
    } else {
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) acc.set(a, b, xmax(acc.at(a, b), m.at(a, b)));
    }
  }
  if (!any) return Octagon::bottom(nvars);
  return tight_close(Octagon::from_dbm(acc, false));
}

Int max_coef(const Octagon& o) {
  Int best = 0;
  if (o.is_bottom()) return best;
  for (const auto& a : o.atoms()) {
    Int v = abs(a.c);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace cterm
