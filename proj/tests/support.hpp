// Test-only helpers: deterministic random generators and brute-force oracles.
#pragma once

#include <functional>
#include <random>
#include <vector>

#include "cterm/dbm.hpp"
#include "cterm/linarith.hpp"
#include "cterm/octagon.hpp"

namespace testsupport {

using cterm::Int;
using cterm::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline long rand_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

// Calls f on every integer point of [lo, hi]^dim.
inline void for_each_point(size_t dim, long lo, long hi, const std::function<void(const std::vector<Int>&)>& f) {
  std::vector<Int> p(dim, Int(lo));
  if (dim == 0) {
    f(p);
    return;
  }
  for (;;) {
    f(p);
    size_t k = 0;
    while (k < dim) {
      if (p[k] < hi) {
        p[k] += 1;
        break;
      }
      p[k] = lo;
      ++k;
    }
    if (k == dim) return;
  }
}

// Rational Fourier-Motzkin feasibility of rows (term rel 0) with rel in {LE, LT, EQ}.
inline bool fm_feasible(const cterm::LinSys& sys) {
  struct Row {
    cterm::LinTerm t;
    bool strict;
  };
  std::vector<Row> rows;
  for (const auto& r : sys.rows) {
    if (r.rel == cterm::Rel::EQ) {
      rows.push_back({r.term, false});
      rows.push_back({-r.term, false});
    } else {
      rows.push_back({r.term, r.rel == cterm::Rel::LT});
    }
  }
  for (int v = 0; v < sys.nvars; ++v) {
    std::vector<Row> pos, neg, rest;
    for (auto& r : rows) {
      Rational c = r.t.coeff(v);
      if (c > 0)
        pos.push_back(r);
      else if (c < 0)
        neg.push_back(r);
      else
        rest.push_back(r);
    }
    for (auto& p : pos)
      for (auto& n : neg) {
        Rational cp = p.t.coeff(v), cn = -n.t.coeff(v);
        cterm::LinTerm t = p.t * cn + n.t * cp;
        t.set_coeff(v, 0);
        rest.push_back({t, p.strict || n.strict});
      }
    rows = rest;
  }
  for (const auto& r : rows) {
    const Rational& c = r.t.constant();
    if (r.strict ? !(c < 0) : !(c <= 0)) return false;
  }
  return true;
}

// All-pairs shortest paths by enumerating paths of length at most `maxlen`.
inline cterm::Dbm path_enum_closure(const cterm::Dbm& m, size_t maxlen) {
  const size_t n = m.dim();
  cterm::Dbm best(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) best.set(i, j, i == j ? cterm::xmin(cterm::XInt(0), m.at(i, i)) : m.at(i, j));
  // Relax over increasing lengths (Bellman-Ford style with explicit length bound).
  cterm::Dbm cur = best;
  for (size_t len = 2; len <= maxlen; ++len) {
    cterm::Dbm next = cur;
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) {
        if (cur.at(i, k).is_inf()) continue;
        for (size_t j = 0; j < n; ++j) {
          if (m.at(k, j).is_inf()) continue;
          next.meet(i, j, cur.at(i, k) + m.at(k, j));
        }
      }
    cur = next;
  }
  return cur;
}

// Random octagonal constraint over nvars variables.
inline cterm::Octagon random_octagon(size_t nvars, size_t natoms, long cmax) {
  std::vector<cterm::OctAtom> atoms;
  for (size_t k = 0; k < natoms; ++k) {
    cterm::OctAtom a;
    a.i = static_cast<int>(rand_int(0, static_cast<long>(nvars) - 1));
    a.si = rand_int(0, 1) ? 1 : -1;
    if (rand_int(0, 3) == 0) {
      a.j = -1;
    } else {
      do {
        a.j = static_cast<int>(rand_int(0, static_cast<long>(nvars) - 1));
      } while (a.j == a.i && nvars > 1);
      if (a.j == a.i) a.j = -1;
      a.sj = rand_int(0, 1) ? 1 : -1;
    }
    a.c = rand_int(-cmax, cmax);
    atoms.push_back(a);
  }
  return cterm::Octagon::from_atoms(nvars, atoms);
}

}  // namespace testsupport

namespace testsupport {

// si * x_i + sj * x_j <= c
inline cterm::OctAtom oa(int i, int si, int j, int sj, long c) {
  cterm::OctAtom a;
  a.i = i;
  a.si = si;
  a.j = j;
  a.sj = sj;
  a.c = c;
  return a;
}
inline cterm::OctAtom oa_diff(int i, int j, long c) { return oa(i, 1, j, -1, c); }
inline cterm::OctAtom oa_unary(int i, int si, long c) { return oa(i, si, -1, 1, c); }
// x_i - x_j = c
inline std::vector<cterm::OctAtom> oa_eq(int i, int j, long c) { return {oa_diff(i, j, c), oa_diff(j, i, -c)}; }

inline cterm::Octagon oct_of(size_t nvars, std::initializer_list<std::vector<cterm::OctAtom>> groups) {
  std::vector<cterm::OctAtom> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  return cterm::Octagon::from_atoms(nvars, all);
}

// The seven loop relations of the two-variable running example over x, y, x', y' (0..3).
inline std::vector<cterm::Octagon> running_relations() {
  return {
      oct_of(4, {{oa_unary(0, 1, -1), oa_diff(3, 0, 0)}, oa_eq(3, 2, 1)}),
      oct_of(4, {{oa_unary(3, -1, -1), oa_diff(3, 0, 0)}, oa_eq(3, 2, 1)}),
      oct_of(4, {{oa_unary(3, -1, 0), oa_diff(3, 1, -1), oa_unary(2, 1, -1)}, oa_eq(2, 0, 0)}),
      oct_of(4, {{oa_unary(2, -1, -1), oa_unary(3, -1, 0), oa_diff(3, 1, -1)}, oa_eq(2, 0, 0)}),
      oct_of(4, {oa_eq(2, 0, 0), oa_eq(3, 1, 0), {oa_unary(2, 1, -1), oa_unary(3, 1, 0)}}),
      oct_of(4, {oa_eq(2, 0, 0), oa_eq(3, 1, 0), {oa_unary(2, -1, -1), oa_unary(3, 1, 0)}}),
      oct_of(4, {{oa_unary(2, -1, -1), oa_unary(3, -1, 0), oa_diff(2, 0, -1), oa_diff(3, 2, 0)}}),
  };
}

// Zigzag relation over x1..x4 (0..3), primed 4..7.
inline cterm::Octagon zigzag_relation() {
  return cterm::Octagon::from_atoms(
      8, {oa_diff(1, 4, -1), oa_diff(2, 5, 0), oa_diff(0, 6, 0), oa_diff(7, 3, 0), oa_diff(6, 3, 0)});
}

// Random relation over n program variables (2n octagon variables).
inline cterm::Octagon random_relation(size_t n, size_t natoms, long cmax) { return random_octagon(2 * n, natoms, cmax); }

}  // namespace testsupport
