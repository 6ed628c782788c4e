#include "cterm/affine.hpp"

#include <numeric>
#include <stdexcept>

namespace cterm {

IntMatrix mat_identity(size_t n) {
  IntMatrix m(n, IntVector(n, Int(0)));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  const size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMatrix c(n, IntVector(m, Int(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

IntMatrix mat_pow(const IntMatrix& a, unsigned long k) {
  IntMatrix r = mat_identity(a.size()), base = a;
  while (k > 0) {
    if (k & 1UL) r = mat_mul(r, base);
    k >>= 1;
    if (k > 0) base = mat_mul(base, base);
  }
  return r;
}

IntVector mat_vec(const IntMatrix& a, const IntVector& v) {
  IntVector r(a.size(), Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

namespace {

IntVector vec_add(IntVector a, const IntVector& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

IntVector vec_scale(IntVector a, const Int& k) {
  for (auto& x : a) x *= k;
  return a;
}

// Rows  (C A^k) x >= d - C s  as atoms over variables 0..n-1.
void add_guard(Conj& out, const AffineRel& r, const IntMatrix& ak, const IntVector& s) {
  IntMatrix cak = mat_mul(r.C, ak);
  IntVector cs = mat_vec(r.C, s);
  for (size_t i = 0; i < r.C.size(); ++i) {
    std::map<int, Int> co;
    for (size_t j = 0; j < r.n; ++j)
      if (cak[i][j] != 0) co[static_cast<int>(j)] = -cak[i][j];
    out.push_back(PAtom::le(std::move(co), r.d[i] - cs[i]));
  }
}

// x' = A^k x + s + m * drift   (m is variable `mvar` when drift is non-empty)
void add_update(Conj& out, size_t n, const IntMatrix& ak, const IntVector& s, const IntVector* drift, int mvar) {
  for (size_t i = 0; i < n; ++i) {
    std::map<int, Int> co;
    co[static_cast<int>(n + i)] = 1;
    for (size_t j = 0; j < n; ++j)
      if (ak[i][j] != 0) co[static_cast<int>(j)] = -ak[i][j];
    if (drift && (*drift)[i] != 0) co[mvar] = -(*drift)[i];
    out.push_back(PAtom::eq(std::move(co), -s[i]));
  }
}

unsigned long totient(unsigned long d) {
  unsigned long r = d;
  for (unsigned long p = 2; p * p <= d; ++p)
    if (d % p == 0) {
      while (d % p == 0) d /= p;
      r -= r / p;
    }
  if (d > 1) r -= r / d;
  return r;
}

// Powers and trajectory offsets s_k = sum_{j<k} A^j b for k = 0..upto.
struct Trajectory {
  std::vector<IntMatrix> pw;
  std::vector<IntVector> s;
  Trajectory(const AffineRel& r, size_t upto) {
    pw.push_back(mat_identity(r.n));
    s.push_back(IntVector(r.n, Int(0)));
    for (size_t k = 1; k <= upto; ++k) {
      pw.push_back(mat_mul(pw.back(), r.A));
      s.push_back(vec_add(mat_vec(r.A, s.back()), r.b));
    }
  }
};

}  // namespace

bool AffineRel::guard_holds(const IntVector& x) const {
  IntVector cx = mat_vec(C, x);
  for (size_t i = 0; i < cx.size(); ++i)
    if (cx[i] < d[i]) return false;
  return true;
}

std::optional<IntVector> AffineRel::step(const IntVector& x) const {
  if (!guard_holds(x)) return std::nullopt;
  return vec_add(mat_vec(A, x), b);
}

Conj AffineRel::to_conj() const {
  Conj c;
  add_update(c, n, A, b, nullptr, 0);
  add_guard(c, *this, mat_identity(n), IntVector(n, Int(0)));
  if (!normalize_conj(c)) return Conj{PAtom::le({}, 1)};
  return c;
}

std::optional<AffineRel> affine_from_conj(const Conj& c, size_t n) {
  AffineRel r;
  r.n = n;
  r.A.assign(n, IntVector(n, Int(0)));
  r.b.assign(n, Int(0));
  std::vector<bool> defined(n, false);
  std::vector<const PAtom*> rest;
  for (const auto& a : c) {
    if (a.kind == PAtom::Div) return std::nullopt;
    int primed = -1, nprimed = 0;
    for (const auto& [v, k] : a.coeffs)
      if (v >= static_cast<int>(n)) {
        if (v >= static_cast<int>(2 * n)) return std::nullopt;
        primed = v - static_cast<int>(n);
        ++nprimed;
      }
    const bool defining = a.kind == PAtom::Eq && nprimed == 1 && !defined[static_cast<size_t>(primed)] &&
                          abs(a.coeff(primed + static_cast<int>(n))) == 1;
    if (!defining) {
      rest.push_back(&a);
      continue;
    }
    const size_t i = static_cast<size_t>(primed);
    const Int s = a.coeff(primed + static_cast<int>(n));  // s * x'_i + sum + c = 0
    for (const auto& [v, k] : a.coeffs)
      if (v < static_cast<int>(n)) r.A[i][static_cast<size_t>(v)] = -k * s;
    r.b[i] = -a.constant * s;
    defined[i] = true;
  }
  for (bool d : defined)
    if (!d) return std::nullopt;
  for (const PAtom* a : rest) {
    // substitute primed variables, then  sum + c <= 0  becomes  -sum >= c
    IntVector row(n, Int(0));
    Int c0 = a->constant;
    for (const auto& [v, k] : a->coeffs) {
      if (v < static_cast<int>(n)) {
        row[static_cast<size_t>(v)] += k;
      } else {
        const size_t i = static_cast<size_t>(v) - n;
        for (size_t j = 0; j < n; ++j) row[j] += k * r.A[i][j];
        c0 += k * r.b[i];
      }
    }
    r.C.push_back(vec_scale(row, -1));
    r.d.push_back(c0);
    if (a->kind == PAtom::Eq) {
      r.C.push_back(row);
      r.d.push_back(-c0);
    }
  }
  return r;
}

unsigned long monoid_exponent_bound(size_t n) {
  unsigned long l = 1;
  for (unsigned long d = 1; d <= 2 * n * n; ++d)
    if (totient(d) <= n) l = std::lcm(l, d);
  return l;
}

std::optional<MonoidPeriod> monoid_period(const IntMatrix& a) {
  const size_t n = a.size();
  if (n == 0) return MonoidPeriod{};
  const unsigned long lb = monoid_exponent_bound(n);
  std::vector<IntMatrix> pw{mat_identity(n)};
  for (unsigned long k = 1; k <= n + lb; ++k) pw.push_back(mat_mul(pw.back(), a));
  if (pw[n + lb] != pw[n]) return std::nullopt;
  MonoidPeriod p;
  for (p.c = 1; pw[n + p.c] != pw[n]; ++p.c) {
  }
  for (p.b = 0; pw[p.b + p.c] != pw[p.b]; ++p.b) {
  }
  return p;
}

bool is_finite_monoid(const IntMatrix& a) { return monoid_period(a).has_value(); }

Dnf finite_monoid_wnt(const AffineRel& r) {
  auto per = monoid_period(r.A);
  if (!per) throw std::invalid_argument("finite_monoid_wnt: matrix does not generate a finite monoid");
  const size_t bh = per->b, ch = per->c, kk = bh + ch;
  Trajectory tr(r, kk + ch);
  const IntVector& sc = tr.s[ch];
  for (size_t k = bh; k < kk; ++k)
    if (tr.s[k + ch] != vec_add(tr.s[k], mat_vec(tr.pw[k], sc)))
      throw std::logic_error("finite_monoid_wnt: trajectory offset identity failed");
  const int n = static_cast<int>(r.n);
  for (size_t k = bh; k < kk; ++k) {
    IntVector drift = mat_vec(r.C, mat_vec(tr.pw[k], sc));
    for (const auto& x : drift)
      if (x < 0) return Dnf::falsity(n);
  }
  Conj c;
  for (size_t k = 0; k < kk; ++k) add_guard(c, r, tr.pw[k], tr.s[k]);
  if (!normalize_conj(c)) return Dnf::falsity(n);
  return simplify(Dnf::of(n, c));
}

Dnf finite_monoid_closure(const AffineRel& r) {
  auto per = monoid_period(r.A);
  if (!per) throw std::invalid_argument("finite_monoid_closure: matrix does not generate a finite monoid");
  const size_t bh = per->b, ch = per->c, kk = bh + ch, n = r.n;
  Trajectory tr(r, kk + ch);
  const IntVector& sc = tr.s[ch];
  const int nv = static_cast<int>(2 * n), mvar = nv;
  Dnf out = Dnf::falsity(nv + 1);
  for (size_t k = 1; k < kk; ++k) {
    Conj c;
    add_update(c, n, tr.pw[k], tr.s[k], nullptr, 0);
    for (size_t j = 0; j < k; ++j) add_guard(c, r, tr.pw[j], tr.s[j]);
    if (normalize_conj(c)) out.disjuncts.push_back(std::move(c));
  }
  // k = k0 + m*c with m >= 1
  for (size_t k0 = bh; k0 < kk; ++k0) {
    Conj c;
    c.push_back(PAtom::le({{mvar, -1}}, 1));
    IntVector d0 = mat_vec(tr.pw[k0], sc);
    add_update(c, n, tr.pw[k0], tr.s[k0], &d0, mvar);
    for (size_t j = 0; j < k0; ++j) add_guard(c, r, tr.pw[j], tr.s[j]);
    for (size_t j1 = k0; j1 < k0 + ch; ++j1) {
      add_guard(c, r, tr.pw[j1], tr.s[j1]);
      // guard at step j1 + (m-1)c:  C A^{j1} x + C s_{j1} + (m-1) C D >= d
      IntVector cd = mat_vec(r.C, mat_vec(tr.pw[j1], sc));
      IntMatrix cak = mat_mul(r.C, tr.pw[j1]);
      IntVector cs = mat_vec(r.C, tr.s[j1]);
      for (size_t i = 0; i < r.C.size(); ++i) {
        std::map<int, Int> co;
        for (size_t j = 0; j < n; ++j)
          if (cak[i][j] != 0) co[static_cast<int>(j)] = -cak[i][j];
        if (cd[i] != 0) co[mvar] = -cd[i];
        c.push_back(PAtom::le(std::move(co), r.d[i] - cs[i] + cd[i]));
      }
    }
    if (normalize_conj(c)) out.disjuncts.push_back(std::move(c));
  }
  Dnf e = exists(out, {mvar});
  e.nvars = nv;
  return simplify(e);
}

HomogenizedRel homogenize(const AffineRel& r) {
  HomogenizedRel h;
  const size_t n = r.n;
  h.A_h.assign(n + 1, IntVector(n + 1, Int(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) h.A_h[i][j] = r.A[i][j];
    h.A_h[i][n] = r.b[i];
  }
  h.A_h[n][n] = 1;
  for (size_t i = 0; i < r.C.size(); ++i) {
    IntVector row = r.C[i];
    row.push_back(-r.d[i]);
    h.C_h.push_back(std::move(row));
  }
  return h;
}

Poly char_poly(const IntMatrix& a) {
  // Faddeev-LeVerrier
  const size_t n = a.size();
  Poly c(n + 1, Rational(0));
  c[n] = 1;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<Rational>> am(n, std::vector<Rational>(n, Rational(0)));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (size_t l = 0; l < n; ++l) s += Rational(a[i][l]) * m[l][j];
        am[i][j] = s;
      }
    for (size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = am;
    Rational tr = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l) tr += Rational(a[i][l]) * m[l][i];
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

Rational poly_eval(const Poly& p, const Rational& k) {
  Rational r = 0;
  for (size_t t = p.size(); t-- > 0;) r = r * k + p[t];
  return r;
}

IntMatrix PolyClosedForm::eval(unsigned long r, unsigned long k) const {
  IntMatrix m(n, IntVector(n, Int(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Rational v = poly_eval(p[r][i][j], Rational(static_cast<long>(k)));
      if (v.get_den() != 1) throw std::logic_error("closed form is not integer-valued");
      m[i][j] = v.get_num();
    }
  return m;
}

namespace {

Poly poly_mul_linear(const Poly& p, const Rational& root, const Rational& scale) {
  // p * (k - root) * scale
  Poly r(p.size() + 1, Rational(0));
  for (size_t t = 0; t < p.size(); ++t) {
    r[t + 1] += p[t] * scale;
    r[t] -= p[t] * root * scale;
  }
  return r;
}

bool poly_is_zero(const Poly& p) {
  for (const auto& c : p)
    if (c != 0) return false;
  return true;
}

// a * b mod q for monic q; the result has deg(q) coefficients.
Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& q) {
  const size_t dq = q.size() - 1;
  Poly r(a.size() + b.size(), Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  for (size_t t = r.size(); t-- > dq;) {
    const Rational top = r[t];
    if (top == 0) continue;
    for (size_t u = 0; u <= dq; ++u) r[t - dq + u] -= top * q[u];
  }
  r.resize(dq, Rational(0));
  return r;
}

// Polynomial of degree < vals.size() through (k0 + t, vals[t]).
Poly interpolate(const std::vector<Rational>& vals, unsigned long k0) {
  std::vector<Rational> diff = vals;
  Poly out(vals.size(), Rational(0));
  Poly basis{Rational(1)};  // binom(k - k0, s)
  for (size_t s = 0; s < vals.size(); ++s) {
    const Rational lead = diff[0];
    for (size_t t = 0; t < basis.size(); ++t) out[t] += lead * basis[t];
    for (size_t t = 0; t + 1 < diff.size(); ++t) diff[t] = diff[t + 1] - diff[t];
    diff.pop_back();
    basis = poly_mul_linear(basis, Rational(static_cast<long>(k0 + s)), Rational(1, static_cast<long>(s + 1)));
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

}  // namespace

std::optional<PolyClosedForm> poly_matrix_power(const IntMatrix& a) {
  const size_t n = a.size();
  PolyClosedForm f;
  f.n = n;
  if (n == 0) {
    f.p.assign(1, {});
    return f;
  }
  Poly cp = char_poly(a);
  size_t mult0 = 0;
  while (mult0 < n && cp[mult0] == 0) ++mult0;
  Poly q(cp.begin() + static_cast<long>(mult0), cp.end());  // monic, q(0) != 0
  const size_t dq = q.size() - 1;
  // least L with q | (x^L - 1)^deg(q): every root of q is an L-th root of unity
  const unsigned long lb = monoid_exponent_bound(n);
  unsigned long L = 0;
  if (dq == 0) {
    L = 1;
  } else {
    Poly xl{Rational(1)};  // x^l mod q
    for (unsigned long l = 1; l <= lb && L == 0; ++l) {
      xl = poly_mulmod(xl, Poly{Rational(0), Rational(1)}, q);
      Poly base = xl;
      base[0] -= 1;
      Poly acc{Rational(1)};
      for (size_t t = 0; t < dq; ++t) acc = poly_mulmod(acc, base, q);
      if (poly_is_zero(acc)) L = l;
    }
    if (L == 0) return std::nullopt;
  }
  f.L = L;
  f.k0 = (mult0 + L - 1) / L;
  const IntMatrix step = mat_pow(a, L);
  const size_t samples = n + 3;
  f.p.assign(L, std::vector<std::vector<Poly>>(n, std::vector<Poly>(n)));
  for (unsigned long r = 0; r < L; ++r) {
    std::vector<IntMatrix> vals{mat_pow(a, f.k0 * L + r)};
    while (vals.size() < samples) vals.push_back(mat_mul(vals.back(), step));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        std::vector<Rational> pts;
        for (size_t t = 0; t < n; ++t) pts.push_back(Rational(vals[t][i][j]));
        Poly p = interpolate(pts, f.k0);
        for (size_t t = n; t < samples; ++t)
          if (poly_eval(p, Rational(static_cast<long>(f.k0 + t))) != Rational(vals[t][i][j]))
            throw std::logic_error("poly_matrix_power: interpolation check failed");
        f.p[r][i][j] = std::move(p);
      }
  }
  return f;
}

namespace {

// Integer atom for  sum_j a[j] x_j + a[n]  (op) 0, scaled to integer coefficients.
PAtom linear_atom(const std::vector<Rational>& a, size_t n, bool strict_negative) {
  Int den = 1;
  for (const auto& x : a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::map<int, Int> co;
  for (size_t j = 0; j < n; ++j) {
    Rational v = a[j] * Rational(den);
    if (v != 0) co[static_cast<int>(j)] = v.get_num();
  }
  Int c = Rational(a[n] * Rational(den)).get_num();
  if (strict_negative) return PAtom::le(std::move(co), c + 1);
  return PAtom::eq(std::move(co), c);
}

bool all_zero(const std::vector<Rational>& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

}  // namespace

std::optional<Dnf> sufficient_termination(const AffineRel& r, const SufficientOptions& opt) {
  HomogenizedRel h = homogenize(r);
  auto pcf = poly_matrix_power(h.A_h);
  if (!pcf) return std::nullopt;
  const size_t n = r.n, nh = n + 1;
  Dnf out = Dnf::falsity(static_cast<int>(n));
  for (size_t i = 0; i < h.C_h.size(); ++i) {
    for (unsigned long res = 0; res < pcf->L; ++res) {
      // a[t][j]: coefficient of k^t x_j in (C_h A_h^{kL+res} x_h)_i
      std::vector<std::vector<Rational>> a(nh, std::vector<Rational>(nh, Rational(0)));
      for (size_t l = 0; l < nh; ++l) {
        if (h.C_h[i][l] == 0) continue;
        for (size_t j = 0; j < nh; ++j) {
          const Poly& p = pcf->p[res][l][j];
          for (size_t t = 0; t < p.size(); ++t) a[t][j] += Rational(h.C_h[i][l]) * p[t];
        }
      }
      long deg = -1;
      for (size_t t = 0; t < nh; ++t)
        if (!all_zero(a[t])) deg = static_cast<long>(t);
      for (long lead = deg; lead >= 0; --lead) {
        Conj c;
        for (long t = deg; t > lead; --t) c.push_back(linear_atom(a[static_cast<size_t>(t)], n, false));
        c.push_back(linear_atom(a[static_cast<size_t>(lead)], n, true));
        if (normalize_conj(c)) out.disjuncts.push_back(std::move(c));
      }
    }
  }
  IntMatrix pw = mat_identity(nh);
  for (unsigned long j = 0; j < opt.prefix_steps; ++j) {
    IntMatrix ch = mat_mul(h.C_h, pw);
    for (const auto& row : ch) {
      std::vector<Rational> a(row.begin(), row.end());
      Conj c{linear_atom(a, n, true)};
      if (normalize_conj(c)) out.disjuncts.push_back(std::move(c));
    }
    pw = mat_mul(h.A_h, pw);
  }
  return simplify(out);
}

}  // namespace cterm
