#include "cterm/ranking.hpp"

#include <stdexcept>

#include "cterm/term_oct.hpp"

namespace cterm {

namespace {

LinTerm primed(const LinTerm& f, int n) {
  LinTerm g(f.constant());
  for (const auto& [v, c] : f.coeffs()) g.set_coeff(v + n, c);
  return g;
}

Int ceil_q(const Rational& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace

Octagon witness_relation(const Octagon& r) {
  const size_t n = r.nvars() / 2;
  Octagon dom = domain_of_power(r, static_cast<long>(4 * n * n));
  if (dom.is_bottom()) return Octagon::bottom(2 * n);
  if (n == 0) return tight_close(r);
  return tight_close(oct_meet(r, oct_lift_to_relation(dom, false)));
}

bool verify_lrf(const Octagon& v, const LinTerm& f, const Int& decrease, const Int& h) {
  Octagon t = tight_close(v);
  if (t.is_bottom()) return true;
  const int n = static_cast<int>(v.nvars() / 2);
  LinSys sys = oct_to_linsys(t);
  LinTerm fx(f);
  fx.set_constant(0);
  LinTerm fxp = primed(fx, n);
  // f(x') - f(x) + decrease <= 0,   h - f(x) <= 0
  return entails(sys, {fxp - fx + LinTerm(Rational(decrease)), Rel::LE}) &&
         entails(sys, {LinTerm(Rational(h)) - fx, Rel::LE});
}

LrfResult synthesize_lrf(const Octagon& v) {
  LrfResult res;
  Octagon t = tight_close(v);
  res.witness.witness_relation = t;
  if (t.is_bottom()) {
    res.status = LrfStatus::TriviallyWF;
    return res;
  }
  const int n = static_cast<int>(v.nvars() / 2);
  LinSys sys = oct_to_linsys(t);
  // unknowns: a_0..a_{n-1} (coefficients of f), a_n = h
  TemplateRow dec, bnd;
  for (int i = 0; i < n; ++i) {
    dec.coeffs[i] = LinTerm::var(i, -1);
    dec.coeffs[i + n] = LinTerm::var(i, 1);
    bnd.coeffs[i] = LinTerm::var(i, -1);
  }
  dec.constant = LinTerm(1);
  bnd.constant = LinTerm::var(n);
  auto sol = farkas_template(sys, {dec, bnd}, n + 1);
  if (!sol) return res;

  Int den = 1, g = 0;
  for (int i = 0; i < n; ++i) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), (*sol)[i].get_den_mpz_t());
  LinTerm f;
  for (int i = 0; i < n; ++i) {
    Rational a = (*sol)[i] * Rational(den);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_num_mpz_t());
  }
  if (g == 0) return res;
  for (int i = 0; i < n; ++i) {
    Rational a = (*sol)[i] * Rational(den) / Rational(g);
    if (a != 0) f.set_coeff(i, a);
  }
  LpResult d = lp_inf(sys, f - primed(f, n));
  LpResult lo = lp_inf(sys, f);
  if (d.status != LpStatus::Value || lo.status != LpStatus::Value || d.value <= 0) return res;
  res.status = LrfStatus::Found;
  res.witness.function = f;
  res.witness.decrease = ceil_q(d.value);
  res.witness.lower_bound = ceil_q(lo.value);
  return res;
}

TerminationProof prove_termination(const Octagon& r) {
  TerminationProof p;
  WntResult w = wnt(r);
  if (!w.set.is_bottom()) {
    p.wnt_set = w.set;
    return p;
  }
  p.well_founded = true;
  LrfResult l = synthesize_lrf(witness_relation(r));
  p.witness = l.witness;
  if (l.status == LrfStatus::TriviallyWF) {
    p.trivial = true;
    return p;
  }
  if (l.status != LrfStatus::Found ||
      !verify_lrf(l.witness.witness_relation, l.witness.function, l.witness.decrease, l.witness.lower_bound))
    throw std::logic_error("well-founded relation without a verified linear ranking function on its witness");
  return p;
}

}  // namespace cterm
