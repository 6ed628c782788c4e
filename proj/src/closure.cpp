#include "cterm/closure.hpp"

#include <stdexcept>

namespace cterm {

namespace {

// Powers of a relation, computed on demand by composing with R.
class PowerSeq {
 public:
  explicit PowerSeq(const Octagon& r) : r1_(tight_close(r)), n_(r.nvars() / 2) {}

  // Returns false when some power up to n is empty (and records the least one).
  bool ensure(long n) {
    if (inconsistent_ != 0) return n < inconsistent_;
    if (rel_.empty()) {
      if (r1_.is_bottom()) {
        inconsistent_ = 1;
        return false;
      }
      rel_.push_back(r1_);
    }
    while (static_cast<long>(rel_.size()) < n) {
      Octagon next = oct_compose(rel_.back(), r1_);
      if (next.is_bottom()) {
        inconsistent_ = static_cast<long>(rel_.size()) + 1;
        return false;
      }
      rel_.push_back(std::move(next));
    }
    return true;
  }
  long inconsistent() const { return inconsistent_; }
  const Octagon& rel(long n) const { return rel_.at(static_cast<size_t>(n - 1)); }

  const Octagon& elem(long n, PeriodMode mode) {
    if (mode == PeriodMode::Full) return rel(n);
    while (static_cast<long>(pre_.size()) < n) {
      const Octagon& r = rel(static_cast<long>(pre_.size()) + 1);
      std::vector<size_t> keep;
      for (size_t v = 0; v < n_; ++v) keep.push_back(v);
      pre_.push_back(oct_project(r, keep));
    }
    return pre_.at(static_cast<size_t>(n - 1));
  }

 private:
  Octagon r1_;
  size_t n_;
  std::vector<Octagon> rel_;
  std::vector<Octagon> pre_;
  long inconsistent_ = 0;
};

// b - a entrywise; false when the infinity patterns differ.
bool difference(const Dbm& a, const Dbm& b, Dbm& out) {
  const size_t d = a.dim();
  out = Dbm(d);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) {
      const XInt& x = a.at(i, j);
      const XInt& y = b.at(i, j);
      if (x.is_inf() != y.is_inf()) return false;
      out.set(i, j, x.is_inf() ? XInt::inf() : y - x);
    }
  return true;
}

ParamTerm half(const ParamTerm& t) {
  ParamTerm h;
  for (const auto& [p, r] : t.rates) {
    if (mod_pos(r, 2) != 0) throw std::logic_error("half: odd rate");
    h.rates[p] = r / 2;
  }
  h.constant = floor_div(t.constant, 2);
  return h;
}

bool nonneg(const ParamTerm& t) {
  if (t.constant < 0) return false;
  for (const auto& kv : t.rates)
    if (kv.second < 0) return false;
  return true;
}

void check_cancel(const DetectOptions& opt) {
  if (opt.cancel && opt.cancel->load()) throw CancelledError();
}

}  // namespace

Octagon PeriodCertificate::predict(long n) const {
  if (n < 1) throw std::invalid_argument("predict: n must be positive");
  if (n < b) return prefix.at(static_cast<size_t>(n - 1));
  const long i = (n - b) % c;
  const long k = (n - b) / c;
  return Octagon::from_dbm(dbm_add_rate(base[static_cast<size_t>(i)].dbm(), rates[static_cast<size_t>(i)], Int(k)), true);
}

bool verify_period_step(const Dbm& base, const Dbm& rate, const Octagon& rc, PeriodMode mode) {
  const size_t n = rc.nvars() / 2;  // program variables
  // Variable layout of the assembled system and where each piece lives.
  size_t total, base_off, rc_off;
  std::vector<size_t> keep;
  if (mode == PeriodMode::Full) {
    total = 3 * n;  // x, mid, x''
    base_off = 0;
    rc_off = n;
    for (size_t v = 0; v < n; ++v) keep.push_back(v);
    for (size_t v = 0; v < n; ++v) keep.push_back(2 * n + v);
  } else {
    total = 2 * n;  // x, x'
    base_off = n;
    rc_off = 0;
    for (size_t v = 0; v < n; ++v) keep.push_back(v);
  }
  const Dbm& rm = rc.dbm();
  // k = 2j + r: all rates become even, so halving inside tightening stays affine in j.
  for (int r = 0; r < 2; ++r) {
    ExtParamDbm a(2 * total);
    for (size_t i = 0; i < base.dim(); ++i)
      for (size_t j = 0; j < base.dim(); ++j) {
        if (base.at(i, j).is_inf()) continue;
        Int l = rate.at(i, j).value();
        a.at(2 * base_off + i, 2 * base_off + j).push_back(ParamTerm(base.at(i, j).value() + r * l, 0, 2 * l));
      }
    for (size_t i = 0; i < rm.dim(); ++i)
      for (size_t j = 0; j < rm.dim(); ++j)
        if (rm.at(i, j).is_finite()) a.at(2 * rc_off + i, 2 * rc_off + j).push_back(ParamTerm(rm.at(i, j).value()));
    ExtParamDbm cl = param_fw(a);
    const size_t d = cl.dim();
    for (size_t i = 0; i < d; ++i)
      for (const auto& t : cl.at(i, i))
        if (!nonneg(t)) return false;
    // Tightening: m_ab := min(m_ab, floor(m_{a,bar a}/2) + floor(m_{bar b,b}/2)).
    std::vector<TermSet> halves(d);
    for (size_t i = 0; i < d; ++i)
      for (const auto& t : cl.at(i, bar(i))) halves[i].push_back(half(t));
    auto tight_entry = [&](size_t i, size_t j) {
      TermSet s = cl.at(i, j);
      for (const auto& h1 : halves[i])
        for (const auto& h2 : halves[bar(j)]) s.push_back(h1 + h2);
      return min_terms(s);
    };
    for (size_t i = 0; i < d; ++i)
      for (const auto& t : tight_entry(i, i))
        if (!nonneg(t)) return false;
    // Projection must equal the claimed next element: base + (1 + r) * rate + 2j * rate.
    std::vector<size_t> kd;
    for (size_t v : keep) {
      kd.push_back(2 * v);
      kd.push_back(2 * v + 1);
    }
    for (size_t p = 0; p < kd.size(); ++p)
      for (size_t q = 0; q < kd.size(); ++q) {
        TermSet got = tight_entry(kd[p], kd[q]);
        if (base.at(p, q).is_inf()) {
          if (!got.empty()) return false;
          continue;
        }
        Int l = rate.at(p, q).value();
        ParamTerm want(base.at(p, q).value() + (1 + r) * l, 0, 2 * l);
        if (got.size() != 1 || !(got[0] == want)) return false;
      }
  }
  return true;
}

PeriodResult detect_period(const Octagon& r, const DetectOptions& opt) {
  if (r.nvars() % 2 != 0) throw std::invalid_argument("detect_period: relation must have 2N variables");
  PeriodResult res;
  PowerSeq seq(r);
  const size_t n = r.nvars() / 2;
  for (long b = 1; b <= opt.max_b; ++b) {
    for (long c = 1; c <= opt.max_c; ++c) {
      check_cancel(opt);
      if (!seq.ensure(b + 4 * c - 1)) {
        // Powers past the least empty one are empty too; no period makes sense.
        res.status = PeriodStatus::NotStarConsistent;
        res.inconsistent_power = seq.inconsistent();
        return res;
      }
      std::vector<Dbm> rates;
      bool agree = true;
      for (long i = 0; i < c && agree; ++i) {
        Dbm d1, d2, d3;
        const long s = b + i;
        agree = difference(seq.elem(s, opt.mode).dbm(), seq.elem(s + c, opt.mode).dbm(), d1) &&
                difference(seq.elem(s + c, opt.mode).dbm(), seq.elem(s + 2 * c, opt.mode).dbm(), d2) &&
                difference(seq.elem(s + 2 * c, opt.mode).dbm(), seq.elem(s + 3 * c, opt.mode).dbm(), d3) &&
                d1 == d2 && d2 == d3;
        if (agree) rates.push_back(d1);
      }
      if (!agree) continue;
      const Octagon& rc = seq.rel(c);
      bool ok = true;
      for (long i = 0; i < c && ok; ++i)
        ok = verify_period_step(seq.elem(b + i, opt.mode).dbm(), rates[static_cast<size_t>(i)], rc, opt.mode);
      if (!ok) continue;
      res.status = PeriodStatus::Found;
      PeriodCertificate& cert = res.cert;
      cert.mode = opt.mode;
      cert.nvars = n;
      cert.b = b;
      cert.c = c;
      for (long m = 1; m < b; ++m) cert.prefix.push_back(seq.elem(m, opt.mode));
      for (long i = 0; i < c; ++i) cert.base.push_back(seq.elem(b + i, opt.mode));
      cert.rates = std::move(rates);
      return res;
    }
  }
  res.status = PeriodStatus::NotFound;
  return res;
}

std::vector<PreClosedForm::Bound> PreClosedForm::bounds() const {
  std::vector<Bound> out;
  const Dbm& m = base.dbm();
  for (size_t a = 0; a < m.dim(); ++a)
    for (size_t bb = 0; bb < m.dim(); ++bb) {
      if (a == bb || m.at(a, bb).is_inf()) continue;
      // y_a - y_b <= m; emit each coherent pair once.
      if (bar(bb) < a) continue;
      OctAtom at;
      at.i = static_cast<int>(a / 2);
      at.si = a % 2 == 0 ? 1 : -1;
      Int val = m.at(a, bb).value();
      Int d = rate.at(a, bb).value();
      if (bb == bar(a)) {
        at.c = floor_div(val, 2);
        d = floor_div(d, 2);
      } else {
        at.j = static_cast<int>(bb / 2);
        at.sj = bb % 2 == 0 ? -1 : 1;
        at.c = val;
      }
      out.push_back({at, d});
    }
  return out;
}

std::optional<PreClosedForm> pre_closed_form(const Octagon& r, const DetectOptions& opt) {
  DetectOptions o = opt;
  o.mode = PeriodMode::PreImage;
  PeriodResult pr = detect_period(r, o);
  PreClosedForm f;
  if (pr.status == PeriodStatus::NotStarConsistent) {
    f.empty = true;
    return f;
  }
  if (pr.status == PeriodStatus::NotFound) return std::nullopt;
  f.b = pr.cert.b;
  f.c = pr.cert.c;
  f.base = pr.cert.base[0];
  f.rate = pr.cert.rates[0];
  return f;
}

std::optional<Octagon> wnt_via_closed_form(const Octagon& r, const DetectOptions& opt) {
  const size_t n = r.nvars() / 2;
  auto f = pre_closed_form(r, opt);
  if (!f) return std::nullopt;
  if (f->empty) return Octagon::bottom(n);
  for (size_t a = 0; a < f->rate.dim(); ++a)
    for (size_t b = 0; b < f->rate.dim(); ++b)
      if (f->rate.at(a, b).is_finite() && f->rate.at(a, b) < XInt(0)) return Octagon::bottom(n);
  return f->base;
}

Dnf ParamOctUnion::to_dnf() const {
  const int nv = static_cast<int>(2 * nvars);
  Dnf out = reflexive ? rel_identity(static_cast<int>(nvars)) : Dnf::falsity(nv);
  for (const auto& o : octs) out = dnf_or(out, octagon_to_dnf(o));
  for (const auto& f : families) out = dnf_or(out, param_exists_k(f, true));
  return out;
}

std::optional<ParamOctUnion> transitive_closure(const Octagon& r, bool reflexive, const DetectOptions& opt) {
  DetectOptions o = opt;
  o.mode = PeriodMode::Full;
  ParamOctUnion u;
  u.nvars = r.nvars() / 2;
  u.reflexive = reflexive;
  PeriodResult pr = detect_period(r, o);
  if (pr.status == PeriodStatus::NotFound) return std::nullopt;
  if (pr.status == PeriodStatus::NotStarConsistent) {
    PowerSeq seq(r);
    seq.ensure(pr.inconsistent_power);
    for (long m = 1; m < pr.inconsistent_power; ++m) u.octs.push_back(seq.rel(m));
    return u;
  }
  u.octs = pr.cert.prefix;
  for (size_t i = 0; i < pr.cert.base.size(); ++i)
    u.families.push_back(ExtParamDbm::from_rates(pr.cert.base[i].dbm(), pr.cert.rates[i], 0));
  return u;
}

std::vector<Octagon> kleene_pre_sequence(const Octagon& r, long n) {
  if (n < 1) throw std::invalid_argument("kleene_pre_sequence: n must be positive");
  const size_t nv = r.nvars() / 2;
  std::vector<size_t> primed;
  for (size_t v = 0; v < nv; ++v) primed.push_back(nv + v);
  std::vector<Octagon> out;
  Octagon r1 = tight_close(r);
  Octagon p = r1;
  for (long m = 1; m <= n; ++m) {
    if (m > 1) p = p.is_bottom() ? p : oct_compose(p, r1);
    out.push_back(p.is_bottom() ? Octagon::bottom(nv) : oct_exists(p, primed));
  }
  return out;
}

}  // namespace cterm
