#include "cterm/dbm.hpp"

#include <sstream>
#include <stdexcept>

namespace cterm {

Dbm::Dbm(size_t dim) : dim_(dim), m_(dim * dim, XInt::inf()) {
  for (size_t i = 0; i < dim; ++i) m_[i * dim + i] = XInt(0);
  closed_ = true;
}

Dbm Dbm::bottom(size_t dim) {
  Dbm d(dim);
  d.bottom_ = true;
  d.closed_ = true;
  return d;
}

bool Dbm::operator==(const Dbm& o) const {
  if (dim_ != o.dim_) return false;
  if (bottom_ || o.bottom_) return bottom_ == o.bottom_;
  return m_ == o.m_;
}

std::string Dbm::str() const {
  if (bottom_) return "bottom";
  std::ostringstream os;
  for (size_t i = 0; i < dim_; ++i) {
    for (size_t j = 0; j < dim_; ++j) os << (j ? " " : "") << at(i, j);
    os << "\n";
  }
  return os.str();
}

Dbm fw_close(const Dbm& in) {
  if (in.is_bottom()) return in;
  const size_t n = in.dim();
  Dbm m = in;
  XInt* d = m.data();
  for (size_t i = 0; i < n; ++i) {
    XInt& dii = d[i * n + i];
    if (dii < XInt(0)) return Dbm::bottom(n);
    dii = XInt(0);
  }
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      const XInt& dik = d[i * n + k];
      if (dik.is_inf()) continue;
      for (size_t j = 0; j < n; ++j) {
        const XInt& dkj = d[k * n + j];
        if (dkj.is_inf()) continue;
        XInt s = dik + dkj;
        if (s < d[i * n + j]) d[i * n + j] = std::move(s);
      }
      if (d[i * n + i] < XInt(0)) return Dbm::bottom(n);
    }
  }
  m.mark_closed(true);
  return m;
}

bool is_consistent(const Dbm& m) { return !fw_close(m).is_bottom(); }

namespace {
void require_closed_consistent(const Dbm& a, const char* what) {
  if (a.is_bottom()) throw std::invalid_argument(std::string(what) + ": inconsistent matrix");
}
}  // namespace

bool dbm_leq(const Dbm& a0, const Dbm& b0) {
  require_closed_consistent(a0, "dbm_leq");
  require_closed_consistent(b0, "dbm_leq");
  if (a0.dim() != b0.dim()) throw std::invalid_argument("dbm_leq: dimension mismatch");
  Dbm a = a0.is_closed() ? a0 : fw_close(a0);
  Dbm b = b0.is_closed() ? b0 : fw_close(b0);
  require_closed_consistent(a, "dbm_leq");
  require_closed_consistent(b, "dbm_leq");
  for (size_t i = 0; i < a.dim(); ++i)
    for (size_t j = 0; j < a.dim(); ++j)
      if (b.at(i, j) < a.at(i, j)) return false;
  return true;
}

bool dbm_eq(const Dbm& a, const Dbm& b) { return dbm_leq(a, b) && dbm_leq(b, a); }

Dbm dbm_project(const Dbm& m, const std::vector<size_t>& keep) {
  if (!m.is_closed()) throw std::invalid_argument("dbm_project: matrix is not closed");
  if (m.is_bottom()) return Dbm::bottom(keep.size());
  Dbm r(keep.size());
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j) r.set(i, j, m.at(keep[i], keep[j]));
  r.mark_closed(true);
  return r;
}

Dbm dbm_compose(const Dbm& a, const Dbm& b) {
  if (a.dim() != b.dim() || a.dim() % 2 != 0) throw std::invalid_argument("dbm_compose: bad dimensions");
  const size_t n = a.dim() / 2;
  if (a.is_bottom() || b.is_bottom()) return Dbm::bottom(2 * n);
  // Indices 0..n-1: x, n..2n-1: middle, 2n..3n-1: x''.
  Dbm big(3 * n);
  for (size_t i = 0; i < 2 * n; ++i)
    for (size_t j = 0; j < 2 * n; ++j) {
      big.meet(i, j, a.at(i, j));
      big.meet(i + n, j + n, b.at(i, j));
    }
  Dbm c = fw_close(big);
  if (c.is_bottom()) return Dbm::bottom(2 * n);
  std::vector<size_t> keep;
  for (size_t i = 0; i < n; ++i) keep.push_back(i);
  for (size_t i = 0; i < n; ++i) keep.push_back(2 * n + i);
  return dbm_project(c, keep);
}

Dbm dbm_identity_relation(size_t n) {
  Dbm d(2 * n);
  for (size_t i = 0; i < n; ++i) {
    d.set(i, n + i, XInt(0));
    d.set(n + i, i, XInt(0));
  }
  return fw_close(d);
}

Dbm dbm_min(const Dbm& a, const Dbm& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dbm_min: dimension mismatch");
  if (a.is_bottom()) return a;
  if (b.is_bottom()) return b;
  Dbm r = a;
  for (size_t i = 0; i < a.dim(); ++i)
    for (size_t j = 0; j < a.dim(); ++j) r.meet(i, j, b.at(i, j));
  return r;
}

Dbm dbm_add_rate(const Dbm& a, const Dbm& rate, const Int& n) {
  if (a.dim() != rate.dim()) throw std::invalid_argument("dbm_add_rate: dimension mismatch");
  if (a.is_bottom()) return a;
  Dbm r(a.dim());
  for (size_t i = 0; i < a.dim(); ++i)
    for (size_t j = 0; j < a.dim(); ++j) {
      const XInt& v = a.at(i, j);
      const XInt& l = rate.at(i, j);
      if (v.is_inf() || l.is_inf()) {
        r.set(i, j, XInt::inf());
      } else {
        r.set(i, j, v + l * n);
      }
    }
  return r;
}

}  // namespace cterm
