#pragma once

#include <string>
#include <vector>

#include "cterm/xint.hpp"

namespace cterm {

// Square matrix of bounds: entry (i, j) constrains v_i - v_j <= entry.
// A distinguished bottom value stands for an inconsistent constraint.
class Dbm {
 public:
  Dbm() = default;
  // Unconstrained matrix: zero diagonal, infinity elsewhere.
  explicit Dbm(size_t dim);
  static Dbm bottom(size_t dim);

  size_t dim() const { return dim_; }
  bool is_bottom() const { return bottom_; }
  bool is_closed() const { return closed_; }

  const XInt& at(size_t i, size_t j) const { return m_[i * dim_ + j]; }
  void set(size_t i, size_t j, const XInt& v) {
    m_[i * dim_ + j] = v;
    closed_ = false;
  }
  // Tightens entry (i, j) to min(current, v).
  void meet(size_t i, size_t j, const XInt& v) {
    if (v < m_[i * dim_ + j]) set(i, j, v);
  }

  bool operator==(const Dbm& o) const;
  bool operator!=(const Dbm& o) const { return !(*this == o); }
  std::string str() const;

  // Raw mutable access for algorithms that maintain the closed flag themselves.
  XInt* data() { return m_.data(); }
  void mark_closed(bool c) { closed_ = c; }

 private:
  size_t dim_ = 0;
  std::vector<XInt> m_;
  bool bottom_ = false;
  bool closed_ = false;
};

// Floyd-Warshall shortest-path closure; returns bottom on a negative cycle.
Dbm fw_close(const Dbm& m);
bool is_consistent(const Dbm& m);

// Entailment and equivalence of closed, consistent matrices (pointwise order).
bool dbm_leq(const Dbm& a, const Dbm& b);
bool dbm_eq(const Dbm& a, const Dbm& b);

// Keeps the listed indices (in order) of a closed matrix.
Dbm dbm_project(const Dbm& m, const std::vector<size_t>& keep);

// Composition of relation matrices over (x, x'), each of dimension 2N.
Dbm dbm_compose(const Dbm& a, const Dbm& b);
Dbm dbm_identity_relation(size_t n);

Dbm dbm_min(const Dbm& a, const Dbm& b);
// a + n * rate with infinity absorbing.
Dbm dbm_add_rate(const Dbm& a, const Dbm& rate, const Int& n);

}  // namespace cterm
