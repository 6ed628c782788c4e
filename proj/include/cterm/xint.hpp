#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace cterm {

using Int = mpz_class;
using Rational = mpq_class;

// Floor division with a positive or negative divisor (rounds toward -inf).
Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
Int mod_pos(const Int& a, const Int& m);  // result in [0, |m|)

// Integer extended with +infinity. Values that fit in 64 bits avoid GMP.
class XInt {
 public:
  XInt() noexcept : small_(0), big_(nullptr), inf_(false) {}
  XInt(long v) noexcept : small_(v), big_(nullptr), inf_(false) {}  // NOLINT
  XInt(int v) noexcept : small_(v), big_(nullptr), inf_(false) {}   // NOLINT
  XInt(const Int& v);                                               // NOLINT
  XInt(const XInt& o);
  XInt(XInt&& o) noexcept : small_(o.small_), big_(o.big_), inf_(o.inf_) { o.big_ = nullptr; }
  XInt& operator=(const XInt& o);
  XInt& operator=(XInt&& o) noexcept;
  ~XInt() { delete big_; }

  static XInt inf() {
    XInt r;
    r.inf_ = true;
    return r;
  }

  bool is_inf() const { return inf_; }
  bool is_finite() const { return !inf_; }
  bool is_small() const { return !inf_ && big_ == nullptr; }
  int64_t small() const { return small_; }
  Int value() const;  // precondition: finite
  int sign() const;   // precondition: finite

  XInt operator+(const XInt& o) const;
  XInt operator-() const;  // precondition: finite
  XInt operator-(const XInt& o) const { return *this + (-o); }
  XInt operator*(const Int& k) const;  // inf * k = inf (k >= 0 expected for inf)

  bool operator==(const XInt& o) const;
  bool operator!=(const XInt& o) const { return !(*this == o); }
  bool operator<(const XInt& o) const;
  bool operator<=(const XInt& o) const { return !(o < *this); }
  bool operator>(const XInt& o) const { return o < *this; }
  bool operator>=(const XInt& o) const { return !(*this < o); }

  // floor(x / 2); inf stays inf.
  XInt half_floor() const;

  std::string str() const;

 private:
  void normalize();
  int64_t small_;
  Int* big_;
  bool inf_;
};

inline const XInt& xmin(const XInt& a, const XInt& b) { return b < a ? b : a; }
inline const XInt& xmax(const XInt& a, const XInt& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const XInt& v);

}  // namespace cterm
