#include "cterm/xint.hpp"

#include <ostream>
#include <stdexcept>

namespace cterm {

Int floor_div(const Int& a, const Int& b) {
  if (b == 0) throw std::domain_error("division by zero");
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  if (b == 0) throw std::domain_error("division by zero");
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  Int am = abs(m);
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), am.get_mpz_t());
  return r;
}

XInt::XInt(const Int& v) : small_(0), big_(nullptr), inf_(false) {
  if (v.fits_slong_p()) {
    small_ = v.get_si();
  } else {
    big_ = new Int(v);
  }
}

XInt::XInt(const XInt& o) : small_(o.small_), big_(o.big_ ? new Int(*o.big_) : nullptr), inf_(o.inf_) {}

XInt& XInt::operator=(const XInt& o) {
  if (this == &o) return *this;
  small_ = o.small_;
  inf_ = o.inf_;
  if (o.big_) {
    if (big_) {
      *big_ = *o.big_;
    } else {
      big_ = new Int(*o.big_);
    }
  } else {
    delete big_;
    big_ = nullptr;
  }
  return *this;
}

XInt& XInt::operator=(XInt&& o) noexcept {
  if (this == &o) return *this;
  delete big_;
  small_ = o.small_;
  inf_ = o.inf_;
  big_ = o.big_;
  o.big_ = nullptr;
  return *this;
}

void XInt::normalize() {
  if (big_ && big_->fits_slong_p()) {
    small_ = big_->get_si();
    delete big_;
    big_ = nullptr;
  }
}

Int XInt::value() const {
  if (inf_) throw std::logic_error("value() of infinity");
  if (big_) return *big_;
  return Int(static_cast<long>(small_));
}

int XInt::sign() const {
  if (inf_) throw std::logic_error("sign() of infinity");
  if (big_) return sgn(*big_);
  return (small_ > 0) - (small_ < 0);
}

XInt XInt::operator+(const XInt& o) const {
  if (inf_ || o.inf_) return inf();
  if (!big_ && !o.big_) {
    int64_t r;
    if (!__builtin_add_overflow(small_, o.small_, &r)) return XInt(static_cast<long>(r));
  }
  XInt res(Int(value() + o.value()));
  return res;
}

XInt XInt::operator-() const {
  if (inf_) throw std::logic_error("negating infinity");
  if (!big_ && small_ != INT64_MIN) return XInt(static_cast<long>(-small_));
  return XInt(Int(-value()));
}

XInt XInt::operator*(const Int& k) const {
  if (inf_) return inf();
  if (!big_ && k.fits_slong_p()) {
    int64_t r;
    if (!__builtin_mul_overflow(small_, static_cast<int64_t>(k.get_si()), &r)) return XInt(static_cast<long>(r));
  }
  return XInt(Int(value() * k));
}

bool XInt::operator==(const XInt& o) const {
  if (inf_ || o.inf_) return inf_ == o.inf_;
  if (!big_ && !o.big_) return small_ == o.small_;
  return value() == o.value();
}

bool XInt::operator<(const XInt& o) const {
  if (inf_) return false;
  if (o.inf_) return true;
  if (!big_ && !o.big_) return small_ < o.small_;
  return value() < o.value();
}

XInt XInt::half_floor() const {
  if (inf_) return inf();
  if (!big_) {
    int64_t q = small_ >= 0 ? small_ / 2 : -((-(small_ + 1)) / 2) - 1;
    return XInt(static_cast<long>(q));
  }
  return XInt(floor_div(*big_, 2));
}

std::string XInt::str() const {
  if (inf_) return "inf";
  if (big_) return big_->get_str();
  return std::to_string(small_);
}

std::ostream& operator<<(std::ostream& os, const XInt& v) { return os << v.str(); }

}  // namespace cterm
