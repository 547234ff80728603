#pragma once
// Exact rational arithmetic backed by GMP. Values are always canonical:
// gcd(|num|, den) == 1 and den > 0.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alsv {

using Integer = mpz_class;

class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int v) : q_(v) {}
  Rational(long v) : q_(v) {}
  Rational(unsigned long v) : q_(v) {}
  Rational(const Integer& v) : q_(v) {}
  Rational(long num, long den) : q_(num, den) { canonicalize(); }
  Rational(const Integer& num, const Integer& den) : q_(num, den) { canonicalize(); }

  static Rational parse(const std::string& s) {
    Rational r;
    if (s.empty() || mpq_set_str(r.q_.get_mpq_t(), s.c_str(), 10) != 0)
      throw std::invalid_argument("bad rational literal: '" + s + "'");
    if (sgn(r.q_.get_den()) <= 0)
      throw std::invalid_argument("bad rational literal (denominator): '" + s + "'");
    r.q_.canonicalize();
    return r;
  }

  Integer num() const { return q_.get_num(); }
  Integer den() const { return q_.get_den(); }

  double to_double() const { return q_.get_d(); }
  // "num/den", or just "num" when den == 1.
  std::string str() const { return q_.get_str(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.q_ == 0) throw std::domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { Rational r; r.q_ = -a.q_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

  friend Rational abs(const Rational& a) { Rational r; r.q_ = ::abs(a.q_); return r; }
  int sign() const { return sgn(q_); }

  static Rational from_uint(uint64_t v) { return Rational(Integer(static_cast<unsigned long>(v))); }
  static Rational ratio(uint64_t num, uint64_t den) {
    return Rational(Integer(static_cast<unsigned long>(num)), Integer(static_cast<unsigned long>(den)));
  }

 private:
  void canonicalize() {
    if (sgn(q_.get_den()) == 0) throw std::domain_error("rational with zero denominator");
    q_.canonicalize();
  }
  mpq_class q_;
};

}  // namespace alsv
