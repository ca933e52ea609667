#pragma once

#include <utility>

#include "qdiff/poly.hpp"

namespace qdiff {

// Field of fractions of Poly<F>: reduced (gcd = 1) with monic denominator,
// so equality is componentwise. RatFun = Fraction<Scalar> realizes K(x).
template <class F>
class Fraction {
 public:
  using P = Poly<F>;

  Fraction() : num_(), den_(1) {}
  Fraction(int v) : num_(v), den_(1) {}
  Fraction(const F& v) : num_(v), den_(1) {}
  Fraction(P n) : num_(std::move(n)), den_(1) {}
  Fraction(P n, P d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw domain_error("Fraction: zero denominator");
    reduce();
  }

  static Fraction variable() { return Fraction(P::variable()); }

  const P& num() const { return num_; }
  const P& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  F constant_value() const {
    if (num_.degree() > 0 || den_.degree() > 0)
      throw domain_error("Fraction: not a constant");
    if (num_.is_zero()) return F(0);
    return num_.constant_value() / den_.constant_value();
  }

  // deg num - deg den
  long degree() const {
    if (is_zero()) throw domain_error("Fraction: degree of zero");
    return num_.degree() - den_.degree();
  }
  long order_at_zero() const {
    if (is_zero()) throw domain_error("Fraction: order of zero");
    return static_cast<long>(num_.low_order()) -
           static_cast<long>(den_.low_order());
  }

  bool operator==(const Fraction& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Fraction& o) const { return !(*this == o); }

  Fraction operator-() const {
    Fraction r(*this);
    r.num_ = -r.num_;
    return r;
  }
  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    P g = P::gcd(a.den_, b.den_);
    P da = a.den_.divided_exact(g), db = b.den_.divided_exact(g);
    P n = a.num_ * db + b.num_ * da;
    if (n.is_zero()) return Fraction();
    // da and db are coprime, and n is coprime to both; only the shared
    // factor g can cancel
    Fraction r;
    if (g.degree() > 0) {
      P g2 = P::gcd(n, g);
      if (g2.degree() > 0) {
        n = n.divided_exact(g2);
        g = g.divided_exact(g2);
      }
    }
    r.num_ = std::move(n);
    r.den_ = g * da * db;
    r.make_monic_den();
    return r;
  }
  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    return a + (-b);
  }
  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    if (a.is_zero() || b.is_zero()) return Fraction();
    P g1 = P::gcd(a.num_, b.den_);
    P g2 = P::gcd(b.num_, a.den_);
    Fraction r;
    r.num_ = a.num_.divided_exact(g1) * b.num_.divided_exact(g2);
    r.den_ = a.den_.divided_exact(g2) * b.den_.divided_exact(g1);
    r.make_monic_den();
    return r;
  }
  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.is_zero()) throw domain_error("Fraction: division by zero");
    Fraction inv;
    inv.num_ = b.den_;
    inv.den_ = b.num_;
    inv.make_monic_den();
    return a * inv;
  }
  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }
  Fraction& operator*=(const Fraction& o) { return *this = *this * o; }
  Fraction& operator/=(const Fraction& o) { return *this = *this / o; }

  Fraction inverse() const { return Fraction(1) / *this; }

  // scale by a field element (a unit, so no re-reduction needed)
  Fraction scaled(const F& k) const {
    if (k.is_zero()) return Fraction();
    Fraction r(*this);
    r.num_ = r.num_.scaled(k);
    return r;
  }

  Fraction pow(long e) const {
    if (e == 0) return Fraction(1);
    if (e < 0) return inverse().pow(-e);
    Fraction acc(1), base(*this);
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  // substitute x -> s*x
  Fraction dilated(const F& s) const {
    Fraction r;
    r.num_ = num_.dilated(s);
    r.den_ = den_.dilated(s);
    r.make_monic_den();
    return r;
  }

  F eval(const F& x) const {
    F d = den_.eval(x);
    if (d.is_zero()) throw domain_error("Fraction: evaluation at a pole");
    return num_.eval(x) / d;
  }

 private:
  P num_, den_;

  void reduce() {
    if (num_.is_zero()) {
      den_ = P(1);
      return;
    }
    P g = P::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_.divided_exact(g);
      den_ = den_.divided_exact(g);
    }
    make_monic_den();
  }
  void make_monic_den() {
    const F lead = den_.leading();
    if (!(lead == F(1))) {
      F inv = F(1) / lead;
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }
};

}  // namespace qdiff
