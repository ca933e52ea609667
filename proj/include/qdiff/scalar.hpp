#pragma once

#include <ostream>
#include <string>
#include <utility>

#include "qdiff/numeric.hpp"
#include "qdiff/zpoly.hpp"

namespace qdiff {

// An element of the scalar field Q(qt), stored as a reduced fraction of
// integer polynomials in the field generator qt (with q = qt^r; the radical
// index r is carried by the Field context, not by individual elements, since
// arithmetic never depends on it). Invariants: gcd(num, den) = 1 including
// integer contents, den has positive leading coefficient, den != 0.
class Scalar {
 public:
  Scalar() : num_(), den_(1) {}
  Scalar(int v) : num_(v), den_(1) {}
  explicit Scalar(const Int& v) : num_(v), den_(1) {}
  explicit Scalar(const Rat& v) : num_(v.get_num()), den_(v.get_den()) {}
  explicit Scalar(ZPoly n) : num_(std::move(n)), den_(1) {}
  Scalar(ZPoly n, ZPoly d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw domain_error("Scalar: zero denominator");
    reduce();
  }

  // the field generator qt
  static Scalar qt() { return Scalar(ZPoly::variable()); }
  static Scalar qt_pow(long k) {
    if (k >= 0) return Scalar(ZPoly::monomial(1, static_cast<std::size_t>(k)));
    return Scalar(ZPoly(1), ZPoly::monomial(1, static_cast<std::size_t>(-k)));
  }

  const ZPoly& num() const { return num_; }
  const ZPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  // true iff num and den are both monomials c*qt^k (units at every finite
  // place other than the qt-adic one)
  bool is_qt_monomial() const {
    return !is_zero() &&
           num_.low_order() == static_cast<std::size_t>(num_.degree()) &&
           den_.low_order() == static_cast<std::size_t>(den_.degree());
  }

  // degree as a rational function: deg num - deg den (qt^{-1}-adic data)
  long degree() const {
    if (is_zero()) throw domain_error("Scalar: degree of zero");
    return num_.degree() - den_.degree();
  }
  // order of vanishing at qt = 0 (q-adic data)
  long qt_order() const {
    if (is_zero()) throw domain_error("Scalar: order of zero");
    return static_cast<long>(num_.low_order()) -
           static_cast<long>(den_.low_order());
  }

  bool operator==(const Scalar& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar operator-() const {
    Scalar r(*this);
    r.num_ = -r.num_;
    return r;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    ZPoly g = ZPoly::gcd(a.den_, b.den_);
    ZPoly da = a.den_.divided_exact(g);
    ZPoly db = b.den_.divided_exact(g);
    ZPoly n = a.num_ * db + b.num_ * da;
    if (n.is_zero()) return Scalar();
    // only the shared factor g can still divide n
    ZPoly g2 = ZPoly::gcd(n, g);
    Scalar r;
    if (g2.is_one()) {
      r.num_ = std::move(n);
      r.den_ = a.den_ * db;
    } else {
      r.num_ = n.divided_exact(g2);
      r.den_ = g.divided_exact(g2) * da * db;
    }
    r.normalize_sign();
    return r;
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_zero() || b.is_zero()) return Scalar();
    // cross-cancel: gcd(a.num, b.den) and gcd(b.num, a.den)
    ZPoly g1 = ZPoly::gcd(a.num_, b.den_);
    ZPoly g2 = ZPoly::gcd(b.num_, a.den_);
    Scalar r;
    r.num_ = a.num_.divided_exact(g1) * b.num_.divided_exact(g2);
    r.den_ = a.den_.divided_exact(g2) * b.den_.divided_exact(g1);
    r.normalize_sign();
    return r;
  }

  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw domain_error("Scalar: division by zero");
    Scalar binv;
    binv.num_ = b.den_;
    binv.den_ = b.num_;
    binv.normalize_sign();
    return a * binv;
  }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  Scalar inverse() const { return Scalar(1) / *this; }

  Scalar pow(long e) const {
    if (e == 0) return Scalar(1);
    if (e < 0) return inverse().pow(-e);
    Scalar acc(1), base(*this);
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
      if (k & 1) acc *= base;
      base *= base;
      k >>= 1;
    }
    return acc;
  }

  // substitute qt -> qt^s (field embedding k(qt) -> k(qt'), qt = qt'^s)
  Scalar inflated(std::size_t s) const {
    if (is_zero() || s == 1) return *this;
    Scalar r;
    r.num_ = num_.inflated(s);
    r.den_ = den_.inflated(s);
    return r;
  }

  Rat eval(const Rat& x) const {
    Rat d = den_.eval(x);
    if (d == 0) throw domain_error("Scalar: evaluation at a pole");
    return num_.eval(x) / d;
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    if (s.den_.is_one()) return os << s.num_;
    return os << "(" << s.num_ << ")/(" << s.den_ << ")";
  }

 private:
  ZPoly num_, den_;

  void reduce() {
    if (num_.is_zero()) {
      den_ = ZPoly(1);
      return;
    }
    ZPoly g = ZPoly::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_.divided_exact(g);
      den_ = den_.divided_exact(g);
    }
    normalize_sign();
  }
  void normalize_sign() {
    if (den_.leading() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }
};

// Field context: K = Q(qt) with q = qt^r. r = 1 is the plain Q(q) case.
struct Field {
  int r = 1;

  Scalar q() const { return Scalar::qt_pow(r); }
  Scalar q_pow(long k) const { return Scalar::qt_pow(k * r); }
  // q^{n(n-1)/2}, the sharp-Borel weight
  Scalar q_triangle(long n) const { return q_pow(n * (n - 1) / 2); }
  bool operator==(const Field& o) const { return r == o.r; }
};

}  // namespace qdiff
