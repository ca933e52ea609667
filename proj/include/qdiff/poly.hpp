#pragma once

#include <ostream>
#include <utility>
#include <vector>

#include "qdiff/numeric.hpp"

namespace qdiff {

// Dense univariate polynomial over a field F (F needs +,-,*,/, is_zero(),
// construction from int, ==). Used for K[x] with F = Scalar and for
// Q(zeta_m)[x] in the nilpotent-reduction path.
template <class F>
class Poly {
 public:
  Poly() = default;
  Poly(int v) { if (v != 0) c_.push_back(F(v)); }
  Poly(const F& v) { if (!v.is_zero()) c_.push_back(v); }
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly monomial(const F& coeff, std::size_t degree) {
    if (coeff.is_zero()) return Poly();
    std::vector<F> c(degree + 1, F(0));
    c[degree] = coeff;
    return Poly(std::move(c));
  }
  static Poly variable() { return monomial(F(1), 1); }

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  std::size_t low_order() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!c_[i].is_zero()) return i;
    return 0;
  }
  const F& coeff(std::size_t i) const {
    static const F zero{0};
    return i < c_.size() ? c_[i] : zero;
  }
  const F& leading() const {
    static const F zero{0};
    return c_.empty() ? zero : c_.back();
  }
  const std::vector<F>& coeffs() const { return c_; }
  F constant_value() const { return c_.empty() ? F(0) : c_[0]; }

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly operator-() const {
    Poly r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), F(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), F(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j].is_zero()) continue;
        r[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return Poly(std::move(r));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const F& k) const {
    if (k.is_zero()) return Poly();
    Poly r(*this);
    for (auto& x : r.c_) x *= k;
    return r;
  }
  Poly shifted_up(std::size_t k) const {
    if (is_zero() || k == 0) return *this;
    std::vector<F> r(c_.size() + k, F(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
    return Poly(std::move(r));
  }
  Poly shifted_down(std::size_t k) const {
    if (k == 0 || is_zero()) return *this;
    if (low_order() < k) throw domain_error("Poly: shift below order");
    std::vector<F> r(c_.begin() + static_cast<long>(k), c_.end());
    return Poly(std::move(r));
  }

  // substitute x -> s*x
  Poly dilated(const F& s) const {
    Poly r(*this);
    F p(1);
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
      r.c_[i] *= p;
      p *= s;
    }
    r.trim();
    return r;
  }

  F eval(const F& x) const {
    F acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  static void divmod(const Poly& a, const Poly& d, Poly& q, Poly& r) {
    if (d.is_zero()) throw domain_error("Poly: division by zero");
    r = a;
    q = Poly();
    if (a.degree() < d.degree()) return;
    std::vector<F> qc(static_cast<std::size_t>(a.degree() - d.degree()) + 1,
                      F(0));
    const F inv_lead = F(1) / d.leading();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      F t = r.leading() * inv_lead;
      std::size_t k = static_cast<std::size_t>(r.degree() - d.degree());
      qc[k] = t;
      for (std::size_t i = 0; i < d.c_.size(); ++i)
        r.c_[k + i] -= t * d.c_[i];
      r.trim();
    }
    q = Poly(std::move(qc));
  }

  Poly divided_exact(const Poly& d) const {
    Poly q, r;
    divmod(*this, d, q, r);
    if (!r.is_zero()) throw domain_error("Poly: inexact division");
    return q;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(F(1) / leading());
  }

  // monic gcd via Euclid
  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly q, r;
      divmod(a, b, q, r);
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  static Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    return (a * b).divided_exact(gcd(a, b)).monic();
  }

 private:
  std::vector<F> c_;
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
};

}  // namespace qdiff
