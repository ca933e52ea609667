#pragma once

#include <map>
#include <mutex>
#include <ostream>
#include <utility>
#include <vector>

#include "qdiff/numeric.hpp"
#include "qdiff/scalar.hpp"
#include "qdiff/zpoly.hpp"

namespace qdiff {

inline unsigned long euler_phi(unsigned long m) {
  unsigned long result = m, n = m;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

namespace detail {
inline ZPoly cyclotomic_rec(unsigned long m,
                            std::map<unsigned long, ZPoly>& cache) {
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<Int> c(m + 1);
  c[0] = -1;
  c[m] = 1;
  ZPoly num{std::move(c)};  // x^m - 1
  for (unsigned long d = 1; d < m; ++d)
    if (m % d == 0) num = num.divided_exact(cyclotomic_rec(d, cache));
  cache.emplace(m, num);
  return num;
}
}  // namespace detail

// m-th cyclotomic polynomial: x^m - 1 divided by the Phi_d for proper
// divisors d; cached.
inline ZPoly cyclotomic_poly(unsigned long m) {
  if (m == 0) throw domain_error("cyclotomic_poly: m must be positive");
  static std::mutex mu;
  static std::map<unsigned long, ZPoly> cache;
  std::lock_guard<std::mutex> lk(mu);
  return detail::cyclotomic_rec(m, cache);
}

// ord_{Phi_m}(p): the exact power of Phi_m dividing the integer polynomial p.
// Phi_m is monic, so trial division over Z is lossless.
inline long cyclotomic_order(const ZPoly& p, unsigned long m) {
  if (p.is_zero()) throw domain_error("cyclotomic_order of zero");
  const ZPoly phi = cyclotomic_poly(m);
  long ord = 0;
  ZPoly cur = p, q, r;
  while (cur.degree() >= phi.degree()) {
    if (!ZPoly::divmod_exact(cur, phi, q, r) || !r.is_zero()) break;
    ++ord;
    cur = q;
  }
  return ord;
}

// An element of Q(zeta_m) = Q[t]/Phi_m(t). m == 0 encodes a plain rational
// constant that promotes on contact with a genuine residue element.
class CycElem {
 public:
  CycElem() : m_(0), c_{} {}
  CycElem(int v) : m_(0) { if (v != 0) c_.push_back(Rat(v)); }
  explicit CycElem(const Rat& v) : m_(0) { if (v != 0) c_.push_back(v); }
  CycElem(unsigned long m, std::vector<Rat> coeffs)
      : m_(m), c_(std::move(coeffs)) {
    reduce();
  }

  static CycElem zeta(unsigned long m) {
    if (m == 1) return CycElem(1);
    std::vector<Rat> c(2);
    c[1] = 1;
    return CycElem(m, std::move(c));
  }

  unsigned long order() const { return m_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const { return c_.empty(); }
  bool is_rational() const {
    return c_.size() <= 1;
  }
  Rat rational_value() const {
    if (!is_rational()) throw domain_error("CycElem: not rational");
    return c_.empty() ? Rat(0) : c_[0];
  }

  bool operator==(const CycElem& o) const {
    if (is_zero() && o.is_zero()) return true;
    return compatible(o) && c_ == o.c_;
  }
  bool operator!=(const CycElem& o) const { return !(*this == o); }

  CycElem operator-() const {
    CycElem r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend CycElem operator+(const CycElem& a, const CycElem& b) {
    CycElem r = promote(a, b);
    const CycElem bb = promote(b, a);
    if (r.c_.size() < bb.c_.size()) r.c_.resize(bb.c_.size());
    for (std::size_t i = 0; i < bb.c_.size(); ++i) r.c_[i] += bb.c_[i];
    r.reduce();
    return r;
  }
  friend CycElem operator-(const CycElem& a, const CycElem& b) {
    return a + (-b);
  }
  friend CycElem operator*(const CycElem& a, const CycElem& b) {
    if (a.is_zero() || b.is_zero()) return CycElem();
    CycElem aa = promote(a, b), bb = promote(b, a);
    std::vector<Rat> prod(aa.c_.size() + bb.c_.size() - 1);
    for (std::size_t i = 0; i < aa.c_.size(); ++i)
      for (std::size_t j = 0; j < bb.c_.size(); ++j)
        prod[i + j] += aa.c_[i] * bb.c_[j];
    CycElem r(std::max(a.m_, b.m_), std::move(prod));
    return r;
  }
  friend CycElem operator/(const CycElem& a, const CycElem& b) {
    return a * b.inverse();
  }
  CycElem& operator+=(const CycElem& o) { return *this = *this + o; }
  CycElem& operator-=(const CycElem& o) { return *this = *this - o; }
  CycElem& operator*=(const CycElem& o) { return *this = *this * o; }
  CycElem& operator/=(const CycElem& o) { return *this = *this / o; }

  // inverse via extended Euclid against Phi_m over Q
  CycElem inverse() const {
    if (is_zero()) throw domain_error("CycElem: inverse of zero");
    if (m_ == 0 || is_rational()) {
      CycElem r(*this);
      if (r.c_.empty()) throw domain_error("CycElem: inverse of zero");
      r.c_[0] = 1 / r.c_[0];
      r.c_.resize(1);
      return r;
    }
    std::vector<Rat> phi = modulus_coeffs(m_);
    // extended gcd: find u with u * this = 1 mod Phi_m
    std::vector<Rat> r0 = phi, r1 = c_;
    std::vector<Rat> s0 = {}, s1 = {Rat(1)};
    while (!r1.empty()) {
      auto [quo, rem] = poly_divmod(r0, r1);
      std::vector<Rat> s2 = poly_sub(s0, poly_mul(quo, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 is a nonzero constant (Phi_m irreducible over Q)
    if (r0.size() != 1)
      throw domain_error("CycElem: modulus not coprime (internal)");
    Rat inv_lead = 1 / r0[0];
    for (auto& x : s0) x *= inv_lead;
    return CycElem(m_, std::move(s0));
  }

  friend std::ostream& operator<<(std::ostream& os, const CycElem& e) {
    if (e.is_zero()) return os << "0";
    bool first = true;
    for (std::size_t i = e.c_.size(); i-- > 0;) {
      if (e.c_[i] == 0) continue;
      if (!first) os << " + ";
      os << e.c_[i].get_str();
      if (i > 0) os << "*z^" << i;
      first = false;
    }
    return os;
  }

 private:
  unsigned long m_;
  std::vector<Rat> c_;

  bool compatible(const CycElem& o) const {
    return m_ == 0 || o.m_ == 0 || m_ == o.m_;
  }
  static CycElem promote(const CycElem& a, const CycElem& b) {
    if (!a.compatible(b)) throw domain_error("CycElem: mixed residue fields");
    CycElem r(a);
    r.m_ = std::max(a.m_, b.m_);
    return r;
  }

  static std::vector<Rat> modulus_coeffs(unsigned long m) {
    const ZPoly phi = cyclotomic_poly(m);
    std::vector<Rat> c(phi.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = Rat(phi.coeff(i));
    return c;
  }

  static void trim(std::vector<Rat>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  }
  static std::vector<Rat> poly_mul(const std::vector<Rat>& a,
                                   const std::vector<Rat>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rat> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
  }
  static std::vector<Rat> poly_sub(const std::vector<Rat>& a,
                                   const std::vector<Rat>& b) {
    std::vector<Rat> r = a;
    if (r.size() < b.size()) r.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
  }
  static std::pair<std::vector<Rat>, std::vector<Rat>> poly_divmod(
      std::vector<Rat> a, const std::vector<Rat>& d) {
    std::vector<Rat> q;
    if (d.empty()) throw domain_error("CycElem: division by zero poly");
    if (a.size() >= d.size()) q.resize(a.size() - d.size() + 1);
    while (a.size() >= d.size()) {
      Rat t = a.back() / d.back();
      std::size_t k = a.size() - d.size();
      q[k] = t;
      for (std::size_t i = 0; i < d.size(); ++i) a[k + i] -= t * d[i];
      trim(a);
      if (a.size() >= d.size() && a.back() == 0) trim(a);
    }
    return {std::move(q), std::move(a)};
  }

  void reduce() {
    if (m_ == 0) {
      trim(c_);
      return;
    }
    std::vector<Rat> phi = modulus_coeffs(m_);
    if (c_.size() >= phi.size()) {
      auto [q, r] = poly_divmod(std::move(c_), phi);
      (void)q;
      c_ = std::move(r);
    }
    trim(c_);
  }
};

// Reduce f modulo Phi_m: the image of f in Q(zeta_m). Throws a "bad
// reduction" error when the denominator vanishes modulo Phi_m.
inline CycElem specialize_at_root(const Scalar& f, unsigned long m) {
  auto reduce_zpoly = [m](const ZPoly& p) {
    std::vector<Rat> c(p.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = Rat(p.coeff(i));
    return CycElem(m, std::move(c));
  };
  CycElem den = reduce_zpoly(f.den());
  if (den.is_zero())
    throw domain_error("bad reduction: denominator vanishes modulo Phi_" +
                       std::to_string(m));
  return reduce_zpoly(f.num()) / den;
}

}  // namespace qdiff
