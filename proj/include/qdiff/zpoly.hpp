#pragma once

#include <algorithm>
#include <cstddef>
#include <cstring>
#include <ostream>
#include <utility>
#include <vector>

#include "qdiff/numeric.hpp"

namespace qdiff {

// Dense univariate polynomial over Z. This is the coefficient workhorse of
// the whole library: elements of Q(qt) are stored as reduced fractions of
// ZPoly values. Multiplication switches to Kronecker substitution (pack the
// coefficients into one big integer and let GMP multiply) above a small
// degree threshold, and gcd is a primitive PRS with content extraction.
class ZPoly {
 public:
  ZPoly() = default;
  ZPoly(int v) { if (v != 0) c_.push_back(Int(v)); }
  explicit ZPoly(const Int& v) { if (v != 0) c_.push_back(v); }
  explicit ZPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

  static ZPoly monomial(const Int& coeff, std::size_t degree) {
    if (coeff == 0) return ZPoly();
    std::vector<Int> c(degree + 1);
    c[degree] = coeff;
    return ZPoly(std::move(c));
  }
  static ZPoly variable() { return monomial(1, 1); }

  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  // degree of the zero polynomial is -1
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  // order of vanishing at 0; 0 for the zero polynomial by convention
  std::size_t low_order() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) return i;
    return 0;
  }
  const Int& coeff(std::size_t i) const {
    static const Int zero(0);
    return i < c_.size() ? c_[i] : zero;
  }
  const Int& leading() const {
    static const Int zero(0);
    return c_.empty() ? zero : c_.back();
  }
  const std::vector<Int>& coeffs() const { return c_; }

  bool operator==(const ZPoly& o) const { return c_ == o.c_; }
  bool operator!=(const ZPoly& o) const { return !(*this == o); }

  ZPoly operator-() const {
    ZPoly r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }

  ZPoly& operator+=(const ZPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  ZPoly& operator-=(const ZPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
  friend ZPoly operator-(ZPoly a, const ZPoly& b) { return a -= b; }

  friend ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return ZPoly();
    if (a.c_.size() == 1) return b.scaled(a.c_[0]);
    if (b.c_.size() == 1) return a.scaled(b.c_[0]);
    if (std::min(a.c_.size(), b.c_.size()) >= kKroneckerThreshold)
      return mul_kronecker(a, b);
    return mul_schoolbook(a, b);
  }
  ZPoly& operator*=(const ZPoly& o) { return *this = *this * o; }

  ZPoly scaled(const Int& k) const {
    if (k == 0) return ZPoly();
    ZPoly r(*this);
    for (auto& x : r.c_) x *= k;
    return r;
  }

  // multiply by x^k
  ZPoly shifted_up(std::size_t k) const {
    if (is_zero() || k == 0) return *this;
    std::vector<Int> r(c_.size() + k);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
    return ZPoly(std::move(r));
  }
  // divide by x^k, requires ord >= k
  ZPoly shifted_down(std::size_t k) const {
    if (k == 0) return *this;
    if (is_zero()) return *this;
    if (low_order() < k) throw domain_error("ZPoly: shift below order");
    std::vector<Int> r(c_.begin() + static_cast<long>(k), c_.end());
    return ZPoly(std::move(r));
  }

  // substitute x -> x^s (exponent inflation)
  ZPoly inflated(std::size_t s) const {
    if (is_zero() || s == 1) return *this;
    std::vector<Int> r(static_cast<std::size_t>(degree()) * s + 1);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i * s] = c_[i];
    return ZPoly(std::move(r));
  }

  // substitute x -> k*x
  ZPoly dilated(const Int& k) const {
    ZPoly r(*this);
    Int p(1);
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
      r.c_[i] *= p;
      p *= k;
    }
    r.trim();
    return r;
  }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + Rat(c_[i]);
    return acc;
  }

  // gcd of the coefficients, nonnegative; 0 for the zero polynomial
  Int content() const {
    Int g(0);
    for (const auto& x : c_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }
  ZPoly primitive_part() const {
    if (is_zero()) return *this;
    Int g = content();
    if (leading() < 0) g = -g;
    return divided_by_const(g);
  }
  ZPoly divided_by_const(const Int& k) const {
    ZPoly r(*this);
    for (auto& x : r.c_) {
      Int t;
      mpz_divexact(t.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t());
      x = t;
    }
    return r;
  }

  // Euclidean division assuming it is exact over Z (throws otherwise).
  ZPoly divided_exact(const ZPoly& d) const {
    ZPoly q, r;
    if (!divmod_exact(*this, d, q, r) || !r.is_zero())
      throw domain_error("ZPoly: inexact division");
    return q;
  }

  // True division test: quotient and remainder over Z when the division
  // stays integral; returns false the moment a coefficient fails to divide.
  static bool divmod_exact(const ZPoly& a, const ZPoly& d, ZPoly& q, ZPoly& r) {
    if (d.is_zero()) throw domain_error("ZPoly: division by zero");
    r = a;
    q = ZPoly();
    const long dd = d.degree();
    if (a.degree() < dd) return true;
    std::vector<Int> qc(static_cast<std::size_t>(a.degree() - dd) + 1);
    while (!r.is_zero() && r.degree() >= dd) {
      Int t, rem;
      mpz_tdiv_qr(t.get_mpz_t(), rem.get_mpz_t(), r.leading().get_mpz_t(),
                  d.leading().get_mpz_t());
      if (rem != 0) return false;
      const std::size_t k = static_cast<std::size_t>(r.degree() - dd);
      qc[k] = t;
      for (std::size_t i = 0; i < d.c_.size(); ++i) r.c_[k + i] -= t * d.c_[i];
      r.trim();
    }
    q = ZPoly(std::move(qc));
    return true;
  }

  // Pseudo-remainder: lc(d)^(deg a - deg d + 1) * a  mod  d.
  static ZPoly prem(ZPoly a, const ZPoly& d) {
    const long dd = d.degree();
    if (a.degree() < dd) return a;
    const Int& lc = d.leading();
    while (!a.is_zero() && a.degree() >= dd) {
      const Int t = a.leading();
      const std::size_t k = static_cast<std::size_t>(a.degree() - dd);
      for (auto& x : a.c_) x *= lc;
      for (std::size_t i = 0; i < d.c_.size(); ++i) a.c_[k + i] -= t * d.c_[i];
      a.trim();
    }
    return a;
  }

  // coefficients mod p, for the modular gcd-degree probe
  std::vector<unsigned long> coeffs_mod(unsigned long p) const {
    std::vector<unsigned long> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) {
      unsigned long v = mpz_fdiv_ui(c_[i].get_mpz_t(), p);
      r[i] = v;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // monic gcd image mod p; empty vector flags a degenerate reduction
  static std::vector<unsigned long> gcd_image_mod(const ZPoly& a,
                                                  const ZPoly& b,
                                                  unsigned long p) {
    std::vector<unsigned long> u = a.coeffs_mod(p), v = b.coeffs_mod(p);
    if (static_cast<long>(u.size()) != a.degree() + 1 ||
        static_cast<long>(v.size()) != b.degree() + 1)
      return {};
    auto mulmod = [p](unsigned long x, unsigned long y) {
      return static_cast<unsigned long>(
          (static_cast<unsigned __int128>(x) * y) % p);
    };
    auto powmod = [&](unsigned long x, unsigned long e) {
      unsigned long r = 1;
      while (e) {
        if (e & 1) r = mulmod(r, x);
        x = mulmod(x, x);
        e >>= 1;
      }
      return r;
    };
    while (!v.empty()) {
      const unsigned long inv = powmod(v.back(), p - 2);
      while (u.size() >= v.size()) {
        unsigned long t = mulmod(u.back(), inv);
        const std::size_t k = u.size() - v.size();
        for (std::size_t i = 0; i < v.size(); ++i)
          u[k + i] = (u[k + i] + p - mulmod(t, v[i])) % p;
        while (!u.empty() && u.back() == 0) u.pop_back();
        if (u.empty()) break;
      }
      std::swap(u, v);
    }
    if (u.empty()) u.push_back(0);  // cannot happen for nonzero inputs
    const unsigned long inv = powmod(u.back(), p - 2);
    for (auto& x : u) x = mulmod(x, inv);
    return u;
  }

  // Modular gcd: images mod machine primes, normalized by gcd of the
  // leading coefficients, CRT-combined with symmetric lifts, and verified by
  // exact division. An image of degree zero certifies coprimality (reduction
  // mod p can only enlarge the gcd).
  static ZPoly gcd(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero()) return abs_normal(b);
    if (b.is_zero()) return abs_normal(a);
    Int ca = a.content(), cb = b.content();
    Int cg;
    mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    ZPoly p = a.divided_by_const(a.leading() < 0 ? -ca : ca);
    ZPoly q = b.divided_by_const(b.leading() < 0 ? -cb : cb);
    if (p.degree() < q.degree()) std::swap(p, q);
    if (q.degree() == 0) return ZPoly(cg);

    Int ell;
    mpz_gcd(ell.get_mpz_t(), p.leading().get_mpz_t(),
            q.leading().get_mpz_t());

    long best_deg = -1;
    std::vector<Int> acc;  // symmetric lifts of ell * (monic gcd image)
    Int modulus(1);
    ZPoly quo, rem;
    for (unsigned long prime : modular_primes()) {
      auto img = gcd_image_mod(p, q, prime);
      if (img.empty()) continue;
      const long d = static_cast<long>(img.size()) - 1;
      if (d == 0) return ZPoly(cg);
      if (best_deg >= 0 && d > best_deg) continue;  // unlucky prime
      const unsigned long ellp = mpz_fdiv_ui(ell.get_mpz_t(), prime);
      for (auto& x : img)
        x = static_cast<unsigned long>(
            (static_cast<unsigned __int128>(x) * ellp) % prime);
      bool changed = false;
      if (best_deg < 0 || d < best_deg) {
        best_deg = d;
        modulus = Int(static_cast<unsigned long>(prime));
        acc.assign(img.size(), Int(0));
        for (std::size_t i = 0; i < img.size(); ++i)
          acc[i] = symmetric_lift(Int(img[i]), modulus);
        changed = true;
      } else {
        // CRT combine
        Int newmod = modulus * Int(prime);
        for (std::size_t i = 0; i < acc.size(); ++i) {
          unsigned long cur = mpz_fdiv_ui(acc[i].get_mpz_t(), prime);
          unsigned long want = img[i];
          if (cur != want) {
            unsigned long minv = mod_inverse(
                mpz_fdiv_ui(modulus.get_mpz_t(), prime), prime);
            unsigned long delta = (want + prime - cur) % prime;
            unsigned long k = static_cast<unsigned long>(
                (static_cast<unsigned __int128>(delta) * minv) % prime);
            acc[i] += modulus * Int(k);
            changed = true;
          }
          acc[i] = symmetric_lift(acc[i], newmod);
        }
        modulus = newmod;
      }
      if (!changed) {
        ZPoly cand{std::vector<Int>(acc)};
        cand = cand.primitive_part();
        if (divmod_exact(p, cand, quo, rem) && rem.is_zero() &&
            divmod_exact(q, cand, quo, rem) && rem.is_zero())
          return cand.scaled(cg);
      }
    }
    // prime list exhausted (practically unreachable): primitive PRS
    while (!q.is_zero()) {
      ZPoly r = prem(p, q);
      p = std::move(q);
      q = r.primitive_part();
    }
    return p.scaled(cg);
  }

  static ZPoly lcm(const ZPoly& a, const ZPoly& b) {
    if (a.is_zero() || b.is_zero()) return ZPoly();
    ZPoly l = (a * b).divided_exact(gcd(a, b));
    return l.leading() < 0 ? -l : l;
  }

  std::size_t max_coeff_bits() const {
    std::size_t m = 0;
    for (const auto& x : c_) m = std::max(m, mpz_sizeinbase(x.get_mpz_t(), 2));
    return m;
  }

  friend std::ostream& operator<<(std::ostream& os, const ZPoly& p) {
    if (p.is_zero()) return os << "0";
    bool first = true;
    for (std::size_t i = p.c_.size(); i-- > 0;) {
      if (p.c_[i] == 0) continue;
      if (!first) os << (p.c_[i] > 0 ? "+" : "-");
      else if (p.c_[i] < 0) os << "-";
      Int a = abs(p.c_[i]);
      if (a != 1 || i == 0) os << a.get_str();
      if (i > 0) {
        if (a != 1) os << "*";
        os << "y";
        if (i > 1) os << "^" << i;
      }
      first = false;
    }
    return os;
  }

 private:
  static constexpr std::size_t kKroneckerThreshold = 24;

  std::vector<Int> c_;

  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  static const std::vector<unsigned long>& modular_primes() {
    static const std::vector<unsigned long> primes = [] {
      std::vector<unsigned long> out;
      Int p(1u << 30);
      for (int i = 0; i < 4096; ++i) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        out.push_back(p.get_ui());
      }
      return out;
    }();
    return primes;
  }

  static Int symmetric_lift(Int v, const Int& m) {
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    if (v * 2 > m) v -= m;
    return v;
  }

  static unsigned long mod_inverse(unsigned long x, unsigned long p) {
    // p prime
    unsigned long r = 1, e = p - 2;
    while (e) {
      if (e & 1)
        r = static_cast<unsigned long>(
            (static_cast<unsigned __int128>(r) * x) % p);
      x = static_cast<unsigned long>(
          (static_cast<unsigned __int128>(x) * x) % p);
      e >>= 1;
    }
    return r;
  }

  static ZPoly abs_normal(const ZPoly& a) {
    return a.leading() < 0 ? -a : a;
  }
  ZPoly primitive_part_signless() const {
    if (is_zero()) return *this;
    return divided_by_const(leading() < 0 ? -content() : content());
  }

  static ZPoly mul_schoolbook(const ZPoly& a, const ZPoly& b) {
    std::vector<Int> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j] == 0) continue;
        mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(),
                   b.c_[j].get_mpz_t());
      }
    }
    return ZPoly(std::move(r));
  }

  // Split into nonnegative parts, pack each into a single mpz at byte-aligned
  // stride, and let GMP's subquadratic multiplication do the work.
  static ZPoly mul_kronecker(const ZPoly& a, const ZPoly& b) {
    std::size_t bits = a.max_coeff_bits() + b.max_coeff_bits() + 1;
    std::size_t nmin = std::min(a.c_.size(), b.c_.size());
    std::size_t guard = 1;
    while ((1u << guard) < nmin) ++guard;
    bits += guard + 1;
    const std::size_t stride = (bits + 7) / 8;  // bytes per slot

    ZPoly ap, an, bp, bn;
    split_signs(a, ap, an);
    split_signs(b, bp, bn);

    Int pa = pack(ap, stride), na = pack(an, stride);
    Int pb = pack(bp, stride), nb = pack(bn, stride);

    Int pos = pa * pb + na * nb;
    Int neg = pa * nb + na * pb;

    const std::size_t rlen = a.c_.size() + b.c_.size() - 1;
    std::vector<Int> rp = unpack(pos, stride, rlen);
    std::vector<Int> rn = unpack(neg, stride, rlen);
    for (std::size_t i = 0; i < rlen; ++i) rp[i] -= rn[i];
    return ZPoly(std::move(rp));
  }

  static void split_signs(const ZPoly& a, ZPoly& pos, ZPoly& neg) {
    pos.c_.assign(a.c_.size(), Int(0));
    neg.c_.assign(a.c_.size(), Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] >= 0) pos.c_[i] = a.c_[i];
      else neg.c_[i] = -a.c_[i];
    }
    pos.trim();
    neg.trim();
  }

  static Int pack(const ZPoly& a, std::size_t stride) {
    if (a.is_zero()) return Int(0);
    std::vector<unsigned char> buf(a.c_.size() * stride, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      std::size_t count = 0;
      mpz_export(buf.data() + i * stride, &count, -1, 1, 0, 0,
                 a.c_[i].get_mpz_t());
    }
    Int r;
    mpz_import(r.get_mpz_t(), buf.size(), -1, 1, 0, 0, buf.data());
    return r;
  }

  static std::vector<Int> unpack(const Int& v, std::size_t stride,
                                 std::size_t n) {
    std::vector<unsigned char> buf(n * stride + stride, 0);
    std::size_t count = 0;
    mpz_export(buf.data(), &count, -1, 1, 0, 0, v.get_mpz_t());
    std::vector<Int> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      Int x;
      mpz_import(x.get_mpz_t(), stride, -1, 1, 0, 0, buf.data() + i * stride);
      r[i] = x;
    }
    return r;
  }
};

}  // namespace qdiff
