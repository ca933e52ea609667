#pragma once

#include <utility>
#include <vector>

#include "qdiff/fraction.hpp"
#include "qdiff/poly.hpp"
#include "qdiff/scalar.hpp"

namespace qdiff {

namespace detail {

// K[x] with K = Q(qt), cleared to Z[qt][x]: primitive PRS machinery. Naive
// monic Euclid over Q(qt) blows up doubly; pseudo-division over Z[qt] with
// content stripping keeps coefficients near the subresultant size.
using ZXPoly = std::vector<ZPoly>;  // index = x-degree

inline void zx_trim(ZXPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline ZPoly zx_content(const ZXPoly& p) {
  ZPoly g;
  for (const auto& c : p) {
    if (c.is_zero()) continue;
    g = ZPoly::gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

inline void zx_strip_content(ZXPoly& p) {
  ZPoly g = zx_content(p);
  if (g.is_zero() || g.is_one()) return;
  for (auto& c : p)
    if (!c.is_zero()) c = c.divided_exact(g);
}

// pseudo-remainder of a by b in x over Z[qt]
inline ZXPoly zx_prem(ZXPoly a, const ZXPoly& b) {
  const std::size_t db = b.size() - 1;
  const ZPoly& lc = b.back();
  while (a.size() > db) {
    const ZPoly t = a.back();
    const std::size_t k = a.size() - 1 - db;
    for (auto& c : a) c = c * lc;
    for (std::size_t i = 0; i <= db; ++i) a[k + i] -= t * b[i];
    zx_trim(a);
    if (a.empty()) break;
  }
  return a;
}

// clear a K[x]-polynomial to a primitive element of Z[qt][x]
inline ZXPoly zx_from(const Poly<Scalar>& p) {
  ZPoly den(1);
  for (const auto& c : p.coeffs())
    if (!c.is_zero()) den = ZPoly::lcm(den, c.den());
  ZXPoly out(p.coeffs().size());
  const Scalar dens{den};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (p.coeff(i).is_zero()) continue;
    const Scalar t = p.coeff(i) * dens;
    out[i] = t.num();
  }
  zx_trim(out);
  zx_strip_content(out);
  return out;
}

inline Poly<Scalar> zx_to(const ZXPoly& p) {
  std::vector<Scalar> c(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = Scalar(p[i]);
  return Poly<Scalar>(std::move(c));
}

// x-degree of gcd under the specialization qt -> t mod p, or -1 when a
// leading term degenerates. Specialization only enlarges the gcd, so 0
// certifies coprimality in Q(qt)[x].
inline long zx_gcd_degree_mod(const ZXPoly& a, const ZXPoly& b,
                              unsigned long t, unsigned long p) {
  auto mulmod = [p](unsigned long x, unsigned long y) {
    return static_cast<unsigned long>(
        (static_cast<unsigned __int128>(x) * y) % p);
  };
  auto evalq = [&](const ZPoly& c) {
    unsigned long acc = 0;
    const auto cm = c.coeffs_mod(p);
    for (std::size_t i = cm.size(); i-- > 0;) acc = (mulmod(acc, t) + cm[i]) % p;
    return acc;
  };
  auto specialize = [&](const ZXPoly& f) {
    std::vector<unsigned long> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = evalq(f[i]);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  };
  std::vector<unsigned long> u = specialize(a), v = specialize(b);
  if (u.size() != a.size() || v.size() != b.size()) return -1;
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
      unsigned long s = mulmod(u.back(), inv);
      const std::size_t k = u.size() - v.size();
      for (std::size_t i = 0; i < v.size(); ++i)
        u[k + i] = (u[k + i] + p - mulmod(s, v[i])) % p;
      while (!u.empty() && u.back() == 0) u.pop_back();
      if (u.empty()) break;
    }
    std::swap(u, v);
  }
  return static_cast<long>(u.size()) - 1;
}

// univariate polynomials over Q, for the evaluation-interpolation gcd
inline void qp_trim(std::vector<Rat>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// monic gcd over Q by Euclid (degrees here are small)
inline std::vector<Rat> qp_gcd(std::vector<Rat> u, std::vector<Rat> v) {
  qp_trim(u);
  qp_trim(v);
  while (!v.empty()) {
    const Rat inv = 1 / v.back();
    while (u.size() >= v.size()) {
      Rat t = u.back() * inv;
      const std::size_t k = u.size() - v.size();
      for (std::size_t i = 0; i < v.size(); ++i) u[k + i] -= t * v[i];
      qp_trim(u);
      if (u.empty()) break;
    }
    std::swap(u, v);
  }
  if (!u.empty()) {
    const Rat inv = 1 / u.back();
    for (auto& x : u) x *= inv;
  }
  return u;
}

inline long zx_max_qdeg(const ZXPoly& p) {
  long m = 0;
  for (const auto& c : p) m = std::max(m, c.degree());
  return m;
}

}  // namespace detail

// Gcd in Q(qt)[x] by evaluation-interpolation: a modular probe either
// certifies coprimality or gives the expected x-degree; the gcd itself is
// rebuilt from univariate images at qt = t via incremental Newton
// interpolation, normalized by the gcd of the leading coefficients, and the
// result is accepted only after an exact division check. Falls back to a
// primitive PRS if the point budget runs out.
template <>
inline Poly<Scalar> Poly<Scalar>::gcd(Poly<Scalar> a, Poly<Scalar> b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  detail::ZXPoly p = detail::zx_from(a);
  detail::ZXPoly q = detail::zx_from(b);
  if (p.size() < q.size()) std::swap(p, q);
  if (q.size() == 1) return Poly<Scalar>(Scalar(1));

  long dhat = -1;
  for (auto [t, prime] :
       {std::pair<unsigned long, unsigned long>{3, 1000000007ul},
        {5, 998244353ul},
        {11, 754974721ul}}) {
    dhat = detail::zx_gcd_degree_mod(p, q, t, prime);
    if (dhat >= 0) break;
  }
  if (dhat == 0) return Poly<Scalar>(Scalar(1));

  const ZPoly ell = ZPoly::gcd(p.back(), q.back());
  const long qdeg_budget =
      detail::zx_max_qdeg(p) + detail::zx_max_qdeg(q) + ell.degree() + 8;

  std::vector<Rat> ts;                           // interpolation nodes
  std::vector<std::vector<Rat>> newton;          // per x-coeff, divided diffs
  auto reset = [&]() {
    ts.clear();
    newton.clear();
  };
  auto eval_zx = [](const detail::ZXPoly& f, const Rat& t) {
    std::vector<Rat> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      out[i] = f[i].is_zero() ? Rat(0) : f[i].eval(t);
    detail::qp_trim(out);
    return out;
  };

  for (long tv = 2; tv < 2 * qdeg_budget + 16; ++tv) {
    const Rat t(tv);
    if (p.back().eval(t) == 0 || q.back().eval(t) == 0) continue;
    std::vector<Rat> u = detail::qp_gcd(eval_zx(p, t), eval_zx(q, t));
    const long d = static_cast<long>(u.size()) - 1;
    if (d == 0) return Poly<Scalar>(Scalar(1));
    if (dhat >= 0 && d > dhat) continue;  // unlucky point
    if (dhat < 0 || d < dhat) {
      dhat = d;
      reset();
    }
    const Rat scale = Rat(ell.eval(t));
    u.resize(static_cast<std::size_t>(dhat) + 1, Rat(0));
    if (newton.empty())
      newton.assign(static_cast<std::size_t>(dhat) + 1, {});
    bool all_zero_dd = true;
    for (std::size_t j = 0; j <= static_cast<std::size_t>(dhat); ++j) {
      Rat dd = u[j] * scale;
      for (std::size_t i = 0; i < ts.size(); ++i)
        dd = (dd - newton[j][i]) / (t - ts[i]);
      newton[j].push_back(dd);
      if (dd != 0) all_zero_dd = false;
    }
    ts.push_back(t);
    if (!all_zero_dd || ts.size() < 2) continue;

    // candidate assembled from the Newton form; verify by division
    std::vector<std::vector<Rat>> coeffs(newton.size());
    {
      std::vector<Rat> basis{Rat(1)};
      for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < newton.size(); ++j) {
          if (newton[j][i] == 0) continue;
          if (coeffs[j].size() < basis.size()) coeffs[j].resize(basis.size());
          for (std::size_t k = 0; k < basis.size(); ++k)
            coeffs[j][k] += newton[j][i] * basis[k];
        }
        // basis *= (y - t_i)
        basis.insert(basis.begin(), Rat(0));
        for (std::size_t k = 0; k + 1 < basis.size(); ++k)
          basis[k] -= ts[i] * basis[k + 1];
      }
    }
    Int den(1);
    for (const auto& cj : coeffs)
      for (const auto& r : cj)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den().get_mpz_t());
    detail::ZXPoly cand(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      std::vector<Int> ic(coeffs[j].size());
      for (std::size_t k = 0; k < coeffs[j].size(); ++k) {
        Rat scaled = coeffs[j][k] * Rat(den);
        ic[k] = scaled.get_num();
      }
      cand[j] = ZPoly(std::move(ic));
    }
    detail::zx_trim(cand);
    if (static_cast<long>(cand.size()) - 1 != dhat) continue;
    detail::zx_strip_content(cand);
    if (detail::zx_prem(p, cand).empty() && detail::zx_prem(q, cand).empty())
      return detail::zx_to(cand).monic();
  }

  // fallback: primitive PRS (unreachable in practice)
  while (!q.empty()) {
    detail::ZXPoly r = detail::zx_prem(p, q);
    detail::zx_strip_content(r);
    p = std::move(q);
    q = std::move(r);
  }
  return detail::zx_to(p).monic();
}

using XPoly = Poly<Scalar>;
using RatFun = Fraction<Scalar>;

}  // namespace qdiff
