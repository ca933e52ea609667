#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdiff/cyclotomic.hpp"
#include "qdiff/kx.hpp"
#include "qdiff/matrix.hpp"
#include "qdiff/qnumbers.hpp"
#include "qdiff/scalar.hpp"

namespace qdiff {

// A place of K = k(qt). Finite places carry a monic integer-primitive
// polynomial in qt; the q-adic and q^{-1}-adic places make up the infinite
// part of the family. cyclotomic_order = m is set exactly when v = Phi_m.
struct Place {
  enum class Kind { Finite, QAdic, QInverseAdic };

  Kind kind = Kind::Finite;
  ZPoly v;  // only for Finite
  std::optional<unsigned long> cyclotomic_order;

  static Place q_adic() { return Place{Kind::QAdic, ZPoly(), std::nullopt}; }
  static Place q_inverse_adic() {
    return Place{Kind::QInverseAdic, ZPoly(), std::nullopt};
  }
  static Place cyclotomic(unsigned long m) {
    return Place{Kind::Finite, cyclotomic_poly(m), m};
  }
  static Place finite(ZPoly poly) {
    if (poly.degree() < 1)
      throw domain_error("Place: uniformizer must be nonconstant");
    if (poly.degree() == 1 && poly.coeff(0) == 0)
      throw domain_error("Place: use q_adic for the place at q = 0");
    poly = poly.primitive_part();
    // recognize the cyclotomic uniformizers
    std::optional<unsigned long> cyc;
    for (unsigned long m = 1; m <= 6 * static_cast<unsigned long>(poly.degree()) + 36; ++m)
      if (static_cast<long>(euler_phi(m)) == poly.degree() &&
          cyclotomic_poly(m) == poly) {
        cyc = m;
        break;
      }
    return Place{Kind::Finite, std::move(poly), cyc};
  }

  long degree() const { return kind == Kind::Finite ? v.degree() : 1; }

  std::string name() const {
    switch (kind) {
      case Kind::QAdic: return "q";
      case Kind::QInverseAdic: return "1/q";
      default:
        if (cyclotomic_order) return "Phi_" + std::to_string(*cyclotomic_order);
        std::ostringstream os;
        os << v;
        return os.str();
    }
  }
};

// Log-norms are exact rationals in units of log(1/d): an element f has
// |f|_v = d^{-lognorm}. Finite places: lognorm = -(deg v)(ord_v f)/r; the
// q^{-1}-adic place: lognorm = (deg f)/r.
namespace detail {

// ord_v(p) for a primitive uniformizer v: by Gauss's lemma, rational
// divisibility by a primitive polynomial implies integral divisibility, so
// stepwise integer division never gives a false negative.
inline long ord_at(const ZPoly& p, const ZPoly& v) {
  long ord = 0;
  ZPoly cur = p, q, r;
  while (cur.degree() >= v.degree()) {
    if (!ZPoly::divmod_exact(cur, v, q, r) || !r.is_zero()) break;
    ++ord;
    cur = q;
  }
  return ord;
}

// Phi_m(2) from the Moebius product over 2^d - 1; used as a cheap
// divisibility pre-test before actual polynomial division.
inline Int cyclotomic_at_two(unsigned long m) {
  Int num(1), den(1);
  for (unsigned long d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    unsigned long rest = m / d;
    // Moebius of rest
    int mu = 1;
    unsigned long n = rest;
    for (unsigned long pr = 2; pr * pr <= n; ++pr) {
      if (n % pr == 0) {
        n /= pr;
        if (n % pr == 0) { mu = 0; break; }
        mu = -mu;
      }
    }
    if (mu != 0 && n > 1) mu = -mu;
    if (mu == 0) continue;
    Int t = int_pow(Int(2), d) - 1;
    if (mu > 0) num *= t;
    else den *= t;
  }
  return num / den;
}

// m such that Phi_m can divide a polynomial of degree D: phi(m) <= D forces
// m <= 6D + 36 throughout the range this library can ever touch (the first m
// with m/phi(m) >= 6 has phi(m) in the tens of millions).
inline unsigned long cyclotomic_index_bound(long degree) {
  return degree <= 0 ? 1 : static_cast<unsigned long>(6 * degree + 36);
}

// Full cyclotomic factor extraction: returns {m, ord} pairs and divides the
// factors out of p (p keeps whatever is left).
inline std::vector<std::pair<unsigned long, long>> strip_cyclotomic(ZPoly& p) {
  std::vector<std::pair<unsigned long, long>> out;
  if (p.degree() <= 0) return out;
  const unsigned long bound = cyclotomic_index_bound(p.degree());
  Int p_at_two;
  bool have_eval = false;
  for (unsigned long m = 1; m <= bound && p.degree() > 0; ++m) {
    if (static_cast<long>(euler_phi(m)) > p.degree()) continue;
    if (m > 2) {
      if (!have_eval) {
        p_at_two = p.eval(Rat(2)).get_num();
        have_eval = true;
      }
      Int phi2 = cyclotomic_at_two(m);
      if (phi2 != 0 && !mpz_divisible_p(p_at_two.get_mpz_t(), phi2.get_mpz_t()))
        continue;
    }
    long ord = 0;
    ZPoly q, r;
    const ZPoly phi = cyclotomic_poly(m);
    while (p.degree() >= phi.degree() &&
           ZPoly::divmod_exact(p, phi, q, r) && r.is_zero()) {
      ++ord;
      p = q;
      have_eval = false;
    }
    if (ord > 0) out.emplace_back(m, ord);
  }
  return out;
}

}  // namespace detail

inline long ord_at_place(const Scalar& f, const Place& p) {
  if (f.is_zero()) throw domain_error("ord: zero element");
  switch (p.kind) {
    case Place::Kind::QAdic:
      return f.qt_order();
    case Place::Kind::QInverseAdic:
      return -f.degree();
    default:
      if (p.cyclotomic_order)
        return cyclotomic_order(f.num(), *p.cyclotomic_order) -
               cyclotomic_order(f.den(), *p.cyclotomic_order);
      return detail::ord_at(f.num(), p.v) - detail::ord_at(f.den(), p.v);
  }
}

inline Rat log_norm(const Scalar& f, const Place& p, const Field& field = Field{}) {
  if (f.is_zero()) throw domain_error("log_norm: zero element");
  const Rat scale(1, field.r);
  return Rat(-p.degree()) * Rat(ord_at_place(f, p)) * scale;
}

inline Rat log_plus(const Rat& x) { return x > 0 ? x : Rat(0); }

// Gauss content of a polynomial in x over K: the scalar c with
// ord_v c = min_i ord_v(coefficient_i) at every finite place v. Computed as
// gcd of numerators over lcm of denominators; multiplicativity of Gauss
// norms makes the result independent of common polynomial factors.
inline Scalar gauss_content(const XPoly& p) {
  if (p.is_zero()) throw domain_error("gauss_content: zero polynomial");
  ZPoly den(1);
  for (const auto& c : p.coeffs())
    if (!c.is_zero()) den = ZPoly::lcm(den, c.den());
  ZPoly num;
  const Scalar dens{den};
  for (const auto& c : p.coeffs()) {
    if (c.is_zero()) continue;
    const Scalar t = c * dens;  // polynomial by construction
    num = ZPoly::gcd(num, t.num());
    if (num.is_one()) break;
  }
  return Scalar(num, den);
}

inline Scalar gauss_content(const RatFun& f) {
  if (f.is_zero()) throw domain_error("gauss_content: zero function");
  return gauss_content(f.num()) / gauss_content(f.den());
}

// Matrix Gauss norm is the max over entries, i.e. the min of entry orders:
// gcd of the entry contents.
inline Scalar gauss_content(const Matrix<RatFun>& m) {
  ZPoly num, den(1);
  bool any = false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).is_zero()) continue;
      any = true;
      const Scalar c = gauss_content(m(i, j));
      // gcd of fractions a/b, c/d = gcd(ad, cb)/(bd) reduced
      num = ZPoly::gcd(num * c.den(), c.num() * den);
      den = den * c.den();
      const ZPoly g = ZPoly::gcd(num, den);
      num = num.divided_exact(g);
      den = den.divided_exact(g);
    }
  if (!any) throw domain_error("gauss_content: zero matrix");
  return Scalar(num, den);
}

inline Rat gauss_log_norm(const RatFun& f, const Place& p,
                          const Field& field = Field{}) {
  return log_norm(gauss_content(f), p, field);
}

inline Rat gauss_log_norm(const Matrix<RatFun>& m, const Place& p,
                          const Field& field = Field{}) {
  return log_norm(gauss_content(m), p, field);
}

// ord_{Phi_kappa}([m]_q!) in closed form: floor(m/kappa) for kappa >= 2,
// and 0 at Phi_1 (each [n]_q evaluates to n != 0 at q = 1).
inline long qfact_ord_closed_form(unsigned long m, unsigned long kappa) {
  if (kappa == 0) throw domain_error("qfact: kappa must be positive");
  if (kappa == 1) return 0;
  return static_cast<long>(m / kappa);
}

inline Rat qfact_log_norm(unsigned long m, const Place& p,
                          const Field& field = Field{}) {
  if (field.r != 1)
    throw domain_error("qfact_log_norm: stated for the r = 1 field");
  switch (p.kind) {
    case Place::Kind::QAdic:
      return Rat(0);
    case Place::Kind::QInverseAdic:
      return Rat(static_cast<long>(m) * (static_cast<long>(m) - 1) / 2);
    default:
      if (!p.cyclotomic_order)
        return Rat(0);  // q-factorials are units off the cyclotomic set
      return Rat(-p.degree()) *
             Rat(qfact_ord_closed_form(m, *p.cyclotomic_order));
  }
}

// Product Formula by degree/order bookkeeping: the total finite-place
// log-norm of f plus the q-adic and q^{-1}-adic terms is zero.
struct ProductFormulaParts {
  Rat finite_total;     // all finite places v != q
  Rat q_adic;
  Rat q_inverse_adic;
  Rat sum() const { return finite_total + q_adic + q_inverse_adic; }
};

inline ProductFormulaParts product_formula_parts(const Scalar& f,
                                                 const Field& field = Field{}) {
  if (f.is_zero()) throw domain_error("product formula: zero element");
  const Rat scale(1, field.r);
  ProductFormulaParts parts;
  // total over finite v: -(deg - ord_qt) of num minus den
  const long num_eff = f.num().degree() - static_cast<long>(f.num().low_order());
  const long den_eff = f.den().degree() - static_cast<long>(f.den().low_order());
  parts.finite_total = Rat(-(num_eff - den_eff)) * scale;
  parts.q_adic = Rat(-f.qt_order()) * scale;
  parts.q_inverse_adic = Rat(f.degree()) * scale;
  return parts;
}

inline bool product_formula_check(const Scalar& f, const Field& field = Field{}) {
  return product_formula_parts(f, field).sum() == 0;
}

// ---------------------------------------------------------------------------
// Size machinery.
//
// The running data for sup_{s<=n} log^+ |y_s|_v summed over place classes.
// Everything reduces to bookkeeping on the reduced coefficients: the total
// over finite places is deg of the lcm of denominators (off qt), the
// cyclotomic subtotal is extracted by trial division by Phi_m, and the two
// infinite places read deg and ord_qt directly.
// ---------------------------------------------------------------------------

struct SizeRow {
  std::size_t n = 0;
  Rat cyclotomic;
  Rat noncyclotomic_finite;
  Rat infinite;
  Rat total() const { return cyclotomic + noncyclotomic_finite + infinite; }
};

struct SizeReport {
  std::vector<SizeRow> rows;  // rows[k] holds the partial sums at n = k+1
};

class SizeAccumulator {
 public:
  explicit SizeAccumulator(Field field = Field{}) : field_(field) {}

  // feed the reduced content scalar of the n-th coefficient (or matrix)
  void push(const Scalar& c) {
    if (!c.is_zero()) {
      ZPoly new_lcm = ZPoly::lcm(den_lcm_, c.den());
      if (new_lcm != den_lcm_) {
        ZPoly grown = new_lcm.divided_exact(den_lcm_);
        den_lcm_ = std::move(new_lcm);
        // account only for the freshly appearing factor
        const long qt_part = static_cast<long>(grown.low_order());
        ZPoly rest = grown.shifted_down(static_cast<std::size_t>(qt_part));
        finite_units_ += rest.degree();
        for (const auto& [m, ord] : detail::strip_cyclotomic(rest))
          cyc_units_ += static_cast<long>(euler_phi(m)) * ord;
      }
      max_deg_ = std::max(max_deg_, c.degree());
      min_ord_ = std::min(min_ord_, c.qt_order());
    }
    rows_.push_back(current_row(rows_.size() + 1));
  }

  SizeReport report() const { return SizeReport{rows_}; }

 private:
  SizeRow current_row(std::size_t n) const {
    SizeRow r;
    r.n = n;
    const Rat scale(1, field_.r);
    const Rat den(static_cast<long>(n));
    r.cyclotomic = Rat(cyc_units_) * scale / den;
    r.noncyclotomic_finite = Rat(finite_units_ - cyc_units_) * scale / den;
    r.infinite = (log_plus(Rat(max_deg_) * scale) +
                  log_plus(Rat(-min_ord_) * scale)) /
                 den;
    return r;
  }

  Field field_;
  ZPoly den_lcm_{1};
  long finite_units_ = 0;  // deg of the denominator lcm, qt-part removed
  long cyc_units_ = 0;     // cyclotomic part of the same
  long max_deg_ = 0;       // sup over s of deg y_s (only log^+ matters)
  long min_ord_ = 0;
  std::vector<SizeRow> rows_;
};

// Partial sums of the size of a coefficient prefix y_0..y_n.
inline SizeReport size_report(const std::vector<Scalar>& prefix,
                              const Field& field = Field{}) {
  if (prefix.empty()) throw domain_error("size_report: empty prefix");
  SizeAccumulator acc(field);
  for (const auto& y : prefix) acc.push(y);
  return acc.report();
}

// Per-place-class height sums for a coefficient family (h(g, .) and the
// h~(n, .) of the approximation machinery): same bookkeeping, single row.
struct HeightReport {
  Rat cyclotomic;
  Rat noncyclotomic_finite;
  Rat infinite;
  Rat total() const { return cyclotomic + noncyclotomic_finite + infinite; }
};

inline HeightReport heights(const std::vector<Scalar>& family,
                            const Field& field = Field{}) {
  if (family.empty()) throw domain_error("heights: empty family");
  SizeAccumulator acc(field);
  for (const auto& y : family) acc.push(y);
  SizeReport rep = acc.report();
  const SizeRow& last = rep.rows.back();
  const Rat n(static_cast<long>(last.n));
  return HeightReport{last.cyclotomic * n, last.noncyclotomic_finite * n,
                      last.infinite * n};
}

// h(g, v) for a single place.
inline Rat height_at_place(const std::vector<Scalar>& family, const Place& p,
                           const Field& field = Field{}) {
  Rat best(0);
  for (const auto& y : family) {
    if (y.is_zero()) continue;
    best = std::max(best, log_plus(log_norm(y, p, field)));
  }
  return best;
}

}  // namespace qdiff
