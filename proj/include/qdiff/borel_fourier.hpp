#pragma once

#include <utility>
#include <vector>

#include "qdiff/qnumbers.hpp"
#include "qdiff/series.hpp"
#include "qdiff/skew.hpp"

namespace qdiff {

// Formal q-Borel transforms: coefficientwise weights with re-indexing into
// inverse powers of z.
//   plus:  a_n -> [n]_q! a_n z^{-n-1}
//   sharp: a_n -> q^{n(n-1)/2} a_n z^{-n-1}
inline InverseSeriesPrefix borel_plus(const SeriesPrefix& f,
                                      const Field& field = Field{}) {
  std::vector<Scalar> c(f.coeffs().size());
  for (std::size_t n = 0; n < c.size(); ++n)
    c[n] = q_factorial(n, field) * f.coeff(n);
  return InverseSeriesPrefix(std::move(c));
}

inline InverseSeriesPrefix borel_sharp(const SeriesPrefix& f,
                                       const Field& field = Field{}) {
  std::vector<Scalar> c(f.coeffs().size());
  for (std::size_t n = 0; n < c.size(); ++n)
    c[n] = field.q_triangle(static_cast<long>(n)) * f.coeff(n);
  return InverseSeriesPrefix(std::move(c));
}

namespace detail {

// Monomial expansion of an operator with polynomial coefficients:
// terms (i, j, scalar) with scalar * x^j * D^i.
struct OpMonomial {
  std::size_t gen_pow;
  std::size_t var_pow;
  Scalar c;
};

inline std::vector<OpMonomial> monomials(const SkewOperator& op) {
  std::vector<OpMonomial> out;
  for (std::size_t i = 0; i < op.coeffs().size(); ++i) {
    const RatFun& ci = op.coeff(i);
    if (ci.is_zero()) continue;
    if (!ci.is_polynomial())
      throw domain_error("fourier: operator must have polynomial coefficients");
    XPoly p = ci.num();
    if (!(ci.den().coeff(0) == Scalar(1)))
      p = p.scaled(Scalar(1) / ci.den().coeff(0));
    for (std::size_t j = 0; j < p.coeffs().size(); ++j)
      if (!p.coeff(j).is_zero()) out.push_back({i, j, p.coeff(j)});
  }
  return out;
}

// Generic ring-morphism image: substitute the generator and variable images
// and multiply out in the target ring. phi(x^j D^i) = img_var^j . img_gen^i.
inline SkewOperator substitute(const SkewOperator& op,
                               const SkewOperator& img_var,
                               const SkewOperator& img_gen) {
  SkewOperator out = SkewOperator::zero(img_var.form(), img_var.shift(),
                                        img_var.field(), img_var.var());
  for (const auto& mono : monomials(op)) {
    SkewOperator term =
        img_var.pow(mono.var_pow) * img_gen.pow(mono.gen_pow);
    out = out + term.scaled(RatFun(mono.c));
  }
  return out;
}

}  // namespace detail

// F_{q+}: K[x, d_q] -> K[z, d_p],  d_q -> z,  x -> -p d_p  (p = 1/q).
inline SkewOperator fourier_plus(const SkewOperator& op) {
  if (op.form() != OpForm::Dq)
    throw domain_error("fourier_plus: dq-form operator required");
  const Scalar p = op.shift().inverse();
  const Field f = op.field();
  SkewOperator z = SkewOperator::function(RatFun::variable(), OpForm::Dq, p,
                                          f, OpVar::Z);
  SkewOperator dp =
      SkewOperator::generator(OpForm::Dq, p, f, OpVar::Z).scaled(RatFun(-p));
  // img_var = -p d_p, img_gen = z
  return detail::substitute(op, dp, z);
}

// F_{q#}: K[x, sigma_q] -> K[1/z, sigma_p],  sigma_q -> p sigma_p,
// x -> (1/(qz)) sigma_p.
inline SkewOperator fourier_sharp(const SkewOperator& op) {
  if (op.form() != OpForm::Sigma)
    throw domain_error("fourier_sharp: sigma-form operator required");
  const Scalar q = op.shift();
  const Scalar p = q.inverse();
  const Field f = op.field();
  SkewOperator sp = SkewOperator::generator(OpForm::Sigma, p, f, OpVar::Z);
  SkewOperator img_var =
      sp.scaled(RatFun(XPoly(Scalar(1)), XPoly::monomial(q, 1)));  // (1/(qz)) sigma_p
  SkewOperator img_gen = sp.scaled(RatFun(p));
  return detail::substitute(op, img_var, img_gen);
}

// F_{q+}^{-1} = lambda . F_{p+} with lambda: d_q -> -(1/q) d_q, x -> -q x.
inline SkewOperator fourier_plus_inverse(const SkewOperator& op) {
  if (op.form() != OpForm::Dq || op.var() != OpVar::Z)
    throw domain_error("fourier_plus_inverse: operator in K[z, d_p] required");
  const Scalar p = op.shift();
  const Scalar q = p.inverse();
  const Field f = op.field();
  // F_{p+}: d_p -> x, z -> -q d_q, landing in K[x, d_q]
  SkewOperator x_img = SkewOperator::function(RatFun::variable(), OpForm::Dq,
                                              q, f, OpVar::X);
  SkewOperator dq_gen = SkewOperator::generator(OpForm::Dq, q, f, OpVar::X);
  SkewOperator fp = detail::substitute(op, dq_gen.scaled(RatFun(-q)), x_img);
  // lambda
  SkewOperator lam_var = SkewOperator::function(
      RatFun::variable().scaled(-q), OpForm::Dq, q, f, OpVar::X);
  SkewOperator lam_gen = dq_gen.scaled(RatFun(-q.inverse()));
  return detail::substitute(fp, lam_var, lam_gen);
}

// F_{q#} sends x^u sigma_q^i to q^{u(u-3)/2 - i} z^{-u} sigma_p^{i+u}
// (derived from the generator images; the factor is pinned by a forward
// round-trip test). The monomial map (i, u) -> (i + u, u) is injective, so
// the inverse on the cone deg_{1/z} a_w <= w reads coefficients off one at
// a time.
inline Scalar sharp_monomial_factor(const Scalar& q, long i, long u) {
  return q.pow(u * (u - 3) / 2 - i);
}

inline SkewOperator fourier_sharp_inverse(const SkewOperator& op) {
  if (op.form() != OpForm::Sigma || op.var() != OpVar::Z)
    throw domain_error(
        "fourier_sharp_inverse: operator in K[1/z, sigma_p] required");
  const Scalar p = op.shift();
  const Scalar q = p.inverse();
  const Field f = op.field();
  const long max_order = op.order();
  if (max_order < 0) return SkewOperator::zero(OpForm::Sigma, q, f, OpVar::X);
  std::vector<RatFun> out(static_cast<std::size_t>(max_order) + 1);
  for (std::size_t w = 0; w < op.coeffs().size(); ++w) {
    const RatFun& cw = op.coeff(w);
    if (cw.is_zero()) continue;
    // cw must lie in K[1/z]: a z-power denominator, num degree <= its degree
    const XPoly& num = cw.num();
    const XPoly& den = cw.den();
    if (den.low_order() != static_cast<std::size_t>(den.degree()))
      throw domain_error("fourier_sharp_inverse: coefficient not in K[1/z]");
    const long k = den.degree();
    const Scalar dc = den.leading();
    for (std::size_t j = 0; j < num.coeffs().size(); ++j) {
      if (num.coeff(j).is_zero()) continue;
      const long zexp = static_cast<long>(j) - k;
      if (zexp > 0)
        throw domain_error("fourier_sharp_inverse: coefficient not in K[1/z]");
      const long u = -zexp;
      if (u > static_cast<long>(w))
        throw domain_error(
            "fourier_sharp_inverse: not in the image cone (deg_{1/z} a_i > i); "
            "pre-compose with a power of sigma_p");
      const long i = static_cast<long>(w) - u;
      const Scalar c = (num.coeff(j) / dc) / sharp_monomial_factor(q, i, u);
      out[static_cast<std::size_t>(i)] +=
          RatFun(XPoly::monomial(c, static_cast<std::size_t>(u)));
    }
  }
  return SkewOperator(OpForm::Sigma, std::move(out), q, f, OpVar::X);
}

// S . F_{q+}: d_q -> 1/x, x -> x^2 d_q  (same variable).
inline SkewOperator s_fourier_plus(const SkewOperator& op) {
  if (op.form() != OpForm::Dq)
    throw domain_error("s_fourier_plus: dq-form operator required");
  const Scalar q = op.shift();
  const Field f = op.field();
  SkewOperator inv_x = SkewOperator::function(
      RatFun(XPoly(Scalar(1)), XPoly::variable()), OpForm::Dq, q, f, op.var());
  SkewOperator x2d =
      SkewOperator(OpForm::Dq, {RatFun(), RatFun(XPoly::monomial(Scalar(1), 2))},
                   q, f, op.var());
  return detail::substitute(op, x2d, inv_x);
}

// S . F_{q#}: sigma_q -> (1/q) sigma_q, x -> (x/q) sigma_q.
inline SkewOperator s_fourier_sharp(const SkewOperator& op) {
  if (op.form() != OpForm::Sigma)
    throw domain_error("s_fourier_sharp: sigma-form operator required");
  const Scalar q = op.shift();
  const Field f = op.field();
  SkewOperator sg = SkewOperator::generator(OpForm::Sigma, q, f, op.var());
  SkewOperator img_var =
      sg.scaled(RatFun(XPoly::monomial(q.inverse(), 1)));  // (x/q) sigma
  SkewOperator img_gen = sg.scaled(RatFun(q.inverse()));
  return detail::substitute(op, img_var, img_gen);
}

// Apply an operator in K[z, d_p] (polynomial coefficients in z) to a
// truncated inverse series. Returns the full Laurent window with the
// reliability cutoff induced by the truncation.
inline LaurentPrefix apply_laurent(const SkewOperator& op,
                                   const InverseSeriesPrefix& s) {
  if (op.form() != OpForm::Dq)
    throw domain_error("apply_laurent: dq-form operator required");
  const Scalar p = op.shift();
  LaurentPrefix out;
  long max_var_pow = 0;
  const auto monos = detail::monomials(op);
  for (const auto& m : monos)
    max_var_pow = std::max(max_var_pow, static_cast<long>(m.var_pow));
  // input exponents -1 .. -(depth+1) are known; exponents >= 0 are exactly 0
  const long depth = s.depth();
  out.min_reliable_exp = -(depth + 1) + max_var_pow;
  for (const auto& m : monos) {
    // m.c * z^j * d_p^i acting on coeff(n) z^{-n-1}
    for (long n = 0; n <= depth; ++n) {
      const Scalar& an = s.coeff(static_cast<std::size_t>(n));
      if (an.is_zero()) continue;
      // d_p^i z^e = [e]_p [e-1]_p ... [e-i+1]_p z^{e-i}
      long e = -n - 1;
      Scalar c = an;
      for (std::size_t t = 0; t < m.gen_pow; ++t) {
        c *= bracket_of(p, e);
        e -= 1;
      }
      out.add(e + static_cast<long>(m.var_pow), c * m.c);
    }
  }
  return out;
}

// Degree-nu trailing composition used in the compatibility lemma:
// d_p^nu . F_{q+}(N) annihilates the plus-Borel transform of any solution.
inline SkewOperator dp_power_compose(const SkewOperator& zop,
                                     std::size_t power) {
  SkewOperator dp = SkewOperator::generator(OpForm::Dq, zop.shift(),
                                            zop.field(), zop.var());
  return dp.pow(power) * zop;
}

}  // namespace qdiff
