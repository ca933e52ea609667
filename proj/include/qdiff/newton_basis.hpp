#pragma once

#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include "qdiff/linsolve.hpp"
#include "qdiff/newton_polygon.hpp"
#include "qdiff/qnumbers.hpp"
#include "qdiff/skew.hpp"

namespace qdiff {

// Truncated element of K[[x - xi]]_q: coefficients against the q-Newton
// basis T_n(x, xi) = (x - xi)(x - mu xi) ... (x - mu^{n-1} xi). The three
// structural rules drive everything:
//   d  T_n = [n]_mu T_{n-1}
//   x  T_n = T_{n+1} + mu^n xi T_n
//   s  T_n = mu^n T_n + mu^{n-1} (mu^n - 1) xi T_{n-1}
// (the shift rule is validated against direct polynomial expansion; an
// in-proof display of it elsewhere disagrees in exponents and is not used).
class NewtonSeries {
 public:
  NewtonSeries() = default;
  NewtonSeries(Scalar xi, Scalar twist, std::vector<Scalar> coeffs,
               Field field = Field{})
      : xi_(std::move(xi)),
        mu_(std::move(twist)),
        field_(field),
        c_(std::move(coeffs)) {
    if (xi_.is_zero()) throw domain_error("NewtonSeries: xi must be nonzero");
  }

  const Scalar& xi() const { return xi_; }
  const Scalar& twist() const { return mu_; }
  const Field& field() const { return field_; }
  long order() const { return static_cast<long>(c_.size()) - 1; }
  const Scalar& coeff(std::size_t n) const {
    static const Scalar zero;
    return n < c_.size() ? c_[n] : zero;
  }
  const std::vector<Scalar>& coeffs() const { return c_; }
  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }
  bool compatible(const NewtonSeries& o) const {
    return xi_ == o.xi_ && mu_ == o.mu_;
  }

  NewtonSeries truncated(std::size_t new_order) const {
    std::vector<Scalar> c(c_.begin(),
                          c_.begin() + std::min(c_.size(), new_order + 1));
    return NewtonSeries(xi_, mu_, std::move(c), field_);
  }

  friend NewtonSeries operator+(const NewtonSeries& a, const NewtonSeries& b) {
    if (!a.compatible(b)) throw domain_error("NewtonSeries: mixed rings");
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<Scalar> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = a.coeff(i) + b.coeff(i);
    return NewtonSeries(a.xi_, a.mu_, std::move(c), a.field_);
  }
  friend NewtonSeries operator-(const NewtonSeries& a, const NewtonSeries& b) {
    return a + b.scaled(Scalar(-1));
  }
  NewtonSeries scaled(const Scalar& k) const {
    std::vector<Scalar> c(c_);
    for (auto& x : c) x *= k;
    return NewtonSeries(xi_, mu_, std::move(c), field_);
  }

  // multiplication by x: no truncation loss
  NewtonSeries times_x() const {
    std::vector<Scalar> c(c_.size(), Scalar(0));
    for (std::size_t n = 0; n < c_.size(); ++n) {
      if (c_[n].is_zero()) continue;
      c[n] += mu_.pow(static_cast<long>(n)) * xi_ * c_[n];
      if (n + 1 < c.size()) c[n + 1] += c_[n];
    }
    return NewtonSeries(xi_, mu_, std::move(c), field_);
  }

  // twisted derivation: one coefficient of truncation is spent
  NewtonSeries derived() const {
    if (c_.empty()) throw domain_error("NewtonSeries: truncation underflow");
    std::vector<Scalar> c(c_.size() - 1, Scalar(0));
    for (std::size_t n = 0; n + 1 < c_.size(); ++n)
      c[n] = bracket_of(mu_, static_cast<long>(n + 1)) * c_[n + 1];
    return NewtonSeries(xi_, mu_, std::move(c), field_);
  }

  // shift sigma: one coefficient of truncation is spent
  NewtonSeries shifted() const {
    if (c_.empty()) throw domain_error("NewtonSeries: truncation underflow");
    std::vector<Scalar> c(c_.size() - 1, Scalar(0));
    for (std::size_t n = 0; n + 1 < c_.size(); ++n) {
      const Scalar mun = mu_.pow(static_cast<long>(n));
      c[n] += mun * c_[n];
      c[n] += mun * (mun * mu_ - Scalar(1)) * xi_ * c_[n + 1];
    }
    return NewtonSeries(xi_, mu_, std::move(c), field_);
  }

  // Cauchy product through iterated x-action: T_k . b computed by
  // P_{k+1} = (x - mu^k xi) P_k. No truncation loss.
  friend NewtonSeries operator*(const NewtonSeries& a, const NewtonSeries& b) {
    if (!a.compatible(b)) throw domain_error("NewtonSeries: mixed rings");
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    NewtonSeries acc(a.xi_, a.mu_, std::vector<Scalar>(n, Scalar(0)), a.field_);
    NewtonSeries pk = b.truncated(n == 0 ? 0 : n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      if (!a.c_[k].is_zero()) acc = acc + pk.scaled(a.c_[k]);
      if (k + 1 < n) {
        const Scalar shift_root = a.mu_.pow(static_cast<long>(k)) * a.xi_;
        pk = pk.times_x() - pk.scaled(shift_root);
      }
    }
    return acc;
  }

 private:
  Scalar xi_{1};
  Scalar mu_{1};
  Field field_{};
  std::vector<Scalar> c_;
};

// T_n(x, xi) expanded in the monomial basis.
inline XPoly tq_poly(std::size_t n, const Scalar& xi, const Scalar& mu) {
  XPoly p(Scalar(1));
  const XPoly x = XPoly::variable();
  for (std::size_t k = 0; k < n; ++k)
    p = p * (x - XPoly(mu.pow(static_cast<long>(k)) * xi));
  return p;
}

// Triangular basis conversions (synthetic division against the T-basis
// roots; exact, round trip is the identity at truncation).
inline NewtonSeries to_newton_basis(const XPoly& p, const Scalar& xi,
                                    const Scalar& mu, Field field = Field{}) {
  std::vector<Scalar> out;
  XPoly cur = p;
  const XPoly x = XPoly::variable();
  std::size_t k = 0;
  while (true) {
    const Scalar root = mu.pow(static_cast<long>(k)) * xi;
    out.push_back(cur.eval(root));
    if (cur.degree() <= 0) break;
    cur = (cur - XPoly(cur.eval(root))).divided_exact(x - XPoly(root));
    ++k;
  }
  return NewtonSeries(xi, mu, std::move(out), field);
}

inline XPoly from_newton_basis(const NewtonSeries& s) {
  XPoly acc;
  for (std::size_t n = 0; n < s.coeffs().size(); ++n)
    if (!s.coeff(n).is_zero())
      acc += tq_poly(n, s.xi(), s.twist()).scaled(s.coeff(n));
  return acc;
}

// Apply a skew operator (polynomial coefficients after denominator
// clearing) to a Newton series via the structural rules. Truncation drops by
// the total number of shift/derivation applications (= operator order).
inline NewtonSeries act(const SkewOperator& op, const NewtonSeries& s) {
  if (op.is_zero())
    return NewtonSeries(s.xi(), s.twist(), {}, s.field());
  if (!(op.shift() == s.twist()))
    throw domain_error("act: operator twist does not match the series");
  SkewOperator cleared = op;
  const XPoly l = cleared.denominator_lcm();
  if (l.degree() > 0 || !(l.coeff(0) == Scalar(1)))
    cleared = cleared.scaled(RatFun(l));
  const std::size_t loss = static_cast<std::size_t>(cleared.order());
  if (s.order() < static_cast<long>(loss))
    throw domain_error("act: truncation underflow");
  const std::size_t out_order = static_cast<std::size_t>(s.order()) - loss;
  NewtonSeries acc(s.xi(), s.twist(),
                   std::vector<Scalar>(out_order + 1, Scalar(0)), s.field());
  for (std::size_t i = 0; i < cleared.coeffs().size(); ++i) {
    const RatFun& ci = cleared.coeff(i);
    if (ci.is_zero()) continue;
    NewtonSeries term = s;
    for (std::size_t t = 0; t < i; ++t)
      term = (cleared.form() == OpForm::Sigma) ? term.shifted()
                                               : term.derived();
    // pad the term back if the power spent fewer coefficients than loss
    for (std::size_t j = 0; j < ci.num().coeffs().size(); ++j) {
      const Scalar& cj = ci.num().coeff(j);
      if (cj.is_zero()) continue;
      NewtonSeries piece = term;
      for (std::size_t t = 0; t < j; ++t) piece = piece.times_x();
      piece = piece.scaled(cj);
      acc = acc + piece.truncated(out_order);
    }
  }
  return acc;
}

struct LocalBasisResult {
  std::vector<NewtonSeries> basis;
  // residual orders: act(L, s) vanished up to this T-index for each element
  long residual_order = 0;
};

// Basis of truncated solutions of L at xi in K[[x - xi]]_q, by exact linear
// algebra on the T-coefficients. Preconditions from the structure theorems
// are checked first and reported as errors: the upper boundary of the
// sigma-polygon must carry no positive slope, and the leading coefficient
// must not vanish on xi, mu xi, ..., mu^T xi.
inline LocalBasisResult local_solution_basis(const SkewOperator& op_in,
                                             const Scalar& xi, std::size_t T) {
  if (xi.is_zero()) throw domain_error("local basis: xi must be nonzero");
  SkewOperator op = convert(op_in, OpForm::Sigma);
  const XPoly l = op.denominator_lcm();
  if (l.degree() > 0 || !(l.coeff(0) == Scalar(1))) op = op.scaled(RatFun(l));
  if (op.is_zero()) throw domain_error("local basis: zero operator");
  const std::size_t nu = static_cast<std::size_t>(op.order());

  // slope hypothesis: no positive slope on the upper part
  const NewtonPolygon np = polygon(op, OpForm::Sigma);
  for (const auto& s : slopes(np, PolygonEnd::Infinity))
    if (!s.infinite && s.value > 0) {
      std::ostringstream os;
      os << "local basis: positive slope " << s.value.get_str()
         << " at infinity excludes solutions at points of K*";
      throw domain_error(os.str());
    }
  // leading coefficient must not vanish on the forward mu-orbit of xi
  const XPoly lead = op.coeff(nu).num();
  const Scalar& mu = op.shift();
  for (std::size_t n = 1; n <= T; ++n) {
    if (lead.eval(mu.pow(static_cast<long>(n)) * xi).is_zero()) {
      std::ostringstream os;
      os << "local basis: leading coefficient vanishes at mu^" << n << " xi";
      throw domain_error(os.str());
    }
  }

  // unknowns a_0..a_T; equations: T-coefficients 0..T-nu of L(sum a_n T_n)
  const std::size_t rows = T - nu + 1;
  Matrix<Scalar> m(rows, T + 1);
  for (std::size_t n = 0; n <= T; ++n) {
    std::vector<Scalar> e(T + 1, Scalar(0));
    e[n] = Scalar(1);
    NewtonSeries en(xi, mu, std::move(e), op.field());
    NewtonSeries img = act(op, en);
    for (std::size_t r = 0; r < rows; ++r) m(r, n) = img.coeff(r);
  }
  LocalBasisResult res;
  res.residual_order = static_cast<long>(rows) - 1;
  for (auto& vec : null_space(m)) {
    // normalize: first nonzero T-coefficient = 1
    std::size_t lead_ix = 0;
    while (lead_ix < vec.size() && vec[lead_ix].is_zero()) ++lead_ix;
    if (lead_ix == vec.size()) continue;
    const Scalar inv = vec[lead_ix].inverse();
    for (auto& c : vec) c *= inv;
    res.basis.emplace_back(xi, mu, std::move(vec), op.field());
  }
  return res;
}

struct CasoratiResult {
  NewtonSeries determinant;
  // both sides of sigma C = (-1)^nu (a_0/a_nu) C at the verified truncation
  bool functional_equation_ok = false;
  long verified_order = 0;
};

// Casorati determinant of nu solutions and the exact check of its
// first-order functional equation.
inline CasoratiResult casoratian(const SkewOperator& op_in,
                                 const std::vector<NewtonSeries>& sols) {
  SkewOperator op = convert(op_in, OpForm::Sigma);
  const std::size_t nu = static_cast<std::size_t>(op.order());
  if (sols.size() != nu)
    throw domain_error("casoratian: need exactly order-many solutions");
  for (std::size_t i = 1; i < sols.size(); ++i)
    if (!sols[0].compatible(sols[i]))
      throw domain_error("casoratian: solutions in different rings");

  // matrix of shifts, then cofactor expansion in the Newton-series ring
  std::vector<std::vector<NewtonSeries>> mat(nu,
                                             std::vector<NewtonSeries>());
  for (std::size_t j = 0; j < nu; ++j) {
    NewtonSeries cur = sols[j];
    for (std::size_t i = 0; i < nu; ++i) {
      mat[i].push_back(cur);
      if (i + 1 < nu) cur = cur.shifted();
    }
  }
  // determinant by Laplace expansion over the first row
  std::function<NewtonSeries(std::vector<std::size_t>, std::size_t)> det =
      [&](std::vector<std::size_t> cols, std::size_t row) -> NewtonSeries {
    if (cols.size() == 1) return mat[row][cols[0]];
    NewtonSeries acc(sols[0].xi(), sols[0].twist(),
                     std::vector<Scalar>(
                         static_cast<std::size_t>(sols[0].order()) + 1,
                         Scalar(0)),
                     sols[0].field());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::vector<std::size_t> rest;
      for (std::size_t t = 0; t < cols.size(); ++t)
        if (t != k) rest.push_back(cols[t]);
      NewtonSeries minor = det(rest, row + 1);
      NewtonSeries term = mat[row][cols[k]] * minor;
      acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  };
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < nu; ++j) all.push_back(j);
  CasoratiResult res{det(all, 0), false, 0};

  // functional equation: a_nu * sigma(C) - (-1)^nu a_0 * C == 0, with the
  // polynomial coefficients acting through the x-rule
  SkewOperator cl = op;
  const XPoly l = cl.denominator_lcm();
  if (l.degree() > 0 || !(l.coeff(0) == Scalar(1))) cl = cl.scaled(RatFun(l));
  auto mul_poly = [&](const XPoly& p, const NewtonSeries& s) {
    NewtonSeries acc(s.xi(), s.twist(),
                     std::vector<Scalar>(s.coeffs().size(), Scalar(0)),
                     s.field());
    NewtonSeries xs = s;
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
      if (!p.coeff(j).is_zero()) acc = acc + xs.scaled(p.coeff(j));
      if (j + 1 < p.coeffs().size()) xs = xs.times_x();
    }
    return acc;
  };
  NewtonSeries lhs = mul_poly(cl.coeff(nu).num(), res.determinant.shifted());
  NewtonSeries rhs = mul_poly(cl.coeff(0).num(), res.determinant);
  if (nu % 2 == 1) rhs = rhs.scaled(Scalar(-1));
  NewtonSeries diff = lhs - rhs.truncated(
      static_cast<std::size_t>(lhs.order()));
  res.verified_order = diff.order();
  res.functional_equation_ok = diff.is_zero();
  return res;
}

}  // namespace qdiff
