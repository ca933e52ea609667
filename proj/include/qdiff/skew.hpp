#pragma once

#include <utility>
#include <vector>

#include "qdiff/places.hpp"
#include "qdiff/qnumbers.hpp"
#include "qdiff/series.hpp"

namespace qdiff {

// A linear q-difference operator over K(x), in sigma-form (coefficients of
// powers of the shift) or dq-form (coefficients of powers of the twisted
// derivation). The shift scalar mu generalizes q: operators produced by the
// Fourier transformations live in the same representation with mu = 1/q and
// the variable relabeled z, and rescale_power uses mu = qt.
//
//   sigma f(x) = f(mu x),   d f(x) = (f(mu x) - f(x)) / ((mu - 1) x)
enum class OpForm { Sigma, Dq };
enum class OpVar { X, Z };

class SkewOperator {
 public:
  SkewOperator() = default;
  SkewOperator(OpForm form, std::vector<RatFun> coeffs, Scalar shift,
               Field field = Field{}, OpVar var = OpVar::X)
      : form_(form),
        var_(var),
        shift_(std::move(shift)),
        field_(field),
        coeffs_(std::move(coeffs)) {
    if (shift_.is_zero()) throw domain_error("SkewOperator: zero shift");
    trim();
  }

  static SkewOperator zero(OpForm form, const Scalar& shift,
                           Field field = Field{}, OpVar var = OpVar::X) {
    return SkewOperator(form, {}, shift, field, var);
  }
  static SkewOperator one(OpForm form, const Scalar& shift,
                          Field field = Field{}, OpVar var = OpVar::X) {
    return SkewOperator(form, {RatFun(1)}, shift, field, var);
  }
  // the generator sigma (resp. d) itself
  static SkewOperator generator(OpForm form, const Scalar& shift,
                                Field field = Field{}, OpVar var = OpVar::X) {
    return SkewOperator(form, {RatFun(0), RatFun(1)}, shift, field, var);
  }
  // multiplication by a rational function
  static SkewOperator function(RatFun f, OpForm form, const Scalar& shift,
                               Field field = Field{}, OpVar var = OpVar::X) {
    return SkewOperator(form, {std::move(f)}, shift, field, var);
  }

  OpForm form() const { return form_; }
  OpVar var() const { return var_; }
  const Scalar& shift() const { return shift_; }
  const Field& field() const { return field_; }
  const std::vector<RatFun>& coeffs() const { return coeffs_; }
  const RatFun& coeff(std::size_t i) const {
    static const RatFun zero;
    return i < coeffs_.size() ? coeffs_[i] : zero;
  }
  bool is_zero() const { return coeffs_.empty(); }
  // order: degree in the skew generator
  long order() const { return static_cast<long>(coeffs_.size()) - 1; }

  bool same_ring(const SkewOperator& o) const {
    return form_ == o.form_ && var_ == o.var_ && shift_ == o.shift_ &&
           field_ == o.field_;
  }

  bool operator==(const SkewOperator& o) const {
    return form_ == o.form_ && var_ == o.var_ && shift_ == o.shift_ &&
           coeffs_ == o.coeffs_;
  }
  bool operator!=(const SkewOperator& o) const { return !(*this == o); }

  SkewOperator operator-() const {
    SkewOperator r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend SkewOperator operator+(SkewOperator a, const SkewOperator& b) {
    a.require_same_ring(b);
    if (a.coeffs_.size() < b.coeffs_.size())
      a.coeffs_.resize(b.coeffs_.size());
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i)
      a.coeffs_[i] += b.coeffs_[i];
    a.trim();
    return a;
  }
  friend SkewOperator operator-(SkewOperator a, const SkewOperator& b) {
    return a + (-b);
  }

  // left multiplication by a rational function, f * L
  SkewOperator scaled(const RatFun& f) const {
    SkewOperator r(*this);
    for (auto& c : r.coeffs_) c *= f;
    r.trim();
    return r;
  }

  // apply sigma^k to a rational function: f(x) -> f(mu^k x)
  RatFun shifted_arg(const RatFun& f, long k = 1) const {
    if (k == 0 || f.is_zero()) return f;
    return f.dilated(shift_.pow(k));
  }

  // the twisted derivation d applied to a rational function
  RatFun derive(const RatFun& f) const {
    const RatFun shifted = f.dilated(shift_);
    const RatFun diff = shifted - f;
    if (diff.is_zero()) return RatFun();
    return diff / RatFun(Poly<Scalar>::monomial(shift_ - Scalar(1), 1));
  }

  // Skew product. The commutation laws are
  //   sigma . f = f(mu x) . sigma       d . f = f(mu x) . d + d(f)
  friend SkewOperator operator*(const SkewOperator& a, const SkewOperator& b) {
    a.require_same_ring(b);
    SkewOperator out = zero(a.form_, a.shift_, a.field_, a.var_);
    if (a.is_zero() || b.is_zero()) return out;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      // a composed with (b_j * D^j): first a . b_j, then shift powers by j
      SkewOperator t = a.compose_function(b.coeffs_[j]);
      std::vector<RatFun> shifted(t.coeffs_.size() + j);
      for (std::size_t i = 0; i < t.coeffs_.size(); ++i)
        shifted[i + j] = std::move(t.coeffs_[i]);
      out = out + SkewOperator(a.form_, std::move(shifted), a.shift_,
                               a.field_, a.var_);
    }
    return out;
  }

  SkewOperator pow(unsigned long e) const {
    SkewOperator acc = one(form_, shift_, field_, var_);
    SkewOperator base(*this);
    while (e) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  }

  // L . f as an operator (compose with multiplication by f on the right)
  SkewOperator compose_function(const RatFun& f) const {
    // iterate D^i . f via D . (c D^k) = sigma(c) D^{k+1} (+ d(c) D^k in
    // dq-form)
    SkewOperator out = zero(form_, shift_, field_, var_);
    SkewOperator cur = function(f, form_, shift_, field_, var_);
    for (std::size_t i = 0;; ++i) {
      if (i < coeffs_.size() && !coeffs_[i].is_zero())
        out = out + cur.scaled(coeffs_[i]);
      if (i + 1 >= coeffs_.size()) break;
      cur = cur.apply_generator_left();
    }
    return out;
  }

  // lcm of coefficient denominators; multiplying by it on the left makes all
  // coefficients polynomial
  XPoly denominator_lcm() const {
    XPoly l(1);
    for (const auto& c : coeffs_)
      if (!c.is_zero()) l = XPoly::lcm(l, c.den());
    return l;
  }

  // Canonical representative of the K(x)-unit class: polynomial
  // coefficients, no common polynomial factor, leading coefficient monic in
  // x. "Equal up to a unit of K(x)" becomes literal equality.
  SkewOperator normalized() const {
    if (is_zero()) return *this;
    SkewOperator r = scaled(RatFun(denominator_lcm()));
    XPoly g;
    for (const auto& c : r.coeffs_)
      if (!c.is_zero()) g = g.is_zero() ? c.num() : XPoly::gcd(g, c.num());
    if (g.degree() > 0) {
      const RatFun gf{g};
      for (auto& c : r.coeffs_)
        if (!c.is_zero()) c /= gf;
    }
    const Scalar top = r.coeffs_.back().num().leading();
    if (!(top == Scalar(1))) {
      const RatFun tops{top};
      for (auto& c : r.coeffs_) c /= tops;
    }
    return r;
  }

  void require_same_ring(const SkewOperator& o) const {
    if (!same_ring(o))
      throw domain_error(
          "SkewOperator: mixed forms or twists (convert first)");
  }

 private:
  OpForm form_ = OpForm::Sigma;
  OpVar var_ = OpVar::X;
  Scalar shift_{1};
  Field field_{};
  std::vector<RatFun> coeffs_;

  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  // D * this, one application of the generator on the left
  SkewOperator apply_generator_left() const {
    SkewOperator r = zero(form_, shift_, field_, var_);
    r.coeffs_.assign(coeffs_.size() + 1, RatFun());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k].is_zero()) continue;
      r.coeffs_[k + 1] += coeffs_[k].dilated(shift_);
      if (form_ == OpForm::Dq) r.coeffs_[k] += derive(coeffs_[k]);
    }
    r.trim();
    return r;
  }
};

// Coefficients of the expansion of d^n in powers of sigma:
//   d^n = (sigma - 1)(sigma - mu) ... (sigma - mu^{n-1})
//         / ((mu-1)^n mu^{n(n-1)/2} x^n)
// The numerator product expands with scalar coefficients c[i] of sigma^i.
struct DqPowerExpansion {
  std::size_t n = 0;
  std::vector<Scalar> c;   // c[i] multiplies sigma^i
  Scalar norm_den;         // (mu-1)^n mu^{n(n-1)/2}; full factor is 1/(norm_den x^n)

  static DqPowerExpansion make(std::size_t n, const Scalar& mu) {
    DqPowerExpansion e;
    e.n = n;
    e.c.assign(n + 1, Scalar(0));
    e.c[0] = Scalar(1);
    std::size_t deg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar root = mu.pow(static_cast<long>(j));
      // multiply the sigma-polynomial by (sigma - mu^j)
      for (std::size_t i = deg + 2; i-- > 0;) {
        Scalar hi = i > 0 ? e.c[i - 1] : Scalar(0);
        e.c[i] = hi - root * e.c[i];
      }
      ++deg;
    }
    e.norm_den = (mu - Scalar(1)).pow(static_cast<long>(n)) *
                 mu.pow(static_cast<long>(n * (n - 1) / 2));
    return e;
  }
};

// sigma <-> dq form conversion. Exact in both directions; the round trip is
// the identity operator.
inline SkewOperator convert(const SkewOperator& op, OpForm target) {
  if (op.form() == target) return op;
  const Scalar& mu = op.shift();
  if (op.is_zero())
    return SkewOperator::zero(target, mu, op.field(), op.var());
  const std::size_t nu = static_cast<std::size_t>(op.order());
  std::vector<RatFun> out(nu + 1);
  if (target == OpForm::Dq) {
    // sigma^j = sum_i binom(j,i)_mu (mu-1)^i mu^{i(i-1)/2} x^i d^i
    for (std::size_t i = 0; i <= nu; ++i) {
      Scalar acc_factor = (mu - Scalar(1)).pow(static_cast<long>(i)) *
                          mu.pow(static_cast<long>(i * (i - 1) / 2));
      RatFun sum;
      for (std::size_t j = i; j <= nu; ++j)
        if (!op.coeff(j).is_zero())
          sum += op.coeff(j).scaled(binomial_of(mu, j, i));
      if (!sum.is_zero())
        out[i] = sum.scaled(acc_factor) *
                 RatFun(XPoly::monomial(Scalar(1), i));
    }
  } else {
    // d^i = (1/((mu-1)^i mu^{T(i)} x^i)) sum_k c_{k,i} sigma^k
    for (std::size_t i = 0; i <= nu; ++i) {
      if (op.coeff(i).is_zero()) continue;
      const DqPowerExpansion e = DqPowerExpansion::make(i, mu);
      RatFun pre = op.coeff(i) /
                   RatFun(XPoly::monomial(e.norm_den, i));
      for (std::size_t k = 0; k <= i; ++k)
        if (!e.c[k].is_zero()) out[k] += pre.scaled(e.c[k]);
    }
  }
  return SkewOperator(target, std::move(out), mu, op.field(), op.var());
}

// Apply an operator to a truncated series in the operator's variable.
// Internally the operator is converted to sigma-form and cleared to
// polynomial coefficients (this multiplies the result by a fixed polynomial,
// which is harmless for annihilation checks and exact otherwise); the
// truncation drops by the order spread introduced by the conversion.
inline SeriesPrefix apply(const SkewOperator& op, const SeriesPrefix& f) {
  SkewOperator s = convert(op, OpForm::Sigma);
  const XPoly l = s.denominator_lcm();
  if (l.degree() > 0 || !(l.coeff(0) == Scalar(1)))
    s = s.scaled(RatFun(l));
  const Scalar& mu = s.shift();
  long loss = 0;
  for (const auto& c : s.coeffs())
    if (!c.is_zero()) loss = std::max(loss, -c.order_at_zero());
  const long out_order = f.order() - loss;
  if (out_order < 0)
    throw domain_error("apply: truncation underflow");
  std::vector<Scalar> out(static_cast<std::size_t>(out_order) + 1);
  for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
    const RatFun& ci = s.coeff(i);
    if (ci.is_zero()) continue;
    const XPoly& p = ci.num();  // denominator is 1 after clearing
    const Scalar mui = mu.pow(static_cast<long>(i));
    for (std::size_t j = 0; j < p.coeffs().size(); ++j) {
      const Scalar& pj = p.coeff(j);
      if (pj.is_zero()) continue;
      // contribution of c_{i,j} x^j sigma^i: out[n] += c * mu^{i(n-j)} f_{n-j}
      for (long n = static_cast<long>(j); n <= out_order; ++n) {
        const Scalar& fn = f.coeff(static_cast<std::size_t>(n - static_cast<long>(j)));
        if (fn.is_zero()) continue;
        out[static_cast<std::size_t>(n)] +=
            pj * mui.pow(n - static_cast<long>(j)) * fn;
      }
    }
  }
  return SeriesPrefix(std::move(out));
}

// The operator over sigma_{1/q} with coefficients b_j(x) = a_{nu-j}(mu^{-nu} x)
// annihilating every solution of the input under the inverse shift.
inline SkewOperator invert_q(const SkewOperator& op) {
  if (op.form() != OpForm::Sigma)
    throw domain_error("invert_q: operator must be in sigma form");
  const long nu = op.order();
  if (nu < 0) return op;
  const Scalar p = op.shift().inverse();
  const Scalar arg = op.shift().pow(-nu);
  std::vector<RatFun> out(static_cast<std::size_t>(nu) + 1);
  for (long j = 0; j <= nu; ++j) {
    const RatFun& a = op.coeff(static_cast<std::size_t>(nu - j));
    if (!a.is_zero()) out[static_cast<std::size_t>(j)] = a.dilated(arg);
  }
  return SkewOperator(OpForm::Sigma, std::move(out), p, op.field(), op.var());
}

// Re-read a sigma_q-operator over k(q^{1/r}): same coefficients (lifted to
// the extension), generator powers multiplied by r. Slopes scale by 1/r.
inline SkewOperator rescale_power(const SkewOperator& op, int r) {
  if (op.form() != OpForm::Sigma)
    throw domain_error("rescale_power: operator must be in sigma form");
  if (r <= 0) throw domain_error("rescale_power: r must be positive");
  const Field ext{op.field().r * r};
  auto lift = [&](const Scalar& s) {
    return s.inflated(static_cast<std::size_t>(r));
  };
  auto lift_rf = [&](const RatFun& f) {
    auto lift_poly = [&](const XPoly& p) {
      std::vector<Scalar> c(p.coeffs().size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = lift(p.coeff(i));
      return XPoly(std::move(c));
    };
    return RatFun(lift_poly(f.num()), lift_poly(f.den()));
  };
  std::vector<RatFun> out;
  out.resize(static_cast<std::size_t>(op.order()) * r + 1);
  for (std::size_t i = 0; i < op.coeffs().size(); ++i)
    if (!op.coeff(i).is_zero()) out[i * r] = lift_rf(op.coeff(i));
  return SkewOperator(OpForm::Sigma, std::move(out), Scalar::qt(), ext,
                      op.var());
}

// (d - d(a_0)/a_0) . L kills F + c for every constant c whenever L kills F.
// With a_0 = 0, constants are already solutions and L is returned unchanged.
inline SkewOperator shift_constant_annihilator(const SkewOperator& op) {
  if (op.form() != OpForm::Dq)
    throw domain_error("shift_constant_annihilator: dq form required");
  const RatFun a0 = op.coeff(0);
  if (a0.is_zero()) return op;
  SkewOperator d = SkewOperator::generator(OpForm::Dq, op.shift(), op.field(),
                                           op.var());
  const RatFun ratio = d.derive(a0) / a0;
  SkewOperator factor = d - SkewOperator::function(ratio, OpForm::Dq,
                                                   op.shift(), op.field(),
                                                   op.var());
  return factor * op;
}

}  // namespace qdiff
