#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qdiff/cyclotomic.hpp"
#include "qdiff/matrix.hpp"
#include "qdiff/places.hpp"
#include "qdiff/qnumbers.hpp"
#include "qdiff/skew.hpp"

namespace qdiff {

// Matrix q-difference system Y(qx) = A_1(x) Y(x).
struct QSystem {
  Matrix<RatFun> A1;
  Field field;

  std::size_t dim() const { return A1.rows(); }

  static QSystem make(Matrix<RatFun> a1, Field field = Field{}) {
    if (a1.rows() != a1.cols()) throw domain_error("QSystem: square matrix required");
    if (a1.determinant().is_zero())
      throw domain_error("QSystem: A1 must be invertible over K(x)");
    return QSystem{std::move(a1), field};
  }
};

// Companion system of a sigma-form operator: last row -a_i/a_nu.
inline QSystem companion(const SkewOperator& op_in) {
  SkewOperator op = convert(op_in, OpForm::Sigma);
  const long nu = op.order();
  if (nu < 1) throw domain_error("companion: operator order must be >= 1");
  const std::size_t n = static_cast<std::size_t>(nu);
  Matrix<RatFun> a(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = RatFun(1);
  for (std::size_t j = 0; j < n; ++j)
    a(n - 1, j) = -(op.coeff(j) / op.coeff(n));
  return QSystem::make(std::move(a), op.field());
}

namespace detail {

inline Matrix<RatFun> dilate_matrix(const Matrix<RatFun>& m, const Scalar& s) {
  return m.map([&](const RatFun& f) { return f.dilated(s); });
}

inline Matrix<XPoly> dilate_matrix(const Matrix<XPoly>& m, const Scalar& s) {
  return m.map([&](const XPoly& p) { return p.dilated(s); });
}

inline Matrix<RatFun> dq_matrix(const Matrix<RatFun>& m, const Scalar& q) {
  const RatFun den{XPoly::monomial(q - Scalar(1), 1)};
  return m.map([&](const RatFun& f) {
    if (f.is_zero()) return RatFun();
    return (f.dilated(q) - f) / den;
  });
}

// gauss content of a polynomial matrix family (gcd of all entry contents)
inline Scalar gauss_content_poly_matrix(const Matrix<XPoly>& m) {
  ZPoly num, den(1);
  bool any = false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).is_zero()) continue;
      any = true;
      const Scalar c = gauss_content(m(i, j));
      num = ZPoly::gcd(num * c.den(), c.num() * den);
      den = den * c.den();
      const ZPoly g = ZPoly::gcd(num, den);
      num = num.divided_exact(g);
      den = den.divided_exact(g);
    }
  if (!any) return Scalar(0);
  return Scalar(num, den);
}

}  // namespace detail

// Exact iterates A_n (sigma side) and G_n (derivation side) with
// G_{[n]} = G_n / [n]_q!. The A recurrence is A_{n+1}(x) = A_n(qx) A_1(x);
// the G tables satisfy G_1 = (A_1 - 1)/((q-1)x) and
// G_{n+1}(x) = G_n(qx) G_1(x) + d_q G_n(x).
class IterationTable {
 public:
  IterationTable(QSystem system, std::size_t horizon)
      : sys_(std::move(system)) {
    const Scalar q = sys_.field.q();
    const std::size_t nu = sys_.dim();
    A_.push_back(Matrix<RatFun>::identity(nu));
    G_.push_back(Matrix<RatFun>::identity(nu));
    if (horizon == 0) return;
    A_.push_back(sys_.A1);
    const RatFun gden{XPoly::monomial(q - Scalar(1), 1)};
    Matrix<RatFun> g1 = (sys_.A1 - Matrix<RatFun>::identity(nu))
                            .map([&](const RatFun& f) {
                              return f.is_zero() ? RatFun() : f / gden;
                            });
    G_.push_back(g1);
    for (std::size_t n = 2; n <= horizon; ++n) {
      A_.push_back(detail::dilate_matrix(A_.back(), q) * sys_.A1);
      G_.push_back(detail::dilate_matrix(G_.back(), q) * G_[1] +
                   detail::dq_matrix(G_.back(), q));
    }
  }

  const QSystem& system() const { return sys_; }
  std::size_t horizon() const { return A_.size() - 1; }
  const Matrix<RatFun>& A(std::size_t n) const { return A_.at(n); }
  const Matrix<RatFun>& G(std::size_t n) const { return G_.at(n); }
  Matrix<RatFun> G_normalized(std::size_t n) const {
    const RatFun inv{Scalar(1) / q_factorial(n, sys_.field)};
    return G_.at(n).map([&](const RatFun& f) { return f * inv; });
  }

 private:
  QSystem sys_;
  std::vector<Matrix<RatFun>> A_;
  std::vector<Matrix<RatFun>> G_;
};

// Denominator-free content pipeline for the Galockin-style estimators and
// the norm-decay scans. With D(x) the lcm of the A_1 entry denominators,
// N = A_1 D and H_n = (q-1)^n q^{n(n-1)/2} x^n G_n, the expansion of d_q^n
// in sigma-powers collapses the twisted Leibniz recursion to
//   M_{n+1}(x) = M_n(qx) N(x) - q^n M_n(x) D(q^n x),
// where M_n = H_n * prod_{k<n} D(q^k x). Only polynomial arithmetic is
// needed, and Gauss contents of G_{[n]} come out by division.
class ContentPipeline {
 public:
  explicit ContentPipeline(const QSystem& sys) : field_(sys.field) {
    q_ = field_.q();
    const std::size_t nu = sys.dim();
    XPoly den(Scalar(1));
    for (std::size_t i = 0; i < nu; ++i)
      for (std::size_t j = 0; j < nu; ++j)
        if (!sys.A1(i, j).is_zero())
          den = XPoly::lcm(den, sys.A1(i, j).den());
    D_ = den;
    N_ = sys.A1.map([&](const RatFun& f) {
      if (f.is_zero()) return XPoly();
      return f.num() * den.divided_exact(f.den());
    });
    M_ = Matrix<XPoly>(nu, nu);
    for (std::size_t i = 0; i < nu; ++i) M_(i, i) = XPoly(Scalar(1));
    step_ = 0;
  }

  // advance to M_{step+1} = M_step(qx) N(x) - q^step M_step(x) D(q^step x)
  void step() {
    const Scalar qn = q_.pow(static_cast<long>(step_));
    const XPoly scaled_dsh = D_.dilated(qn).scaled(qn);
    M_ = detail::dilate_matrix(M_, q_) * N_ -
         M_.map([&](const XPoly& p) { return p * scaled_dsh; });
    ++step_;
  }

  std::size_t current() const { return step_; }

  // reduced Gauss content scalar of G_n at the current step (n = step_)
  Scalar content_G() const {
    const Scalar mc = detail::gauss_content_poly_matrix(M_);
    if (mc.is_zero()) return Scalar(0);
    return mc / denominator_content();
  }
  // content of G_{[n]} = G_n / [n]!
  Scalar content_G_normalized() const {
    const Scalar c = content_G();
    if (c.is_zero()) return Scalar(0);
    return c / q_factorial(step_, field_);
  }

 private:
  Scalar denominator_content() const {
    // (q-1)^n q^{T(n)} prod_{k<n} cont(D(q^k x)); the x^n factor has unit
    // content
    Scalar acc = (q_ - Scalar(1)).pow(static_cast<long>(step_)) *
                 field_.q_triangle(static_cast<long>(step_));
    for (std::size_t k = 0; k < step_; ++k)
      acc *= gauss_content(D_.dilated(q_.pow(static_cast<long>(k))));
    return acc;
  }

  Field field_;
  Scalar q_;
  XPoly D_;
  Matrix<XPoly> N_;
  Matrix<XPoly> M_;
  std::size_t step_;
};

struct EstimatorReport {
  // partial sums (1/n) sum_v log^+ sup_{s<=n} |G_[s]|_{v,Gauss} split by
  // place class, n = 1..horizon
  std::vector<Rat> cyclotomic;
  std::vector<Rat> noncyclotomic_finite;
};

inline EstimatorReport galockin_report(const QSystem& sys, std::size_t horizon) {
  ContentPipeline pipe(sys);
  SizeAccumulator acc(sys.field);
  for (std::size_t n = 1; n <= horizon; ++n) {
    pipe.step();
    acc.push(pipe.content_G_normalized());
  }
  EstimatorReport rep;
  for (const auto& row : acc.report().rows) {
    rep.cyclotomic.push_back(row.cyclotomic);
    rep.noncyclotomic_finite.push_back(row.noncyclotomic_finite);
  }
  return rep;
}

inline std::vector<Rat> galockin_partial(const QSystem& sys,
                                         std::size_t horizon) {
  return galockin_report(sys, horizon).cyclotomic;
}
inline std::vector<Rat> noncyclotomic_partial(const QSystem& sys,
                                              std::size_t horizon) {
  return galockin_report(sys, horizon).noncyclotomic_finite;
}

// Nilpotent reduction of the system modulo Phi_m: the three computable
// equivalent conditions and the first norm-drop order.
struct NilpotenceReport {
  unsigned long m = 0;
  std::size_t kappa = 0;
  std::optional<bool> a_iterate_nilpotent;   // (A_kappa - 1) nilpotent mod Phi_m
  std::optional<bool> g_iterate_nilpotent;   // G_kappa nilpotent mod Phi_m
  std::optional<bool> norm_drop_found;       // exists n <= horizon with
                                             // |G_{n kappa}|_Gauss <= |pi_v|
  std::optional<std::size_t> nilpotence_order;
  std::size_t horizon = 0;

  bool computable_flags_agree() const {
    std::vector<bool> vals;
    if (a_iterate_nilpotent) vals.push_back(*a_iterate_nilpotent);
    if (g_iterate_nilpotent) vals.push_back(*g_iterate_nilpotent);
    if (norm_drop_found) vals.push_back(*norm_drop_found);
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (vals[i] != vals[0]) return false;
    return true;
  }
};

namespace detail {

using CycPoly = Poly<CycElem>;
using CycRatFun = Fraction<CycElem>;

inline CycPoly specialize_poly(const XPoly& p, unsigned long m) {
  std::vector<CycElem> c(p.coeffs().size(), CycElem(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!p.coeff(i).is_zero()) c[i] = specialize_at_root(p.coeff(i), m);
  return CycPoly(std::move(c));
}

inline CycRatFun specialize_ratfun(const RatFun& f, unsigned long m,
                                   const std::string& where) {
  if (f.is_zero()) return CycRatFun();
  CycPoly den = specialize_poly(f.den(), m);
  if (den.is_zero())
    throw domain_error("bad reduction modulo Phi_" + std::to_string(m) +
                       " at " + where);
  return CycRatFun(specialize_poly(f.num(), m), std::move(den));
}

inline std::optional<Matrix<CycRatFun>> try_reduce(const Matrix<RatFun>& m,
                                                   unsigned long mm) {
  Matrix<CycRatFun> out(m.rows(), m.cols());
  try {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ")";
        out(i, j) = specialize_ratfun(m(i, j), mm, os.str());
      }
  } catch (const domain_error&) {
    return std::nullopt;
  }
  return out;
}

}  // namespace detail

// kappa for the place Phi_m over k = Q: the multiplicative order of the
// root of unity, i.e. m itself.
inline NilpotenceReport nilpotent_reduction(const QSystem& sys,
                                            unsigned long m,
                                            std::size_t horizon = 8) {
  if (m == 0) throw domain_error("nilpotent_reduction: m must be positive");
  if (sys.field.r != 1)
    throw domain_error("nilpotent_reduction: stated for the r = 1 field");
  NilpotenceReport rep;
  rep.m = m;
  rep.kappa = m;
  rep.horizon = horizon;
  const std::size_t nu = sys.dim();

  // precondition: A_1..A_kappa reducible; build the exact table that far
  IterationTable table(sys, m);
  {
    // A_1 must reduce; deeper iterates may fail only through it
    bool first_ok = detail::try_reduce(sys.A1, m).has_value();
    if (!first_ok) {
      // identify the offending entry for the error text
      for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nu; ++j) {
          std::ostringstream os;
          os << "A1 entry (" << i << "," << j << ")";
          detail::specialize_ratfun(sys.A1(i, j), m, os.str());
        }
    }
  }

  if (auto red = detail::try_reduce(table.A(m), m)) {
    Matrix<detail::CycRatFun> am = *red;
    for (std::size_t i = 0; i < nu; ++i)
      am(i, i) -= detail::CycRatFun(1);
    rep.a_iterate_nilpotent = am.is_nilpotent();
  }
  if (auto red = detail::try_reduce(table.G(m), m))
    rep.g_iterate_nilpotent = red->is_nilpotent();

  // condition 5: scan |G_{n kappa}|_Gauss <= |pi_v|, i.e. the Phi_m-order of
  // the reduced content scalar of G_{n kappa} is >= 1
  ContentPipeline pipe(sys);
  bool found = false;
  for (std::size_t n = 1; n <= horizon && !found; ++n) {
    while (pipe.current() < n * m) pipe.step();
    const Scalar c = pipe.content_G();
    long ord;
    if (c.is_zero()) {
      ord = 1;  // zero matrix: norm 0
    } else {
      ord = cyclotomic_order(c.num(), m) - cyclotomic_order(c.den(), m);
    }
    if (ord >= 1) {
      found = true;
      rep.nilpotence_order = n;
    }
  }
  rep.norm_drop_found = found;
  return rep;
}

}  // namespace qdiff
