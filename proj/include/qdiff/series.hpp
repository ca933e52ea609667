#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qdiff/scalar.hpp"

namespace qdiff {

// Pull-based exact coefficient stream: gen(n) is the n-th Taylor
// coefficient. Streams must be re-entrant (all catalog generators are pure
// closed forms).
using CoeffGen = std::function<Scalar(std::size_t)>;

// Truncated power series prefix y_0..y_N, immutable by convention.
class SeriesPrefix {
 public:
  SeriesPrefix() = default;
  explicit SeriesPrefix(std::vector<Scalar> coeffs)
      : c_(std::move(coeffs)) {}
  SeriesPrefix(const CoeffGen& gen, std::size_t order) {
    c_.reserve(order + 1);
    for (std::size_t n = 0; n <= order; ++n) c_.push_back(gen(n));
  }

  // truncation order N: coefficients 0..N are meaningful
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

  SeriesPrefix truncated(std::size_t new_order) const {
    std::vector<Scalar> c(c_.begin(),
                          c_.begin() + std::min(c_.size(), new_order + 1));
    return SeriesPrefix(std::move(c));
  }

  friend SeriesPrefix operator+(const SeriesPrefix& a, const SeriesPrefix& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<Scalar> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = a.coeff(i) + b.coeff(i);
    return SeriesPrefix(std::move(c));
  }
  friend SeriesPrefix operator-(const SeriesPrefix& a, const SeriesPrefix& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<Scalar> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = a.coeff(i) - b.coeff(i);
    return SeriesPrefix(std::move(c));
  }
  SeriesPrefix scaled(const Scalar& k) const {
    std::vector<Scalar> c(c_);
    for (auto& x : c) x *= k;
    return SeriesPrefix(std::move(c));
  }
  // Cauchy product at the shorter truncation
  friend SeriesPrefix operator*(const SeriesPrefix& a, const SeriesPrefix& b) {
    if (a.c_.empty() || b.c_.empty()) return SeriesPrefix();
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<Scalar> c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; i + j < n && j < b.c_.size(); ++j)
        if (!a.coeff(i).is_zero() && !b.coeff(j).is_zero())
          c[i + j] += a.c_[i] * b.c_[j];
    return SeriesPrefix(std::move(c));
  }

 private:
  std::vector<Scalar> c_;
};

// Truncated expansion in inverse powers: index n stores the coefficient of
// z^{-n-1}. This is the codomain of the formal q-Borel transforms.
class InverseSeriesPrefix {
 public:
  InverseSeriesPrefix() = default;
  explicit InverseSeriesPrefix(std::vector<Scalar> coeffs)
      : c_(std::move(coeffs)) {}

  long depth() const { return static_cast<long>(c_.size()) - 1; }
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

 private:
  std::vector<Scalar> c_;
};

// Sparse Laurent window used when operators in K[z, d_p] act on inverse
// series: exponents below min_reliable_exp are contaminated by the
// truncation and must not be asserted on.
struct LaurentPrefix {
  std::map<long, Scalar> coeffs;  // exponent -> coefficient
  long min_reliable_exp = 0;

  void add(long exp, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs.emplace(exp, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs.erase(it);
    }
  }

  bool reliably_zero() const {
    for (const auto& [e, c] : coeffs)
      if (e >= min_reliable_exp && !c.is_zero()) return false;
    return true;
  }
};

}  // namespace qdiff
