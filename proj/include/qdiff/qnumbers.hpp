#pragma once

#include <mutex>
#include <vector>

#include "qdiff/scalar.hpp"
#include "qdiff/zpoly.hpp"

namespace qdiff {

// Cache of the q-combinatorial quantities [n]_q, [n]_q!, (n choose k)_q as
// integer polynomials in q. Append-only; reads of already-published entries
// take the lock too, which is cheap at the access pattern of this library.
class QNumbers {
 public:
  static QNumbers& instance() {
    static QNumbers inst;
    return inst;
  }

  // [n]_q = 1 + q + ... + q^{n-1}
  ZPoly bracket(std::size_t n) {
    std::lock_guard<std::mutex> lk(mu_);
    grow(n);
    return brackets_[n];
  }

  ZPoly factorial(std::size_t n) {
    std::lock_guard<std::mutex> lk(mu_);
    grow(n);
    return factorials_[n];
  }

  // (n choose k)_q = [n]!/([k]![n-k]!), a polynomial in q
  ZPoly binomial(std::size_t n, std::size_t k) {
    if (k > n) throw domain_error("q-binomial: k > n");
    std::lock_guard<std::mutex> lk(mu_);
    grow(n);
    return factorials_[n].divided_exact(factorials_[k] * factorials_[n - k]);
  }

 private:
  QNumbers() {
    brackets_ = {ZPoly(0), ZPoly(1)};
    factorials_ = {ZPoly(1), ZPoly(1)};
  }
  void grow(std::size_t n) {
    while (brackets_.size() <= n) {
      std::size_t m = brackets_.size();
      std::vector<Int> c(m, Int(1));
      brackets_.push_back(ZPoly(std::move(c)));
      factorials_.push_back(factorials_.back() * brackets_.back());
    }
  }

  std::mutex mu_;
  std::vector<ZPoly> brackets_;
  std::vector<ZPoly> factorials_;
};

// [n]_q as an element of K = Q(qt), q = qt^r.
inline Scalar q_bracket(std::size_t n, const Field& f = Field{}) {
  return Scalar(QNumbers::instance().bracket(n).inflated(
      static_cast<std::size_t>(f.r)));
}

inline Scalar q_factorial(std::size_t n, const Field& f = Field{}) {
  return Scalar(QNumbers::instance().factorial(n).inflated(
      static_cast<std::size_t>(f.r)));
}

inline Scalar q_binomial(std::size_t n, std::size_t k, const Field& f = Field{}) {
  return Scalar(QNumbers::instance().binomial(n, k).inflated(
      static_cast<std::size_t>(f.r)));
}

// [n]_mu for an arbitrary nonzero shift scalar mu (e.g. mu = 1/q): the
// twisted bracket (mu^n - 1)/(mu - 1), with [n]_1 = n.
inline Scalar bracket_of(const Scalar& mu, long n) {
  if (mu == Scalar(1)) return Scalar(n);
  if (n == 0) return Scalar(0);
  return (mu.pow(n) - Scalar(1)) / (mu - Scalar(1));
}

inline Scalar factorial_of(const Scalar& mu, std::size_t n) {
  Scalar acc(1);
  for (std::size_t i = 1; i <= n; ++i) acc *= bracket_of(mu, static_cast<long>(i));
  return acc;
}

inline Scalar binomial_of(const Scalar& mu, std::size_t n, std::size_t k) {
  if (k > n) throw domain_error("twisted binomial: k > n");
  Scalar num(1), den(1);
  for (std::size_t i = 0; i < k; ++i) {
    num *= bracket_of(mu, static_cast<long>(n - i));
    den *= bracket_of(mu, static_cast<long>(i + 1));
  }
  return num / den;
}

}  // namespace qdiff
