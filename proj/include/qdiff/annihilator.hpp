#pragma once

#include <optional>
#include <vector>

#include "qdiff/linsolve.hpp"
#include "qdiff/series.hpp"
#include "qdiff/skew.hpp"

namespace qdiff {

struct AnnihilatorOptions {
  std::size_t max_order = 2;   // nu bar
  std::size_t max_degree = 6;  // D
  std::size_t guard = 5;       // extra vanishing coefficients demanded
};

// Bounded lexicographic search for the minimal nonzero sigma_q-operator
// annihilating the stream: orders 1..max_order, degrees 0..max_degree, first
// box with a nontrivial kernel wins. Guard rows make the linear system
// overdetermined; the returned operator is re-verified against the stream
// before being accepted, so a guess that merely fits the window is rejected.
inline std::optional<SkewOperator> annihilator_search(
    const CoeffGen& gen, const AnnihilatorOptions& opt = {},
    Field field = Field{}) {
  const Scalar q = field.q();
  // coefficients up to the largest window any box needs
  const std::size_t max_rows =
      (opt.max_order + 1) * (opt.max_degree + 1) + opt.guard;
  std::vector<Scalar> y;
  y.reserve(max_rows + 1);
  for (std::size_t n = 0; n < max_rows; ++n) y.push_back(gen(n));

  // power table q^{i*n}
  auto qpow = [&](std::size_t i, long e) { return q.pow(static_cast<long>(i) * e); };

  for (std::size_t nu = 1; nu <= opt.max_order; ++nu) {
    for (std::size_t deg = 0; deg <= opt.max_degree; ++deg) {
      const std::size_t unknowns = (nu + 1) * (deg + 1);
      const std::size_t rows = unknowns + opt.guard;
      if (rows > y.size()) continue;
      // row n: sum_{i,j} b_{i,j} q^{i(n-j)} y_{n-j} = 0
      Matrix<Scalar> m(rows, unknowns);
      for (std::size_t n = 0; n < rows; ++n)
        for (std::size_t i = 0; i <= nu; ++i)
          for (std::size_t j = 0; j <= deg; ++j) {
            if (j > n) continue;
            const Scalar& yn = y[n - j];
            if (yn.is_zero()) continue;
            m(n, i * (deg + 1) + j) =
                qpow(i, static_cast<long>(n - j)) * yn;
          }
      auto kernel = null_space(m);
      if (kernel.empty()) continue;
      for (const auto& vec : kernel) {
        std::vector<RatFun> coeffs(nu + 1);
        bool top_nonzero = false;
        for (std::size_t i = 0; i <= nu; ++i) {
          std::vector<Scalar> xc(deg + 1);
          for (std::size_t j = 0; j <= deg; ++j)
            xc[j] = vec[i * (deg + 1) + j];
          coeffs[i] = RatFun(XPoly(std::move(xc)));
          if (i == nu && !coeffs[i].is_zero()) top_nonzero = true;
        }
        SkewOperator cand(OpForm::Sigma, std::move(coeffs), q, field);
        if (cand.is_zero()) continue;
        if (!top_nonzero) continue;  // this kernel vector lives in a smaller box
        // verify on the full window (guard rows already in the system, but
        // the check below also covers rows the kernel never saw)
        SeriesPrefix pre(std::vector<Scalar>(y));
        if (apply(cand, pre).is_zero()) return cand.normalized();
      }
    }
  }
  return std::nullopt;
}

}  // namespace qdiff
