#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qdiff/skew.hpp"

namespace qdiff {

// A slope value: a rational or the infinite slope of a vertical side.
struct Slope {
  bool infinite = false;
  Rat value;  // meaningful when !infinite

  static Slope inf() { return Slope{true, Rat(0)}; }
  static Slope of(Rat v) { return Slope{false, std::move(v)}; }
  bool operator==(const Slope& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  bool operator<(const Slope& o) const {
    if (infinite != o.infinite) return !infinite;  // finite sorts first
    if (infinite) return false;
    return value < o.value;
  }
};

// Newton-Ramis polygon of a skew operator. sigma-form polygons are honest
// convex lattice hulls; dq-form polygons are the leftward closure and are
// stored by their finite generating hull plus the closure flag (only the
// right boundary and the two horizontal rays are geometric content).
// Vertical normalization: min v on the hull is 0.
struct NewtonPolygon {
  OpForm form = OpForm::Sigma;
  bool leftward_closed = false;
  std::vector<std::pair<long, long>> points;  // generating points (u, v)
  std::vector<std::pair<long, long>> hull;    // CCW vertex list from lex-min

  bool operator==(const NewtonPolygon& o) const {
    return form == o.form && leftward_closed == o.leftward_closed &&
           hull == o.hull;
  }
};

namespace detail {

inline long cross(const std::pair<long, long>& o,
                  const std::pair<long, long>& a,
                  const std::pair<long, long>& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

// Monotone-chain convex hull; returns CCW vertices starting at the
// lexicographically smallest point. Collinear points are dropped.
inline std::vector<std::pair<long, long>> convex_hull(
    std::vector<std::pair<long, long>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<std::pair<long, long>> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// For a leftward-closed polygon only the right boundary matters: the
// profile v -> max{u : (u, v) in hull} is concave, and its graph is the CCW
// walk of the hull from the rightmost vertex at v = vmin up to the rightmost
// vertex at v = vmax.
inline std::vector<std::pair<long, long>> right_chain(
    const std::vector<std::pair<long, long>>& pts) {
  auto h = convex_hull(pts);
  if (h.size() <= 1) return h;
  long vmin = h[0].second, vmax = h[0].second;
  for (const auto& p : h) {
    vmin = std::min(vmin, p.second);
    vmax = std::max(vmax, p.second);
  }
  std::size_t bot = h.size(), top = h.size();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].second == vmin && (bot == h.size() || h[i].first > h[bot].first))
      bot = i;
    if (h[i].second == vmax && (top == h.size() || h[i].first > h[top].first))
      top = i;
  }
  std::vector<std::pair<long, long>> chain;
  std::size_t i = bot;
  chain.push_back(h[i]);
  while (i != top) {
    i = (i + 1) % h.size();
    chain.push_back(h[i]);
  }
  return chain;
}

}  // namespace detail

// Exact polygon of an operator, in the requested form. The operator is
// converted if needed; denominators are cleared (a vertical shift, absorbed
// by the normalization).
inline NewtonPolygon polygon(const SkewOperator& op_in, OpForm form) {
  if (op_in.is_zero()) throw domain_error("polygon: zero operator");
  SkewOperator op = convert(op_in, form);
  const XPoly l = op.denominator_lcm();
  if (l.degree() > 0 || !(l.coeff(0) == Scalar(1)))
    op = op.scaled(RatFun(l));

  NewtonPolygon np;
  np.form = form;
  np.leftward_closed = (form == OpForm::Dq);
  for (std::size_t i = 0; i < op.coeffs().size(); ++i) {
    const RatFun& c = op.coeff(i);
    if (c.is_zero()) continue;
    // dq-form uses the a_i(x) x^i d^i normalization: shift v down by i
    const long shift = (form == OpForm::Dq) ? static_cast<long>(i) : 0;
    const long lo = static_cast<long>(c.num().low_order()) - shift;
    const long hi = c.num().degree() - shift;
    for (long v = lo; v <= hi; ++v)
      np.points.emplace_back(static_cast<long>(i), v);
  }
  // vertical normalization: min v = 0
  long vmin = np.points.front().second;
  for (const auto& p : np.points) vmin = std::min(vmin, p.second);
  for (auto& p : np.points) p.second -= vmin;
  np.hull = np.leftward_closed ? detail::right_chain(np.points)
                               : detail::convex_hull(np.points);
  return np;
}

// All finite slope values of the boundary (for leftward-closed polygons the
// horizontal rays contribute 0 whenever the polygon is two-dimensional).
inline std::set<Rat> finite_slopes(const NewtonPolygon& np) {
  std::set<Rat> out;
  const auto& h = np.hull;
  if (np.leftward_closed) {
    long vmax = 0;
    for (const auto& p : np.points) vmax = std::max(vmax, p.second);
    if (vmax > 0) out.insert(Rat(0));  // the two rays
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
      const long du = h[i + 1].first - h[i].first;
      const long dv = h[i + 1].second - h[i].second;
      if (du != 0) out.insert(Rat(dv) / Rat(du));
    }
    return out;
  }
  if (h.size() < 2) return out;
  const std::size_t last = h.size() > 2 ? h.size() : 1;
  for (std::size_t i = 0; i < last; ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    const long du = b.first - a.first;
    if (du != 0) out.insert(Rat(b.second - a.second) / Rat(du));
  }
  return out;
}

enum class PolygonEnd { Zero, Infinity };

namespace detail {

// edges of the boundary cycle; a 2-vertex hull is a single segment
inline std::vector<std::pair<std::pair<long, long>, std::pair<long, long>>>
boundary_edges(const std::vector<std::pair<long, long>>& h, bool cycle) {
  std::vector<std::pair<std::pair<long, long>, std::pair<long, long>>> e;
  if (h.size() < 2) return e;
  const std::size_t last = cycle && h.size() > 2 ? h.size() : h.size() - 1;
  for (std::size_t i = 0; i < last; ++i)
    e.emplace_back(h[i], h[(i + 1) % h.size()]);
  return e;
}

inline bool hull_has_vertical(const std::vector<std::pair<long, long>>& h,
                              bool cycle) {
  for (const auto& [a, b] : boundary_edges(h, cycle))
    if (a.first == b.first) return true;
  return false;
}

}  // namespace detail

// Edge slopes at the requested end; vertical sides report the infinite
// slope at both ends. For sigma-form polygons the at-zero set reads the
// lower chain and the at-infinity set the upper chain, slope values as-is
// (convention fixed by the worked operators: the Bessel operator has
// at-infinity slope -1/2). A leftward-closed (dq-form) polygon does not
// separate ends: both requests return the full boundary slope set, i.e. the
// right chain plus the two horizontal rays.
inline std::vector<Slope> slopes(const NewtonPolygon& np, PolygonEnd end) {
  std::set<Rat> fin;
  bool has_vertical = false;
  const auto& h = np.hull;

  if (np.leftward_closed) {
    long vmax = 0;
    for (const auto& p : np.points) vmax = std::max(vmax, p.second);
    if (vmax > 0) fin.insert(Rat(0));  // the two rays
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
      const long du = h[i + 1].first - h[i].first;
      const long dv = h[i + 1].second - h[i].second;
      if (du == 0) has_vertical = true;
      else fin.insert(Rat(dv) / Rat(du));
    }
  } else if (h.size() >= 2) {
    has_vertical = detail::hull_has_vertical(h, true);
    // lower chain: vertices sorted by (u, v); upper chain: by (u, -v)
    std::vector<std::pair<long, long>> pts = h;
    if (end == PolygonEnd::Zero) {
      std::sort(pts.begin(), pts.end());
      // keep only vertices on the lower chain: walk hull CCW from lex-min to
      // the rightmost-lowest vertex
      std::size_t start = 0, stop = 0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < h[start]) start = i;
        if (h[i].first > h[stop].first ||
            (h[i].first == h[stop].first && h[i].second < h[stop].second))
          stop = i;
      }
      for (std::size_t i = start; i != stop; i = (i + 1) % h.size()) {
        const auto& a = h[i];
        const auto& b = h[(i + 1) % h.size()];
        if (a.first != b.first)
          fin.insert(Rat(b.second - a.second) / Rat(b.first - a.first));
      }
    } else {
      std::size_t start = 0, stop = 0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i].first < h[start].first ||
            (h[i].first == h[start].first && h[i].second > h[start].second))
          start = i;
        if (h[i].first > h[stop].first ||
            (h[i].first == h[stop].first && h[i].second > h[stop].second))
          stop = i;
      }
      // upper chain runs backward in CCW order from leftmost-top
      for (std::size_t i = start; i != stop;
           i = (i + h.size() - 1) % h.size()) {
        const auto& a = h[i];
        const auto& b = h[(i + h.size() - 1) % h.size()];
        if (a.first != b.first)
          fin.insert(Rat(b.second - a.second) / Rat(b.first - a.first));
      }
    }
  }
  std::vector<Slope> out;
  for (const auto& v : fin) out.push_back(Slope::of(v));
  if (has_vertical) out.push_back(Slope::inf());
  return out;
}

// The lattice map (u, v) -> (u+v, -v) that intertwines the Fourier
// transformations with the polygon. A bijection on the plane, so it maps
// hull to hull; closure flags are preserved (leftward rays map to leftward
// rays).
inline NewtonPolygon polygon_fourier_image(const NewtonPolygon& np) {
  NewtonPolygon out;
  out.form = np.form;
  out.leftward_closed = np.leftward_closed;
  out.points = np.points;
  for (auto& p : out.points) p = {p.first + p.second, -p.second};
  long vmin = out.points.front().second;
  for (const auto& p : out.points) vmin = std::min(vmin, p.second);
  for (auto& p : out.points) p.second -= vmin;
  out.hull = out.leftward_closed ? detail::right_chain(out.points)
                                 : detail::convex_hull(out.points);
  return out;
}

// Slope action of the Fourier transformations: lambda -> -lambda/(1+lambda),
// infinity -> -1, -1 -> infinity.
inline Slope slope_fourier_image(const Slope& s) {
  if (s.infinite) return Slope::of(Rat(-1));
  if (s.value == Rat(-1)) return Slope::inf();
  return Slope::of(-s.value / (Rat(1) + s.value));
}

// Every boundary slope value including verticals; for leftward-closed
// polygons the rays count. Used by the Fourier commutation checks.
inline std::set<Slope> all_boundary_slopes(const NewtonPolygon& np) {
  std::set<Slope> out;
  if (np.leftward_closed) {
    long vmax = 0;
    for (const auto& p : np.points) vmax = std::max(vmax, p.second);
    if (vmax > 0) out.insert(Slope::of(Rat(0)));
    for (std::size_t i = 0; i + 1 < np.hull.size(); ++i) {
      const long du = np.hull[i + 1].first - np.hull[i].first;
      const long dv = np.hull[i + 1].second - np.hull[i].second;
      out.insert(du == 0 ? Slope::inf() : Slope::of(Rat(dv) / Rat(du)));
    }
    return out;
  }
  for (const auto& [a, b] : detail::boundary_edges(np.hull, true)) {
    const long du = b.first - a.first;
    out.insert(du == 0 ? Slope::inf()
                       : Slope::of(Rat(b.second - a.second) / Rat(du)));
  }
  return out;
}

}  // namespace qdiff
