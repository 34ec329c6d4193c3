#pragma once

// The W_n recursion of generalized circles, the cell complex it induces on
// I_d, and sampled verification of Markov compatibility.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "hurwitz/cf.hpp"
#include "hurwitz/circle.hpp"

namespace hurwitz {

// ---------------------------------------------------------------------------
// W_n recursion

struct WResult {
  std::vector<GenCircle> curves;  // sides of I first, then by generation
  std::vector<int> generation;    // 0 for the sides
  int n0 = 0;                     // last generation that contributed a new curve
  bool stabilized = false;
};

namespace detail {

/// Lattice points within Euclidean distance `reach` of the box [lo, hi].
inline std::vector<std::pair<long long, long long>> lattice_in_box(cplx lo, cplx hi, double reach,
                                                                   const FieldConfig& f) {
  std::vector<std::pair<long long, long long>> out;
  const double wi = f.omega.imag(), wr = f.omega.real();
  long long y0 = static_cast<long long>(std::floor((lo.imag() - reach) / wi));
  long long y1 = static_cast<long long>(std::ceil((hi.imag() + reach) / wi));
  for (long long Y = y0; Y <= y1; ++Y) {
    long long x0 = static_cast<long long>(std::floor(lo.real() - reach - Y * wr));
    long long x1 = static_cast<long long>(std::ceil(hi.real() + reach - Y * wr));
    for (long long X = x0; X <= x1; ++X) out.push_back({X, Y});
  }
  return out;
}

/// Primitive lattice vector parallel to a line with integer data, as a
/// Euclidean length.
inline double line_period(const GenCircle& w) {
  const auto& f = w.field();
  // lattice vectors v = X + Y w with Re(conj(B) v) = 0: lx X + ly Y = 0
  BigInt lx = 2 * w.B1() + f.trace * w.B2(), ly = f.trace * w.B1() + 2 * f.omega_norm * w.B2();
  BigInt g = boost::multiprecision::gcd(lx, ly);
  double X = static_cast<double>(BigInt(ly / g)), Y = static_cast<double>(BigInt(-lx / g));
  return std::abs(f.to_complex(X, Y));
}

}  // namespace detail

/// One recursion step from the curve g: the inverted curve w = 1/g meets
/// the open cell I + b inside I^{-1} along an arc, and w - b is emitted.
inline std::vector<GenCircle> recursion_step(const GenCircle& g, const FieldConfig& f) {
  const GenCircle w = g.inverted();
  const auto sides = boundary_curves(f);
  std::vector<GenCircle> inv_sides;
  for (const auto& s : sides) inv_sides.push_back(s.inverted());
  const double R = std::sqrt(static_cast<double>(f.R_sq));

  std::vector<std::pair<long long, long long>> cands;
  std::pair<double, double> line_window{0, 0};
  if (w.is_line()) {
    // Far along the line 1/q is near 0, so every lattice translate there is
    // admissible; one lattice period of that far zone, plus the near part,
    // represents every distinct translate.
    const double r_in = domain_clearance(0.0, f);
    const double T = 1.0 / r_in + 2.0 * R + 4.0 + detail::line_period(w);
    line_window = {-T, T};
    cplx a = w.point(-T), b = w.point(T);
    cplx lo(std::min(a.real(), b.real()), std::min(a.imag(), b.imag()));
    cplx hi(std::max(a.real(), b.real()), std::max(a.imag(), b.imag()));
    cands = detail::lattice_in_box(lo, hi, R + 1e-9, f);
  } else {
    cplx c = w.center();
    double r = w.radius();
    cands = detail::lattice_in_box(c - cplx(r, r), c + cplx(r, r), R + 1e-9, f);
  }

  std::vector<GenCircle> out;
  std::vector<GenCircle> local(inv_sides.begin(), inv_sides.end());
  for (const auto& [X, Y] : cands) {
    const cplx bc = f.to_complex(static_cast<double>(X), static_cast<double>(Y));
    if (w.distance(bc) > R + 1e-9) continue;
    double lo, hi;
    if (w.is_line()) {
      double tb = w.param_of(bc);
      if (tb < line_window.first || tb > line_window.second) continue;
      lo = tb - R - 1e-6;
      hi = tb + R + 1e-6;
    } else {
      lo = 0;
      hi = 2 * std::numbers::pi;
    }
    const QI b(BigInt(X), BigInt(Y), f.d);
    local.resize(inv_sides.size());
    for (const auto& s : sides) local.push_back(s.translated(-b));
    auto ts = breakpoints(w, local, lo, hi);
    const double scale = w.is_line() ? 1.0 : w.radius();
    bool hit = false;
    for (std::size_t i = 0; i + 1 < ts.size() && !hit; ++i) {
      if ((ts[i + 1] - ts[i]) * scale < 1e-9) continue;
      cplx q = w.point(0.5 * (ts[i] + ts[i + 1]));
      hit = in_domain_float(q - bc, f, 1e-12) && std::abs(q) > 0 && in_domain_float(1.0 / q, f, -1e-9);
    }
    if (hit) out.push_back(w.translated(b));
  }
  return out;
}

/// Runs the recursion without throwing; `stabilized` reports the outcome.
inline WResult generate_W_partial(const FieldConfig& f, int max_iter) {
  WResult res;
  std::set<GenCircle> known;
  std::vector<GenCircle> frontier;
  for (const auto& s : boundary_curves(f)) {
    known.insert(s);
    res.curves.push_back(s);
    res.generation.push_back(0);
    frontier.push_back(s);
  }
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<GenCircle> next;
    for (const auto& g : frontier)
      for (auto& t : recursion_step(g, f))
        if (known.insert(t).second) next.push_back(std::move(t));
    if (next.empty()) {
      res.stabilized = true;
      res.n0 = it - 1;
      return res;
    }
    std::sort(next.begin(), next.end());
    for (const auto& t : next) {
      res.curves.push_back(t);
      res.generation.push_back(it);
    }
    res.n0 = it;
    frontier = std::move(next);
  }
  return res;
}

inline WResult generate_W(const FieldConfig& f, int max_iter = 10) {
  if (max_iter < 1) throw Error(ErrorCode::invalid_argument, "max_iter must be >= 1");
  WResult r = generate_W_partial(f, max_iter);
  if (!r.stabilized)
    throw Error(ErrorCode::no_stabilization, "d=" + std::to_string(f.d) + ": " + std::to_string(r.curves.size()) +
                                                 " curves after " + std::to_string(max_iter) + " iterations");
  return r;
}

/// Curves produced by one more step over the whole set that are not in it.
inline std::vector<GenCircle> closure_defect(const std::vector<GenCircle>& curves, const FieldConfig& f) {
  std::set<GenCircle> known(curves.begin(), curves.end());
  std::set<GenCircle> extra;
  for (const auto& g : curves)
    for (auto& t : recursion_step(g, f))
      if (!known.count(t)) extra.insert(t);
  return {extra.begin(), extra.end()};
}

/// 2 off every curve, 1 on exactly one, 0 on two or more.
inline int local_dimension(const QR& z, const std::vector<GenCircle>& curves) {
  int on = 0;
  for (const auto& g : curves) on += g.sign_at(z) == 0;
  return on == 0 ? 2 : (on == 1 ? 1 : 0);
}

// ---------------------------------------------------------------------------
// cell complex

using SignVector = std::vector<signed char>;

struct Cell {
  int id = 0;
  int dim = 2;
  SignVector sign;
  std::vector<std::pair<Rational, Rational>> rep_exact;  // basis coordinates (2-cells)
  std::vector<cplx> rep_points;                          // 1-cells: midpoint, start, end
  double area = 0;                                       // grid estimate, 2-cells only
  std::array<double, 4> bbox{};                          // xmin, ymin, xmax, ymax
  std::vector<int> adjacent;                             // incident cells of other dimensions

  // 1-cells: carrying curve, parameter range (t1 may pass 2pi on circles),
  // the own-curve sign on the left of increasing parameter, and the 2-cells
  // on the left and right.
  int curve = -1;
  double t0 = 0, t1 = 0;
  signed char left_sign = 0;
  int left = -1, right = -1;
};

class CellComplex {
 public:
  int d = 1;
  int n0 = 0;
  int resolution = 0;
  std::vector<GenCircle> curves;
  std::vector<Cell> cells;

  const FieldConfig& field() const { return FieldConfig::get(d); }

  std::size_t count(int dim) const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [&](const Cell& c) { return c.dim == dim; }));
  }

  double area2() const {
    double a = 0;
    for (const auto& c : cells)
      if (c.dim == 2) a += c.area;
    return a;
  }

  static constexpr int kOutside = -1;  // not in I
  static constexpr int kOnCurve = -2;  // within tolerance of a curve
  static constexpr int kUnknown = -3;  // ray casting failed

  /// The 2-cell containing z, or one of the negative codes above.  The face
  /// is found by casting a ray to the first curve piece it meets.
  int locate(cplx z, double tol = 1e-11) const {
    const auto& f = field();
    const double clr = domain_clearance(z, f);
    if (clr < -tol) return kOutside;
    for (const auto& g : curves)
      if (g.distance(z) < tol) return kOnCurve;
    if (clr < 0) return kOutside;
    static constexpr double kAngles[] = {0.1234567, 2.3456789, 4.4567891, 1.3579246, 3.1415926 * 1.618};
    for (double ang : kAngles) {
      const cplx dir = std::polar(1.0, ang);
      double best = INFINITY;
      int bk = -1;
      bool degenerate = false;
      for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& g = curves[k];
        double ts[2];
        int n = 0;
        if (g.is_line()) {
          double slope = 2 * (std::conj(g.B_complex()) * dir).real();
          if (std::abs(slope) < 1e-14) continue;
          ts[n++] = -g.eval(z) / slope;
        } else {
          cplx w = z - g.center();
          double b = (w * std::conj(dir)).real(), c = std::norm(w) - g.radius() * g.radius();
          double disc = b * b - c;
          if (disc < 0) continue;
          if (disc < 1e-18 * (1 + b * b)) degenerate = true;
          double s = std::sqrt(disc);
          ts[n++] = -b - s;
          ts[n++] = -b + s;
        }
        for (int i = 0; i < n; ++i)
          if (ts[i] > 0 && ts[i] < best && domain_clearance(z + ts[i] * dir, f) > -1e-9) {
            best = ts[i];
            bk = static_cast<int>(k);
          }
      }
      if (bk < 0 || degenerate) continue;
      const cplx p = z + best * dir;
      const int e = piece_at(bk, p);
      if (e < 0) continue;
      const Cell& c = cells[static_cast<std::size_t>(e)];
      const signed char side = curves[static_cast<std::size_t>(bk)].eval(z) > 0 ? 1 : -1;
      const int face = side == c.left_sign ? c.left : c.right;
      if (face >= 0) return face;
    }
    return kUnknown;
  }

  /// Exact sign vector of a field point.
  SignVector sign_vector_exact(const QR& z) const {
    SignVector s(curves.size());
    for (std::size_t k = 0; k < curves.size(); ++k) s[k] = static_cast<signed char>(curves[k].sign_at(z));
    return s;
  }

  /// The cell containing the field point z (exact incidence, floating
  /// disambiguation among pieces of one curve and among 0-cells).
  int locate_exact(const QR& z) const {
    if (!closed_domain_contains(z)) return kOutside;
    SignVector s = sign_vector_exact(z);
    const int zeros = static_cast<int>(std::count(s.begin(), s.end(), 0));
    const cplx p = z.to_complex();
    if (zeros == 0) return locate(p, 0.0);
    int best = kUnknown;
    double bd = INFINITY;
    for (const auto& c : cells) {
      if (c.dim != (zeros == 1 ? 1 : 0)) continue;
      // vertex positions carry tangency error, so 0-cells go by distance only
      if (c.dim == 1) {
        bool ok = true;
        for (std::size_t k = 0; k < s.size() && ok; ++k)
          if ((s[k] == 0) != (c.sign[k] == 0)) ok = false;
        if (!ok) continue;
      }
      double dist = c.dim == 0 ? std::abs(c.rep_points[0] - p) : (piece_contains(c, p) ? 0.0 : INFINITY);
      if (dist < bd) {
        bd = dist;
        best = c.id;
      }
    }
    return best;
  }

  /// Grid points of a 2-cell (indices into the resolution^2 grid).
  const std::vector<std::int32_t>& grid_points(int cell) const { return members_.at(static_cast<std::size_t>(cell)); }

  /// Box centre of grid point idx, optionally jittered by (jx, jy) boxes.
  cplx grid_point(std::int32_t idx, double jx = 0, double jy = 0) const {
    long long i = idx / resolution, j = idx % resolution;
    return field().to_complex(gx0_ + (static_cast<double>(i) + 0.5 + jx) * gdx_,
                              gy0_ + (static_cast<double>(j) + 0.5 + jy) * gdy_);
  }

 private:
  friend CellComplex build_cells(const std::vector<GenCircle>&, const FieldConfig&, int, int);

  bool piece_contains(const Cell& c, cplx p) const {
    const auto& g = curves[static_cast<std::size_t>(c.curve)];
    if (g.distance(p) > 1e-9) return false;
    double t = g.param_of(p);
    const double slack = g.is_line() ? 1e-12 : 1e-12 / g.radius();
    if (t >= c.t0 - slack && t <= c.t1 + slack) return true;
    return !g.is_line() && t + 2 * std::numbers::pi >= c.t0 - slack && t + 2 * std::numbers::pi <= c.t1 + slack;
  }

  /// The 1-cell of curve k through p, or -1 at an endpoint.
  int piece_at(int k, cplx p) const {
    const auto& g = curves[static_cast<std::size_t>(k)];
    double t = g.param_of(p);
    const double guard = g.is_line() ? 1e-9 : 1e-9 / g.radius();
    for (int e : pieces_[static_cast<std::size_t>(k)]) {
      const Cell& c = cells[static_cast<std::size_t>(e)];
      for (double tt : {t, t + 2 * std::numbers::pi}) {
        if (tt > c.t0 + guard && tt < c.t1 - guard) return e;
        if (std::abs(tt - c.t0) <= guard || std::abs(tt - c.t1) <= guard) return -1;
      }
    }
    return -1;
  }

  std::vector<std::vector<int>> pieces_;  // 1-cells per curve
  std::vector<std::vector<std::int32_t>> members_;
  double gx0_ = 0, gy0_ = 0, gdx_ = 0, gdy_ = 0;
};

namespace detail {

/// Direction and signed curvature of a curve piece leaving its endpoint.
struct HalfEdge {
  int piece;     // 1-cell index among pieces
  bool forward;  // leaves the start along increasing parameter
  double angle, kappa;
};

inline cplx tangent(const GenCircle& g, double t) { return g.is_line() ? g.point(1.0) - g.point(0.0) : cplx(0, 1) * std::polar(1.0, t); }

}  // namespace detail

/// Cells induced by the curves on I_d.  1-cells are curve pieces between
/// crossings, 0-cells clustered crossings, and 2-cells the faces of the
/// arrangement, traced around vertices.  A resolution x resolution grid in
/// basis coordinates, classified by exact signs, gives areas and the interior
/// sample points of each face.
inline CellComplex build_cells(const std::vector<GenCircle>& curves, const FieldConfig& f, int resolution,
                               int n0 = 0) {
  if (resolution < 64) throw Error(ErrorCode::invalid_argument, "resolution must be >= 64");
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const double two_pi = 2 * std::numbers::pi;
  CellComplex cx;
  cx.d = f.d;
  cx.n0 = n0;
  cx.resolution = resolution;
  cx.curves = curves;
  const std::size_t nc = curves.size();

  // ---- curve pieces
  struct Piece {
    int curve;
    double t0, t1;
    cplx a, b, mid;
    int va = -1, vb = -1;
    int face[2] = {-1, -1};  // left, right
  };
  std::vector<Piece> pieces;
  std::vector<cplx> crossings;
  auto on_two = [&](cplx p) {
    int on = 0;
    for (const auto& g : curves) on += g.distance(p) < 1e-9;
    return on >= 2;
  };
  for (std::size_t k = 0; k < nc; ++k) {
    const auto& g = curves[k];
    const double scale = g.is_line() ? 1.0 : g.radius();
    std::vector<std::pair<double, double>> spans;
    for (const auto& [lo, hi] : clip_to_domain(g, f)) {
      auto ts = breakpoints(g, curves, lo, hi);
      for (std::size_t i = 0; i + 1 < ts.size(); ++i)
        if ((ts[i + 1] - ts[i]) * scale >= 1e-10) spans.push_back({ts[i], ts[i + 1]});
    }
    // a circle piece running through the parameter seam is one piece
    if (!g.is_line() && spans.size() >= 2 && spans.front().first == 0.0 && spans.back().second == two_pi &&
        !on_two(g.point(0.0))) {
      spans.front() = {spans.back().first, spans.front().second + two_pi};
      spans.pop_back();
    }
    for (const auto& [t0, t1] : spans) {
      Piece p{static_cast<int>(k), t0, t1, g.point(t0), g.point(t1), g.point(0.5 * (t0 + t1))};
      pieces.push_back(p);
      crossings.push_back(p.a);
      crossings.push_back(p.b);
    }
  }

  // ---- vertices: clustered crossings; seam points of free circles become
  // pseudo-vertices that are not 0-cells
  std::vector<cplx> verts;
  std::vector<bool> real_vertex;
  auto vertex_of = [&](cplx p) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (std::abs(verts[i] - p) < 1e-7) return static_cast<int>(i);
    verts.push_back(p);
    real_vertex.push_back(on_two(p));
    return static_cast<int>(verts.size() - 1);
  };
  std::sort(crossings.begin(), crossings.end(),
            [](cplx a, cplx b) { return std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag()); });
  for (cplx p : crossings) vertex_of(p);
  for (auto& p : pieces) {
    p.va = vertex_of(p.a);
    p.vb = vertex_of(p.b);
  }

  // ---- half-edges sorted counter-clockwise around each vertex
  std::vector<std::vector<int>> around(verts.size());  // half-edge ids h = 2 * piece + (backward ? 1 : 0)
  std::vector<double> h_angle(2 * pieces.size()), h_kappa(2 * pieces.size());
  for (std::size_t e = 0; e < pieces.size(); ++e) {
    const auto& p = pieces[e];
    const auto& g = curves[static_cast<std::size_t>(p.curve)];
    const double kappa = g.is_line() ? 0.0 : 1.0 / g.radius();
    cplx d0 = detail::tangent(g, p.t0), d1 = -detail::tangent(g, p.t1);
    for (int s = 0; s < 2; ++s) {
      cplx dv = s == 0 ? d0 : d1;
      double a = std::atan2(dv.imag(), dv.real());
      if (a < 0) a += two_pi;
      if (a > two_pi - 1e-9) a = 0;
      h_angle[2 * e + s] = a;
      h_kappa[2 * e + s] = s == 0 ? kappa : -kappa;
    }
    around[static_cast<std::size_t>(p.va)].push_back(static_cast<int>(2 * e));
    around[static_cast<std::size_t>(p.vb)].push_back(static_cast<int>(2 * e + 1));
  }
  for (auto& lst : around)
    std::sort(lst.begin(), lst.end(), [&](int x, int y) {
      if (std::abs(h_angle[x] - h_angle[y]) > 1e-6) return h_angle[x] < h_angle[y];
      return h_kappa[x] < h_kappa[y];
    });
  auto origin = [&](int h) { return h % 2 == 0 ? pieces[h / 2].va : pieces[h / 2].vb; };
  auto dest = [&](int h) { return h % 2 == 0 ? pieces[h / 2].vb : pieces[h / 2].va; };

  // ---- trace cycles: next(h) is the outgoing half-edge just clockwise of twin(h)
  std::vector<int> cycle_of(2 * pieces.size(), -1);
  std::vector<std::vector<int>> cycles;
  for (int h0 = 0; h0 < static_cast<int>(2 * pieces.size()); ++h0) {
    if (cycle_of[h0] >= 0) continue;
    const int cid = static_cast<int>(cycles.size());
    cycles.emplace_back();
    for (int h = h0; cycle_of[h] < 0;) {
      cycle_of[h] = cid;
      cycles.back().push_back(h);
      const auto& lst = around[static_cast<std::size_t>(dest(h))];
      const int tw = h ^ 1;
      auto it = std::find(lst.begin(), lst.end(), tw);
      std::size_t pos = static_cast<std::size_t>(it - lst.begin());
      h = lst[(pos + lst.size() - 1) % lst.size()];
    }
    (void)origin;
  }

  // cycle orientation by sampled signed area; the clockwise cycle outside I
  // is the unbounded face
  auto sample_half = [&](int h, int n) {
    const auto& p = pieces[static_cast<std::size_t>(h / 2)];
    const auto& g = curves[static_cast<std::size_t>(p.curve)];
    std::vector<cplx> pts;
    for (int i = 0; i < n; ++i) {
      double u = static_cast<double>(i) / n;
      pts.push_back(g.point(h % 2 == 0 ? p.t0 + u * (p.t1 - p.t0) : p.t1 - u * (p.t1 - p.t0)));
    }
    return pts;
  };
  auto left_point = [&](int h, double eps) {
    const auto& p = pieces[static_cast<std::size_t>(h / 2)];
    const auto& g = curves[static_cast<std::size_t>(p.curve)];
    double tm = 0.5 * (p.t0 + p.t1);
    cplx dir = detail::tangent(g, tm) / std::abs(detail::tangent(g, tm));
    if (h % 2) dir = -dir;
    return g.point(tm) + cplx(0, eps) * dir;
  };
  std::vector<int> face_of_cycle(cycles.size(), -1);
  int nfaces = 0;
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    double area = 0;
    std::vector<cplx> poly;
    for (int h : cycles[c])
      for (cplx q : sample_half(h, 64)) poly.push_back(q);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      cplx a = poly[i], b = poly[(i + 1) % poly.size()];
      area += a.real() * b.imag() - a.imag() * b.real();
    }
    if (domain_clearance(left_point(cycles[c].front(), 1e-7), f) < 0) continue;  // outside I
    if (area <= 0) {
      std::ostringstream os;
      os << "arrangement has a face with a hole near " << poly.front() << " (cycle of " << cycles[c].size()
         << " pieces, area " << area << ")";
      for (int h : cycles[c]) os << " [" << curves[static_cast<std::size_t>(pieces[static_cast<std::size_t>(h / 2)].curve)].to_string() << " " << pieces[static_cast<std::size_t>(h / 2)].a << "->" << pieces[static_cast<std::size_t>(h / 2)].b << " " << (h % 2) << "]";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
    face_of_cycle[c] = nfaces++;
  }

  // ---- 2-cells
  cx.cells.resize(static_cast<std::size_t>(nfaces));
  for (int i = 0; i < nfaces; ++i) {
    cx.cells[static_cast<std::size_t>(i)].id = i;
    cx.cells[static_cast<std::size_t>(i)].dim = 2;
    cx.cells[static_cast<std::size_t>(i)].bbox = {1e9, 1e9, -1e9, -1e9};
  }
  for (std::size_t e = 0; e < pieces.size(); ++e)
    for (int s = 0; s < 2; ++s) pieces[e].face[s] = face_of_cycle[static_cast<std::size_t>(cycle_of[2 * e + s])];

  // ---- 1-cells
  cx.pieces_.assign(nc, {});
  const int first1 = nfaces;
  for (std::size_t e = 0; e < pieces.size(); ++e) {
    const auto& p = pieces[e];
    const auto& g = curves[static_cast<std::size_t>(p.curve)];
    Cell c;
    c.id = first1 + static_cast<int>(e);
    c.dim = 1;
    c.curve = p.curve;
    c.t0 = p.t0;
    c.t1 = p.t1;
    c.rep_points = {p.mid, p.a, p.b};
    c.sign.resize(nc);
    for (std::size_t j = 0; j < nc; ++j)
      c.sign[j] = static_cast<int>(j) == p.curve ? 0 : (curves[j].eval(p.mid) > 0 ? 1 : -1);
    const double tm = 0.5 * (p.t0 + p.t1);
    cplx lv = cplx(0, 1) * detail::tangent(g, tm);
    c.left_sign = (lv * std::conj(g.normal(tm))).real() > 0 ? 1 : -1;
    c.left = p.face[0];
    c.right = p.face[1];
    double xs[] = {p.a.real(), p.b.real(), p.mid.real()}, ys[] = {p.a.imag(), p.b.imag(), p.mid.imag()};
    c.bbox = {*std::min_element(xs, xs + 3), *std::min_element(ys, ys + 3), *std::max_element(xs, xs + 3),
              *std::max_element(ys, ys + 3)};
    for (int fc : {c.left, c.right})
      if (fc >= 0) {
        c.adjacent.push_back(fc);
        cx.cells[static_cast<std::size_t>(fc)].adjacent.push_back(c.id);
      }
    cx.pieces_[static_cast<std::size_t>(p.curve)].push_back(c.id);
    cx.cells.push_back(std::move(c));
  }

  // face sign vectors from any boundary piece: its signs plus the own side
  for (std::size_t e = 0; e < pieces.size(); ++e) {
    const Cell& c = cx.cells[static_cast<std::size_t>(first1) + e];
    for (int s = 0; s < 2; ++s) {
      int fc = s == 0 ? c.left : c.right;
      if (fc < 0) continue;
      SignVector sv = c.sign;
      sv[static_cast<std::size_t>(c.curve)] = static_cast<signed char>(s == 0 ? c.left_sign : -c.left_sign);
      auto& face = cx.cells[static_cast<std::size_t>(fc)];
      if (face.sign.empty()) face.sign = sv;
    }
  }

  // ---- 0-cells
  std::vector<int> vcell(verts.size(), -1);
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (!real_vertex[v]) continue;
    Cell c;
    c.id = static_cast<int>(cx.cells.size());
    c.dim = 0;
    c.rep_points = {verts[v]};
    c.bbox = {verts[v].real(), verts[v].imag(), verts[v].real(), verts[v].imag()};
    c.sign.resize(nc);
    for (std::size_t j = 0; j < nc; ++j)
      c.sign[j] = curves[j].distance(verts[v]) < 1e-7 ? 0 : (curves[j].eval(verts[v]) > 0 ? 1 : -1);
    vcell[v] = c.id;
    cx.cells.push_back(std::move(c));
  }
  for (std::size_t e = 0; e < pieces.size(); ++e)
    for (int v : {pieces[e].va, pieces[e].vb})
      if (vcell[static_cast<std::size_t>(v)] >= 0) {
        auto& ec = cx.cells[static_cast<std::size_t>(first1) + e];
        ec.adjacent.push_back(vcell[static_cast<std::size_t>(v)]);
        cx.cells[static_cast<std::size_t>(vcell[static_cast<std::size_t>(v)])].adjacent.push_back(ec.id);
      }

  // ---- grid: X_i = Xlo + (2i+1)(Xhi - Xlo)/(2m), scaled by the integer D
  const int m = resolution;
  Rational Xlo = f.vertices[0].first, Xhi = Xlo, Ylo = f.vertices[0].second, Yhi = Ylo;
  for (const auto& [X, Y] : f.vertices) {
    Xlo = std::min(Xlo, X);
    Xhi = std::max(Xhi, X);
    Ylo = std::min(Ylo, Y);
    Yhi = std::max(Yhi, Y);
  }
  BigInt L = 1;
  for (const Rational* r : {&Xlo, &Xhi, &Ylo, &Yhi}) L = boost::multiprecision::lcm(L, BigInt(denominator(*r)));
  const long long D = 2LL * m * static_cast<long long>(L);
  auto scaled = [&](const Rational& r) { return static_cast<long long>(BigInt(numerator(r) * (L / denominator(r)))); };
  const long long xlo = scaled(Xlo), xhi = scaled(Xhi), ylo = scaled(Ylo), yhi = scaled(Yhi);
  auto px = [&](long long i) { return xlo * 2 * m + (2 * i + 1) * (xhi - xlo); };
  auto py = [&](long long j) { return ylo * 2 * m + (2 * j + 1) * (yhi - ylo); };
  cx.gx0_ = static_cast<double>(Xlo);
  cx.gy0_ = static_cast<double>(Ylo);
  cx.gdx_ = static_cast<double>(Xhi - Xlo) / m;
  cx.gdy_ = static_cast<double>(Yhi - Ylo) / m;
  const double cell_area = f.covolume * cx.gdx_ * cx.gdy_;
  const bool small = std::all_of(curves.begin(), curves.end(), [](const GenCircle& g) { return g.fits_i64(); });

  // exact sign classes of grid points, 8-connected components of equal class,
  // then one ray cast per component to find its face
  std::map<SignVector, int> class_of;
  std::vector<int> cls(static_cast<std::size_t>(m) * m, -1);
  SignVector s(nc);
  for (long long i = 0; i < m; ++i)
    for (long long j = 0; j < m; ++j) {
      const long long X = px(i), Y = py(j);
      bool inside = true;
      for (const auto& h : f.halfplanes)
        if (static_cast<__int128>(h.ax) * X + static_cast<__int128>(h.ay) * Y >= static_cast<__int128>(h.c) * D)
          inside = false;
      if (!inside) continue;
      bool on = false;
      for (std::size_t k = 0; k < nc && !on; ++k) {
        int sg = small ? curves[k].sign_at_scaled_i64(X, Y, D)
                       : curves[k].sign_at_scaled<BigInt>(BigInt(X), BigInt(Y), BigInt(D));
        on = sg == 0;
        s[k] = static_cast<signed char>(sg);
      }
      if (on) continue;
      cls[static_cast<std::size_t>(i * m + j)] = class_of.try_emplace(s, static_cast<int>(class_of.size())).first->second;
    }
  cx.members_.assign(static_cast<std::size_t>(nfaces), {});
  std::vector<char> seen(static_cast<std::size_t>(m) * m, 0);
  for (std::size_t start = 0; start < seen.size(); ++start) {
    if (cls[start] < 0 || seen[start]) continue;
    std::vector<std::int32_t> comp;
    std::deque<std::size_t> q{start};
    seen[start] = 1;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      comp.push_back(static_cast<std::int32_t>(u));
      long long i = static_cast<long long>(u) / m, j = static_cast<long long>(u) % m;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          long long a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= m || b >= m) continue;
          std::size_t v = static_cast<std::size_t>(a * m + b);
          if (cls[v] != cls[start] || seen[v]) continue;
          seen[v] = 1;
          q.push_back(v);
        }
    }
    int face = CellComplex::kUnknown;
    for (std::size_t t = 0; t < comp.size() && t < 8 && face < 0; ++t) face = cx.locate(cx.grid_point(comp[t * comp.size() / 8]), 0.0);
    if (face < 0)
      throw Error(ErrorCode::resolution_too_coarse, "grid component not attached to a face");
    auto& mem = cx.members_[static_cast<std::size_t>(face)];
    mem.insert(mem.end(), comp.begin(), comp.end());
  }
  for (int fc = 0; fc < nfaces; ++fc) {
    auto& mem = cx.members_[static_cast<std::size_t>(fc)];
    auto& c = cx.cells[static_cast<std::size_t>(fc)];
    if (mem.empty())
      throw Error(ErrorCode::resolution_too_coarse,
                  "2-cell " + std::to_string(fc) + " has no grid point at resolution " + std::to_string(m));
    std::sort(mem.begin(), mem.end());
    c.area = cell_area * static_cast<double>(mem.size());
    cplx centroid = 0;
    for (auto u : mem) {
      cplx p = cx.grid_point(u);
      centroid += p;
      c.bbox = {std::min(c.bbox[0], p.real()), std::min(c.bbox[1], p.imag()), std::max(c.bbox[2], p.real()),
                std::max(c.bbox[3], p.imag())};
    }
    centroid /= static_cast<double>(mem.size());
    std::int32_t best = mem.front();
    for (auto u : mem)
      if (std::abs(cx.grid_point(u) - centroid) < std::abs(cx.grid_point(best) - centroid)) best = u;
    for (auto u : {best, mem.front(), mem.back()}) {
      long long i = u / m, j = u % m;
      std::pair<Rational, Rational> e{Rational(px(i), D), Rational(py(j), D)};
      if (std::find(c.rep_exact.begin(), c.rep_exact.end(), e) != c.rep_exact.end()) continue;
      c.rep_exact.push_back(e);
      c.rep_points.push_back(cx.grid_point(u));
    }
  }
  for (auto& c : cx.cells) {
    std::sort(c.adjacent.begin(), c.adjacent.end());
    c.adjacent.erase(std::unique(c.adjacent.begin(), c.adjacent.end()), c.adjacent.end());
  }
  return cx;
}

// ---------------------------------------------------------------------------
// Markov compatibility

struct Violation {
  int property = 1;  // 1: TO_alpha splits a 2-cell; 2: a branch image spans two cells
  QI alpha;
  int cell = -1;
  cplx z;
};

struct ViolationReport {
  long long triples = 0;  // evaluated (alpha, cell, point) samples
  long long skipped = 0;  // samples too close to a curve to decide
  long long pairs = 0;
  long long property1 = 0;
  long long property2 = 0;
  std::vector<Violation> witnesses;  // first few, in deterministic order

  long long violations() const { return property1 + property2; }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Samples points of every 2-cell P and checks, for each non-empty digit
/// alpha up to the bound: all samples agree on membership in T O_alpha, and
/// all branch images h_alpha(z) = 1/(z + alpha) inside I fall in one cell.
inline ViolationReport verify_markov(const CellComplex& cx, long long digit_norm_bound, long long samples,
                                     std::uint64_t seed = 1, int threads = 1) {
  const auto& f = cx.field();
  std::vector<QI> digits;
  {
    auto empty = empty_digit_scan(f, std::max<long long>(digit_norm_bound, 4));
    for (auto& a : digits_up_to(f.d, digit_norm_bound))
      if (std::find(empty.begin(), empty.end(), a) == empty.end()) digits.push_back(std::move(a));
  }
  std::vector<int> twocells;
  for (const auto& c : cx.cells)
    if (c.dim == 2) twocells.push_back(c.id);
  const long long npairs = static_cast<long long>(digits.size() * twocells.size());
  ViolationReport total;
  total.pairs = npairs;
  if (npairs == 0) return total;
  const long long per = std::max<long long>(2, (samples + npairs - 1) / npairs);

  auto run = [&](long long p0, long long p1, ViolationReport& rep) {
    for (long long p = p0; p < p1; ++p) {
      const QI& alpha = digits[static_cast<std::size_t>(p) / twocells.size()];
      const int cell = twocells[static_cast<std::size_t>(p) % twocells.size()];
      const cplx ac = alpha.to_complex();
      const auto& mem = cx.grid_points(cell);
      std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(p))));
      std::uniform_int_distribution<std::size_t> pick(0, mem.size() - 1);
      std::uniform_real_distribution<double> jit(-0.5, 0.5);
      int member = -1, target = -1;  // first decided values
      bool v1 = false, v2 = false;
      for (long long k = 0; k < per; ++k) {
        cplx z;
        bool ok = false;
        for (int tries = 0; tries < 20 && !ok; ++tries) {
          z = cx.grid_point(mem[pick(rng)], jit(rng), jit(rng));
          ok = cx.locate(z, 1e-6) == cell;
        }
        if (!ok) {
          ++rep.skipped;
          continue;
        }
        const cplx h = 1.0 / (z + ac);
        const double clr = domain_clearance(h, f);
        if (std::abs(clr) < 1e-10) {
          ++rep.skipped;
          continue;
        }
        ++rep.triples;
        const int in = clr > 0 ? 1 : 0;
        if (member < 0) member = in;
        if (in != member && !v1) {
          v1 = true;
          ++rep.property1;
          rep.witnesses.push_back({1, alpha, cell, z});
        }
        if (!in) continue;
        const int q = cx.locate(h, 1e-11);
        if (q == CellComplex::kOnCurve) continue;
        if (target < 0) target = q;
        if (q != target && !v2) {
          v2 = true;
          ++rep.property2;
          rep.witnesses.push_back({2, alpha, cell, z});
        }
      }
    }
  };

  threads = std::max(1, threads);
  std::vector<ViolationReport> parts(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    long long a = npairs * t / threads, b = npairs * (t + 1) / threads;
    pool.emplace_back(run, a, b, std::ref(parts[static_cast<std::size_t>(t)]));
  }
  for (auto& th : pool) th.join();
  for (const auto& r : parts) {
    total.triples += r.triples;
    total.skipped += r.skipped;
    total.property1 += r.property1;
    total.property2 += r.property2;
    for (const auto& w : r.witnesses)
      if (total.witnesses.size() < 20) total.witnesses.push_back(w);
  }
  return total;
}

}  // namespace hurwitz
