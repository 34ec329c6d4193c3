#pragma once

// Generalized circles {z : A|z|^2 + 2 Re(conj(B) z) + C = 0} with A, C rational
// and B in K_d, kept as primitive integer data so that equal loci compare
// equal.  The floating helpers below (parametrization, pairwise crossings,
// subarc splitting) drive all arrangement computations built on top.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hurwitz/ring.hpp"

namespace hurwitz {

using cplx = std::complex<double>;

class GenCircle {
 public:
  GenCircle() = default;

  /// Canonicalizes (clears denominators, primitive, first nonzero positive).
  static GenCircle from_rational(int d, const Rational& A, const Rational& B1, const Rational& B2,
                                 const Rational& C) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    BigInt L = 1;
    for (const Rational* r : {&A, &B1, &B2, &C}) L = boost::multiprecision::lcm(L, BigInt(denominator(*r)));
    GenCircle g;
    g.d_ = d;
    g.A_ = BigInt(numerator(A) * (L / denominator(A)));
    g.B1_ = BigInt(numerator(B1) * (L / denominator(B1)));
    g.B2_ = BigInt(numerator(B2) * (L / denominator(B2)));
    g.C_ = BigInt(numerator(C) * (L / denominator(C)));
    g.normalize();
    return g;
  }

  static GenCircle from_integers(int d, BigInt A, BigInt B1, BigInt B2, BigInt C) {
    GenCircle g;
    g.d_ = d;
    g.A_ = std::move(A);
    g.B1_ = std::move(B1);
    g.B2_ = std::move(B2);
    g.C_ = std::move(C);
    g.normalize();
    return g;
  }

  /// The line ax X + ay Y = c in basis coordinates.
  static GenCircle line_from_halfplane(const HalfPlane& h, int d) {
    const auto& f = FieldConfig::get(d);
    // 2 Re(conj(B) z) = (2 B1 + t B2) X + (t B1 + 2 n B2) Y
    const int t = f.trace, n = f.omega_norm, det = 4 * n - t * t;
    Rational B1(2 * n * h.ax - t * h.ay, det), B2(2 * h.ay - t * h.ax, det);
    return from_rational(d, 0, B1, B2, -h.c);
  }

  /// |z - center|^2 = r2 with center = X + Y w.
  static GenCircle circle(int d, const Rational& X, const Rational& Y, const Rational& r2) {
    const auto& f = FieldConfig::get(d);
    return from_rational(d, 1, -X, -Y, f.norm_of(X, Y) - r2);
  }

  int d() const { return d_; }
  const BigInt& A() const { return A_; }
  const BigInt& B1() const { return B1_; }
  const BigInt& B2() const { return B2_; }
  const BigInt& C() const { return C_; }
  bool is_line() const { return A_ == 0; }
  const FieldConfig& field() const { return FieldConfig::get(d_); }

  /// |B|^2 - AC, positive for every stored curve.
  BigInt discriminant() const {
    const auto& f = field();
    return B1_ * B1_ + f.trace * B1_ * B2_ + f.omega_norm * B2_ * B2_ - A_ * C_;
  }

  /// Exact form value at X + Y w.
  Rational eval(const Rational& X, const Rational& Y) const {
    const auto& f = field();
    return Rational(A_) * f.norm_of(X, Y) + Rational(2 * B1_ + f.trace * B2_) * X +
           Rational(f.trace * B1_ + 2 * f.omega_norm * B2_) * Y + Rational(C_);
  }

  /// Exact sign of the form at the point (p + q w) / D, D > 0.
  template <class Int>
  int sign_at_scaled(const Int& p, const Int& q, const Int& D) const {
    const auto& f = field();
    BigInt P(p), Q(q), DD(D);
    BigInt v = A_ * (P * P + f.trace * P * Q + f.omega_norm * Q * Q) +
               ((2 * B1_ + f.trace * B2_) * P + (f.trace * B1_ + 2 * f.omega_norm * B2_) * Q) * DD +
               C_ * DD * DD;
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }

  /// Fast exact sign for small integer data (all products fit in 128 bits).
  int sign_at_scaled_i64(long long p, long long q, long long D) const {
    const auto& f = field();
    using i128 = __int128;
    i128 v = i128(a64_) * (i128(p) * p + i128(f.trace) * p * q + i128(f.omega_norm) * q * q) +
             (i128(lx64_) * p + i128(ly64_) * q) * D + i128(c64_) * D * D;
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }
  bool fits_i64() const { return small_; }

  int sign_at(const QuadRat<BigInt>& z) const {
    auto [X, Y, D] = z.coords_scaled();
    return sign_at_scaled<BigInt>(X, Y, D);
  }

  /// Image under z -> 1/z: (A, B, C) -> (C, conj(B), A).
  GenCircle inverted() const {
    const auto& f = field();
    return from_integers(d_, C_, BigInt(B1_ + f.trace * B2_), BigInt(-B2_), A_);
  }

  /// The locus shifted by -b: {z - b : z on this curve}.
  GenCircle translated(const QuadInt<BigInt>& b) const {
    const auto& f = field();
    // F(z + b): B' = B + A b, C' = A|b|^2 + 2 Re(conj(B) b) + C
    BigInt nb1 = B1_ + A_ * b.a(), nb2 = B2_ + A_ * b.b();
    BigInt re2 = (2 * B1_ + f.trace * B2_) * b.a() + (f.trace * B1_ + 2 * f.omega_norm * B2_) * b.b();
    return from_integers(d_, A_, nb1, nb2, BigInt(A_ * b.norm() + re2 + C_));
  }

  // ---- floating view ------------------------------------------------------

  cplx B_complex() const { return cb_; }

  double eval(cplx z) const {
    return ca_ * std::norm(z) + 2.0 * (std::conj(cb_) * z).real() + cc_;
  }

  cplx center() const { return -cb_ / ca_; }
  double radius() const { return radius_; }

  /// Euclidean distance from z to the locus.
  double distance(cplx z) const {
    if (is_line()) return std::abs(eval(z)) / (2.0 * std::abs(cb_));
    return std::abs(std::abs(z - center()) - radius_);
  }

  /// Circles: angle in [0, 2pi).  Lines: arclength from the foot of the
  /// perpendicular from the origin.
  cplx point(double t) const {
    if (is_line()) return p0_ + t * u_;
    return center() + radius_ * std::polar(1.0, t);
  }

  double param_of(cplx z) const {
    if (is_line()) return ((z - p0_) * std::conj(u_)).real();
    double a = std::arg(z - center());
    return a < 0 ? a + 2 * std::numbers::pi : a;
  }

  /// Unit normal at parameter t (points toward increasing form value).
  cplx normal(double t) const {
    if (is_line()) return cb_ / std::abs(cb_);
    cplx n = std::polar(1.0, t);
    return ca_ > 0 ? n : -n;
  }

  /// Parameters on this curve where it meets `h`.
  std::vector<double> crossings(const GenCircle& h) const {
    std::vector<double> out;
    const double A = h.ca_, C = h.cc_;
    const cplx B = h.cb_;
    if (is_line()) {
      // A t^2 + b t + c along p0 + t u
      double b = 2 * A * (p0_ * std::conj(u_)).real() + 2 * (std::conj(B) * u_).real();
      double c = h.eval(p0_);
      if (A == 0) {
        if (std::abs(b) > 1e-12 * std::abs(B)) out.push_back(-c / b);  // parallel lines never meet
        return out;
      }
      double disc = b * b - 4 * A * c;
      double scale = b * b + std::abs(4 * A * c) + 1e-300;
      if (disc < 0 && disc > -1e-13 * scale) disc = 0;
      if (disc < 0) return out;
      double s = std::sqrt(disc);
      double q = -0.5 * (b + (b >= 0 ? s : -s));
      if (q != 0) {
        double t1 = q / A, t2 = c / q;
        if (std::abs(t1 - t2) < 1e-6) {
          out.push_back(0.5 * (t1 + t2));  // tangency
        } else {
          out.push_back(t1);
          out.push_back(t2);
        }
      } else {
        out.push_back(0);
      }
      return out;
    }
    const cplx c0 = center();
    const double r = radius_;
    double P = 2 * r * (A * c0.real() + B.real());
    double Q = 2 * r * (A * c0.imag() + B.imag());
    double S = A * (std::norm(c0) + r * r) + 2 * (std::conj(B) * c0).real() + C;
    double M = std::hypot(P, Q);
    if (M < 1e-300) return out;
    double ratio = -S / M;
    if (ratio > 1 && ratio < 1 + 1e-12) ratio = 1;
    if (ratio < -1 && ratio > -1 - 1e-12) ratio = -1;
    if (std::abs(ratio) > 1) return out;
    double phi = std::atan2(Q, P), delta = std::acos(ratio);
    if (delta < 1e-6) delta = 0;  // tangency: one contact point
    for (int k = 0; k < (delta == 0 ? 1 : 2); ++k) {
      double t = k == 0 ? phi + delta : phi - delta;
      t = std::fmod(t, 2 * std::numbers::pi);
      if (t < 0) t += 2 * std::numbers::pi;
      out.push_back(t);
    }
    return out;
  }

  friend bool operator==(const GenCircle& x, const GenCircle& y) {
    return x.d_ == y.d_ && x.A_ == y.A_ && x.B1_ == y.B1_ && x.B2_ == y.B2_ && x.C_ == y.C_;
  }
  friend bool operator!=(const GenCircle& x, const GenCircle& y) { return !(x == y); }
  friend bool operator<(const GenCircle& x, const GenCircle& y) {
    return std::tie(x.A_, x.B1_, x.B2_, x.C_) < std::tie(y.A_, y.B1_, y.B2_, y.C_);
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[" << A_ << ", " << B1_ << (B2_ < 0 ? "" : "+") << B2_ << "w, " << C_ << "]";
    return os.str();
  }

 private:
  void normalize() {
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(A_, B1_),
                                          boost::multiprecision::gcd(B2_, C_));
    if (g == 0) throw Error(ErrorCode::invalid_argument, "zero curve");
    for (BigInt* v : {&A_, &B1_, &B2_, &C_}) {
      if (*v != 0) {
        if (*v < 0) g = -g;
        break;
      }
    }
    A_ /= g;
    B1_ /= g;
    B2_ /= g;
    C_ /= g;
    if (discriminant() <= 0) throw Error(ErrorCode::invalid_argument, "degenerate curve " + to_string());
    const auto& f = field();
    ca_ = static_cast<double>(A_);
    cc_ = static_cast<double>(C_);
    cb_ = f.to_complex(static_cast<double>(B1_), static_cast<double>(B2_));
    if (is_line()) {
      double nb = std::abs(cb_);
      u_ = cplx(0, 1) * cb_ / nb;
      p0_ = -cc_ * cb_ / (2 * nb * nb);
      radius_ = 0;
    } else {
      radius_ = std::sqrt(std::norm(cb_) / (ca_ * ca_) - cc_ / ca_);
    }
    auto small = [](const BigInt& v) { return boost::multiprecision::abs(v) < (BigInt(1) << 28); };
    small_ = small(A_) && small(B1_) && small(B2_) && small(C_);
    if (small_) {
      a64_ = static_cast<long long>(A_);
      c64_ = static_cast<long long>(C_);
      lx64_ = static_cast<long long>(2 * B1_ + f.trace * B2_);
      ly64_ = static_cast<long long>(f.trace * B1_ + 2 * f.omega_norm * B2_);
    }
  }

  int d_ = 1;
  BigInt A_, B1_, B2_, C_;
  double ca_ = 0, cc_ = 0, radius_ = 0;
  cplx cb_, u_, p0_;
  bool small_ = false;
  long long a64_ = 0, c64_ = 0, lx64_ = 0, ly64_ = 0;
};

inline GenCircle invert_circle(const GenCircle& g) { return g.inverted(); }

inline GenCircle translate_circle(const GenCircle& g, const QuadInt<BigInt>& b) {
  return g.translated(b);
}

/// Lines extending the sides of the closed fundamental domain I_d.
inline std::vector<GenCircle> boundary_curves(const FieldConfig& cfg) {
  std::vector<GenCircle> out;
  for (const auto& h : cfg.halfplanes) out.push_back(GenCircle::line_from_halfplane(h, cfg.d));
  return out;
}

/// Split `g` (restricted to [lo, hi] in its parameter) at every crossing
/// with `others`; returns the sorted breakpoints including lo and hi.
inline std::vector<double> breakpoints(const GenCircle& g, std::span<const GenCircle> others,
                                       double lo, double hi) {
  std::vector<double> ts{lo, hi};
  for (const auto& h : others) {
    if (h == g) continue;
    for (double t : g.crossings(h))
      if (t > lo && t < hi) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  // crossings at one point computed through different curves (tangencies in
  // particular) agree only to ~1e-8; merge them
  const double tol = 1e-7 / (g.is_line() ? 1.0 : g.radius());
  std::vector<double> out{ts.front()};
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i] - out.back() >= tol) {
      out.push_back(ts[i]);
    } else if (i + 1 == ts.size()) {
      out.back() = ts[i];  // keep the window end exact
    }
  }
  if (out.size() == 1) out.push_back(hi);
  out.front() = lo;
  return out;
}

/// Default parameter window: full circle, or a line segment long enough to
/// cover the disk of radius `reach` about the origin.
inline std::pair<double, double> param_window(const GenCircle& g, double reach = 2.0) {
  if (!g.is_line()) return {0.0, 2 * std::numbers::pi};
  double off = std::abs(g.point(0.0));
  double half = reach > off ? std::sqrt(reach * reach - off * off) : 0.0;
  return {-half, half};
}

/// Parameter intervals of g lying in the closed domain I_d.
inline std::vector<std::pair<double, double>> clip_to_domain(const GenCircle& g, const FieldConfig& cfg,
                                                             double min_len = 1e-12) {
  auto sides = boundary_curves(cfg);
  auto [lo, hi] = param_window(g, 2.0);
  auto ts = breakpoints(g, sides, lo, hi);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] < min_len) continue;
    cplx m = g.point(0.5 * (ts[i] + ts[i + 1]));
    if (in_domain_float(m, cfg, -1e-12)) {
      if (!out.empty() && std::abs(out.back().second - ts[i]) < 1e-15)
        out.back().second = ts[i + 1];
      else
        out.push_back({ts[i], ts[i + 1]});
    }
  }
  return out;
}

/// True iff the curve meets the interior of I_d + b (exact: the form takes
/// both signs on the closed polygon, so the zero set crosses its interior).
inline bool meets_domain_interior(const GenCircle& g, const FieldConfig& cfg) {
  // Convex form (A > 0 after canonical sign) or linear form: the maximum over
  // the polygon is at a vertex; the minimum is at a vertex, on an edge, or at
  // the circle centre when that lies inside.
  bool pos = false, neg = false;
  for (const auto& [X, Y] : cfg.vertices) {
    Rational v = g.eval(X, Y);
    pos |= v > 0;
    neg |= v < 0;
  }
  if (g.is_line()) return pos && neg;
  if (g.A() < 0) std::swap(pos, neg);  // canonical sign may make the form concave
  if (!pos) return false;               // polygon inside the closed disk
  if (neg) return true;
  // All vertices outside-or-on: the curve enters the interior only if the
  // form dips below zero somewhere on an edge or at the centre.
  const auto& f = cfg;
  Rational cX = -Rational(g.B1()) / Rational(g.A()), cY = -Rational(g.B2()) / Rational(g.A());
  auto sgn = [&](const Rational& X, const Rational& Y) {
    Rational v = g.eval(X, Y);
    if (g.A() < 0) v = -v;
    return v;
  };
  auto inside_closed = [&](const Rational& X, const Rational& Y) {
    for (const auto& h : f.halfplanes)
      if (h.ax * X + h.ay * Y > h.c) return false;
    return true;
  };
  if (inside_closed(cX, cY) && sgn(cX, cY) < 0) return true;
  const std::size_t nv = f.vertices.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& [X0, Y0] = f.vertices[i];
    const auto& [X1, Y1] = f.vertices[(i + 1) % nv];
    // minimize the convex quadratic along the edge: parameter s in [0, 1]
    Rational dX = X1 - X0, dY = Y1 - Y0;
    Rational a = Rational(g.A()) * f.norm_of(dX, dY);
    Rational fv0 = g.eval(X0, Y0), fv1 = g.eval(X1, Y1);
    // q(s) = a s^2 + b s + fv0 with q(1) = fv1
    Rational b = fv1 - fv0 - a;
    if (a == 0) continue;
    Rational s = -b / (2 * a);
    if (s <= 0 || s >= 1) continue;
    Rational v = a * s * s + b * s + fv0;
    if (g.A() < 0) v = -v;
    if (v < 0) return true;
  }
  return false;
}

}  // namespace hurwitz
