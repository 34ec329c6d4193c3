#pragma once

// Exact arithmetic in the rings of integers O_d of the five Euclidean
// imaginary quadratic fields K_d = Q(sqrt(-d)), d in {1, 2, 3, 7, 11}.
//
// Elements are stored as coordinates (a, b) over the integral basis {1, w},
// with w = sqrt(-d) for d = 1, 2 and w = (1 + sqrt(-d)) / 2 for d = 3, 7, 11.
// Every domain test is an integer comparison on those coordinates; nothing
// here touches floating point except the explicit *_float helpers.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hurwitz/error.hpp"

namespace hurwitz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::array<int, 5> kSupportedFields{1, 2, 3, 7, 11};

inline bool is_supported_field(int d) {
  for (int f : kSupportedFields)
    if (f == d) return true;
  return false;
}

/// Half-plane  ax*X + ay*Y <= c  in basis coordinates (z = X + Y w).
struct HalfPlane {
  int ax, ay, c;
};

struct Coord2 {
  int a, b;
};

struct FieldConfig {
  int d = 1;
  bool half_omega = false;  // w = (1 + sqrt(-d)) / 2
  int trace = 0;            // w + conj(w)
  int omega_norm = 1;       // w * conj(w); so w^2 = trace*w - omega_norm
  std::complex<double> omega;
  double covolume = 1.0;  // area of C / O_d, equal to area(I_d)
  Rational R_sq;          // squared circumradius of I_d about the origin
  std::vector<HalfPlane> halfplanes;
  std::vector<Coord2> excluded_translates;
  std::vector<Coord2> units;
  /// Vertices of I_d in basis coordinates, counter-clockwise.
  std::vector<std::pair<Rational, Rational>> vertices;

  std::size_t boundary_line_count() const { return halfplanes.size(); }

  /// |X + Y w|^2 for rational basis coordinates.
  Rational norm_of(const Rational& X, const Rational& Y) const {
    return X * X + trace * X * Y + omega_norm * Y * Y;
  }

  std::complex<double> to_complex(double X, double Y) const { return X + Y * omega; }

  /// Inverse of to_complex.
  std::pair<double, double> to_coords(std::complex<double> z) const {
    double Y = z.imag() / omega.imag();
    return {z.real() - Y * omega.real(), Y};
  }

  static const FieldConfig& get(int d);

 private:
  static FieldConfig make(int d);
};

inline FieldConfig FieldConfig::make(int d) {
  FieldConfig f;
  f.d = d;
  f.half_omega = (d % 4 == 3);
  f.trace = f.half_omega ? 1 : 0;
  f.omega_norm = f.half_omega ? (d + 1) / 4 : d;
  const double sd = std::sqrt(static_cast<double>(d));
  f.omega = f.half_omega ? std::complex<double>(0.5, sd / 2) : std::complex<double>(0.0, sd);
  f.covolume = f.omega.imag();
  if (!f.half_omega) {
    f.halfplanes = {{2, 0, 1}, {-2, 0, 1}, {0, 2, 1}, {0, -2, 1}};
    f.excluded_translates = {{1, 0}, {0, 1}};
    Rational h(1, 2);
    f.vertices = {{h, -h}, {h, h}, {-h, h}, {-h, -h}};
  } else {
    // |x| <= 1/2 and |y +- x/sqrt(d)| <= (d+1)/(4 sqrt(d)) with x = X + Y/2,
    // y = Y sqrt(d)/2, cleared of sqrt(d).
    const int p = 2 * d + 2, m = 2 * d - 2, c = d + 1;
    f.halfplanes = {{2, 1, 1}, {-2, -1, 1}, {4, p, c}, {-4, -p, c}, {-4, m, c}, {4, -m, c}};
    f.excluded_translates = {{1, 0}, {0, 1}, {1, -1}};
    // Vertices in (x, Y): (1/2, +-(d-1)/(2d)) and (0, +-(d+1)/(2d)); X = x - Y/2.
    auto v = [](Rational x, Rational Y) { return std::pair<Rational, Rational>{x - Y / 2, Y}; };
    Rational y1(d - 1, 2 * d), y0(d + 1, 2 * d), h(1, 2);
    f.vertices = {v(h, -y1), v(h, y1), v(0, y0), v(-h, y1), v(-h, -y1), v(0, -y0)};
  }
  if (d == 1)
    f.units = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  else if (d == 3)
    f.units = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  else
    f.units = {{1, 0}, {-1, 0}};
  f.R_sq = 0;
  for (const auto& [X, Y] : f.vertices) {
    Rational n = f.norm_of(X, Y);
    if (n > f.R_sq) f.R_sq = n;
  }
  return f;
}

inline const FieldConfig& FieldConfig::get(int d) {
  static const std::array<FieldConfig, 5> table{make(1), make(2), make(3), make(7), make(11)};
  for (std::size_t i = 0; i < kSupportedFields.size(); ++i)
    if (kSupportedFields[i] == d) return table[i];
  throw Error(ErrorCode::invalid_argument,
              "field d=" + std::to_string(d) + " not in {1,2,3,7,11}");
}

// ---------------------------------------------------------------------------
// integer helpers usable for both fixed-width and multiprecision integers

template <class Int>
Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

/// Nearest integer to n/D (D > 0), ties rounded up.
template <class Int>
Int nearest_div(const Int& n, const Int& D) {
  return floor_div<Int>(Int(2 * n + D), Int(2 * D));
}

template <class T>
bool in_closed_domain(const T& X, const T& Y, const T& D, const FieldConfig& cfg) {
  for (const auto& h : cfg.halfplanes)
    if (T(h.ax) * X + T(h.ay) * Y > T(h.c) * D) return false;
  return true;
}

/// Membership in I'_d = I_d minus its translates by the excluded list, for
/// the point (X/D, Y/D) with D > 0.
template <class T>
bool strict_domain_contains(const T& X, const T& Y, const T& D, const FieldConfig& cfg) {
  if (!in_closed_domain<T>(X, Y, D, cfg)) return false;
  for (const auto& t : cfg.excluded_translates)
    if (in_closed_domain<T>(T(X - T(t.a) * D), T(Y - T(t.b) * D), D, cfg)) return false;
  return true;
}

/// The unique lattice point beta with (X/D, Y/D) - beta in I'_d.
/// Checks the whole 3x3 neighbourhood and throws UNIQUENESS_VIOLATION unless
/// exactly one candidate passes.
template <class Int>
std::pair<Int, Int> round_coords_checked(const Int& X, const Int& Y, const Int& D,
                                         const FieldConfig& cfg) {
  const Int x0 = nearest_div<Int>(X, D), y0 = nearest_div<Int>(Y, D);
  std::optional<std::pair<Int, Int>> found;
  int hits = 0;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      Int p = x0 + i, q = y0 + j;
      if (strict_domain_contains<Int>(Int(X - p * D), Int(Y - q * D), D, cfg)) {
        ++hits;
        found = {p, q};
      }
    }
  if (hits != 1)
    throw Error(ErrorCode::uniqueness_violation,
                std::to_string(hits) + " lattice candidates in the strict domain");
  return *found;
}

/// Same result as round_coords_checked without the uniqueness audit.
template <class Int>
std::pair<Int, Int> round_coords(const Int& X, const Int& Y, const Int& D, const FieldConfig& cfg) {
  if (!cfg.half_omega) {
    // I'_d is exactly [-1/2, 1/2)^2 in basis coordinates.
    return {nearest_div<Int>(X, D), nearest_div<Int>(Y, D)};
  }
  const Int x0 = nearest_div<Int>(X, D), y0 = nearest_div<Int>(Y, D);
  static constexpr int order[9][2] = {{0, 0},  {1, 0},  {-1, 0}, {0, 1}, {0, -1},
                                      {1, -1}, {-1, 1}, {1, 1},  {-1, -1}};
  for (const auto& o : order) {
    Int p = x0 + o[0], q = y0 + o[1];
    if (strict_domain_contains<Int>(Int(X - p * D), Int(Y - q * D), D, cfg)) return {p, q};
  }
  throw Error(ErrorCode::uniqueness_violation, "no lattice candidate in the strict domain");
}

// ---------------------------------------------------------------------------

/// Element a + b w of O_d.
template <class Int = BigInt>
class QuadInt {
 public:
  QuadInt() = default;
  explicit QuadInt(int d) : d_(d) {}
  QuadInt(Int a, Int b, int d) : a_(std::move(a)), b_(std::move(b)), d_(d) {}

  static QuadInt from_int(Int a, int d) { return QuadInt(std::move(a), Int(0), d); }

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  int d() const { return d_; }
  const FieldConfig& field() const { return FieldConfig::get(d_); }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// |a + b w|^2 = a^2 + t ab + n b^2.
  Int norm() const {
    const auto& f = field();
    return a_ * a_ + Int(f.trace) * a_ * b_ + Int(f.omega_norm) * b_ * b_;
  }

  QuadInt conj() const {
    return QuadInt(Int(a_ + Int(field().trace) * b_), Int(-b_), d_);
  }

  bool is_unit() const { return norm() == 1; }

  std::complex<double> to_complex() const {
    return field().to_complex(static_cast<double>(a_), static_cast<double>(b_));
  }

  QuadInt operator-() const { return QuadInt(Int(-a_), Int(-b_), d_); }
  friend QuadInt operator+(const QuadInt& x, const QuadInt& y) {
    return QuadInt(Int(x.a_ + y.a_), Int(x.b_ + y.b_), x.d_);
  }
  friend QuadInt operator-(const QuadInt& x, const QuadInt& y) {
    return QuadInt(Int(x.a_ - y.a_), Int(x.b_ - y.b_), x.d_);
  }
  friend QuadInt operator*(const QuadInt& x, const QuadInt& y) {
    const auto& f = x.field();
    Int bb = x.b_ * y.b_;
    return QuadInt(Int(x.a_ * y.a_ - Int(f.omega_norm) * bb),
                   Int(x.a_ * y.b_ + x.b_ * y.a_ + Int(f.trace) * bb), x.d_);
  }
  QuadInt& operator+=(const QuadInt& y) { return *this = *this + y; }
  QuadInt& operator-=(const QuadInt& y) { return *this = *this - y; }
  QuadInt& operator*=(const QuadInt& y) { return *this = *this * y; }

  friend bool operator==(const QuadInt& x, const QuadInt& y) {
    return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const QuadInt& x, const QuadInt& y) { return !(x == y); }
  friend bool operator<(const QuadInt& x, const QuadInt& y) {
    return std::tie(x.a_, x.b_) < std::tie(y.a_, y.b_);
  }

  template <class Other>
  QuadInt<Other> cast() const {
    return QuadInt<Other>(static_cast<Other>(a_), static_cast<Other>(b_), d_);
  }

  std::string to_string() const;

 private:
  Int a_{0}, b_{0};
  int d_ = 1;
};

template <class Int>
Int qnorm(const QuadInt<Int>& x) {
  return x.norm();
}

template <class Int>
QuadInt<Int> unit_element(const Coord2& u, int d) {
  return QuadInt<Int>(Int(u.a), Int(u.b), d);
}

/// Canonical associate: for d = 1, 3 the associate with a > 0, b >= 0 (one
/// per sector of the unit group); for d = 2, 7, 11 the associate whose first
/// nonzero coordinate is positive.
template <class Int>
QuadInt<Int> canonical_associate(const QuadInt<Int>& x, QuadInt<Int>* unit_used = nullptr) {
  const auto& f = x.field();
  if (x.is_zero()) {
    if (unit_used) *unit_used = QuadInt<Int>::from_int(Int(1), x.d());
    return x;
  }
  for (const auto& u : f.units) {
    QuadInt<Int> uq = unit_element<Int>(u, x.d());
    QuadInt<Int> y = uq * x;
    bool ok = f.units.size() > 2 ? (y.a() > 0 && y.b() >= 0)
                                 : (y.a() > 0 || (y.a() == 0 && y.b() > 0));
    if (ok) {
      if (unit_used) *unit_used = uq;
      return y;
    }
  }
  throw Error(ErrorCode::invalid_argument, "no canonical associate found");
}

template <class Int>
struct DivMod {
  QuadInt<Int> q, r;
};

/// a = q b + r with r / b in I'_d.
template <class Int>
DivMod<Int> divmod_nearest(const QuadInt<Int>& a, const QuadInt<Int>& b, bool audit = false) {
  if (b.is_zero()) throw Error(ErrorCode::division_by_zero, "divmod_nearest by zero");
  const auto& f = a.field();
  QuadInt<Int> num = a * b.conj();
  Int D = b.norm();
  auto [p, q] = audit ? round_coords_checked<Int>(num.a(), num.b(), D, f)
                      : round_coords<Int>(num.a(), num.b(), D, f);
  QuadInt<Int> quo(p, q, a.d());
  return {quo, a - quo * b};
}

/// Exact quotient x / y, assuming y divides x.
template <class Int>
QuadInt<Int> exact_div(const QuadInt<Int>& x, const QuadInt<Int>& y) {
  QuadInt<Int> num = x * y.conj();
  Int D = y.norm();
  if (num.a() % D != 0 || num.b() % D != 0)
    throw Error(ErrorCode::invalid_argument, "exact_div: divisor does not divide");
  return QuadInt<Int>(Int(num.a() / D), Int(num.b() / D), x.d());
}

template <class Int>
QuadInt<Int> quad_gcd(QuadInt<Int> a, QuadInt<Int> b) {
  if (a.is_zero() && b.is_zero()) throw Error(ErrorCode::both_zero, "gcd(0, 0)");
  while (!b.is_zero()) {
    auto dm = divmod_nearest(a, b);
    a = std::move(b);
    b = std::move(dm.r);
  }
  return canonical_associate(a);
}

// ---------------------------------------------------------------------------

/// Field element num / den in lowest terms with den a canonical associate.
template <class Int = BigInt>
class QuadRat {
 public:
  QuadRat() = default;
  explicit QuadRat(int d) : num_(d), den_(QuadInt<Int>::from_int(Int(1), d)) {}
  explicit QuadRat(const QuadInt<Int>& x) : num_(x), den_(QuadInt<Int>::from_int(Int(1), x.d())) {}
  QuadRat(const QuadInt<Int>& num, const QuadInt<Int>& den) : num_(num), den_(den) {
    if (den.is_zero()) throw Error(ErrorCode::division_by_zero, "zero denominator");
    normalize();
  }

  const QuadInt<Int>& num() const { return num_; }
  const QuadInt<Int>& den() const { return den_; }
  int d() const { return num_.d(); }
  const FieldConfig& field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }

  /// (X, Y, D) with value = (X + Y w) / D and D = |den|^2 > 0.
  std::array<Int, 3> coords_scaled() const {
    QuadInt<Int> n = num_ * den_.conj();
    return {n.a(), n.b(), den_.norm()};
  }

  /// Exact basis coordinates.
  std::pair<Rational, Rational> coords() const {
    auto [X, Y, D] = coords_scaled();
    return {Rational(BigInt(X), BigInt(D)), Rational(BigInt(Y), BigInt(D))};
  }

  /// ht(z)^2 = max(|num|^2, |den|^2).
  Int height_sq() const {
    Int n = num_.norm(), m = den_.norm();
    return n > m ? n : m;
  }

  std::complex<double> to_complex() const {
    auto [X, Y, D] = coords_scaled();
    const double dd = static_cast<double>(D);
    return field().to_complex(static_cast<double>(X) / dd, static_cast<double>(Y) / dd);
  }

  QuadRat inverse() const {
    if (is_zero()) throw Error(ErrorCode::division_by_zero, "inverse of zero");
    return QuadRat(den_, num_);
  }

  friend QuadRat operator+(const QuadRat& x, const QuadRat& y) {
    return QuadRat(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
  }
  friend QuadRat operator-(const QuadRat& x, const QuadRat& y) {
    return QuadRat(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
  }
  friend QuadRat operator*(const QuadRat& x, const QuadRat& y) {
    return QuadRat(x.num_ * y.num_, x.den_ * y.den_);
  }
  friend QuadRat operator/(const QuadRat& x, const QuadRat& y) {
    return QuadRat(x.num_ * y.den_, x.den_ * y.num_);
  }
  QuadRat operator-() const { return QuadRat(-num_, den_); }

  friend bool operator==(const QuadRat& x, const QuadRat& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const QuadRat& x, const QuadRat& y) { return !(x == y); }
  friend bool operator<(const QuadRat& x, const QuadRat& y) {
    return std::tie(x.den_, x.num_) < std::tie(y.den_, y.num_);
  }

  std::string to_string() const;

 private:
  void normalize() {
    QuadInt<Int> g = quad_gcd(num_, den_);
    num_ = exact_div(num_, g);
    den_ = exact_div(den_, g);
    QuadInt<Int> u(num_.d());
    den_ = canonical_associate(den_, &u);
    num_ = num_ * u;
  }

  QuadInt<Int> num_;
  QuadInt<Int> den_;
};

template <class Int>
bool strict_domain_contains(const QuadRat<Int>& z) {
  auto [X, Y, D] = z.coords_scaled();
  return strict_domain_contains<Int>(X, Y, D, z.field());
}

template <class Int>
bool closed_domain_contains(const QuadRat<Int>& z) {
  auto [X, Y, D] = z.coords_scaled();
  return in_closed_domain<Int>(X, Y, D, z.field());
}

/// [z]: the unique beta in O_d with z - beta in I'_d.
template <class Int>
QuadInt<Int> round_nearest(const QuadRat<Int>& z) {
  auto [X, Y, D] = z.coords_scaled();
  auto [p, q] = round_coords_checked<Int>(X, Y, D, z.field());
  return QuadInt<Int>(p, q, z.d());
}

/// Nearest-integer rounding of a floating point, using the same strict
/// domain test on double coordinates.
inline std::pair<long long, long long> round_float(std::complex<double> z, const FieldConfig& cfg) {
  auto [X, Y] = cfg.to_coords(z);
  const double x0 = std::floor(X + 0.5), y0 = std::floor(Y + 0.5);
  static constexpr int order[9][2] = {{0, 0},  {1, 0},  {-1, 0}, {0, 1}, {0, -1},
                                      {1, -1}, {-1, 1}, {1, 1},  {-1, -1}};
  for (const auto& o : order) {
    double p = x0 + o[0], q = y0 + o[1];
    if (strict_domain_contains<double>(X - p, Y - q, 1.0, cfg))
      return {static_cast<long long>(p), static_cast<long long>(q)};
  }
  throw Error(ErrorCode::uniqueness_violation, "no float lattice candidate");
}

/// Membership of a floating point in I_d shrunk (margin > 0) or grown
/// (margin < 0) by `margin` in each defining inequality.
inline bool in_domain_float(std::complex<double> z, const FieldConfig& cfg, double margin = 0.0) {
  const double re = cfg.omega.real(), im = cfg.omega.imag();
  for (const auto& h : cfg.halfplanes) {
    // ax X + ay Y = nx x + ny y in Euclidean coordinates
    const double nx = h.ax, ny = (h.ay - h.ax * re) / im;
    if (nx * z.real() + ny * z.imag() > h.c - margin * std::hypot(nx, ny)) return false;
  }
  return true;
}

/// Signed Euclidean distance from z to the boundary of I_d (positive inside).
inline double domain_clearance(std::complex<double> z, const FieldConfig& cfg) {
  const double re = cfg.omega.real(), im = cfg.omega.imag();
  double best = 1e300;
  for (const auto& h : cfg.halfplanes) {
    const double nx = h.ax, ny = (h.ay - h.ax * re) / im;
    best = std::min(best, (h.c - nx * z.real() - ny * z.imag()) / std::hypot(nx, ny));
  }
  return best;
}

// ---------------------------------------------------------------------------
// text form: "a+bw" / "a+bi"; rationals "p/q+r/s i" with the basis letter w,
// i (d = 1 only) or s (sqrt(-d)).

template <class Int>
std::string QuadInt<Int>::to_string() const {
  const char* unit = (d_ == 1) ? "i" : "w";
  std::ostringstream os;
  if (b_ == 0) {
    os << a_;
  } else {
    if (a_ != 0) os << a_;
    if (b_ > 0 && a_ != 0) os << '+';
    if (b_ == 1)
      os << unit;
    else if (b_ == -1)
      os << '-' << unit;
    else
      os << b_ << unit;
  }
  return os.str();
}

template <class Int>
std::string QuadRat<Int>::to_string() const {
  if (den_ == QuadInt<Int>::from_int(Int(1), d())) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

/// Parse an exact field element such as "2/5-1/5i", "1/2+1/2w", "-3", "s/3".
inline QuadRat<BigInt> parse_quad_rat(std::string_view text, int d) {
  const auto& f = FieldConfig::get(d);
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw Error(ErrorCode::parse_error, "empty field literal");
  Rational X = 0, Y = 0;  // coordinates over {1, w}
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::parse_error, "'" + std::string(text) + "': " + why);
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail("expected sign");
    }
    std::string num, den;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) num += s[i++];
    if (i < s.size() && s[i] == '/') {
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) den += s[i++];
      if (den.empty()) fail("missing denominator");
    }
    char unit = 0;
    if (i < s.size() && (s[i] == 'i' || s[i] == 'w' || s[i] == 's')) unit = s[i++];
    if (unit && i < s.size() && s[i] == '/' && den.empty()) {
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) den += s[i++];
      if (den.empty()) fail("missing denominator");
    }
    if (num.empty() && !unit) fail("missing coefficient");
    Rational c = num.empty() ? Rational(1) : Rational(BigInt(num));
    if (!den.empty()) {
      BigInt dv(den);
      if (dv == 0) fail("zero denominator");
      c /= Rational(dv);
    }
    c *= sign;
    if (!unit) {
      X += c;
    } else if (unit == 'w') {
      Y += c;
    } else if (unit == 'i') {
      if (d != 1) fail("'i' is not in Q(sqrt(-" + std::to_string(d) + ")); use w or s");
      Y += c;
    } else {  // sqrt(-d) = w (d = 1, 2) or 2w - 1
      if (f.half_omega) {
        Y += 2 * c;
        X -= c;
      } else {
        Y += c;
      }
    }
  }
  BigInt den = boost::multiprecision::lcm(boost::multiprecision::denominator(X),
                                          boost::multiprecision::denominator(Y));
  QuadInt<BigInt> n(BigInt(boost::multiprecision::numerator(X) * (den / boost::multiprecision::denominator(X))),
                    BigInt(boost::multiprecision::numerator(Y) * (den / boost::multiprecision::denominator(Y))), d);
  return QuadRat<BigInt>(n, QuadInt<BigInt>::from_int(den, d));
}

inline QuadInt<BigInt> parse_quad_int(std::string_view text, int d) {
  auto z = parse_quad_rat(text, d);
  if (!z.den().is_unit()) throw Error(ErrorCode::parse_error, "not an integer: " + std::string(text));
  return z.num() * z.den().conj();
}

}  // namespace hurwitz
