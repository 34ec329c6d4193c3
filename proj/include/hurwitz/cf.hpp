#pragma once

// Nearest-integer continued fractions: the map T_d, exact expansion of field
// rationals, convergent matrices, digit costs, floating orbits, and the scan
// for digits whose cylinder O_alpha is empty.

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hurwitz/circle.hpp"
#include "hurwitz/ring.hpp"

namespace hurwitz {

using QI = QuadInt<BigInt>;
using QR = QuadRat<BigInt>;

/// 2x2 matrix over O_d.
struct Mat2 {
  QI a, b, c, d;

  static Mat2 identity(int field) {
    QI one = QI::from_int(1, field), zero(field);
    return {one, zero, zero, one};
  }
  /// [[0, 1], [1, alpha]]
  static Mat2 digit(const QI& alpha) {
    QI one = QI::from_int(1, alpha.d()), zero(alpha.d());
    return {zero, one, one, alpha};
  }
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  QI det() const { return a * d - b * c; }
};

/// Digit cost c : O_d -> R>=0.
class CostFunction {
 public:
  enum class Kind { constant_one, log_abs, table };

  static CostFunction constant_one() { return CostFunction(Kind::constant_one); }
  static CostFunction log_abs() { return CostFunction(Kind::log_abs); }

  /// Bounded integer table keyed by digit coordinates (a, b), with a default.
  static CostFunction table(std::map<std::pair<long long, long long>, long long> entries, long long dflt,
                            std::string name = "table") {
    CostFunction c(Kind::table);
    c.entries_ = std::move(entries);
    c.default_ = dflt;
    c.name_ = std::move(name);
    return c;
  }

  /// Table file: lines "a b cost", one optional "default cost", '#' comments.
  static CostFunction load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::missing_input, "cannot open cost table " + path);
    std::map<std::pair<long long, long long>, long long> entries;
    long long dflt = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      std::string first;
      if (!(ls >> first)) continue;
      auto bad = [&] { return Error(ErrorCode::parse_error, path + ":" + std::to_string(lineno)); };
      try {
        if (first == "default") {
          if (!(ls >> dflt) || dflt < 0) throw bad();
          continue;
        }
        long long a = std::stoll(first), b, v;
        if (!(ls >> b >> v) || v < 0) throw bad();
        entries[{a, b}] = v;
      } catch (const std::logic_error&) {
        throw bad();
      }
    }
    return table(std::move(entries), dflt, "table:" + path);
  }

  /// "len", "logabs" or "table:<path>".
  static CostFunction parse(const std::string& spec) {
    if (spec == "len") return constant_one();
    if (spec == "logabs") return log_abs();
    if (spec.rfind("table:", 0) == 0) return load_table(spec.substr(6));
    throw Error(ErrorCode::invalid_argument, "unknown cost '" + spec + "' (len, logabs, table:<path>)");
  }

  Kind kind() const { return kind_; }
  bool integer_valued() const { return kind_ != Kind::log_abs; }

  std::string id() const {
    switch (kind_) {
      case Kind::constant_one: return "len";
      case Kind::log_abs: return "logabs";
      case Kind::table: return name_;
    }
    return name_;
  }

  /// Declared supremum; infinite for log_abs.
  double bound() const {
    switch (kind_) {
      case Kind::constant_one: return 1.0;
      case Kind::log_abs: return INFINITY;
      case Kind::table: {
        long long m = default_;
        for (const auto& [k, v] : entries_) m = std::max(m, v);
        return static_cast<double>(m);
      }
    }
    return INFINITY;
  }

  double operator()(long long a, long long b, int d) const {
    switch (kind_) {
      case Kind::constant_one: return 1.0;
      case Kind::log_abs: {
        const auto& f = FieldConfig::get(d);
        double n = static_cast<double>(a) * a + f.trace * static_cast<double>(a) * b +
                   f.omega_norm * static_cast<double>(b) * b;
        return 0.5 * std::log(n);
      }
      case Kind::table: {
        auto it = entries_.find({a, b});
        return static_cast<double>(it == entries_.end() ? default_ : it->second);
      }
    }
    return 0.0;
  }

  double operator()(const QI& alpha) const {
    if (kind_ == Kind::log_abs) return 0.5 * std::log(static_cast<double>(alpha.norm()));
    return (*this)(static_cast<long long>(alpha.a()), static_cast<long long>(alpha.b()), alpha.d());
  }

  /// Integer value of an integer-valued cost.
  long long integer(long long a, long long b) const {
    if (kind_ == Kind::constant_one) return 1;
    if (kind_ == Kind::table) {
      auto it = entries_.find({a, b});
      return it == entries_.end() ? default_ : it->second;
    }
    throw Error(ErrorCode::invalid_argument, "cost " + id() + " is not integer valued");
  }

 private:
  explicit CostFunction(Kind k) : kind_(k) {}
  Kind kind_;
  std::map<std::pair<long long, long long>, long long> entries_;
  long long default_ = 0;
  std::string name_;
};

struct CFExpansion {
  QR input;
  std::vector<QI> digits;
  std::vector<Mat2> convergents;  // M_j = prod_{i <= j} [[0,1],[1,alpha_i]]
  std::map<std::string, double> costs;

  std::size_t length() const { return digits.size(); }
};

/// One step of T_d: returns ([1/z], 1/z - [1/z]).
inline std::pair<QI, QR> cf_step(const QR& z) {
  if (z.is_zero()) throw Error(ErrorCode::zero_input, "cf_step at 0");
  if (!closed_domain_contains(z)) throw Error(ErrorCode::out_of_domain, z.to_string() + " is not in I_d");
  QR w = z.inverse();
  QI alpha = round_nearest(w);
  return {alpha, w - QR(alpha)};
}

/// Value of [0; alpha_1, ..., alpha_n] = 1/(alpha_1 + 1/(alpha_2 + ...)).
inline QR digits_value(const std::vector<QI>& digits, int d) {
  QR v(d);
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = (QR(*it) + v).inverse();
  return v;
}

inline double cost_total(const std::vector<QI>& digits, const CostFunction& c) {
  double s = 0;
  for (const auto& a : digits) s += c(a);
  return s;
}

inline double cost_total(const CFExpansion& e, const CostFunction& c) { return cost_total(e.digits, c); }

inline CFExpansion expand(const QR& z, std::span<const CostFunction> costs = {}) {
  if (!closed_domain_contains(z)) throw Error(ErrorCode::out_of_domain, z.to_string() + " is not in I_d");
  CFExpansion e;
  e.input = z;
  Mat2 m = Mat2::identity(z.d());
  QR x = z;
  while (!x.is_zero()) {
    auto [alpha, next] = cf_step(x);
    m = m * Mat2::digit(alpha);
    e.digits.push_back(alpha);
    e.convergents.push_back(m);
    x = std::move(next);
  }
  for (const auto& c : costs) e.costs[c.id()] = cost_total(e.digits, c);
  return e;
}

/// Q_{n-1}/Q_n from the matrix product equals the reversed word [0; alpha_n, ..., alpha_1].
inline bool convergents_reversed_identity(const std::vector<QI>& digits, int d) {
  if (digits.empty()) return true;
  Mat2 m = Mat2::identity(d);
  for (const auto& a : digits) m = m * Mat2::digit(a);
  if (m.d.is_zero()) return false;
  std::vector<QI> rev(digits.rbegin(), digits.rend());
  return QR(m.c, m.d) == digits_value(rev, d);
}

struct OrbitResult {
  double cost = 0;
  std::vector<std::pair<long long, long long>> digits;
  bool hit_zero = false;  // orbit reached 0 (rational input); result is partial
};

/// Applies floating T_d up to n times and accumulates c over the digits.
inline OrbitResult orbit_cost_float(cplx z0, std::size_t n, const CostFunction& c, int d,
                                    double zero_tol = 1e-12) {
  const auto& f = FieldConfig::get(d);
  OrbitResult r;
  cplx z = z0;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(z) < zero_tol) {
      r.hit_zero = true;
      break;
    }
    cplx w = 1.0 / z;
    auto [p, q] = round_float(w, f);
    r.digits.push_back({p, q});
    r.cost += c(p, q, d);
    z = w - f.to_complex(static_cast<double>(p), static_cast<double>(q));
  }
  if (!r.hit_zero && std::abs(z) < zero_tol && n > 0) r.hit_zero = true;
  return r;
}

/// All nonzero alpha with qnorm(alpha) <= bound, ordered by (norm, a, b).
inline std::vector<QI> digits_up_to(int d, long long bound) {
  const auto& f = FieldConfig::get(d);
  std::vector<std::tuple<long long, long long, long long>> v;
  const long long L = static_cast<long long>(std::ceil(2 * std::sqrt(static_cast<double>(bound)))) + 2;
  for (long long a = -L; a <= L; ++a)
    for (long long b = -L; b <= L; ++b) {
      long long n = a * a + f.trace * a * b + f.omega_norm * b * b;
      if (n >= 1 && n <= bound) v.emplace_back(n, a, b);
    }
  std::sort(v.begin(), v.end());
  std::vector<QI> out;
  out.reserve(v.size());
  for (auto& [n, a, b] : v) out.emplace_back(BigInt(a), BigInt(b), d);
  return out;
}

namespace detail {

using i128 = __int128;

/// Exact witness search: grid points q = alpha + (k + l w)/D with
/// q - alpha in I'_d and 1/q in I_d.  Such q gives z = 1/q in O_alpha.
inline bool digit_hit_on_grid(const FieldConfig& f, long long aa, long long ab, long long G) {
  const i128 D = 2 * G;
  const i128 one = 1;
  for (long long k = -2 * G; k <= 2 * G; ++k)
    for (long long l = -2 * G; l <= 2 * G; ++l) {
      if (!strict_domain_contains<i128>(i128(k), i128(l), D, f)) continue;
      i128 p = k + D * aa, r = l + D * ab;
      i128 n = p * p + i128(f.trace) * p * r + i128(f.omega_norm) * r * r;
      if (n == 0) continue;
      // 1/q = D conj(p + r w) / n, conj(p + r w) = (p + t r) - r w
      if (in_closed_domain<i128>(D * (p + f.trace * r), -D * r, n, f)) return true;
      (void)one;
    }
  return false;
}

/// Floating search for an interior point of (I + alpha) outside every closed
/// inversion disk of the sides of I, i.e. q with q - alpha in int I and
/// 1/q in int I.  Candidates sit just off every subarc of the arrangement.
inline std::optional<cplx> geometric_witness(const FieldConfig& f, const QI& alpha) {
  std::vector<GenCircle> curves;
  for (const auto& s : boundary_curves(f)) {
    curves.push_back(s.translated(-alpha));
    curves.push_back(s.inverted());
  }
  const cplx ac = alpha.to_complex();
  auto good = [&](cplx q) {
    return in_domain_float(q - ac, f, 1e-10) && std::abs(q) > 1e-300 && in_domain_float(1.0 / q, f, 1e-10);
  };
  if (good(ac)) return ac;
  const double reach = std::abs(ac) + 2.0;
  for (const auto& g : curves) {
    auto [lo, hi] = param_window(g, reach);
    auto ts = breakpoints(g, curves, lo, hi);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i + 1] - ts[i] < 1e-9) continue;
      double t = 0.5 * (ts[i] + ts[i + 1]);
      cplx m = g.point(t), nv = g.normal(t);
      for (double eps : {1e-7, -1e-7, 1e-5, -1e-5})
        if (good(m + eps * nv)) return m + eps * nv;
    }
  }
  return std::nullopt;
}

/// Exact check of a floating witness after rounding it to a nearby rational.
inline bool confirm_witness(const FieldConfig& f, const QI& alpha, cplx q) {
  const long long S = 1LL << 30;
  auto [X, Y] = f.to_coords(q);
  long long p = std::llround(X * S), r = std::llround(Y * S);
  const i128 D = S;
  i128 kp = p - D * static_cast<long long>(alpha.a()), kr = r - D * static_cast<long long>(alpha.b());
  if (!strict_domain_contains<i128>(kp, kr, D, f)) return false;
  QI num(BigInt(p), BigInt(r), f.d);
  BigInt n = num.norm();
  QI c = num.conj();
  return in_closed_domain<BigInt>(BigInt(S) * c.a(), BigInt(S) * c.b(), n, f);
}

}  // namespace detail

/// Nonzero alpha with qnorm(alpha) <= norm_bound whose cylinder O_alpha is empty.
inline std::vector<QI> empty_digit_scan(const FieldConfig& cfg, long long norm_bound, long long grid = 24) {
  if (norm_bound < 4) throw Error(ErrorCode::invalid_argument, "norm_bound must be >= 4");
  std::vector<QI> out;
  for (const auto& alpha : digits_up_to(cfg.d, norm_bound)) {
    long long aa = static_cast<long long>(alpha.a()), ab = static_cast<long long>(alpha.b());
    if (detail::digit_hit_on_grid(cfg, aa, ab, grid)) continue;
    auto w = detail::geometric_witness(cfg, alpha);
    if (w && detail::confirm_witness(cfg, alpha, *w)) continue;
    out.push_back(alpha);
  }
  return out;
}

}  // namespace hurwitz
