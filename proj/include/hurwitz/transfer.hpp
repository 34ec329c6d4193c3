#pragma once

// Ulam discretization of the weighted transfer operator
//   (L_{s,u} f)(z) = sum_alpha e^{u c(alpha)} |z+alpha|^{-4s} f(1/(z+alpha)) 1[1/(z+alpha) in I]
// on a box grid, its dominant eigenpair, the pressure curve s_0 and the
// Lyapunov exponent.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>
#include <vector>

#include "hurwitz/cf.hpp"

namespace hurwitz {

struct TransferOptions {
  int m = 100;              // boxes per axis over the bounding box of I
  long long A_max = 400;    // explicit digits have norm <= A_max
  int K = 4;                // quadrature points per box
  int subgrid = 8;          // per-axis subdivisions for areas and box integrals
  bool tail_closure = true;  // continuum model of the digits beyond A_max
  bool check_tail = true;   // raise TAIL_TOO_LARGE when the unclosed tail is large
  int threads = 1;
};

namespace detail {

// Run f(i) for i in [0, n) on up to `threads` workers. Work is split into
// contiguous blocks so each index is handled by exactly one worker.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
  if (t == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (std::size_t w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = n * w / t; i < n * (w + 1) / t; ++i) f(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// The sides of I as unit-normal half-planes n.z <= c.
struct EuclidHalfPlanes {
  std::vector<std::array<double, 3>> h;
  explicit EuclidHalfPlanes(const FieldConfig& f) {
    for (const auto& p : f.halfplanes) {
      const double nx = p.ax, ny = (p.ay - p.ax * f.omega.real()) / f.omega.imag(), s = std::hypot(nx, ny);
      h.push_back({nx / s, ny / s, p.c / s});
    }
  }
  bool contains(cplx z) const {
    for (const auto& p : h)
      if (p[0] * z.real() + p[1] * z.imag() > p[2]) return false;
    return true;
  }
};

}  // namespace detail

/// Uniform boxes over the bounding rectangle of I, restricted to those that
/// meet I, with quadrature points inside I.
struct BoxGrid {
  int d = 1;
  int m = 0;
  double x0 = 0, y0 = 0, dx = 0, dy = 0;
  std::vector<int> index;            // m*m grid cell -> box id or -1
  std::vector<cplx> center;          // per box
  std::vector<double> area;          // area of box ∩ I
  std::vector<std::vector<cplx>> nodes;  // K quadrature points per box
  std::vector<std::vector<cplx>> fine;   // subgrid points inside I (equal weights area/|fine|)

  std::size_t size() const { return center.size(); }

  int box_of(cplx w) const {
    const auto ix = static_cast<long long>(std::floor((w.real() - x0) / dx));
    const auto iy = static_cast<long long>(std::floor((w.imag() - y0) / dy));
    if (ix < 0 || iy < 0 || ix >= m || iy >= m) return -1;
    return index[static_cast<std::size_t>(ix * m + iy)];
  }
};

inline BoxGrid make_box_grid(const FieldConfig& f, int m, int K, int subgrid) {
  if (m < 4) throw Error(ErrorCode::invalid_argument, "grid size m must be at least 4");
  if (K < 1 || subgrid < 2) throw Error(ErrorCode::invalid_argument, "K and subgrid must be positive");
  BoxGrid g;
  g.d = f.d;
  g.m = m;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& [X, Y] : f.vertices) {
    cplx v = f.to_complex(static_cast<double>(X), static_cast<double>(Y));
    xmin = std::min(xmin, v.real()), xmax = std::max(xmax, v.real());
    ymin = std::min(ymin, v.imag()), ymax = std::max(ymax, v.imag());
  }
  g.x0 = xmin, g.y0 = ymin, g.dx = (xmax - xmin) / m, g.dy = (ymax - ymin) / m;
  g.index.assign(static_cast<std::size_t>(m) * m, -1);
  detail::EuclidHalfPlanes I(f);
  const int s = subgrid;
  const int k2 = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(K))));
  for (int ix = 0; ix < m; ++ix)
    for (int iy = 0; iy < m; ++iy) {
      std::vector<cplx> in;
      for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
          cplx p(g.x0 + (ix + (a + 0.5) / s) * g.dx, g.y0 + (iy + (b + 0.5) / s) * g.dy);
          if (I.contains(p)) in.push_back(p);
        }
      if (in.empty()) continue;
      std::vector<cplx> q;
      if (static_cast<int>(in.size()) == s * s) {
        for (int a = 0; a < k2 && static_cast<int>(q.size()) < K; ++a)
          for (int b = 0; b < k2 && static_cast<int>(q.size()) < K; ++b)
            q.emplace_back(g.x0 + (ix + (a + 0.5) / k2) * g.dx, g.y0 + (iy + (b + 0.5) / k2) * g.dy);
      } else {
        // boundary box: spread the nodes over the inside part
        for (int k = 0; k < K; ++k) q.push_back(in[(in.size() * static_cast<std::size_t>(2 * k + 1)) / (2 * K)]);
      }
      g.index[static_cast<std::size_t>(ix) * m + iy] = static_cast<int>(g.center.size());
      g.center.emplace_back(g.x0 + (ix + 0.5) * g.dx, g.y0 + (iy + 0.5) * g.dy);
      g.area.push_back(g.dx * g.dy * static_cast<double>(in.size()) / (s * s));
      g.nodes.push_back(std::move(q));
      g.fine.push_back(std::move(in));
    }
  return g;
}

/// Sparse nonnegative matrix M with (M f)_i approximating the average of
/// L f over box i, plus an optional rank-one tail term 1 closure^T.
struct UlamOperator {
  const BoxGrid* grid = nullptr;
  long long A_max = 0;
  double sigma = 1, u = 0;
  std::string cost;
  std::size_t digits = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> closure;  // empty when the tail is not closed
  double tail = 0;              // bound on the omitted digit mass per point
  double leading_mass = 0;      // area-weighted mean row sum of the explicit part
  double lost_mass = 0;         // image mass falling outside every box (grid artefact)

  std::size_t size() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }

  std::vector<double> apply(const std::vector<double>& v, int threads = 1) const {
    std::vector<double> y(size());
    double c = 0;
    for (std::size_t j = 0; j < closure.size(); ++j) c += closure[j] * v[j];
    detail::parallel_for(size(), threads, [&](std::size_t i) {
      double acc = 0;
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * v[static_cast<std::size_t>(col[k])];
      y[i] = acc + c;
    });
    return y;
  }
};

/// Sup over z in I of the omitted mass sum_{N(alpha) > A} e^{u c(alpha)} |z+alpha|^{-4 sigma},
/// by comparison with the area integral over |x| > sqrt(A) - R.
inline double truncation_tail(const FieldConfig& f, long long A_max, double sigma, double u, const CostFunction& cost) {
  const double r0 = std::sqrt(static_cast<double>(A_max)) - std::sqrt(static_cast<double>(f.R_sq));
  double p = 4 * sigma, scale = 1;
  if (cost.kind() == CostFunction::Kind::log_abs) {
    p -= u;
  } else {
    scale = std::exp(std::abs(u) * cost.bound());
  }
  if (p <= 2 || r0 <= 0) return INFINITY;
  return scale * 2 * std::numbers::pi * std::pow(r0, 2 - p) / (p - 2) / f.covolume;
}

inline UlamOperator assemble(const BoxGrid& grid, double sigma, double u, const CostFunction& cost,
                             const TransferOptions& opt) {
  const auto& f = FieldConfig::get(grid.d);
  if (opt.A_max < 1) throw Error(ErrorCode::invalid_argument, "A_max must be positive");
  if (!std::isfinite(sigma) || !std::isfinite(u)) throw Error(ErrorCode::invalid_argument, "non-finite parameters");
  detail::EuclidHalfPlanes I(f);

  struct Digit {
    cplx a;
    double weight;  // e^{u c(alpha)}
  };
  std::vector<Digit> digits;
  for (const auto& a : digits_up_to(f.d, opt.A_max)) digits.push_back({a.to_complex(), std::exp(u * cost(a))});

  UlamOperator op;
  op.grid = &grid;
  op.A_max = opt.A_max;
  op.sigma = sigma;
  op.u = u;
  op.cost = cost.id();
  op.digits = digits.size();
  const std::size_t n = grid.size();
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  std::vector<double> lost(n, 0.0);
  const bool unit_sigma = sigma == 1.0;

  // rows are split into contiguous blocks, one dense accumulator per block
  const std::size_t blocks = static_cast<std::size_t>(std::max(1, opt.threads));
  detail::parallel_for(blocks, opt.threads, [&](std::size_t blk) {
    std::vector<double> acc(n, 0.0);
    std::vector<int> touched;
    for (std::size_t i = n * blk / blocks; i < n * (blk + 1) / blocks; ++i) {
      const auto& q = grid.nodes[i];
      const double wk = 1.0 / static_cast<double>(q.size());
      for (const cplx z : q)
        for (const auto& dg : digits) {
          const cplx s = z + dg.a;
          const double r2 = std::norm(s);
          const cplx w = std::conj(s) / r2;
          if (!I.contains(w)) continue;
          const double jac = unit_sigma ? 1.0 / (r2 * r2) : std::exp(-2.0 * sigma * std::log(r2));
          const int j = grid.box_of(w);
          if (j < 0) {
            lost[i] += wk * jac * dg.weight;
            continue;
          }
          if (acc[static_cast<std::size_t>(j)] == 0.0) touched.push_back(j);
          acc[static_cast<std::size_t>(j)] += wk * jac * dg.weight;
        }
      std::sort(touched.begin(), touched.end());
      auto& row = rows[i];
      row.reserve(touched.size());
      for (int j : touched) {
        row.emplace_back(j, acc[static_cast<std::size_t>(j)]);
        acc[static_cast<std::size_t>(j)] = 0.0;
      }
      touched.clear();
    }
  });

  op.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) op.row_ptr[i + 1] = op.row_ptr[i] + rows[i].size();
  op.col.resize(op.row_ptr[n]);
  op.val.resize(op.row_ptr[n]);
  double mass = 0, total_area = 0, lost_mass = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0;
    std::size_t k = op.row_ptr[i];
    for (const auto& [j, v] : rows[i]) {
      op.col[k] = j;
      op.val[k++] = v;
      rs += v;
    }
    rows[i] = {};
    mass += grid.area[i] * rs;
    lost_mass += grid.area[i] * lost[i];
    total_area += grid.area[i];
  }
  op.leading_mass = mass / total_area;
  op.lost_mass = lost_mass / total_area;
  op.tail = truncation_tail(f, opt.A_max, sigma, u, cost);

  if (opt.tail_closure) {
    // Far digits: sum over N(alpha) > A of F(alpha) is replaced by the lattice
    // average (1/covolume) of the integral, which after w = 1/x becomes a
    // z-independent functional of f supported near 0.
    op.closure.assign(n, 0.0);
    const double A = static_cast<double>(opt.A_max);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& pts = grid.fine[j];
      const double wa = grid.area[j] / static_cast<double>(pts.size());
      double acc = 0;
      for (const cplx w : pts) {
        const double r2 = std::norm(w);
        if (r2 * A >= 1.0) continue;
        auto [p, qq] = round_float(1.0 / w, f);
        if (static_cast<double>(p) * p + f.trace * static_cast<double>(p) * qq + f.omega_norm * static_cast<double>(qq) * qq <= A)
          continue;
        acc += std::pow(r2, 2.0 * sigma - 2.0) * std::exp(u * cost(p, qq, f.d)) * wa;
      }
      op.closure[j] = acc / f.covolume;
    }
  } else if (opt.check_tail && op.tail > 1e-3 * op.leading_mass) {
    throw Error(ErrorCode::tail_too_large, "digit tail " + std::to_string(op.tail) + " exceeds 1e-3 of the leading mass " +
                                               std::to_string(op.leading_mass) + "; raise A_max or enable the tail closure");
  }
  return op;
}

struct SpectralResult {
  double lambda = 0;
  std::vector<double> psi;  // density per box, normalized to integral 1 over I
  double residual = 0;
  double tail = 0;
  int iterations = 0;
};

/// Power iteration. `start` (same size as the operator) warms the iteration.
inline SpectralResult dominant_eigen(const UlamOperator& op, double tol = 1e-11, int max_iter = 2000,
                                     const std::vector<double>* start = nullptr, int threads = 1) {
  const auto& area = op.grid->area;
  const std::size_t n = op.size();
  std::vector<double> v = start && start->size() == n ? *start : std::vector<double>(n, 1.0);
  auto normalize = [&](std::vector<double>& x) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += area[i] * x[i];
    for (auto& e : x) e /= s;
  };
  normalize(v);
  SpectralResult r;
  r.tail = op.tail;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> y = op.apply(v, threads);
    double lam = 0;
    for (std::size_t i = 0; i < n; ++i) lam += area[i] * y[i];  // sum area v = 1
    double res = 0, vmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
      res = std::max(res, std::abs(y[i] - lam * v[i]));
      vmax = std::max(vmax, std::abs(v[i]));
    }
    res /= vmax * lam;
    v = std::move(y);
    normalize(v);
    if (res < tol) {
      r.lambda = lam;
      r.psi = std::move(v);
      r.residual = res;
      r.iterations = it;
      return r;
    }
  }
  throw Error(ErrorCode::no_convergence, "power iteration did not reach tolerance " + std::to_string(tol));
}

/// Integral of log|J_T| = -4 log|z| against the invariant density.
inline double lyapunov_integral(const BoxGrid& grid, const SpectralResult& res) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& pts = grid.fine[i];
    double acc = 0;
    for (const cplx z : pts) acc += -2.0 * std::log(std::norm(z));
    acc *= grid.area[i] / static_cast<double>(pts.size());
    num += res.psi[i] * acc;
    den += res.psi[i] * grid.area[i];
  }
  return num / den;
}

/// Dominant eigenvalue for one parameter pair.
inline SpectralResult lambda_at(const BoxGrid& grid, double sigma, double u, const CostFunction& cost,
                                const TransferOptions& opt, const std::vector<double>* start = nullptr,
                                double tol = 1e-12) {
  return dominant_eigen(assemble(grid, sigma, u, cost, opt), tol, 2000, start, opt.threads);
}

struct PressureCurve {
  std::vector<std::pair<double, double>> samples;  // (w, s_0(w))
  double mu_hat = 0;
  double delta_hat = 0;
  double fit_residual = 0;
  int evaluations = 0;
};

/// Root of sigma -> log lambda(sigma, w) by safeguarded secant (Illinois).
inline double solve_s0_at(const BoxGrid& grid, double w, const CostFunction& cost, const TransferOptions& opt,
                          double solver_tol, int* evals = nullptr, std::vector<double>* warm = nullptr) {
  auto F = [&](double s) {
    auto r = lambda_at(grid, s, w, cost, opt, warm);
    if (warm) *warm = r.psi;
    if (evals) ++*evals;
    return std::log(r.lambda);
  };
  // lambda decreases in sigma; bracket around 1, widening geometrically
  double a = 1.0, fa = F(a);
  double step = fa > 0 ? 0.02 : -0.02;
  double b = a + step, fb = F(b);
  while (fa * fb > 0) {
    if (std::abs(b - 1.0) > 0.6) throw Error(ErrorCode::bracket_failure, "no sign change of lambda - 1 near sigma = 1");
    step *= 2;
    a = b, fa = fb;
    b = a + step;
    fb = F(b);
  }
  if (fa == 0) return a;
  for (int it = 0; it < 100; ++it) {
    const double c = b - fb * (b - a) / (fb - fa);
    const double fc = F(c);
    if (std::abs(fc) < 1e-13) return c;
    if (fc * fb < 0) {
      a = b, fa = fb;
    } else {
      fa /= 2;
    }
    b = c, fb = fc;
    if (std::abs(b - a) < solver_tol) return b;
  }
  throw Error(ErrorCode::no_convergence, "pressure root finder did not converge");
}

inline PressureCurve solve_s0(const FieldConfig& f, const std::vector<double>& w_values, const CostFunction& cost,
                              const TransferOptions& opt, double solver_tol = 1e-10) {
  if (w_values.size() < 3) throw Error(ErrorCode::invalid_argument, "pressure fit needs at least three w values");
  for (double w : w_values)
    if (!(std::abs(w) <= 0.05)) throw Error(ErrorCode::invalid_argument, "pressure w values must satisfy |w| <= 0.05");
  BoxGrid grid = make_box_grid(f, opt.m, opt.K, opt.subgrid);
  PressureCurve pc;
  std::vector<double> warm;
  for (double w : w_values) pc.samples.emplace_back(w, solve_s0_at(grid, w, cost, opt, solver_tol, &pc.evaluations, &warm));

  // least-squares quadratic s(w) = c0 + c1 w + c2 w^2
  double S[5] = {0, 0, 0, 0, 0}, T[3] = {0, 0, 0};
  for (const auto& [w, s] : pc.samples) {
    double p = 1;
    for (int k = 0; k < 5; ++k, p *= w) S[k] += p;
    T[0] += s, T[1] += s * w, T[2] += s * w * w;
  }
  // solve the 3x3 normal equations by Cramer's rule
  auto det3 = [](double a, double b, double c, double d, double e, double g, double h, double i, double j) {
    return a * (e * j - g * i) - b * (d * j - g * h) + c * (d * i - e * h);
  };
  const double D = det3(S[0], S[1], S[2], S[1], S[2], S[3], S[2], S[3], S[4]);
  if (std::abs(D) < 1e-300) throw Error(ErrorCode::invalid_argument, "pressure w values must be distinct");
  const double c0 = det3(T[0], S[1], S[2], T[1], S[2], S[3], T[2], S[3], S[4]) / D;
  const double c1 = det3(S[0], T[0], S[2], S[1], T[1], S[3], S[2], T[2], S[4]) / D;
  const double c2 = det3(S[0], S[1], T[0], S[1], S[2], T[1], S[2], S[3], T[2]) / D;
  pc.mu_hat = 2 * c1;
  pc.delta_hat = 4 * c2;
  double rss = 0;
  for (const auto& [w, s] : pc.samples) rss += std::pow(s - (c0 + c1 * w + c2 * w * w), 2);
  pc.fit_residual = std::sqrt(rss / static_cast<double>(pc.samples.size()));
  return pc;
}

}  // namespace hurwitz
