#pragma once

// The ensembles Sigma_n (reduced a/b in I' with N(b) = n) and
// Omega_N = union of Sigma_n for n <= N, with streaming cost statistics:
// moments, Kolmogorov-Smirnov distance to the normal law, residues mod q
// and Dirichlet partial sums.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <queue>
#include <vector>

#include "hurwitz/cf.hpp"
#include "hurwitz/transfer.hpp"

namespace hurwitz {

struct OmegaSpec {
  int d = 1;
  long long N = 1;  // ht^2 <= N
};

/// Canonical denominators of norm <= N in (norm, a, b) order.
inline std::vector<std::array<long long, 3>> canonical_denominators(const FieldConfig& f, long long N) {
  std::vector<std::array<long long, 3>> out;
  const double im = f.omega.imag();
  const auto ymax = static_cast<long long>(std::sqrt(static_cast<double>(N)) / im) + 1;
  for (long long y = -ymax; y <= ymax; ++y) {
    const double c = -static_cast<double>(y) * f.omega.real();
    const auto r = std::sqrt(static_cast<double>(N));
    for (auto x = static_cast<long long>(std::floor(c - r)) - 1; x <= static_cast<long long>(std::ceil(c + r)) + 1; ++x) {
      const long long n = x * x + f.trace * x * y + f.omega_norm * y * y;
      if (n < 1 || n > N) continue;
      QuadInt<long long> b(x, y, f.d);
      if (canonical_associate(b) == b) out.push_back({n, x, y});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Calls visit(ax, ay) for every a in O_d with a/b in I' (coprime or not),
/// in lexicographic (ay, ax) order.
template <class Visit>
void numerators_for(const FieldConfig& f, long long bx, long long by, Visit&& visit) {
  const long long n = bx * bx + f.trace * bx * by + f.omega_norm * by * by;
  const long long cx = bx + f.trace * by, cy = -by;  // conj(b)
  const double rb = std::sqrt(static_cast<double>(f.R_sq) * static_cast<double>(n));
  const auto ymax = static_cast<long long>(rb / f.omega.imag()) + 1;
  for (long long y = -ymax; y <= ymax; ++y) {
    const double c = -static_cast<double>(y) * f.omega.real();
    for (auto x = static_cast<long long>(std::floor(c - rb)) - 1; x <= static_cast<long long>(std::ceil(c + rb)) + 1; ++x) {
      // a * conj(b) in basis coordinates
      const long long X = x * cx - f.omega_norm * y * cy;
      const long long Y = x * cy + y * cx + f.trace * y * cy;
      if (strict_domain_contains<long long>(X, Y, n, f)) visit(x, y);
    }
  }
}

/// Nearest-integer Euclid on p/q in 64-bit arithmetic. Calls digit(a, b)
/// for each partial quotient and returns the norm of the final remainder
/// (the gcd), so the fraction was reduced iff the result is 1.
template <class Digit>
long long euclid_i64(const FieldConfig& f, long long pa, long long pb, long long qa, long long qb, Digit&& digit) {
  const long long t = f.trace, w = f.omega_norm;
  while (pa != 0 || pb != 0) {
    // q / p = q conj(p) / N(p)
    const long long ca = pa + t * pb, cb = -pb;
    const long long X = qa * ca - w * qb * cb;
    const long long Y = qa * cb + qb * ca + t * qb * cb;
    const long long D = pa * pa + t * pa * pb + w * pb * pb;
    // nearest point in double (exact for |X|, D < 2^40); for d = 1, 2 the strict
    // domain is the half-open unit square in basis coordinates, so this is final
    const double inv = 1.0 / static_cast<double>(D);
    long long ax = static_cast<long long>(std::floor(static_cast<double>(X) * inv + 0.5));
    long long ay = static_cast<long long>(std::floor(static_cast<double>(Y) * inv + 0.5));
    if (f.half_omega) {
      // I' is a hexagon here: first candidate of the 3x3 neighbourhood inside it
      static constexpr int order[9][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}, {1, 1}, {-1, -1}};
      bool found = false;
      for (const auto& o : order) {
        const long long p = ax + o[0], q = ay + o[1];
        if (strict_domain_contains<long long>(X - p * D, Y - q * D, D, f)) {
          ax = p, ay = q, found = true;
          break;
        }
      }
      if (!found) throw Error(ErrorCode::uniqueness_violation, "no lattice candidate in the strict domain");
    }
    digit(ax, ay);
    // remainder q - alpha p
    const long long ra = qa - (ax * pa - w * ay * pb);
    const long long rb = qb - (ax * pb + ay * pa + t * ay * pb);
    qa = pa, qb = pb;
    pa = ra, pb = rb;
  }
  return qa * qa + t * qa * qb + w * qb * qb;
}

/// Sigma_n as exact field elements, in (den, num) lexicographic order.
inline std::vector<QR> enumerate_sigma(const FieldConfig& f, long long n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "n must be at least 1");
  std::vector<QR> out;
  for (const auto& [nb, bx, by] : canonical_denominators(f, n)) {
    if (nb != n) continue;
    numerators_for(f, bx, by, [&](long long ax, long long ay) {
      if (euclid_i64(f, ax, ay, bx, by, [](long long, long long) {}) != 1) return;
      out.emplace_back(QI(BigInt(ax), BigInt(ay), f.d), QI(BigInt(bx), BigInt(by), f.d));
    });
  }
  return out;
}

/// Streams (z, expansion) over Omega_N ordered by ht^2 then canonical form.
/// Exact and slow; meant for small N and for audits.
template <class Visit>
void enumerate_omega(const OmegaSpec& spec, std::span<const CostFunction> costs, Visit&& visit) {
  const auto& f = FieldConfig::get(spec.d);
  for (const auto& [n, bx, by] : canonical_denominators(f, spec.N))
    numerators_for(f, bx, by, [&](long long ax, long long ay) {
      if (euclid_i64(f, ax, ay, bx, by, [](long long, long long) {}) != 1) return;
      QR z(QI(BigInt(ax), BigInt(ay), f.d), QI(BigInt(bx), BigInt(by), f.d));
      visit(z, expand(z, costs));
    });
}

// ---------------------------------------------------------------------------
// statistics helpers

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// (x - mean) / sd; DEGENERATE_SAMPLE when the sample is constant.
inline std::vector<double> standardize(std::vector<double> x) {
  if (x.size() < 2) throw Error(ErrorCode::degenerate_sample, "sample too small to standardize");
  long double s = 0, ss = 0;
  for (double v : x) s += v;
  const long double mean = s / static_cast<long double>(x.size());
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(x.size())));
  if (!(sd > 0)) throw Error(ErrorCode::degenerate_sample, "sample has zero standard deviation");
  for (auto& v : x) v = static_cast<double>((v - mean) / sd);
  return x;
}

/// Sup distance between the empirical CDF of an (already standardized)
/// sample and the standard normal CDF.
inline double ks_normal(std::vector<double> z) {
  if (z.empty()) throw Error(ErrorCode::degenerate_sample, "empty sample");
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double D = 0;
  for (std::size_t i = 0; i < z.size();) {
    std::size_t j = i;
    while (j < z.size() && z[j] == z[i]) ++j;
    const double p = normal_cdf(z[i]);
    D = std::max({D, std::abs(p - static_cast<double>(i) / n), std::abs(static_cast<double>(j) / n - p)});
    i = j;
  }
  return D;
}

/// The same distance for an integer-valued sample given as a histogram
/// (hist[v] = multiplicity of v), standardized by its own mean and sd.
inline double ks_normal_histogram(const std::vector<std::uint64_t>& hist) {
  long double n = 0, s = 0, ss = 0;
  for (std::size_t v = 0; v < hist.size(); ++v) {
    const auto c = static_cast<long double>(hist[v]);
    n += c, s += c * v, ss += c * v * v;
  }
  if (n == 0) throw Error(ErrorCode::degenerate_sample, "empty sample");
  const long double mean = s / n, var = ss / n - mean * mean;
  if (!(var > 0)) throw Error(ErrorCode::degenerate_sample, "sample has zero standard deviation");
  const long double sd = std::sqrt(var);
  long double below = 0;
  double D = 0;
  for (std::size_t v = 0; v < hist.size(); ++v) {
    if (!hist[v]) continue;
    const double p = normal_cdf(static_cast<double>((v - mean) / sd));
    const double lo = static_cast<double>(below / n);
    below += hist[v];
    const double hi = static_cast<double>(below / n);
    D = std::max({D, std::abs(p - lo), std::abs(hi - p)});
  }
  return D;
}

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::invalid_argument, "linear fit needs two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  return r;
}

// ---------------------------------------------------------------------------
// one streaming pass over Omega_N

struct EnsembleOptions {
  std::vector<long long> N_grid;
  std::vector<CostFunction> costs;
  std::vector<long long> qs;                    // moduli, applied to integer costs
  std::vector<std::complex<double>> ws;         // Dirichlet parameters, applied to costs[0]
  std::size_t sample_size = 1'000'000;          // KS sample for real-valued costs
  std::uint64_t seed = 1;
  int threads = 1;
};

struct MomentRow {
  std::string cost;
  long long N = 0;
  std::uint64_t count = 0;
  double mean = 0, var = 0, ks = 0;
};

struct ModqRow {
  std::string cost;
  long long N = 0, q = 0, a = 0;
  std::uint64_t count = 0;
  double deviation = 0;  // max over residues, repeated on each row
};

struct DirichletRow {
  long long N = 0;
  std::complex<double> w, partial;
  double fit_slope = 0;  // slope of log|partial| against log N over the grid
};

struct EnsembleResult {
  int d = 1;
  std::vector<long long> N_grid;
  std::vector<MomentRow> moments;
  std::vector<ModqRow> modq;
  std::vector<DirichletRow> dirichlet;
  std::uint64_t max_length_excess = 0;  // fractions violating the length bound (always expected 0)
  std::uint64_t steps = 0;

  /// Rows for one cost, in grid order.
  std::vector<MomentRow> moments_for(const std::string& cost) const {
    std::vector<MomentRow> r;
    for (const auto& m : moments)
      if (m.cost == cost) r.push_back(m);
    return r;
  }
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Bottom-k sample by hash: independent of visiting order, so identical for
// any thread count.
struct BottomK {
  std::size_t k = 0;
  std::priority_queue<std::pair<std::uint64_t, double>> heap;  // max-heap on hash
  void offer(std::uint64_t h, double v) {
    if (heap.size() < k) {
      heap.emplace(h, v);
    } else if (k && h < heap.top().first) {
      heap.pop();
      heap.emplace(h, v);
    }
  }
};

}  // namespace detail

inline EnsembleResult run_ensemble(const FieldConfig& f, const EnsembleOptions& opt) {
  if (opt.N_grid.empty()) throw Error(ErrorCode::invalid_argument, "N grid is empty");
  for (std::size_t i = 0; i < opt.N_grid.size(); ++i)
    if (opt.N_grid[i] < 1 || (i && opt.N_grid[i] <= opt.N_grid[i - 1]))
      throw Error(ErrorCode::invalid_argument, "N grid must be positive and strictly increasing");
  if (opt.costs.empty()) throw Error(ErrorCode::invalid_argument, "no cost function given");
  for (long long q : opt.qs)
    if (q < 1) throw Error(ErrorCode::invalid_argument, "modulus q must be at least 1");
  if (opt.N_grid.back() > (1LL << 24)) throw Error(ErrorCode::invalid_argument, "N above 2^24 overflows the 64-bit path");

  const std::size_t S = opt.N_grid.size(), C = opt.costs.size(), W = opt.ws.size();
  const auto dens = canonical_denominators(f, opt.N_grid.back());
  std::vector<bool> integer(C);
  for (std::size_t c = 0; c < C; ++c) integer[c] = opt.costs[c].integer_valued();
  const double len_slope = 1.0 / std::log(1.0 / std::sqrt(static_cast<double>(f.R_sq)));

  // per denominator: count and the order-sensitive floating sums
  struct ClassSums {
    std::uint64_t count = 0;
    std::vector<long double> sum, sumsq;        // real costs
    std::vector<std::complex<long double>> dir;  // real costs[0] only
  };
  // per worker: order-insensitive integer data
  struct Worker {
    std::vector<std::vector<std::vector<std::uint64_t>>> hist;  // [cost][slot][value]
    std::vector<std::vector<detail::BottomK>> sample;           // [cost][slot]
    std::uint64_t violations = 0, steps = 0;
  };
  const std::size_t T = static_cast<std::size_t>(std::max(1, opt.threads));
  std::vector<ClassSums> cls(dens.size());
  std::vector<Worker> workers(T);
  for (auto& w : workers) {
    w.hist.assign(C, std::vector<std::vector<std::uint64_t>>(S));
    w.sample.assign(C, std::vector<detail::BottomK>(S));
    for (std::size_t c = 0; c < C; ++c)
      for (auto& b : w.sample[c]) b.k = integer[c] ? 0 : opt.sample_size;
  }

  detail::parallel_for(T, static_cast<int>(T), [&](std::size_t tid) {
    auto& wk = workers[tid];
    std::vector<long long> icost(C);
    std::vector<double> rcost(C);
    for (std::size_t k = dens.size() * tid / T; k < dens.size() * (tid + 1) / T; ++k) {
      const auto [n, bx, by] = dens[k];
      const auto slot = static_cast<std::size_t>(
          std::lower_bound(opt.N_grid.begin(), opt.N_grid.end(), n) - opt.N_grid.begin());
      auto& cs = cls[k];
      cs.sum.assign(C, 0), cs.sumsq.assign(C, 0), cs.dir.assign(W, 0);
      const double len_cap = len_slope * 0.5 * std::log(static_cast<double>(n)) + 1 + 1e-9;
      numerators_for(f, bx, by, [&](long long ax, long long ay) {
        std::fill(icost.begin(), icost.end(), 0);
        std::fill(rcost.begin(), rcost.end(), 0.0);
        long long len = 0;
        const long long g = euclid_i64(f, ax, ay, bx, by, [&](long long p, long long q) {
          ++len;
          for (std::size_t c = 0; c < C; ++c) {
            if (integer[c])
              icost[c] += opt.costs[c].integer(p, q);
            else
              rcost[c] += opt.costs[c](p, q, f.d);
          }
        });
        if (g != 1) return;
        ++cs.count;
        wk.steps += static_cast<std::uint64_t>(len);
        if (static_cast<double>(len) > len_cap) ++wk.violations;
        const std::uint64_t h = detail::mix64(opt.seed ^ detail::mix64(static_cast<std::uint64_t>(ax) * 0x100000001b3ULL ^
                                                                      static_cast<std::uint64_t>(ay) << 21 ^
                                                                      static_cast<std::uint64_t>(bx) << 42 ^
                                                                      static_cast<std::uint64_t>(by)));
        for (std::size_t c = 0; c < C; ++c) {
          if (integer[c]) {
            auto& hv = wk.hist[c][slot];
            const auto v = static_cast<std::size_t>(icost[c]);
            if (hv.size() <= v) hv.resize(v + 1, 0);
            ++hv[v];
          } else {
            cs.sum[c] += rcost[c];
            cs.sumsq[c] += static_cast<long double>(rcost[c]) * rcost[c];
            wk.sample[c][slot].offer(h, rcost[c]);
          }
        }
        if (!integer[0])
          for (std::size_t j = 0; j < W; ++j) cs.dir[j] += std::exp(std::complex<long double>(opt.ws[j]) * static_cast<long double>(rcost[0]));
      });
    }
  });

  EnsembleResult res;
  res.d = f.d;
  res.N_grid = opt.N_grid;
  for (const auto& w : workers) res.max_length_excess += w.violations, res.steps += w.steps;

  // cumulative per-slot aggregates
  std::vector<std::uint64_t> count(S, 0);
  std::vector<std::vector<long double>> sum(C, std::vector<long double>(S, 0)), sumsq = sum;
  std::vector<std::vector<std::complex<long double>>> dir(W, std::vector<std::complex<long double>>(S, 0));
  for (std::size_t k = 0; k < dens.size(); ++k) {
    const auto slot = static_cast<std::size_t>(
        std::lower_bound(opt.N_grid.begin(), opt.N_grid.end(), dens[k][0]) - opt.N_grid.begin());
    count[slot] += cls[k].count;
    for (std::size_t c = 0; c < C; ++c)
      if (!integer[c]) sum[c][slot] += cls[k].sum[c], sumsq[c][slot] += cls[k].sumsq[c];
    for (std::size_t j = 0; j < W; ++j) dir[j][slot] += cls[k].dir[j];
  }
  for (std::size_t s = 1; s < S; ++s) {
    count[s] += count[s - 1];
    for (std::size_t c = 0; c < C; ++c) sum[c][s] += sum[c][s - 1], sumsq[c][s] += sumsq[c][s - 1];
    for (std::size_t j = 0; j < W; ++j) dir[j][s] += dir[j][s - 1];
  }

  std::vector<std::vector<std::vector<std::uint64_t>>> hist(C, std::vector<std::vector<std::uint64_t>>(S));
  for (std::size_t c = 0; c < C; ++c) {
    if (!integer[c]) continue;
    for (std::size_t s = 0; s < S; ++s) {
      auto& h = hist[c][s];
      if (s) h = hist[c][s - 1];
      for (const auto& w : workers) {
        const auto& hv = w.hist[c][s];
        if (h.size() < hv.size()) h.resize(hv.size(), 0);
        for (std::size_t v = 0; v < hv.size(); ++v) h[v] += hv[v];
      }
    }
  }

  for (std::size_t c = 0; c < C; ++c) {
    std::vector<std::pair<std::uint64_t, double>> pool;  // cumulative bottom-k for real costs
    for (std::size_t s = 0; s < S; ++s) {
      MomentRow row;
      row.cost = opt.costs[c].id();
      row.N = opt.N_grid[s];
      row.count = count[s];
      if (integer[c]) {
        long double m = 0, mm = 0;
        for (std::size_t v = 0; v < hist[c][s].size(); ++v) {
          const auto k = static_cast<long double>(hist[c][s][v]);
          m += k * v, mm += k * v * v;
        }
        if (count[s]) {
          m /= count[s], mm /= count[s];
          row.mean = static_cast<double>(m), row.var = static_cast<double>(mm - m * m);
          row.ks = row.var > 0 ? ks_normal_histogram(hist[c][s]) : NAN;
        }
      } else {
        for (const auto& w : workers) {
          auto heap = w.sample[c][s].heap;
          while (!heap.empty()) pool.push_back(heap.top()), heap.pop();
        }
        std::sort(pool.begin(), pool.end());
        if (pool.size() > opt.sample_size) pool.resize(opt.sample_size);
        if (count[s]) {
          const long double m = sum[c][s] / count[s];
          row.mean = static_cast<double>(m), row.var = static_cast<double>(sumsq[c][s] / count[s] - m * m);
          std::vector<double> xs;
          for (const auto& p : pool) xs.push_back(p.second);
          row.ks = xs.size() >= 2 && row.var > 0 ? ks_normal(standardize(xs)) : NAN;
        }
      }
      res.moments.push_back(row);
    }
  }

  for (std::size_t c = 0; c < C; ++c) {
    if (!integer[c]) continue;
    for (long long q : opt.qs)
      for (std::size_t s = 0; s < S; ++s) {
        std::vector<std::uint64_t> r(static_cast<std::size_t>(q), 0);
        for (std::size_t v = 0; v < hist[c][s].size(); ++v) r[v % static_cast<std::size_t>(q)] += hist[c][s][v];
        double dev = 0;
        for (auto k : r) dev = std::max(dev, std::abs(static_cast<double>(k) / static_cast<double>(count[s]) - 1.0 / static_cast<double>(q)));
        for (long long a = 0; a < q; ++a)
          res.modq.push_back({opt.costs[c].id(), opt.N_grid[s], q, a, r[static_cast<std::size_t>(a)], dev});
      }
  }

  for (std::size_t j = 0; j < W; ++j) {
    std::vector<std::complex<double>> partial(S);
    for (std::size_t s = 0; s < S; ++s) {
      if (integer[0]) {
        std::complex<long double> acc = 0;
        for (std::size_t v = 0; v < hist[0][s].size(); ++v)
          if (hist[0][s][v])
            acc += static_cast<long double>(hist[0][s][v]) * std::exp(std::complex<long double>(opt.ws[j]) * static_cast<long double>(v));
        partial[s] = std::complex<double>(acc);
      } else {
        partial[s] = std::complex<double>(dir[j][s]);
      }
    }
    double slope = NAN;
    if (S >= 2) {
      std::vector<double> x, y;
      for (std::size_t s = 0; s < S; ++s) x.push_back(std::log(static_cast<double>(opt.N_grid[s]))), y.push_back(std::log(std::abs(partial[s])));
      slope = linear_fit(x, y).slope;
    }
    for (std::size_t s = 0; s < S; ++s) res.dirichlet.push_back({opt.N_grid[s], opt.ws[j], partial[s], slope});
  }
  return res;
}

}  // namespace hurwitz
