#pragma once

// Serialization: JSON documents, CSV tables, SVG renders and atomic file
// replacement.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "hurwitz/cf.hpp"
#include "hurwitz/geometry.hpp"

namespace hurwitz {

using Json = nlohmann::ordered_json;

/// Replace path by content without ever exposing a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (!dir.empty() && !fs::exists(dir)) fs::create_directories(dir);
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error(ErrorCode::invalid_argument, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::invalid_argument, "cannot replace " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::missing_input, "missing input: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string rational_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline std::string rational_string(const BigInt& n) { return n.str() + "/1"; }

/// The exact dyadic value of a finite double.
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::invalid_argument, "non-finite coordinate");
  int e = 0;
  double m = std::frexp(x, &e);
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  Rational r{BigInt(mant)};
  BigInt p = BigInt(1) << std::abs(e);
  return e >= 0 ? r * Rational(p) : r / Rational(p);
}

/// Shortest decimal that round-trips; keeps CSV output stable and compact.
inline std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// expansion

inline Json quad_int_json(const QI& a) { return a.to_string(); }

inline Json expansion_json(const CFExpansion& e) {
  Json j;
  j["field"] = e.input.field().d;
  j["num"] = e.input.num().to_string();
  j["den"] = e.input.den().to_string();
  Json digits = Json::array();
  for (const auto& a : e.digits) digits.push_back(a.to_string());
  j["digits"] = digits;
  j["length"] = e.length();
  Json costs = Json::object();
  for (const auto& [k, v] : e.costs) costs[k] = v;
  j["costs"] = costs;
  return j;
}

// ---------------------------------------------------------------------------
// partition

inline Json curve_json(const GenCircle& g) {
  Json j;
  j["A"] = rational_string(g.A());
  j["B_re"] = rational_string(g.B1());
  j["B_omega"] = rational_string(g.B2());
  j["C"] = rational_string(g.C());
  return j;
}

inline Json partition_json(const CellComplex& cx) {
  const auto& f = cx.field();
  Json j;
  j["field"] = cx.d;
  j["n0"] = cx.n0;
  j["resolution"] = cx.resolution;
  j["coordinates"] = "basis {1, omega}";
  Json curves = Json::array();
  for (const auto& g : cx.curves) curves.push_back(curve_json(g));
  j["curves"] = curves;
  Json cells = Json::array();
  for (const auto& c : cx.cells) {
    Json cj;
    cj["id"] = c.id;
    cj["dim"] = c.dim;
    std::string sv;
    for (signed char s : c.sign) sv += s > 0 ? '+' : (s < 0 ? '-' : '0');
    cj["sign_vector"] = sv;
    Json reps = Json::array();
    if (c.dim == 2) {
      for (const auto& [X, Y] : c.rep_exact) reps.push_back(Json::array({rational_string(X), rational_string(Y)}));
    } else {
      // 0- and 1-cell points are floating; exported as the exact value of the double
      for (const auto& p : c.rep_points) {
        auto [x, y] = f.to_coords(p);
        reps.push_back(Json::array({rational_string(exact_rational(x)), rational_string(exact_rational(y))}));
      }
    }
    cj["rep_points"] = reps;
    cj["bbox"] = Json::array({c.bbox[0], c.bbox[1], c.bbox[2], c.bbox[3]});
    if (c.dim == 2) cj["area"] = c.area;
    cj["adjacent"] = c.adjacent;
    cells.push_back(cj);
  }
  j["cells"] = cells;
  return j;
}

/// Curves and shaded 2-cells of the complex.
inline std::string partition_svg(const CellComplex& cx, int raster = 240, int size = 640) {
  const auto& f = cx.field();
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  for (const auto& [X, Y] : f.vertices) {
    cplx v = f.to_complex(static_cast<double>(X), static_cast<double>(Y));
    x0 = std::min(x0, v.real()), x1 = std::max(x1, v.real());
    y0 = std::min(y0, v.imag()), y1 = std::max(y1, v.imag());
  }
  const double pad = 0.04 * std::max(x1 - x0, y1 - y0);
  x0 -= pad, y0 -= pad, x1 += pad, y1 += pad;
  const double scale = size / std::max(x1 - x0, y1 - y0);
  const int W = static_cast<int>(std::ceil((x1 - x0) * scale)), H = static_cast<int>(std::ceil((y1 - y0) * scale));
  auto px = [&](cplx z) { return std::pair{(z.real() - x0) * scale, (y1 - z.imag()) * scale}; };
  auto num = [](double v) {
    char b[24];
    std::snprintf(b, sizeof b, "%.2f", v);
    return std::string(b);
  };
  auto colour = [](int id) {
    char b[40];
    std::snprintf(b, sizeof b, "hsl(%d,55%%,78%%)", static_cast<int>(std::fmod(id * 137.508, 360.0)));
    return std::string(b);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g shape-rendering=\"crispEdges\">\n";
  // raster shading, one rect per run of equal cells in a row
  const double step = std::max(x1 - x0, y1 - y0) / raster;
  for (int r = 0; r * step < y1 - y0; ++r) {
    const double y = y1 - (r + 0.5) * step;
    int run = -1, start = 0;
    auto flush = [&](int end) {
      if (run < 0) return;
      o << "<rect x=\"" << num(start * step * scale) << "\" y=\"" << num(r * step * scale) << "\" width=\""
        << num((end - start) * step * scale) << "\" height=\"" << num(step * scale) << "\" fill=\"" << colour(run)
        << "\"/>\n";
    };
    int c = 0;
    for (; c * step < x1 - x0; ++c) {
      int cell = cx.locate(cplx(x0 + (c + 0.5) * step, y), 0.0);
      if (cell >= 0 && cx.cells[static_cast<std::size_t>(cell)].dim != 2) cell = -1;
      if (cell != run) {
        flush(c);
        run = cell, start = c;
      }
    }
    flush(c);
  }
  o << "</g>\n<g fill=\"none\" stroke=\"black\" stroke-width=\"1.2\">\n";
  for (const auto& c : cx.cells) {
    if (c.dim != 1) continue;
    const auto& g = cx.curves[static_cast<std::size_t>(c.curve)];
    const int n = g.is_line() ? 1 : std::max(2, static_cast<int>(std::ceil((c.t1 - c.t0) * g.radius() * scale / 3)));
    o << "<polyline points=\"";
    for (int k = 0; k <= n; ++k) {
      auto [u, v] = px(g.point(c.t0 + (c.t1 - c.t0) * k / n));
      o << (k ? " " : "") << num(u) << ',' << num(v);
    }
    o << "\"/>\n";
  }
  o << "</g>\n<g fill=\"black\">\n";
  for (const auto& c : cx.cells) {
    if (c.dim != 0) continue;
    auto [u, v] = px(c.rep_points[0]);
    o << "<circle cx=\"" << num(u) << "\" cy=\"" << num(v) << "\" r=\"1.6\"/>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace hurwitz
