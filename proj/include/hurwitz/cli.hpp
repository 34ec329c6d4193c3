#pragma once

// Command-line front end: flag parsing, per-subcommand validation, output
// emission and the consolidated report.

#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hurwitz/io.hpp"
#include "hurwitz/stats.hpp"
#include "hurwitz/transfer.hpp"

namespace hurwitz::cli {

/// Raised for bad flag values; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int d = 1;
  std::string z;
  long long N = 1024;
  std::vector<long long> N_grid{256, 1024, 4096};
  std::vector<long long> q{2, 3};
  std::optional<int> grid;
  std::optional<long long> digit_norm_bound;
  std::vector<std::string> w;
  int resolution = 512;
  std::vector<std::string> cost{"len"};
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string format;
  long long samples = 100000;
  double sigma = 1.0, u = 0.0;
  std::string from;
};

// ---------------------------------------------------------------------------
// parsing helpers

/// Real or complex decimal literal: "0.02", "1.5i", "-0.1+2i", "i".
inline std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw UsageError("--w: empty value");
  auto number = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) throw UsageError("--w: cannot parse '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return number(s);
  s.pop_back();
  // split real and imaginary parts at the last sign that is not an exponent sign
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  if (cut == std::string::npos) return {0.0, number(s)};
  return {number(s.substr(0, cut)), number(s.substr(cut))};
}

inline std::vector<CostFunction> parse_costs(const std::vector<std::string>& specs) {
  std::vector<CostFunction> out;
  for (const auto& s : specs) {
    try {
      out.push_back(CostFunction::parse(s));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::missing_input) throw;
      throw UsageError(std::string("--cost: ") + e.what());
    }
  }
  if (out.empty()) throw UsageError("--cost: at least one cost is required");
  return out;
}

inline void check_range(const char* flag, long double v, long double lo, long double hi) {
  if (v < lo || v > hi) {
    std::ostringstream m;
    m << flag << ": " << static_cast<double>(v) << " outside valid range [" << static_cast<double>(lo) << ", "
      << static_cast<double>(hi) << "]";
    throw UsageError(m.str());
  }
}

inline void check_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (c.format == a) return;
    list += (list.empty() ? "" : ", ") + std::string(a);
  }
  throw UsageError("--format: '" + c.format + "' not valid for " + c.command + " (valid: " + list + ")");
}

inline void check_grid(const std::vector<long long>& g) {
  if (g.empty()) throw UsageError("--N-grid: empty list");
  for (std::size_t i = 0; i < g.size(); ++i) {
    check_range("--N-grid", static_cast<long double>(g[i]), 1, 1 << 24);
    if (i && g[i] <= g[i - 1]) throw UsageError("--N-grid: values must be strictly increasing");
  }
}

inline void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.out.empty() || c.out == "-")
    out << content;
  else
    write_atomic(c.out, content);
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// producers shared by the subcommands and the report

inline Json scan_json(int d, long long bound) {
  Json j;
  j["field"] = d;
  j["digit_norm_bound"] = bound;
  Json e = Json::array();
  for (const auto& a : empty_digit_scan(FieldConfig::get(d), bound)) e.push_back(a.to_string());
  j["empty_digits"] = e;
  return j;
}

inline CellComplex partition(int d, int resolution) {
  const auto& f = FieldConfig::get(d);
  auto w = generate_W(f);
  return build_cells(w.curves, f, resolution, w.n0);
}

inline Json spectral_json(int d, const TransferOptions& opt, const CostFunction& cost, double sigma, double u,
                          const std::vector<double>& ws) {
  const auto& f = FieldConfig::get(d);
  BoxGrid grid = make_box_grid(f, opt.m, opt.K, opt.subgrid);
  auto res = lambda_at(grid, sigma, u, cost, opt);
  Json j;
  j["d"] = d;
  j["m"] = opt.m;
  j["A_max"] = opt.A_max;
  j["cost"] = cost.id();
  j["sigma"] = sigma;
  j["u"] = u;
  j["lambda"] = res.lambda;
  j["residual"] = res.residual;
  j["tail"] = res.tail;
  j["Lambda"] = lyapunov_integral(grid, res);
  Json curve = Json::array();
  Json mu = nullptr, delta = nullptr;
  if (!ws.empty()) {
    auto pc = solve_s0(f, ws, cost, opt);
    for (const auto& [w, s] : pc.samples) curve.push_back(Json{{"w", w}, {"s0", s}});
    mu = pc.mu_hat;
    delta = pc.delta_hat;
  }
  j["s0_curve"] = curve;
  j["mu_hat"] = mu;
  j["delta_hat"] = delta;
  return j;
}

inline std::string density_csv(int d, const TransferOptions& opt, const CostFunction& cost, double sigma, double u) {
  BoxGrid grid = make_box_grid(FieldConfig::get(d), opt.m, opt.K, opt.subgrid);
  auto res = lambda_at(grid, sigma, u, cost, opt);
  std::string s = "x,y,psi\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    s += fmt_double(grid.center[i].real()) + "," + fmt_double(grid.center[i].imag()) + "," + fmt_double(res.psi[i]) + "\n";
  return s;
}

inline std::string moments_csv(const EnsembleResult& r) {
  std::string s = "cost,N,count,mean,var,ks\n";
  for (const auto& m : r.moments)
    s += m.cost + "," + std::to_string(m.N) + "," + std::to_string(m.count) + "," + fmt_double(m.mean) + "," +
         fmt_double(m.var) + "," + fmt_double(m.ks) + "\n";
  return s;
}

inline std::string modq_csv(const EnsembleResult& r, const std::string& cost) {
  std::string s = "N,q,a,count,deviation\n";
  for (const auto& m : r.modq)
    if (m.cost == cost)
      s += std::to_string(m.N) + "," + std::to_string(m.q) + "," + std::to_string(m.a) + "," + std::to_string(m.count) +
           "," + fmt_double(m.deviation) + "\n";
  return s;
}

inline std::string dirichlet_csv(const EnsembleResult& r) {
  std::string s = "N,w_re,w_im,partial_re,partial_im,fit_slope\n";
  for (const auto& m : r.dirichlet)
    s += std::to_string(m.N) + "," + fmt_double(m.w.real()) + "," + fmt_double(m.w.imag()) + "," +
         fmt_double(m.partial.real()) + "," + fmt_double(m.partial.imag()) + "," + fmt_double(m.fit_slope) + "\n";
  return s;
}

/// CSV with a header row into an array of objects; numeric fields become numbers.
inline Json csv_rows(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> head;
  auto split = [](const std::string& l) {
    std::vector<std::string> v;
    std::string cur;
    std::istringstream ls(l);
    while (std::getline(ls, cur, ',')) v.push_back(cur);
    return v;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::missing_input, name + " is empty");
  head = split(line);
  Json rows = Json::array();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto v = split(line);
    if (v.size() != head.size()) throw Error(ErrorCode::parse_error, name + ": malformed row '" + line + "'");
    Json r = Json::object();
    for (std::size_t k = 0; k < v.size(); ++k) {
      char* end = nullptr;
      double x = std::strtod(v[k].c_str(), &end);
      if (!v[k].empty() && end == v[k].c_str() + v[k].size()) {
        if (x == std::floor(x) && std::abs(x) < 9e15 && v[k].find_first_of(".eE") == std::string::npos)
          r[head[k]] = static_cast<long long>(x);
        else
          r[head[k]] = x;
      } else {
        r[head[k]] = v[k];
      }
    }
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// report

inline constexpr const char* kReportInputs[] = {"scan-digits.json", "partition.json", "partition.svg", "spectrum.json",
                                                "moments.csv",      "modq.csv",       "dirichlet.csv"};

/// Consolidates the artifacts in `dir` into report.json in `out_dir`.
inline void assemble_report(const std::filesystem::path& dir, const std::filesystem::path& out_dir) {
  for (const char* name : kReportInputs)
    if (!std::filesystem::exists(dir / name))
      throw Error(ErrorCode::missing_input, "report input " + (dir / name).string() + " not found");
  auto load = [&](const char* name) {
    try {
      return Json::parse(read_file(dir / name));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::parse_error, std::string(name) + ": " + e.what());
    }
  };
  Json scan = load("scan-digits.json"), part = load("partition.json"), spec = load("spectrum.json");

  Json rep;
  rep["tool"] = "hurwitz-lab";
  rep["field"] = part.at("field");
  rep["empty_digits"] = scan.at("empty_digits");
  Json cells = {{"0", 0}, {"1", 0}, {"2", 0}};
  double area = 0;
  for (const auto& c : part.at("cells")) {
    const std::string k = std::to_string(c.at("dim").get<int>());
    cells[k] = cells[k].get<long long>() + 1;
    if (c.contains("area")) area += c["area"].get<double>();
  }
  rep["partition"] = {{"n0", part.at("n0")},
                      {"curves", part.at("curves").size()},
                      {"cells", cells},
                      {"area", area},
                      {"resolution", part.at("resolution")}};
  rep["lambda_10"] = spec.at("lambda");
  rep["spectral"] = spec;

  Json moments = csv_rows(read_file(dir / "moments.csv"), "moments.csv");
  Json modq = csv_rows(read_file(dir / "modq.csv"), "modq.csv");
  Json dir_rows = csv_rows(read_file(dir / "dirichlet.csv"), "dirichlet.csv");
  // |partial(i tau)| / partial(0) at each N, for imaginary parameters
  Json ratios = Json::array();
  for (const auto& r : dir_rows) {
    if (r.at("w_im").get<double>() == 0) continue;
    for (const auto& z : dir_rows)
      if (z.at("N") == r.at("N") && z.at("w_re").get<double>() == 0 && z.at("w_im").get<double>() == 0) {
        const double num = std::hypot(r.at("partial_re").get<double>(), r.at("partial_im").get<double>());
        ratios.push_back({{"N", r.at("N")}, {"w_im", r.at("w_im")}, {"ratio", num / z.at("partial_re").get<double>()}});
      }
  }
  rep["statistics"] = {{"moments", moments}, {"modq", modq}, {"dirichlet", dir_rows}, {"oscillation_ratios", ratios}};
  rep["figures"] = Json::array({"partition.svg"});

  std::filesystem::create_directories(out_dir);
  if (std::filesystem::weakly_canonical(dir) != std::filesystem::weakly_canonical(out_dir))
    write_atomic(out_dir / "partition.svg", read_file(dir / "partition.svg"));
  write_atomic(out_dir / "report.json", dump(rep));
}

// ---------------------------------------------------------------------------
// dispatch

inline TransferOptions transfer_options(const RunConfig& c, int default_m) {
  TransferOptions o;
  o.m = c.grid.value_or(default_m);
  o.A_max = c.digit_norm_bound.value_or(400);
  o.threads = c.threads;
  check_range("--grid", o.m, 10, 400);
  check_range("--digit-norm-bound", static_cast<long double>(o.A_max), 100, 100000);
  return o;
}

inline std::vector<double> real_ws(const RunConfig& c, std::vector<std::string> dflt) {
  std::vector<double> out;
  for (const auto& s : c.w.empty() ? dflt : c.w) {
    auto w = parse_complex(s);
    if (w.imag() != 0) throw UsageError("--w: " + s + " must be real for " + c.command);
    check_range("--w", w.real(), -0.05, 0.05);
    out.push_back(w.real());
  }
  return out;
}

inline std::vector<std::complex<double>> dirichlet_ws(const RunConfig& c, std::vector<std::string> dflt) {
  std::vector<std::complex<double>> out;
  for (const auto& s : c.w.empty() ? dflt : c.w) {
    auto w = parse_complex(s);
    if (w.imag() == 0)
      check_range("--w", w.real(), -0.05, 0.05);
    else if (w.real() != 0 || std::abs(w.imag()) >= std::numbers::pi)
      throw UsageError("--w: " + s + " must be real with |w| <= 0.05 or i*tau with 0 < |tau| < pi");
    out.push_back(w);
  }
  return out;
}

inline EnsembleOptions ensemble_options(const RunConfig& c, std::vector<CostFunction> costs) {
  check_grid(c.N_grid);
  EnsembleOptions o;
  o.N_grid = c.N_grid;
  o.costs = std::move(costs);
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

inline void run(const RunConfig& c, std::ostream& out) {
  const auto& f = FieldConfig::get(c.d);
  check_range("--threads", c.threads, 1, 256);
  const std::string& cmd = c.command;

  if (cmd == "expand") {
    if (!c.format.empty()) check_format(c, {"json"});
    if (c.z.empty()) throw UsageError("--z is required for expand");
    std::optional<QR> z;
    try {
      z = parse_quad_rat(c.z, c.d);
    } catch (const Error& e) {
      throw UsageError(std::string("--z: ") + e.what());
    }
    auto costs = parse_costs(c.cost);
    emit(c, dump(expansion_json(expand(*z, costs))), out);
  } else if (cmd == "scan-digits") {
    if (!c.format.empty()) check_format(c, {"json"});
    const long long bound = c.digit_norm_bound.value_or(50);
    check_range("--digit-norm-bound", static_cast<long double>(bound), 4, 100000);
    emit(c, dump(scan_json(c.d, bound)), out);
  } else if (cmd == "partition") {
    if (!c.format.empty()) check_format(c, {"json", "svg"});
    check_range("--resolution", c.resolution, 64, 4096);
    auto cx = partition(c.d, c.resolution);
    emit(c, c.format == "svg" ? partition_svg(cx) : dump(partition_json(cx)), out);
  } else if (cmd == "verify-markov") {
    if (!c.format.empty()) check_format(c, {"json"});
    const long long bound = c.digit_norm_bound.value_or(100);
    check_range("--digit-norm-bound", static_cast<long double>(bound), 1, 5000);
    check_range("--samples", static_cast<long double>(c.samples), 1, 1e9);
    check_range("--resolution", c.resolution, 64, 4096);
    auto cx = partition(c.d, c.resolution);
    auto rep = verify_markov(cx, bound, c.samples, c.seed, c.threads);
    Json j;
    j["field"] = c.d;
    j["digit_norm_bound"] = bound;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["triples"] = rep.triples;
    j["skipped"] = rep.skipped;
    j["pairs"] = rep.pairs;
    j["property1"] = rep.property1;
    j["property2"] = rep.property2;
    j["violations"] = rep.violations();
    Json w = Json::array();
    for (const auto& v : rep.witnesses)
      w.push_back({{"property", v.property}, {"alpha", v.alpha.to_string()}, {"cell", v.cell}, {"z", {v.z.real(), v.z.imag()}}});
    j["witnesses"] = w;
    emit(c, dump(j), out);
  } else if (cmd == "spectrum") {
    if (!c.format.empty()) check_format(c, {"json", "csv"});
    auto opt = transfer_options(c, 100);
    check_range("--sigma", c.sigma, 0.5, 1.5);
    check_range("--u", c.u, -0.5, 0.5);
    auto costs = parse_costs(c.cost);
    if (c.format == "csv")
      emit(c, density_csv(c.d, opt, costs[0], c.sigma, c.u), out);
    else
      emit(c, dump(spectral_json(c.d, opt, costs[0], c.sigma, c.u, {})), out);
  } else if (cmd == "pressure") {
    if (!c.format.empty()) check_format(c, {"json"});
    auto opt = transfer_options(c, 60);
    auto ws = real_ws(c, {"-0.02", "0", "0.02"});
    if (ws.size() < 3) throw UsageError("--w: pressure needs at least three values");
    auto costs = parse_costs(c.cost);
    emit(c, dump(spectral_json(c.d, opt, costs[0], 1.0, 0.0, ws)), out);
  } else if (cmd == "enumerate") {
    if (!c.format.empty()) check_format(c, {"csv"});
    check_range("--N", static_cast<long double>(c.N), 1, 4096);
    auto costs = parse_costs(c.cost);
    std::string s = "num,den,ht2,length,digits";
    for (const auto& k : costs) s += "," + k.id();
    s += "\n";
    enumerate_omega({c.d, c.N}, costs, [&](const QR& z, const CFExpansion& e) {
      s += z.num().to_string() + "," + z.den().to_string() + "," + z.den().norm().str() + "," +
           std::to_string(e.length()) + ",";
      for (std::size_t k = 0; k < e.digits.size(); ++k) s += (k ? " " : "") + e.digits[k].to_string();
      for (const auto& k : costs) s += "," + fmt_double(e.costs.at(k.id()));
      s += "\n";
    });
    emit(c, s, out);
  } else if (cmd == "stats") {
    if (!c.format.empty()) check_format(c, {"csv"});
    auto o = ensemble_options(c, parse_costs(c.cost));
    emit(c, moments_csv(run_ensemble(f, o)), out);
  } else if (cmd == "modq") {
    if (!c.format.empty()) check_format(c, {"csv"});
    auto costs = parse_costs(c.cost);
    if (!costs[0].integer_valued()) throw UsageError("--cost: modq needs an integer-valued cost (len or table)");
    costs.erase(costs.begin() + 1, costs.end());
    auto o = ensemble_options(c, costs);
    if (c.q.empty()) throw UsageError("--q: empty list");
    for (long long q : c.q) check_range("--q", static_cast<long double>(q), 1, 1000);
    o.qs = c.q;
    emit(c, modq_csv(run_ensemble(f, o), costs[0].id()), out);
  } else if (cmd == "dirichlet") {
    if (!c.format.empty()) check_format(c, {"csv"});
    auto costs = parse_costs(c.cost);
    costs.erase(costs.begin() + 1, costs.end());
    auto o = ensemble_options(c, costs);
    o.ws = dirichlet_ws(c, {"0", "0.02", "1.5707963267948966i"});
    emit(c, dirichlet_csv(run_ensemble(f, o)), out);
  } else if (cmd == "report") {
    const std::filesystem::path out_dir = c.out.empty() ? std::filesystem::path("report") : std::filesystem::path(c.out);
    if (!c.from.empty()) {
      assemble_report(c.from, out_dir);
      return;
    }
    // fresh run with small presets; every artifact lands in out_dir
    check_range("--resolution", c.resolution, 64, 4096);
    auto opt = transfer_options(c, 50);
    auto ws = real_ws(c, {"-0.02", "0", "0.02"});
    if (ws.size() < 3) throw UsageError("--w: pressure needs at least three values");
    for (long long q : c.q) check_range("--q", static_cast<long double>(q), 1, 1000);
    auto costs = parse_costs(c.cost);
    if (!costs[0].integer_valued()) throw UsageError("--cost: report needs an integer-valued first cost");
    auto eo = ensemble_options(c, costs);
    eo.qs = c.q;
    eo.ws = {0.0, 0.02, {0.0, std::numbers::pi / 2}};

    std::filesystem::create_directories(out_dir);
    write_atomic(out_dir / "scan-digits.json", dump(scan_json(c.d, 50)));
    auto cx = partition(c.d, c.resolution);
    write_atomic(out_dir / "partition.json", dump(partition_json(cx)));
    write_atomic(out_dir / "partition.svg", partition_svg(cx));
    write_atomic(out_dir / "spectrum.json", dump(spectral_json(c.d, opt, costs[0], 1.0, 0.0, ws)));
    auto r = run_ensemble(f, eo);
    write_atomic(out_dir / "moments.csv", moments_csv(r));
    write_atomic(out_dir / "modq.csv", modq_csv(r, costs[0].id()));
    write_atomic(out_dir / "dirichlet.csv", dirichlet_csv(r));
    assemble_report(out_dir, out_dir);
  } else {
    throw UsageError("unknown subcommand " + cmd);
  }
}

/// Parses argv, runs one subcommand and returns the process exit code:
/// 0 success, 2 usage error, 1 runtime error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"Exact and numerical laboratory for nearest-integer complex continued fractions", "hurwitz-lab"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the long flags; flags win");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::vector<long long> N_grid, q;
  std::vector<std::string> cost;
  int grid = 0;
  long long bound = 0;
  app.add_option("--d", c.d, "field discriminant parameter")->check(CLI::IsMember({1, 2, 3, 7, 11}));
  app.add_option("--N", c.N, "height-squared bound");
  app.add_option("--N-grid", N_grid, "comma list of increasing N checkpoints")->delimiter(',');
  app.add_option("--q", q, "comma list of moduli")->delimiter(',');
  auto* o_grid = app.add_option("--grid", grid, "Ulam boxes per axis");
  auto* o_bound = app.add_option("--digit-norm-bound", bound, "digit norm bound (scan, Markov check, transfer truncation)");
  app.add_option("--w", c.w, "comma list of w values: real, or imaginary as <tau>i")->delimiter(',');
  app.add_option("--resolution", c.resolution, "partition grid resolution per axis");
  app.add_option("--cost", cost, "cost functions: len, logabs, table:<path> (comma list)")->delimiter(',');
  app.add_option("--seed", c.seed, "seed for every sampled quantity");
  app.add_option("--threads", c.threads, "worker threads")->envname("HURWITZ_LAB_THREADS");
  app.add_option("--out", c.out, "output file (directory for report); stdout when absent");
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json", "svg"}));

  auto* expand = app.add_subcommand("expand", "continued fraction expansion of one exact field element");
  expand->add_option("--z", c.z, "field element, e.g. 2/5-1/5i or 1/3+1/3w");
  app.add_subcommand("scan-digits", "digits whose cylinder is empty");
  app.add_subcommand("partition", "Markov cell complex as JSON or SVG");
  auto* vm = app.add_subcommand("verify-markov", "sampled Markov compatibility check of the cell complex");
  vm->add_option("--samples", c.samples, "sampled (digit, cell, point) triples");
  auto* sp = app.add_subcommand("spectrum", "dominant eigenvalue and density of the Ulam transfer operator");
  sp->add_option("--sigma", c.sigma, "real part of s");
  sp->add_option("--u", c.u, "real weight on the cost");
  app.add_subcommand("pressure", "pressure curve s0(w) and the constants mu_hat, delta_hat");
  app.add_subcommand("enumerate", "the ensemble Omega_N with expansions, as CSV");
  app.add_subcommand("stats", "moment table (moments.csv)");
  app.add_subcommand("modq", "cost residues mod q (modq.csv)");
  app.add_subcommand("dirichlet", "Dirichlet partial sums (dirichlet.csv)");
  auto* rp = app.add_subcommand("report", "consolidated report.json and partition.svg in --out");
  rp->add_option("--from", c.from, "directory of existing artifacts to consolidate instead of computing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (!N_grid.empty()) c.N_grid = N_grid;
  if (!q.empty()) c.q = q;
  if (!cost.empty()) c.cost = cost;
  if (o_grid->count() > 0) c.grid = grid;
  if (o_bound->count() > 0) c.digit_norm_bound = bound;

  try {
    run(c, out);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hurwitz::cli
