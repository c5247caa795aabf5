#include "pps/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "pps/errors.hpp"
#include "pps/gni_assembly.hpp"

namespace pps {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  return f;
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

NormKind norm_from_string(const std::string& s) {
  if (s == "quadrature") return NormKind::Quadrature;
  if (s == "grid") return NormKind::Grid;
  throw ConfigError("unknown norm '" + s + "' (quadrature, grid)");
}

ErrorNorms error_norms(const Grid& g, const Mat& numeric, const Mat& exact,
                       double xL, double xR, NormKind kind) {
  if (numeric.rows() != exact.rows() || numeric.cols() != exact.cols() ||
      numeric.cols() != g.size())
    throw DomainError("error_norms: shape mismatch");
  const double L = xR - xL;
  const double s = 2.0 / L;
  const Mat e = numeric - exact;
  const Mat de = s * e * g.D1.transpose();
  Vec w;
  if (kind == NormKind::Quadrature)
    w = 0.5 * L * g.weights;
  else
    w = Vec::Constant(g.size(), L / g.N);
  ErrorNorms out;
  const double l2sq = (e.array().square().rowwise() * w.transpose().array()).sum();
  const double d1sq = (de.array().square().rowwise() * w.transpose().array()).sum();
  out.l2 = std::sqrt(l2sq);
  out.h1 = std::sqrt(l2sq + d1sq);
  out.linf = e.cwiseAbs().maxCoeff();
  return out;
}

SemidiscreteOde make_ode(const Grid& g, const HomogenizedSystem& hs) {
  const int d = hs.inner.d;
  const int n = g.N - 1;
  auto cache = std::make_shared<AssemblyCache>();
  const Mat zeros = Mat::Zero(d, g.size());
  if (hs.inner.constant_A) cache->K2A = assemble_K2(g, hs.inner.A, zeros);
  if (hs.inner.constant_B) cache->K2B = assemble_K2(g, hs.inner.B, zeros);
  SemidiscreteOde ode;
  ode.size = static_cast<Eigen::Index>(d) * n;
  ode.block_size = d == 2 ? n : 0;
  ode.constant_mass = hs.inner.constant_A;
  ode.evaluate = [g, hs, cache, d](const Vec& U, double t) {
    const State s{t, unflatten(U, d)};
    return semidiscrete_rhs(assemble(g, hs, s, cache.get()), s);
  };
  return ode;
}

SolveResult solve(const SystemDef& sys, int N, const SdirkScheme& scheme,
                  const SolverConfig& cfg, const SolutionObserver& obs) {
  cfg.validate();
  if (N < 2) throw ConfigError("N must be at least 2");
  const auto start = std::chrono::steady_clock::now();
  const HomogenizedSystem hs = homogenize(sys);
  SolveResult r;
  r.grid = build_grid<double>(N);
  r.x = physical_nodes(r.grid, sys.xL, sys.xR);
  const int d = sys.d;
  const SemidiscreteOde ode = make_ode(r.grid, hs);
  const Vec U0 = flatten(initial_state(r.grid, hs));

  StepObserver step_obs;
  if (obs)
    step_obs = [&](double t, const Vec& U) {
      return obs(t, recover(hs, r.grid.nodes, unflatten(U, d), t));
    };
  if (obs && !obs(0.0, recover(hs, r.grid.nodes, unflatten(U0, d), 0.0))) {
    r.U = recover(hs, r.grid.nodes, unflatten(U0, d), 0.0);
    return r;
  }
  const IntegrationResult ir = integrate(scheme, ode, U0, 0.0, cfg, step_obs);
  r.t = ir.t;
  r.steps = ir.steps;
  r.fp_iters = ir.fp_iters;
  r.U = recover(hs, r.grid.nodes, unflatten(ir.U, d), ir.t);
  r.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<double> DtSpec::for_N(int N) const {
  if (h_factor > 0.0) return {h_factor * 2.0 / N};
  return values;
}

DtSpec parse_dt_spec(const std::string& text) {
  DtSpec spec;
  std::string t;
  for (char c : text)
    if (c != ' ') t.push_back(c);
  if (!t.empty() && t.find('h') != std::string::npos) {
    if (t == "h") {
      spec.h_factor = 1.0;
    } else if (t.rfind("h/", 0) == 0) {
      spec.h_factor = 1.0 / to_double(t.substr(2));
    } else if (t.back() == 'h') {
      std::string f = t.substr(0, t.size() - 1);
      if (!f.empty() && f.back() == '*') f.pop_back();
      spec.h_factor = to_double(f);
    } else {
      throw ConfigError("bad dt rule '" + text + "' (use e.g. h/2 or 0.5h)");
    }
    if (!(spec.h_factor > 0.0) || !std::isfinite(spec.h_factor))
      throw ConfigError("dt rule factor must be positive and finite");
    return spec;
  }
  for (const auto& item : split(t, ',')) {
    const double v = to_double(item);
    if (!(v > 0.0)) throw ConfigError("dt values must be positive");
    spec.values.push_back(v);
  }
  if (spec.values.empty()) throw ConfigError("empty dt list");
  return spec;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const double v = to_double(item);
    if (v != std::floor(v) || v < 1) throw ConfigError("not a positive integer: '" + item + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

double observed_order(double e0, double e1, double r0, double r1) {
  if (!(e0 > 0.0) || !(e1 > 0.0) || r0 == r1) return kNaN;
  return std::log(e0 / e1) / std::log(r0 / r1);
}

std::vector<double> observed_orders(const std::vector<ErrorReport>& rows) {
  std::vector<double> out(rows.size(), kNaN);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (a.failed || b.failed) continue;
    const bool sameN = a.N == b.N;
    const bool samedt = a.dt == b.dt;
    if (sameN && !samedt) {
      out[i] = observed_order(a.err_l2, b.err_l2, a.dt, b.dt);
    } else if (!sameN && samedt) {
      out[i] = observed_order(a.err_l2, b.err_l2, 1.0 / a.N, 1.0 / b.N);
    } else if (!sameN && !samedt) {
      const double tied = (b.dt / a.dt) / (static_cast<double>(a.N) / b.N);
      if (std::abs(tied - 1.0) < 1e-9)
        out[i] = observed_order(a.err_l2, b.err_l2, 1.0 / a.N, 1.0 / b.N);
    }
  }
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("PPS_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ErrorReport run_case(const Problem& p, int N, double dt,
                     const SdirkScheme& scheme, double T, NormKind norm,
                     const SolverConfig& base) {
  ErrorReport r;
  r.problem = p.id;
  r.N = N;
  r.dt = dt;
  r.scheme = scheme.id;
  r.T = T;
  try {
    if (!p.exact) throw ConfigError("problem '" + p.id + "' has no exact solution");
    SolverConfig cfg = base;
    cfg.dt = dt;
    cfg.T = T;
    const SolveResult s = solve(p.system, N, scheme, cfg);
    const Mat ex = p.exact(s.x, s.t);
    const ErrorNorms e = error_norms(s.grid, s.U, ex, p.system.xL, p.system.xR, norm);
    r.err_l2 = e.l2;
    r.err_h1 = e.h1;
    r.err_linf = e.linf;
    r.runtime_s = s.runtime_s;
    r.fp_iters = s.fp_iters;
  } catch (const std::exception& ex) {
    r.failed = true;
    r.error = ex.what();
    r.err_l2 = r.err_h1 = r.err_linf = kNaN;
    warn("N=" + std::to_string(N) + " dt=" + fmt(dt) + " failed: " + ex.what());
  }
  return r;
}

ConvergenceTable run_convergence(const Problem& p, const std::vector<int>& Ns,
                                 const DtSpec& dts, const SdirkScheme& scheme,
                                 double T, NormKind norm, int workers) {
  std::vector<std::pair<int, double>> cases;
  for (int N : Ns)
    for (double dt : dts.for_N(N)) cases.emplace_back(N, dt);
  ConvergenceTable table;
  table.rows.resize(cases.size());
  if (workers <= 0) workers = worker_count();
  workers = std::min<int>(workers, static_cast<int>(cases.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < cases.size();)
      table.rows[i] = run_case(p, cases[i].first, cases[i].second, scheme, T, norm);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  table.order_l2 = observed_orders(table.rows);
  return table;
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "problem,N,dt,scheme,T,err_l2,err_h1,err_linf,order_l2,runtime_s,fp_iters\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const double order = i < t.order_l2.size() ? t.order_l2[i] : kNaN;
    os << r.problem << ',' << r.N << ',' << fmt(r.dt) << ',' << r.scheme << ','
       << fmt(r.T) << ',' << fmt(r.err_l2) << ',' << fmt(r.err_h1) << ','
       << fmt(r.err_linf) << ',' << fmt(order) << ',' << fmt(r.runtime_s) << ','
       << r.fp_iters << '\n';
  }
}

void write_profile_csv(const std::string& path, const Vec& x, const Mat& U) {
  auto f = open_out(path);
  f << "x";
  for (Eigen::Index p = 0; p < U.rows(); ++p) f << ",u" << p + 1;
  f << '\n';
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    f << fmt(x(j));
    for (Eigen::Index p = 0; p < U.rows(); ++p) f << ',' << fmt(U(p, j));
    f << '\n';
  }
}

void write_plot_script(const std::string& path, const std::string& data,
                       const std::vector<std::string>& labels,
                       const std::string& title) {
  auto f = open_out(path);
  f << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set title '" << title << "'\n"
    << "plot ";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) f << ", \\\n     ";
    f << "'" << data << "' using 1:" << i + 2 << " with lines title '" << labels[i] << "'";
  }
  f << '\n';
}

double front_position(const Vec& x, const Vec& u, double level) {
  for (Eigen::Index j = 1; j < x.size(); ++j) {
    const double a = u(j - 1) - level, b = u(j) - level;
    if (a >= 0.0 && b < 0.0) return x(j - 1) + (x(j) - x(j - 1)) * a / (a - b);
  }
  return kNaN;
}

RiemannResult run_riemann(const Problem& p, const RiemannOptions& opt) {
  SolverConfig cfg = opt.solver;
  cfg.dt = opt.dt;
  cfg.T = opt.T;
  const SdirkScheme scheme = SdirkScheme::from_id(opt.scheme);
  std::vector<double> times = opt.snapshot_times;
  if (times.empty()) times = {0.0, opt.T};
  std::sort(times.begin(), times.end());

  RiemannResult res;
  const Grid g = build_grid<double>(opt.N);
  const Vec x = physical_nodes(g, p.system.xL, p.system.xR);
  std::size_t next = 0;
  Snapshot last;

  auto save = [&](const Snapshot& s, const std::string& tag) {
    if (opt.out_dir.empty()) return;
    const std::string path = join_path(opt.out_dir, p.id + "_" + tag + ".csv");
    write_profile_csv(path, s.x, s.U);
    res.files.push_back(path);
  };
  auto observer = [&](double t, const Mat& U) {
    if (!U.allFinite()) throw SolverError("non-finite solution at t = " + fmt(t));
    const double amp = U.cwiseAbs().maxCoeff();
    if (t == 0.0) res.initial_amplitude = amp;
    res.max_amplitude = std::max(res.max_amplitude, amp);
    if (amp > opt.bound_factor * res.initial_amplitude) res.bounded = false;
    last = {t, x, U};
    while (next < times.size() && t >= times[next] - 0.5 * opt.dt) {
      res.snapshots.push_back(last);
      save(last, "t" + fmt(times[next]));
      ++next;
    }
    return true;
  };
  try {
    solve(p.system, opt.N, scheme, cfg, observer);
  } catch (const std::exception&) {
    if (last.U.size()) save(last, "last_healthy");
    throw;
  }
  return res;
}

std::vector<std::string> run_traveling(const TravelingOptions& opt) {
  std::vector<std::string> files;
  const std::string dir = opt.out_dir.empty() ? "." : opt.out_dir;
  auto summary = open_out(join_path(dir, "summary.csv"));
  files.push_back(join_path(dir, "summary.csv"));
  summary << "key,value\n";
  summary << "regime," << to_string(opt.regime) << '\n';

  if (opt.regime == Regime::Balanced) {
    TravelingWaveProblem p;
    if (std::isnan(opt.ur)) {
      p = balanced_problem(opt.ul, opt.alpha);
    } else {
      p = {opt.ul, opt.ur, Regime::Balanced, opt.alpha, 0.0};
    }
    const double lam = p.lambda();
    const EquilibriumReport eq = equilibria(p.u_minus, lam, p.alpha);
    summary << "u_minus," << fmt(p.u_minus) << "\nu_plus," << fmt(p.u_plus)
            << "\nlambda," << fmt(lam) << "\nalpha," << fmt(p.alpha) << '\n';
    const std::array<double, 3> us{eq.u0, eq.u1, eq.u2};
    for (int i = 0; i < 3; ++i)
      summary << "u" << i << "," << fmt(us[i]) << "\ntype_u" << i << ","
              << to_string(eq.types[i]) << '\n';
    const bool closed = explicit_profile_valid(p.u_minus, p.alpha, lam);
    summary << "closed_form_valid," << (closed ? 1 : 0) << '\n';
    ShootingResult sr;
    try {
      sr = shoot_connection(p);
    } catch (const Error& e) {
      sr.message = e.what();
    }
    summary << "connected," << (sr.connected ? 1 : 0) << "\nclosest_distance,"
            << fmt(sr.closest_distance) << "\nmessage,\"" << sr.message << "\"\n";
    const std::string path = join_path(dir, "profile.csv");
    auto f = open_out(path);
    f << "y,u,u_y,u_closed\n";
    for (const auto& pt : sr.trajectory)
      f << fmt(pt.y) << ',' << fmt(pt.u) << ',' << fmt(pt.v) << ','
        << fmt(closed ? explicit_profile(p.u_minus, p.alpha, lam, pt.y) : kNaN) << '\n';
    files.push_back(path);
    write_plot_script(join_path(dir, "profile.gp"), "profile.csv", {"u", "u_y", "u_closed"},
                      "balanced traveling wave");
    files.push_back(join_path(dir, "profile.gp"));
  } else if (opt.regime == Regime::Diffusive) {
    if (std::isnan(opt.ur)) throw ConfigError("--ur is required for the diffusive regime");
    const DiffusiveExpansion ex = expand_diffusive(opt.ul, opt.ur, opt.orders);
    summary << "lambda," << fmt(ex.lambda) << "\norders," << ex.orders << '\n';
    for (int k = 0; k <= ex.orders; ++k)
      summary << "residual_order" << k << "," << fmt(ex.residual[k]) << '\n';
    const std::string path = join_path(dir, "expansion.csv");
    auto f = open_out(path);
    f << "eta,u0,u1,u2\n";
    for (std::size_t i = 0; i < ex.eta.size(); ++i)
      f << fmt(ex.eta[i]) << ',' << fmt(ex.u0[i]) << ',' << fmt(ex.u1[i]) << ','
        << fmt(ex.u2[i]) << '\n';
    files.push_back(path);
    write_plot_script(join_path(dir, "expansion.gp"), "expansion.csv", {"u0", "u1", "u2"},
                      "diffusive expansion");
    files.push_back(join_path(dir, "expansion.gp"));
  } else {
    if (std::isnan(opt.ur)) throw ConfigError("--ur is required for the dispersive regime");
    const DispersiveCertificate c = classify_dispersive(opt.ul, opt.ur);
    summary << "lambda," << fmt(c.lambda) << "\nsaddles," << c.saddles
            << "\nnonexistence," << (c.nonexistence ? 1 : 0) << '\n';
    const std::string path = join_path(dir, "certificate.csv");
    auto f = open_out(path);
    f << "state,value,type\n";
    const char* names[3] = {"u_minus", "u_plus", "u_third"};
    for (int i = 0; i < 3; ++i)
      f << names[i] << ',' << fmt(c.states[i]) << ',' << to_string(c.types[i]) << '\n';
    files.push_back(path);
  }
  return files;
}

}  // namespace pps
