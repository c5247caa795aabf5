// Command-line driver: solve, convergence tables, traveling waves.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "pps/config.hpp"
#include "pps/errors.hpp"
#include "pps/harness.hpp"
#include "pps/problems.hpp"

namespace {

constexpr int kExitSolver = 2;
constexpr int kExitConfig = 3;

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

pps::Problem resolve(const std::string& problem, const std::string& config) {
  if (!config.empty()) {
    const pps::ConfigProblem c = pps::load_config(config);
    pps::Problem p;
    p.id = c.system.name;
    p.system = c.system;
    p.T = c.T;
    return p;
  }
  if (problem.empty()) throw pps::ConfigError("one of --problem or --config is required");
  return pps::make_problem(problem);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-parabolic systems: Legendre G-NI with two-stage SDIRK"};
  app.require_subcommand(1);

  std::string problem, config, scheme, out, snapshots;
  int N = 32;
  double dt = 0.01;
  double T = std::numeric_limits<double>::quiet_NaN();

  auto* solve = app.add_subcommand("solve", "Integrate one problem and write the final state");
  solve->add_option("--problem", problem, "Registered problem (" + join(pps::problem_ids()) + ")");
  solve->add_option("--config", config, "Problem definition file");
  solve->add_option("--N", N, "Polynomial degree")->check(CLI::Range(2, 4096));
  solve->add_option("--dt", dt, "Time step")->check(CLI::PositiveNumber);
  solve->add_option("--T", T, "Final time (problem default when omitted)");
  solve->add_option("--scheme", scheme, "ssp22 or ssp23 (problem default when omitted)");
  solve->add_option("--out", out, "Output directory; CSV to stdout when omitted");
  solve->add_option("--snapshots", snapshots, "Comma separated snapshot times");

  std::string Ns = "64", dts = "0.1,0.05,0.025", norm = "grid";
  auto* table = app.add_subcommand("table", "Convergence table against the exact solution");
  table->add_option("--problem", problem, "Registered problem")->required();
  table->add_option("--N", Ns, "Comma separated degrees");
  table->add_option("--dt", dts, "Comma separated steps or a rule such as h/2");
  table->add_option("--T", T, "Final time");
  table->add_option("--scheme", scheme, "ssp22 or ssp23");
  table->add_option("--norm", norm, "grid or quadrature")
      ->check(CLI::IsMember({"grid", "quadrature"}));
  table->add_option("--out", out, "Output directory (the table is also printed)");

  pps::TravelingOptions tw;
  std::string regime = "balanced";
  auto* tws = app.add_subcommand("tw", "Traveling wave reports");
  tws->add_option("--regime", regime, "balanced, diffusive or dispersive")
      ->check(CLI::IsMember({"balanced", "diffusive", "dispersive"}));
  tws->add_option("--ul", tw.ul, "Left state");
  tws->add_option("--ur", tw.ur, "Right state (balanced: derived when omitted)");
  tws->add_option("--alpha", tw.alpha, "eps / sqrt(delta)");
  tws->add_option("--orders", tw.orders, "Expansion orders")->check(CLI::Range(0, 2));
  tws->add_option("--out", tw.out_dir, "Output directory")->default_val("tw");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      const pps::Problem p = resolve(problem, config);
      const pps::SdirkScheme s =
          pps::SdirkScheme::from_id(scheme.empty() ? p.default_scheme : scheme);
      const double Tf = std::isnan(T) ? p.T : T;
      pps::check_hypotheses(p.system, Tf);
      if (!snapshots.empty()) {
        pps::RiemannOptions ro;
        ro.N = N;
        ro.dt = dt;
        ro.T = Tf;
        ro.scheme = s.id;
        ro.out_dir = out.empty() ? "." : out;
        for (const auto& v : pps::parse_dt_spec(snapshots).values) ro.snapshot_times.push_back(v);
        ro.snapshot_times.push_back(0.0);
        const pps::RiemannResult r = pps::run_riemann(p, ro);
        for (const auto& f : r.files) std::cout << f << '\n';
        std::cout << "max_amplitude " << r.max_amplitude << (r.bounded ? "" : " (unbounded)")
                  << '\n';
        return 0;
      }
      pps::SolverConfig cfg;
      cfg.dt = dt;
      cfg.T = Tf;
      const pps::SolveResult r = pps::solve(p.system, N, s, cfg);
      if (out.empty()) {
        std::cout << "x";
        for (int q = 0; q < r.U.rows(); ++q) std::cout << ",u" << q + 1;
        std::cout << '\n';
        for (Eigen::Index j = 0; j < r.x.size(); ++j) {
          std::cout << r.x(j);
          for (Eigen::Index q = 0; q < r.U.rows(); ++q) std::cout << ',' << r.U(q, j);
          std::cout << '\n';
        }
      } else {
        const std::string path =
            (std::filesystem::path(out) / (p.id + "_N" + std::to_string(N) + ".csv")).string();
        pps::write_profile_csv(path, r.x, r.U);
        std::cout << path << '\n';
      }
      if (p.exact) {
        const auto e = pps::error_norms(r.grid, r.U, p.exact(r.x, r.t), p.system.xL,
                                        p.system.xR);
        std::cerr << "t=" << r.t << " err_l2=" << e.l2 << " err_h1=" << e.h1
                  << " err_linf=" << e.linf << '\n';
      }
    } else if (table->parsed()) {
      const pps::Problem p = pps::make_problem(problem);
      const pps::SdirkScheme s =
          pps::SdirkScheme::from_id(scheme.empty() ? p.default_scheme : scheme);
      const pps::ConvergenceTable t =
          pps::run_convergence(p, pps::parse_int_list(Ns), pps::parse_dt_spec(dts), s,
                               std::isnan(T) ? p.T : T, pps::norm_from_string(norm));
      pps::write_convergence_csv(std::cout, t);
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        const std::string path =
            (std::filesystem::path(out) / (p.id + "_" + s.id + ".csv")).string();
        std::ofstream f(path);
        if (!f) throw pps::ConfigError("cannot write '" + path + "'");
        pps::write_convergence_csv(f, t);
      }
      for (const auto& r : t.rows)
        if (r.failed) return kExitSolver;
    } else if (tws->parsed()) {
      tw.regime = pps::regime_from_string(regime);
      for (const auto& f : pps::run_traveling(tw)) std::cout << f << '\n';
    }
  } catch (const pps::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pps::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
