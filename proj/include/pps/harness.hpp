#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "pps/problems.hpp"
#include "pps/sdirk.hpp"
#include "pps/spectral_grid.hpp"
#include "pps/system.hpp"
#include "pps/traveling_waves.hpp"

namespace pps {

/// Quadrature: LGL quadrature scaled by (xR - xL)/2.
/// Grid: uniform-weight nodal sum with h = (xR - xL)/N; this is the norm the
/// published convergence tables are reproduced with.
enum class NormKind { Quadrature, Grid };
NormKind norm_from_string(const std::string& s);

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;
  double linf = 0.0;
};

/// Errors of d x (N+1) nodal values on the physical domain [xL, xR]. H1 adds
/// the same norm of the chain-rule scaled D1 derivative.
ErrorNorms error_norms(const Grid& g, const Mat& numeric, const Mat& exact,
                       double xL, double xR, NormKind kind = NormKind::Quadrature);

/// Semidiscrete ODE of a homogenized system on the grid.
SemidiscreteOde make_ode(const Grid& g, const HomogenizedSystem& hs);

struct SolveResult {
  Grid grid;
  Vec x;           // physical nodes
  Mat U;           // d x (N+1) total solution at t
  double t = 0.0;
  int steps = 0;
  long fp_iters = 0;
  double runtime_s = 0.0;
};

/// Observer receives the total nodal solution; returning false stops.
using SolutionObserver = std::function<bool(double t, const Mat& U)>;

SolveResult solve(const SystemDef& sys, int N, const SdirkScheme& scheme,
                  const SolverConfig& cfg, const SolutionObserver& obs = {});

struct ErrorReport {
  std::string problem;
  int N = 0;
  double dt = 0.0;
  std::string scheme;
  double T = 0.0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double err_linf = 0.0;
  double runtime_s = 0.0;
  long fp_iters = 0;
  bool failed = false;
  std::string error;
};

struct ConvergenceTable {
  std::vector<ErrorReport> rows;
  std::vector<double> order_l2;  // NaN where undefined
};

/// Time steps either as an explicit list or tied to h = 2/N by a factor.
struct DtSpec {
  std::vector<double> values;
  double h_factor = 0.0;
  std::vector<double> for_N(int N) const;
};

/// "0.1,0.05", "h/2", "0.5h" or "0.5*h".
DtSpec parse_dt_spec(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Order between consecutive rows differing in exactly one of {N, dt}, or in
/// both when dt is tied to h (then the order is with respect to h).
std::vector<double> observed_orders(const std::vector<ErrorReport>& rows);

/// log(e0/e1)/log(r0/r1) for a refinement parameter r.
double observed_order(double e0, double e1, double r0, double r1);

/// Worker count from PPS_WORKERS, defaulting to the hardware concurrency.
int worker_count();

ErrorReport run_case(const Problem& p, int N, double dt,
                     const SdirkScheme& scheme, double T,
                     NormKind norm = NormKind::Quadrature,
                     const SolverConfig& base = {});

/// Rows are solved concurrently and collected in (N, dt) order.
ConvergenceTable run_convergence(const Problem& p, const std::vector<int>& Ns,
                                 const DtSpec& dts, const SdirkScheme& scheme,
                                 double T, NormKind norm = NormKind::Quadrature,
                                 int workers = 0);

void write_convergence_csv(std::ostream& os, const ConvergenceTable& t);

struct Snapshot {
  double t = 0.0;
  Vec x;
  Mat U;
};

struct RiemannOptions {
  int N = 128;
  double dt = 0.025;
  double T = 50.0;
  std::vector<double> snapshot_times;
  std::string scheme = "ssp23";
  SolverConfig solver;
  std::string out_dir;          // empty: no files
  double bound_factor = 10.0;
};

struct RiemannResult {
  std::vector<Snapshot> snapshots;
  double initial_amplitude = 0.0;
  double max_amplitude = 0.0;
  bool bounded = true;
  std::vector<std::string> files;
};

/// Runs a Riemann problem, writing one CSV (x,u1,u2) per snapshot. On
/// failure the last healthy state is written before the error propagates.
RiemannResult run_riemann(const Problem& p, const RiemannOptions& opt);

/// First x, scanning left to right, where u drops below `level` (linear
/// interpolation): the leading edge of the state entering from the left.
/// NaN if u never drops below it.
double front_position(const Vec& x, const Vec& u, double level);

struct TravelingOptions {
  Regime regime = Regime::Balanced;
  double ul = 1.0;
  double ur = std::numeric_limits<double>::quiet_NaN();
  double alpha = 0.1;
  int orders = 2;
  std::string out_dir;
};

/// Writes the CSV reports of one regime and returns the file paths.
std::vector<std::string> run_traveling(const TravelingOptions& opt);

void write_profile_csv(const std::string& path, const Vec& x, const Mat& U);
/// Gnuplot script plotting columns 2.. of `data` against column 1.
void write_plot_script(const std::string& path, const std::string& data,
                       const std::vector<std::string>& labels,
                       const std::string& title);

}  // namespace pps
