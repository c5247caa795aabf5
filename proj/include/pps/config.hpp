#pragma once

#include <istream>
#include <string>

#include "pps/system.hpp"

namespace pps {

/// User-defined problem read from a key = value file.
///
///   # comment
///   name      = burgers-bbm
///   dimension = 1
///   domain    = -1, 1
///   T         = 0.5
///   A[1,1]    = 0.01
///   B[1,1]    = 0.001
///   G[1]      = -u1^2/2
///   dG[1,1]   = -u1            (optional, finite differences otherwise)
///   gamma[1]  = 0              (may use u1..ud, x, t)
///   gL[1]     = 0              (may use t)
///   gR[1]     = 0
///   u0[1]     = sin(pi*x)      (may use x)
///
/// Indices are 1-based; missing entries are zero. Coefficients A, B, G, dG
/// may use u1..ud. A is flagged constant when none of its entries uses u.
struct ConfigProblem {
  SystemDef system;
  double T = 1.0;
};

ConfigProblem parse_config(std::istream& in);
ConfigProblem load_config(const std::string& path);

}  // namespace pps
