#pragma once

#include <functional>
#include <string>
#include <vector>

#include "savopt/common.hpp"
#include "savopt/operators.hpp"
#include "savopt/sav.hpp"

namespace savopt {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measure = 0.0;  // residual / violation actually observed
  double bound = 0.0;    // the tolerance it was held to
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Relative residual of the discrete energy identity
///   r'^2 - r^2 + (1/dt)|dtheta|^2 + (L dtheta, dtheta) + (r' - r)^2 = 0
/// for one completed modified-SAV/SAV-GD step. energy_scale (typically
/// f(theta)+C) joins the denominator: once r has decayed many orders below
/// the true energy the theta-update underflows past the iterate's ulp and the
/// identity stops being representable at the collapsed r^2 scale.
double thm0_residual(const Vec& theta_prev, double r_prev, const Vec& theta_next, double r_next,
                     const LinearOperator& op, double dt, double energy_scale = 0.0);

/// G(theta', theta) = (1/dt) (dtheta, (I + dt L) dtheta), evaluated directly.
double g_direct(const Vec& theta_prev, const Vec& theta_next, const LinearOperator& op, double dt);

using ApplyFn = std::function<Vec(const Vec&)>;

/// min over seeded v of (A v, v) / |v|^2; pass when >= -1e-12.
CheckResult check_nonnegativity(const std::string& name, const ApplyFn& apply, Eigen::Index dim,
                                std::uint64_t seed, int trials = 100);
/// max |((A u, v) - (u, A v))| / (|u| |v|) over seeded pairs.
CheckResult check_self_adjoint(const std::string& name, const ApplyFn& apply, Eigen::Index dim,
                               std::uint64_t seed, int trials = 100);
/// max_inf |(I + dt L) solve(b) - b| / (1 + |b|_inf) over seeded b and dt.
CheckResult check_solve_residual(const std::string& name, const LinearOperator& op,
                                 std::uint64_t seed, int trials = 20);
/// solve(apply_shift(v)) recovers v to 1e-10 relative.
CheckResult check_round_trip(const std::string& name, const LinearOperator& op, std::uint64_t seed,
                             int trials = 20);

/// Executes the module invariants for the requested scope
/// ("operators", "sav", "problems" or "all").
VerifyReport verify_suite(const std::string& scope);

}  // namespace savopt
