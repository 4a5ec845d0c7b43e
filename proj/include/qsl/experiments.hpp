#pragma once

#include <cstdint>
#include <optional>

#include "qsl/csv.hpp"
#include "qsl/verify.hpp"

namespace qsl {

inline constexpr const char* kToolVersion = "0.1.0";

// Three-level bound-saturation sweep over the evolution window: the
// gap-optimized Hamiltonian built from the initial state against the fixed
// band coupling [[0, 0, omega], [0, mu*em, 0], [omega, 0, em]], both started
// from the ground basis state.  Columns: tau, bound_opt, ratio_opt,
// bound_h0h1, ratio_h0h1.  The tau range must stay within (0, pi/max-gap].
struct Fig1Params {
  double em = 1.0;
  double mu = 0.5;
  double omega = 1.0;
  double tau_min = 0.1;
  double tau_max = 3.0;
  int sweep = 30;
  int quad_grid = 129;
};
CsvTable run_fig1(const Fig1Params& params);

// Three-level amplitude damping at constant rate: populations
// (lambda0, lambda1, lambda2) with lambda1 swept over [0, 1 - lambda0] and
// lambda2 taking the remainder, or pinned to one explicit point when
// lambda1/lambda2 are set (they must then lie on the simplex).  Columns:
// lambda1, lambda2, ratio.
struct DampingSweepParams {
  double lambda0 = 0.0;
  double gamma = 1.0;
  double tau = 1.0;
  int sweep = 41;
  int quad_grid = 129;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
};
// Frame-resolved bound (the one the saturation theorem is stated for).
CsvTable run_fig2(const DampingSweepParams& params);
// Whole-state bound at alpha = initial purity (1 at the uniform floor).
CsvTable run_damping_tau_alpha(const DampingSweepParams& params);

// Ohmic zero-temperature damping of the uniform three-level state: one row
// per horizon tau, reporting the instantaneous rate at tau and the
// bound/actual ratio over [0, tau].  Columns: tau, gamma_tau, ratio.
struct NonmarkovParams {
  double cutoff = 1.0;
  double ohmicity = 4.0;
  double tau_min = 0.1;
  double tau_max = 2.0;
  int sweep = 39;
  int quad_grid = 129;
};
CsvTable run_nonmarkov(const NonmarkovParams& params);

// Three-level dephasing with a single 0-2 coherence, swept like the damping
// family.  The coherence defaults to sqrt(lambda0 * lambda2), the largest
// magnitude the spectrum admits; an explicit value must keep the state
// positive.  Columns: lambda1, lambda2, ratio.
struct DephasingSweepParams {
  double lambda0 = 0.0;
  double gamma = 1.0;
  double tau = 1.0;
  int sweep = 41;
  int quad_grid = 129;
  std::optional<double> lambda20;
};
CsvTable run_dephasing_tau_alpha(const DephasingSweepParams& params);

// Unitary variant of the fig1 sweep under the whole-state bound at
// alpha = 1 (both initial states are pure).  Columns: tau, ratio_opt,
// ratio_h0h1.  No window constraint: past pi/max-gap the bound is simply
// loose.
struct UnitarySweepParams {
  double em = 1.0;
  double mu = 0.5;
  double omega = 1.0;
  double tau_min = 0.1;
  double tau_max = 3.0;
  int sweep = 30;
  int quad_grid = 129;
};
CsvTable run_unitary_tau_alpha(const UnitarySweepParams& params);

// Central-difference speed oracle over the three dynamics families, scale-
// guarded relative error against the analytic speed.
CheckReport speed_oracle_check(std::uint64_t seed, int samples);

}  // namespace qsl
