#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qsl/matrix.hpp"

namespace qsl {

enum class TrajectoryKind {
  unitary,
  depolarizing,
  amplitude_damping,
  dephasing,
  custom,
};

// A time-parameterized state on [0, horizon] with its analytic derivative
// and, when the family admits one, a continuous eigenframe.  state and
// derivative are pure functions; frame is empty when no analytic frame is
// declared (generic eigentracking applies then, see track_frame).
struct Trajectory {
  int dim = 0;
  double horizon = 0.0;
  TrajectoryKind kind = TrajectoryKind::custom;
  std::function<DensityMatrix(double)> state;
  std::function<HermitianOperator(double)> derivative;
  std::function<UnitaryMatrix(double)> frame;

  bool has_frame() const { return static_cast<bool>(frame); }
};

struct HamiltonianSegment {
  HermitianOperator h;
  double duration;
};

// state(t) = U_t rho0 U_t* with U_t the ordered product of the piecewise
// propagators; derivative(t) = -i[H_t, rho_t]; frame(t) = U_t Phi_0.
// Segment durations must cover the horizon.
Trajectory unitary_trajectory(std::vector<HamiltonianSegment> schedule,
                              const DensityMatrix& rho0, double tau);
Trajectory unitary_trajectory(const HermitianOperator& h,
                              const DensityMatrix& rho0, double tau);

// Probability weight for mixing toward the uniform state, with its time
// derivative.  Must start at 1 and never increase.
struct PSchedule {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static PSchedule exponential(double rate = 1.0);
};

// state(t) = p_t rho0 + (1 - p_t) I/N; derivative = pdot_t (rho0 - I/N);
// frame constant at rho0's eigenframe.  The schedule is screened on a
// 257-point grid: p in (0, 1], p(0) = 1, non-increasing.
Trajectory depolarizing_trajectory(const DensityMatrix& rho0,
                                   const PSchedule& p_schedule, double tau);

// Bath coupling model for the damping family: either a constant rate or the
// zero-temperature Ohmic-family rate with cutoff omega_c and exponent k.
class DecayModel {
public:
  static DecayModel constant(double gamma);
  static DecayModel ohmic_zero_temperature(double cutoff, double ohmicity);

  bool is_constant() const { return constant_; }
  double gamma() const;
  double cutoff() const;
  double ohmicity() const;

private:
  DecayModel(bool is_const, double a, double b);
  bool constant_;
  double gamma_;
  double cutoff_;
  double ohmicity_;
};

// Instantaneous decay rate.  The Ohmic-family closed form
//   omega_c (1 + omega_c^2 t^2)^(-k/2) Gamma(k) sin(k arctan(omega_c t))
// turns negative on the intervals where the bath feeds excitation back.
double decay_rate(const DecayModel& decay, double t);

// Accumulated rate int_0^t decay_rate dt'.  Constant models integrate in
// closed form; Ohmic models use adaptive quadrature to absolute 1e-10.
double gamma_integral(const DecayModel& decay, double t);

// All excited levels decay toward the ground level with the common factor
// e^(-Gamma_t): state(t) stays diagonal,
//   rho_t = (1 - e^(-Gamma_t) sum_{i>=1} lambda_i)|0><0|
//           + e^(-Gamma_t) sum_{i>=1} lambda_i |i><i|.
// lambdas must form a probability vector; frame is the computational basis.
Trajectory amplitude_damping_trajectory(std::span<const double> lambdas,
                                        const DecayModel& decay, double tau);

struct Coherence {
  int i;
  int j;  // i < j
  Complex value;
};

// Diagonal held fixed while every off-diagonal entry shrinks by e^(-gamma t).
// No frame is declared while coherences persist; once they are all zero the
// computational basis is declared.
Trajectory dephasing_trajectory(std::span<const double> diag,
                                std::span<const Coherence> coherences,
                                double gamma, double tau);

// Continuous eigenframes along the trajectory at points k*tau/(m-1).  A
// declared frame is sampled directly; otherwise each step eigendecomposes
// state(t_k) and matches columns to the previous frame by greedy maximal
// overlap, rotating phases so the matched overlaps are real positive.
// Throws when any matched overlap falls below 0.5 (grid too coarse).
std::vector<UnitaryMatrix> track_frame(const Trajectory& traj, int m);

}  // namespace qsl
