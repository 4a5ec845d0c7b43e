#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/matrix.hpp"
#include "qsl/stategeom.hpp"

namespace qsl {

// One bound evaluation.  bound <= actual_tau (up to quadrature error) for
// every valid trajectory; ratio = bound / actual_tau.  distance is the
// endpoint separation used in the numerator (summed over pairs for the
// frame-resolved bounds) and mean_speed the time-averaged speed in the
// denominator, so bound = distance / mean_speed.  converged reports that the
// last grid doubling moved the bound by less than 1e-6 relative; grid_points
// and refinements describe the final grid.
struct QslReport {
  double bound = 0.0;
  double actual_tau = 0.0;
  double ratio = 0.0;
  double distance = 0.0;
  double mean_speed = 0.0;
  int grid_points = 0;
  int refinements = 0;
  bool converged = false;
};

// Target spectrum for the geodesic Hamiltonian.  Energies must be finite and
// pairwise distinct; a repeated energy freezes the corresponding pair and the
// construction loses nothing by excluding it.
class EnergySpec {
public:
  explicit EnergySpec(std::vector<double> energies);

  int dim() const { return static_cast<int>(energies_.size()); }
  const std::vector<double>& energies() const { return energies_; }
  double max_gap() const;

private:
  std::vector<double> energies_;
};

// Instantaneous speed of the normalized image F-bar_alpha(rho_t):
//   sqrt( Tr rhodot^2 / |F|^2 - (1 - (4/N)(alpha - 1/N)) (Tr rho rhodot)^2 / |F|^4 ).
// rhodot must be traceless.  A radicand below -1e-12 signals an inconsistent
// (rho, rhodot) pair and is rejected; small negatives clamp to zero.
double speed_alpha(const DensityMatrix& rho, const HermitianOperator& rhodot,
                   const AlphaValue& alpha);

// Whole-state bound: endpoint distance over the mean speed, the speed taken
// as path length / tau with the path summed from chord distances on a
// uniform grid of at least 65 points (grid is the starting point count).
// The grid doubles until the bound moves by less than 1e-6 relative, capped
// at 2^15 intervals.
QslReport tau_alpha(const Trajectory& traj, const AlphaValue& alpha,
                    int grid = 129);

// Frame-resolved bound: eigenframes from track_frame, one numerator and one
// path-length term per ordered pair of Fourier directions, alphas defaulting
// per default_alphas on the endpoint families.
QslReport tau_qsl(const Trajectory& traj, int grid = 129);
QslReport tau_qsl(const Trajectory& traj, const AlphaAssignment& alphas,
                  int grid = 129);

// sqrt(Tr H^2 rho^2 - Tr(H rho H rho)), clamped like speed_alpha.  Reduces
// to the usual energy variance on pure states.
double energy_variance(const HermitianOperator& h, const DensityMatrix& state);

// Unitary specialization: per-pair speeds from the energy variance of the
// pair matrices, sqrt(2) Delta-E([rho_t]_ij) / sqrt(Tr [rho_0]^2_ij - 1/N),
// time-averaged by trapezoid doubling.  Pairs at the purity floor 1/N carry
// no motion and are skipped; if every pair sits at the floor the bound is
// undefined and an error is raised.
QslReport tau_qsl_closed(std::span<const HamiltonianSegment> schedule,
                         const DensityMatrix& rho0, double tau,
                         int grid = 129);
QslReport tau_qsl_closed(const HermitianOperator& h, const DensityMatrix& rho0,
                         double tau, int grid = 129);

// Geodesic generator for rho0: H = sum_i E_i Phi |i_F><i_F| Phi* with Phi the
// deterministic eigenframe of rho0 and |i_F> the Fourier columns.  Driving
// rho0 with it saturates the frame-resolved bound while
// tau * max|E_i - E_j| <= pi.
HermitianOperator saturating_hamiltonian(const DensityMatrix& rho0,
                                         const EnergySpec& spec);

// Reverse construction: a state whose bound the given Hamiltonian saturates,
//   rho0 = Psi U^F Lambda0 (U^F)* Psi*,
// with Psi the eigenframe of h and Lambda0 the supplied populations.
DensityMatrix saturating_initial_state(const HermitianOperator& h,
                                       std::span<const double> lambda0);

// Closed-form relabeling-maximized distance between orthogonal pure states,
// (2 pi / 3)(n - 1)(n^2 - 1).  Reference value only: for n >= 3 it exceeds
// the principal-branch arccos sum that permuted_distance computes, because
// per-pair angles past pi fold back.
double orthogonal_reference_distance(int n);

// Orthogonalization-time bound for a pure initial state: numerator from
// permuted_distance between the endpoint families (principal branch),
// denominator as in tau_qsl_closed.  The endpoint must be orthogonal to
// rho0 (Tr rho0 rho_tau <= 1e-6).
QslReport tau_qsl_orthogonal(std::span<const HamiltonianSegment> schedule,
                             const DensityMatrix& rho0, double tau,
                             int grid = 129);
QslReport tau_qsl_orthogonal(const HermitianOperator& h,
                             const DensityMatrix& rho0, double tau,
                             int grid = 129);

// (1/tau) int_0^tau f dt by composite trapezoid with interval doubling until
// the relative change drops below tolerance (cap 2^15 intervals).
double time_average(const std::function<double(double)>& f, double tau,
                    double tolerance = 1e-8);

}  // namespace qsl
