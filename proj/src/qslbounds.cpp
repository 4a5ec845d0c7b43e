#include "qsl/qslbounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace qsl {

namespace {

constexpr int kMaxIntervals = 1 << 15;
constexpr double kBoundRelTol = 1e-6;
constexpr double kQuadratureRelTol = 1e-8;
constexpr double kPurityFloorMargin = 1e-12;
constexpr double kRadicandFloor = -1e-12;
// Angular separations below this are indistinguishable from roundoff in the
// distance evaluation; endpoints this close are reported as no motion.
constexpr double kDistanceFloor = 1e-6;

void require_grid(int grid) {
  if (grid < 65)
    throw std::invalid_argument("grid must start with at least 65 points");
}

void require_runnable(const Trajectory& traj, const char* what) {
  if (!traj.state)
    throw std::invalid_argument(std::string(what) +
                                ": trajectory has no state function");
  if (!(traj.horizon > 0.0))
    throw std::invalid_argument(std::string(what) +
                                ": trajectory horizon must be positive");
}

bool stable(double next, double prev, double tol) {
  return std::abs(next - prev) <= tol * std::max(std::abs(next), 1e-12);
}

struct PairIndex {
  int i;
  int j;
};

std::vector<PairIndex> ordered_pairs(int n) {
  std::vector<PairIndex> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) pairs.push_back(PairIndex{i, j});
  return pairs;
}

const HermitianOperator& hamiltonian_at(
    std::span<const HamiltonianSegment> schedule, double t) {
  double start = 0.0;
  for (size_t s = 0; s + 1 < schedule.size(); ++s) {
    start += schedule[s].duration;
    if (t < start) return schedule[s].h;
  }
  return schedule.back().h;
}

// Per-pair time averages of the energy variance, accumulated with a shared
// trapezoid grid that doubles until every pair integral is stable.
struct PairSpeedDenominator {
  double total = 0.0;  // sum of sqrt(2)/sqrt(purity - 1/n) * <DeltaE>
  int grid_points = 0;
  int refinements = 0;
  bool converged = false;
};

PairSpeedDenominator pair_speed_denominator(
    const Trajectory& traj, std::span<const HamiltonianSegment> schedule,
    const std::vector<PairIndex>& active, const std::vector<double>& inv_norm,
    int grid) {
  const double tau = traj.horizon;
  const size_t m = active.size();
  std::vector<double> samples(m);
  const auto sample_all = [&](double t, std::vector<double>& out) {
    const ProjectiveFamily fam(traj.state(t), traj.frame(t));
    const HermitianOperator& h = hamiltonian_at(schedule, t);
    for (size_t a = 0; a < m; ++a)
      out[a] = energy_variance(h, fam.pair(active[a].i, active[a].j));
  };

  int intervals = grid - 1;
  double h = tau / intervals;
  std::vector<double> sums(m, 0.0);
  std::vector<double> integrals(m, 0.0);
  sample_all(0.0, samples);
  for (size_t a = 0; a < m; ++a) sums[a] = 0.5 * samples[a];
  sample_all(tau, samples);
  for (size_t a = 0; a < m; ++a) sums[a] += 0.5 * samples[a];
  for (int k = 1; k < intervals; ++k) {
    sample_all(k * h, samples);
    for (size_t a = 0; a < m; ++a) sums[a] += samples[a];
  }
  for (size_t a = 0; a < m; ++a) integrals[a] = sums[a] * h;

  PairSpeedDenominator result;
  while (intervals < kMaxIntervals) {
    for (int k = 0; k < intervals; ++k) {
      sample_all((k + 0.5) * h, samples);
      for (size_t a = 0; a < m; ++a) sums[a] += samples[a];
    }
    intervals *= 2;
    h *= 0.5;
    ++result.refinements;
    bool all_stable = true;
    for (size_t a = 0; a < m; ++a) {
      const double next = sums[a] * h;
      if (!stable(next, integrals[a], kQuadratureRelTol)) all_stable = false;
      integrals[a] = next;
    }
    if (all_stable) {
      result.converged = true;
      break;
    }
  }
  for (size_t a = 0; a < m; ++a)
    result.total += inv_norm[a] * (integrals[a] / tau);
  result.grid_points = intervals + 1;
  return result;
}

// Shared epilogue: turn a numerator and a denominator quadrature into a
// report, handling the no-motion case.
QslReport assemble_pair_report(double numerator, const char* what,
                               const Trajectory& traj,
                               const PairSpeedDenominator& denom) {
  QslReport report;
  report.actual_tau = traj.horizon;
  report.distance = numerator;
  report.mean_speed = denom.total;
  report.grid_points = denom.grid_points;
  report.refinements = denom.refinements;
  report.converged = denom.converged;
  if (denom.total <= 1e-14) {
    if (numerator > kDistanceFloor)
      throw std::runtime_error(
          std::string(what) +
          ": endpoints are separated but the pair speeds vanish; the "
          "trajectory is inconsistent");
    report.distance = 0.0;
    report.bound = 0.0;
    report.ratio = 0.0;
    report.converged = true;
    return report;
  }
  report.bound = numerator / denom.total;
  report.ratio = report.bound / traj.horizon;
  return report;
}

}  // namespace

EnergySpec::EnergySpec(std::vector<double> energies)
    : energies_(std::move(energies)) {
  const int n = static_cast<int>(energies_.size());
  if (n < 2)
    throw std::invalid_argument("EnergySpec: need at least two energies");
  double scale = 0.0;
  for (double e : energies_) {
    if (!std::isfinite(e))
      throw std::invalid_argument("EnergySpec: energies must be finite");
    scale = std::max(scale, std::abs(e));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(energies_[i] - energies_[j]) <= 1e-12 * (1.0 + scale))
        throw std::invalid_argument(
            "EnergySpec: energies must be pairwise distinct");
}

double EnergySpec::max_gap() const {
  const auto [lo, hi] = std::minmax_element(energies_.begin(), energies_.end());
  return *hi - *lo;
}

double speed_alpha(const DensityMatrix& rho, const HermitianOperator& rhodot,
                   const AlphaValue& alpha) {
  const int n = rho.dim();
  if (rhodot.dim() != n)
    throw std::invalid_argument("speed_alpha: dimension mismatch");
  if (alpha.dim() != n)
    throw std::invalid_argument("speed_alpha: alpha dimension mismatch");
  if (std::abs(rhodot.matrix().trace()) > 1e-9)
    throw std::invalid_argument("speed_alpha: derivative must be traceless");

  const double t2 = hs_inner(rhodot, rhodot);
  const double purity = rho.purity();
  const double a = alpha.value();
  const double f2 = purity - 1.0 / n + (a - purity) * (a - purity) / n;
  const double cross = hs_inner(rho.hermitian(), rhodot);
  const double coeff = 1.0 - (4.0 / n) * (a - 1.0 / n);
  const double radicand = t2 / f2 - coeff * cross * cross / (f2 * f2);
  if (radicand < kRadicandFloor)
    throw std::invalid_argument(
        "speed_alpha: negative radicand; the state and derivative are "
        "inconsistent");
  return std::sqrt(std::max(radicand, 0.0));
}

double energy_variance(const HermitianOperator& h, const DensityMatrix& state) {
  if (h.dim() != state.dim())
    throw std::invalid_argument("energy_variance: dimension mismatch");
  const ComplexMatrix x = h.matrix() * state.matrix();
  const double frob = x.frobenius();
  const double radicand = frob * frob - (x * x).trace().real();
  if (radicand < kRadicandFloor)
    throw std::invalid_argument("energy_variance: negative radicand");
  return std::sqrt(std::max(radicand, 0.0));
}

QslReport tau_alpha(const Trajectory& traj, const AlphaValue& alpha,
                    int grid) {
  require_grid(grid);
  require_runnable(traj, "tau_alpha");
  if (alpha.dim() != traj.dim)
    throw std::invalid_argument("tau_alpha: alpha dimension mismatch");
  const double tau = traj.horizon;
  const double dist = distance_alpha(traj.state(0.0), traj.state(tau), alpha);

  const auto path_length = [&](int intervals) {
    double len = 0.0;
    DensityMatrix prev = traj.state(0.0);
    for (int k = 1; k <= intervals; ++k) {
      DensityMatrix cur = traj.state(tau * k / intervals);
      len += distance_alpha(prev, cur, alpha);
      prev = std::move(cur);
    }
    return len;
  };

  QslReport report;
  report.actual_tau = tau;
  report.distance = dist;

  if (dist <= kDistanceFloor) {
    report.distance = 0.0;
    report.grid_points = grid;
    report.converged = true;
    return report;
  }

  int intervals = grid - 1;
  double path = path_length(intervals);
  if (path <= 1e-14)
    throw std::runtime_error(
        "tau_alpha: endpoints are separated but the sampled path length "
        "vanishes; the trajectory is inconsistent");

  double bound = tau * dist / path;
  while (intervals < kMaxIntervals) {
    intervals *= 2;
    path = path_length(intervals);
    const double next = tau * dist / path;
    ++report.refinements;
    const bool done = stable(next, bound, kBoundRelTol);
    bound = next;
    if (done) {
      report.converged = true;
      break;
    }
  }
  report.bound = bound;
  report.ratio = bound / tau;
  report.mean_speed = path / tau;
  report.grid_points = intervals + 1;
  return report;
}

static QslReport tau_qsl_impl(const Trajectory& traj,
                              const AlphaAssignment* user_alphas, int grid) {
  require_grid(grid);
  require_runnable(traj, "tau_qsl");
  const int n = traj.dim;
  if (user_alphas && user_alphas->dim() != n)
    throw std::invalid_argument("tau_qsl: alpha table dimension mismatch");
  const double tau = traj.horizon;
  const auto pairs = ordered_pairs(n);

  // One evaluation on a fixed grid: numerator between the endpoint families,
  // path length from chord steps.  Frames are re-tracked per refinement so
  // the chain always matches the grid it walks.
  const auto evaluate = [&](int points) {
    const auto frames = track_frame(traj, points);
    const ProjectiveFamily first(traj.state(0.0), frames.front());
    const ProjectiveFamily last(traj.state(tau), frames.back());
    const AlphaAssignment alphas =
        user_alphas ? *user_alphas : default_alphas(first, last);
    double num = 0.0;
    for (const auto& [i, j] : pairs)
      num += distance_alpha(first.pair(i, j), last.pair(i, j),
                            AlphaValue(alphas.at(i, j), n));
    double path = 0.0;
    ProjectiveFamily prev = first;
    for (int k = 1; k < points; ++k) {
      ProjectiveFamily cur(traj.state(tau * k / (points - 1)), frames[k]);
      for (const auto& [i, j] : pairs)
        path += distance_alpha(prev.pair(i, j), cur.pair(i, j),
                               AlphaValue(alphas.at(i, j), n));
      prev = std::move(cur);
    }
    return std::pair<double, double>{num, path};
  };

  QslReport report;
  report.actual_tau = tau;

  int intervals = grid - 1;
  auto [num, path] = evaluate(intervals + 1);
  if (num <= kDistanceFloor) {
    report.distance = 0.0;
    report.grid_points = intervals + 1;
    report.converged = true;
    return report;
  }
  if (path <= 1e-14)
    throw std::runtime_error(
        "tau_qsl: endpoints are separated but the sampled path length "
        "vanishes; the trajectory is inconsistent");

  double bound = tau * num / path;
  while (intervals < kMaxIntervals) {
    intervals *= 2;
    std::tie(num, path) = evaluate(intervals + 1);
    const double next = tau * num / path;
    ++report.refinements;
    const bool done = stable(next, bound, kBoundRelTol);
    bound = next;
    if (done) {
      report.converged = true;
      break;
    }
  }
  report.bound = bound;
  report.ratio = bound / tau;
  report.distance = num;
  report.mean_speed = path / tau;
  report.grid_points = intervals + 1;
  return report;
}

QslReport tau_qsl(const Trajectory& traj, int grid) {
  return tau_qsl_impl(traj, nullptr, grid);
}

QslReport tau_qsl(const Trajectory& traj, const AlphaAssignment& alphas,
                  int grid) {
  return tau_qsl_impl(traj, &alphas, grid);
}

QslReport tau_qsl_closed(std::span<const HamiltonianSegment> schedule,
                         const DensityMatrix& rho0, double tau, int grid) {
  require_grid(grid);
  const Trajectory traj = unitary_trajectory(
      std::vector<HamiltonianSegment>(schedule.begin(), schedule.end()), rho0,
      tau);
  const int n = rho0.dim();
  const ProjectiveFamily fam0(rho0, traj.frame(0.0));

  std::vector<PairIndex> active;
  std::vector<double> inv_norm;
  for (const auto& [i, j] : ordered_pairs(n)) {
    const double purity = fam0.pair_purity(i, j);
    if (purity <= 1.0 / n + kPurityFloorMargin) continue;
    active.push_back(PairIndex{i, j});
    inv_norm.push_back(std::sqrt(2.0 / (purity - 1.0 / n)));
  }
  if (active.empty())
    throw std::runtime_error(
        "tau_qsl_closed: every pair purity sits at the uniform floor 1/N, "
        "so no pair carries motion and the bound is undefined");

  const ProjectiveFamily famt(traj.state(tau), traj.frame(tau));
  double numerator = 0.0;
  for (size_t a = 0; a < active.size(); ++a) {
    const auto [i, j] = active[a];
    numerator += distance_alpha(fam0.pair(i, j), famt.pair(i, j),
                                AlphaValue(fam0.pair_purity(i, j), n));
  }
  if (numerator <= kDistanceFloor) {
    QslReport report;
    report.actual_tau = tau;
    report.grid_points = grid;
    report.converged = true;
    return report;
  }

  const PairSpeedDenominator denom =
      pair_speed_denominator(traj, schedule, active, inv_norm, grid);
  return assemble_pair_report(numerator, "tau_qsl_closed", traj, denom);
}

QslReport tau_qsl_closed(const HermitianOperator& h, const DensityMatrix& rho0,
                         double tau, int grid) {
  const std::vector<HamiltonianSegment> schedule{HamiltonianSegment{h, tau}};
  return tau_qsl_closed(schedule, rho0, tau, grid);
}

HermitianOperator saturating_hamiltonian(const DensityMatrix& rho0,
                                         const EnergySpec& spec) {
  if (spec.dim() != rho0.dim())
    throw std::invalid_argument(
        "saturating_hamiltonian: energy count must match the dimension");
  const ComplexMatrix phi = eig_hermitian(rho0.hermitian()).vectors.matrix();
  const ComplexMatrix f = fourier_unitary(rho0.dim()).matrix();
  const ComplexMatrix lam = ComplexMatrix::diagonal(spec.energies());
  const ComplexMatrix core = f * (lam * f.adjoint());
  return HermitianOperator(phi * (core * phi.adjoint()));
}

DensityMatrix saturating_initial_state(const HermitianOperator& h,
                                       std::span<const double> lambda0) {
  const int n = h.dim();
  if (static_cast<int>(lambda0.size()) != n)
    throw std::invalid_argument(
        "saturating_initial_state: population count must match the dimension");
  double sum = 0.0;
  std::vector<double> populations(lambda0.begin(), lambda0.end());
  for (double& v : populations) {
    if (!std::isfinite(v) || v < -1e-12)
      throw std::invalid_argument(
          "saturating_initial_state: populations must be non-negative");
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw std::invalid_argument(
        "saturating_initial_state: populations must sum to one");

  const ComplexMatrix psi = eig_hermitian(h).vectors.matrix();
  const ComplexMatrix f = fourier_unitary(n).matrix();
  const ComplexMatrix lam = ComplexMatrix::diagonal(populations);
  const ComplexMatrix core = f * (lam * f.adjoint());
  return DensityMatrix(psi * (core * psi.adjoint()));
}

double orthogonal_reference_distance(int n) {
  if (n < 2)
    throw std::invalid_argument(
        "orthogonal_reference_distance: dimension must be at least 2");
  const double nd = n;
  return (2.0 * std::numbers::pi / 3.0) * (nd - 1.0) * (nd * nd - 1.0);
}

QslReport tau_qsl_orthogonal(std::span<const HamiltonianSegment> schedule,
                             const DensityMatrix& rho0, double tau, int grid) {
  require_grid(grid);
  if (rho0.purity() < 1.0 - 1e-8)
    throw std::invalid_argument(
        "tau_qsl_orthogonal: the initial state must be pure");
  const Trajectory traj = unitary_trajectory(
      std::vector<HamiltonianSegment>(schedule.begin(), schedule.end()), rho0,
      tau);
  const DensityMatrix rhot = traj.state(tau);
  const double overlap = hs_inner(rho0.hermitian(), rhot.hermitian());
  if (overlap > 1e-6)
    throw std::invalid_argument(
        "tau_qsl_orthogonal: endpoint overlap Tr rho0 rho_tau = " +
        std::to_string(overlap) + " exceeds 1e-6");

  const int n = rho0.dim();
  const ProjectiveFamily fam0(rho0, traj.frame(0.0));
  const ProjectiveFamily famt(rhot, traj.frame(tau));
  const AlphaAssignment alphas = default_alphas(fam0, famt);
  const PermutedDistance permuted = permuted_distance(fam0, famt, alphas);

  std::vector<PairIndex> active;
  std::vector<double> inv_norm;
  for (const auto& [i, j] : ordered_pairs(n)) {
    const double purity = fam0.pair_purity(i, j);
    if (purity <= 1.0 / n + kPurityFloorMargin) continue;
    active.push_back(PairIndex{i, j});
    inv_norm.push_back(std::sqrt(2.0 / (purity - 1.0 / n)));
  }
  if (active.empty())
    throw std::runtime_error(
        "tau_qsl_orthogonal: every pair purity sits at the uniform floor "
        "1/N, so no pair carries motion and the bound is undefined");

  const PairSpeedDenominator denom =
      pair_speed_denominator(traj, schedule, active, inv_norm, grid);
  return assemble_pair_report(permuted.radians, "tau_qsl_orthogonal", traj,
                              denom);
}

QslReport tau_qsl_orthogonal(const HermitianOperator& h,
                             const DensityMatrix& rho0, double tau, int grid) {
  const std::vector<HamiltonianSegment> schedule{HamiltonianSegment{h, tau}};
  return tau_qsl_orthogonal(schedule, rho0, tau, grid);
}

double time_average(const std::function<double(double)>& f, double tau,
                    double tolerance) {
  if (!f) throw std::invalid_argument("time_average: empty function");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("time_average: tau must be positive");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("time_average: tolerance must be positive");
  const auto sample = [&](double t) {
    const double v = f(t);
    if (!std::isfinite(v))
      throw std::runtime_error("time_average: non-finite sample at t = " +
                               std::to_string(t));
    return v;
  };

  int intervals = 64;
  double h = tau / intervals;
  double sum = 0.5 * (sample(0.0) + sample(tau));
  for (int k = 1; k < intervals; ++k) sum += sample(k * h);
  double integral = sum * h;
  while (intervals < kMaxIntervals) {
    double add = 0.0;
    for (int k = 0; k < intervals; ++k) add += sample((k + 0.5) * h);
    sum += add;
    intervals *= 2;
    h *= 0.5;
    const double next = sum * h;
    const bool done = stable(next, integral, tolerance);
    integral = next;
    if (done) break;
  }
  return integral / tau;
}

}  // namespace qsl
