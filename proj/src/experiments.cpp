#include "qsl/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "qsl/qslbounds.hpp"
#include "qsl/rng.hpp"

namespace qsl {

namespace {

std::string num(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", v);
  return buffer;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive, got " + num(value));
  }
}

void require_sweep(int sweep) {
  if (sweep < 1) throw std::invalid_argument("sweep must have at least one point");
}

void require_quad_grid(int grid) {
  if (grid < 65) throw std::invalid_argument("quadrature grid must start with at least 65 points");
}

void require_tau_range(double tau_min, double tau_max) {
  require_positive(tau_min, "tau_min");
  if (tau_min > tau_max) {
    throw std::invalid_argument("tau range is empty: tau_min " + num(tau_min) +
                                " > tau_max " + num(tau_max));
  }
}

double grid_point(double lo, double hi, int k, int count) {
  if (count == 1) return lo;
  return lo + (hi - lo) * (double(k) / double(count - 1));
}

// Runs work(0..count-1) on a small thread pool.  Results must be written to
// preallocated slots so row order never depends on scheduling; the first
// exception wins and stops the remaining rows.
void for_each_row(int count, const std::function<void(int)>& work) {
  if (count <= 0) return;
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = std::min({count, int(hw == 0 ? 4 : hw), 8});
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto drain = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(size_t(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string convergence_comment(int unconverged, int total) {
  if (unconverged == 0) {
    return "convergence: all " + std::to_string(total) + " quadratures converged";
  }
  return "convergence: " + std::to_string(unconverged) + " of " +
         std::to_string(total) + " quadratures hit the refinement cap";
}

HermitianOperator band_hamiltonian(double em, double mu, double omega) {
  ComplexMatrix h(3);
  h.at(1, 1) = mu * em;
  h.at(2, 2) = em;
  h.at(0, 2) = omega;
  h.at(2, 0) = omega;
  return HermitianOperator(h);
}

// Population grid shared by the damping and dephasing sweeps: lambda1 walks
// [0, 1 - lambda0], lambda2 takes the remainder.  An explicit point replaces
// the sweep and must sit on the simplex.
std::vector<std::array<double, 2>> population_grid(double lambda0, int sweep,
                                                   std::optional<double> lambda1,
                                                   std::optional<double> lambda2) {
  if (lambda0 < 0.0 || lambda0 > 1.0) {
    throw std::invalid_argument("lambda0 must lie in [0, 1], got " + num(lambda0));
  }
  const double rest = 1.0 - lambda0;
  if (lambda1 || lambda2) {
    const double l1 = lambda1 ? *lambda1 : rest - *lambda2;
    const double l2 = lambda2 ? *lambda2 : rest - *lambda1;
    if (l1 < -1e-12 || l2 < -1e-12 || std::fabs(lambda0 + l1 + l2 - 1.0) > 1e-9) {
      throw std::invalid_argument("populations must lie on the simplex: lambda0 + lambda1 + lambda2 = " +
                                  num(lambda0 + l1 + l2) + " with lambda1 = " + num(l1) +
                                  ", lambda2 = " + num(l2));
    }
    return {{std::max(l1, 0.0), std::max(l2, 0.0)}};
  }
  require_sweep(sweep);
  std::vector<std::array<double, 2>> points;
  points.reserve(size_t(sweep));
  for (int k = 0; k < sweep; ++k) {
    const double l1 = grid_point(0.0, rest, k, sweep);
    points.push_back({l1, std::max(rest - l1, 0.0)});
  }
  return points;
}

double simplex_purity(double l0, double l1, double l2) {
  return l0 * l0 + l1 * l1 + l2 * l2;
}

// Whole-state alpha policy: the initial purity, replaced by 1 when the
// purity sits at the uniform floor where that alpha would be inadmissible.
double whole_state_alpha(double purity, int dim) {
  return purity <= 1.0 / double(dim) + 1e-12 ? 1.0 : purity;
}

CsvTable damping_sweep(const DampingSweepParams& params, bool whole_state) {
  require_positive(params.tau, "tau");
  require_quad_grid(params.quad_grid);
  const std::vector<std::array<double, 2>> points =
      population_grid(params.lambda0, params.sweep, params.lambda1, params.lambda2);
  const DecayModel decay = DecayModel::constant(params.gamma);

  const int count = int(points.size());
  std::vector<std::vector<double>> rows(static_cast<size_t>(count));
  std::vector<int> missed(size_t(count), 0);
  for_each_row(count, [&](int k) {
    const std::vector<double> lam = {params.lambda0, points[size_t(k)][0],
                                     points[size_t(k)][1]};
    const Trajectory traj = amplitude_damping_trajectory(lam, decay, params.tau);
    const QslReport report =
        whole_state
            ? tau_alpha(traj,
                        AlphaValue(whole_state_alpha(
                                       simplex_purity(lam[0], lam[1], lam[2]), 3),
                                   3),
                        params.quad_grid)
            : tau_qsl(traj, params.quad_grid);
    rows[size_t(k)] = {lam[1], lam[2], report.ratio};
    missed[size_t(k)] = report.converged ? 0 : 1;
  });

  CsvTable table;
  table.comments.push_back(std::string("qslkit ") + kToolVersion);
  table.comments.push_back(whole_state ? "command: tau-alpha --dynamics amplitude"
                                       : "command: fig2");
  table.comments.push_back("parameters: lambda0=" + num(params.lambda0) +
                           " gamma=" + num(params.gamma) + " tau=" + num(params.tau) +
                           " sweep=" + std::to_string(params.sweep) +
                           " quad_grid=" + std::to_string(params.quad_grid));
  if (params.lambda1 || params.lambda2) {
    table.comments.push_back("point: lambda1=" + num(points[0][0]) +
                             " lambda2=" + num(points[0][1]));
  }
  if (whole_state) {
    table.comments.push_back("bound: whole-state speed limit, alpha = initial purity "
                             "(1 at the uniform floor)");
  } else {
    table.comments.push_back("bound: frame-resolved speed limit");
  }
  for (const int m : missed) table.unconverged += m;
  table.comments.push_back(convergence_comment(table.unconverged, count));
  table.columns = {"lambda1", "lambda2", "ratio"};
  table.rows = std::move(rows);
  return table;
}

}  // namespace

CsvTable run_fig1(const Fig1Params& params) {
  require_tau_range(params.tau_min, params.tau_max);
  require_sweep(params.sweep);
  require_quad_grid(params.quad_grid);
  const EnergySpec spec({0.0, params.mu * params.em, params.em});
  const double window = std::numbers::pi / spec.max_gap();
  if (params.tau_max > window + 1e-9) {
    throw std::invalid_argument("tau_max " + num(params.tau_max) +
                                " exceeds the saturation window pi/max_gap = " + num(window));
  }
  const DensityMatrix rho0 = DensityMatrix::pure_basis_state(3, 0);
  const HermitianOperator ht = saturating_hamiltonian(rho0, spec);
  const HermitianOperator band = band_hamiltonian(params.em, params.mu, params.omega);

  std::vector<std::vector<double>> rows(static_cast<size_t>(params.sweep));
  std::vector<int> missed(size_t(params.sweep), 0);
  for_each_row(params.sweep, [&](int k) {
    const double tau = grid_point(params.tau_min, params.tau_max, k, params.sweep);
    const QslReport opt = tau_qsl_closed(ht, rho0, tau, params.quad_grid);
    const QslReport fixed = tau_qsl_closed(band, rho0, tau, params.quad_grid);
    rows[size_t(k)] = {tau, opt.bound, opt.ratio, fixed.bound, fixed.ratio};
    missed[size_t(k)] = (opt.converged ? 0 : 1) + (fixed.converged ? 0 : 1);
  });

  CsvTable table;
  table.comments.push_back(std::string("qslkit ") + kToolVersion);
  table.comments.push_back("command: fig1");
  table.comments.push_back("parameters: em=" + num(params.em) + " mu=" + num(params.mu) +
                           " omega=" + num(params.omega) + " tau_min=" + num(params.tau_min) +
                           " tau_max=" + num(params.tau_max) +
                           " sweep=" + std::to_string(params.sweep) +
                           " quad_grid=" + std::to_string(params.quad_grid));
  table.comments.push_back("bound: frame-resolved speed limit, closed unitary form");
  for (const int m : missed) table.unconverged += m;
  table.comments.push_back(convergence_comment(table.unconverged, 2 * params.sweep));
  table.columns = {"tau", "bound_opt", "ratio_opt", "bound_h0h1", "ratio_h0h1"};
  table.rows = std::move(rows);
  return table;
}

CsvTable run_fig2(const DampingSweepParams& params) { return damping_sweep(params, false); }

CsvTable run_damping_tau_alpha(const DampingSweepParams& params) {
  return damping_sweep(params, true);
}

CsvTable run_nonmarkov(const NonmarkovParams& params) {
  require_tau_range(params.tau_min, params.tau_max);
  require_sweep(params.sweep);
  require_quad_grid(params.quad_grid);
  const DecayModel decay =
      DecayModel::ohmic_zero_temperature(params.cutoff, params.ohmicity);
  const std::vector<double> lam = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  std::vector<std::vector<double>> rows(static_cast<size_t>(params.sweep));
  std::vector<int> missed(size_t(params.sweep), 0);
  for_each_row(params.sweep, [&](int k) {
    const double tau = grid_point(params.tau_min, params.tau_max, k, params.sweep);
    const Trajectory traj = amplitude_damping_trajectory(lam, decay, tau);
    const QslReport report = tau_qsl(traj, params.quad_grid);
    rows[size_t(k)] = {tau, decay_rate(decay, tau), report.ratio};
    missed[size_t(k)] = report.converged ? 0 : 1;
  });

  CsvTable table;
  table.comments.push_back(std::string("qslkit ") + kToolVersion);
  table.comments.push_back("command: nonmarkov");
  table.comments.push_back("parameters: cutoff=" + num(params.cutoff) +
                           " ohmicity=" + num(params.ohmicity) +
                           " tau_min=" + num(params.tau_min) +
                           " tau_max=" + num(params.tau_max) +
                           " sweep=" + std::to_string(params.sweep) +
                           " quad_grid=" + std::to_string(params.quad_grid));
  table.comments.push_back("populations: 1/3 1/3 1/3");
  table.comments.push_back("bound: frame-resolved speed limit");
  for (const int m : missed) table.unconverged += m;
  table.comments.push_back(convergence_comment(table.unconverged, params.sweep));
  table.columns = {"tau", "gamma_tau", "ratio"};
  table.rows = std::move(rows);
  return table;
}

CsvTable run_dephasing_tau_alpha(const DephasingSweepParams& params) {
  require_positive(params.tau, "tau");
  require_quad_grid(params.quad_grid);
  const std::vector<std::array<double, 2>> points =
      population_grid(params.lambda0, params.sweep, std::nullopt, std::nullopt);

  const int count = int(points.size());
  std::vector<std::vector<double>> rows(static_cast<size_t>(count));
  std::vector<int> missed(size_t(count), 0);
  std::vector<double> purities(size_t(count), 0.0);
  for_each_row(count, [&](int k) {
    const double l1 = points[size_t(k)][0];
    const double l2 = points[size_t(k)][1];
    const double coherence =
        params.lambda20 ? *params.lambda20 : std::sqrt(params.lambda0 * l2);
    if (coherence * coherence > params.lambda0 * l2 + 1e-12) {
      throw std::invalid_argument("coherence breaks positivity: lambda20^2 = " +
                                  num(coherence * coherence) +
                                  " exceeds lambda0*lambda2 = " + num(params.lambda0 * l2) +
                                  " at lambda1 = " + num(l1));
    }
    const std::vector<double> diag = {params.lambda0, l1, l2};
    const std::vector<Coherence> coherences = {{0, 2, Complex(coherence, 0.0)}};
    const Trajectory traj =
        dephasing_trajectory(diag, coherences, params.gamma, params.tau);
    const double purity =
        simplex_purity(diag[0], diag[1], diag[2]) + 2.0 * coherence * coherence;
    const QslReport report =
        tau_alpha(traj, AlphaValue(whole_state_alpha(purity, 3), 3), params.quad_grid);
    rows[size_t(k)] = {l1, l2, report.ratio};
    missed[size_t(k)] = report.converged ? 0 : 1;
    purities[size_t(k)] = purity;
  });

  CsvTable table;
  table.comments.push_back(std::string("qslkit ") + kToolVersion);
  table.comments.push_back("command: tau-alpha --dynamics dephasing");
  table.comments.push_back("parameters: lambda0=" + num(params.lambda0) +
                           " gamma=" + num(params.gamma) + " tau=" + num(params.tau) +
                           " sweep=" + std::to_string(params.sweep) +
                           " quad_grid=" + std::to_string(params.quad_grid));
  if (params.lambda20) {
    table.comments.push_back("coherence: lambda20 = " + num(*params.lambda20));
  } else {
    table.comments.push_back("coherence: lambda20 = sqrt(lambda0*lambda2), the largest "
                             "the spectrum admits");
  }
  table.comments.push_back("bound: whole-state speed limit, alpha = initial purity "
                           "(1 at the uniform floor)");
  const double min_purity = *std::min_element(purities.begin(), purities.end());
  if (min_purity < 1.0 - 1e-9) {
    table.comments.push_back("warning: initial states are mixed, smallest purity " +
                             num(min_purity));
  }
  if (params.lambda0 == 0.0 && !params.lambda20) {
    table.comments.push_back("note: lambda0 = 0 leaves no admissible coherence, so every "
                             "trajectory is stationary and each ratio is 0");
  }
  for (const int m : missed) table.unconverged += m;
  table.comments.push_back(convergence_comment(table.unconverged, count));
  table.columns = {"lambda1", "lambda2", "ratio"};
  table.rows = std::move(rows);
  return table;
}

CsvTable run_unitary_tau_alpha(const UnitarySweepParams& params) {
  require_tau_range(params.tau_min, params.tau_max);
  require_sweep(params.sweep);
  require_quad_grid(params.quad_grid);
  const EnergySpec spec({0.0, params.mu * params.em, params.em});
  const DensityMatrix rho0 = DensityMatrix::pure_basis_state(3, 0);
  const HermitianOperator ht = saturating_hamiltonian(rho0, spec);
  const HermitianOperator band = band_hamiltonian(params.em, params.mu, params.omega);
  const AlphaValue alpha(1.0, 3);

  std::vector<std::vector<double>> rows(static_cast<size_t>(params.sweep));
  std::vector<int> missed(size_t(params.sweep), 0);
  for_each_row(params.sweep, [&](int k) {
    const double tau = grid_point(params.tau_min, params.tau_max, k, params.sweep);
    const QslReport opt =
        tau_alpha(unitary_trajectory(ht, rho0, tau), alpha, params.quad_grid);
    const QslReport fixed =
        tau_alpha(unitary_trajectory(band, rho0, tau), alpha, params.quad_grid);
    rows[size_t(k)] = {tau, opt.ratio, fixed.ratio};
    missed[size_t(k)] = (opt.converged ? 0 : 1) + (fixed.converged ? 0 : 1);
  });

  CsvTable table;
  table.comments.push_back(std::string("qslkit ") + kToolVersion);
  table.comments.push_back("command: tau-alpha --dynamics unitary");
  table.comments.push_back("parameters: em=" + num(params.em) + " mu=" + num(params.mu) +
                           " omega=" + num(params.omega) + " tau_min=" + num(params.tau_min) +
                           " tau_max=" + num(params.tau_max) +
                           " sweep=" + std::to_string(params.sweep) +
                           " quad_grid=" + std::to_string(params.quad_grid));
  table.comments.push_back("bound: whole-state speed limit at alpha = 1");
  for (const int m : missed) table.unconverged += m;
  table.comments.push_back(convergence_comment(table.unconverged, 2 * params.sweep));
  table.columns = {"tau", "ratio_opt", "ratio_h0h1"};
  table.rows = std::move(rows);
  return table;
}

CheckReport speed_oracle_check(std::uint64_t seed, int samples) {
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  CheckReport report;
  report.name = "oracle.finite_difference_speed";
  report.tolerance = 1e-5;
  report.cases = samples;

  constexpr double kStep = 1e-6;
  constexpr double kHorizon = 2.0;
  constexpr std::array<double, 3> kTimes = {0.3, 1.0, 1.7};

  SplitMix64 master(seed);
  std::uint64_t worst_seed = 0;
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t case_seed = master.next_u64();
    SplitMix64 rng(case_seed);
    const int family = k % 3;
    const int n = 2 + (k / 3) % 3;

    Trajectory traj;
    if (family == 0) {
      traj = depolarizing_trajectory(random_density(n, n, rng.next_u64()),
                                     PSchedule::exponential(0.7), kHorizon);
    } else if (family == 1) {
      ComplexMatrix g(n);
      for (int i = 0; i < n; ++i) {
        g.at(i, i) = Complex(rng.next_normal(), 0.0);
        for (int j = i + 1; j < n; ++j) {
          g.at(i, j) = Complex(rng.next_normal(), rng.next_normal());
          g.at(j, i) = std::conj(g.at(i, j));
        }
      }
      traj = unitary_trajectory(HermitianOperator(g),
                                random_density(n, n, rng.next_u64()), kHorizon);
    } else {
      std::vector<double> lam(static_cast<size_t>(n));
      double sum = 0.0;
      for (double& v : lam) {
        v = rng.next_unit();
        sum += v;
      }
      for (double& v : lam) v /= sum;
      traj = amplitude_damping_trajectory(lam, DecayModel::constant(0.8), kHorizon);
    }

    const AlphaValue alpha(k % 2 == 0 ? 0.8 : 1.0, n);
    const double t = kTimes[size_t((k / 6) % 3)];
    const double exact = speed_alpha(traj.state(t), traj.derivative(t), alpha);
    const double fd = finite_diff_speed(traj, t, kStep, alpha);
    const double violation = std::fabs(fd - exact) / std::max(exact, 1e-3);
    if (violation > report.worst) {
      report.worst = violation;
      worst_seed = case_seed;
    }
  }

  report.pass = report.worst <= report.tolerance;
  if (!report.pass) {
    report.offending_seed = worst_seed;
    report.has_offender = true;
  }
  return report;
}

}  // namespace qsl
