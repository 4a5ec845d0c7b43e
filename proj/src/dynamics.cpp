#include "qsl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace qsl {

namespace {

// Probes (finite differences, endpoint sampling) may step slightly past the
// horizon; the analytic formulas extend there, so only reject clear misuse.
double checked_time(double t, double horizon, const char* what) {
  const double slack = 2e-6 + 1e-9 * horizon;
  if (!(t >= -slack && t <= horizon + slack)) {
    throw std::invalid_argument(std::string(what) + ": time " +
                                std::to_string(t) + " outside [0, " +
                                std::to_string(horizon) + "]");
  }
  return t;
}

void require_positive_horizon(double tau, const char* what) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument(std::string(what) + ": horizon must be > 0");
  }
}

double simpson_slice(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double m,
                            double fm, double b, double fb, double whole,
                            double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_slice(fa, flm, fm, m - a);
  const double right = simpson_slice(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, lm, flm, m, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, rm, frm, b, fb, right, 0.5 * tol,
                              depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  return adaptive_simpson_rec(f, a, fa, m, fm, b, fb,
                              simpson_slice(fa, fm, fb, b - a), tol, 48);
}

// Trajectory closures evaluate Gamma_t at many nearby times; integrating
// forward from the closest finished point keeps that cheap without losing
// the quadrature accuracy.
class GammaCache {
public:
  explicit GammaCache(const DecayModel& model) : model_(model) {
    known_.emplace(0.0, 0.0);
  }

  double at(double t) {
    if (t <= 0.0) return 0.0;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = known_.upper_bound(t);
    --it;  // the map always holds 0.0
    if (it->first == t) return it->second;
    const double base_t = it->first;
    const double base = it->second;
    const double val =
        base + adaptive_simpson(
                   [this](double s) { return decay_rate(model_, s); }, base_t,
                   t, 1e-12);
    known_.emplace(t, val);
    return val;
  }

private:
  DecayModel model_;
  std::map<double, double> known_;
  std::mutex mu_;
};

}  // namespace

Trajectory unitary_trajectory(std::vector<HamiltonianSegment> schedule,
                              const DensityMatrix& rho0, double tau) {
  require_positive_horizon(tau, "unitary_trajectory");
  if (schedule.empty()) {
    throw std::invalid_argument("unitary_trajectory: empty schedule");
  }
  const int n = rho0.dim();
  double covered = 0.0;
  for (const HamiltonianSegment& seg : schedule) {
    if (seg.h.dim() != n) {
      throw std::invalid_argument(
          "unitary_trajectory: segment dimension mismatch");
    }
    if (!(seg.duration > 0.0)) {
      throw std::invalid_argument(
          "unitary_trajectory: segment durations must be > 0");
    }
    covered += seg.duration;
  }
  if (covered < tau - 1e-12) {
    throw std::invalid_argument(
        "unitary_trajectory: schedule covers " + std::to_string(covered) +
        " < horizon " + std::to_string(tau));
  }

  struct Prepared {
    std::vector<double> starts;           // segment start times
    std::vector<EigenDecomposition> eig;  // per segment
    std::vector<ComplexMatrix> boundary;  // U at each segment start
    std::vector<HermitianOperator> hs;
  };
  auto prep = std::make_shared<Prepared>();
  double t0 = 0.0;
  ComplexMatrix acc = ComplexMatrix::identity(n);
  for (const HamiltonianSegment& seg : schedule) {
    prep->starts.push_back(t0);
    prep->eig.push_back(eig_hermitian(seg.h));
    prep->boundary.push_back(acc);
    prep->hs.push_back(seg.h);
    acc = propagator(seg.h, seg.duration).matrix() * acc;
    t0 += seg.duration;
  }

  const auto propagate_to = [prep, n](double t) {
    size_t k = prep->starts.size() - 1;
    while (k > 0 && prep->starts[k] > t) --k;
    const EigenDecomposition& e = prep->eig[k];
    const double dt = t - prep->starts[k];
    ComplexMatrix w(n);
    const ComplexMatrix& phi = e.vectors.matrix();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        Complex acc2{0.0, 0.0};
        for (int s = 0; s < n; ++s)
          acc2 += phi.at(r, s) * std::polar(1.0, -e.values[s] * dt) *
                  std::conj(phi.at(c, s));
        w.at(r, c) = acc2;
      }
    return std::make_pair(w * prep->boundary[k], k);
  };

  Trajectory traj;
  traj.dim = n;
  traj.horizon = tau;
  traj.kind = TrajectoryKind::unitary;
  traj.state = [prep, propagate_to, rho0, tau](double t) {
    t = checked_time(t, tau, "unitary state");
    const ComplexMatrix u = propagate_to(std::max(t, 0.0)).first;
    return DensityMatrix(u * (rho0.matrix() * u.adjoint()));
  };
  traj.derivative = [prep, propagate_to, rho0, tau, n](double t) {
    t = checked_time(t, tau, "unitary derivative");
    const auto [u, k] = propagate_to(std::max(t, 0.0));
    const ComplexMatrix rho = u * (rho0.matrix() * u.adjoint());
    const ComplexMatrix& h = prep->hs[k].matrix();
    ComplexMatrix comm = h * rho - rho * h;
    comm *= Complex{0.0, -1.0};
    (void)n;
    return HermitianOperator(std::move(comm));
  };
  // Any eigenframe of rho0 may be declared. For a constant Hamiltonian whose
  // Fourier-conjugate eigenframe already diagonalizes rho0, declare that
  // frame: its pair decomposition rotates at the bare gap rates, an alignment
  // that the diagonalizer's arbitrary column phases cannot reproduce.
  UnitaryMatrix phi0 = eig_hermitian(rho0.hermitian()).vectors;
  if (schedule.size() == 1) {
    const ComplexMatrix aligned =
        prep->eig[0].vectors.matrix() * fourier_unitary(n).matrix();
    const ComplexMatrix g = aligned.adjoint() * (rho0.matrix() * aligned);
    double offdiag = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) offdiag = std::max(offdiag, std::abs(g.at(i, j)));
    if (offdiag <= 1e-10) phi0 = UnitaryMatrix(aligned);
  }
  traj.frame = [propagate_to, phi0, tau](double t) {
    t = checked_time(t, tau, "unitary frame");
    return UnitaryMatrix(propagate_to(std::max(t, 0.0)).first * phi0.matrix());
  };
  return traj;
}

Trajectory unitary_trajectory(const HermitianOperator& h,
                              const DensityMatrix& rho0, double tau) {
  std::vector<HamiltonianSegment> schedule;
  schedule.push_back(HamiltonianSegment{h, tau});
  return unitary_trajectory(std::move(schedule), rho0, tau);
}

PSchedule PSchedule::exponential(double rate) {
  if (!(rate >= 0.0)) {
    throw std::invalid_argument("PSchedule::exponential: rate must be >= 0");
  }
  PSchedule s;
  s.value = [rate](double t) { return std::exp(-rate * t); };
  s.derivative = [rate](double t) { return -rate * std::exp(-rate * t); };
  return s;
}

Trajectory depolarizing_trajectory(const DensityMatrix& rho0,
                                   const PSchedule& p_schedule, double tau) {
  require_positive_horizon(tau, "depolarizing_trajectory");
  if (!p_schedule.value || !p_schedule.derivative) {
    throw std::invalid_argument(
        "depolarizing_trajectory: schedule needs value and derivative");
  }
  const int grid = 257;
  double prev = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double v = p_schedule.value(tau * k / (grid - 1));
    if (k == 0 && std::abs(v - 1.0) > 1e-12) {
      throw std::invalid_argument("depolarizing_trajectory: p(0) must be 1");
    }
    if (!(v > 0.0) || v > 1.0 + 1e-12) {
      throw std::invalid_argument(
          "depolarizing_trajectory: p must stay in (0, 1]");
    }
    if (k > 0 && v > prev + 1e-12) {
      throw std::invalid_argument(
          "depolarizing_trajectory: p must be non-increasing");
    }
    prev = v;
  }

  const int n = rho0.dim();
  Trajectory traj;
  traj.dim = n;
  traj.horizon = tau;
  traj.kind = TrajectoryKind::depolarizing;
  auto value = p_schedule.value;
  auto deriv = p_schedule.derivative;
  traj.state = [rho0, value, tau, n](double t) {
    t = checked_time(t, tau, "depolarizing state");
    const double p = value(std::max(t, 0.0));
    ComplexMatrix m = rho0.matrix();
    m *= Complex{p, 0.0};
    for (int i = 0; i < n; ++i) m.at(i, i) += (1.0 - p) / n;
    return DensityMatrix(std::move(m));
  };
  traj.derivative = [rho0, deriv, tau, n](double t) {
    t = checked_time(t, tau, "depolarizing derivative");
    const double pdot = deriv(std::max(t, 0.0));
    ComplexMatrix m = rho0.matrix();
    for (int i = 0; i < n; ++i) m.at(i, i) -= 1.0 / n;
    m *= Complex{pdot, 0.0};
    return HermitianOperator(std::move(m));
  };
  const UnitaryMatrix phi0 = eig_hermitian(rho0.hermitian()).vectors;
  traj.frame = [phi0, tau](double t) {
    checked_time(t, tau, "depolarizing frame");
    return phi0;
  };
  return traj;
}

DecayModel::DecayModel(bool is_const, double a, double b)
    : constant_(is_const),
      gamma_(is_const ? a : 0.0),
      cutoff_(is_const ? 0.0 : a),
      ohmicity_(is_const ? 0.0 : b) {}

DecayModel DecayModel::constant(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("DecayModel::constant: gamma must be > 0");
  }
  return DecayModel(true, gamma, 0.0);
}

DecayModel DecayModel::ohmic_zero_temperature(double cutoff, double ohmicity) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff) || !(ohmicity > 0.0) ||
      !std::isfinite(ohmicity)) {
    throw std::invalid_argument(
        "DecayModel::ohmic_zero_temperature: parameters must be > 0");
  }
  return DecayModel(false, cutoff, ohmicity);
}

double DecayModel::gamma() const {
  if (!constant_) {
    throw std::logic_error("DecayModel: gamma() on a non-constant model");
  }
  return gamma_;
}

double DecayModel::cutoff() const {
  if (constant_) {
    throw std::logic_error("DecayModel: cutoff() on a constant model");
  }
  return cutoff_;
}

double DecayModel::ohmicity() const {
  if (constant_) {
    throw std::logic_error("DecayModel: ohmicity() on a constant model");
  }
  return ohmicity_;
}

double decay_rate(const DecayModel& decay, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("decay_rate: t must be >= 0");
  }
  if (decay.is_constant()) return decay.gamma();
  const double x = decay.cutoff() * t;
  const double k = decay.ohmicity();
  return decay.cutoff() * std::pow(1.0 + x * x, -0.5 * k) * std::tgamma(k) *
         std::sin(k * std::atan(x));
}

double gamma_integral(const DecayModel& decay, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("gamma_integral: t must be >= 0");
  }
  if (decay.is_constant()) return decay.gamma() * t;
  return adaptive_simpson(
      [&decay](double s) { return decay_rate(decay, s); }, 0.0, t, 1e-10);
}

Trajectory amplitude_damping_trajectory(std::span<const double> lambdas,
                                        const DecayModel& decay, double tau) {
  require_positive_horizon(tau, "amplitude_damping_trajectory");
  const int n = static_cast<int>(lambdas.size());
  if (n < kMinDim || n > kMaxDim) {
    throw std::invalid_argument(
        "amplitude_damping_trajectory: dimension outside [" +
        std::to_string(kMinDim) + ", " + std::to_string(kMaxDim) + "]");
  }
  double sum = 0.0;
  for (double l : lambdas) {
    if (!(l >= -1e-12) || !std::isfinite(l)) {
      throw std::invalid_argument(
          "amplitude_damping_trajectory: populations must be >= 0");
    }
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument(
        "amplitude_damping_trajectory: populations must sum to 1");
  }

  std::vector<double> lam(lambdas.begin(), lambdas.end());
  for (double& l : lam) l = std::max(l, 0.0);
  double excited = 0.0;
  for (int i = 1; i < n; ++i) excited += lam[i];
  auto cache = std::make_shared<GammaCache>(decay);

  Trajectory traj;
  traj.dim = n;
  traj.horizon = tau;
  traj.kind = TrajectoryKind::amplitude_damping;
  traj.state = [lam, excited, cache, tau, n](double t) {
    t = checked_time(t, tau, "amplitude damping state");
    const double e = std::exp(-cache->at(t));
    std::vector<double> d(n);
    d[0] = 1.0 - e * excited;
    for (int i = 1; i < n; ++i) d[i] = e * lam[i];
    return DensityMatrix::from_diagonal(d);
  };
  traj.derivative = [lam, excited, cache, decay, tau, n](double t) {
    t = checked_time(t, tau, "amplitude damping derivative");
    const double factor =
        decay_rate(decay, std::max(t, 0.0)) * std::exp(-cache->at(t));
    std::vector<double> d(n);
    d[0] = factor * excited;
    for (int i = 1; i < n; ++i) d[i] = -factor * lam[i];
    return HermitianOperator::diagonal(d);
  };
  traj.frame = [tau, n](double t) {
    checked_time(t, tau, "amplitude damping frame");
    return UnitaryMatrix::identity(n);
  };
  return traj;
}

Trajectory dephasing_trajectory(std::span<const double> diag,
                                std::span<const Coherence> coherences,
                                double gamma, double tau) {
  require_positive_horizon(tau, "dephasing_trajectory");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("dephasing_trajectory: gamma must be > 0");
  }
  const int n = static_cast<int>(diag.size());
  if (n < kMinDim || n > kMaxDim) {
    throw std::invalid_argument("dephasing_trajectory: dimension outside [" +
                                std::to_string(kMinDim) + ", " +
                                std::to_string(kMaxDim) + "]");
  }
  ComplexMatrix base(n);
  for (int i = 0; i < n; ++i) base.at(i, i) = diag[i];
  bool any_coherence = false;
  for (const Coherence& c : coherences) {
    if (c.i < 0 || c.j >= n || c.i >= c.j) {
      throw std::invalid_argument(
          "dephasing_trajectory: coherence indices must satisfy 0 <= i < j");
    }
    base.at(c.i, c.j) = c.value;
    base.at(c.j, c.i) = std::conj(c.value);
    if (std::abs(c.value) > 0.0) any_coherence = true;
  }
  // Validates positivity and trace of the assembled initial state.
  const DensityMatrix rho0(base);

  Trajectory traj;
  traj.dim = n;
  traj.horizon = tau;
  traj.kind = TrajectoryKind::dephasing;
  traj.state = [rho0, gamma, tau, n](double t) {
    t = checked_time(t, tau, "dephasing state");
    const double f = std::exp(-gamma * std::max(t, 0.0));
    ComplexMatrix m = rho0.matrix();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) m.at(i, j) *= f;
    return DensityMatrix(std::move(m));
  };
  traj.derivative = [rho0, gamma, tau, n](double t) {
    t = checked_time(t, tau, "dephasing derivative");
    const double f = -gamma * std::exp(-gamma * std::max(t, 0.0));
    ComplexMatrix m = rho0.matrix();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m.at(i, j) *= (i == j) ? Complex{0.0, 0.0} : Complex{f, 0.0};
    return HermitianOperator(std::move(m));
  };
  if (!any_coherence) {
    traj.frame = [tau, n](double t) {
      checked_time(t, tau, "dephasing frame");
      return UnitaryMatrix::identity(n);
    };
  }
  return traj;
}

std::vector<UnitaryMatrix> track_frame(const Trajectory& traj, int m) {
  if (m < 2) {
    throw std::invalid_argument("track_frame: need at least 2 grid points");
  }
  std::vector<UnitaryMatrix> out;
  out.reserve(static_cast<size_t>(m));
  const int n = traj.dim;
  if (traj.has_frame()) {
    for (int k = 0; k < m; ++k) {
      out.push_back(traj.frame(traj.horizon * k / (m - 1)));
    }
    return out;
  }
  for (int k = 0; k < m; ++k) {
    const double t = traj.horizon * k / (m - 1);
    const EigenDecomposition eig = eig_hermitian(traj.state(t).hermitian());
    if (k == 0) {
      out.push_back(eig.vectors);
      continue;
    }
    const ComplexMatrix& prev = out.back().matrix();
    const ComplexMatrix& cand = eig.vectors.matrix();
    // Overlaps between every previous column a and candidate column b.
    std::vector<Complex> inner(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Complex acc{0.0, 0.0};
        for (int r = 0; r < n; ++r)
          acc += std::conj(prev.at(r, a)) * cand.at(r, b);
        inner[static_cast<size_t>(a) * n + b] = acc;
      }
    std::vector<int> match(n, -1);
    std::vector<bool> used_a(n, false), used_b(n, false);
    for (int round = 0; round < n; ++round) {
      int best_a = -1, best_b = -1;
      double best = -1.0;
      for (int a = 0; a < n; ++a) {
        if (used_a[a]) continue;
        for (int b = 0; b < n; ++b) {
          if (used_b[b]) continue;
          const double o = std::abs(inner[static_cast<size_t>(a) * n + b]);
          if (o > best) {
            best = o;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best < 0.5) {
        throw std::runtime_error(
            "track_frame: column overlap " + std::to_string(best) +
            " below 0.5 at step " + std::to_string(k) +
            "; refine the time grid");
      }
      match[best_a] = best_b;
      used_a[best_a] = true;
      used_b[best_b] = true;
    }
    ComplexMatrix next(n);
    for (int a = 0; a < n; ++a) {
      const Complex ov = inner[static_cast<size_t>(a) * n + match[a]];
      const Complex phase = std::conj(ov) / std::abs(ov);
      for (int r = 0; r < n; ++r)
        next.at(r, a) = cand.at(r, match[a]) * phase;
    }
    out.emplace_back(std::move(next));
  }
  return out;
}

}  // namespace qsl
