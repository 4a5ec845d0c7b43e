#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "qsl/dynamics.hpp"
#include "qsl/matrix.hpp"
#include "qsl/qslbounds.hpp"
#include "qsl/rng.hpp"
#include "qsl/stategeom.hpp"
#include "qsl/verify.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<qsl::Complex, py::array::c_style | py::array::forcecast>;

qsl::ComplexMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw std::invalid_argument("expected a square 2-d array");
  }
  const int n = static_cast<int>(a.shape(0));
  std::vector<qsl::Complex> data(static_cast<size_t>(n) * static_cast<size_t>(n));
  auto r = a.unchecked<2>();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      data[static_cast<size_t>(i) * n + j] = r(i, j);
    }
  }
  return qsl::ComplexMatrix(n, std::move(data));
}

py::array_t<qsl::Complex> to_array(const qsl::ComplexMatrix& m) {
  const int n = m.dim();
  py::array_t<qsl::Complex> out(std::vector<py::ssize_t>{n, n});
  auto w = out.mutable_unchecked<2>();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      w(i, j) = m.at(i, j);
    }
  }
  return out;
}

// Same default as the CLI distance report: the larger endpoint purity, with
// 1.0 taking over at the uniform floor where any purity value is admissible.
qsl::AlphaValue resolve_scalar_alpha(const qsl::DensityMatrix& a,
                                     const qsl::DensityMatrix& b,
                                     std::optional<double> alpha) {
  if (alpha) {
    return qsl::AlphaValue(*alpha, a.dim());
  }
  const double p = std::max(a.purity(), b.purity());
  const double floor = 1.0 / a.dim() + 1e-12;
  return qsl::AlphaValue(p <= floor ? 1.0 : p, a.dim());
}

qsl::ProjectiveFamily make_family(const qsl::DensityMatrix& rho,
                                  const std::optional<qsl::UnitaryMatrix>& frame) {
  if (frame) {
    return qsl::ProjectiveFamily(rho, *frame);
  }
  return qsl::ProjectiveFamily(rho);
}

qsl::AlphaAssignment resolve_pair_alphas(
    const qsl::ProjectiveFamily& a, const qsl::ProjectiveFamily& b,
    std::optional<double> alpha, const std::optional<qsl::AlphaAssignment>& alphas) {
  if (alpha && alphas) {
    throw std::invalid_argument("give either alpha or alphas, not both");
  }
  if (alphas) {
    return *alphas;
  }
  if (alpha) {
    return qsl::AlphaAssignment(a.dim(), *alpha);
  }
  return qsl::default_alphas(a, b);
}

const char* kind_name(qsl::TrajectoryKind k) {
  switch (k) {
    case qsl::TrajectoryKind::unitary:
      return "unitary";
    case qsl::TrajectoryKind::depolarizing:
      return "depolarizing";
    case qsl::TrajectoryKind::amplitude_damping:
      return "amplitude_damping";
    case qsl::TrajectoryKind::dephasing:
      return "dephasing";
    case qsl::TrajectoryKind::custom:
      break;
  }
  return "custom";
}

std::string format_repr(const char* fmt, ...)
    __attribute__((format(printf, 1, 2)));

std::string format_repr(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "quantum speed limits from a projective state metric";
  m.attr("__version__") = "0.1.0";

  py::class_<qsl::DensityMatrix>(m, "DensityMatrix",
                                 "Hermitian, unit-trace, positive-semidefinite state")
      .def(py::init([](const Array& a) { return qsl::DensityMatrix(to_matrix(a)); }),
           py::arg("matrix"))
      .def_static("pure_basis_state", &qsl::DensityMatrix::pure_basis_state,
                  py::arg("dim"), py::arg("k"))
      .def_static("maximally_mixed", &qsl::DensityMatrix::maximally_mixed,
                  py::arg("dim"))
      .def_static(
          "from_diagonal",
          [](const std::vector<double>& probabilities) {
            return qsl::DensityMatrix::from_diagonal(probabilities);
          },
          py::arg("probabilities"))
      .def_property_readonly("dim", &qsl::DensityMatrix::dim)
      .def_property_readonly("purity", &qsl::DensityMatrix::purity)
      .def("matrix",
           [](const qsl::DensityMatrix& rho) { return to_array(rho.matrix()); })
      .def("__repr__", [](const qsl::DensityMatrix& rho) {
        return format_repr("DensityMatrix(dim=%d, purity=%.6g)", rho.dim(),
                           rho.purity());
      });

  py::class_<qsl::HermitianOperator>(m, "HermitianOperator",
                                     "Hermitian matrix, validated on construction")
      .def(py::init([](const Array& a) { return qsl::HermitianOperator(to_matrix(a)); }),
           py::arg("matrix"))
      .def_static(
          "diagonal",
          [](const std::vector<double>& entries) {
            return qsl::HermitianOperator::diagonal(entries);
          },
          py::arg("entries"))
      .def_property_readonly("dim", &qsl::HermitianOperator::dim)
      .def("matrix",
           [](const qsl::HermitianOperator& h) { return to_array(h.matrix()); })
      .def("__repr__", [](const qsl::HermitianOperator& h) {
        return format_repr("HermitianOperator(dim=%d)", h.dim());
      });

  py::class_<qsl::UnitaryMatrix>(m, "UnitaryMatrix",
                                 "Unitary matrix, validated on construction")
      .def(py::init([](const Array& a) { return qsl::UnitaryMatrix(to_matrix(a)); }),
           py::arg("matrix"))
      .def_static("identity", &qsl::UnitaryMatrix::identity, py::arg("dim"))
      .def_property_readonly("dim", &qsl::UnitaryMatrix::dim)
      .def("matrix", [](const qsl::UnitaryMatrix& u) { return to_array(u.matrix()); })
      .def("__repr__", [](const qsl::UnitaryMatrix& u) {
        return format_repr("UnitaryMatrix(dim=%d)", u.dim());
      });

  py::class_<qsl::AlphaAssignment>(m, "AlphaAssignment",
                                   "One mapping constant per ordered index pair")
      .def(py::init<int, double>(), py::arg("dim"), py::arg("uniform_value"))
      .def_property_readonly("dim", &qsl::AlphaAssignment::dim)
      .def("at", &qsl::AlphaAssignment::at, py::arg("i"), py::arg("j"))
      .def("set", &qsl::AlphaAssignment::set, py::arg("i"), py::arg("j"),
           py::arg("value"))
      .def("__repr__", [](const qsl::AlphaAssignment& a) {
        return format_repr("AlphaAssignment(dim=%d)", a.dim());
      });

  py::class_<qsl::ProjectiveFamily>(m, "ProjectiveFamily",
                                    "Two-level reductions of a state relative to a frame")
      .def(py::init([](const qsl::DensityMatrix& rho,
                       std::optional<qsl::UnitaryMatrix> frame) {
             return make_family(rho, frame);
           }),
           py::arg("rho"), py::arg("frame") = std::nullopt)
      .def_property_readonly("dim", &qsl::ProjectiveFamily::dim)
      .def_property_readonly("source", &qsl::ProjectiveFamily::source)
      .def_property_readonly("frame", &qsl::ProjectiveFamily::frame)
      .def("pair", &qsl::ProjectiveFamily::pair, py::arg("i"), py::arg("j"))
      .def("offdiag", &qsl::ProjectiveFamily::offdiag, py::arg("i"), py::arg("j"))
      .def("pair_purity", &qsl::ProjectiveFamily::pair_purity, py::arg("i"),
           py::arg("j"))
      .def("__repr__", [](const qsl::ProjectiveFamily& f) {
        return format_repr("ProjectiveFamily(dim=%d)", f.dim());
      });

  py::class_<qsl::Trajectory>(m, "Trajectory",
                              "Time-parameterized state with analytic derivative")
      .def_property_readonly("dim",
                             [](const qsl::Trajectory& t) { return t.dim; })
      .def_property_readonly("horizon",
                             [](const qsl::Trajectory& t) { return t.horizon; })
      .def_property_readonly(
          "kind", [](const qsl::Trajectory& t) { return kind_name(t.kind); })
      .def_property_readonly("has_frame", &qsl::Trajectory::has_frame)
      .def("state", [](const qsl::Trajectory& t, double time) { return t.state(time); },
           py::arg("t"))
      .def("derivative",
           [](const qsl::Trajectory& t, double time) { return t.derivative(time); },
           py::arg("t"))
      .def("frame",
           [](const qsl::Trajectory& t, double time) {
             if (!t.has_frame()) {
               throw std::invalid_argument("trajectory declares no analytic frame");
             }
             return t.frame(time);
           },
           py::arg("t"))
      .def("__repr__", [](const qsl::Trajectory& t) {
        return format_repr("Trajectory(kind='%s', dim=%d, horizon=%.6g)",
                           kind_name(t.kind), t.dim, t.horizon);
      });

  py::class_<qsl::QslReport>(m, "QslReport", "One bound evaluation")
      .def_readonly("bound", &qsl::QslReport::bound)
      .def_readonly("actual_tau", &qsl::QslReport::actual_tau)
      .def_readonly("ratio", &qsl::QslReport::ratio)
      .def_readonly("distance", &qsl::QslReport::distance)
      .def_readonly("mean_speed", &qsl::QslReport::mean_speed)
      .def_readonly("grid_points", &qsl::QslReport::grid_points)
      .def_readonly("refinements", &qsl::QslReport::refinements)
      .def_readonly("converged", &qsl::QslReport::converged)
      .def("__repr__", [](const qsl::QslReport& r) {
        return format_repr(
            "QslReport(bound=%.6g, actual_tau=%.6g, ratio=%.6g, converged=%s)",
            r.bound, r.actual_tau, r.ratio, r.converged ? "True" : "False");
      });

  py::class_<qsl::CheckReport>(m, "CheckReport", "Outcome of one self check")
      .def_readonly("name", &qsl::CheckReport::name)
      .def_readonly("cases", &qsl::CheckReport::cases)
      .def_readonly("worst", &qsl::CheckReport::worst)
      .def_readonly("tolerance", &qsl::CheckReport::tolerance)
      .def_readonly("passed", &qsl::CheckReport::pass)
      .def_property_readonly("offending_seed",
                             [](const qsl::CheckReport& r) -> std::optional<std::uint64_t> {
                               if (r.has_offender) {
                                 return r.offending_seed;
                               }
                               return std::nullopt;
                             })
      .def("__repr__", [](const qsl::CheckReport& r) { return qsl::to_line(r); });

  m.def(
      "f_map",
      [](const qsl::DensityMatrix& rho, double alpha) {
        return to_array(qsl::f_map(rho, qsl::AlphaValue(alpha, rho.dim())).matrix());
      },
      py::arg("rho"), py::arg("alpha"),
      "Image of the state under the mapping at the given constant");

  m.def(
      "distance_alpha",
      [](const qsl::DensityMatrix& rho, const qsl::DensityMatrix& sigma,
         std::optional<double> alpha) {
        return qsl::distance_alpha(rho, sigma, resolve_scalar_alpha(rho, sigma, alpha));
      },
      py::arg("rho"), py::arg("sigma"), py::arg("alpha") = std::nullopt,
      "Angle between normalized images; alpha defaults to the larger purity");

  m.def(
      "framed_distance",
      [](const qsl::DensityMatrix& rho, const qsl::DensityMatrix& sigma,
         std::optional<double> alpha, std::optional<qsl::AlphaAssignment> alphas,
         std::optional<qsl::UnitaryMatrix> rho_frame,
         std::optional<qsl::UnitaryMatrix> sigma_frame) {
        const qsl::ProjectiveFamily fa = make_family(rho, rho_frame);
        const qsl::ProjectiveFamily fb = make_family(sigma, sigma_frame);
        return qsl::framed_distance(fa, fb, resolve_pair_alphas(fa, fb, alpha, alphas));
      },
      py::arg("rho"), py::arg("sigma"), py::kw_only(),
      py::arg("alpha") = std::nullopt, py::arg("alphas") = std::nullopt,
      py::arg("rho_frame") = std::nullopt, py::arg("sigma_frame") = std::nullopt,
      "Sum of pair distances over ordered index pairs");

  m.def(
      "permuted_distance",
      [](const qsl::DensityMatrix& rho, const qsl::DensityMatrix& sigma,
         std::optional<double> alpha, std::optional<qsl::AlphaAssignment> alphas,
         std::optional<qsl::UnitaryMatrix> rho_frame,
         std::optional<qsl::UnitaryMatrix> sigma_frame) {
        const qsl::ProjectiveFamily fa = make_family(rho, rho_frame);
        const qsl::ProjectiveFamily fb = make_family(sigma, sigma_frame);
        const qsl::PermutedDistance res =
            qsl::permuted_distance(fa, fb, resolve_pair_alphas(fa, fb, alpha, alphas));
        return py::make_tuple(res.radians, res.permutation);
      },
      py::arg("rho"), py::arg("sigma"), py::kw_only(),
      py::arg("alpha") = std::nullopt, py::arg("alphas") = std::nullopt,
      py::arg("rho_frame") = std::nullopt, py::arg("sigma_frame") = std::nullopt,
      "Framed distance maximized over relabelings; returns (radians, permutation)");

  m.def(
      "default_alphas",
      [](const qsl::DensityMatrix& rho, const qsl::DensityMatrix& sigma) {
        return qsl::default_alphas(rho, sigma);
      },
      py::arg("rho"), py::arg("sigma"),
      "Per-pair constants: max of the two pair purities, 1.0 at the floor");

  m.def(
      "speed_alpha",
      [](const qsl::DensityMatrix& rho, const qsl::HermitianOperator& rhodot,
         double alpha) {
        return qsl::speed_alpha(rho, rhodot, qsl::AlphaValue(alpha, rho.dim()));
      },
      py::arg("rho"), py::arg("rhodot"), py::arg("alpha"),
      "Instantaneous speed of the normalized image");

  m.def(
      "finite_diff_speed",
      [](const qsl::Trajectory& traj, double t, double h, double alpha) {
        return qsl::finite_diff_speed(traj, t, h, qsl::AlphaValue(alpha, traj.dim));
      },
      py::arg("traj"), py::arg("t"), py::arg("h"), py::arg("alpha"),
      "Central-difference speed oracle");

  m.def(
      "energy_variance",
      [](const qsl::HermitianOperator& h, const qsl::DensityMatrix& state) {
        return qsl::energy_variance(h, state);
      },
      py::arg("h"), py::arg("state"));

  m.def(
      "unitary_trajectory",
      [](const qsl::HermitianOperator& h, const qsl::DensityMatrix& rho0, double tau) {
        return qsl::unitary_trajectory(h, rho0, tau);
      },
      py::arg("h"), py::arg("rho0"), py::arg("tau"),
      "Constant-Hamiltonian evolution of rho0 over [0, tau]");

  m.def(
      "unitary_trajectory",
      [](const std::vector<std::pair<qsl::HermitianOperator, double>>& schedule,
         const qsl::DensityMatrix& rho0, double tau) {
        std::vector<qsl::HamiltonianSegment> segments;
        segments.reserve(schedule.size());
        for (const auto& [h, duration] : schedule) {
          segments.push_back({h, duration});
        }
        return qsl::unitary_trajectory(std::move(segments), rho0, tau);
      },
      py::arg("schedule"), py::arg("rho0"), py::arg("tau"),
      "Piecewise evolution; schedule is a list of (H, duration) pairs");

  m.def(
      "depolarizing_trajectory",
      [](const qsl::DensityMatrix& rho0, double tau, double rate) {
        return qsl::depolarizing_trajectory(rho0, qsl::PSchedule::exponential(rate), tau);
      },
      py::arg("rho0"), py::arg("tau"), py::arg("rate") = 1.0,
      "Exponential mixing toward the uniform state");

  m.def(
      "amplitude_damping_trajectory",
      [](const std::vector<double>& lambdas, double tau, std::optional<double> gamma,
         std::optional<double> cutoff, std::optional<double> ohmicity) {
        if (gamma && (cutoff || ohmicity)) {
          throw std::invalid_argument("give either gamma or cutoff+ohmicity, not both");
        }
        if (!gamma && !(cutoff && ohmicity)) {
          throw std::invalid_argument("give gamma, or cutoff and ohmicity");
        }
        const qsl::DecayModel decay =
            gamma ? qsl::DecayModel::constant(*gamma)
                  : qsl::DecayModel::ohmic_zero_temperature(*cutoff, *ohmicity);
        return qsl::amplitude_damping_trajectory(lambdas, decay, tau);
      },
      py::arg("lambdas"), py::arg("tau"), py::kw_only(),
      py::arg("gamma") = std::nullopt, py::arg("cutoff") = std::nullopt,
      py::arg("ohmicity") = std::nullopt,
      "Decay toward the ground level at a constant or Ohmic-family rate");

  m.def(
      "dephasing_trajectory",
      [](const std::vector<double>& diag,
         const std::vector<std::tuple<int, int, qsl::Complex>>& coherences,
         double gamma, double tau) {
        std::vector<qsl::Coherence> cs;
        cs.reserve(coherences.size());
        for (const auto& [i, j, value] : coherences) {
          cs.push_back({i, j, value});
        }
        return qsl::dephasing_trajectory(diag, cs, gamma, tau);
      },
      py::arg("diag"), py::arg("coherences"), py::arg("gamma"), py::arg("tau"),
      "Fixed diagonal with exponentially shrinking off-diagonal entries");

  m.def(
      "ohmic_decay_rate",
      [](double cutoff, double ohmicity, double t) {
        return qsl::decay_rate(qsl::DecayModel::ohmic_zero_temperature(cutoff, ohmicity),
                               t);
      },
      py::arg("cutoff"), py::arg("ohmicity"), py::arg("t"),
      "Instantaneous zero-temperature rate; negative where the bath feeds back");

  m.def(
      "track_frame",
      [](const qsl::Trajectory& traj, int m_points) {
        return qsl::track_frame(traj, m_points);
      },
      py::arg("traj"), py::arg("m"), py::call_guard<py::gil_scoped_release>(),
      "Continuous eigenframes at m uniform grid points");

  m.def(
      "tau_alpha",
      [](const qsl::Trajectory& traj, double alpha, int grid) {
        return qsl::tau_alpha(traj, qsl::AlphaValue(alpha, traj.dim), grid);
      },
      py::arg("traj"), py::arg("alpha"), py::arg("grid") = 129,
      py::call_guard<py::gil_scoped_release>(),
      "Whole-state bound: endpoint distance over mean speed");

  m.def(
      "tau_qsl",
      [](const qsl::Trajectory& traj, std::optional<qsl::AlphaAssignment> alphas,
         int grid) {
        if (alphas) {
          return qsl::tau_qsl(traj, *alphas, grid);
        }
        return qsl::tau_qsl(traj, grid);
      },
      py::arg("traj"), py::arg("alphas") = std::nullopt, py::arg("grid") = 129,
      py::call_guard<py::gil_scoped_release>(),
      "Frame-resolved bound with tracked eigenframes");

  m.def(
      "tau_qsl_closed",
      [](const qsl::HermitianOperator& h, const qsl::DensityMatrix& rho0, double tau,
         int grid) { return qsl::tau_qsl_closed(h, rho0, tau, grid); },
      py::arg("h"), py::arg("rho0"), py::arg("tau"), py::arg("grid") = 129,
      py::call_guard<py::gil_scoped_release>(),
      "Unitary frame-resolved bound from pair energy variances");

  m.def(
      "tau_qsl_closed",
      [](const std::vector<std::pair<qsl::HermitianOperator, double>>& schedule,
         const qsl::DensityMatrix& rho0, double tau, int grid) {
        std::vector<qsl::HamiltonianSegment> segments;
        segments.reserve(schedule.size());
        for (const auto& [h, duration] : schedule) {
          segments.push_back({h, duration});
        }
        return qsl::tau_qsl_closed(segments, rho0, tau, grid);
      },
      py::arg("schedule"), py::arg("rho0"), py::arg("tau"), py::arg("grid") = 129,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "tau_qsl_orthogonal",
      [](const qsl::HermitianOperator& h, const qsl::DensityMatrix& rho0, double tau,
         int grid) { return qsl::tau_qsl_orthogonal(h, rho0, tau, grid); },
      py::arg("h"), py::arg("rho0"), py::arg("tau"), py::arg("grid") = 129,
      py::call_guard<py::gil_scoped_release>(),
      "Orthogonalization-time bound for a pure initial state");

  m.def(
      "saturating_hamiltonian",
      [](const qsl::DensityMatrix& rho0, const std::vector<double>& energies) {
        return qsl::saturating_hamiltonian(rho0, qsl::EnergySpec(energies));
      },
      py::arg("rho0"), py::arg("energies"),
      "Geodesic generator for rho0 with the given target spectrum");

  m.def(
      "saturating_initial_state",
      [](const qsl::HermitianOperator& h, const std::vector<double>& lambda0) {
        return qsl::saturating_initial_state(h, lambda0);
      },
      py::arg("h"), py::arg("lambda0"),
      "State whose bound the given Hamiltonian saturates");

  m.def("orthogonal_reference_distance", &qsl::orthogonal_reference_distance,
        py::arg("n"),
        "Closed-form relabeling-maximized distance between orthogonal pure states");

  m.def("orthogonal_brute_force", &qsl::orthogonal_brute_force, py::arg("n"),
        py::call_guard<py::gil_scoped_release>(),
        "First-principles enumeration oracle for the orthogonal distance");

  m.def(
      "fourier_unitary", [](int n) { return qsl::fourier_unitary(n); }, py::arg("n"),
      "Discrete Fourier unitary");

  m.def(
      "propagator",
      [](const qsl::HermitianOperator& h, double t) { return qsl::propagator(h, t); },
      py::arg("h"), py::arg("t"), "exp(-i h t) through the spectral decomposition");

  m.def(
      "eig_hermitian",
      [](const qsl::HermitianOperator& a) {
        qsl::EigenDecomposition d = qsl::eig_hermitian(a);
        return py::make_tuple(d.values, d.vectors);
      },
      py::arg("a"), "Ascending eigenvalues and the pairing frame");

  m.def(
      "hs_inner",
      [](const qsl::HermitianOperator& a, const qsl::HermitianOperator& b) {
        return qsl::hs_inner(a, b);
      },
      py::arg("a"), py::arg("b"), "Hilbert-Schmidt inner product");

  m.def(
      "conjugate_state",
      [](const qsl::UnitaryMatrix& u, const qsl::DensityMatrix& rho) {
        return qsl::conjugate_state(u, rho);
      },
      py::arg("u"), py::arg("rho"));

  m.def(
      "conjugate_operator",
      [](const qsl::UnitaryMatrix& u, const qsl::HermitianOperator& h) {
        return qsl::conjugate_operator(u, h);
      },
      py::arg("u"), py::arg("h"));

  m.def("random_density", &qsl::random_density, py::arg("n"), py::arg("rank"),
        py::arg("seed"), "Seeded Ginibre state, reproducible everywhere");

  m.def("random_unitary", &qsl::random_unitary, py::arg("n"), py::arg("seed"),
        "Seeded Haar-like unitary, reproducible everywhere");

  m.def(
      "axiom_suite",
      [](int samples, std::uint64_t seed, std::optional<std::vector<int>> dims,
         std::optional<std::vector<double>> alphas) {
        qsl::FuzzConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        if (dims) {
          cfg.dims = std::move(*dims);
        }
        if (alphas) {
          cfg.alphas = std::move(*alphas);
        }
        return qsl::axiom_suite(cfg);
      },
      py::arg("samples") = 200, py::arg("seed") = 1, py::arg("dims") = std::nullopt,
      py::arg("alphas") = std::nullopt, py::call_guard<py::gil_scoped_release>(),
      "Fuzz the metric axioms for the scalar and framed distances");

  m.def("supplement_crosscheck", &qsl::supplement_crosscheck,
        py::call_guard<py::gil_scoped_release>(),
        "Cross-check against independently published closed forms");
}
