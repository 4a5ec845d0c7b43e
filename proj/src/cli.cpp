#include "qsl/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsl/experiments.hpp"
#include "qsl/matrix_io.hpp"
#include "qsl/qslbounds.hpp"
#include "qsl/stategeom.hpp"
#include "qsl/svg.hpp"
#include "qsl/verify.hpp"

namespace qsl {

namespace {

std::string num(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", v);
  return buffer;
}

// A --quick sweep keeps every tenth point (endpoints included), so midpoints
// of symmetric sweeps survive.
int quick_sweep(int sweep) { return (sweep - 1) / 10 + 1; }

int resolve_sweep(int grid_flag, bool quick, int default_sweep) {
  if (grid_flag < 0) throw std::invalid_argument("--grid must be positive");
  if (grid_flag > 0) return grid_flag;
  return quick ? quick_sweep(default_sweep) : default_sweep;
}

std::string svg_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() >= suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".svg";
  }
  return csv_path + ".svg";
}

struct ChartSpec {
  std::string title;
  std::string y_label;
  int x_column = 0;
  std::vector<int> y_columns;
};

int emit_table(const CsvTable& table, const std::string& path, bool with_svg,
               const ChartSpec& chart) {
  write_text_file(path, to_csv(table));
  std::cout << "wrote " << path << "\n";
  if (with_svg) {
    std::vector<SvgSeries> series;
    series.reserve(chart.y_columns.size());
    for (const int column : chart.y_columns) {
      SvgSeries s;
      s.label = table.columns[size_t(column)];
      s.x.reserve(table.rows.size());
      s.y.reserve(table.rows.size());
      for (const std::vector<double>& row : table.rows) {
        s.x.push_back(row[size_t(chart.x_column)]);
        s.y.push_back(row[size_t(column)]);
      }
      series.push_back(std::move(s));
    }
    const std::string path_svg = svg_path_for(path);
    write_text_file(path_svg,
                    line_chart_svg(chart.title, table.columns[size_t(chart.x_column)],
                                   chart.y_label, series));
    std::cout << "wrote " << path_svg << "\n";
  }
  if (table.unconverged > 0) {
    std::cerr << "error: " << table.unconverged
              << " quadratures hit the refinement cap; results written but suspect\n";
    return 3;
  }
  return 0;
}

void require_hermitian_entries(const ComplexMatrix& m, int index,
                               const std::string& source) {
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = i; j < m.dim(); ++j) {
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > 1e-9) {
        throw std::invalid_argument(
            source + ": matrix " + std::to_string(index + 1) + " entry (" +
            std::to_string(i) + ", " + std::to_string(j) + ") = " +
            format_complex(m.at(i, j)) + " is not the conjugate of entry (" +
            std::to_string(j) + ", " + std::to_string(i) + ") = " +
            format_complex(m.at(j, i)));
      }
    }
  }
}

std::string distance_report(const std::string& path, std::optional<double> alpha_flag) {
  const std::vector<ComplexMatrix> matrices = read_matrix_file(path);
  if (matrices.size() != 2) {
    throw std::invalid_argument(path + ": expected exactly 2 matrices, found " +
                                std::to_string(matrices.size()));
  }
  require_hermitian_entries(matrices[0], 0, path);
  require_hermitian_entries(matrices[1], 1, path);
  if (matrices[0].dim() != matrices[1].dim()) {
    throw std::invalid_argument(path + ": matrices have different dimensions " +
                                std::to_string(matrices[0].dim()) + " and " +
                                std::to_string(matrices[1].dim()));
  }

  const DensityMatrix a(matrices[0]);
  const DensityMatrix b(matrices[1]);
  const int n = a.dim();

  double alpha_scalar;
  if (alpha_flag) {
    alpha_scalar = *alpha_flag;
  } else {
    alpha_scalar = std::max(a.purity(), b.purity());
    if (alpha_scalar <= 1.0 / double(n) + 1e-12) alpha_scalar = 1.0;
  }
  const double scalar = distance_alpha(a, b, AlphaValue(alpha_scalar, n));

  const ProjectiveFamily fam_a(a);
  const ProjectiveFamily fam_b(b);
  const AlphaAssignment alphas = default_alphas(fam_a, fam_b);
  const double framed = framed_distance(fam_a, fam_b, alphas);
  const PermutedDistance permuted = permuted_distance(fam_a, fam_b, alphas);

  std::string out;
  out += "dim = " + std::to_string(n) + "\n";
  out += "alpha = " + num(alpha_scalar) + (alpha_flag ? " (explicit)\n" : " (max purity)\n");
  out += "distance_alpha = " + num(scalar) + "\n";
  out += "framed_distance = " + num(framed) + "\n";
  out += "permuted_distance = " + num(permuted.radians) + "\n";
  out += "permutation =";
  for (const int p : permuted.permutation) out += " " + std::to_string(p);
  out += "\n";
  out += "pair alphas:\n";
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out += "  alpha[" + std::to_string(i) + "][" + std::to_string(j) + "] = " +
             num(alphas.at(i, j)) + "\n";
    }
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"quantum speed limits from a projective state metric"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a 'key = value' file; flags override");

  std::uint64_t seed = 1;
  int grid = 0;
  std::string out;
  std::string format = "csv";
  bool quick = false;
  app.add_option("--seed", seed, "Master seed for randomized checks")->capture_default_str();
  app.add_option("--grid", grid, "Sweep points (0 = per-command default)")
      ->capture_default_str();
  app.add_option("--out", out, "Output path (default <command>.csv; report commands print "
                               "to stdout and copy here when set)");
  app.add_option("--format", format, "Output format for sweep commands")
      ->check(CLI::IsMember({"csv", "csv+svg"}))
      ->capture_default_str();
  app.add_flag("--quick", quick, "Thin the sweeps and sample counts for a fast pass");

  Fig1Params fig1;
  CLI::App* fig1_cmd = app.add_subcommand(
      "fig1", "Saturation sweep: closed unitary bound for the gap-optimized and "
              "fixed band Hamiltonians");
  fig1_cmd->add_option("--em", fig1.em, "Band energy scale")->capture_default_str();
  fig1_cmd->add_option("--mu", fig1.mu, "Middle level fraction")->capture_default_str();
  fig1_cmd->add_option("--omega", fig1.omega, "0-2 coupling")->capture_default_str();
  fig1_cmd->add_option("--tau-min", fig1.tau_min, "Smallest horizon")->capture_default_str();
  fig1_cmd->add_option("--tau-max", fig1.tau_max, "Largest horizon")->capture_default_str();

  DampingSweepParams fig2;
  CLI::App* fig2_cmd = app.add_subcommand(
      "fig2", "Amplitude damping population sweep under the frame-resolved bound");
  fig2_cmd->add_option("--lambda0", fig2.lambda0, "Ground population")->capture_default_str();
  fig2_cmd->add_option("--gamma", fig2.gamma, "Damping rate")->capture_default_str();
  fig2_cmd->add_option("--tau", fig2.tau, "Horizon")->capture_default_str();
  fig2_cmd->add_option("--lambda1", fig2.lambda1, "Pin the sweep to one point");
  fig2_cmd->add_option("--lambda2", fig2.lambda2, "Pin the sweep to one point");

  NonmarkovParams nonmarkov;
  CLI::App* nonmarkov_cmd = app.add_subcommand(
      "nonmarkov", "Ohmic damping of the uniform state: rate sign flip against the bound");
  nonmarkov_cmd->add_option("--cutoff", nonmarkov.cutoff, "Spectral cutoff")
      ->capture_default_str();
  nonmarkov_cmd->add_option("--ohmicity", nonmarkov.ohmicity, "Spectral exponent")
      ->capture_default_str();
  nonmarkov_cmd->add_option("--tau-min", nonmarkov.tau_min, "Smallest horizon")
      ->capture_default_str();
  nonmarkov_cmd->add_option("--tau-max", nonmarkov.tau_max, "Largest horizon")
      ->capture_default_str();

  std::string dynamics;
  DampingSweepParams amplitude;
  DephasingSweepParams dephasing;
  UnitarySweepParams unitary;
  CLI::App* tau_alpha_cmd = app.add_subcommand(
      "tau-alpha", "Whole-state bound across the damping, dephasing, and unitary studies");
  tau_alpha_cmd->add_option("--dynamics", dynamics, "Which family to sweep")
      ->required()
      ->check(CLI::IsMember({"amplitude", "dephasing", "unitary"}));
  tau_alpha_cmd->add_option("--lambda0", amplitude.lambda0, "Ground population")
      ->capture_default_str();
  tau_alpha_cmd->add_option("--gamma", amplitude.gamma, "Decay or dephasing rate")
      ->capture_default_str();
  tau_alpha_cmd->add_option("--tau", amplitude.tau, "Horizon")->capture_default_str();
  tau_alpha_cmd->add_option("--lambda1", amplitude.lambda1,
                            "Pin the amplitude sweep to one point");
  tau_alpha_cmd->add_option("--lambda2", amplitude.lambda2,
                            "Pin the amplitude sweep to one point");
  tau_alpha_cmd->add_option("--lambda20", dephasing.lambda20,
                            "Explicit 0-2 coherence for the dephasing sweep");
  tau_alpha_cmd->add_option("--em", unitary.em, "Band energy scale")->capture_default_str();
  tau_alpha_cmd->add_option("--mu", unitary.mu, "Middle level fraction")
      ->capture_default_str();
  tau_alpha_cmd->add_option("--omega", unitary.omega, "0-2 coupling")->capture_default_str();
  tau_alpha_cmd->add_option("--tau-min", unitary.tau_min, "Smallest horizon")
      ->capture_default_str();
  tau_alpha_cmd->add_option("--tau-max", unitary.tau_max, "Largest horizon")
      ->capture_default_str();

  std::string distance_in;
  std::optional<double> distance_alpha_flag;
  CLI::App* distance_cmd = app.add_subcommand(
      "distance", "Scalar, framed, and relabeling-maximized distances between two states");
  distance_cmd->add_option("--in", distance_in, "File holding two '# dim N' matrices")
      ->required();
  distance_cmd->add_option("--alpha", distance_alpha_flag,
                           "Scalar alpha (default: larger purity, 1 at the floor)");

  int verify_samples = 0;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Metric axioms, published closed forms, and the speed oracle");
  verify_cmd->add_option("--samples", verify_samples,
                         "Fuzz cases per dimension (0 = 200, or 20 with --quick)");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(fig1_cmd)) {
      fig1.sweep = resolve_sweep(grid, quick, fig1.sweep);
      if (quick) fig1.quad_grid = 65;
      const std::string path = out.empty() ? "fig1.csv" : out;
      return emit_table(run_fig1(fig1), path, format == "csv+svg",
                        {"bound saturation under the closed unitary form", "bound / tau",
                         0, {2, 4}});
    }
    if (app.got_subcommand(fig2_cmd)) {
      fig2.sweep = resolve_sweep(grid, quick, fig2.sweep);
      if (quick) fig2.quad_grid = 65;
      const std::string path = out.empty() ? "fig2.csv" : out;
      return emit_table(run_fig2(fig2), path, format == "csv+svg",
                        {"amplitude damping, frame-resolved bound", "bound / tau", 0, {2}});
    }
    if (app.got_subcommand(nonmarkov_cmd)) {
      nonmarkov.sweep = resolve_sweep(grid, quick, nonmarkov.sweep);
      if (quick) nonmarkov.quad_grid = 65;
      const std::string path = out.empty() ? "nonmarkov.csv" : out;
      return emit_table(run_nonmarkov(nonmarkov), path, format == "csv+svg",
                        {"ohmic damping: rate and bound ratio", "value", 0, {1, 2}});
    }
    if (app.got_subcommand(tau_alpha_cmd)) {
      const bool svg = format == "csv+svg";
      const std::string path =
          out.empty() ? "tau-alpha-" + dynamics + ".csv" : out;
      if (dynamics == "amplitude") {
        if (tau_alpha_cmd->count("--lambda20") > 0) {
          throw std::invalid_argument("--lambda20 applies to --dynamics dephasing only");
        }
        amplitude.sweep = resolve_sweep(grid, quick, amplitude.sweep);
        if (quick) amplitude.quad_grid = 65;
        return emit_table(run_damping_tau_alpha(amplitude), path, svg,
                          {"amplitude damping, whole-state bound", "bound / tau", 0, {2}});
      }
      if (dynamics == "dephasing") {
        if (tau_alpha_cmd->count("--lambda1") > 0 || tau_alpha_cmd->count("--lambda2") > 0) {
          throw std::invalid_argument(
              "--lambda1/--lambda2 apply to --dynamics amplitude only");
        }
        dephasing.lambda0 = amplitude.lambda0;
        dephasing.gamma = amplitude.gamma;
        dephasing.tau = amplitude.tau;
        dephasing.sweep = resolve_sweep(grid, quick, dephasing.sweep);
        if (quick) dephasing.quad_grid = 65;
        return emit_table(run_dephasing_tau_alpha(dephasing), path, svg,
                          {"dephasing, whole-state bound", "bound / tau", 0, {2}});
      }
      unitary.sweep = resolve_sweep(grid, quick, unitary.sweep);
      if (quick) unitary.quad_grid = 65;
      return emit_table(run_unitary_tau_alpha(unitary), path, svg,
                        {"unitary sweep, whole-state bound", "bound / tau", 0, {1, 2}});
    }
    if (app.got_subcommand(distance_cmd)) {
      const std::string report = distance_report(distance_in, distance_alpha_flag);
      std::cout << report;
      if (!out.empty()) write_text_file(out, report);
      return 0;
    }

    FuzzConfig cfg;
    cfg.seed = seed;
    cfg.samples = verify_samples > 0 ? verify_samples : (quick ? 20 : 200);
    std::vector<CheckReport> reports = axiom_suite(cfg);
    const std::vector<CheckReport> published = supplement_crosscheck();
    reports.insert(reports.end(), published.begin(), published.end());
    reports.push_back(speed_oracle_check(seed, quick ? 12 : 60));
    const std::string text = to_lines(reports);
    std::cout << text;
    if (!out.empty()) write_text_file(out, text);
    const bool all_pass = std::all_of(reports.begin(), reports.end(),
                                      [](const CheckReport& r) { return r.pass; });
    return all_pass ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qsl
