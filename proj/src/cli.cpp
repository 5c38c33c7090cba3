#include "fzk/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fzk/diagnostics.hpp"
#include "fzk/errors.hpp"
#include "fzk/experiment.hpp"
#include "fzk/io.hpp"

namespace fzk {

namespace {

namespace fs = std::filesystem;

inline constexpr double kOracleTolerance = 1e-12;

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

std::optional<SolitonSpec> lone_soliton(const RunConfig& cfg) {
  if (cfg.ic.size() == 1) {
    if (const auto* s = std::get_if<SolitonSpec>(&cfg.ic.front())) return *s;
  }
  return std::nullopt;
}

std::string cross_sections_csv(double l, int m, const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  os << "x1";
  for (const auto& name : names) os << ',' << name;
  os << '\n';
  const RealField grid(m, l);
  for (int j = 0; j < m; ++j) {
    os << format_double(grid.coordinate(j));
    for (const auto& col : columns) os << ',' << format_double(col[static_cast<std::size_t>(j)]);
    os << '\n';
  }
  return os.str();
}

void print_drift(std::ostream& out, const Drift& d) {
  out << "  relative drift: mass " << d.mass << ", momentum " << d.momentum << ", hamiltonian "
      << d.hamiltonian << '\n';
}

int cmd_run(const std::string& config_path, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const fs::path dir = prepare_out_dir(cfg);

  RunOptions options;
  options.snapshot_times = {0.0, cfg.t_final};
  const RunResult run = run_simulation(cfg, options);
  const Drift drift = conservation_drift(run.invariants);
  const Discretization& d = run.disc;

  RunManifest manifest{"run", cfg, run.timings, drift, {}};
  write_invariants(dir / "invariants.csv", run.invariants);
  manifest.files.emplace_back("invariants.csv");

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const Snapshot& s = run.snapshots[i];
    const std::string name = "snapshot_" + std::to_string(i) + ".fzks";
    write_snapshot(dir / name, s.field, SnapshotMeta{static_cast<std::uint32_t>(d.n), d.alpha, s.t});
    manifest.files.emplace_back(name);
    names.push_back("t=" + short_number(s.t));
    columns.push_back(cross_section(s.u, d.m_phys));
  }
  write_file_atomic(dir / "cross_section.csv", cross_sections_csv(d.l, d.m_phys, names, columns));
  manifest.files.emplace_back("cross_section.csv");

  out << "run: N = " << d.n << ", L = " << d.l << ", alpha = " << d.alpha << ", grid " << d.m_phys
      << " (padded " << d.m_pad << ")\n"
      << "  dt = " << run.dt << ", T = " << run.final_state.t << ", integrate " << run.timings.at("integrate")
      << " s\n";
  for (const auto& w : d.warnings) out << "  warning: " << w << '\n';
  print_drift(out, drift);

  if (const auto s = lone_soliton(cfg); s && d.alpha == 2.0) {
    const RealField numeric = inverse_transform(run.final_state.u, d.m_phys);
    const RealField truth = exact_soliton(*s, run.final_state.t, d.m_phys, d.l);
    out << "  error vs exact soliton: L2 " << l2_error(numeric, truth) << ", Linf "
        << linf_error(numeric, truth) << '\n';
  }

  write_manifest(dir / "manifest.json", manifest);
  out << "  artifacts in " << dir.string() << '\n';
  return kExitOk;
}

int cmd_converge(const std::string& config_path, const std::vector<int>& ns, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const fs::path dir = prepare_out_dir(cfg);

  const auto start = std::chrono::steady_clock::now();
  const ConvergenceReport report = convergence_study(cfg, ns);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_error_table(dir / "error_table.csv", report.table);
  write_manifest(dir / "manifest.json",
                 RunManifest{"converge", cfg, {{"study", elapsed}}, std::nullopt, {"error_table.csv"}});

  out << "converge: reference = "
      << (report.reference == ReferenceKind::exact_soliton ? "exact soliton" : "finest resolution") << '\n';
  out << std::setw(6) << "N" << std::setw(14) << "L2 error" << std::setw(9) << "order" << std::setw(14)
      << "Linf error" << std::setw(9) << "order" << '\n';
  bool finite = true;
  for (const ErrorRow& r : report.table.rows) {
    auto order = [](const std::optional<double>& o) { return o ? short_number(*o) : std::string("-"); };
    out << std::setw(6) << r.n << std::setw(14) << r.l2_error << std::setw(9) << order(r.l2_order)
        << std::setw(14) << r.linf_error << std::setw(9) << order(r.linf_order) << '\n';
    finite = finite && std::isfinite(r.l2_error) && std::isfinite(r.linf_error);
  }
  return finite ? kExitOk : kExitNumerical;
}

int cmd_temporal(const std::string& config_path, const std::vector<double>& dts, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const fs::path dir = prepare_out_dir(cfg);

  const auto rows = temporal_order_study(cfg, dts);
  write_file_atomic(dir / "temporal_order.csv", temporal_order_csv(rows));
  write_manifest(dir / "manifest.json",
                 RunManifest{"temporal-order", cfg, {}, std::nullopt, {"temporal_order.csv"}});

  out << "temporal-order: reference dt = " << dts.back() << '\n';
  for (const auto& r : rows) {
    out << "  dt " << r.dt << "  error " << r.error;
    if (r.order) out << "  order " << *r.order;
    out << '\n';
  }
  return kExitOk;
}

int cmd_solitons(const std::string& config_path, bool full, const std::vector<double>& alphas,
                 std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  if (full) {
    cfg.n = 512;
    cfg.t_final = 60.0;
  }
  const fs::path dir = prepare_out_dir(cfg);
  const std::vector<double> times{0.0, 0.5 * cfg.t_final, cfg.t_final};

  const auto runs = soliton_interaction_study(cfg, alphas, times);

  RunManifest manifest{"solitons", cfg, {}, std::nullopt, {}};
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  int m = 0;
  for (const InteractionRun& r : runs) {
    const Discretization& d = r.result.disc;
    m = d.m_phys;
    const std::string tag = "alpha_" + short_number(r.alpha);
    fs::create_directories(dir / tag);
    write_invariants(dir / tag / "invariants.csv", r.result.invariants);
    manifest.files.push_back(fs::path(tag) / "invariants.csv");
    for (std::size_t i = 0; i < r.result.snapshots.size(); ++i) {
      const Snapshot& s = r.result.snapshots[i];
      const fs::path name = fs::path(tag) / ("snapshot_" + std::to_string(i) + ".fzks");
      write_snapshot(dir / name, s.field, SnapshotMeta{static_cast<std::uint32_t>(d.n), d.alpha, s.t});
      manifest.files.push_back(name);
      names.push_back("alpha=" + short_number(r.alpha) + " t=" + short_number(s.t));
      columns.push_back(cross_section(s.u, m));
    }
    for (const auto& [phase, secs] : r.result.timings) manifest.timings[tag + "." + phase] = secs;

    const Drift drift = conservation_drift(r.result.invariants);
    out << "alpha = " << r.alpha << " (dt = " << r.result.dt << ", " << r.result.timings.at("integrate")
        << " s)\n";
    print_drift(out, drift);
    for (const Snapshot& s : r.result.snapshots) {
      const auto peaks = find_peaks(LineSeries(s.u, 0.0), m, 0.05);
      out << "  t = " << s.t << " peaks:";
      for (std::size_t k = 0; k < std::min<std::size_t>(peaks.size(), 3); ++k) {
        out << "  x1 = " << peaks[k].x1 << " (u = " << peaks[k].value << ")";
      }
      out << '\n';
    }
  }
  if (m > 0) {
    write_file_atomic(dir / "cross_sections.csv", cross_sections_csv(cfg.l, m, names, columns));
    manifest.files.emplace_back("cross_sections.csv");
  }
  write_manifest(dir / "manifest.json", manifest);
  return kExitOk;
}

int cmd_oracle(int nmax, int trials, std::uint64_t seed, std::ostream& out) {
  const double worst = oracle_check(nmax, trials, seed);
  const bool ok = worst <= kOracleTolerance;
  out << "oracle-check: N <= " << nmax << ", " << trials << " trials, max |fast - oracle| = " << worst << " ("
      << (ok ? "ok" : "FAIL") << ", tolerance " << kOracleTolerance << ")\n";
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-Galerkin solver for the fractional Zakharov-Kuznetsov equation", "fzk"};
  app.require_subcommand(1);

  std::string config;
  std::vector<int> ns;
  std::vector<double> dts;
  std::vector<double> alphas = kInteractionAlphas;
  bool full = false;
  int nmax = 8;
  int trials = 100;
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "integrate one configuration");
  run->add_option("config", config, "configuration file")->required();

  auto* converge = app.add_subcommand("converge", "spatial convergence study");
  converge->add_option("config", config, "configuration file")->required();
  converge->add_option("--ns", ns, "resolutions, each double the previous")->delimiter(',')->required();

  auto* temporal = app.add_subcommand("temporal-order", "temporal self-convergence study");
  temporal->add_option("config", config, "configuration file")->required();
  temporal->add_option("--dts", dts, "time steps, each half the previous")->delimiter(',')->required();

  auto* solitons = app.add_subcommand("solitons", "multi-soliton runs across fractional orders");
  solitons->add_option("config", config, "configuration file")->required();
  solitons->add_flag("--full", full, "use N = 512, T = 60");
  solitons->add_option("--alphas", alphas, "fractional orders")->delimiter(',');

  auto* oracle = app.add_subcommand("oracle-check", "compare the FFT product against brute force");
  oracle->add_option("--nmax", nmax, "largest mode cutoff (<= 16)");
  oracle->add_option("--trials", trials, "random fields per resolution");
  oracle->add_option("--seed", seed, "RNG seed");

  std::vector<const char*> argv{"fzk"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) return cmd_run(config, out);
    if (*converge) return cmd_converge(config, ns, out);
    if (*temporal) return cmd_temporal(config, dts, out);
    if (*solitons) return cmd_solitons(config, full, alphas, out);
    if (*oracle) return cmd_oracle(nmax, trials, seed, out);
  } catch (const NanDetected& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ParseError& e) {
    err << config << ":" << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitValidation;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace fzk
