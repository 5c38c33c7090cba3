#include "fzk/experiment.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "fzk/errors.hpp"
#include "fzk/operators.hpp"

namespace fzk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void add_into(RealField& dst, const RealField& src) {
  auto d = dst.values();
  const auto s = src.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

std::optional<SolitonSpec> single_soliton(const RunConfig& cfg) {
  if (cfg.ic.size() != 1) return std::nullopt;
  if (const auto* s = std::get_if<SolitonSpec>(&cfg.ic.front())) return *s;
  return std::nullopt;
}

std::vector<SolitonSpec> solitons_of(const RunConfig& cfg) {
  std::vector<SolitonSpec> out;
  for (const InitialTerm& term : cfg.ic) {
    if (const auto* s = std::get_if<SolitonSpec>(&term)) out.push_back(*s);
  }
  return out;
}

}  // namespace

SpectralField random_hermitian_field(const Discretization& d, std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SpectralField u(d);
  for (int k1 = 0; k1 <= d.n; ++k1) {
    for (int k2 = -d.n; k2 <= d.n; ++k2) {
      if (k1 == 0 && k2 < 0) continue;
      const double r2 = static_cast<double>(k1 * k1 + k2 * k2);
      const double mag = amp / ((1.0 + r2) * (1.0 + r2));
      const Complex c = std::polar(mag, phase(rng));
      if (k1 == 0 && k2 == 0) {
        u.at(0, 0) = Complex{c.real(), 0.0};
      } else {
        u.at(k1, k2) = c;
        u.at(-k1, -k2) = std::conj(c);
      }
    }
  }
  return u;
}

RealField sample_initial_condition(const RunConfig& cfg, const Discretization& d) {
  const int m = d.m_phys;
  RealField f(m, d.l);
  std::uint64_t random_terms = 0;
  for (const InitialTerm& term : cfg.ic) {
    std::visit(Overloaded{
                   [&](const SolitonSpec& s) { add_into(f, exact_soliton(s, 0.0, m, d.l)); },
                   [&](const CosineMode& c) {
                     for (int i1 = 0; i1 < m; ++i1) {
                       for (int i2 = 0; i2 < m; ++i2) {
                         const double arg = (c.k1 * f.coordinate(i1) + c.k2 * f.coordinate(i2)) / d.l;
                         f.at(i1, i2) += c.amp * std::cos(arg + c.phase);
                       }
                     }
                   },
                   [&](const ConstantField& c) {
                     for (double& v : f.values()) v += c.value;
                   },
                   [&](const RandomField& r) {
                     const SpectralField s = random_hermitian_field(d, cfg.seed + random_terms++, r.amp);
                     add_into(f, inverse_transform(s, m));
                   },
               },
               term);
  }
  return f;
}

RunResult run_simulation(const RunConfig& cfg, const RunOptions& options) {
  const auto setup_start = Clock::now();
  RunResult result;
  result.config = cfg;
  result.disc = build_discretization(cfg.n, cfg.l, cfg.alpha);
  const Discretization& d = result.disc;

  const RealField u0_real = sample_initial_condition(cfg, d);
  const SpectralField u0 = forward_transform(u0_real, d);
  result.dt = cfg.dt ? *cfg.dt : default_dt(d.n, u0_real);

  const DiagonalOperator lambda = linear_symbol(d);
  NonlinearWorkspace workspace(d);
  CubicQuadrature quad(d);
  result.timings["setup"] = seconds_since(setup_start);

  // Stops are landed on exactly, so plain equality identifies snapshot times.
  auto due = [&](double ts, double t) {
    return ts == t || (ts <= 0.0 && t == 0.0) || (ts >= cfg.t_final && t == cfg.t_final);
  };
  std::vector<double> pending = options.snapshot_times;
  auto observer = [&](const StepperState& s) {
    result.invariants.push_back(invariants(s.t, s.u, quad));
    if (std::erase_if(pending, [&](double ts) { return due(ts, s.t); }) > 0) {
      result.snapshots.push_back(Snapshot{s.t, s.u, inverse_transform(s.u, d.m_phys)});
    }
  };

  IntegrateOptions io;
  io.observe_every = cfg.observe_every;
  io.stops = options.snapshot_times;
  io.nonlinearity = options.nonlinearity;

  const auto run_start = Clock::now();
  result.final_state = integrate(u0, StepPolicy{result.dt, cfg.t_final}, lambda, workspace, observer, io);
  result.timings["integrate"] = seconds_since(run_start);
  return result;
}

std::vector<double> cross_section(const SpectralField& u, int m) { return LineSeries(u, 0.0).sample(m); }

ConvergenceReport convergence_study(const RunConfig& base, std::span<const int> ns) {
  if (ns.empty()) throw PreconditionError("convergence study needs at least one resolution");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] != 2 * ns[i - 1]) {
      throw NonDoublingSequence("resolution " + std::to_string(ns[i]) + " does not double " +
                                std::to_string(ns[i - 1]));
    }
  }

  ConvergenceReport report;
  const std::optional<SolitonSpec> exact = single_soliton(base);
  if (base.alpha == 2.0 && exact) {
    report.reference = ReferenceKind::exact_soliton;
    for (int n : ns) {
      RunConfig cfg = base;
      cfg.n = n;
      const RunResult run = run_simulation(cfg);
      const int m = run.disc.m_phys;
      const RealField numeric = inverse_transform(run.final_state.u, m);
      const RealField truth = exact_soliton(*exact, run.final_state.t, m, base.l);
      report.table.rows.push_back(ErrorRow{n, l2_error(numeric, truth), {}, linf_error(numeric, truth), {}});
    }
  } else {
    if (ns.size() < 2) {
      throw PreconditionError("self-convergence needs at least two resolutions");
    }
    report.reference = ReferenceKind::finest_resolution;
    RunConfig ref_cfg = base;
    ref_cfg.n = ns.back();
    const RunResult ref = run_simulation(ref_cfg);
    const int m = ref.disc.m_phys;
    const RealField truth = inverse_transform(ref.final_state.u, m);
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
      RunConfig cfg = base;
      cfg.n = ns[i];
      const RunResult run = run_simulation(cfg);
      const RealField numeric = inverse_transform(run.final_state.u, m);
      report.table.rows.push_back(
          ErrorRow{ns[i], l2_error(numeric, truth), {}, linf_error(numeric, truth), {}});
    }
  }
  report.table = observed_orders(report.table);
  return report;
}

std::vector<TemporalOrderRow> temporal_order_study(const RunConfig& cfg, std::span<const double> dts) {
  if (dts.empty()) throw PreconditionError("temporal order study needs at least one time step");
  for (std::size_t i = 1; i < dts.size(); ++i) {
    if (std::abs(dts[i] - 0.5 * dts[i - 1]) > 1e-12 * dts[i - 1]) {
      throw NonDoublingSequence("time steps must halve successively");
    }
  }
  std::vector<TemporalOrderRow> rows;
  if (dts.size() == 1) return rows;

  auto final_field = [&](double dt) {
    RunConfig c = cfg;
    c.dt = dt;
    const RunResult r = run_simulation(c);
    return inverse_transform(r.final_state.u, r.disc.m_phys);
  };
  const RealField reference = final_field(dts.back());
  for (std::size_t i = 0; i + 1 < dts.size(); ++i) {
    TemporalOrderRow row{dts[i], l2_error(final_field(dts[i]), reference), std::nullopt};
    if (!rows.empty()) row.order = std::log2(rows.back().error / row.error);
    rows.push_back(row);
  }
  return rows;
}

std::vector<InteractionRun> soliton_interaction_study(const RunConfig& cfg, std::span<const double> alphas,
                                                      std::span<const double> snapshot_times) {
  if (solitons_of(cfg).size() < 2) {
    throw PreconditionError("soliton interaction study needs at least two solitons");
  }
  RunOptions options;
  options.snapshot_times.assign(snapshot_times.begin(), snapshot_times.end());
  std::vector<InteractionRun> runs;
  for (double alpha : alphas) {
    RunConfig c = cfg;
    c.alpha = alpha;
    runs.push_back(InteractionRun{alpha, run_simulation(c, options)});
  }
  return runs;
}

double oracle_check(int nmax, int trials, std::uint64_t seed) {
  if (nmax > kOracleMaxModes) {
    throw OracleSizeExceeded("oracle check limited to N <= " + std::to_string(kOracleMaxModes));
  }
  if (nmax < 1) throw InvalidParameter("oracle check needs N >= 1");
  if (trials <= 0) return 0.0;

  std::vector<int> ns;
  for (int n = 2; n <= nmax; n *= 2) ns.push_back(n);
  if (ns.empty() || ns.back() != nmax) ns.push_back(nmax);

  double worst = 0.0;
  std::uint64_t stream = seed;
  for (int n : ns) {
    const Discretization d = build_discretization(n, 1.0, 2.0);
    NonlinearWorkspace w(d);
    for (int t = 0; t < trials; ++t) {
      const SpectralField u = random_hermitian_field(d, stream++);
      const SpectralField fast = nonlinear_term(u, w);
      const SpectralField slow = nonlinear_term_oracle(u);
      for (std::size_t i = 0; i < fast.coeffs().size(); ++i) {
        worst = std::max(worst, std::abs(fast.coeffs()[i] - slow.coeffs()[i]));
      }
    }
  }
  return worst;
}

}  // namespace fzk
