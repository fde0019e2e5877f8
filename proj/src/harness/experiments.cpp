// Copyright 2026 The percwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "percwalk/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "percwalk/oracles.hpp"

namespace percwalk::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_complete(const Graph& g) {
  const std::size_t n = g.node_count();
  return n >= 2 && g.edge_count() == n * (n - 1) / 2;
}

bool is_four_cycle(const Graph& g) {
  if (g.node_count() != 4 || g.edge_count() != 4) return false;
  const auto deg = g.degrees();
  return std::all_of(deg.begin(), deg.end(), [](std::size_t k) { return k == 2; });
}

void describe(Table& table, const std::string& experiment, const ExperimentSpec& spec, const Graph& g,
              const PercolationRun& run) {
  table.set_metadata("experiment", experiment);
  table.set_metadata("graph", spec.graph_spec);
  table.set_metadata("nodes", std::to_string(g.node_count()));
  table.set_metadata("edges", std::to_string(g.edge_count()));
  table.set_metadata("gamma", spec.walk.gamma);
  table.set_metadata("lambda", run.lambda);
  table.set_metadata("tau", run.tau);
  table.set_metadata("steps", std::to_string(run.steps));
  table.set_metadata("total_time", run.total_time());
  table.set_metadata("start", std::to_string(spec.initial_node));
  table.set_metadata("seed", std::to_string(run.seed));
  table.set_metadata("stride", std::to_string(spec.sample_stride));
  table.set_metadata("backend", to_string(spec.backend));
}

void maybe_write(const ExperimentSpec& spec, const Table& table) {
  if (!spec.output_path.empty()) write_csv_file(spec.output_path, table);
}

double total_time_of(const ExperimentSpec& spec) {
  if (spec.total_time) return *spec.total_time;
  return spec.resolve_run().total_time();
}

}  // namespace

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::Trajectory:
      return "trajectory";
    case Backend::Channel:
      return "channel";
    case Backend::MonteCarlo:
      return "monte_carlo";
    case Backend::Classical:
      return "classical";
  }
  return "unknown";
}

PercolationRun ExperimentSpec::resolve_run() const {
  const int given = int(tau.has_value()) + int(steps.has_value()) + int(total_time.has_value());
  if (given < 2) throw InvalidArgument("the time grid needs two of tau, steps and total time");
  if (steps && tau) {
    PercolationRun run{lambda, *tau, *steps, seed};
    run.validate();
    if (total_time && std::abs(run.total_time() - *total_time) > 1e-9 * std::max(1.0, *total_time)) {
      throw InvalidArgument("tau * steps = " + format_number(run.total_time()) + " disagrees with total time " +
                            format_number(*total_time));
    }
    return run;
  }
  if (steps) return PercolationRun::with_steps(lambda, *total_time, *steps, seed);
  return PercolationRun::with_step_size(lambda, *tau, *total_time, seed);
}

Graph ExperimentSpec::graph() const { return parse_graph_spec(graph_spec); }

void ExperimentSpec::validate() const {
  walk.validate();
  if (sample_stride == 0) throw InvalidArgument("sample stride must be positive");
  const auto g = graph();
  if (initial_node >= g.node_count()) {
    throw InvalidArgument("start node " + std::to_string(initial_node) + " out of range for " +
                          std::to_string(g.node_count()) + " nodes");
  }
  if (backend == Backend::Channel) require_enumerable(g);
}

ExperimentSpec ExperimentSpec::trajectory_lattice_defaults() {
  ExperimentSpec s;
  s.graph_spec = "lattice2d:10x10";
  s.tau = 1e-4;
  s.steps = 100000;
  s.initial_node = 44;
  s.backend = Backend::Trajectory;
  return s;
}

ExperimentSpec ExperimentSpec::channel_ring_defaults() {
  ExperimentSpec s;
  s.graph_spec = "ring:15";
  s.tau = 0.004;
  s.steps = 5000;
  s.backend = Backend::Channel;
  return s;
}

ExperimentSpec ExperimentSpec::complete_graph_defaults() {
  ExperimentSpec s;
  s.graph_spec = "complete:15";
  s.lambda = 0.3;
  s.tau = 1e-4;
  s.steps = 100000;
  s.backend = Backend::Classical;
  return s;
}

ExperimentSpec ExperimentSpec::longtime_defaults() {
  ExperimentSpec s;
  s.graph_spec = "ring:4";
  s.lambda = 0.2;
  s.total_time = 100.0;
  s.steps = 1000;
  s.backend = Backend::Channel;
  return s;
}

ExperimentSpec ExperimentSpec::monte_carlo_defaults() {
  ExperimentSpec s;
  s.graph_spec = "ring:4";
  s.lambda = 0.5;
  s.total_time = 10.0;
  s.steps = 1000;
  s.trajectories = 1000;
  s.backend = Backend::MonteCarlo;
  return s;
}

ExperimentSpec ExperimentSpec::convergence_defaults() {
  ExperimentSpec s;
  s.graph_spec = "ring:10";
  s.lambda = 0.5;
  s.total_time = 10.0;
  s.backend = Backend::Channel;
  return s;
}

ExperimentSpec ExperimentSpec::horizon_defaults() {
  ExperimentSpec s;
  s.graph_spec = "ring:5";
  s.lambda = 0.5;
  s.total_time = 10.0;
  s.backend = Backend::Channel;
  return s;
}

std::vector<double> default_lambda_sweep() { return {0.2, 0.4, 0.6, 0.8, 1.0}; }

std::filesystem::path sweep_path(const std::filesystem::path& base, double lambda) {
  auto path = base;
  path.replace_filename(base.stem().string() + "_lambda" + format_number(lambda) + base.extension().string());
  return path;
}

SeriesResult exp_trajectory_lattice(const ExperimentSpec& spec) {
  spec.validate();
  const auto g = spec.graph();
  const auto run = spec.resolve_run();
  const auto a = spec.initial_node;
  const auto oracle = rescaled_reference(g, spec.walk, run.lambda, a, a);

  SeriesResult result{Table({"t", "p_sim", "p_oracle"})};
  describe(result.table, "trajectory", spec, g, run);
  TrajectoryOptions options;
  const auto stats = run_trajectory(
      g, spec.walk, run, basis_state(g.node_count(), a), options,
      [&](std::size_t step, double t, const QuantumState& psi) {
        const double p = std::norm(psi(static_cast<Eigen::Index>(a)));
        const double o = oracle(t);
        result.max_deviation = std::max(result.max_deviation, std::abs(p - o));
        if (is_recorded(step, run.steps, spec.sample_stride)) result.table.add_row({t, p, o});
      });
  result.table.set_metadata("max_norm_drift", stats.max_norm_drift);
  result.table.set_metadata("renormalizations", std::to_string(stats.renormalizations));
  result.table.set_metadata("max_abs_deviation", result.max_deviation);
  maybe_write(spec, result.table);
  return result;
}

ChannelSeriesResult exp_channel_ring(const ExperimentSpec& spec) {
  spec.validate();
  const auto g = spec.graph();
  require_enumerable(g);
  const auto run = spec.resolve_run();
  const auto a = spec.initial_node;
  const auto oracle = rescaled_reference(g, spec.walk, run.lambda, a, a);
  ChannelOptions options;
  options.threads = spec.threads;
  const auto phi = build_step_channel(g, spec.walk, run.lambda, run.tau, options);

  ChannelSeriesResult result{Table({"t", "p_sim", "p_oracle", "trace"})};
  describe(result.table, "channel", spec, g, run);
  const auto ia = static_cast<Eigen::Index>(a);
  evolve_channel(phi, projector(basis_state(g.node_count(), a)), run.steps, 1,
                 [&](std::size_t step, double, const DensityView& rho) {
                   const double t = run.time_at(step);
                   const double p = rho(ia, ia).real();
                   const double o = oracle(t);
                   const double trace = rho.trace().real();
                   result.max_deviation = std::max(result.max_deviation, std::abs(p - o));
                   result.max_trace_error = std::max(result.max_trace_error, std::abs(trace - 1.0));
                   if (is_recorded(step, run.steps, spec.sample_stride)) result.table.add_row({t, p, o, trace});
                 });
  result.table.set_metadata("max_abs_deviation", result.max_deviation);
  result.table.set_metadata("max_trace_error", result.max_trace_error);
  maybe_write(spec, result.table);
  return result;
}

CompleteGraphResult exp_complete_graph(const ExperimentSpec& spec) {
  spec.validate();
  const auto g = spec.graph();
  const auto run = spec.resolve_run();
  const auto a = spec.initial_node;
  const auto n = g.node_count();
  const bool complete = is_complete(g);
  const auto q_oracle = complete ? complete_graph_quantum_curve(n, run.lambda)
                                 : rescaled_reference(g, spec.walk, run.lambda, a, a);
  const auto c_oracle = complete ? complete_graph_classical_curve(n, run.lambda)
                                 : rescaled_classical_reference(g, spec.walk, run.lambda, a, a);

  // Both walks draw the same mask sequence from the same seed; one cache serves both.
  PropagatorCache cache(g, spec.walk, run.tau);
  TrajectoryOptions options;
  options.cache = &cache;
  std::vector<double> q(run.steps + 1), c(run.steps + 1);
  run_trajectory(g, spec.walk, run, basis_state(n, a), options,
                 [&](std::size_t step, double, const QuantumState& psi) {
                   q[step] = std::norm(psi(static_cast<Eigen::Index>(a)));
                 });
  run_classical_trajectory(g, spec.walk, run, delta_distribution(n, a), options,
                           [&](std::size_t step, double, const ProbabilityVector& p) {
                             c[step] = p(static_cast<Eigen::Index>(a));
                           });

  CompleteGraphResult result{Table({"t", "q_sim", "q_oracle", "c_sim", "c_oracle"})};
  describe(result.table, "complete_graph", spec, g, run);
  for (std::size_t s = 0; s <= run.steps; ++s) {
    const double t = run.time_at(s);
    const double qo = q_oracle(t);
    const double co = c_oracle(t);
    result.quantum_max_deviation = std::max(result.quantum_max_deviation, std::abs(q[s] - qo));
    result.classical_max_deviation = std::max(result.classical_max_deviation, std::abs(c[s] - co));
    if (is_recorded(s, run.steps, spec.sample_stride)) result.table.add_row({t, q[s], qo, c[s], co});
  }
  result.classical_final = c.back();
  result.revival_time = kNaN;
  result.revival_probability = kNaN;
  if (complete && run.lambda > 0.0) {
    result.revival_time = 2.0 * std::numbers::pi / (static_cast<double>(n) * run.lambda);
    const double idx = std::round(result.revival_time / run.tau);
    if (idx <= static_cast<double>(run.steps)) result.revival_probability = q[static_cast<std::size_t>(idx)];
  }
  result.table.set_metadata("quantum_max_abs_deviation", result.quantum_max_deviation);
  result.table.set_metadata("classical_max_abs_deviation", result.classical_max_deviation);
  result.table.set_metadata("revival_time", result.revival_time);
  result.table.set_metadata("revival_probability", result.revival_probability);
  maybe_write(spec, result.table);
  return result;
}

LongtimeResult exp_longtime_finite_tau(const ExperimentSpec& spec, std::size_t trajectory_steps) {
  spec.validate();
  const auto g = spec.graph();
  require_enumerable(g);
  const auto run = spec.resolve_run();
  const auto a = spec.initial_node;
  const auto n = g.node_count();
  const auto ia = static_cast<Eigen::Index>(a);
  const auto oracle = rescaled_reference(g, spec.walk, run.lambda, a, a);
  const auto c_oracle =
      is_four_cycle(g) ? ring4_classical_curve(run.lambda) : rescaled_classical_reference(g, spec.walk, run.lambda, a, a);

  ChannelOptions options;
  options.threads = spec.threads;
  const auto phi = build_step_channel(g, spec.walk, run.lambda, run.tau, options);
  std::vector<double> times, p;
  evolve_channel(phi, projector(basis_state(n, a)), run.steps, 1, [&](std::size_t step, double, const DensityView& rho) {
    times.push_back(run.time_at(step));
    p.push_back(rho(ia, ia).real());
  });
  const auto classical = evolve_classical(build_classical_step_matrix(g, spec.walk, run.lambda, run.tau), run.tau,
                                          delta_distribution(n, a), run.steps, 1);

  LongtimeResult result{Table({"t", "p_channel", "p_oracle", "p_classical_channel", "p_classical_oracle",
                               "p_envelope"}),
                        Table({"t", "p_trajectory", "p_oracle"}),
                        EnvelopeFit{},
                        0.0};
  result.fit = fit_envelope(times, p, flat_limit(n));
  result.final_probability = p.back();
  describe(result.channel, "longtime", spec, g, run);
  for (std::size_t s = 0; s < times.size(); ++s) {
    if (!is_recorded(s, run.steps, spec.sample_stride)) continue;
    result.channel.add_row({times[s], p[s], oracle(times[s]), classical[s].p(ia), c_oracle(times[s]), result.fit(times[s])});
  }
  result.channel.set_metadata("fit_a", result.fit.a);
  result.channel.set_metadata("fit_b", result.fit.b);
  result.channel.set_metadata("fit_asymptote", result.fit.asymptote);
  result.channel.set_metadata("fit_residual_rms", result.fit.residual);
  result.channel.set_metadata("fit_points", std::to_string(result.fit.points));
  result.channel.set_metadata("fit_iterations", std::to_string(result.fit.iterations));
  result.channel.set_metadata("fit_converged", result.fit.converged ? "true" : "false");
  if (!result.fit.message.empty()) result.channel.set_metadata("fit_message", result.fit.message);

  const auto traj_run = PercolationRun::with_steps(run.lambda, run.total_time(), trajectory_steps, run.seed);
  describe(result.trajectory, "longtime_trajectory", spec, g, traj_run);
  TrajectoryOptions traj_options;
  run_trajectory(g, spec.walk, traj_run, basis_state(n, a), traj_options,
                 [&](std::size_t step, double t, const QuantumState& psi) {
                   if (is_recorded(step, traj_run.steps, spec.sample_stride)) {
                     result.trajectory.add_row({t, std::norm(psi(ia)), oracle(t)});
                   }
                 });

  if (!spec.output_path.empty()) {
    write_csv_file(spec.output_path, result.channel);
    auto traj_path = spec.output_path;
    traj_path.replace_filename(spec.output_path.stem().string() + "_trajectory" +
                               spec.output_path.extension().string());
    write_csv_file(traj_path, result.trajectory);
  }
  return result;
}

SeriesResult exp_monte_carlo(const ExperimentSpec& spec) {
  spec.validate();
  const auto g = spec.graph();
  const auto run = spec.resolve_run();
  const auto a = spec.initial_node;
  const auto ia = static_cast<Eigen::Index>(a);
  const auto oracle = rescaled_reference(g, spec.walk, run.lambda, a, a);
  EnsembleOptions options;
  options.threads = spec.threads;
  const auto samples = monte_carlo_channel(g, spec.walk, run, projector(basis_state(g.node_count(), a)),
                                           spec.trajectories, spec.sample_stride, options);
  SeriesResult result{Table({"t", "p_mean", "p_stderr", "p_oracle"})};
  describe(result.table, "monte_carlo", spec, g, run);
  result.table.set_metadata("trajectories", std::to_string(spec.trajectories));
  for (const auto& s : samples) {
    const double p = s.mean(ia, ia).real();
    const double o = oracle(s.time);
    result.max_deviation = std::max(result.max_deviation, std::abs(p - o));
    result.table.add_row({s.time, p, s.diagonal_std_error(ia), o});
  }
  result.table.set_metadata("max_abs_deviation", result.max_deviation);
  maybe_write(spec, result.table);
  return result;
}

ConvergenceResult exp_convergence(const ExperimentSpec& spec, std::span<const std::size_t> step_counts) {
  spec.validate();
  if (step_counts.empty()) throw InvalidArgument("convergence scan needs at least one step count");
  const auto g = spec.graph();
  require_enumerable(g);
  const double total = total_time_of(spec);
  const auto a = spec.initial_node;
  const auto ia = static_cast<Eigen::Index>(a);
  const auto oracle = rescaled_reference(g, spec.walk, spec.lambda, a, a);
  const auto rho0 = projector(basis_state(g.node_count(), a));

  ConvergenceResult result{{}, 0.0, Table({"S", "tau", "max_abs_error"})};
  std::vector<double> taus, errors;
  ChannelOptions options;
  options.threads = spec.threads;
  for (const auto steps : step_counts) {
    const auto run = PercolationRun::with_steps(spec.lambda, total, steps, spec.seed);
    const auto phi = build_step_channel(g, spec.walk, run.lambda, run.tau, options);
    double worst = 0.0;
    evolve_channel(phi, rho0, run.steps, 1, [&](std::size_t step, double, const DensityView& rho) {
      worst = std::max(worst, std::abs(rho(ia, ia).real() - oracle(run.time_at(step))));
    });
    result.points.push_back({steps, run.tau, worst});
    result.table.add_row({static_cast<double>(steps), run.tau, worst});
    taus.push_back(run.tau);
    errors.push_back(worst);
  }
  result.slope = taus.size() >= 2 ? loglog_slope(taus, errors) : kNaN;

  result.table.set_metadata("experiment", "convergence");
  result.table.set_metadata("graph", spec.graph_spec);
  result.table.set_metadata("lambda", spec.lambda);
  result.table.set_metadata("total_time", total);
  result.table.set_metadata("start", std::to_string(a));
  result.table.set_metadata("gamma", spec.walk.gamma);
  result.table.set_metadata("error_grid", "every step");
  result.table.set_metadata("loglog_slope", result.slope);
  maybe_write(spec, result.table);
  return result;
}

HorizonResult exp_epsilon_horizon(const ExperimentSpec& spec, std::span<const double> epsilons,
                                  std::span<const std::size_t> step_counts) {
  spec.validate();
  if (epsilons.empty() || step_counts.empty()) throw InvalidArgument("horizon scan needs epsilons and step counts");
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive");
  }
  const auto g = spec.graph();
  require_enumerable(g);
  const double total = total_time_of(spec);
  const auto a = spec.initial_node;
  const auto ia = static_cast<Eigen::Index>(a);
  const auto oracle = rescaled_reference(g, spec.walk, spec.lambda, a, a);
  const auto rho0 = projector(basis_state(g.node_count(), a));

  HorizonResult result{{}, Table({"S", "epsilon", "horizon"})};
  ChannelOptions options;
  options.threads = spec.threads;
  for (const auto steps : step_counts) {
    const auto run = PercolationRun::with_steps(spec.lambda, total, steps, spec.seed);
    const auto phi = build_step_channel(g, spec.walk, run.lambda, run.tau, options);
    std::vector<double> horizon(epsilons.size(), run.total_time());
    std::vector<bool> crossed(epsilons.size(), false);
    double previous_t = 0.0;
    evolve_channel(phi, rho0, run.steps, 1, [&](std::size_t step, double, const DensityView& rho) {
      const double t = run.time_at(step);
      const double o = oracle(t);
      if (o >= kRelativeErrorGuard) {
        const double rel = std::abs(rho(ia, ia).real() - o) / o;
        for (std::size_t e = 0; e < epsilons.size(); ++e) {
          if (!crossed[e] && rel >= epsilons[e]) {
            crossed[e] = true;
            horizon[e] = previous_t;
          }
        }
      }
      previous_t = t;
    });
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      result.points.push_back({steps, epsilons[e], horizon[e]});
      result.table.add_row({static_cast<double>(steps), epsilons[e], horizon[e]});
    }
  }
  result.table.set_metadata("experiment", "horizon");
  result.table.set_metadata("graph", spec.graph_spec);
  result.table.set_metadata("lambda", spec.lambda);
  result.table.set_metadata("total_time", total);
  result.table.set_metadata("start", std::to_string(a));
  result.table.set_metadata("gamma", spec.walk.gamma);
  result.table.set_metadata("error_grid", "every step");
  result.table.set_metadata("relative_error_guard",
                            "points with oracle < " + format_number(kRelativeErrorGuard) + " are skipped");
  maybe_write(spec, result.table);
  return result;
}

}  // namespace percwalk::harness
