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

#include "percwalk/harness/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "percwalk/errors.hpp"
#include "percwalk/harness/experiments.hpp"
#include "percwalk/oracles.hpp"

namespace percwalk::harness {

namespace {

struct Flags {
  std::string graph;
  std::vector<double> lambdas;
  double tau = 0.0;
  std::size_t steps = 0;
  double time = 0.0;
  NodeIndex start = 0;
  std::optional<NodeIndex> target;
  std::uint64_t seed = 1;
  std::size_t stride = 1;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  double gamma = 1.0;
  std::size_t trajectories = 1000;
  std::size_t trajectory_steps = 3000;
  std::string which = "rescaled";
  std::vector<double> epsilons;
  std::vector<std::size_t> scan_steps;
};

struct Given {
  CLI::Option* graph = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* steps = nullptr;
  CLI::Option* time = nullptr;
  CLI::Option* start = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* stride = nullptr;
  CLI::Option* gamma = nullptr;
};

Given add_common(CLI::App& app, Flags& f) {
  Given g;
  app.set_config("--config", "", "key=value file; command-line flags override it");
  g.graph = app.add_option("--graph", f.graph, "ring:N, lattice2d:WxH, complete:N or file:PATH");
  g.lambda = app.add_option("--lambda", f.lambdas, "edge-keep probability; a comma list runs a sweep")
                 ->delimiter(',');
  g.tau = app.add_option("--tau", f.tau, "step size");
  g.steps = app.add_option("--steps", f.steps, "number of steps");
  g.time = app.add_option("--time", f.time, "total time");
  g.start = app.add_option("--start", f.start, "initial node (0-based)");
  g.seed = app.add_option("--seed", f.seed, "random seed");
  g.stride = app.add_option("--stride", f.stride, "emit every k-th step")->check(CLI::PositiveNumber);
  g.gamma = app.add_option("--gamma", f.gamma, "hopping rate");
  app.add_option("--out", f.out, "output CSV path (stdout if omitted)");
  app.add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv"}));
  return g;
}

struct Extra {
  CLI::Option* option;
  std::vector<const CLI::App*> allowed;
};

/// Rejects subcommand-specific flags passed to a subcommand that does not take them.
void check_extras(const std::vector<Extra>& extras, const CLI::App* chosen) {
  for (const auto& extra : extras) {
    if (extra.option->count() == 0) continue;
    if (std::find(extra.allowed.begin(), extra.allowed.end(), chosen) == extra.allowed.end()) {
      throw CLI::ExtrasError(chosen->get_name() + " does not take " + extra.option->get_name(),
                             CLI::ExitCodes::ExtrasError);
    }
  }
}

/// Overlays the user's time-grid flags on the defaults. A single user flag
/// keeps the total time (or the step count, when the user gave the time).
void apply_time_grid(ExperimentSpec& spec, const Flags& f, const Given& g) {
  const bool tau = g.tau->count() > 0;
  const bool steps = g.steps->count() > 0;
  const bool time = g.time->count() > 0;
  const int given = int(tau) + int(steps) + int(time);
  if (given == 0) return;
  if (given >= 2) {
    spec.tau.reset();
    spec.steps.reset();
    spec.total_time.reset();
  } else if (time) {
    if (spec.steps) spec.tau.reset();
  } else {
    if (!spec.total_time && spec.tau && spec.steps) spec.total_time = spec.resolve_run().total_time();
    if (tau && spec.total_time) spec.steps.reset();
    if (steps && spec.total_time) spec.tau.reset();
  }
  if (tau) spec.tau = f.tau;
  if (steps) spec.steps = f.steps;
  if (time) spec.total_time = f.time;
}

void apply_common(ExperimentSpec& spec, const Flags& f, const Given& g) {
  if (g.graph->count()) spec.graph_spec = f.graph;
  if (g.start->count()) spec.initial_node = f.start;
  if (g.seed->count()) spec.seed = f.seed;
  if (g.stride->count()) spec.sample_stride = f.stride;
  if (g.gamma->count()) spec.walk.gamma = f.gamma;
  spec.threads = f.threads;
  spec.trajectories = f.trajectories;
  apply_time_grid(spec, f, g);
}

std::vector<double> lambdas_for(const ExperimentSpec& spec, const Flags& f, const Given& g, bool sweep_by_default) {
  if (g.lambda->count()) return f.lambdas;
  if (sweep_by_default) return default_lambda_sweep();
  return {spec.lambda};
}

/// Runs `run_point` once per lambda. Sweeps need --out and write one file per point.
template <typename Run>
void for_each_lambda(ExperimentSpec spec, const std::vector<double>& lambdas, const Flags& f, std::ostream& out,
                     Run run_point) {
  if (lambdas.empty()) throw InvalidArgument("no lambda given");
  if (lambdas.size() > 1 && f.out.empty()) {
    throw InvalidArgument("a sweep over " + std::to_string(lambdas.size()) +
                          " lambda values writes one file per value; pass --out");
  }
  for (double lambda : lambdas) {
    spec.lambda = lambda;
    spec.output_path = f.out.empty() ? std::filesystem::path{}
                       : lambdas.size() > 1 ? sweep_path(f.out, lambda)
                                            : std::filesystem::path(f.out);
    const Table table = run_point(spec);
    if (f.out.empty()) write_csv(out, table);
  }
}

Table oracle_table(const ExperimentSpec& spec, const Flags& f) {
  const auto g = spec.graph();
  const auto run = spec.resolve_run();
  require_probability(spec.lambda);
  const NodeIndex a = spec.initial_node;
  const NodeIndex b = f.target.value_or(a);
  if (a >= g.node_count() || b >= g.node_count()) throw InvalidArgument("oracle node out of range");
  const std::size_t n = g.node_count();

  OracleCurve curve;
  if (f.which == "rescaled") {
    curve = rescaled_reference(g, spec.walk, spec.lambda, a, b);
  } else if (f.which == "complete-q") {
    curve = complete_graph_quantum_curve(n, spec.lambda);
  } else if (f.which == "complete-c") {
    curve = complete_graph_classical_curve(n, spec.lambda);
  } else if (f.which == "ring4-c") {
    curve = ring4_classical_curve(spec.lambda);
  } else {
    curve = flat_curve(n);
  }

  Table table({"t", "p"});
  table.set_metadata("experiment", "oracle");
  table.set_metadata("which", f.which);
  table.set_metadata("label", curve.label);
  table.set_metadata("graph", spec.graph_spec);
  table.set_metadata("nodes", std::to_string(n));
  table.set_metadata("gamma", spec.walk.gamma);
  table.set_metadata("lambda", spec.lambda);
  table.set_metadata("tau", run.tau);
  table.set_metadata("steps", std::to_string(run.steps));
  table.set_metadata("total_time", run.total_time());
  table.set_metadata("start", std::to_string(a));
  table.set_metadata("target", std::to_string(b));
  table.set_metadata("stride", std::to_string(spec.sample_stride));
  for (std::size_t s = 0; s <= run.steps; ++s) {
    if (!is_recorded(s, run.steps, spec.sample_stride)) continue;
    const double t = run.time_at(s);
    table.add_row({t, curve(t)});
  }
  return table;
}

std::vector<std::size_t> default_convergence_steps() { return {250, 500, 1000, 2000, 4000}; }
std::vector<std::size_t> default_horizon_steps() {
  return {500, 1000, 2000, 4000, 8000, 16000, 32000, 64000, 128000, 256000, 512000};
}
std::vector<double> default_epsilons() { return {0.02, 0.05, 0.1}; }

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Percolated continuous-time quantum walk simulator", "percwalk"};
  app.require_subcommand(1, 1);
  Flags f;
  const Given g = add_common(app, f);

  auto sub = [&](const char* name, const char* description) {
    auto* s = app.add_subcommand(name, description);
    s->fallthrough();
    return s;
  };
  auto* trajectory = sub("trajectory", "single quantum trajectory against the rescaled reference");
  auto* channel = sub("channel", "exact averaged channel against the rescaled reference");
  auto* montecarlo = sub("montecarlo", "trajectory-averaged density matrix");
  auto* classical = sub("classical", "quantum and classical walk on one mask sequence");
  auto* oracle = sub("oracle", "closed-form and spectral reference curves");
  auto* convergence = sub("convergence", "channel error against step count at fixed total time");
  auto* horizon = sub("horizon", "time until the relative error first reaches epsilon");
  auto* envelope = sub("envelope", "long-time channel at finite step size with envelope fit");

  std::vector<Extra> extras{
      {app.add_option("--threads", f.threads, "worker threads (0 = hardware concurrency)"),
       {channel, montecarlo, convergence, horizon, envelope}},
      {app.add_option("--trajectories", f.trajectories, "montecarlo: number of trajectories")
           ->check(CLI::PositiveNumber),
       {montecarlo}},
      {app.add_option("--which", f.which, "oracle: reference curve")
           ->check(CLI::IsMember({"rescaled", "complete-q", "complete-c", "ring4-c", "flat"})),
       {oracle}},
      {app.add_option("--target", f.target, "oracle: target node for --which rescaled (default: --start)"),
       {oracle}},
      {app.add_option("--scan-steps", f.scan_steps, "convergence/horizon: comma list of step counts")
           ->delimiter(','),
       {convergence, horizon}},
      {app.add_option("--epsilon", f.epsilons, "horizon: comma list of relative-error thresholds")->delimiter(','),
       {horizon}},
      {app.add_option("--trajectory-steps", f.trajectory_steps, "envelope: steps of the companion trajectory")
           ->check(CLI::PositiveNumber),
       {envelope}},
  };

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    check_extras(extras, app.get_subcommands().front());
  } catch (const CLI::FileError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (trajectory->parsed()) {
      auto spec = ExperimentSpec::trajectory_lattice_defaults();
      apply_common(spec, f, g);
      for_each_lambda(spec, lambdas_for(spec, f, g, true), f, out,
                      [](const ExperimentSpec& s) { return exp_trajectory_lattice(s).table; });
    } else if (channel->parsed()) {
      auto spec = ExperimentSpec::channel_ring_defaults();
      apply_common(spec, f, g);
      for_each_lambda(spec, lambdas_for(spec, f, g, true), f, out,
                      [](const ExperimentSpec& s) { return exp_channel_ring(s).table; });
    } else if (montecarlo->parsed()) {
      auto spec = ExperimentSpec::monte_carlo_defaults();
      apply_common(spec, f, g);
      for_each_lambda(spec, lambdas_for(spec, f, g, false), f, out,
                      [](const ExperimentSpec& s) { return exp_monte_carlo(s).table; });
    } else if (classical->parsed()) {
      auto spec = ExperimentSpec::complete_graph_defaults();
      apply_common(spec, f, g);
      for_each_lambda(spec, lambdas_for(spec, f, g, false), f, out,
                      [](const ExperimentSpec& s) { return exp_complete_graph(s).table; });
    } else if (oracle->parsed()) {
      auto spec = ExperimentSpec::channel_ring_defaults();
      spec.lambda = 0.5;
      apply_common(spec, f, g);
      for_each_lambda(spec, lambdas_for(spec, f, g, false), f, out, [&](const ExperimentSpec& s) {
        auto table = oracle_table(s, f);
        if (!s.output_path.empty()) write_csv_file(s.output_path, table);
        return table;
      });
    } else if (convergence->parsed()) {
      auto spec = ExperimentSpec::convergence_defaults();
      apply_common(spec, f, g);
      const auto steps = f.scan_steps.empty() ? default_convergence_steps() : f.scan_steps;
      for_each_lambda(spec, lambdas_for(spec, f, g, false), f, out,
                      [&](const ExperimentSpec& s) { return exp_convergence(s, steps).table; });
    } else if (horizon->parsed()) {
      auto spec = ExperimentSpec::horizon_defaults();
      apply_common(spec, f, g);
      const auto steps = f.scan_steps.empty() ? default_horizon_steps() : f.scan_steps;
      const auto eps = f.epsilons.empty() ? default_epsilons() : f.epsilons;
      for_each_lambda(spec, lambdas_for(spec, f, g, false), f, out,
                      [&](const ExperimentSpec& s) { return exp_epsilon_horizon(s, eps, steps).table; });
    } else if (envelope->parsed()) {
      auto spec = ExperimentSpec::longtime_defaults();
      apply_common(spec, f, g);
      for_each_lambda(spec, lambdas_for(spec, f, g, false), f, out, [&](const ExperimentSpec& s) {
        auto result = exp_longtime_finite_tau(s, f.trajectory_steps);
        if (!result.fit.converged) err << "warning: envelope fit: " << result.fit.message << '\n';
        return result.channel;
      });
    }
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace percwalk::harness
