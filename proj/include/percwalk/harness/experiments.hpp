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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "percwalk/dynamics.hpp"
#include "percwalk/graph.hpp"
#include "percwalk/harness/envelope.hpp"
#include "percwalk/harness/table.hpp"
#include "percwalk/walk.hpp"

namespace percwalk::harness {

enum class Backend { Trajectory, Channel, MonteCarlo, Classical };

std::string to_string(Backend backend);

/// One experiment point. The time grid is given by any two of tau, steps and
/// total_time (all three must agree when given); the step count wins when
/// tau * steps and total_time differ by round-off.
struct ExperimentSpec {
  std::string graph_spec;
  double lambda = 1.0;
  std::optional<double> tau;
  std::optional<std::size_t> steps;
  std::optional<double> total_time;
  NodeIndex initial_node = 0;
  Backend backend = Backend::Trajectory;
  std::uint64_t seed = 1;
  /// Output row cadence. Error metrics always use every step.
  std::size_t sample_stride = 1;
  std::size_t trajectories = 1000;
  unsigned threads = 0;
  WalkConfig walk;
  /// Empty: the table is returned but not written.
  std::filesystem::path output_path;

  PercolationRun resolve_run() const;
  Graph graph() const;
  void validate() const;

  static ExperimentSpec trajectory_lattice_defaults();
  static ExperimentSpec channel_ring_defaults();
  static ExperimentSpec complete_graph_defaults();
  static ExperimentSpec longtime_defaults();
  static ExperimentSpec monte_carlo_defaults();
  static ExperimentSpec convergence_defaults();
  static ExperimentSpec horizon_defaults();
};

/// Lambda sweep used by the trajectory and channel commands when no lambda is given.
std::vector<double> default_lambda_sweep();

struct SeriesResult {
  Table table;
  /// max over every step of |simulated - oracle| return probability.
  double max_deviation = 0.0;
};

/// Single trajectory; columns t, p_sim, p_oracle (return probability at the
/// start node against the rescaled reference).
SeriesResult exp_trajectory_lattice(const ExperimentSpec& spec);

struct ChannelSeriesResult {
  Table table;
  double max_deviation = 0.0;
  /// max over every step of |trace(rho) - 1|.
  double max_trace_error = 0.0;
};

/// Exact channel; columns t, p_sim, p_oracle, trace.
ChannelSeriesResult exp_channel_ring(const ExperimentSpec& spec);

struct CompleteGraphResult {
  Table table;
  double quantum_max_deviation = 0.0;
  double classical_max_deviation = 0.0;
  /// First full revival 2 pi / (n lambda) and the simulated return probability
  /// at the nearest step; NaN unless the graph is complete.
  double revival_time = 0.0;
  double revival_probability = 0.0;
  double classical_final = 0.0;
};

/// Quantum and classical trajectory on the same mask sequence; columns t,
/// q_sim, q_oracle, c_sim, c_oracle. Closed forms are used on complete graphs,
/// the rescaled spectral reference otherwise.
CompleteGraphResult exp_complete_graph(const ExperimentSpec& spec);

struct LongtimeResult {
  /// t, p_channel, p_oracle, p_classical_channel, p_classical_oracle, p_envelope
  Table channel;
  /// t, p_trajectory, p_oracle
  Table trajectory;
  EnvelopeFit fit;
  double final_probability = 0.0;
};

/// Long-run channel at finite tau, one trajectory with `trajectory_steps` over
/// the same total time, and the envelope fit of the channel curve with the
/// asymptote pinned to 1/N. The trajectory table goes to
/// "<stem>_trajectory<ext>" next to output_path.
LongtimeResult exp_longtime_finite_tau(const ExperimentSpec& spec, std::size_t trajectory_steps);

/// Trajectory average; columns t, p_mean, p_stderr, p_oracle.
SeriesResult exp_monte_carlo(const ExperimentSpec& spec);

struct ConvergencePoint {
  std::size_t steps = 0;
  double tau = 0.0;
  double max_abs_error = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  /// log-log slope of error against tau; NaN if any error is zero.
  double slope = 0.0;
  Table table;
};

/// Channel error against the rescaled reference for each step count at fixed
/// total time; columns S, tau, max_abs_error.
ConvergenceResult exp_convergence(const ExperimentSpec& spec, std::span<const std::size_t> step_counts);

struct HorizonPoint {
  std::size_t steps = 0;
  double epsilon = 0.0;
  double horizon = 0.0;
};

/// Oracle values below this are skipped when forming relative errors.
inline constexpr double kRelativeErrorGuard = 1e-6;

struct HorizonResult {
  std::vector<HorizonPoint> points;
  Table table;
};

/// For each (S, epsilon): the last sampled time before the relative error of
/// the channel against the rescaled reference first reaches epsilon, or T if it
/// never does. Columns S, epsilon, horizon.
HorizonResult exp_epsilon_horizon(const ExperimentSpec& spec, std::span<const double> epsilons,
                                  std::span<const std::size_t> step_counts);

/// Output path for one point of a lambda sweep: "<stem>_lambda<value><ext>".
std::filesystem::path sweep_path(const std::filesystem::path& base, double lambda);

}  // namespace percwalk::harness
