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
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "percwalk/graph.hpp"
#include "percwalk/lru_cache.hpp"
#include "percwalk/walk.hpp"

namespace percwalk {

/// Stochastic evolution parameters. The step count is authoritative: the total
/// time is always steps * tau, never the other way round.
struct PercolationRun {
  double lambda = 1.0;
  double tau = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;

  double total_time() const noexcept { return static_cast<double>(steps) * tau; }
  double time_at(std::size_t step) const noexcept { return static_cast<double>(step) * tau; }
  void validate() const;

  /// tau = total_time / steps.
  static PercolationRun with_steps(double lambda, double total_time, std::size_t steps, std::uint64_t seed = 0);
  /// steps = round(total_time / tau); the reported total time is steps * tau.
  static PercolationRun with_step_size(double lambda, double tau, double total_time, std::uint64_t seed = 0);
};

/// True for the steps that get recorded: every stride-th step plus the last.
constexpr bool is_recorded(std::size_t step, std::size_t steps, std::size_t stride) noexcept {
  return step % stride == 0 || step == steps;
}

/// One realization's propagator for a fixed step size, kept in spectral form.
struct StepKernel {
  Eigen::MatrixXd basis;
  Eigen::VectorXcd phases;  // exp(-i w tau)
  Eigen::VectorXd decays;   // exp(-w tau)

  static StepKernel build(const Decomposition& d, double tau);

  void apply_quantum(QuantumState& psi) const;
  void apply_quantum(Eigen::MatrixXcd& columns) const;
  void apply_classical(ProbabilityVector& p) const;
  Eigen::MatrixXcd unitary() const;
  Eigen::MatrixXd stochastic() const;
};

/// Step kernels memoized by realization mask, least-recently-used eviction.
/// Internally synchronized, so one instance may be shared between workers.
class PropagatorCache {
 public:
  static constexpr std::size_t kMaxEntries = std::size_t{1} << 16;
  static constexpr std::size_t kByteBudget = std::size_t{256} << 20;

  /// capacity = 0 selects default_capacity(node_count).
  PropagatorCache(Graph graph, WalkConfig cfg, double tau, std::size_t capacity = 0);

  std::shared_ptr<const StepKernel> get(const Realization& mask);

  std::size_t hits() const;
  std::size_t misses() const;
  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }
  double tau() const noexcept { return tau_; }

  /// min(2^16, byte budget / bytes per kernel).
  static std::size_t default_capacity(std::size_t dim);

 private:
  Graph graph_;
  WalkConfig cfg_;
  double tau_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  LruCache<Realization, std::shared_ptr<const StepKernel>, RealizationHash> lru_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

// ---------------------------------------------------------------------------
// Single trajectories

struct TrajectoryStats {
  /// Largest | ||psi|| - 1 | seen at the renormalization checkpoints.
  double max_norm_drift = 0.0;
  std::size_t renormalizations = 0;
};

struct TrajectoryRecord {
  std::vector<std::size_t> steps;
  std::vector<double> times;
  std::vector<QuantumState> states;
  /// Sampled mask of every step (step s at index s - 1), when requested.
  std::vector<Realization> realization_masks;
  TrajectoryStats stats;
};

/// Checkpoint cadence and threshold of the renormalization policy.
inline constexpr std::size_t kRenormalizeInterval = 10000;
inline constexpr double kRenormalizeThreshold = 1e-12;

using QuantumObserver = std::function<void(std::size_t step, double time, const QuantumState&)>;

struct TrajectoryOptions {
  std::size_t sample_stride = 1;
  /// Shared cache; when null, the run makes its own.
  PropagatorCache* cache = nullptr;
};

/// One sampled product U_{r_S}(tau) ... U_{r_1}(tau) psi0, recorded at step 0,
/// every sample_stride-th step and the final step.
TrajectoryRecord run_trajectory(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                                const QuantumState& psi0, std::size_t sample_stride);

/// Streaming form: `observe` sees every recorded state in step order.
TrajectoryStats run_trajectory(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                               const QuantumState& psi0, const TrajectoryOptions& options,
                               const QuantumObserver& observe, std::vector<Realization>* mask_log = nullptr);

// ---------------------------------------------------------------------------
// Exact ensemble channel

/// d^2 x d^2 matrix acting on column-stacked density matrices:
/// vec(U rho U^dagger) = (conj(U) kron U) vec(rho).
struct ChannelMatrix {
  Eigen::MatrixXcd superoperator;
  Eigen::Index dim = 0;
  double tau = 0.0;

  DensityMatrix apply(const DensityMatrix& rho) const;
};

struct ChannelOptions {
  /// Worker threads for the realization sum; 0 means hardware concurrency.
  unsigned threads = 0;
  /// Accumulate every realization in mask order on one thread.
  bool deterministic = false;
};

/// sum_r p_r conj(U_r) kron U_r over all 2^edge_count realizations.
ChannelMatrix build_step_channel(const Graph& g, const WalkConfig& cfg, double lambda, double tau,
                                 const ChannelOptions& options = {});

/// Same construction from explicit unitaries and weights.
ChannelMatrix channel_from_unitaries(const std::vector<Eigen::MatrixXcd>& unitaries,
                                     const std::vector<double>& weights, double tau = 0.0);

struct DensitySample {
  std::size_t step = 0;
  double time = 0.0;
  DensityMatrix rho;
};

using DensityView = Eigen::Map<const DensityMatrix>;
using DensityObserver = std::function<void(std::size_t step, double time, const DensityView&)>;

/// rho_s = phi^s(rho0), recorded at step 0, every stride-th step and the last.
std::vector<DensitySample> evolve_channel(const ChannelMatrix& phi, const DensityMatrix& rho0, std::size_t steps,
                                          std::size_t sample_stride = 1);
void evolve_channel(const ChannelMatrix& phi, const DensityMatrix& rho0, std::size_t steps,
                    std::size_t sample_stride, const DensityObserver& observe);

/// phi^steps(rho0) by repeated squaring of the superoperator.
DensityMatrix channel_power_apply(const ChannelMatrix& phi, const DensityMatrix& rho0, std::size_t steps);

// ---------------------------------------------------------------------------
// Monte Carlo ensembles

struct EnsembleOptions {
  /// Worker threads; trajectories are split into contiguous blocks, one per
  /// worker, and reduced in block order. 0 means hardware concurrency.
  unsigned threads = 0;
};

struct MonteCarloSample {
  std::size_t step = 0;
  double time = 0.0;
  DensityMatrix mean;
  /// Standard error of each diagonal entry: sample sd / sqrt(n).
  Eigen::VectorXd diagonal_std_error;
  /// Largest entry of diagonal_std_error.
  double std_error = 0.0;
};

/// Average of U_t rho0 U_t^dagger over n independent trajectories, trajectory i
/// seeded with derive_seed(run.seed, i).
std::vector<MonteCarloSample> monte_carlo_channel(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                                                  const DensityMatrix& rho0, std::size_t n_trajectories,
                                                  std::size_t sample_stride, const EnsembleOptions& options = {});

// ---------------------------------------------------------------------------
// Classical walk

struct DistributionSample {
  std::size_t step = 0;
  double time = 0.0;
  ProbabilityVector p;
};

using DistributionObserver = std::function<void(std::size_t step, double time, const ProbabilityVector&)>;

/// Per step: sample a mask, apply exp(-H_r tau). The mask sequence is the same
/// one run_trajectory draws for the same run.
std::vector<DistributionSample> run_classical_trajectory(const Graph& g, const WalkConfig& cfg,
                                                         const PercolationRun& run, const ProbabilityVector& p0,
                                                         std::size_t sample_stride);
void run_classical_trajectory(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                              const ProbabilityVector& p0, const TrajectoryOptions& options,
                              const DistributionObserver& observe);

struct DistributionEnsembleSample {
  std::size_t step = 0;
  double time = 0.0;
  ProbabilityVector mean;
  ProbabilityVector std_error;
};

std::vector<DistributionEnsembleSample> monte_carlo_classical(const Graph& g, const WalkConfig& cfg,
                                                              const PercolationRun& run, const ProbabilityVector& p0,
                                                              std::size_t n_trajectories, std::size_t sample_stride,
                                                              const EnsembleOptions& options = {});

/// Exact averaged classical step: sum_r p_r exp(-H_r tau).
Eigen::MatrixXd build_classical_step_matrix(const Graph& g, const WalkConfig& cfg, double lambda, double tau);

std::vector<DistributionSample> evolve_classical(const Eigen::MatrixXd& step_matrix, double tau,
                                                 const ProbabilityVector& p0, std::size_t steps,
                                                 std::size_t sample_stride = 1);

}  // namespace percwalk
