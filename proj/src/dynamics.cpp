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

#include "percwalk/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

namespace percwalk {

namespace {

void require_stride(std::size_t stride) {
  if (stride == 0) throw InvalidArgument("sample stride must be positive");
}

unsigned worker_count(unsigned requested, std::size_t work_items) {
  unsigned w = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::clamp<std::size_t>(w, 1, std::max<std::size_t>(work_items, 1)));
}

/// Runs body(worker, begin, end) over `count` items split into contiguous
/// ranges, one per worker. Range boundaries depend only on (count, workers).
template <typename Body>
void parallel_ranges(std::size_t count, unsigned workers, Body&& body) {
  auto range = [&](unsigned w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    body(w, begin, end);
  };
  if (workers == 1) {
    range(0);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        range(w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::size_t> recorded_steps(std::size_t steps, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s <= steps; ++s) {
    if (is_recorded(s, steps, stride)) out.push_back(s);
  }
  return out;
}

/// Running mean and sum of squared deviations; merge() follows Chan et al.
struct Moments {
  std::size_t count = 0;
  Eigen::VectorXd mean;
  Eigen::VectorXd m2;

  explicit Moments(Eigen::Index dim) : mean(Eigen::VectorXd::Zero(dim)), m2(Eigen::VectorXd::Zero(dim)) {}

  void add(const Eigen::VectorXd& x) {
    ++count;
    const Eigen::VectorXd delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta.cwiseProduct(x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    const Eigen::VectorXd delta = other.mean - mean;
    mean += delta * (nb / n);
    m2 += other.m2 + delta.cwiseAbs2() * (na * nb / n);
    count += other.count;
  }

  Eigen::VectorXd std_error() const {
    const double n = static_cast<double>(count);
    return (m2.cwiseMax(0.0) / (n - 1.0)).cwiseSqrt() / std::sqrt(n);
  }
};

void require_state_dim(const Graph& g, Eigen::Index size, const char* what) {
  if (size != static_cast<Eigen::Index>(g.node_count())) {
    throw InvalidArgument(std::string(what) + " has dimension " + std::to_string(size) + " but graph has " +
                          std::to_string(g.node_count()) + " nodes");
  }
}

/// Columns F with F F^dagger = rho, dropping eigenvalues below round-off.
Eigen::MatrixXcd density_factor(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(rho);
  if (solver.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");
  const auto& w = solver.eigenvalues();
  if (w.minCoeff() < -1e-8) throw InvalidArgument("initial density matrix is not positive semidefinite");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) > 1e-14) keep.push_back(k);
  }
  Eigen::MatrixXcd f(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    f.col(static_cast<Eigen::Index>(j)) = solver.eigenvectors().col(keep[j]) * std::sqrt(w(keep[j]));
  }
  return f;
}

PropagatorCache& cache_for(const TrajectoryOptions& options, std::unique_ptr<PropagatorCache>& owned,
                           const Graph& g, const WalkConfig& cfg, const PercolationRun& run) {
  if (options.cache != nullptr) {
    if (options.cache->tau() != run.tau) throw InvalidArgument("propagator cache was built for another step size");
    return *options.cache;
  }
  owned = std::make_unique<PropagatorCache>(g, cfg, run.tau);
  return *owned;
}

}  // namespace

// ---------------------------------------------------------------------------
// PercolationRun

void PercolationRun::validate() const {
  require_probability(lambda);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("step size tau must be positive and finite");
  if (steps == 0) throw InvalidArgument("step count must be positive");
}

PercolationRun PercolationRun::with_steps(double lambda, double total_time, std::size_t steps, std::uint64_t seed) {
  if (steps == 0) throw InvalidArgument("step count must be positive");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) throw InvalidArgument("total time must be positive");
  PercolationRun run{lambda, total_time / static_cast<double>(steps), steps, seed};
  run.validate();
  return run;
}

PercolationRun PercolationRun::with_step_size(double lambda, double tau, double total_time, std::uint64_t seed) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("step size tau must be positive and finite");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) throw InvalidArgument("total time must be positive");
  const double ratio = std::round(total_time / tau);
  if (ratio < 1.0) throw InvalidArgument("total time is shorter than one step");
  PercolationRun run{lambda, tau, static_cast<std::size_t>(ratio), seed};
  run.validate();
  return run;
}

// ---------------------------------------------------------------------------
// StepKernel

StepKernel StepKernel::build(const Decomposition& d, double tau) {
  StepKernel k;
  k.basis = d.eigenvectors;
  k.phases = (d.eigenvalues * tau).unaryExpr([](double x) { return std::polar(1.0, -x); });
  k.decays = (-d.eigenvalues * tau).array().exp().matrix();
  return k;
}

void StepKernel::apply_quantum(QuantumState& psi) const {
  Eigen::VectorXd re = basis.transpose() * psi.real();
  Eigen::VectorXd im = basis.transpose() * psi.imag();
  for (Eigen::Index k = 0; k < re.size(); ++k) {
    const std::complex<double> c = std::complex<double>(re(k), im(k)) * phases(k);
    re(k) = c.real();
    im(k) = c.imag();
  }
  psi.real() = basis * re;
  psi.imag() = basis * im;
}

void StepKernel::apply_quantum(Eigen::MatrixXcd& columns) const {
  Eigen::MatrixXd re = basis.transpose() * columns.real();
  Eigen::MatrixXd im = basis.transpose() * columns.imag();
  for (Eigen::Index j = 0; j < re.cols(); ++j) {
    for (Eigen::Index k = 0; k < re.rows(); ++k) {
      const std::complex<double> c = std::complex<double>(re(k, j), im(k, j)) * phases(k);
      re(k, j) = c.real();
      im(k, j) = c.imag();
    }
  }
  columns.real() = basis * re;
  columns.imag() = basis * im;
}

void StepKernel::apply_classical(ProbabilityVector& p) const {
  const Eigen::VectorXd coeffs = decays.cwiseProduct(basis.transpose() * p);
  p = basis * coeffs;
}

Eigen::MatrixXcd StepKernel::unitary() const {
  Eigen::MatrixXcd u(basis.rows(), basis.cols());
  u.real() = basis * phases.real().asDiagonal() * basis.transpose();
  u.imag() = basis * phases.imag().asDiagonal() * basis.transpose();
  return u;
}

Eigen::MatrixXd StepKernel::stochastic() const {
  return (basis * decays.asDiagonal() * basis.transpose()).cwiseMax(0.0);
}

// ---------------------------------------------------------------------------
// PropagatorCache

PropagatorCache::PropagatorCache(Graph graph, WalkConfig cfg, double tau, std::size_t capacity)
    : graph_(std::move(graph)),
      cfg_(cfg),
      tau_(tau),
      capacity_(capacity == 0 ? default_capacity(graph_.node_count()) : capacity),
      lru_(capacity_) {
  cfg_.validate();
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw InvalidArgument("step size tau must be positive and finite");
}

std::size_t PropagatorCache::default_capacity(std::size_t dim) {
  // basis + phases + decays
  const std::size_t bytes = dim * dim * sizeof(double) + dim * (sizeof(std::complex<double>) + sizeof(double)) + 256;
  return std::clamp<std::size_t>(kByteBudget / bytes, 1, kMaxEntries);
}

std::shared_ptr<const StepKernel> PropagatorCache::get(const Realization& mask) {
  {
    std::lock_guard lock(mutex_);
    if (auto hit = lru_.find(mask)) {
      ++hits_;
      return *hit;
    }
    ++misses_;
  }
  auto kernel = std::make_shared<const StepKernel>(StepKernel::build(decompose_realization(graph_, mask, cfg_), tau_));
  std::lock_guard lock(mutex_);
  lru_.insert(mask, kernel);
  return kernel;
}

std::size_t PropagatorCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t PropagatorCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

std::size_t PropagatorCache::size() const {
  std::lock_guard lock(mutex_);
  return lru_.size();
}

// ---------------------------------------------------------------------------
// Trajectories

TrajectoryStats run_trajectory(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                               const QuantumState& psi0, const TrajectoryOptions& options,
                               const QuantumObserver& observe, std::vector<Realization>* mask_log) {
  run.validate();
  cfg.validate();
  require_stride(options.sample_stride);
  require_state_dim(g, psi0.size(), "initial state");
  require_normalized(psi0);

  std::unique_ptr<PropagatorCache> owned;
  auto& cache = cache_for(options, owned, g, cfg, run);

  TrajectoryStats stats;
  Rng rng(run.seed);
  QuantumState psi = psi0;
  observe(0, 0.0, psi);
  for (std::size_t s = 1; s <= run.steps; ++s) {
    const auto mask = sample_realization(g, run.lambda, rng);
    cache.get(mask)->apply_quantum(psi);
    if (mask_log != nullptr) mask_log->push_back(mask);
    if (s % kRenormalizeInterval == 0 || s == run.steps) {
      const double norm = psi.norm();
      const double drift = std::abs(norm - 1.0);
      stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
      if (drift > kRenormalizeThreshold) {
        psi /= norm;
        ++stats.renormalizations;
      }
    }
    if (is_recorded(s, run.steps, options.sample_stride)) observe(s, run.time_at(s), psi);
  }
  return stats;
}

TrajectoryRecord run_trajectory(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                                const QuantumState& psi0, std::size_t sample_stride) {
  TrajectoryRecord record;
  TrajectoryOptions options;
  options.sample_stride = sample_stride;
  record.stats = run_trajectory(
      g, cfg, run, psi0, options,
      [&](std::size_t step, double time, const QuantumState& psi) {
        record.steps.push_back(step);
        record.times.push_back(time);
        record.states.push_back(psi);
      },
      &record.realization_masks);
  return record;
}

// ---------------------------------------------------------------------------
// Channel

DensityMatrix ChannelMatrix::apply(const DensityMatrix& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) throw InvalidArgument("density matrix does not match channel dimension");
  const Eigen::VectorXcd out = superoperator * Eigen::Map<const Eigen::VectorXcd>(rho.data(), dim * dim);
  return Eigen::Map<const DensityMatrix>(out.data(), dim, dim);
}

namespace {

/// phi += weight * conj(U) kron U, block (b, e) being weight * conj(U(b, e)) * U.
void accumulate_conjugation(Eigen::MatrixXcd& phi, const Eigen::MatrixXcd& u, double weight) {
  const Eigen::Index d = u.rows();
  for (Eigen::Index e = 0; e < d; ++e) {
    for (Eigen::Index b = 0; b < d; ++b) {
      phi.block(b * d, e * d, d, d) += (weight * std::conj(u(b, e))) * u;
    }
  }
}

/// Sums many equally sized matrices through levels that each flush after a
/// fixed number of additions, so rounding grows with the level width instead
/// of the term count.
class CascadeSum {
 public:
  static constexpr std::size_t kWidth = 64;

  CascadeSum(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) { push_level(); }

  Eigen::MatrixXcd& front() { return levels_.front(); }

  /// Call after each addition into front().
  void commit() {
    for (std::size_t level = 0; level < levels_.size(); ++level) {
      if (++counts_[level] < kWidth) return;
      if (level + 1 == levels_.size()) push_level();
      levels_[level + 1] += levels_[level];
      levels_[level].setZero();
      counts_[level] = 0;
    }
  }

  Eigen::MatrixXcd total() && {
    for (std::size_t level = levels_.size() - 1; level > 0; --level) levels_[level - 1] += levels_[level];
    return std::move(levels_.front());
  }

 private:
  void push_level() {
    levels_.push_back(Eigen::MatrixXcd::Zero(rows_, cols_));
    counts_.push_back(0);
  }

  Eigen::Index rows_, cols_;
  std::vector<Eigen::MatrixXcd> levels_;
  std::vector<std::size_t> counts_;
};

}  // namespace

ChannelMatrix build_step_channel(const Graph& g, const WalkConfig& cfg, double lambda, double tau,
                                 const ChannelOptions& options) {
  require_enumerable(g);
  require_probability(lambda);
  cfg.validate();
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("step size tau must be positive and finite");

  const std::size_t edges = g.edge_count();
  const auto d = static_cast<Eigen::Index>(g.node_count());
  std::vector<double> by_count(edges + 1);
  for (std::size_t k = 0; k <= edges; ++k) by_count[k] = realization_probability(k, edges, lambda);

  const std::size_t count = std::size_t{1} << edges;
  const unsigned workers = options.deterministic ? 1U : worker_count(options.threads, count);
  std::vector<Eigen::MatrixXcd> partial(workers);
  parallel_ranges(count, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    CascadeSum acc(d * d, d * d);
    for (std::size_t bits = begin; bits < end; ++bits) {
      const double p = by_count[static_cast<std::size_t>(std::popcount(bits))];
      if (p == 0.0) continue;
      const auto mask = Realization::from_bits(edges, bits);
      const auto u = StepKernel::build(decompose_realization(g, mask, cfg), tau).unitary();
      accumulate_conjugation(acc.front(), u, p);
      acc.commit();
    }
    partial[w] = std::move(acc).total();
  });

  ChannelMatrix phi{std::move(partial[0]), d, tau};
  for (unsigned w = 1; w < workers; ++w) phi.superoperator += partial[w];
  return phi;
}

ChannelMatrix channel_from_unitaries(const std::vector<Eigen::MatrixXcd>& unitaries,
                                     const std::vector<double>& weights, double tau) {
  if (unitaries.empty() || unitaries.size() != weights.size()) {
    throw InvalidArgument("need one weight per unitary");
  }
  const Eigen::Index d = unitaries.front().rows();
  ChannelMatrix phi{Eigen::MatrixXcd::Zero(d * d, d * d), d, tau};
  for (std::size_t r = 0; r < unitaries.size(); ++r) {
    if (unitaries[r].rows() != d || unitaries[r].cols() != d) throw InvalidArgument("unitaries differ in size");
    accumulate_conjugation(phi.superoperator, unitaries[r], weights[r]);
  }
  return phi;
}

void evolve_channel(const ChannelMatrix& phi, const DensityMatrix& rho0, std::size_t steps,
                    std::size_t sample_stride, const DensityObserver& observe) {
  require_stride(sample_stride);
  const Eigen::Index d = phi.dim;
  if (rho0.rows() != d || rho0.cols() != d || phi.superoperator.rows() != d * d) {
    throw InvalidArgument("initial density matrix does not match channel dimension");
  }
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  Eigen::VectorXcd next(d * d);
  observe(0, 0.0, DensityView(v.data(), d, d));
  for (std::size_t s = 1; s <= steps; ++s) {
    next.noalias() = phi.superoperator * v;
    v.swap(next);
    if (is_recorded(s, steps, sample_stride)) {
      observe(s, static_cast<double>(s) * phi.tau, DensityView(v.data(), d, d));
    }
  }
}

std::vector<DensitySample> evolve_channel(const ChannelMatrix& phi, const DensityMatrix& rho0, std::size_t steps,
                                          std::size_t sample_stride) {
  std::vector<DensitySample> out;
  evolve_channel(phi, rho0, steps, sample_stride, [&](std::size_t step, double time, const DensityView& rho) {
    out.push_back({step, time, rho});
  });
  return out;
}

DensityMatrix channel_power_apply(const ChannelMatrix& phi, const DensityMatrix& rho0, std::size_t steps) {
  const Eigen::Index d = phi.dim;
  if (rho0.rows() != d || rho0.cols() != d) throw InvalidArgument("initial density matrix does not match channel");
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  Eigen::MatrixXcd base = phi.superoperator;
  while (steps > 0) {
    if (steps & 1U) v = base * v;
    steps >>= 1U;
    if (steps > 0) base = base * base;
  }
  return Eigen::Map<const DensityMatrix>(v.data(), d, d);
}

// ---------------------------------------------------------------------------
// Monte Carlo

std::vector<MonteCarloSample> monte_carlo_channel(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                                                  const DensityMatrix& rho0, std::size_t n_trajectories,
                                                  std::size_t sample_stride, const EnsembleOptions& options) {
  run.validate();
  cfg.validate();
  require_stride(sample_stride);
  if (n_trajectories < 2) throw InvalidArgument("Monte Carlo needs at least two trajectories");
  require_state_dim(g, rho0.rows(), "initial density matrix");
  require_density_matrix(rho0);
  const Eigen::MatrixXcd factor0 = density_factor(rho0);
  const auto d = static_cast<Eigen::Index>(g.node_count());
  const auto records = recorded_steps(run.steps, sample_stride);

  struct Partial {
    std::vector<Eigen::MatrixXcd> sums;
    std::vector<Moments> diag;
  };
  const unsigned workers = worker_count(options.threads, n_trajectories);
  std::vector<Partial> partial(workers);
  parallel_ranges(n_trajectories, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    Partial acc{std::vector<Eigen::MatrixXcd>(records.size(), Eigen::MatrixXcd::Zero(d, d)),
                std::vector<Moments>(records.size(), Moments(d))};
    PropagatorCache cache(g, cfg, run.tau);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(run.seed, i));
      Eigen::MatrixXcd f = factor0;
      std::size_t slot = 0;
      auto record = [&] {
        const DensityMatrix rho = f * f.adjoint();
        acc.sums[slot] += rho;
        acc.diag[slot].add(rho.diagonal().real());
        ++slot;
      };
      record();
      for (std::size_t s = 1; s <= run.steps; ++s) {
        cache.get(sample_realization(g, run.lambda, rng))->apply_quantum(f);
        if (is_recorded(s, run.steps, sample_stride)) record();
      }
    }
    partial[w] = std::move(acc);
  });

  std::vector<MonteCarloSample> out(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    Eigen::MatrixXcd sum = partial[0].sums[r];
    Moments moments = partial[0].diag[r];
    for (unsigned w = 1; w < workers; ++w) {
      sum += partial[w].sums[r];
      moments.merge(partial[w].diag[r]);
    }
    auto& sample = out[r];
    sample.step = records[r];
    sample.time = run.time_at(records[r]);
    sample.mean = sum / static_cast<double>(n_trajectories);
    sample.diagonal_std_error = moments.std_error();
    sample.std_error = sample.diagonal_std_error.maxCoeff();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classical

void run_classical_trajectory(const Graph& g, const WalkConfig& cfg, const PercolationRun& run,
                              const ProbabilityVector& p0, const TrajectoryOptions& options,
                              const DistributionObserver& observe) {
  run.validate();
  cfg.validate();
  require_stride(options.sample_stride);
  require_state_dim(g, p0.size(), "initial distribution");
  require_distribution(p0);

  std::unique_ptr<PropagatorCache> owned;
  auto& cache = cache_for(options, owned, g, cfg, run);
  Rng rng(run.seed);
  ProbabilityVector p = p0;
  observe(0, 0.0, p);
  for (std::size_t s = 1; s <= run.steps; ++s) {
    cache.get(sample_realization(g, run.lambda, rng))->apply_classical(p);
    if (is_recorded(s, run.steps, options.sample_stride)) observe(s, run.time_at(s), p);
  }
}

std::vector<DistributionSample> run_classical_trajectory(const Graph& g, const WalkConfig& cfg,
                                                         const PercolationRun& run, const ProbabilityVector& p0,
                                                         std::size_t sample_stride) {
  std::vector<DistributionSample> out;
  TrajectoryOptions options;
  options.sample_stride = sample_stride;
  run_classical_trajectory(g, cfg, run, p0, options, [&](std::size_t step, double time, const ProbabilityVector& p) {
    out.push_back({step, time, p});
  });
  return out;
}

std::vector<DistributionEnsembleSample> monte_carlo_classical(const Graph& g, const WalkConfig& cfg,
                                                              const PercolationRun& run, const ProbabilityVector& p0,
                                                              std::size_t n_trajectories, std::size_t sample_stride,
                                                              const EnsembleOptions& options) {
  run.validate();
  cfg.validate();
  require_stride(sample_stride);
  if (n_trajectories < 2) throw InvalidArgument("Monte Carlo needs at least two trajectories");
  require_state_dim(g, p0.size(), "initial distribution");
  require_distribution(p0);
  const auto d = static_cast<Eigen::Index>(g.node_count());
  const auto records = recorded_steps(run.steps, sample_stride);

  const unsigned workers = worker_count(options.threads, n_trajectories);
  std::vector<std::vector<Moments>> partial(workers);
  parallel_ranges(n_trajectories, workers, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<Moments> acc(records.size(), Moments(d));
    PropagatorCache cache(g, cfg, run.tau);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(run.seed, i));
      ProbabilityVector p = p0;
      std::size_t slot = 0;
      acc[slot++].add(p);
      for (std::size_t s = 1; s <= run.steps; ++s) {
        cache.get(sample_realization(g, run.lambda, rng))->apply_classical(p);
        if (is_recorded(s, run.steps, sample_stride)) acc[slot++].add(p);
      }
    }
    partial[w] = std::move(acc);
  });

  std::vector<DistributionEnsembleSample> out(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    Moments moments = partial[0][r];
    for (unsigned w = 1; w < workers; ++w) moments.merge(partial[w][r]);
    out[r] = {records[r], run.time_at(records[r]), moments.mean, moments.std_error()};
  }
  return out;
}

Eigen::MatrixXd build_classical_step_matrix(const Graph& g, const WalkConfig& cfg, double lambda, double tau) {
  require_enumerable(g);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("step size tau must be positive and finite");
  const auto d = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for_each_realization(g, lambda, [&](const Realization& mask, double p) {
    if (p == 0.0) return;
    m += p * StepKernel::build(decompose_realization(g, mask, cfg), tau).stochastic();
  });
  return m;
}

std::vector<DistributionSample> evolve_classical(const Eigen::MatrixXd& step_matrix, double tau,
                                                 const ProbabilityVector& p0, std::size_t steps,
                                                 std::size_t sample_stride) {
  require_stride(sample_stride);
  if (step_matrix.rows() != p0.size() || step_matrix.cols() != p0.size()) {
    throw InvalidArgument("initial distribution does not match step matrix");
  }
  require_distribution(p0);
  std::vector<DistributionSample> out;
  ProbabilityVector p = p0;
  out.push_back({0, 0.0, p});
  for (std::size_t s = 1; s <= steps; ++s) {
    p = step_matrix * p;
    if (is_recorded(s, steps, sample_stride)) out.push_back({s, static_cast<double>(s) * tau, p});
  }
  return out;
}

}  // namespace percwalk
