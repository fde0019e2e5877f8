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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "percwalk/dynamics.hpp"
#include "percwalk/harness/experiments.hpp"
#include "percwalk/oracles.hpp"
#include "support/reference.hpp"

namespace {

using namespace percwalk;
using namespace percwalk::harness;
using cd = std::complex<double>;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [FAILED]");
  }
};

std::string fmt(const char* pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, pattern, value);
  return buffer;
}

// --- criteria ---------------------------------------------------------------

void ring_channel(Verdict& v) {
  auto spec = ExperimentSpec::channel_ring_defaults();
  spec.lambda = 0.5;
  const auto r = exp_channel_ring(spec);
  v.check(r.max_deviation <= 0.05, "max|P1 - ref| = " + fmt("%.5f", r.max_deviation) + " <= 0.05");
}

void complete_quantum(Verdict& v) {
  const auto r = exp_complete_graph(ExperimentSpec::complete_graph_defaults());
  v.check(r.quantum_max_deviation <= 0.05, "max dev over t in [0,10] = " + fmt("%.5f", r.quantum_max_deviation) +
                                               " <= 0.05");
  v.check(r.revival_probability > 0.9, "P1 at t=" + fmt("%.4f", r.revival_time) + " = " +
                                           fmt("%.5f", r.revival_probability) + " > 0.9");
}

void complete_classical(Verdict& v) {
  const auto r = exp_complete_graph(ExperimentSpec::complete_graph_defaults());
  v.check(r.classical_max_deviation <= 0.02, "max dev = " + fmt("%.5f", r.classical_max_deviation) + " <= 0.02");
  const double gap = std::abs(r.classical_final - 1.0 / 15.0);
  v.check(gap <= 0.01, "|P1(T) - 1/15| = " + fmt("%.2e", gap) + " <= 0.01");
}

void longtime_flattening(Verdict& v) {
  const auto r = exp_longtime_finite_tau(ExperimentSpec::longtime_defaults(), 3000);
  v.check(r.final_probability >= 0.23 && r.final_probability <= 0.27,
          "P1(100) = " + fmt("%.5f", r.final_probability) + " in [0.23, 0.27]");
  v.check(r.fit.converged, "fit converged");
  v.check(r.fit.a >= 0.70 && r.fit.a <= 0.79, "a = " + fmt("%.5f", r.fit.a) + " in [0.70, 0.79]");
  v.check(r.fit.b >= 0.044 && r.fit.b <= 0.054, "b = " + fmt("%.5f", r.fit.b) + " in [0.044, 0.054]");
}

void convergence(Verdict& v) {
  auto spec = ExperimentSpec::convergence_defaults();
  const std::vector<std::size_t> steps{250, 1000, 4000};
  const auto r = exp_convergence(spec, steps);
  const bool decreasing = r.points[0].max_abs_error > r.points[1].max_abs_error &&
                          r.points[1].max_abs_error > r.points[2].max_abs_error;
  v.check(decreasing, "errors " + fmt("%.4g", r.points[0].max_abs_error) + " > " +
                          fmt("%.4g", r.points[1].max_abs_error) + " > " + fmt("%.4g", r.points[2].max_abs_error));
  spec.lambda = 1.0;
  double worst = 0.0;
  for (const auto& p : exp_convergence(spec, steps).points) worst = std::max(worst, p.max_abs_error);
  v.check(worst <= 1e-8, "lambda=1 error " + fmt("%.2e", worst) + " <= 1e-8");
}

void horizon(Verdict& v) {
  const auto spec = ExperimentSpec::horizon_defaults();
  const std::vector<double> eps{0.02, 0.05, 0.1};
  const std::vector<std::size_t> steps{500, 1000, 2000, 4000, 8000, 16000, 32000, 64000, 128000, 256000, 512000};
  const auto r = exp_epsilon_horizon(spec, eps, steps);
  auto at = [&](std::size_t s, double e) {
    for (const auto& p : r.points)
      if (p.steps == s && p.epsilon == e) return p.horizon;
    return std::nan("");
  };
  v.check(at(4000, 0.05) >= at(500, 0.05),
          "h(4000,0.05) = " + fmt("%.4f", at(4000, 0.05)) + " >= h(500,0.05) = " + fmt("%.4f", at(500, 0.05)));
  const double total = *spec.total_time;
  for (double e : eps) {
    std::size_t first_full = 0;
    double best = 0.0;
    for (auto s : steps) {
      best = std::max(best, at(s, e));
      if (first_full == 0 && at(s, e) >= total) first_full = s;
    }
    const bool reaches = at(steps.back(), e) >= total;
    v.check(reaches, "eps=" + fmt("%g", e) + " reaches T=10 " +
                         (first_full ? "from S=" + std::to_string(first_full) : "never (best " + fmt("%.3f", best) + ")"));
  }
}

void brute_force(Verdict& v) {
  const auto g = make_ring(2);
  double worst = 0.0;
  for (double lambda : {0.3, 0.5, 0.8}) {
    const DensityMatrix rho0 = projector(basis_state(2, 0));
    const auto phi = build_step_channel(g, WalkConfig{}, lambda, 0.45);
    for (std::size_t s = 1; s <= 4; ++s) {
      const auto rho = channel_power_apply(phi, rho0, s);
      const auto stepped = evolve_channel(phi, rho0, s, s).back().rho;
      const auto expected = testing::brute_force_channel(g, lambda, 0.45, rho0, s);
      worst = std::max({worst, (rho - expected).cwiseAbs().maxCoeff(), (stepped - expected).cwiseAbs().maxCoeff()});
    }
  }
  v.check(worst <= 1e-12, "max-norm gap " + fmt("%.2e", worst) + " <= 1e-12 over S=1..4");
}

void invariants(Verdict& v) {
  const WalkConfig cfg;
  // Unitarity and stochastic columns over every mask of small graphs.
  double unitarity = 0.0, columns = 0.0;
  for (const auto& g : {make_ring(6), make_lattice2d(3, 3), make_complete(5)}) {
    const std::uint64_t count = std::uint64_t{1} << g.edge_count();
    const auto n = static_cast<Eigen::Index>(g.node_count());
    for (std::uint64_t bits = 0; bits < count; bits += 1 + count / 512) {
      const auto k = StepKernel::build(decompose_realization(g, Realization::from_bits(g.edge_count(), bits), cfg), 0.7);
      const auto u = k.unitary();
      unitarity = std::max(unitarity, (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).norm());
      columns = std::max(columns, (k.stochastic().colwise().sum().array() - 1.0).abs().maxCoeff());
    }
  }
  columns = std::max(columns, (build_classical_step_matrix(make_ring(8), cfg, 0.4, 0.3).colwise().sum().array() - 1.0)
                                  .abs()
                                  .maxCoeff());
  v.check(unitarity <= 1e-10, "||U'U - I|| " + fmt("%.1e", unitarity));
  v.check(columns <= 1e-10, "column sums " + fmt("%.1e", columns));

  double norm_drift = 0.0;
  TrajectoryOptions options;
  run_trajectory(make_lattice2d(4, 4), cfg, PercolationRun{0.5, 0.05, 5000, 9}, basis_state(16, 5), options,
                 [&](std::size_t, double, const QuantumState& psi) {
                   norm_drift = std::max(norm_drift, std::abs(psi.norm() - 1.0));
                 });
  v.check(norm_drift <= 1e-10, "norm drift " + fmt("%.1e", norm_drift));

  double trace = 0.0, hermitian = 0.0, min_eig = 1.0;
  const auto phi = build_step_channel(make_ring(15), cfg, 0.5, 0.004);
  evolve_channel(phi, projector(basis_state(15, 0)), 5000, 1, [&](std::size_t s, double, const DensityView& rho) {
    trace = std::max(trace, std::abs(rho.trace() - cd(1.0, 0.0)));
    hermitian = std::max(hermitian, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    if (s % 250 == 0) min_eig = std::min(min_eig, min_eigenvalue(DensityMatrix(rho)));
  });
  v.check(trace <= 1e-10, "channel trace " + fmt("%.1e", trace));
  v.check(hermitian <= 1e-10, "hermiticity " + fmt("%.1e", hermitian));
  v.check(min_eig >= -1e-8, "min eigenvalue " + fmt("%.1e", min_eig));

  double oracle = 0.0;
  const auto k15 = make_complete(15);
  const auto ring4 = make_ring(4);
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    oracle = std::max({oracle,
                       std::abs(complete_graph_quantum_return(15, t) - transition_probability(k15, cfg, 0, 0, t)),
                       std::abs(complete_graph_classical_return(15, t) - classical_transition(k15, cfg, 0, 0, t)),
                       std::abs(ring4_quantum_return(1.0, t) - transition_probability(ring4, cfg, 0, 0, t)),
                       std::abs(ring4_classical_return(1.0, t) - classical_transition(ring4, cfg, 0, 0, t))});
  }
  v.check(oracle <= 1e-10, "closed forms vs spectral " + fmt("%.1e", oracle));

  double mass = 0.0;
  for (double lambda : {0.1, 0.5, 0.9}) {
    for (const auto& g : {make_ring(15), make_lattice2d(4, 4)}) {
      // Neumaier summation, so the check measures the probabilities rather than the adder.
      double total = 0.0, carry = 0.0;
      for_each_realization(g, lambda, [&](const Realization&, double p) {
        const double next = total + p;
        carry += std::abs(total) >= std::abs(p) ? (total - next) + p : (p - next) + total;
        total = next;
      });
      mass = std::max(mass, std::abs(total + carry - 1.0));
    }
  }
  v.check(mass <= 1e-12, "sum p_r " + fmt("%.1e", mass));
}

void limits(Verdict& v) {
  const WalkConfig cfg;
  const auto g = make_ring(6);
  const double tau = 0.05;
  const std::size_t steps = 200;
  const auto psi0 = basis_state(6, 0);
  const auto rho0 = projector(psi0);
  const auto p0 = delta_distribution(6, 0);
  const auto d = decompose_graph(g, cfg);
  const Eigen::VectorXcd psi_t = unitary_exp(d, tau * double(steps)) * psi0;
  const DensityMatrix rho_t = psi_t * psi_t.adjoint();
  const Eigen::VectorXd p_t = stochastic_exp(d, tau * double(steps)) * p0;

  double frozen = 0.0, unpercolated = 0.0;
  for (double lambda : {0.0, 1.0}) {
    const PercolationRun run{lambda, tau, steps, 4};
    const auto q = run_trajectory(g, cfg, run, psi0, steps).states.back();
    const auto c = evolve_channel(build_step_channel(g, cfg, lambda, tau), rho0, steps, steps).back().rho;
    const auto mc = monte_carlo_channel(g, cfg, run, rho0, 20, steps).back().mean;
    const auto ct = run_classical_trajectory(g, cfg, run, p0, steps).back().p;
    const auto cm = monte_carlo_classical(g, cfg, run, p0, 20, steps).back().mean;
    const auto cc = evolve_classical(build_classical_step_matrix(g, cfg, lambda, tau), tau, p0, steps, steps).back().p;
    const DensityMatrix rho_q = q * q.adjoint();
    const DensityMatrix& rho_ref = lambda == 0.0 ? rho0 : rho_t;
    const Eigen::VectorXd& p_ref = lambda == 0.0 ? p0 : p_t;
    const double gap = std::max({(rho_q - rho_ref).cwiseAbs().maxCoeff(), (c - rho_ref).cwiseAbs().maxCoeff(),
                                 (mc - rho_ref).cwiseAbs().maxCoeff(), (ct - p_ref).cwiseAbs().maxCoeff(),
                                 (cm - p_ref).cwiseAbs().maxCoeff(), (cc - p_ref).cwiseAbs().maxCoeff()});
    (lambda == 0.0 ? frozen : unpercolated) = gap;
  }
  v.check(frozen <= 1e-8, "lambda=0 frozen, max gap " + fmt("%.1e", frozen));
  v.check(unpercolated <= 1e-8, "lambda=1 unpercolated, max gap " + fmt("%.1e", unpercolated));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"1 ring(15) channel tracks rescaled evolution", ring_channel},
      {"2 complete(15) quantum trajectory and revival", complete_quantum},
      {"3 complete(15) classical trajectory", complete_classical},
      {"4 ring(4) finite-step flattening and envelope", longtime_flattening},
      {"5 ring(10) channel error decreases with S", convergence},
      {"6 ring(5) epsilon horizon grows to T", horizon},
      {"7 single-edge channel equals mask-sequence enumeration", brute_force},
      {"8 structural invariants", invariants},
      {"9 lambda=0 and lambda=1 limits across backends", limits},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), seconds, v.detail.str().c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
