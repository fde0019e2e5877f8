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

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "percwalk/graph.hpp"
#include "percwalk/spectral.hpp"

namespace percwalk {

using QuantumState = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;
using ProbabilityVector = Eigen::VectorXd;
using Decomposition = SpectralDecomposition<double>;

struct WalkConfig {
  /// Hopping rate. gamma = 1 only fixes the unit of time.
  double gamma = 1.0;

  void validate() const;
};

QuantumState basis_state(std::size_t dim, NodeIndex node);
DensityMatrix projector(const QuantumState& psi);
ProbabilityVector delta_distribution(std::size_t dim, NodeIndex node);

/// Throw InvalidArgument unless | ||psi|| - 1 | <= tol.
void require_normalized(const QuantumState& psi, double tol = 1e-10);
/// Entries >= -tol and summing to 1 within tol.
void require_distribution(const ProbabilityVector& p, double tol = 1e-10);
/// Hermitian and unit trace within tol (positivity is checked separately, it
/// needs an eigensolve).
void require_density_matrix(const DensityMatrix& rho, double tol = 1e-10);
double min_eigenvalue(const DensityMatrix& rho);

/// Walk generator of one realization: for every kept edge (u, v), +gamma at
/// (u,u) and (v,v) and -gamma at (u,v) and (v,u). The diagonal is therefore
/// gamma times the degree inside the realization and every row sums to zero.
template <typename Scalar = double>
MatrixX<Scalar> hamiltonian(const Graph& g, const Realization& mask, const WalkConfig& cfg) {
  cfg.validate();
  if (mask.size() != g.edge_count()) {
    throw InvalidArgument("realization has " + std::to_string(mask.size()) + " bits but graph has " +
                          std::to_string(g.edge_count()) + " edges");
  }
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const auto gamma = static_cast<Scalar>(cfg.gamma);
  MatrixX<Scalar> h = MatrixX<Scalar>::Zero(n, n);
  const auto edges = g.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!mask.test(k)) continue;
    const auto u = static_cast<Eigen::Index>(edges[k].u);
    const auto v = static_cast<Eigen::Index>(edges[k].v);
    h(u, u) += gamma;
    h(v, v) += gamma;
    h(u, v) -= gamma;
    h(v, u) -= gamma;
  }
  return h;
}

/// Unpercolated generator (every edge kept).
template <typename Scalar = double>
MatrixX<Scalar> hamiltonian(const Graph& g, const WalkConfig& cfg) {
  return hamiltonian<Scalar>(g, Realization::full(g.edge_count()), cfg);
}

/// Decomposition of the realization's generator, solved one connected
/// component at a time. Isolated nodes contribute eigenvalue 0 with a unit
/// eigenvector. Output is sorted ascending like decompose().
Decomposition decompose_realization(const Graph& g, const Realization& mask, const WalkConfig& cfg);

/// Decomposition of the unpercolated generator.
Decomposition decompose_graph(const Graph& g, const WalkConfig& cfg);

/// |<b| exp(-iHt) |a>|^2 from a precomputed decomposition, O(dim) per call.
double transition_probability(const Decomposition& d, NodeIndex a, NodeIndex b, double t);
/// (exp(-Ht))_{b,a} from a precomputed decomposition, O(dim) per call.
double classical_transition(const Decomposition& d, NodeIndex a, NodeIndex b, double t);

double transition_probability(const Graph& g, const WalkConfig& cfg, NodeIndex a, NodeIndex b, double t);
double classical_transition(const Graph& g, const WalkConfig& cfg, NodeIndex a, NodeIndex b, double t);

/// Full output distributions from start node a.
ProbabilityVector transition_distribution(const Graph& g, const WalkConfig& cfg, NodeIndex a, double t);
ProbabilityVector classical_distribution(const Graph& g, const WalkConfig& cfg, NodeIndex a, double t);

}  // namespace percwalk
