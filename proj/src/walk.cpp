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

#include "percwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace percwalk {

namespace {

void require_node(const Decomposition& d, NodeIndex node) {
  if (node >= static_cast<std::size_t>(d.dim())) {
    throw InvalidArgument("node " + std::to_string(node) + " out of range for " + std::to_string(d.dim()) +
                          " nodes");
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

void WalkConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be a positive finite rate");
}

QuantumState basis_state(std::size_t dim, NodeIndex node) {
  if (node >= dim) throw InvalidArgument("start node " + std::to_string(node) + " out of range");
  QuantumState psi = QuantumState::Zero(static_cast<Eigen::Index>(dim));
  psi(static_cast<Eigen::Index>(node)) = 1.0;
  return psi;
}

DensityMatrix projector(const QuantumState& psi) { return psi * psi.adjoint(); }

ProbabilityVector delta_distribution(std::size_t dim, NodeIndex node) {
  if (node >= dim) throw InvalidArgument("start node " + std::to_string(node) + " out of range");
  ProbabilityVector p = ProbabilityVector::Zero(static_cast<Eigen::Index>(dim));
  p(static_cast<Eigen::Index>(node)) = 1.0;
  return p;
}

void require_normalized(const QuantumState& psi, double tol) {
  const double norm = psi.norm();
  if (!(std::abs(norm - 1.0) <= tol)) {
    throw InvalidArgument("state is not normalized (norm " + std::to_string(norm) + ")");
  }
}

void require_distribution(const ProbabilityVector& p, double tol) {
  if (p.size() == 0 || !p.allFinite()) throw InvalidArgument("distribution is empty or non-finite");
  if (p.minCoeff() < -tol) throw InvalidArgument("distribution has a negative entry");
  if (!(std::abs(p.sum() - 1.0) <= tol)) {
    throw InvalidArgument("distribution sums to " + std::to_string(p.sum()) + ", not 1");
  }
}

void require_density_matrix(const DensityMatrix& rho, double tol) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) throw InvalidArgument("density matrix must be square");
  if (!rho.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw InvalidArgument("density matrix is not Hermitian");
  const auto trace = rho.trace();
  if (std::abs(trace - std::complex<double>(1.0, 0.0)) > tol) {
    throw InvalidArgument("density matrix trace is " + std::to_string(trace.real()) + ", not 1");
  }
}

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");
  return solver.eigenvalues().minCoeff();
}

Decomposition decompose_realization(const Graph& g, const Realization& mask, const WalkConfig& cfg) {
  cfg.validate();
  if (mask.size() != g.edge_count()) throw InvalidArgument("realization size does not match graph");
  const std::size_t n = g.node_count();
  const auto edges = g.edges();

  DisjointSets sets(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (mask.test(k)) sets.unite(edges[k].u, edges[k].v);
  }
  // Components are listed by smallest member; members in increasing order.
  std::vector<std::vector<NodeIndex>> components;
  std::vector<std::size_t> component_of(n);
  std::vector<std::size_t> slot(n, n);
  for (NodeIndex v = 0; v < n; ++v) {
    const auto root = sets.find(v);
    if (slot[root] == n) {
      slot[root] = components.size();
      components.emplace_back();
    }
    component_of[v] = slot[root];
    components[slot[root]].push_back(v);
  }
  std::vector<std::size_t> local_index(n);
  for (const auto& members : components) {
    for (std::size_t i = 0; i < members.size(); ++i) local_index[members[i]] = i;
  }

  std::vector<Eigen::MatrixXd> blocks(components.size());
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto m = static_cast<Eigen::Index>(components[c].size());
    blocks[c] = Eigen::MatrixXd::Zero(m, m);
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (!mask.test(k)) continue;
    auto& h = blocks[component_of[edges[k].u]];
    const auto u = static_cast<Eigen::Index>(local_index[edges[k].u]);
    const auto v = static_cast<Eigen::Index>(local_index[edges[k].v]);
    h(u, u) += cfg.gamma;
    h(v, v) += cfg.gamma;
    h(u, v) -= cfg.gamma;
    h(v, u) -= cfg.gamma;
  }

  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::VectorXd values(dim);
  Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index column = 0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& members = components[c];
    if (members.size() == 1) {
      values(column) = 0.0;
      vectors(static_cast<Eigen::Index>(members[0]), column) = 1.0;
      ++column;
      continue;
    }
    const auto part = decompose(blocks[c]);
    for (Eigen::Index j = 0; j < part.dim(); ++j, ++column) {
      values(column) = part.eigenvalues(j);
      for (std::size_t i = 0; i < members.size(); ++i) {
        vectors(static_cast<Eigen::Index>(members[i]), column) = part.eigenvectors(static_cast<Eigen::Index>(i), j);
      }
    }
  }

  if (components.size() == 1) return {values, vectors};
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  Decomposition sorted{Eigen::VectorXd(dim), Eigen::MatrixXd(dim, dim)};
  for (Eigen::Index j = 0; j < dim; ++j) {
    sorted.eigenvalues(j) = values(order[static_cast<std::size_t>(j)]);
    sorted.eigenvectors.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
  }
  return sorted;
}

Decomposition decompose_graph(const Graph& g, const WalkConfig& cfg) {
  return decompose(hamiltonian(g, cfg));
}

double transition_probability(const Decomposition& d, NodeIndex a, NodeIndex b, double t) {
  require_node(d, a);
  require_node(d, b);
  if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
  const auto qa = d.eigenvectors.row(static_cast<Eigen::Index>(a));
  const auto qb = d.eigenvectors.row(static_cast<Eigen::Index>(b));
  std::complex<double> amplitude = 0.0;
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    amplitude += qb(k) * qa(k) * std::polar(1.0, -d.eigenvalues(k) * t);
  }
  return std::norm(amplitude);
}

double classical_transition(const Decomposition& d, NodeIndex a, NodeIndex b, double t) {
  require_node(d, a);
  require_node(d, b);
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("classical time must be finite and >= 0");
  double p = 0.0;
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    p += d.eigenvectors(static_cast<Eigen::Index>(b), k) * d.eigenvectors(static_cast<Eigen::Index>(a), k) *
         std::exp(-d.eigenvalues(k) * t);
  }
  return std::max(p, 0.0);
}

double transition_probability(const Graph& g, const WalkConfig& cfg, NodeIndex a, NodeIndex b, double t) {
  return transition_probability(decompose_graph(g, cfg), a, b, t);
}

double classical_transition(const Graph& g, const WalkConfig& cfg, NodeIndex a, NodeIndex b, double t) {
  return classical_transition(decompose_graph(g, cfg), a, b, t);
}

ProbabilityVector transition_distribution(const Graph& g, const WalkConfig& cfg, NodeIndex a, double t) {
  const auto d = decompose_graph(g, cfg);
  const QuantumState psi = apply_unitary(d, t, basis_state(g.node_count(), a));
  return psi.cwiseAbs2();
}

ProbabilityVector classical_distribution(const Graph& g, const WalkConfig& cfg, NodeIndex a, double t) {
  const auto d = decompose_graph(g, cfg);
  return stochastic_exp(d, t).col(static_cast<Eigen::Index>(a));
}

}  // namespace percwalk
