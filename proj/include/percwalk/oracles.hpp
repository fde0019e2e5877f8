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
#include <functional>
#include <string>

#include "percwalk/graph.hpp"
#include "percwalk/walk.hpp"

namespace percwalk {

/// Named reference curve t -> probability.
struct OracleCurve {
  std::string label;
  std::function<double(double)> evaluate;

  double operator()(double t) const { return evaluate(t); }
};

/// t -> |<b| exp(-i H lambda t) |a>|^2 on the unpercolated graph: the
/// fast-percolation limit of both the trajectory and the channel.
OracleCurve rescaled_reference(const Graph& g, const WalkConfig& cfg, double lambda, NodeIndex a, NodeIndex b);

/// Classical counterpart: t -> (exp(-H lambda t))_{b,a}.
OracleCurve rescaled_classical_reference(const Graph& g, const WalkConfig& cfg, double lambda, NodeIndex a,
                                         NodeIndex b);

// Closed forms below assume gamma = 1 and take plain (unrescaled) time; pass
// lambda * t to compare against a percolated run.

/// Return probability on the complete graph K_n:
/// (n-1)^2/n^2 + 1/n^2 + 2(n-1)/n^2 cos(n t). Full revivals at t = 2 pi k / n.
double complete_graph_quantum_return(std::size_t n, double t);

/// Classical return probability on K_n: ((n-1) exp(-n t) + 1) / n.
double complete_graph_classical_return(std::size_t n, double t);

/// Rescaled quantum return probability on the 4-cycle: cos^4(lambda t).
double ring4_quantum_return(double lambda, double t);

/// Rescaled classical return probability on the 4-cycle:
/// 1/4 + exp(-2 lambda t)/2 + exp(-4 lambda t)/4.
double ring4_classical_return(double lambda, double t);

/// Uniform site probability 1/n, the long-time value at finite step size.
double flat_limit(std::size_t n);

OracleCurve complete_graph_quantum_curve(std::size_t n, double lambda);
OracleCurve complete_graph_classical_curve(std::size_t n, double lambda);
OracleCurve ring4_classical_curve(double lambda);
OracleCurve flat_curve(std::size_t n);

}  // namespace percwalk
