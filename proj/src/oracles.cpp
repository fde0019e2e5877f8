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

#include "percwalk/oracles.hpp"

#include <cmath>
#include <memory>

namespace percwalk {

namespace {

void require_nodes(std::size_t n, std::size_t min) {
  if (n < min) throw InvalidArgument("oracle needs at least " + std::to_string(min) + " nodes");
}

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("oracle time must be finite and >= 0");
}

std::string number_label(double x) {
  std::string s = std::to_string(x);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

OracleCurve rescaled_reference(const Graph& g, const WalkConfig& cfg, double lambda, NodeIndex a, NodeIndex b) {
  require_probability(lambda);
  auto d = std::make_shared<const Decomposition>(decompose_graph(g, cfg));
  // Validate nodes once, up front.
  transition_probability(*d, a, b, 0.0);
  return {"rescaled(lambda=" + number_label(lambda) + ")",
          [d, lambda, a, b](double t) { return transition_probability(*d, a, b, lambda * t); }};
}

OracleCurve rescaled_classical_reference(const Graph& g, const WalkConfig& cfg, double lambda, NodeIndex a,
                                         NodeIndex b) {
  require_probability(lambda);
  auto d = std::make_shared<const Decomposition>(decompose_graph(g, cfg));
  classical_transition(*d, a, b, 0.0);
  return {"rescaled-classical(lambda=" + number_label(lambda) + ")",
          [d, lambda, a, b](double t) { return classical_transition(*d, a, b, lambda * t); }};
}

double complete_graph_quantum_return(std::size_t n, double t) {
  require_nodes(n, 2);
  if (!std::isfinite(t)) throw InvalidArgument("oracle time must be finite");
  const double nn = static_cast<double>(n);
  return ((nn - 1.0) * (nn - 1.0) + 1.0 + 2.0 * (nn - 1.0) * std::cos(nn * t)) / (nn * nn);
}

double complete_graph_classical_return(std::size_t n, double t) {
  require_nodes(n, 2);
  require_time(t);
  const double nn = static_cast<double>(n);
  return ((nn - 1.0) * std::exp(-nn * t) + 1.0) / nn;
}

double ring4_quantum_return(double lambda, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("oracle time must be finite");
  const double c = std::cos(lambda * t);
  return c * c * c * c;
}

double ring4_classical_return(double lambda, double t) {
  require_time(t);
  return 0.25 + std::exp(-2.0 * lambda * t) / 2.0 + std::exp(-4.0 * lambda * t) / 4.0;
}

double flat_limit(std::size_t n) {
  require_nodes(n, 1);
  return 1.0 / static_cast<double>(n);
}

OracleCurve complete_graph_quantum_curve(std::size_t n, double lambda) {
  require_nodes(n, 2);
  require_probability(lambda);
  return {"complete-quantum(n=" + std::to_string(n) + ")",
          [n, lambda](double t) { return complete_graph_quantum_return(n, lambda * t); }};
}

OracleCurve complete_graph_classical_curve(std::size_t n, double lambda) {
  require_nodes(n, 2);
  require_probability(lambda);
  return {"complete-classical(n=" + std::to_string(n) + ")",
          [n, lambda](double t) { return complete_graph_classical_return(n, lambda * t); }};
}

OracleCurve ring4_classical_curve(double lambda) {
  require_probability(lambda);
  return {"ring4-classical", [lambda](double t) { return ring4_classical_return(lambda, t); }};
}

OracleCurve flat_curve(std::size_t n) {
  const double value = flat_limit(n);
  return {"flat(n=" + std::to_string(n) + ")", [value](double) { return value; }};
}

}  // namespace percwalk
