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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percwalk/errors.hpp"
#include "percwalk/rng.hpp"

namespace percwalk {

using NodeIndex = std::size_t;

struct Edge {
  NodeIndex u = 0;
  NodeIndex v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with a fixed edge order. Edge k of the list is bit k
/// of every Realization over this graph.
class Graph {
 public:
  Graph(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t k) const { return edges_.at(k); }

  std::vector<std::size_t> degrees() const;
  bool has_edge(NodeIndex a, NodeIndex b) const;

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
};

/// Cycle 0-1-...-(n-1)-0. For n = 2 the two cycle edges coincide and a single
/// edge is returned.
Graph make_ring(std::size_t n);

enum class Boundary { Open, Periodic };

/// width x height grid, node index row * width + col, nearest-neighbour edges.
/// Periodic wrap edges are only added along dimensions of length >= 3 so the
/// result stays a simple graph.
Graph make_lattice2d(std::size_t width, std::size_t height, Boundary boundary = Boundary::Open);

Graph make_complete(std::size_t n);

/// Edge-list text format: optional '#' comment lines, a required header
/// "nodes <N>", then one "u v" pair per line (0-indexed).
Graph read_edge_list(std::istream& in);
Graph load_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& g);

/// "ring:N", "lattice2d:WxH", "lattice2d-periodic:WxH", "complete:N", "file:PATH".
Graph parse_graph_spec(std::string_view spec);

/// Bitset over the edges of a graph; bit k set means edge k is kept.
class Realization {
 public:
  Realization() = default;
  explicit Realization(std::size_t edge_count);

  static Realization full(std::size_t edge_count);
  /// Low bits of `bits`; requires edge_count <= 64.
  static Realization from_bits(std::size_t edge_count, std::uint64_t bits);

  std::size_t size() const noexcept { return size_; }
  std::size_t kept_count() const noexcept;
  bool test(std::size_t k) const;
  void set(std::size_t k, bool value = true);
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  Realization operator|(const Realization& other) const;
  Realization operator&(const Realization& other) const;
  friend bool operator==(const Realization&, const Realization&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct RealizationHash {
  std::size_t operator()(const Realization& r) const noexcept;
};

struct PercolationParams {
  double lambda = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

void require_probability(double lambda, const char* what = "lambda");

/// Keeps each edge independently with probability lambda, consuming exactly
/// one uniform draw per edge in edge order.
Realization sample_realization(const Graph& g, double lambda, Rng& rng);
inline Realization sample_realization(const Graph& g, const PercolationParams& params, Rng& rng) {
  params.validate();
  return sample_realization(g, params.lambda, rng);
}

/// Exact enumeration refuses graphs with more edges than this.
inline constexpr std::size_t kEnumerationLimit = 24;

void require_enumerable(const Graph& g);

/// lambda^kept * (1 - lambda)^(total - kept).
double realization_probability(std::size_t kept, std::size_t total, double lambda);

struct WeightedRealization {
  Realization mask;
  double probability = 0.0;
};

/// Visits every one of the 2^edge_count realizations once, in increasing mask
/// order, with its probability.
void for_each_realization(const Graph& g, double lambda,
                          const std::function<void(const Realization&, double)>& visit);

std::vector<WeightedRealization> enumerate_realizations(const Graph& g, double lambda);

}  // namespace percwalk
