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

#include "percwalk/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace percwalk {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

std::size_t parse_count(std::string_view text, std::string_view context) {
  std::size_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw InvalidArgument("invalid integer '" + std::string(text) + "' in " + std::string(context));
  }
  return value;
}

}  // namespace

Graph::Graph(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ == 0) throw InvalidArgument("graph needs at least one node");
  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  for (const auto& e : edges_) {
    if (e.u >= node_count_ || e.v >= node_count_) {
      throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") out of range for " + std::to_string(node_count_) + " nodes");
    }
    if (e.u == e.v) throw InvalidArgument("self-loop at node " + std::to_string(e.u));
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw InvalidArgument("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(node_count_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

bool Graph::has_edge(NodeIndex a, NodeIndex b) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return (e.u == a && e.v == b) || (e.u == b && e.v == a);
  });
}

Graph make_ring(std::size_t n) {
  if (n < 2) throw InvalidArgument("ring needs n >= 2");
  if (n == 2) return Graph(2, {{0, 1}});
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, std::move(edges));
}

Graph make_lattice2d(std::size_t width, std::size_t height, Boundary boundary) {
  if (width == 0 || height == 0) throw InvalidArgument("lattice dimensions must be positive");
  const bool wrap_x = boundary == Boundary::Periodic && width >= 3;
  const bool wrap_y = boundary == Boundary::Periodic && height >= 3;
  std::vector<Edge> edges;
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      const NodeIndex i = row * width + col;
      if (col + 1 < width) {
        edges.push_back({i, i + 1});
      } else if (wrap_x) {
        edges.push_back({i, row * width});
      }
      if (row + 1 < height) {
        edges.push_back({i, i + width});
      } else if (wrap_y) {
        edges.push_back({i, col});
      }
    }
  }
  return Graph(width * height, std::move(edges));
}

Graph make_complete(std::size_t n) {
  if (n < 2) throw InvalidArgument("complete graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return Graph(n, std::move(edges));
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t nodes = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    const std::string context = "edge list line " + std::to_string(line_no);
    if (b.empty() || (fields >> extra)) throw InvalidArgument("expected two fields on " + context);
    if (!have_header) {
      if (a != "nodes") throw InvalidArgument("edge list must start with 'nodes <N>' (" + context + ")");
      nodes = parse_count(b, context);
      have_header = true;
      continue;
    }
    edges.push_back({parse_count(a, context), parse_count(b, context)});
  }
  if (!have_header) throw InvalidArgument("edge list has no 'nodes <N>' header");
  return Graph(nodes, std::move(edges));
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path.string() + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "nodes " << g.node_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph parse_graph_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("graph spec '" + std::string(spec) + "' is not of the form kind:args");
  }
  const auto kind = spec.substr(0, colon);
  const auto args = spec.substr(colon + 1);
  const std::string context = "graph spec '" + std::string(spec) + "'";
  if (kind == "ring") return make_ring(parse_count(args, context));
  if (kind == "complete") return make_complete(parse_count(args, context));
  if (kind == "lattice2d" || kind == "lattice2d-periodic") {
    const auto x = args.find('x');
    if (x == std::string_view::npos) throw InvalidArgument(context + " needs WxH");
    return make_lattice2d(parse_count(args.substr(0, x), context), parse_count(args.substr(x + 1), context),
                          kind == "lattice2d" ? Boundary::Open : Boundary::Periodic);
  }
  if (kind == "file") return load_edge_list(std::filesystem::path(std::string(args)));
  throw InvalidArgument("unknown graph kind '" + std::string(kind) + "'");
}

// ---------------------------------------------------------------------------
// Realization

Realization::Realization(std::size_t edge_count) : size_(edge_count), words_(word_count(edge_count), 0) {}

Realization Realization::full(std::size_t edge_count) {
  Realization r(edge_count);
  for (std::size_t w = 0; w < r.words_.size(); ++w) r.words_[w] = ~std::uint64_t{0};
  if (const auto tail = edge_count % kWordBits; tail != 0) {
    r.words_.back() = (std::uint64_t{1} << tail) - 1;
  }
  return r;
}

Realization Realization::from_bits(std::size_t edge_count, std::uint64_t bits) {
  if (edge_count > kWordBits) throw InvalidArgument("from_bits supports at most 64 edges");
  Realization r(edge_count);
  if (edge_count == 0) return r;
  if (edge_count < kWordBits) bits &= (std::uint64_t{1} << edge_count) - 1;
  r.words_[0] = bits;
  return r;
}

std::size_t Realization::kept_count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Realization::test(std::size_t k) const {
  if (k >= size_) throw InvalidArgument("edge index out of range");
  return (words_[k / kWordBits] >> (k % kWordBits)) & 1U;
}

void Realization::set(std::size_t k, bool value) {
  if (k >= size_) throw InvalidArgument("edge index out of range");
  const auto bit = std::uint64_t{1} << (k % kWordBits);
  if (value) {
    words_[k / kWordBits] |= bit;
  } else {
    words_[k / kWordBits] &= ~bit;
  }
}

Realization Realization::operator|(const Realization& other) const {
  if (size_ != other.size_) throw InvalidArgument("realization sizes differ");
  Realization r = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] |= other.words_[w];
  return r;
}

Realization Realization::operator&(const Realization& other) const {
  if (size_ != other.size_) throw InvalidArgument("realization sizes differ");
  Realization r = *this;
  for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] &= other.words_[w];
  return r;
}

std::size_t RealizationHash::operator()(const Realization& r) const noexcept {
  std::uint64_t h = splitmix64(r.size());
  for (auto w : r.words()) h = splitmix64(h ^ w);
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Percolation

void require_probability(double lambda, const char* what) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument(std::string(what) + " must lie in [0, 1], got " + std::to_string(lambda));
  }
}

void PercolationParams::validate() const { require_probability(lambda); }

Realization sample_realization(const Graph& g, double lambda, Rng& rng) {
  require_probability(lambda);
  Realization r(g.edge_count());
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    if (rng.bernoulli(lambda)) r.set(k);
  }
  return r;
}

void require_enumerable(const Graph& g) {
  if (g.edge_count() > kEnumerationLimit) {
    throw CapacityError("exact enumeration needs at most " + std::to_string(kEnumerationLimit) +
                        " edges but the graph has " + std::to_string(g.edge_count()) +
                        "; use the Monte Carlo backend (montecarlo) instead");
  }
}

double realization_probability(std::size_t kept, std::size_t total, double lambda) {
  require_probability(lambda);
  if (kept > total) throw InvalidArgument("kept edge count exceeds total");
  return std::pow(lambda, static_cast<double>(kept)) *
         std::pow(1.0 - lambda, static_cast<double>(total - kept));
}

void for_each_realization(const Graph& g, double lambda,
                          const std::function<void(const Realization&, double)>& visit) {
  require_enumerable(g);
  require_probability(lambda);
  const std::size_t n = g.edge_count();
  // Probabilities depend only on the kept count.
  std::vector<double> by_count(n + 1);
  for (std::size_t k = 0; k <= n; ++k) by_count[k] = realization_probability(k, n, lambda);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    visit(Realization::from_bits(n, bits), by_count[static_cast<std::size_t>(std::popcount(bits))]);
  }
}

std::vector<WeightedRealization> enumerate_realizations(const Graph& g, double lambda) {
  std::vector<WeightedRealization> out;
  require_enumerable(g);
  out.reserve(std::size_t{1} << g.edge_count());
  for_each_realization(g, lambda, [&](const Realization& r, double p) { out.push_back({r, p}); });
  return out;
}

}  // namespace percwalk
