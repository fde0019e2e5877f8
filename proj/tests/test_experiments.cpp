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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "percwalk/errors.hpp"
#include "percwalk/harness/experiments.hpp"

namespace percwalk::harness {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "percwalk_experiments";
  fs::create_directories(dir);
  return dir / name;
}

ExperimentSpec small(const std::string& graph, double lambda, double tau, std::size_t steps) {
  ExperimentSpec spec;
  spec.graph_spec = graph;
  spec.lambda = lambda;
  spec.tau = tau;
  spec.steps = steps;
  return spec;
}

TEST(ExperimentSpec, ResolvesAnyTwoTimeParameters) {
  ExperimentSpec spec;
  spec.lambda = 0.5;
  spec.tau = 0.01;
  spec.steps = 500;
  EXPECT_DOUBLE_EQ(spec.resolve_run().total_time(), 5.0);
  spec.total_time = 5.0;
  EXPECT_EQ(spec.resolve_run().steps, 500U);
  spec.total_time = 6.0;
  EXPECT_THROW(spec.resolve_run(), InvalidArgument);
  spec.tau.reset();
  EXPECT_DOUBLE_EQ(spec.resolve_run().tau, 6.0 / 500);
  spec.steps.reset();
  EXPECT_THROW(spec.resolve_run(), InvalidArgument);
  spec.tau = 0.1;
  EXPECT_EQ(spec.resolve_run().steps, 60U);
}

TEST(ExperimentSpec, Validation) {
  auto spec = small("ring:4", 0.5, 0.1, 10);
  spec.initial_node = 4;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec.initial_node = 0;
  spec.sample_stride = 0;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec.sample_stride = 1;
  spec.graph_spec = "complete:15";
  spec.backend = Backend::Channel;
  EXPECT_THROW(spec.validate(), CapacityError);
  EXPECT_THROW(exp_channel_ring(small("complete:15", 0.5, 0.1, 10)), CapacityError);
}

TEST(ExperimentSpec, DefaultsDescribeTheReferenceRuns) {
  const auto lattice = ExperimentSpec::trajectory_lattice_defaults();
  EXPECT_EQ(lattice.graph_spec, "lattice2d:10x10");
  EXPECT_EQ(lattice.initial_node, 44U);
  EXPECT_DOUBLE_EQ(lattice.resolve_run().total_time(), 10.0);
  EXPECT_EQ(ExperimentSpec::channel_ring_defaults().resolve_run().steps, 5000U);
  EXPECT_DOUBLE_EQ(ExperimentSpec::longtime_defaults().resolve_run().tau, 0.1);
  EXPECT_EQ(default_lambda_sweep(), (std::vector<double>{0.2, 0.4, 0.6, 0.8, 1.0}));
  EXPECT_EQ(sweep_path("out/run.csv", 0.4), fs::path("out/run_lambda0.4.csv"));
}

TEST(Trajectory, FullAndZeroPercolation) {
  auto spec = small("lattice2d:4x4", 1.0, 0.01, 1000);
  spec.initial_node = 5;
  EXPECT_LE(exp_trajectory_lattice(spec).max_deviation, 1e-8);
  spec.lambda = 0.0;
  const auto frozen = exp_trajectory_lattice(spec);
  for (double p : frozen.table.column("p_sim")) EXPECT_NEAR(p, 1.0, 1e-12);
}

TEST(Trajectory, HalfPercolatedLatticeTracksTheReference) {
  auto spec = ExperimentSpec::trajectory_lattice_defaults();
  spec.lambda = 0.5;
  spec.sample_stride = 1000;
  const auto result = exp_trajectory_lattice(spec);
  EXPECT_LE(result.max_deviation, 0.05);
  EXPECT_EQ(result.table.rows(), 101U);
  EXPECT_EQ(result.table.metadata_value("start"), "44");
}

TEST(Trajectory, RowsFollowTheStride) {
  auto spec = small("ring:6", 0.5, 0.01, 105);
  spec.sample_stride = 10;
  const auto result = exp_trajectory_lattice(spec);
  const auto t = result.table.column("t");
  ASSERT_EQ(t.size(), 12U);
  EXPECT_DOUBLE_EQ(t.back(), 1.05);
  EXPECT_EQ(result.table.metadata_value("seed"), "1");
}

TEST(Channel, FullPercolationAndTrace) {
  const auto exact = exp_channel_ring(small("ring:6", 1.0, 0.01, 1000));
  EXPECT_LE(exact.max_deviation, 1e-8);
  const auto percolated = exp_channel_ring(small("ring:6", 0.5, 0.01, 1000));
  EXPECT_LE(percolated.max_trace_error, 1e-10);
  EXPECT_GT(percolated.max_deviation, 0.0);
}

TEST(CompleteGraph, SmallRunTracksBothClosedForms) {
  auto spec = small("complete:6", 0.3, 1e-3, 10000);
  spec.sample_stride = 100;
  const auto result = exp_complete_graph(spec);
  EXPECT_LE(result.quantum_max_deviation, 0.05);
  EXPECT_LE(result.classical_max_deviation, 0.02);
  EXPECT_NEAR(result.revival_time, 2 * std::numbers::pi / (6 * 0.3), 1e-12);
  EXPECT_GT(result.revival_probability, 0.9);
  EXPECT_EQ(result.table.rows(), 101U);

  const auto ring = exp_complete_graph(small("ring:5", 0.5, 0.01, 100));
  EXPECT_TRUE(std::isnan(ring.revival_time));
}

TEST(Longtime, RingOfFourFlattensWithTheExpectedEnvelope) {
  auto spec = ExperimentSpec::longtime_defaults();
  spec.output_path = scratch("longtime.csv");
  const auto result = exp_longtime_finite_tau(spec, 3000);
  EXPECT_GE(result.final_probability, 0.23);
  EXPECT_LE(result.final_probability, 0.27);
  EXPECT_TRUE(result.fit.converged);
  EXPECT_GE(result.fit.a, 0.70);
  EXPECT_LE(result.fit.a, 0.79);
  EXPECT_GE(result.fit.b, 0.044);
  EXPECT_LE(result.fit.b, 0.054);
  EXPECT_TRUE(fs::exists(scratch("longtime.csv")));
  EXPECT_TRUE(fs::exists(scratch("longtime_trajectory.csv")));
  EXPECT_EQ(result.trajectory.rows(), 3001U);
}

TEST(MonteCarlo, AgreesWithOracleAtFullPercolation) {
  auto spec = small("ring:4", 1.0, 0.05, 100);
  spec.trajectories = 20;
  const auto result = exp_monte_carlo(spec);
  EXPECT_LE(result.max_deviation, 1e-8);
  for (double se : result.table.column("p_stderr")) EXPECT_LE(se, 1e-8);
}

TEST(Convergence, ErrorShrinksAndVanishesWithoutPercolation) {
  auto spec = ExperimentSpec::convergence_defaults();
  const std::vector<std::size_t> steps{200, 2000};
  const auto percolated = exp_convergence(spec, steps);
  EXPECT_LT(percolated.points[1].max_abs_error, percolated.points[0].max_abs_error);
  spec.lambda = 1.0;
  const auto exact = exp_convergence(spec, steps);
  for (const auto& p : exact.points) EXPECT_LE(p.max_abs_error, 1e-8);
}

TEST(Convergence, SlopeOverTheStandardScan) {
  const std::vector<std::size_t> steps{250, 500, 1000, 2000, 4000};
  const auto result = exp_convergence(ExperimentSpec::convergence_defaults(), steps);
  EXPECT_GE(result.slope, 0.4);
  EXPECT_LE(result.slope, 1.3);
  EXPECT_EQ(result.table.rows(), 5U);
}

TEST(Horizon, Properties) {
  auto spec = ExperimentSpec::horizon_defaults();
  const std::vector<double> eps{0.02, 0.05, 0.1};
  const std::vector<std::size_t> steps{500, 4000};
  const auto result = exp_epsilon_horizon(spec, eps, steps);
  ASSERT_EQ(result.points.size(), 6U);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t e = 1; e < 3; ++e) {
      EXPECT_GE(result.points[s * 3 + e].horizon, result.points[s * 3 + e - 1].horizon);
    }
  }
  EXPECT_GE(result.points[4].horizon, result.points[1].horizon);

  spec.lambda = 1.0;
  for (const auto& p : exp_epsilon_horizon(spec, eps, steps).points) EXPECT_DOUBLE_EQ(p.horizon, 10.0);
  EXPECT_THROW(exp_epsilon_horizon(spec, std::vector<double>{0.0}, steps), InvalidArgument);
}

TEST(Output, DeterministicFilesWithMetadata) {
  auto spec = small("ring:5", 0.4, 0.02, 200);
  spec.seed = 77;
  spec.output_path = scratch("a.csv");
  exp_trajectory_lattice(spec);
  spec.output_path = scratch("b.csv");
  exp_trajectory_lattice(spec);
  const auto a = slurp(scratch("a.csv"));
  EXPECT_EQ(a, slurp(scratch("b.csv")));
  for (const char* key : {"# graph=ring:5", "# lambda=0.4", "# tau=0.02", "# steps=200", "# seed=77", "# start=0"}) {
    EXPECT_NE(a.find(key), std::string::npos) << key;
  }
  EXPECT_NE(a.find("\nt,p_sim,p_oracle\n"), std::string::npos);
}

TEST(Output, UnwritablePath) {
  auto spec = small("ring:4", 0.5, 0.1, 10);
  spec.output_path = "/nonexistent/dir/out.csv";
  EXPECT_THROW(exp_channel_ring(spec), IoError);
}

}  // namespace
}  // namespace percwalk::harness
