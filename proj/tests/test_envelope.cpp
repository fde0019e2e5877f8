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
#include <sstream>

#include "percwalk/errors.hpp"
#include "percwalk/harness/envelope.hpp"
#include "percwalk/harness/table.hpp"

namespace percwalk::harness {
namespace {

TEST(LocalMaxima, StrictInteriorAndEndpoints) {
  const std::vector<double> v{3, 1, 2, 2, 1, 4, 0, 5};
  EXPECT_EQ(local_maxima(v), (std::vector<std::size_t>{0, 5, 7}));
  const std::vector<double> rising{1, 2, 3};
  EXPECT_EQ(local_maxima(rising), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(local_maxima(std::vector<double>{}).empty());
}

TEST(ExponentialFit, RecoversNoiseFreeAnsatz) {
  std::vector<double> t, y;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(2.5 * i);
    y.push_back(0.7 * std::exp(-0.05 * t.back()) + 0.25);
  }
  const auto fit = fit_exponential_decay(t, y, 0.25);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.a, 0.7, 1e-6 * 0.7);
  EXPECT_NEAR(fit.b, 0.05, 1e-6 * 0.05);
  EXPECT_LT(fit.residual, 1e-10);
  EXPECT_DOUBLE_EQ(fit.asymptote, 0.25);
  EXPECT_NEAR(fit(10.0), 0.7 * std::exp(-0.5) + 0.25, 1e-9);
}

TEST(ExponentialFit, EnvelopeOfAnOscillation) {
  std::vector<double> t, y;
  for (int i = 0; i <= 4000; ++i) {
    t.push_back(0.025 * i);
    y.push_back(0.25 + 0.7 * std::exp(-0.05 * t.back()) * std::pow(std::cos(0.8 * t.back()), 2));
  }
  const auto fit = fit_envelope(t, y, 0.25);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.a, 0.7, 1e-3);
  EXPECT_NEAR(fit.b, 0.05, 1e-4);
  EXPECT_GE(fit.points, 20U);
}

TEST(ExponentialFit, ReportsDegenerateInput) {
  const std::vector<double> t{1.0};
  const std::vector<double> y{0.5};
  const auto fit = fit_exponential_decay(t, y, 0.25);
  EXPECT_FALSE(fit.converged);
  EXPECT_FALSE(fit.message.empty());
  EXPECT_THROW(fit_exponential_decay(std::vector<double>{1, 2}, std::vector<double>{1}, 0.0), InvalidArgument);
}

TEST(LogLogSlope, PowerLaws) {
  const std::vector<double> x{0.1, 0.01, 0.001};
  EXPECT_NEAR(loglog_slope(x, std::vector<double>{0.2, 0.02, 0.002}), 1.0, 1e-12);
  EXPECT_NEAR(loglog_slope(x, std::vector<double>{0.3, 0.003, 0.00003}), 2.0, 1e-12);
  EXPECT_TRUE(std::isnan(loglog_slope(x, std::vector<double>{0.1, 0.0, 0.1})));
}

TEST(Table, CsvLayout) {
  Table table({"t", "p"});
  table.set_metadata("graph", "ring:4");
  table.set_metadata("lambda", 0.5);
  table.add_row({0.0, 1.0});
  table.add_row({0.1, 0.30000000000000004});
  std::ostringstream out;
  write_csv(out, table);
  EXPECT_EQ(out.str(), "# graph=ring:4\n# lambda=0.5\nt,p\n0,1\n0.1,0.30000000000000004\n");
  EXPECT_EQ(table.column("p"), (std::vector<double>{1.0, 0.30000000000000004}));
  EXPECT_EQ(table.metadata_value("lambda"), "0.5");
  EXPECT_THROW(table.add_row({1.0}), InvalidArgument);
  EXPECT_THROW(table.column("q"), InvalidArgument);
}

TEST(Table, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123, -2.5e-7}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Table, UnwritablePathIsAnIoError) {
  Table table({"t"});
  try {
    write_csv_file("/nonexistent/dir/out.csv", table);
    FAIL() << "expected an I/O error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/out.csv"), std::string::npos);
  }
}

}  // namespace
}  // namespace percwalk::harness
