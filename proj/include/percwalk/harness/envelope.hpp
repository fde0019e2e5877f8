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
#include <span>
#include <string>
#include <vector>

namespace percwalk::harness {

/// y(t) = a exp(-b t) + asymptote, fitted over the local maxima of a series.
struct EnvelopeFit {
  double a = 0.0;
  double b = 0.0;
  /// RMS of the fit residuals over the fitted points.
  double residual = 0.0;
  double asymptote = 0.0;
  std::size_t points = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string message;

  double operator()(double t) const;
};

/// Indices of strict local maxima. An endpoint qualifies when it is strictly
/// greater than its only neighbour, so a series that starts at its peak keeps
/// that peak.
std::vector<std::size_t> local_maxima(std::span<const double> values);

/// Nonlinear least squares of a exp(-b t) + asymptote over (t, y), started from
/// a log-linear regression of log(y - asymptote) and refined by damped
/// Gauss-Newton (at most max_iterations).
EnvelopeFit fit_exponential_decay(std::span<const double> t, std::span<const double> y, double asymptote,
                                  std::size_t max_iterations = 200);

/// local_maxima followed by fit_exponential_decay.
EnvelopeFit fit_envelope(std::span<const double> t, std::span<const double> y, double asymptote);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace percwalk::harness
