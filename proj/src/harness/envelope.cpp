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

#include "percwalk/harness/envelope.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "percwalk/errors.hpp"

namespace percwalk::harness {

namespace {

double sum_squares(std::span<const double> t, std::span<const double> y, double a, double b, double c) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = a * std::exp(-b * t[i]) + c - y[i];
    s += r * r;
  }
  return s;
}

}  // namespace

double EnvelopeFit::operator()(double t) const { return a * std::exp(-b * t) + asymptote; }

std::vector<std::size_t> local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  const std::size_t n = values.size();
  if (n < 2) return out;
  if (values[0] > values[1]) out.push_back(0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  if (values[n - 1] > values[n - 2]) out.push_back(n - 1);
  return out;
}

EnvelopeFit fit_exponential_decay(std::span<const double> t, std::span<const double> y, double asymptote,
                                  std::size_t max_iterations) {
  if (t.size() != y.size()) throw InvalidArgument("fit needs matching t and y");
  EnvelopeFit fit;
  fit.asymptote = asymptote;
  fit.points = t.size();

  // Log-linear start: log(y - c) = log a - b t over points above the asymptote.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (y[i] <= asymptote) continue;
    const double ly = std::log(y[i] - asymptote);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
    ++m;
  }
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (m < 2 || denom <= 0.0) {
    fit.message = "fewer than two distinct points above the asymptote";
    fit.residual = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
  fit.a = std::exp((sy - slope * sx) / static_cast<double>(m));
  fit.b = -slope;

  double sse = sum_squares(t, y, fit.a, fit.b, asymptote);
  for (fit.iterations = 0; fit.iterations < max_iterations; ++fit.iterations) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = std::exp(-fit.b * t[i]);
      const Eigen::Vector2d grad(e, -fit.a * t[i] * e);
      const double r = fit.a * e + asymptote - y[i];
      jtj += grad * grad.transpose();
      jtr += grad * r;
    }
    const Eigen::Vector2d step = jtj.ldlt().solve(-jtr);
    if (!step.allFinite()) {
      fit.message = "singular normal equations";
      break;
    }
    // Halve the step until the residual stops growing.
    double scale = 1.0;
    double trial = sum_squares(t, y, fit.a + step(0), fit.b + step(1), asymptote);
    while (trial > sse && scale > 1e-10) {
      scale *= 0.5;
      trial = sum_squares(t, y, fit.a + scale * step(0), fit.b + scale * step(1), asymptote);
    }
    if (trial > sse) {
      fit.converged = true;  // no descent direction left: at a minimum
      break;
    }
    fit.a += scale * step(0);
    fit.b += scale * step(1);
    const double change = scale * step.norm() / std::max(1.0, std::hypot(fit.a, fit.b));
    sse = trial;
    if (change < 1e-14) {
      fit.converged = true;
      ++fit.iterations;
      break;
    }
  }
  if (!fit.converged && fit.message.empty()) fit.message = "iteration limit reached";
  if (fit.b < 0.0) {
    fit.converged = false;
    fit.message = "fitted decay rate is negative";
  }
  fit.residual = std::sqrt(sse / static_cast<double>(t.size()));
  return fit;
}

EnvelopeFit fit_envelope(std::span<const double> t, std::span<const double> y, double asymptote) {
  if (t.size() != y.size()) throw InvalidArgument("fit needs matching t and y");
  std::vector<double> tm, ym;
  for (auto i : local_maxima(y)) {
    tm.push_back(t[i]);
    ym.push_back(y[i]);
  }
  return fit_exponential_decay(tm, ym, asymptote);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs at least two matching points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace percwalk::harness
