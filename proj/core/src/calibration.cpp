// Copyright 2026 The nvqhe Authors
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

#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "nvqhe/errors.hpp"
#include "nvqhe/nv_model.hpp"

namespace nvqhe::nv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) {
    throw DomainError("saturation csv line " + std::to_string(line) + ": bad number '" + t + "'");
  }
  return v;
}

// Unit-amplitude model response for each power.
RVector unit_response(std::span<const SaturationPoint> data, double r, const RateConstants& rc) {
  RVector f(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    f(static_cast<Eigen::Index>(i)) = saturation_model(data[i].power_mw, r, 1.0, rc);
  }
  return f;
}

}  // namespace

std::vector<SaturationPoint> read_saturation_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("saturation csv: missing header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
  {
    std::stringstream header(line);
    std::string a, b;
    std::getline(header, a, ',');
    std::getline(header, b, ',');
    if (trim(a) != "power_mW" || trim(b) != "fluorescence_counts") {
      throw DomainError("saturation csv: header must be 'power_mW,fluorescence_counts'");
    }
  }
  std::vector<SaturationPoint> out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::stringstream row(line);
    std::string a, b, extra;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || std::getline(row, extra, ',')) {
      throw DomainError("saturation csv line " + std::to_string(number) + ": expected 2 columns");
    }
    out.push_back({parse_number(a, number), parse_number(b, number)});
  }
  return out;
}

double saturation_model(double power_mw, double r_khz_per_mw, double amplitude,
                        const RateConstants& rc) {
  const double pump = r_khz_per_mw * 1e-3 * power_mw;
  if (!(pump > 0.0)) return 0.0;
  return amplitude * fluorescence_rate(steady_state(optical_matrix(rc, pump)));
}

CalibrationFit fit_gamma_calibration(std::span<const SaturationPoint> data,
                                     const RateConstants& rc, const FitOptions& options) {
  if (data.size() < 5) throw DomainError("fit_gamma_calibration: need at least 5 points");
  for (const auto& p : data) {
    if (!(p.power_mw >= 0.0) || !std::isfinite(p.fluorescence)) {
      throw DomainError("fit_gamma_calibration: powers must be >= 0 and counts finite");
    }
  }
  if (!(options.r_initial > 0.0)) throw DomainError("fit_gamma_calibration: r_initial must be > 0");

  const auto n = static_cast<Eigen::Index>(data.size());
  RVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = data[static_cast<std::size_t>(i)].fluorescence;

  double r = options.r_initial;
  RVector f = unit_response(data, r, rc);
  const double ff = f.squaredNorm();
  if (ff == 0.0) throw FitError("fit_gamma_calibration: model is identically zero");
  double amp = f.dot(y) / ff;
  RVector res = amp * f - y;
  double rss = res.squaredNorm();

  double lambda = 1e-3;
  Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
  CalibrationFit fit;
  bool converged = false;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    fit.iterations = it + 1;
    const double h = 1e-5 * r;
    const RVector dfdr = (unit_response(data, r + h, rc) - unit_response(data, r - h, rc)) / (2 * h);
    Eigen::MatrixXd jac(n, 2);
    jac.col(0) = amp * dfdr;
    jac.col(1) = f;
    jtj = jac.transpose() * jac;
    const Eigen::Vector2d grad = jac.transpose() * res;

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Eigen::Matrix2d damped = jtj;
      damped.diagonal() *= 1.0 + lambda;
      const Eigen::Vector2d step = damped.ldlt().solve(-grad);
      const double r_new = r + step(0);
      const double amp_new = amp + step(1);
      if (!(r_new > 0.0)) {
        lambda *= 4.0;
        continue;
      }
      const RVector f_new = unit_response(data, r_new, rc);
      const RVector res_new = amp_new * f_new - y;
      const double rss_new = res_new.squaredNorm();
      if (rss_new <= rss) {
        const bool small_step = std::abs(step(0)) <= options.rel_tol * std::abs(r_new) &&
                                std::abs(step(1)) <= options.rel_tol * std::abs(amp_new) + 1e-300;
        const bool flat = rss - rss_new <= 1e-15 * rss;
        r = r_new;
        amp = amp_new;
        f = f_new;
        res = res_new;
        rss = rss_new;
        lambda = std::max(lambda / 4.0, 1e-12);
        accepted = true;
        if (small_step || flat) converged = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {
      // No descent direction left: the current point is a minimum to working precision.
      converged = true;
    }
    if (converged) break;
  }
  if (!converged) {
    throw FitError("fit_gamma_calibration: no convergence after " +
                   std::to_string(options.max_iterations) + " iterations (rss = " +
                   std::to_string(rss) + ")");
  }
  fit.r_khz_per_mw = r;
  fit.amplitude = amp;
  fit.residual_sum_squares = rss;
  const double dof = static_cast<double>(n - 2);
  const double s2 = dof > 0 ? rss / dof : 0.0;
  const Eigen::Matrix2d cov = s2 * jtj.inverse();
  fit.r_sigma = std::sqrt(std::max(0.0, cov(0, 0)));
  fit.amplitude_sigma = std::sqrt(std::max(0.0, cov(1, 1)));
  return fit;
}

}  // namespace nvqhe::nv
