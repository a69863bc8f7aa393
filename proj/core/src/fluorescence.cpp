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

#include "nvqhe/fluorescence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "nvqhe/errors.hpp"
#include "nvqhe/quadrature.hpp"

namespace nvqhe::fluorescence {

namespace {

RVector excited_row() {
  RVector e = RVector::Zero(nv::level::kCount);
  e(nv::level::E0) = 1.0;
  e(nv::level::Em1) = 1.0;
  e(nv::level::Ep1) = 1.0;
  return e;
}

// Phi(t_{k+1}, t_k) for every consecutive pair of grid samples.
std::vector<RMatrix> step_matrices(const FundamentalSolution& phi, const TimeGrid& grid) {
  const Eigen::Index n = phi.dimension();
  std::vector<RMatrix> steps(grid.size() > 0 ? grid.size() - 1 : 0, RMatrix::Identity(n, n));
  const auto segs = phi.schedule();
  for (std::size_t s = 0; s < grid.segments.size(); ++s) {
    const auto [first, last] = grid.segments[s];
    if (last == first) continue;
    const RMatrix step = numerics::mat_exp(segs[s].generator, grid.spacing[s]);
    for (std::size_t k = first; k < last; ++k) steps[k] = step;
  }
  return steps;
}

std::string schedule_label(const KappaResult& k) {
  if (k.schedule == Schedule::continuous) return "continuous";
  char buf[64];
  std::snprintf(buf, sizeof buf, "two_stroke(%.6g)", k.duty);
  return buf;
}

}  // namespace

FundamentalSolution::FundamentalSolution(std::vector<Segment> schedule)
    : segments_(std::move(schedule)) {
  if (segments_.empty()) throw DimensionError("FundamentalSolution: empty schedule");
  dim_ = segments_.front().generator.rows();
  monodromy_ = RMatrix::Identity(dim_, dim_);
  for (const auto& seg : segments_) {
    numerics::require_square(seg.generator, "FundamentalSolution");
    if (seg.generator.rows() != dim_) {
      throw DimensionError("FundamentalSolution: segment dimensions differ");
    }
    if (!(seg.duration >= 0.0) || !std::isfinite(seg.duration)) {
      throw DomainError("FundamentalSolution: negative or non-finite segment duration");
    }
    starts_.push_back(period_);
    period_ += seg.duration;
    monodromy_ = numerics::mat_exp(seg.generator, seg.duration) * monodromy_;
  }
  if (period_ <= 0.0) throw DomainError("FundamentalSolution: zero period");
}

RMatrix FundamentalSolution::operator()(double t, double s) const {
  const double slack = 1e-12 * period_;
  if (s < -slack || t > period_ + slack) {
    throw DomainError("FundamentalSolution: times outside [0, period]");
  }
  if (t < s) throw DomainError("FundamentalSolution: requires t >= s");
  RMatrix out = RMatrix::Identity(dim_, dim_);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double a = std::max(s, starts_[i]);
    const double b = std::min(t, starts_[i] + segments_[i].duration);
    if (b > a) out = numerics::mat_exp(segments_[i].generator, b - a) * out;
  }
  return out;
}

FundamentalSolution make_schedule(const nv::RateConstants& rc, const KappaConfig& cfg) {
  if (!(cfg.tau_cyc > 0.0)) throw DomainError("make_schedule: tau_cyc must be positive");
  if (!(cfg.pump >= 0.0)) throw DomainError("make_schedule: pump must be non-negative");
  const RMatrix on = nv::optical_matrix(rc, cfg.pump);
  if (cfg.schedule == Schedule::continuous) {
    return FundamentalSolution({{on, cfg.tau_cyc}});
  }
  if (!(cfg.duty > 0.0 && cfg.duty < 1.0)) {
    throw DomainError("make_schedule: duty must lie in (0, 1)");
  }
  const RMatrix off = nv::optical_matrix(rc, 0.0);
  return FundamentalSolution(
      {{off, cfg.duty * cfg.tau_cyc}, {on, (1.0 - cfg.duty) * cfg.tau_cyc}});
}

std::vector<double> TimeGrid::weights(std::size_t from, std::size_t to) const {
  if (to >= t.size() || from > to) throw DomainError("TimeGrid::weights: bad index range");
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const std::size_t a = std::max(from, segments[s].first);
    const std::size_t b = std::min(to, segments[s].second);
    if (b <= a) continue;
    const auto local = quadrature::sample_weights(b - a + 1, spacing[s]);
    for (std::size_t i = 0; i < local.size(); ++i) w[a + i] += local[i];
  }
  return w;
}

TimeGrid make_grid(const FundamentalSolution& phi, std::size_t intervals) {
  if (intervals < 2) throw DomainError("make_grid: need at least two intervals");
  TimeGrid grid;
  grid.period = phi.period();
  double start = 0.0;
  for (const auto& seg : phi.schedule()) {
    const auto n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(static_cast<double>(intervals) *
                                                 seg.duration / phi.period())));
    const double h = seg.duration / static_cast<double>(n);
    const std::size_t first = grid.t.size();
    for (std::size_t i = 0; i <= n; ++i) {
      grid.t.push_back(i == n ? start + seg.duration : start + h * static_cast<double>(i));
    }
    grid.segments.emplace_back(first, grid.t.size() - 1);
    grid.spacing.push_back(h);
    start += seg.duration;
  }
  grid.t.back() = phi.period();
  return grid;
}

RVector drive_vector() {
  RVector nu = RVector::Zero(nv::level::kCount);
  nu(nv::level::G0) = -1.0;
  nu(nv::level::Gp1) = 1.0;
  return nu;
}

RVector undriven_fixed_point(const FundamentalSolution& phi) {
  const auto e = numerics::eig(phi.monodromy());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < e.values.size(); ++i) {
    if (std::abs(e.values(i) - 1.0) < std::abs(e.values(best) - 1.0)) best = i;
  }
  const RVector v = e.vectors.col(best).real();
  const double total = v.sum();
  if (std::abs(total) < 1e-14) throw DegeneracyError("undriven_fixed_point: zero population sum");
  return v / total;
}

RMatrix periodic_pseudo_inverse(const FundamentalSolution& phi) {
  const Eigen::Index n = phi.dimension();
  return numerics::pseudo_inverse(RMatrix(RMatrix::Identity(n, n) - phi.monodromy()));
}

PeriodicResponse periodic_response(const FundamentalSolution& phi, const TimeGrid& grid,
                                   std::span<const double> rate) {
  const std::size_t n = grid.size();
  if (rate.size() != n) throw DimensionError("periodic_response: rate samples do not match grid");
  const auto steps = step_matrices(phi, grid);
  const RVector nu = drive_vector();

  PeriodicResponse out;
  out.grid = grid;
  out.rho0 = undriven_fixed_point(phi);

  // tail[j] = Phi(period, t_j) nu.
  std::vector<RVector> tail(n);
  RMatrix back = RMatrix::Identity(phi.dimension(), phi.dimension());
  tail[n - 1] = nu;
  for (std::size_t j = n - 1; j-- > 0;) {
    back = back * steps[j];
    tail[j] = back * nu;
  }
  const auto w_full = grid.weights();
  RVector b = RVector::Zero(phi.dimension());
  for (std::size_t j = 0; j < n; ++j) b += w_full[j] * rate[j] * tail[j];
  out.sigma_tilde0 = periodic_pseudo_inverse(phi) * b;

  out.rho.resize(n);
  out.sigma.resize(n);
  RVector rho = out.rho0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) rho = steps[k - 1] * rho;
    out.rho[k] = rho;
  }
  // sigma(t_k) - rho(t_k) = Phi(t_k, 0) sigma_tilde0 + int_0^t_k Phi(t_k, tau) nu R(tau).
  std::vector<RVector> pushed(n);
  for (std::size_t j = 0; j < n; ++j) pushed[j] = rate[j] * nu;
  RVector h = out.sigma_tilde0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      h = steps[k - 1] * h;
      for (std::size_t j = 0; j < k; ++j) pushed[j] = steps[k - 1] * pushed[j];
    }
    RVector s = h;
    if (k > 0) {
      const auto w = grid.weights(0, k);
      for (std::size_t j = 0; j <= k; ++j) s += w[j] * pushed[j];
    }
    out.sigma[k] = out.rho[k] + s;
  }
  return out;
}

Kernels kernels(const FundamentalSolution& phi, const TimeGrid& grid) {
  const std::size_t n = grid.size();
  const auto steps = step_matrices(phi, grid);
  const RVector nu = drive_vector();
  const RVector oe = excited_row();
  const RMatrix A = periodic_pseudo_inverse(phi);
  const Eigen::Index d = phi.dimension();

  Kernels out;
  out.grid = grid;
  out.g.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.f = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  // lead[k] = Omega_E Phi(t_k, 0) A as a row; tail[j] = Phi(period, t_j) nu.
  std::vector<RVector> lead(n), tail(n);
  RMatrix fwd = RMatrix::Identity(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) fwd = steps[k - 1] * fwd;
    lead[k] = (oe.transpose() * fwd * A).transpose();
  }
  RMatrix back = RMatrix::Identity(d, d);
  tail[n - 1] = nu;
  for (std::size_t j = n - 1; j-- > 0;) {
    back = back * steps[j];
    tail[j] = back * nu;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      out.g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = lead[k].dot(tail[j]);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    RVector v = nu;
    for (std::size_t k = j + 1; k < n; ++k) {
      v = steps[k - 1] * v;
      if (grid.t[k] > grid.t[j]) {
        out.f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = oe.dot(v);
      }
    }
  }
  out.h = out.g + out.f;

  const auto w = grid.weights();
  const Eigen::Map<const RVector> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  out.H = out.h.transpose() * wv;
  out.H_mean = wv.dot(out.H) / grid.period;
  out.H_variation = (out.H.maxCoeff() - out.H.minCoeff()) / std::abs(out.H_mean);
  return out;
}

KappaResult kappa(const nv::RateConstants& rc, const KappaConfig& cfg, double max_variation) {
  const FundamentalSolution phi = make_schedule(rc, cfg);
  const TimeGrid grid = make_grid(phi, cfg.points);
  const Kernels k = kernels(phi, grid);

  const RVector oe = excited_row();
  const RVector rho0 = undriven_fixed_point(phi);
  const auto steps = step_matrices(phi, grid);
  const auto w = grid.weights();
  RVector rho = rho0;
  double exc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) rho = steps[i - 1] * rho;
    exc += w[i] * oe.dot(rho);
  }

  KappaResult r;
  r.pump = cfg.pump;
  r.schedule = cfg.schedule;
  r.duty = cfg.schedule == Schedule::continuous ? 0.0 : cfg.duty;
  r.tau_cyc = cfg.tau_cyc;
  r.H_mean = k.H_mean;
  r.H_variation = k.H_variation;
  r.mean_excited = exc / grid.period;
  if (!(k.H_variation <= max_variation)) {
    throw KernelError("kappa: H(tau) relative variation " + std::to_string(k.H_variation) +
                      " exceeds " + std::to_string(max_variation));
  }
  r.kappa = -r.mean_excited / k.H_mean;
  return r;
}

double power_from_fluorescence(double relative_drop, const KappaResult& k,
                               const engine::EngineLevels& levels) {
  return levels.omega10 * k.kappa * relative_drop;
}

FluorescenceTrace synthesize_fluorescence(const PeriodicResponse& response) {
  const RVector oe = excited_row();
  const auto w = response.grid.weights();
  FluorescenceTrace out;
  out.t = response.grid.t;
  for (std::size_t k = 0; k < out.t.size(); ++k) {
    out.F.push_back(oe.dot(response.sigma[k]));
    out.F0.push_back(oe.dot(response.rho[k]));
    out.mean_F += w[k] * out.F.back();
    out.mean_F0 += w[k] * out.F0.back();
  }
  out.mean_F /= response.grid.period;
  out.mean_F0 /= response.grid.period;
  out.relative_drop = (out.mean_F0 - out.mean_F) / out.mean_F0;
  return out;
}

std::vector<double> engine_transfer_rate(const engine::CycleConfig& cfg,
                                         const engine::ThermalModel& model,
                                         const engine::DetuningDistribution& dist,
                                         const TimeGrid& grid) {
  if (grid.segments.empty()) throw DimensionError("engine_transfer_rate: empty grid");
  const auto [first, last] = grid.segments.front();
  if (std::abs(grid.t[last] - cfg.tau_w()) > 1e-9 * cfg.tau_cyc) {
    throw DimensionError("engine_transfer_rate: first grid segment is not the work stroke");
  }
  const std::vector<double> times(grid.t.begin() + static_cast<std::ptrdiff_t>(first),
                                  grid.t.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  const RMatrix lp = model.population_generator(cfg.pump);
  const RVector avg = engine::detuning_average(
      [&](double delta) {
        engine::CycleConfig c = cfg;
        c.detuning = cfg.detuning + delta;
        return engine::transfer_rate_trace(c, lp, times);
      },
      dist, cfg.tau_cyc);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) out[first + i] = avg(static_cast<Eigen::Index>(i));
  return out;
}

void write_kappa_csv(std::ostream& out, const std::vector<KappaResult>& rows) {
  out << "gamma_mhz,kappa_mhz,mode,sigma\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.8e,%.8e,", r.pump, r.kappa);
    out << buf << schedule_label(r);
    std::snprintf(buf, sizeof buf, ",%.8e\n", r.sigma);
    out << buf;
  }
}

}  // namespace nvqhe::fluorescence
