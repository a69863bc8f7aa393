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

#include "nvqhe/nv_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "nvqhe/errors.hpp"

namespace nvqhe::nv {

namespace {

constexpr double kPlanck = 6.62607015e-34;     // J s
constexpr double kBoltzmann = 1.380649e-23;    // J / K
constexpr double kLightSpeed = 299792458.0;    // m / s

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError(std::string("rate ") + name + " must be finite and >= 0, got " +
                      std::to_string(value));
  }
}

// Position of each ground/excited level within the S_z basis {+1, 0, -1}.
constexpr std::array<Eigen::Index, 3> kSzIndex = {1, 2, 0};  // m = 0, -1, +1

}  // namespace

RVector excited_projector() {
  RVector p = RVector::Zero(level::kCount);
  p(level::E0) = p(level::Em1) = p(level::Ep1) = 1.0;
  return p;
}

void RateConstants::validate() const {
  require_rate(gamma, "gamma");
  require_rate(k1s, "k1s");
  require_rate(k0s, "k0s");
  require_rate(ks0, "ks0");
  require_rate(ks1, "ks1");
  require_rate(pump, "pump");
}

RateConstants RateConstants::with_pump(double gamma_pump) const {
  RateConstants out = *this;
  out.pump = gamma_pump;
  return out;
}

double SpinParams::splitting(Manifold m) const {
  const double table = m == Manifold::ground ? d_gs_table : d_es_table;
  return zfs_mode == ZfsMode::physical ? 3.0 * table : table;
}

double CalibrationParams::photon_energy() const {
  return kPlanck * kLightSpeed / (wavelength_nm * 1e-9);
}

double CalibrationParams::pump_rate(double power_mw) const {
  return r_khz_per_mw * 1e-3 * power_mw;
}

double CalibrationParams::rabi_frequency(double power_mw) const {
  if (power_mw < 0.0) throw DomainError("rabi_frequency: negative power");
  return rabi_per_sqrt_mw * std::sqrt(power_mw);
}

double CalibrationParams::r_from_cross_section() const {
  const double radius_cm = 0.5 * spot_diameter_um * 1e-4;
  const double area_cm2 = std::numbers::pi * radius_cm * radius_cm;
  const double photons_per_mw = 1e-3 / photon_energy();  // per second
  const double rate_hz = cross_section_cm2 * optical_transmission * photons_per_mw / area_cm2;
  return rate_hz * 1e-3;
}

RMatrix build_rate_matrix(const RateConstants& rc) {
  rc.validate();
  RMatrix r = RMatrix::Zero(level::kCount, level::kCount);
  for (Eigen::Index i = 0; i < 3; ++i) {
    r(i, 3 + i) = rc.pump;
    r(3 + i, i) = rc.gamma;
  }
  r(level::E0, level::S) = rc.k0s;
  r(level::Em1, level::S) = rc.k1s;
  r(level::Ep1, level::S) = rc.k1s;
  r(level::S, level::G0) = rc.ks0;
  r(level::S, level::Gm1) = 0.5 * rc.ks1;
  r(level::S, level::Gp1) = 0.5 * rc.ks1;
  return r;
}

RMatrix build_M(const RMatrix& rate_matrix) {
  numerics::require_square(rate_matrix, "build_M");
  RMatrix m = rate_matrix.transpose();
  const RVector out = rate_matrix.rowwise().sum();
  m.diagonal() -= out;
  return m;
}

RMatrix optical_matrix(const RateConstants& rc, double pump) {
  return build_M(build_rate_matrix(rc.with_pump(pump)));
}

CMatrix spin_hamiltonian(const SpinParams& sp, Manifold manifold) {
  const double d = sp.splitting(manifold);
  const double theta = sp.theta_deg * std::numbers::pi / 180.0;
  const double bx = sp.field * std::sin(theta);
  const double bz = sp.field * std::cos(theta);
  const double s = 1.0 / std::numbers::sqrt2;
  CMatrix sz = CMatrix::Zero(3, 3);
  sz(0, 0) = 1.0;
  sz(2, 2) = -1.0;
  CMatrix sx = CMatrix::Zero(3, 3);
  sx(0, 1) = sx(1, 0) = sx(1, 2) = sx(2, 1) = s;
  return d * sz * sz + sp.g * sp.mu_b * (bx * sx + bz * sz);
}

ManifoldEigenbasis manifold_eigenbasis(const SpinParams& sp, Manifold manifold) {
  const CMatrix h = spin_hamiltonian(sp, manifold);
  ManifoldEigenbasis out;
  if (sp.field == 0.0) {
    out.energies = h.diagonal().real();
    out.vectors = CMatrix::Identity(3, 3);
    out.min_gap = 0.0;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const RVector& e = solver.eigenvalues();
  const CMatrix& v = solver.eigenvectors();
  out.min_gap = std::min(e(1) - e(0), e(2) - e(1));
  if (out.min_gap < 1e-6) {
    throw DegeneracyError("manifold_eigenbasis: levels within " + std::to_string(out.min_gap) +
                          " Mrad/s at B = " + std::to_string(sp.field) +
                          " T; perturb the field to move off the crossing");
  }
  std::array<int, 3> perm = {0, 1, 2};
  std::array<int, 3> best = perm;
  double best_score = -1.0;
  do {
    double score = 0.0;
    for (int k = 0; k < 3; ++k) score += std::norm(v(k, perm[static_cast<std::size_t>(k)]));
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.energies.resize(3);
  out.vectors.resize(3, 3);
  for (int k = 0; k < 3; ++k) {
    const int src = best[static_cast<std::size_t>(k)];
    out.energies(k) = e(src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

RMatrix zeeman_weights(const SpinParams& sp) {
  RMatrix w = RMatrix::Identity(level::kCount, level::kCount);
  const std::array<Manifold, 2> manifolds = {Manifold::ground, Manifold::excited};
  for (std::size_t block = 0; block < 2; ++block) {
    const ManifoldEigenbasis basis = manifold_eigenbasis(sp, manifolds[block]);
    const auto offset = static_cast<Eigen::Index>(3 * block);
    for (Eigen::Index m = 0; m < 3; ++m) {
      for (Eigen::Index k = 0; k < 3; ++k) {
        w(offset + m, offset + k) =
            std::norm(basis.vectors(kSzIndex[static_cast<std::size_t>(m)],
                                    kSzIndex[static_cast<std::size_t>(k)]));
      }
    }
  }
  return w;
}

RMatrix zeeman_transform(const RMatrix& rate_matrix, const SpinParams& sp) {
  numerics::require_square(rate_matrix, "zeeman_transform");
  if (rate_matrix.rows() != level::kCount) {
    throw DimensionError("zeeman_transform: expected a 7x7 rate matrix");
  }
  const RMatrix w = zeeman_weights(sp);
  return w.transpose() * rate_matrix * w;
}

RVector steady_state(const RMatrix& M) {
  numerics::require_square(M, "steady_state");
  const numerics::EigenDecomposition e = numerics::eig(M);
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  Eigen::Index zero = -1;
  int count = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (std::abs(e.values(i)) <= tol) {
      zero = i;
      ++count;
    }
  }
  if (count != 1) {
    throw DegeneracyError("steady_state: null space has dimension " + std::to_string(count));
  }
  RVector v = e.vectors.col(zero).real();
  v /= v.sum();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) < 0.0 && v(i) > -1e-12) v(i) = 0.0;
  }
  return v;
}

RVector steady_state(const RMatrix& M, const RVector& sigma0) {
  numerics::require_square(M, "steady_state");
  if (sigma0.size() != M.rows()) throw DimensionError("steady_state: state size mismatch");
  const numerics::EigenDecomposition e = numerics::eig(M);
  const CMatrix vinv = e.vectors.inverse();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const CVector s0 = sigma0.cast<Complex>();
  CVector acc = CVector::Zero(M.rows());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (std::abs(e.values(i)) <= 1e-9 * scale) {
      acc += e.vectors.col(i) * (vinv.row(i) * s0)(0);
    }
  }
  RVector v = acc.real();
  const double total = v.sum();
  if (total == 0.0) throw DegeneracyError("steady_state: projection has zero weight");
  v /= total;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) < 1e-14) v(i) = 0.0;
  }
  return v;
}

double fluorescence_rate(const RVector& sigma) {
  if (sigma.size() != level::kCount) throw DimensionError("fluorescence_rate: expected 7 levels");
  return excited_projector().dot(sigma);
}

Temperature temperature_from_ratio(double rate_up, double rate_down, double splitting_thz) {
  if (!(rate_up > 0.0) || !(rate_down > 0.0)) {
    throw DomainError("temperature_from_ratio: rates must be strictly positive");
  }
  Temperature t;
  const double log_ratio = std::log(rate_down / rate_up);
  if (log_ratio == 0.0) {
    t.infinite = true;
    t.kelvin = std::numeric_limits<double>::infinity();
    return t;
  }
  t.kelvin = kPlanck * splitting_thz * 1e12 / (kBoltzmann * log_ratio);
  t.inverted = log_ratio < 0.0;
  return t;
}

EffectiveTemperatures effective_temperatures(const RMatrix& L, double splitting_thz) {
  if (L.rows() != 4 || L.cols() != 4) {
    throw DimensionError("effective_temperatures: expected a 4x4 reduced operator");
  }
  constexpr Eigen::Index g0 = 0, gm = 1, gp = 2, s = 3;
  EffectiveTemperatures out;
  out.cold = temperature_from_ratio(L(s, g0), L(g0, s), splitting_thz);
  out.hot = temperature_from_ratio(L(s, gm) + L(s, gp), L(gm, s) + L(gp, s), splitting_thz);
  return out;
}

}  // namespace nvqhe::nv
