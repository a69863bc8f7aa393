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

// Seven-level optical rate model of the NV- centre.
//
// Level order: G0, G-1, G+1, E0, E-1, E+1, S. R(i, j) is the rate i -> j;
// the population generator is M = R^T - diag(row sums of R), so that
// d/dt sigma = M sigma with sigma a column of populations.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nvqhe/numerics.hpp"

namespace nvqhe::nv {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace level {
inline constexpr Eigen::Index G0 = 0;
inline constexpr Eigen::Index Gm1 = 1;
inline constexpr Eigen::Index Gp1 = 2;
inline constexpr Eigen::Index E0 = 3;
inline constexpr Eigen::Index Em1 = 4;
inline constexpr Eigen::Index Ep1 = 5;
inline constexpr Eigen::Index S = 6;
inline constexpr Eigen::Index kCount = 7;
}  // namespace level

inline constexpr std::array<std::string_view, 7> kLevelLabels = {
    "G0", "G-1", "G+1", "E0", "E-1", "E+1", "S"};

/// Excited-state projector (0,0,0,1,1,1,0).
RVector excited_projector();

/// Rates in MHz. Defaults are the literature values with their 1-sigma errors.
struct RateConstants {
  double gamma = 65.9;  // E -> G radiative decay
  double k1s = 53.3;    // E+-1 -> S
  double k0s = 7.9;     // E0 -> S
  double ks0 = 0.98;    // S -> G0
  double ks1 = 0.73;    // S -> G+-1 (split evenly)
  double pump = 0.0;    // G -> E optical excitation Gamma

  double gamma_sigma = 1.9;
  double k1s_sigma = 2.5;
  double k0s_sigma = 1.4;
  double ks0_sigma = 0.31;
  double ks1_sigma = 0.11;

  /// Throws DomainError on any negative or non-finite rate.
  void validate() const;
  [[nodiscard]] RateConstants with_pump(double gamma_pump) const;
};

enum class ZfsMode {
  table_s2,  // zero-field splitting parameters stored as D / 3
  physical,  // D_gs = 2 pi x 2.87 GHz, D_es = 2 pi x 1.44 GHz
};

enum class Manifold { ground, excited };

/// Spin Hamiltonian parameters. Angular frequencies in Mrad/s, field in T.
struct SpinParams {
  double g = 2.00;
  double mu_b = kTwoPi * 14.0e3;  // Mrad/s per tesla
  double d_gs_table = kTwoPi * 2870.0 / 3.0;
  double d_es_table = kTwoPi * 1440.0 / 3.0;
  double field = 0.0;       // |B| in tesla
  double theta_deg = 0.6;   // tilt of B from the NV axis
  ZfsMode zfs_mode = ZfsMode::physical;

  [[nodiscard]] double splitting(Manifold m) const;
};

/// Laser and microwave calibration constants.
struct CalibrationParams {
  double r_khz_per_mw = 436.0;
  double r_sigma = 25.0;
  double rabi_per_sqrt_mw = kTwoPi * 0.244;  // Mrad/s per sqrt(mW)
  double rabi_sigma = kTwoPi * 0.002;
  double cross_section_cm2 = 3.1e-17;
  double cross_section_sigma = 0.8e-17;
  double spot_diameter_um = 2.7;
  double optical_transmission = 0.81 * 0.83 * 0.45;
  double omega_gs_thz = 89.0;
  double omega_gs_sigma = 10.0;
  double wavelength_nm = 532.0;

  /// Photon energy at the laser wavelength, joules.
  [[nodiscard]] double photon_energy() const;
  /// Gamma in MHz for a laser power in mW.
  [[nodiscard]] double pump_rate(double power_mw) const;
  /// Rabi frequency in Mrad/s for a microwave power in mW.
  [[nodiscard]] double rabi_frequency(double power_mw) const;
  /// r (kHz/mW) predicted from cross-section, spot area and transmission.
  [[nodiscard]] double r_from_cross_section() const;
};

/// 7x7 rate matrix. Throws DomainError on negative rates.
RMatrix build_rate_matrix(const RateConstants& rc);

/// Population generator from a rate matrix. Columns sum to zero.
RMatrix build_M(const RMatrix& rate_matrix);

/// build_M(build_rate_matrix(rc.with_pump(pump))).
RMatrix optical_matrix(const RateConstants& rc, double pump);

/// Hermitian 3x3 in the S_z basis {+1, 0, -1}.
CMatrix spin_hamiltonian(const SpinParams& sp, Manifold manifold);

/// Eigenbasis of one manifold, with eigenvectors permuted so that column k
/// is the state with largest overlap onto S_z basis state k.
struct ManifoldEigenbasis {
  RVector energies;  // Mrad/s, aligned with the columns of `vectors`
  CMatrix vectors;   // 3x3, columns in S_z basis {+1, 0, -1}
  double min_gap = 0.0;
};

/// Throws DegeneracyError when two levels are closer than 1e-6 Mrad/s at
/// nonzero field.
ManifoldEigenbasis manifold_eigenbasis(const SpinParams& sp, Manifold manifold);

/// 7x7 weights W(m, k) = |<m|k>|^2 in level order; identity on S.
/// Doubly stochastic.
RMatrix zeeman_weights(const SpinParams& sp);

/// Rate matrix in the field eigenbasis: W^T R W.
RMatrix zeeman_transform(const RMatrix& rate_matrix, const SpinParams& sp);

/// Unique normalized null vector of M. Throws DegeneracyError when the null
/// space is not one-dimensional.
RVector steady_state(const RMatrix& M);

/// Long-time limit of exp(M t) sigma0 (spectral projection onto the null
/// space). Well defined when the null space is degenerate.
RVector steady_state(const RMatrix& M, const RVector& sigma0);

/// Omega_E . sigma.
double fluorescence_rate(const RVector& sigma);

struct Temperature {
  double kelvin = 0.0;  // +inf for equal rates; negative for inversion
  bool inverted = false;
  bool infinite = false;
};

/// k_B T = h nu / ln(down / up) for a level splitting nu in THz.
Temperature temperature_from_ratio(double rate_up, double rate_down, double splitting_thz);

struct EffectiveTemperatures {
  Temperature cold;  // G0 <-> S
  Temperature hot;   // G+-1 <-> S
};

/// From a 4x4 reduced operator in order {G0, G-1, G+1, S}; L(i, j) is the
/// rate j -> i. Throws DomainError for non-positive rates.
EffectiveTemperatures effective_temperatures(const RMatrix& L, double splitting_thz = 89.0);

struct SaturationPoint {
  double power_mw = 0.0;
  double fluorescence = 0.0;
};

/// Two columns `power_mW, fluorescence_counts` with a header row.
std::vector<SaturationPoint> read_saturation_csv(std::istream& in);

/// Model counts: amplitude * Omega_E . steady_state(M(r * power)).
double saturation_model(double power_mw, double r_khz_per_mw, double amplitude,
                        const RateConstants& rc);

struct CalibrationFit {
  double r_khz_per_mw = 0.0;
  double r_sigma = 0.0;
  double amplitude = 0.0;
  double amplitude_sigma = 0.0;
  double residual_sum_squares = 0.0;
  std::size_t iterations = 0;
};

struct FitOptions {
  double r_initial = 300.0;
  double rel_tol = 1e-10;
  std::size_t max_iterations = 200;
};

/// Damped least squares fit of saturation_model to the data. Throws
/// FitError on non-convergence and DomainError on invalid data.
CalibrationFit fit_gamma_calibration(std::span<const SaturationPoint> data,
                                     const RateConstants& rc = {},
                                     const FitOptions& options = {});

}  // namespace nvqhe::nv
