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

// Effective four-level thermal operator emulated by optical pumping.
//
// The reduced basis is {G0, G-1, G+1, S}. L is fixed by requiring that the
// four slow eigenvectors of M, projected onto this basis, are eigenvectors of
// L with the same eigenvalues.

#pragma once

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "nvqhe/numerics.hpp"
#include "nvqhe/nv_model.hpp"

namespace nvqhe::thermal {

inline constexpr std::array<std::string_view, 4> kReducedLabels = {"G0", "G-1", "G+1", "S"};

/// 4x7 selector of {G0, G-1, G+1, S}.
RMatrix reduction_projector();

struct SlowFastPartition {
  numerics::EigenDecomposition slow;  // 4 pairs, vectors are 7x4
  numerics::EigenDecomposition fast;  // 3 pairs, vectors are 7x3
  double margin = 0.0;     // smallest fast excited weight / largest slow excited weight
  double rate_ratio = 0.0; // min |lambda_fast| / max |lambda_slow|
};

/// Splits eig(M) by the relative weight of each eigenvector on the excited
/// levels. Throws PartitionError when the margin is below 2.
SlowFastPartition partition_eigenpairs(const RMatrix& M);

enum class Variant {
  raw,        // V Lambda V^-1 as constructed
  corrected,  // column sums moved onto the diagonal
};

struct ThermalOperator {
  RMatrix raw;        // 4x4
  RMatrix corrected;  // 4x4, columns sum to zero
  RVector slow_eigenvalues;
  double pump = 0.0;

  [[nodiscard]] const RMatrix& matrix(Variant v) const {
    return v == Variant::raw ? raw : corrected;
  }
};

/// Throws ReductionError when the projected eigenvectors are singular.
ThermalOperator build_L(const RMatrix& M);
ThermalOperator thermal_operator(const nv::RateConstants& rc, double pump);

/// Subtracts each column's sum from its diagonal entry.
RMatrix conserve_population(const RMatrix& L);

struct InvariantReport {
  double min_off_diagonal = 0.0;
  double max_diagonal = 0.0;
  double max_column_sum = 0.0;
  bool detailed_ordering = false;  // L(i, j) <= L(j, i) for i > j
  [[nodiscard]] bool rates_valid(double tol) const {
    return min_off_diagonal >= -tol && max_diagonal <= tol;
  }
};

InvariantReport check_invariants(const RMatrix& L);

/// L(pump) ~ L0 + (pump - pump_ref) L1, with L1 by central difference.
struct LinearExpansion {
  RMatrix L0;
  RMatrix L1;
  double pump_ref = 0.5;
  double step = 0.01;
  Variant variant = Variant::raw;

  [[nodiscard]] RMatrix evaluate(double pump) const { return L0 + (pump - pump_ref) * L1; }
};

LinearExpansion linear_expansion(const nv::RateConstants& rc, double pump_ref = 0.5,
                                 double step = 0.01, Variant variant = Variant::raw);

/// Ground and singlet levels equally populated, `excited_fraction` spread
/// evenly over the excited levels.
RVector emulation_start_state(double excited_fraction = 0.005);

/// 100 * || P exp(M t) sigma0 - exp(L t) P sigma0 ||_1.
double emulation_error(const RMatrix& M, const RMatrix& L, const RVector& sigma0, double t);

struct EmulationSurface {
  std::vector<double> pumps;
  std::vector<double> times;
  RMatrix percent;  // rows: pumps, cols: times
  double max_percent = 0.0;
  double argmax_pump = 0.0;
  double argmax_time = 0.0;
};

EmulationSurface emulation_error_surface(const nv::RateConstants& rc, const RVector& sigma0,
                                         const std::vector<double>& pumps,
                                         const std::vector<double>& times,
                                         Variant variant = Variant::raw);

/// CSV with columns gamma_mhz, t_us, percent_error.
void write_emulation_csv(std::ostream& out, const EmulationSurface& surface);

/// Relaxation rates (up + down) of the emulated baths, MHz.
struct BathRates {
  double hot = 0.0;   // G-1 <-> S and G+1 <-> S, summed
  double cold = 0.0;  // G0 <-> S
};

BathRates bath_rates(const RMatrix& L);

/// Pump-driven population transfer out of the engine pair:
/// L(S, G0) + L(S, G+1).
double pump_transfer_rate(const RMatrix& L);

/// Pump rate at which pump_transfer_rate(L(pump)) equals `target`. Throws
/// ConstraintError when the target is outside [lo, hi].
double solve_pump_for_transfer_rate(const nv::RateConstants& rc, double target,
                                    double lo = 1e-4, double hi = 200.0);

}  // namespace nvqhe::thermal
