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

#include "nvqhe/thermal_emulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "nvqhe/errors.hpp"

namespace nvqhe::thermal {

namespace {

constexpr std::array<Eigen::Index, 4> kReducedLevels = {nv::level::G0, nv::level::Gm1,
                                                        nv::level::Gp1, nv::level::S};

double excited_weight(const CVector& v) {
  const double all = v.cwiseAbs().maxCoeff();
  const double excited = v.segment(nv::level::E0, 3).cwiseAbs().maxCoeff();
  return all > 0.0 ? excited / all : 0.0;
}

numerics::EigenDecomposition select(const numerics::EigenDecomposition& e,
                                    const std::vector<Eigen::Index>& idx) {
  numerics::EigenDecomposition out;
  const auto k = static_cast<Eigen::Index>(idx.size());
  out.values.resize(k);
  out.vectors.resize(e.vectors.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    out.values(j) = e.values(idx[static_cast<std::size_t>(j)]);
    out.vectors.col(j) = e.vectors.col(idx[static_cast<std::size_t>(j)]);
  }
  out.condition = e.condition;
  return out;
}

}  // namespace

RMatrix reduction_projector() {
  RMatrix p = RMatrix::Zero(4, nv::level::kCount);
  for (Eigen::Index r = 0; r < 4; ++r) p(r, kReducedLevels[static_cast<std::size_t>(r)]) = 1.0;
  return p;
}

SlowFastPartition partition_eigenpairs(const RMatrix& M) {
  if (M.rows() != nv::level::kCount || M.cols() != nv::level::kCount) {
    throw DimensionError("partition_eigenpairs: expected a 7x7 generator");
  }
  const numerics::EigenDecomposition e = numerics::eig(M);
  std::vector<Eigen::Index> order(7);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> weight(7);
  for (Eigen::Index i = 0; i < 7; ++i) weight[static_cast<std::size_t>(i)] = excited_weight(e.vectors.col(i));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return weight[static_cast<std::size_t>(a)] < weight[static_cast<std::size_t>(b)];
  });
  std::vector<Eigen::Index> slow(order.begin(), order.begin() + 4);
  std::vector<Eigen::Index> fast(order.begin() + 4, order.end());
  std::sort(slow.begin(), slow.end());
  std::sort(fast.begin(), fast.end());

  SlowFastPartition out;
  const double worst_slow = weight[static_cast<std::size_t>(order[3])];
  const double best_fast = weight[static_cast<std::size_t>(order[4])];
  out.margin = worst_slow > 0.0 ? best_fast / worst_slow : std::numeric_limits<double>::infinity();
  if (!(out.margin >= 2.0)) {
    throw PartitionError("partition_eigenpairs: excited-weight margin " +
                         std::to_string(out.margin) + " is below 2");
  }
  out.slow = select(e, slow);
  out.fast = select(e, fast);
  const double max_slow = out.slow.values.cwiseAbs().maxCoeff();
  const double min_fast = out.fast.values.cwiseAbs().minCoeff();
  out.rate_ratio = max_slow > 0.0 ? min_fast / max_slow : std::numeric_limits<double>::infinity();
  return out;
}

RMatrix conserve_population(const RMatrix& L) {
  RMatrix out = L;
  out.diagonal() -= L.colwise().sum().transpose();
  return out;
}

ThermalOperator build_L(const RMatrix& M) {
  const SlowFastPartition part = partition_eigenpairs(M);
  const CMatrix v = reduction_projector().cast<Complex>() * part.slow.vectors;
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& sv = svd.singularValues();
  if (!(sv(3) > 1e-12 * sv(0))) {
    throw ReductionError("build_L: projected slow eigenvectors are singular");
  }
  const CMatrix l = v * part.slow.values.asDiagonal() * v.inverse();
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if (numerics::max_imag(l) > 1e-9 * scale) {
    throw ReductionError("build_L: reduced operator is not real");
  }
  ThermalOperator out;
  out.raw = l.real();
  out.corrected = conserve_population(out.raw);
  out.slow_eigenvalues = part.slow.values.real();
  return out;
}

ThermalOperator thermal_operator(const nv::RateConstants& rc, double pump) {
  ThermalOperator out = build_L(nv::optical_matrix(rc, pump));
  out.pump = pump;
  return out;
}

InvariantReport check_invariants(const RMatrix& L) {
  InvariantReport r;
  r.min_off_diagonal = std::numeric_limits<double>::infinity();
  r.max_diagonal = -std::numeric_limits<double>::infinity();
  r.detailed_ordering = true;
  for (Eigen::Index j = 0; j < L.cols(); ++j) {
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
      if (i == j) {
        r.max_diagonal = std::max(r.max_diagonal, L(i, i));
      } else {
        r.min_off_diagonal = std::min(r.min_off_diagonal, L(i, j));
        if (i > j && L(i, j) > L(j, i)) r.detailed_ordering = false;
      }
    }
  }
  r.max_column_sum = L.colwise().sum().cwiseAbs().maxCoeff();
  return r;
}

LinearExpansion linear_expansion(const nv::RateConstants& rc, double pump_ref, double step,
                                 Variant variant) {
  if (!(step > 0.0) || pump_ref - step < 0.0) {
    throw DomainError("linear_expansion: need 0 < step <= pump_ref");
  }
  LinearExpansion out;
  out.pump_ref = pump_ref;
  out.step = step;
  out.variant = variant;
  out.L0 = thermal_operator(rc, pump_ref).matrix(variant);
  const RMatrix plus = thermal_operator(rc, pump_ref + step).matrix(variant);
  const RMatrix minus = thermal_operator(rc, pump_ref - step).matrix(variant);
  out.L1 = (plus - minus) / (2.0 * step);
  return out;
}

RVector emulation_start_state(double excited_fraction) {
  if (!(excited_fraction >= 0.0 && excited_fraction < 1.0)) {
    throw DomainError("emulation_start_state: excited fraction must be in [0, 1)");
  }
  RVector s(nv::level::kCount);
  const double rest = (1.0 - excited_fraction) / 4.0;
  s << rest, rest, rest, excited_fraction / 3.0, excited_fraction / 3.0, excited_fraction / 3.0,
      rest;
  return s;
}

double emulation_error(const RMatrix& M, const RMatrix& L, const RVector& sigma0, double t) {
  const RMatrix p = reduction_projector();
  const RVector full = p * (numerics::mat_exp(M, t) * sigma0);
  const RVector reduced = numerics::mat_exp(L, t) * (p * sigma0);
  return 100.0 * (full - reduced).lpNorm<1>();
}

EmulationSurface emulation_error_surface(const nv::RateConstants& rc, const RVector& sigma0,
                                         const std::vector<double>& pumps,
                                         const std::vector<double>& times, Variant variant) {
  EmulationSurface s;
  s.pumps = pumps;
  s.times = times;
  s.percent.resize(static_cast<Eigen::Index>(pumps.size()), static_cast<Eigen::Index>(times.size()));
  const RMatrix p = reduction_projector();
  for (std::size_t i = 0; i < pumps.size(); ++i) {
    const RMatrix M = nv::optical_matrix(rc, pumps[i]);
    const RMatrix L = build_L(M).matrix(variant);
    const RVector reduced0 = p * sigma0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double t = times[j];
      const RVector full = p * (numerics::mat_exp(M, t) * sigma0);
      const RVector reduced = numerics::mat_exp(L, t) * reduced0;
      const double e = 100.0 * (full - reduced).lpNorm<1>();
      s.percent(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e;
      if (e > s.max_percent) {
        s.max_percent = e;
        s.argmax_pump = pumps[i];
        s.argmax_time = t;
      }
    }
  }
  return s;
}

void write_emulation_csv(std::ostream& out, const EmulationSurface& surface) {
  out << "gamma_mhz,t_us,percent_error\n";
  char buf[128];
  for (std::size_t i = 0; i < surface.pumps.size(); ++i) {
    for (std::size_t j = 0; j < surface.times.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.8e,%.8e,%.8e\n", surface.pumps[i], surface.times[j],
                    surface.percent(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      out << buf;
    }
  }
}

BathRates bath_rates(const RMatrix& L) {
  if (L.rows() != 4 || L.cols() != 4) throw DimensionError("bath_rates: expected 4x4 operator");
  constexpr Eigen::Index g0 = 0, gm = 1, gp = 2, s = 3;
  BathRates b;
  b.cold = L(s, g0) + L(g0, s);
  b.hot = L(s, gm) + L(gm, s) + L(s, gp) + L(gp, s);
  return b;
}

double pump_transfer_rate(const RMatrix& L) {
  if (L.rows() != 4 || L.cols() != 4) {
    throw DimensionError("pump_transfer_rate: expected 4x4 operator");
  }
  return L(3, 0) + L(3, 2);
}

double solve_pump_for_transfer_rate(const nv::RateConstants& rc, double target, double lo,
                                    double hi) {
  const auto residual = [&](double pump) {
    return pump_transfer_rate(thermal_operator(rc, pump).corrected) - target;
  };
  // Expand geometrically from `lo` so that pumps far above the root, where
  // the slow/fast partition breaks down, are never evaluated.
  double a = lo;
  double b = lo;
  double f_lo = 0.0;
  double f_hi = 0.0;
  try {
    f_lo = residual(a);
    f_hi = f_lo;
    while (f_lo * f_hi > 0.0 || b == a) {
      if (b >= hi) {
        throw ConstraintError("solve_pump_for_transfer_rate: target " + std::to_string(target) +
                              " MHz not bracketed by pump in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "] MHz");
      }
      if (b > a) {
        a = b;
        f_lo = f_hi;
      }
      b = std::min(2.0 * a, hi);
      f_hi = residual(b);
    }
  } catch (const ConstraintError&) {
    throw;
  } catch (const Error& e) {
    throw ConstraintError(std::string("solve_pump_for_transfer_rate: ") + e.what());
  }
  std::uintmax_t iterations = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a)); };
  const auto root = boost::math::tools::toms748_solve(residual, a, b, f_lo, f_hi, tol, iterations);
  return 0.5 * (root.first + root.second);
}

}  // namespace nvqhe::thermal
