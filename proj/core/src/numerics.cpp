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

#include "nvqhe/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "nvqhe/errors.hpp"

namespace nvqhe::numerics {

namespace {

template <typename Mat>
void require_square_impl(const Mat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": matrix has non-finite entries");
  }
}

// Pade coefficients and theta_m thresholds from Higham (2005).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <typename Mat, std::size_t N>
Mat pade_low(const Mat& a, const std::array<double, N>& b) {
  // Degrees 3..9: U = A sum b_odd A^(2k), V = sum b_even A^(2k).
  const auto n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat power = ident;
  Mat u_poly = Mat::Zero(n, n);
  Mat v_poly = Mat::Zero(n, n);
  for (std::size_t k = 0; 2 * k + 1 < N; ++k) {
    u_poly += b[2 * k + 1] * power;
    v_poly += b[2 * k] * power;
    power = power * a2;
  }
  const Mat u = a * u_poly;
  return (v_poly - u).partialPivLu().solve(v_poly + u);
}

template <typename Mat>
Mat pade13(const Mat& a) {
  const auto n = a.rows();
  const auto& b = kPade13;
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                      b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Mat u = a * u_inner;
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

template <typename Mat>
Mat mat_exp_impl(const Mat& a_in, double t) {
  require_square_impl(a_in, "mat_exp");
  if (!std::isfinite(t)) throw DomainError("mat_exp: non-finite time");
  const auto n = a_in.rows();
  if (n == 0) return a_in;
  const Mat a = a_in * t;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Mat::Identity(n, n);
  if (norm1 <= kTheta3) return pade_low(a, kPade3);
  if (norm1 <= kTheta5) return pade_low(a, kPade5);
  if (norm1 <= kTheta7) return pade_low(a, kPade7);
  if (norm1 <= kTheta9) return pade_low(a, kPade9);
  int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
  Mat result = pade13(Mat(a / std::ldexp(1.0, squarings)));
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace

void require_square(const RMatrix& a, const char* what) { require_square_impl(a, what); }
void require_square(const CMatrix& a, const char* what) { require_square_impl(a, what); }

RMatrix mat_exp(const RMatrix& a, double t) { return mat_exp_impl(a, t); }
CMatrix mat_exp(const CMatrix& a, double t) { return mat_exp_impl(a, t); }

EigenDecomposition eig(const CMatrix& a, double max_condition) {
  require_square(a, "eig");
  const auto n = a.rows();
  Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw DegeneracyError("eig: eigen solver did not converge");
  }
  const CVector& raw_values = solver.eigenvalues();
  const CMatrix& raw_vectors = solver.eigenvectors();

  const double scale = std::max(1.0, raw_values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const Complex li = raw_values(i);
    const Complex lj = raw_values(j);
    if (std::abs(li.real() - lj.real()) > 1e-12 * scale) return li.real() > lj.real();
    return li.imag() > lj.imag();
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = raw_values(src);
    CVector v = raw_vectors.col(src);
    const double norm = v.norm();
    if (norm == 0.0) throw DegeneracyError("eig: zero eigenvector");
    v /= norm;
    // Largest-magnitude component made real-positive; first index wins ties.
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(v(i));
      if (m > best * (1.0 + 1e-10)) {
        best = m;
        pivot = i;
      }
    }
    v *= std::abs(v(pivot)) / v(pivot);
    v(pivot) = Complex(v(pivot).real(), 0.0);
    out.vectors.col(k) = v;
  }

  Eigen::JacobiSVD<CMatrix> svd(out.vectors);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(out.condition <= max_condition)) {
    throw DegeneracyError("eig: eigenvector matrix condition number " +
                          std::to_string(out.condition) +
                          " exceeds limit (defective matrix)");
  }
  return out;
}

EigenDecomposition eig(const RMatrix& a, double max_condition) {
  return eig(CMatrix(a.cast<Complex>()), max_condition);
}

CMatrix reconstruct(const EigenDecomposition& e) {
  return e.vectors * e.values.asDiagonal() * e.vectors.inverse();
}

CMatrix pseudo_inverse(const CMatrix& a, std::optional<double> zero_tol) {
  const EigenDecomposition e = eig(a);
  const double dmax = e.values.size() > 0 ? e.values.cwiseAbs().maxCoeff() : 0.0;
  const double tol = zero_tol.value_or(1e-9 * dmax);
  CVector dinv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    dinv(i) = std::abs(e.values(i)) > tol ? Complex(1.0) / e.values(i) : Complex(0.0);
  }
  return e.vectors * dinv.asDiagonal() * e.vectors.inverse();
}

RMatrix pseudo_inverse(const RMatrix& a, std::optional<double> zero_tol) {
  const CMatrix p = pseudo_inverse(CMatrix(a.cast<Complex>()), zero_tol);
  return p.real();
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double spectral_norm(const RMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<RMatrix> svd(a);
  return svd.singularValues()(0);
}

double max_imag(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.imag().cwiseAbs().maxCoeff();
}

}  // namespace nvqhe::numerics
