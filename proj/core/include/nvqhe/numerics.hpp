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

// Small dense linear algebra used by every other module.
//
// Units follow the rest of the library: time in microseconds, rates in MHz
// (1/us), angular frequencies in Mrad/s. hbar = 1 internally.

#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

namespace nvqhe {

using Complex = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

namespace numerics {

/// Throws DimensionError unless `a` is square, DomainError if any entry is
/// not finite.
void require_square(const RMatrix& a, const char* what);
void require_square(const CMatrix& a, const char* what);

/// exp(a * t) by scaling and squaring with a diagonal Pade approximant
/// (degree 3..13 picked from the 1-norm of a*t).
RMatrix mat_exp(const RMatrix& a, double t = 1.0);
CMatrix mat_exp(const CMatrix& a, double t = 1.0);

/// Eigenpairs sorted by descending real part (ties: descending imaginary
/// part). Each eigenvector has unit 2-norm and its largest-magnitude
/// component is real and positive.
struct EigenDecomposition {
  CVector values;
  CMatrix vectors;  // column i pairs with values(i)
  double condition = 1.0;  // 2-norm condition number of `vectors`
};

/// Throws DegeneracyError if the eigenvector matrix condition number
/// exceeds `max_condition` (defective input).
EigenDecomposition eig(const CMatrix& a, double max_condition = 1e12);
EigenDecomposition eig(const RMatrix& a, double max_condition = 1e12);

/// U diag(lambda) U^-1.
CMatrix reconstruct(const EigenDecomposition& e);

/// Spectral pseudo-inverse U D^- U^-1 where D^-_ii = 1/D_ii for
/// |D_ii| > zero_tol and 0 otherwise. Default zero_tol is 1e-9 max|D_ii|.
CMatrix pseudo_inverse(const CMatrix& a, std::optional<double> zero_tol = {});
RMatrix pseudo_inverse(const RMatrix& a, std::optional<double> zero_tol = {});

double spectral_norm(const CMatrix& a);
double spectral_norm(const RMatrix& a);

/// Largest |imag| entry; used to validate results that must be real.
double max_imag(const CMatrix& a);

}  // namespace numerics
}  // namespace nvqhe
