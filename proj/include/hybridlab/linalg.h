// Copyright 2026 The hybridlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HYBRIDLAB_LINALG_H
#define HYBRIDLAB_LINALG_H

#include <complex>

#include <Eigen/Dense>

namespace hybridlab {

using Complex = std::complex<double>;

/// Dense complex matrix. Every operator in the library (densities, projectors,
/// Jones matrices) is one of these; the largest spaces used are ~22 dimensional.
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense complex state vector.
using Ket = Eigen::VectorXcd;

inline constexpr double kDefaultEqualityTol = 1e-10;
inline constexpr double kDefaultResidualTol = 1e-8;
inline constexpr double kDefaultRankTol = 1e-13;

/// Subsystem of a bipartite space A ⊗ B.
enum class Subsystem { A, B };

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order; `vectors.col(i)` belongs to `values[i]`.
struct HermEigen {
    Eigen::VectorXd values;
    ComplexMatrix vectors;

    ComplexMatrix reconstruct() const;
};

struct DensityReport {
    double hermiticity_deviation = 0.0;
    double trace_deviation = 0.0;
    double min_eigenvalue = 0.0;
    bool passed = false;
};

/// max_ij |a_ij - b_ij| <= tol. Shape mismatch compares unequal.
bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b, double tol = kDefaultEqualityTol);

/// Largest absolute entry.
double max_abs(const ComplexMatrix &m);

/// Kronecker product; entry (i*rows_b + k, j*cols_b + l) = a(i,j)*b(k,l).
ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);
Ket tensor_product(const Ket &a, const Ket &b);

/// Reduced operator of `rho` on A ⊗ B keeping subsystem `keep`.
/// Throws DimensionError unless rho is (dim_a*dim_b) square.
ComplexMatrix partial_trace(const ComplexMatrix &rho, int dim_a, int dim_b, Subsystem keep);

/// Hermitian eigensolver. The input is symmetrized as (m + m†)/2 first; inputs
/// further than `hermitian_tol` from Hermitian are rejected.
HermEigen eigen_hermitian(const ComplexMatrix &m, double hermitian_tol = kDefaultResidualTol);

/// Principal square root of a PSD matrix. Eigenvalues in [-negative_tol, 0)
/// are clipped to zero; anything more negative throws NumericalError.
ComplexMatrix psd_sqrt(const ComplexMatrix &m, double negative_tol = 1e-9);

/// Rectangular factor X with X X† = m, one column per eigenvalue above
/// `rank_tol`. Smaller eigenvalues are treated as rounding noise and dropped,
/// so rank-deficient inputs stay rank-deficient. Negative eigenvalues below
/// -negative_tol throw NumericalError.
ComplexMatrix psd_factor(const ComplexMatrix &m, double rank_tol = kDefaultRankTol, double negative_tol = 1e-9);

DensityReport validate_density(const ComplexMatrix &rho, double tol = kDefaultResidualTol);

/// |ψ⟩⟨ψ|
ComplexMatrix outer(const Ket &ket);

/// Pauli matrices indexed 0 (identity), 1 (x), 2 (y), 3 (z).
ComplexMatrix pauli(int index);

double trace_real(const ComplexMatrix &m);

/// Tr(ρ²)
double purity(const ComplexMatrix &rho);

}  // namespace hybridlab

#endif
