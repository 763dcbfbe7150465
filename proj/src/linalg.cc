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

#include "hybridlab/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hybridlab/errors.h"

namespace hybridlab {

namespace {

std::string shape(const ComplexMatrix &m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": expected a square matrix, got " + shape(m));
    }
}

}  // namespace

ComplexMatrix HermEigen::reconstruct() const {
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    return max_abs(a - b) <= tol;
}

double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Ket tensor_product(const Ket &a, const Ket &b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix &rho, int dim_a, int dim_b, Subsystem keep) {
    if (dim_a <= 0 || dim_b <= 0) {
        throw DimensionError("partial_trace: subsystem dimensions must be positive");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
    if (rho.rows() != n || rho.cols() != n) {
        throw DimensionError("partial_trace: expected " + std::to_string(n) + "x" + std::to_string(n) +
                             " for dims (" + std::to_string(dim_a) + ", " + std::to_string(dim_b) +
                             "), got " + shape(rho));
    }
    if (keep == Subsystem::A) {
        ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i) {
            for (int j = 0; j < dim_a; ++j) {
                out(i, j) = rho.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
            }
        }
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_a; ++i) {
        out += rho.block(i * dim_b, i * dim_b, dim_b, dim_b);
    }
    return out;
}

HermEigen eigen_hermitian(const ComplexMatrix &m, double hermitian_tol) {
    require_square(m, "eigen_hermitian");
    if (max_abs(m - m.adjoint()) > hermitian_tol) {
        throw NumericalError("eigen_hermitian: input deviates from Hermitian by " +
                             std::to_string(max_abs(m - m.adjoint())));
    }
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigen_hermitian: eigensolver did not converge");
    }

    // Solver output is ascending; reorder descending, stable in solver order.
    const Eigen::Index n = sym.rows();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto &ev = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });

    HermEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = ev(order[k]);
        out.vectors.col(k) = solver.eigenvectors().col(order[k]);
    }
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix &m, double negative_tol) {
    HermEigen eig = eigen_hermitian(m);
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        double v = eig.values(k);
        if (v < -negative_tol) {
            throw NumericalError("psd_sqrt: matrix is not positive semidefinite (eigenvalue " +
                                 std::to_string(v) + ")");
        }
        eig.values(k) = std::sqrt(std::max(v, 0.0));
    }
    return eig.reconstruct();
}

ComplexMatrix psd_factor(const ComplexMatrix &m, double rank_tol, double negative_tol) {
    const HermEigen eig = eigen_hermitian(m);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double v = eig.values(k);
        if (v < -negative_tol) {
            throw NumericalError("psd_factor: matrix is not positive semidefinite (eigenvalue " + std::to_string(v) +
                                 ")");
        }
        if (v > rank_tol) {
            ++rank;
        }
    }
    // Values are sorted in descending order, so the kept columns come first.
    ComplexMatrix x(m.rows(), rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        x.col(k) = eig.vectors.col(k) * std::sqrt(eig.values(k));
    }
    return x;
}

DensityReport validate_density(const ComplexMatrix &rho, double tol) {
    require_square(rho, "validate_density");
    DensityReport report;
    report.hermiticity_deviation = max_abs(rho - rho.adjoint());
    report.trace_deviation = std::abs(rho.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    report.min_eigenvalue = rho.size() == 0 ? 0.0 : solver.eigenvalues().minCoeff();
    report.passed = report.hermiticity_deviation <= tol && report.trace_deviation <= tol &&
                    report.min_eigenvalue >= -tol;
    return report;
}

ComplexMatrix outer(const Ket &ket) {
    return ket * ket.adjoint();
}

ComplexMatrix pauli(int index) {
    const Complex i(0.0, 1.0);
    ComplexMatrix m(2, 2);
    switch (index) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, -i, i, 0;
            break;
        case 3:
            m << 1, 0, 0, -1;
            break;
        default:
            throw ArgumentError("pauli: index must be in 0..3, got " + std::to_string(index));
    }
    return m;
}

double trace_real(const ComplexMatrix &m) {
    return m.trace().real();
}

double purity(const ComplexMatrix &rho) {
    return (rho * rho).trace().real();
}

}  // namespace hybridlab
