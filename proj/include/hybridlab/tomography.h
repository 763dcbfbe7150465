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

#ifndef HYBRIDLAB_TOMOGRAPHY_H
#define HYBRIDLAB_TOMOGRAPHY_H

#include <span>
#include <vector>

#include "hybridlab/linalg.h"
#include "hybridlab/measurement.h"
#include "hybridlab/states.h"

namespace hybridlab {

/// The over-complete 6x6 local projection set: spin {R, L, H, V, D, A} ×
/// OAM {ℓ₁, ℓ₂, θ = 0, π, π/2, 3π/2}. Settings are stored spin-major.
///
/// Each spin pair {R,L}, {H,V}, {D,A} and each OAM pair {ℓ₁,ℓ₂}, {0,π},
/// {π/2,3π/2} is a complete basis, so the 36 settings split into nine groups of
/// four whose probabilities sum to one.
struct TomographySet {
    SubspaceLabel subspace;
    std::vector<MeasurementSetting> settings;

    static constexpr int kSpinCount = 6;
    static constexpr int kOamCount = 6;
    static constexpr int kSettingCount = kSpinCount * kOamCount;

    /// Normalization group (0..8) of setting k.
    static int group_of(int k);
};

TomographySet standard_settings(const SubspaceLabel &sub);

/// 36x16 real matrix A with p_k = Σ_j A(k, j) r_j, where ρ = ¼ Σ_{mn} r_mn σ_m ⊗ σ_n
/// and j = 4m + n.
Eigen::MatrixXd design_matrix(const TomographySet &set);

struct ReconstructionResult {
    ComplexMatrix rho_raw;
    ComplexMatrix rho_physical;
    /// r_mn = Tr[ρ σ_m ⊗ σ_n] for the raw estimate. Row 0 / column 0 carry the
    /// single-side blocks; (0,0) is the trace.
    Eigen::Matrix4d pauli_coefficients;
    /// Root-mean-square probability misfit of the least-squares solve.
    double residual = 0.0;
};

/// How raw counts become probabilities.
enum class Normalization {
    /// counts / Σ counts over the setting's complete group of four.
    PerGroup,
    /// counts / total_pairs.
    TotalPairs,
};

ReconstructionResult reconstruct_from_probabilities(std::span<const double> probabilities, const TomographySet &set);

/// Matches records to settings by label. Throws ArgumentError listing any
/// missing settings, or when a total (pairs or group counts) is zero.
ReconstructionResult reconstruct_linear(std::span<const CoincidenceRecord> records, const TomographySet &set,
                                        Normalization normalization = Normalization::PerGroup);

/// Symmetrize, clip negative eigenvalues to zero, renormalize to unit trace.
/// Throws NumericalError when nothing positive remains.
ComplexMatrix project_to_physical(const ComplexMatrix &rho_raw);

/// r_mn = Tr[ρ σ_m ⊗ σ_n].
Eigen::Matrix4d pauli_coefficients(const ComplexMatrix &rho);

}  // namespace hybridlab

#endif
