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

#include "hybridlab/tomography.h"

#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "hybridlab/errors.h"
#include "hybridlab/optics.h"

namespace hybridlab {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr Polarisation kSpinOrder[TomographySet::kSpinCount] = {
    Polarisation::R, Polarisation::L, Polarisation::H, Polarisation::V, Polarisation::D, Polarisation::A};

OamSelection oam_selection(int j) {
    switch (j) {
        case 0:
            return OamSelection::ell1();
        case 1:
            return OamSelection::ell2();
        case 2:
            return OamSelection::superposition(0.0);
        case 3:
            return OamSelection::superposition(kPi);
        case 4:
            return OamSelection::superposition(kPi / 2);
        default:
            return OamSelection::superposition(3 * kPi / 2);
    }
}

const std::array<ComplexMatrix, 16> &pauli_products() {
    static const std::array<ComplexMatrix, 16> products = [] {
        std::array<ComplexMatrix, 16> out;
        for (int m = 0; m < 4; ++m) {
            for (int n = 0; n < 4; ++n) {
                out[4 * m + n] = tensor_product(pauli(m), pauli(n));
            }
        }
        return out;
    }();
    return products;
}

}  // namespace

int TomographySet::group_of(int k) {
    const int spin = k / kOamCount;
    const int oam = k % kOamCount;
    return (spin / 2) * 3 + oam / 2;
}

TomographySet standard_settings(const SubspaceLabel &sub) {
    TomographySet set{SubspaceLabel::make(sub.ell_1, sub.ell_2), {}};
    set.settings.reserve(TomographySet::kSettingCount);
    for (Polarisation p : kSpinOrder) {
        for (int j = 0; j < TomographySet::kOamCount; ++j) {
            const OamSelection sel = oam_selection(j);
            const OamProjector oam = projector_oam(sub, sel);
            const double theta = sel.kind == OamSelection::Kind::Superposition
                                     ? sel.theta
                                     : std::numeric_limits<double>::quiet_NaN();
            set.settings.push_back(MeasurementSetting::make(projector_spin(p), oam.matrix,
                                                            fmt::format("{}|{}", to_string(p), oam.label),
                                                            std::string(to_string(p)), theta));
        }
    }
    return set;
}

Eigen::MatrixXd design_matrix(const TomographySet &set) {
    const auto &products = pauli_products();
    Eigen::MatrixXd a(static_cast<Eigen::Index>(set.settings.size()), 16);
    for (std::size_t k = 0; k < set.settings.size(); ++k) {
        const ComplexMatrix m = set.settings[k].joint();
        for (int j = 0; j < 16; ++j) {
            a(static_cast<Eigen::Index>(k), j) = 0.25 * (m * products[j]).trace().real();
        }
    }
    return a;
}

Eigen::Matrix4d pauli_coefficients(const ComplexMatrix &rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw DimensionError("pauli_coefficients: expected a 4x4 matrix");
    }
    const auto &products = pauli_products();
    Eigen::Matrix4d out;
    for (int j = 0; j < 16; ++j) {
        out(j / 4, j % 4) = (rho * products[j]).trace().real();
    }
    return out;
}

ComplexMatrix project_to_physical(const ComplexMatrix &rho_raw) {
    if (rho_raw.rows() != rho_raw.cols()) {
        throw DimensionError("project_to_physical: expected a square matrix");
    }
    if (max_abs(rho_raw) == 0.0) {
        throw NumericalError("project_to_physical: all-zero matrix has no physical projection");
    }
    const ComplexMatrix sym = 0.5 * (rho_raw + rho_raw.adjoint());
    HermEigen eig = eigen_hermitian(sym);
    double total = 0.0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        eig.values(k) = std::max(eig.values(k), 0.0);
        total += eig.values(k);
    }
    if (!(total > 0.0)) {
        throw NumericalError("project_to_physical: no positive eigenvalues");
    }
    eig.values /= total;
    ComplexMatrix out = eig.reconstruct();
    return 0.5 * (out + out.adjoint());
}

ReconstructionResult reconstruct_from_probabilities(std::span<const double> probabilities, const TomographySet &set) {
    if (probabilities.size() != set.settings.size()) {
        throw DimensionError(fmt::format("reconstruct: expected {} probabilities, got {}", set.settings.size(),
                                         probabilities.size()));
    }
    const Eigen::MatrixXd a = design_matrix(set);
    Eigen::VectorXd p(static_cast<Eigen::Index>(probabilities.size()));
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        p(static_cast<Eigen::Index>(k)) = probabilities[k];
    }
    const Eigen::VectorXd r = a.completeOrthogonalDecomposition().solve(p);

    const auto &products = pauli_products();
    ReconstructionResult out;
    out.rho_raw = ComplexMatrix::Zero(4, 4);
    for (int j = 0; j < 16; ++j) {
        out.rho_raw += 0.25 * r(j) * products[j];
        out.pauli_coefficients(j / 4, j % 4) = r(j);
    }
    out.residual = std::sqrt((a * r - p).squaredNorm() / static_cast<double>(p.size()));
    out.rho_physical = project_to_physical(out.rho_raw);
    return out;
}

ReconstructionResult reconstruct_linear(std::span<const CoincidenceRecord> records, const TomographySet &set,
                                        Normalization normalization) {
    std::map<std::string, const CoincidenceRecord *> by_label;
    for (const CoincidenceRecord &r : records) {
        by_label[r.label] = &r;
    }
    std::vector<const CoincidenceRecord *> matched;
    std::string missing;
    for (const MeasurementSetting &s : set.settings) {
        auto it = by_label.find(s.label);
        if (it == by_label.end()) {
            missing += (missing.empty() ? "" : ", ") + s.label;
            matched.push_back(nullptr);
        } else {
            matched.push_back(it->second);
        }
    }
    if (!missing.empty()) {
        throw ArgumentError("reconstruct_linear: missing settings: " + missing);
    }

    const std::size_t n = set.settings.size();
    std::vector<double> probabilities(n);
    if (normalization == Normalization::TotalPairs) {
        for (std::size_t k = 0; k < n; ++k) {
            if (matched[k]->total_pairs == 0) {
                throw ArgumentError("reconstruct_linear: zero total_pairs for setting " + matched[k]->label);
            }
            probabilities[k] = static_cast<double>(matched[k]->counts) / static_cast<double>(matched[k]->total_pairs);
        }
    } else {
        std::array<double, 9> group_total{};
        for (std::size_t k = 0; k < n; ++k) {
            group_total[TomographySet::group_of(static_cast<int>(k))] += static_cast<double>(matched[k]->counts);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const int g = TomographySet::group_of(static_cast<int>(k));
            if (!(group_total[g] > 0.0)) {
                throw ArgumentError("reconstruct_linear: zero coincidences in the group containing " +
                                    matched[k]->label);
            }
            probabilities[k] = static_cast<double>(matched[k]->counts) / group_total[g];
        }
    }
    return reconstruct_from_probabilities(probabilities, set);
}

}  // namespace hybridlab
