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

#include "hybridlab/states.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "hybridlab/errors.h"

namespace hybridlab {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr Complex kI(0.0, 1.0);

Ket spin_ket(Complex r, Complex l) {
    Ket k(2);
    k << r, l;
    return k;
}

}  // namespace

Ket polarisation_ket(Polarisation p) {
    switch (p) {
        case Polarisation::R:
            return spin_ket(1.0, 0.0);
        case Polarisation::L:
            return spin_ket(0.0, 1.0);
        case Polarisation::H:
            return spin_ket(kInvSqrt2, kInvSqrt2);
        case Polarisation::V:
            return spin_ket(kI * kInvSqrt2, -kI * kInvSqrt2);
        case Polarisation::D:
            return spin_ket(Complex(0.5, 0.5), Complex(0.5, -0.5));
        case Polarisation::A:
            return spin_ket(Complex(0.5, -0.5), Complex(0.5, 0.5));
    }
    throw ArgumentError("polarisation_ket: unknown polarisation");
}

Ket equatorial_spin_ket(double phase) {
    return spin_ket(kInvSqrt2, std::polar(kInvSqrt2, -phase));
}

std::string_view to_string(Polarisation p) {
    switch (p) {
        case Polarisation::R:
            return "R";
        case Polarisation::L:
            return "L";
        case Polarisation::H:
            return "H";
        case Polarisation::V:
            return "V";
        case Polarisation::D:
            return "D";
        case Polarisation::A:
            return "A";
    }
    return "?";
}

std::optional<Polarisation> parse_polarisation(std::string_view text) {
    for (Polarisation p : {Polarisation::R, Polarisation::L, Polarisation::H, Polarisation::V, Polarisation::D,
                           Polarisation::A}) {
        if (text == to_string(p)) {
            return p;
        }
    }
    return std::nullopt;
}

SubspaceLabel SubspaceLabel::make(int ell_1, int ell_2) {
    if (ell_1 == ell_2) {
        throw ArgumentError("subspace needs two distinct OAM values, got ell_1 = ell_2 = " + std::to_string(ell_1));
    }
    return SubspaceLabel{ell_1, ell_2};
}

int SubspaceLabel::max_abs_ell() const {
    return std::max(std::abs(ell_1), std::abs(ell_2));
}

std::string SubspaceLabel::to_string() const {
    auto signed_str = [](int v) { return (v > 0 ? "+" : "") + std::to_string(v); };
    return "(" + signed_str(ell_1) + "," + signed_str(ell_2) + ")";
}

OAMSpectrum::OAMSpectrum(int ell_max, std::vector<Complex> coefficients)
    : ell_max_(ell_max), coefficients_(std::move(coefficients)) {
    if (ell_max_ < 0) {
        throw ArgumentError("OAMSpectrum: ell_max must be non-negative");
    }
    if (static_cast<int>(coefficients_.size()) != dim()) {
        throw DimensionError("OAMSpectrum: expected " + std::to_string(dim()) + " coefficients, got " +
                             std::to_string(coefficients_.size()));
    }
    double norm2 = 0.0;
    for (const Complex &c : coefficients_) {
        norm2 += std::norm(c);
    }
    if (std::abs(norm2 - 1.0) > 1e-10) {
        throw ArgumentError("OAMSpectrum: coefficients are not normalized (sum |c|^2 = " + std::to_string(norm2) +
                            ")");
    }
}

OAMSpectrum OAMSpectrum::uniform(int ell_max) {
    return normalized(ell_max, std::vector<Complex>(2 * std::max(ell_max, 0) + 1, Complex(1.0, 0.0)));
}

OAMSpectrum OAMSpectrum::gaussian(int ell_max, double width) {
    if (!(width > 0.0)) {
        throw ArgumentError("OAMSpectrum::gaussian: width must be positive");
    }
    std::vector<Complex> raw;
    for (int ell = -ell_max; ell <= ell_max; ++ell) {
        raw.emplace_back(std::exp(-double(ell * ell) / (width * width)), 0.0);
    }
    return normalized(ell_max, std::move(raw));
}

OAMSpectrum OAMSpectrum::normalized(int ell_max, std::vector<Complex> raw) {
    double norm2 = 0.0;
    for (const Complex &c : raw) {
        norm2 += std::norm(c);
    }
    if (!(norm2 > 0.0)) {
        throw ArgumentError("OAMSpectrum::normalized: all coefficients are zero");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (Complex &c : raw) {
        c *= scale;
    }
    return OAMSpectrum(ell_max, std::move(raw));
}

Complex OAMSpectrum::coefficient(int ell) const {
    if (std::abs(ell) > ell_max_) {
        return 0.0;
    }
    return coefficients_[ell + ell_max_];
}

Eigen::Index SpdcState::index(int ell_a, int ell_b) const {
    if (std::abs(ell_a) > ell_max || std::abs(ell_b) > ell_max) {
        throw DimensionError("SpdcState: OAM index outside window ±" + std::to_string(ell_max));
    }
    return static_cast<Eigen::Index>(ell_a + ell_max) * dim() + (ell_b + ell_max);
}

HybridState::HybridState(ComplexMatrix rho, SubspaceLabel subspace, std::string label, double tol)
    : rho_(std::move(rho)), subspace_(subspace), label_(std::move(label)) {
    if (rho_.rows() != 4 || rho_.cols() != 4) {
        throw DimensionError("HybridState: expected a 4x4 density, got " + std::to_string(rho_.rows()) + "x" +
                             std::to_string(rho_.cols()));
    }
    if (subspace_.ell_1 == subspace_.ell_2) {
        throw ArgumentError("HybridState: degenerate subspace " + subspace_.to_string());
    }
    DensityReport report = validate_density(rho_, tol);
    if (!report.passed) {
        throw NumericalError("HybridState: not a valid density (hermiticity " +
                             std::to_string(report.hermiticity_deviation) + ", trace " +
                             std::to_string(report.trace_deviation) + ", min eigenvalue " +
                             std::to_string(report.min_eigenvalue) + ")");
    }
}

BiPhotonDensity::BiPhotonDensity(ComplexMatrix rho, int ell_max) : rho_(std::move(rho)), ell_max_(ell_max) {
    const Eigen::Index n = 2 * oam_dim();
    if (ell_max_ < 0 || rho_.rows() != n || rho_.cols() != n) {
        throw DimensionError("BiPhotonDensity: expected " + std::to_string(n) + "x" + std::to_string(n) +
                             " for ell_max " + std::to_string(ell_max_));
    }
}

Eigen::Index BiPhotonDensity::index(int spin, int ell) const {
    if (spin < 0 || spin > 1 || std::abs(ell) > ell_max_) {
        throw DimensionError("BiPhotonDensity: index (spin " + std::to_string(spin) + ", ell " + std::to_string(ell) +
                             ") outside window ±" + std::to_string(ell_max_));
    }
    return static_cast<Eigen::Index>(spin) * oam_dim() + (ell + ell_max_);
}

int MultiDimState::ell_max() const {
    int out = 0;
    for (const auto &c : components_) {
        out = std::max(out, c.state.subspace().max_abs_ell());
    }
    return out;
}

BiPhotonDensity MultiDimState::density(int window) const {
    const int ell_max = window < 0 ? this->ell_max() : window;
    const int n = 2 * (2 * ell_max + 1);
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (const auto &c : components_) {
        rho += c.weight * embed(c.state, ell_max).rho();
    }
    return BiPhotonDensity(std::move(rho), ell_max);
}

OAMSpectrum default_spectrum(int ell_max) {
    return OAMSpectrum::uniform(ell_max);
}

SpdcState spdc_state(const OAMSpectrum &spectrum) {
    SpdcState out;
    out.ell_max = spectrum.ell_max();
    out.amplitudes = Ket::Zero(static_cast<Eigen::Index>(out.dim()) * out.dim());
    for (int ell = -out.ell_max; ell <= out.ell_max; ++ell) {
        out.amplitudes(out.index(ell, -ell)) = spectrum.coefficient(ell);
    }
    return out;
}

Ket hybrid_bell_ket(double relative_phase) {
    Ket k = Ket::Zero(4);
    k(0) = kInvSqrt2;
    k(3) = std::polar(kInvSqrt2, relative_phase);
    return k;
}

HybridState post_select_hybrid(const SubspaceLabel &sub, double relative_phase) {
    return HybridState(outer(hybrid_bell_ket(relative_phase)), SubspaceLabel::make(sub.ell_1, sub.ell_2),
                       "bell" + sub.to_string());
}

MultiDimState multidim_mixture(std::vector<MultiDimComponent> components) {
    if (components.empty()) {
        throw ArgumentError("multidim_mixture: no components");
    }
    double total = 0.0;
    for (const auto &c : components) {
        if (c.weight < 0.0) {
            throw ArgumentError("multidim_mixture: negative weight " + std::to_string(c.weight));
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw ArgumentError("multidim_mixture: weights sum to " + std::to_string(total) + ", expected 1");
    }
    MultiDimState out;
    out.components_ = std::move(components);
    return out;
}

ComplexMatrix reduce_oam_photon(const HybridState &state) {
    return partial_trace(state.rho(), 2, 2, Subsystem::B);
}

HybridState apply_werner(const HybridState &state, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError("apply_werner: p must lie in [0, 1], got " + std::to_string(p));
    }
    ComplexMatrix rho = p * state.rho() + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
    return HybridState(std::move(rho), state.subspace(), state.label());
}

BiPhotonDensity embed(const HybridState &state, int ell_max) {
    const SubspaceLabel &sub = state.subspace();
    if (sub.max_abs_ell() > ell_max) {
        throw DimensionError("embed: subspace " + sub.to_string() + " does not fit window ±" +
                             std::to_string(ell_max));
    }
    const int d = 2 * ell_max + 1;
    ComplexMatrix rho = ComplexMatrix::Zero(2 * d, 2 * d);
    BiPhotonDensity shape(rho, ell_max);
    const int ells[2] = {sub.ell_1, sub.ell_2};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            rho(shape.index(a / 2, ells[a % 2]), shape.index(b / 2, ells[b % 2])) = state.rho()(a, b);
        }
    }
    return BiPhotonDensity(std::move(rho), ell_max);
}

HybridState restrict_to_subspace(const BiPhotonDensity &density, const SubspaceLabel &sub, std::string label,
                                 double leakage_tol) {
    const int ells[2] = {sub.ell_1, sub.ell_2};
    Eigen::Index idx[4];
    for (int a = 0; a < 4; ++a) {
        idx[a] = density.index(a / 2, ells[a % 2]);
    }
    ComplexMatrix rho(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            rho(a, b) = density.rho()(idx[a], idx[b]);
        }
    }
    const double inside = trace_real(rho);
    const double total = trace_real(density.rho());
    if (total - inside > leakage_tol) {
        throw NumericalError("restrict_to_subspace: population " + std::to_string(total - inside) +
                             " lies outside subspace " + sub.to_string());
    }
    return HybridState(rho / inside, SubspaceLabel::make(sub.ell_1, sub.ell_2), std::move(label));
}

}  // namespace hybridlab
