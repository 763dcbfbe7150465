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

#include "hybridlab/measurement.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "hybridlab/errors.h"

namespace hybridlab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_rank1_projector(const ComplexMatrix &p, const char *side) {
    if (p.rows() != 2 || p.cols() != 2) {
        throw DimensionError(fmt::format("MeasurementSetting: {} projector must be 2x2", side));
    }
    const double idem = max_abs(p * p - p);
    const double herm = max_abs(p - p.adjoint());
    const double rank = std::abs(p.trace() - Complex(1.0, 0.0));
    if (idem > 1e-10 || herm > 1e-10 || rank > 1e-10) {
        throw NumericalError(fmt::format("MeasurementSetting: {} side is not a rank-1 projector "
                                         "(idempotence {:.3g}, hermiticity {:.3g}, trace {:.3g})",
                                         side, idem, herm, rank));
    }
}

bool same_double(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

MeasurementSetting MeasurementSetting::make(ComplexMatrix spin_projector, ComplexMatrix oam_projector,
                                            std::string label, std::string spin_tag, double theta_oam) {
    require_rank1_projector(spin_projector, "spin");
    require_rank1_projector(oam_projector, "oam");
    MeasurementSetting s;
    s.spin_projector = std::move(spin_projector);
    s.oam_projector = std::move(oam_projector);
    s.label = std::move(label);
    s.spin_tag = std::move(spin_tag);
    s.theta_oam = theta_oam;
    return s;
}

ComplexMatrix MeasurementSetting::joint() const {
    return tensor_product(spin_projector, oam_projector);
}

bool CoincidenceRecord::operator==(const CoincidenceRecord &o) const {
    return label == o.label && same_double(theta_a, o.theta_a) && theta_b_or_mode == o.theta_b_or_mode &&
           counts == o.counts && total_pairs == o.total_pairs && seed == o.seed;
}

double detection_probability(const ComplexMatrix &rho, const MeasurementSetting &setting) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw DimensionError(
            fmt::format("detection_probability: expected a 4x4 density, got {}x{}", rho.rows(), rho.cols()));
    }
    const ComplexMatrix m = setting.joint();
    const double p = (m * rho * m.adjoint()).trace().real();
    return std::clamp(p, 0.0, 1.0);
}

double detection_probability(const HybridState &state, const MeasurementSetting &setting) {
    return detection_probability(state.rho(), setting);
}

std::uint64_t sample_counts(double mean, std::uint64_t seed, std::uint64_t index) {
    if (!(mean > 0.0)) {
        return 0;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(rng);
}

std::vector<CoincidenceRecord> simulate_counts(const ComplexMatrix &rho, std::span<const MeasurementSetting> settings,
                                               const SimulationOptions &options) {
    if (options.pairs_per_setting < 1) {
        throw ArgumentError("simulate_counts: pairs_per_setting must be at least 1");
    }
    if (options.background < 0.0) {
        throw ArgumentError("simulate_counts: background rate must be non-negative");
    }
    std::vector<CoincidenceRecord> out;
    out.reserve(settings.size());
    for (std::size_t i = 0; i < settings.size(); ++i) {
        const MeasurementSetting &s = settings[i];
        const double mean =
            static_cast<double>(options.pairs_per_setting) * detection_probability(rho, s) + options.background;
        CoincidenceRecord r;
        r.label = s.label;
        r.theta_a = s.theta_oam;
        r.theta_b_or_mode = s.spin_tag;
        r.counts = sample_counts(mean, options.seed, options.first_index + i);
        r.total_pairs = options.pairs_per_setting;
        r.seed = options.seed;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CoincidenceRecord> simulate_counts(const HybridState &state,
                                               std::span<const MeasurementSetting> settings,
                                               const SimulationOptions &options) {
    return simulate_counts(state.rho(), settings, options);
}

namespace {

std::vector<int> window_ells(const BiPhotonDensity &density, int window) {
    if (window < 0) {
        throw ArgumentError("mode_spectrum: empty OAM window");
    }
    const int w = std::min(window, density.ell_max());
    std::vector<int> ells;
    for (int ell = -w; ell <= w; ++ell) {
        ells.push_back(ell);
    }
    return ells;
}

// ⟨s, ℓ| ρ |s, ℓ⟩ for the spin state |s⟩.
double joint_probability(const BiPhotonDensity &density, const Ket &spin, int ell) {
    const Eigen::Index r = density.index(kSpinR, ell);
    const Eigen::Index l = density.index(kSpinL, ell);
    Complex acc = 0.0;
    const Eigen::Index idx[2] = {r, l};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            acc += std::conj(spin(a)) * density.rho()(idx[a], idx[b]) * spin(b);
        }
    }
    return std::max(acc.real(), 0.0);
}

}  // namespace

std::map<int, double> mode_spectrum(const BiPhotonDensity &density, Polarisation spin_selection, int window) {
    const Ket spin = polarisation_ket(spin_selection);
    std::map<int, double> out;
    double total = 0.0;
    for (int ell : window_ells(density, window)) {
        const double p = joint_probability(density, spin, ell);
        out[ell] = p;
        total += p;
    }
    if (!(total > 0.0)) {
        throw ArgumentError(fmt::format("mode_spectrum: no probability for spin {} within window ±{}",
                                        to_string(spin_selection), window));
    }
    for (auto &[ell, p] : out) {
        p /= total;
    }
    return out;
}

std::vector<SpectrumPoint> simulate_mode_spectrum(const BiPhotonDensity &density, Polarisation spin_selection,
                                                  int window, const SimulationOptions &options) {
    if (options.pairs_per_setting < 1) {
        throw ArgumentError("simulate_mode_spectrum: pairs_per_setting must be at least 1");
    }
    const std::map<int, double> exact = mode_spectrum(density, spin_selection, window);
    const Ket spin = polarisation_ket(spin_selection);
    std::vector<SpectrumPoint> out;
    std::uint64_t index = options.first_index;
    std::uint64_t total_counts = 0;
    for (const auto &[ell, conditional] : exact) {
        const double mean = static_cast<double>(options.pairs_per_setting) * joint_probability(density, spin, ell) +
                            options.background;
        CoincidenceRecord r;
        r.label = fmt::format("{}|l={:+d}", to_string(spin_selection), ell);
        r.theta_a = std::numeric_limits<double>::quiet_NaN();
        r.theta_b_or_mode = std::string(to_string(spin_selection));
        r.counts = sample_counts(mean, options.seed, index++);
        r.total_pairs = options.pairs_per_setting;
        r.seed = options.seed;
        total_counts += r.counts;
        out.push_back(SpectrumPoint{ell, conditional, 0.0, std::move(r)});
    }
    for (SpectrumPoint &p : out) {
        p.measured = total_counts > 0 ? static_cast<double>(p.record.counts) / static_cast<double>(total_counts) : 0.0;
    }
    return out;
}

std::vector<double> uniform_grid(int points) {
    if (points < 1) {
        throw ArgumentError("uniform_grid: need at least one point");
    }
    std::vector<double> grid(points);
    for (int k = 0; k < points; ++k) {
        grid[k] = 2 * kPi * k / points;
    }
    return grid;
}

MeasurementSetting bell_setting(const SubspaceLabel &sub, double theta_oam, double theta_spin) {
    const OamProjector oam = projector_oam(sub, OamSelection::superposition(theta_oam));
    const double tb = wrap_angle(theta_spin);
    return MeasurementSetting::make(projector_spin_phase(tb), oam.matrix,
                                    fmt::format("spin={:.6g}pi|{}", tb / kPi, oam.label), fmt::format("{}", tb),
                                    wrap_angle(theta_oam));
}

std::vector<double> Curve::thetas() const {
    std::vector<double> out;
    for (const auto &r : records) {
        out.push_back(r.theta_a);
    }
    return out;
}

std::vector<double> Curve::counts() const {
    std::vector<double> out;
    for (const auto &r : records) {
        out.push_back(static_cast<double>(r.counts));
    }
    return out;
}

Curve bell_curve(const HybridState &state, double theta_spin, std::span<const double> theta_grid,
                 const SimulationOptions &options) {
    if (theta_grid.empty()) {
        throw ArgumentError("bell_curve: empty theta grid");
    }
    std::vector<MeasurementSetting> settings;
    for (double t : theta_grid) {
        settings.push_back(bell_setting(state.subspace(), t, theta_spin));
    }
    return Curve{fmt::format("{}", wrap_angle(theta_spin)), simulate_counts(state, settings, options)};
}

std::string_view to_string(EraserMode mode) {
    return mode == EraserMode::Distinguish ? "distinguish" : "erase";
}

MeasurementSetting eraser_setting(const SubspaceLabel &sub, EraserMode mode, double theta_oam) {
    const SpinElement marker = waveplate(WaveplateKind::QWP, kPi / 4);
    const Polarisation passed = mode == EraserMode::Distinguish ? Polarisation::H : Polarisation::D;
    const OamProjector oam = projector_oam(sub, OamSelection::superposition(theta_oam));
    return MeasurementSetting::make(projector_spin(marker, passed), oam.matrix,
                                    fmt::format("{}|{}", to_string(mode), oam.label), std::string(to_string(mode)),
                                    wrap_angle(theta_oam));
}

Curve eraser_scan(const HybridState &state, EraserMode mode, std::span<const double> theta_grid,
                  const SimulationOptions &options) {
    if (theta_grid.empty()) {
        throw ArgumentError("eraser_scan: empty theta grid");
    }
    std::vector<MeasurementSetting> settings;
    for (double t : theta_grid) {
        settings.push_back(eraser_setting(state.subspace(), mode, t));
    }
    return Curve{std::string(to_string(mode)), simulate_counts(state, settings, options)};
}

}  // namespace hybridlab
