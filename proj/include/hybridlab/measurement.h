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

#ifndef HYBRIDLAB_MEASUREMENT_H
#define HYBRIDLAB_MEASUREMENT_H

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hybridlab/linalg.h"
#include "hybridlab/optics.h"
#include "hybridlab/states.h"

namespace hybridlab {

/// Local projector pair P_spin ⊗ P_oam.
struct MeasurementSetting {
    ComplexMatrix spin_projector;
    ComplexMatrix oam_projector;
    std::string label;
    /// Hologram phase θ_A when the OAM side is a superposition, NaN otherwise.
    double theta_oam = std::numeric_limits<double>::quiet_NaN();
    /// Spin-side tag written to the theta_B_or_mode column.
    std::string spin_tag;

    /// Throws NumericalError unless both projectors are rank-1 and
    /// idempotent within 1e-10.
    static MeasurementSetting make(ComplexMatrix spin_projector, ComplexMatrix oam_projector, std::string label,
                                   std::string spin_tag, double theta_oam = std::numeric_limits<double>::quiet_NaN());

    ComplexMatrix joint() const;
};

struct CoincidenceRecord {
    std::string label;
    double theta_a = std::numeric_limits<double>::quiet_NaN();
    std::string theta_b_or_mode;
    std::uint64_t counts = 0;
    std::uint64_t total_pairs = 0;
    std::uint64_t seed = 0;

    bool operator==(const CoincidenceRecord &o) const;
};

struct SimulationOptions {
    std::uint64_t pairs_per_setting = 10000;
    std::uint64_t seed = 0;
    /// Offset of the first setting's RNG substream.
    std::uint64_t first_index = 0;
    /// Flat accidental-coincidence rate added to every mean (counts per setting).
    double background = 0.0;
};

/// Tr[M ρ M†] with M = P_spin ⊗ P_oam, clipped into [0, 1].
double detection_probability(const ComplexMatrix &rho, const MeasurementSetting &setting);
double detection_probability(const HybridState &state, const MeasurementSetting &setting);

/// One Poisson draw from the substream identified by (seed, index). The value
/// depends only on its arguments, so settings can be evaluated in any order.
std::uint64_t sample_counts(double mean, std::uint64_t seed, std::uint64_t index);

/// Poisson counts with mean N·p_i (+ background) for each setting i, drawn from
/// substream (seed, first_index + i).
std::vector<CoincidenceRecord> simulate_counts(const ComplexMatrix &rho, std::span<const MeasurementSetting> settings,
                                               const SimulationOptions &options);
std::vector<CoincidenceRecord> simulate_counts(const HybridState &state,
                                               std::span<const MeasurementSetting> settings,
                                               const SimulationOptions &options);

/// Conditional OAM distribution of the free-space photon given a spin
/// projection, over ℓ ∈ [−window, window]. Throws ArgumentError if the window
/// is empty or carries no probability.
std::map<int, double> mode_spectrum(const BiPhotonDensity &density, Polarisation spin_selection, int window);

struct SpectrumPoint {
    int ell;
    double probability;  // exact conditional probability
    double measured;     // counts / Σ counts over the window
    CoincidenceRecord record;
};

/// Coincidences for spin_selection × |ℓ⟩⟨ℓ|, one substream per ℓ.
std::vector<SpectrumPoint> simulate_mode_spectrum(const BiPhotonDensity &density, Polarisation spin_selection,
                                                  int window, const SimulationOptions &options);

/// `points` equally spaced angles over [0, 2π).
std::vector<double> uniform_grid(int points);

/// Spin analyzer for the Bell curves: θ_B = 0, π/2, π, 3π/2 ↦ H, D, V, A.
MeasurementSetting bell_setting(const SubspaceLabel &sub, double theta_oam, double theta_spin);

struct Curve {
    std::string tag;
    std::vector<CoincidenceRecord> records;

    std::vector<double> thetas() const;
    std::vector<double> counts() const;
};

/// Coincidences vs hologram phase θ_A at fixed spin analyzer θ_B. Ideal mean
/// N·(1 + cos(θ_A − θ_B))/4.
Curve bell_curve(const HybridState &state, double theta_spin, std::span<const double> theta_grid,
                 const SimulationOptions &options);

enum class EraserMode { Distinguish, Erase };

std::string_view to_string(EraserMode mode);

/// Spin analyzer QWP(π/4) → polarizer. Distinguish passes H, selecting one
/// OAM marker; erase passes D, the equal superposition of both markers.
MeasurementSetting eraser_setting(const SubspaceLabel &sub, EraserMode mode, double theta_oam);

Curve eraser_scan(const HybridState &state, EraserMode mode, std::span<const double> theta_grid,
                  const SimulationOptions &options);

}  // namespace hybridlab

#endif
