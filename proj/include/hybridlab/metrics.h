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

#ifndef HYBRIDLAB_METRICS_H
#define HYBRIDLAB_METRICS_H

#include <array>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "hybridlab/linalg.h"
#include "hybridlab/measurement.h"

namespace hybridlab {

/// Uhlmann–Jozsa fidelity (Tr √(√ρ_T ρ_P √ρ_T))², clipped into [0, 1].
double fidelity(const ComplexMatrix &rho_target, const ComplexMatrix &rho_predicted);

/// Wootters concurrence of a 4x4 two-qubit density with the spin-flip
/// ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y). The λ_i are the eigenvalues of
/// √(√ρ ρ̃ √ρ), i.e. the square roots of the eigenvalues of ρρ̃.
double concurrence(const ComplexMatrix &rho);

/// Closed forms for the isotropic family p·|Ψ⟩⟨Ψ| + (1−p)·I/4.
inline double werner_fidelity(double p) { return (3.0 * p + 1.0) / 4.0; }
inline double werner_concurrence(double p) { return std::max(0.0, (3.0 * p - 1.0) / 2.0); }
inline double werner_chsh(double p) { return 2.0 * std::numbers::sqrt2 * p; }
/// Inverse of werner_fidelity.
double werner_p_for_fidelity(double target_fidelity);

/// Analyzer phases for the CHSH combination
///   S = E(a, b) − E(a, b′) + E(a′, b) + E(a′, b′),
/// a = OAM hologram phase θ_A, b = spin analyzer phase θ_B. The defaults give
/// S = 2√2 for the ideal hybrid Bell state.
struct ChshAngles {
    double oam_a = 7.0 * std::numbers::pi / 4.0;
    double oam_a_prime = std::numbers::pi / 4.0;
    double spin_b = 0.0;
    double spin_b_prime = std::numbers::pi / 2.0;
};

/// Every (θ_A, θ_B) pair needed by chsh_from_counts: each analyzer together
/// with its orthogonal partner.
std::vector<std::array<double, 2>> chsh_required_settings(const ChshAngles &angles = {});

struct ChshResult {
    double s = 0.0;
    double sigma = 0.0;
    /// E(a,b), E(a,b′), E(a′,b), E(a′,b′).
    std::array<double, 4> correlations{};
};

/// Coincidence lookup C(θ_A, θ_B); angles are given already reduced to [0, 2π).
using CoincidenceLookup = std::function<std::optional<double>(double theta_oam, double theta_spin)>;

/// E(θ_A, θ_B) = (A − B)/(A + B) with
///   A = C(θ_A, θ_B) + C(θ_A⊥, θ_B⊥),  B = C(θ_A⊥, θ_B) + C(θ_A, θ_B⊥),
/// where ⊥ denotes the orthogonal analyzer, a relative-phase shift of π
/// (the quarter-turn of the sector-hologram / polarizer-angle convention).
/// Uncertainty by Poisson propagation, σ_E² = 4AB/(A+B)³. Throws
/// ArgumentError when a setting is missing or A + B = 0.
ChshResult chsh_from_counts(const CoincidenceLookup &lookup, const ChshAngles &angles = {});

/// Lookup over records whose theta_a / theta_b_or_mode are numeric phases.
CoincidenceLookup lookup_from_records(std::span<const CoincidenceRecord> records);

/// S from trace formulas Tr[ρ (σ_spin(b) ⊗ σ_oam(a))], σ(θ) = P(θ) − P(θ+π).
double chsh_exact(const ComplexMatrix &rho, const ChshAngles &angles = {});

struct VisibilityFit {
    double offset = 0.0;     // a
    double amplitude = 0.0;  // |b|
    double phase = 0.0;      // φ
    double visibility = 0.0;
    double sigma = 0.0;
};

/// Least-squares fit of y ≈ a + b·cos(θ − φ); V = |b|/a clipped to [0, 1].
/// With `poisson_errors`, σ_V propagates var(y_i) = max(y_i, 1). Requires ≥ 8
/// points spanning a period; throws NumericalError when the fitted a ≤ 0.
VisibilityFit visibility(std::span<const double> theta, std::span<const double> y, bool poisson_errors = true);

struct Uncertain {
    double value = 0.0;
    double sigma = 0.0;
};

struct MetricReport {
    std::optional<Uncertain> fidelity;
    std::optional<Uncertain> concurrence;
    std::optional<Uncertain> chsh_s;
    std::optional<Uncertain> visibility;
    std::optional<Uncertain> purity;
    std::optional<double> normalized_fidelity;
    std::optional<double> normalized_concurrence;

    /// Clip every present metric into its range; throws NumericalError if a
    /// value is outside by more than 1e-9.
    void clip_to_ranges();
};

struct NormalizedMetrics {
    double fidelity;
    double concurrence;
};

/// F_n = F_fibre/F_free, C_n = C_fibre/C_free.
NormalizedMetrics normalized_metrics(const MetricReport &free_space, const MetricReport &fibre);

struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for n < 2
};

SummaryStats summarize(std::span<const double> values);

}  // namespace hybridlab

#endif
