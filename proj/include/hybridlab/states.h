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

#ifndef HYBRIDLAB_STATES_H
#define HYBRIDLAB_STATES_H

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridlab/linalg.h"

namespace hybridlab {

// ---------------------------------------------------------------------------
// Polarisation (spin) conventions.
//
// The spin qubit is always written in the circular basis: index 0 = |R⟩,
// index 1 = |L⟩. Linear states are fixed once, here, as
//
//   |H⟩ = (|R⟩ + |L⟩)/√2          |V⟩ = i(|R⟩ − |L⟩)/√2
//   |D⟩ = (|H⟩ + |V⟩)/√2          |A⟩ = (|H⟩ − |V⟩)/√2
//
// so that every equal-weight spin state is (|R⟩ + e^{−iφ}|L⟩)/√2 up to a
// global phase with φ = 0, π/2, π, 3π/2 for H, D, V, A.
// ---------------------------------------------------------------------------

enum class Polarisation { R, L, H, V, D, A };

inline constexpr int kSpinR = 0;
inline constexpr int kSpinL = 1;

Ket polarisation_ket(Polarisation p);

/// (|R⟩ + e^{−iφ}|L⟩)/√2.
Ket equatorial_spin_ket(double phase);

std::string_view to_string(Polarisation p);
std::optional<Polarisation> parse_polarisation(std::string_view text);

// ---------------------------------------------------------------------------
// OAM subspaces and the hybrid two-qubit states living on them.
//
// A hybrid density is 4x4 on spin(2) ⊗ OAM-subspace(2), spin-major:
//   0 ↦ |R⟩|ℓ₁⟩, 1 ↦ |R⟩|ℓ₂⟩, 2 ↦ |L⟩|ℓ₁⟩, 3 ↦ |L⟩|ℓ₂⟩.
// ---------------------------------------------------------------------------

struct SubspaceLabel {
    int ell_1 = 1;
    int ell_2 = -1;

    /// Throws ArgumentError when ell_1 == ell_2.
    static SubspaceLabel make(int ell_1, int ell_2);
    int max_abs_ell() const;
    std::string to_string() const;

    bool operator==(const SubspaceLabel &) const = default;
};

/// SPDC mode weights c_ℓ for ℓ ∈ [−ell_max, ell_max], Σ|c_ℓ|² = 1.
class OAMSpectrum {
   public:
    /// Takes 2*ell_max+1 coefficients indexed from ℓ = −ell_max. Throws
    /// ArgumentError unless they are normalized within 1e-10.
    OAMSpectrum(int ell_max, std::vector<Complex> coefficients);

    static OAMSpectrum uniform(int ell_max);
    /// c_ℓ ∝ exp(−ℓ²/width²).
    static OAMSpectrum gaussian(int ell_max, double width);
    /// Rescales arbitrary non-zero weights to unit norm.
    static OAMSpectrum normalized(int ell_max, std::vector<Complex> raw);

    int ell_max() const { return ell_max_; }
    int dim() const { return 2 * ell_max_ + 1; }
    Complex coefficient(int ell) const;
    const std::vector<Complex> &coefficients() const { return coefficients_; }

   private:
    int ell_max_;
    std::vector<Complex> coefficients_;
};

/// Two-photon OAM ket Σ c_ℓ |ℓ⟩_spin-photon |−ℓ⟩_oam-photon.
///
/// Both photons leave the crystal as |H⟩|H⟩. That factor is kept here as a
/// label instead of being expanded into the vector; the spin register is only
/// materialized when the spin-orbit optics act (see SpinOrbitKet).
struct SpdcState {
    Ket amplitudes;
    int ell_max = 0;
    Polarisation spin_photon_polarisation = Polarisation::H;
    Polarisation oam_photon_polarisation = Polarisation::H;

    int dim() const { return 2 * ell_max + 1; }
    /// Flat index of |ℓ_a⟩|ℓ_b⟩.
    Eigen::Index index(int ell_a, int ell_b) const;
    Complex amplitude(int ell_a, int ell_b) const { return amplitudes(index(ell_a, ell_b)); }
};

/// A validated 4x4 density on spin ⊗ OAM-subspace.
class HybridState {
   public:
    /// Throws NumericalError if validate_density fails at `tol`.
    HybridState(ComplexMatrix rho, SubspaceLabel subspace, std::string label = {}, double tol = 1e-8);

    const ComplexMatrix &rho() const { return rho_; }
    const SubspaceLabel &subspace() const { return subspace_; }
    const std::string &label() const { return label_; }

   private:
    ComplexMatrix rho_;
    SubspaceLabel subspace_;
    std::string label_;
};

/// Density on spin(2) ⊗ OAM window ℓ ∈ [−ell_max, ell_max], spin-major.
class BiPhotonDensity {
   public:
    BiPhotonDensity(ComplexMatrix rho, int ell_max);

    const ComplexMatrix &rho() const { return rho_; }
    int ell_max() const { return ell_max_; }
    int oam_dim() const { return 2 * ell_max_ + 1; }
    Eigen::Index index(int spin, int ell) const;

   private:
    ComplexMatrix rho_;
    int ell_max_;
};

struct MultiDimComponent {
    double weight;
    HybridState state;
};

/// Convex mixture of hybrid states on (possibly different) OAM subspaces.
class MultiDimState {
   public:
    const std::vector<MultiDimComponent> &components() const { return components_; }
    /// Smallest window holding every component's ℓ values.
    int ell_max() const;
    /// Σ p_ℓ ρ_ℓ embedded in spin ⊗ OAM(window). `ell_max` < 0 picks the smallest window.
    BiPhotonDensity density(int ell_max = -1) const;

   private:
    friend MultiDimState multidim_mixture(std::vector<MultiDimComponent> components);
    std::vector<MultiDimComponent> components_;
};

OAMSpectrum default_spectrum(int ell_max);

SpdcState spdc_state(const OAMSpectrum &spectrum);

/// (|R⟩|ℓ₁⟩ + e^{iφ}|L⟩|ℓ₂⟩)/√2 as a density.
Ket hybrid_bell_ket(double relative_phase = 0.0);
HybridState post_select_hybrid(const SubspaceLabel &sub, double relative_phase = 0.0);

/// Throws ArgumentError on negative weights or weights not summing to 1.
MultiDimState multidim_mixture(std::vector<MultiDimComponent> components);

/// Partial trace over spin. Always the diagonal mixture for post-selected
/// Bell states: there are no |ℓ₁⟩⟨ℓ₂| coherences in the marginal.
ComplexMatrix reduce_oam_photon(const HybridState &state);

/// p·ρ + (1−p)·I/4. Throws ArgumentError for p ∉ [0, 1].
HybridState apply_werner(const HybridState &state, double p);

/// Embed a 2x2-subspace state in spin ⊗ OAM(window).
BiPhotonDensity embed(const HybridState &state, int ell_max);

/// Restrict a windowed density to a 2x2 subspace. Throws NumericalError if
/// more than `leakage_tol` of the population lies outside the subspace.
HybridState restrict_to_subspace(const BiPhotonDensity &density, const SubspaceLabel &sub,
                                 std::string label = {}, double leakage_tol = 1e-9);

}  // namespace hybridlab

#endif
