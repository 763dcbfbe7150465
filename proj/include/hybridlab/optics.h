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

#ifndef HYBRIDLAB_OPTICS_H
#define HYBRIDLAB_OPTICS_H

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "hybridlab/linalg.h"
#include "hybridlab/states.h"

namespace hybridlab {

/// Spin-orbit coupling plate of charge q (2q integer):
///   |ℓ⟩|R⟩ → |ℓ−2q⟩|L⟩,   |ℓ⟩|L⟩ → |ℓ+2q⟩|R⟩.
class QPlate {
   public:
    /// q given as the integer 2q, so QPlate(1) is the q = 1/2 plate.
    explicit QPlate(int twice_q) : twice_q_(twice_q) {}
    /// Throws ArgumentError unless 2q is an integer.
    static QPlate from_charge(double q);

    int twice_q() const { return twice_q_; }
    double charge() const { return twice_q_ / 2.0; }

   private:
    int twice_q_;
};

/// A 2x2 unitary acting on the spin register (wave plate, fibre rotation).
class SpinElement {
   public:
    /// Throws NumericalError if ‖U†U − I‖_max ≥ 1e-10.
    SpinElement(ComplexMatrix jones, std::string label);

    const ComplexMatrix &jones() const { return jones_; }
    const std::string &label() const { return label_; }

   private:
    ComplexMatrix jones_;
    std::string label_;
};

enum class WaveplateKind { QWP, HWP };

/// Retarder with retardance π/2 (QWP) or π (HWP) about `fast_axis`, measured
/// from H. Built as Rot(−θ)·diag(1, e^{iΓ})·Rot(θ) in the H/V basis and
/// returned in the circular basis used everywhere else.
SpinElement waveplate(WaveplateKind kind, double fast_axis);

/// Rz(α)·Ry(β)·Rz(γ) on the spin qubit.
SpinElement spin_rotation(const std::array<double, 3> &angles);

/// Fibre channel: birefringence rotation on the spin photon, then isotropic
/// Werner mixing. The free-space OAM photon is untouched.
struct ChannelParams {
    double werner_p = 1.0;
    std::array<double, 3> birefringence_angles{0.0, 0.0, 0.0};

    /// Throws ArgumentError when werner_p ∉ [0, 1].
    void validate() const;
};

HybridState smf_channel(const HybridState &state, const ChannelParams &params);

/// Rank-1 projector onto a polarisation state.
ComplexMatrix projector_spin(Polarisation p);
/// Analyzer made of `element` followed by a polarizer passing `passed`: U†|p⟩⟨p|U.
ComplexMatrix projector_spin(const SpinElement &element, Polarisation passed);
/// Projector onto (|R⟩ + e^{−iφ}|L⟩)/√2; H, D, V, A sit at φ = 0, π/2, π, 3π/2.
ComplexMatrix projector_spin_phase(double phase);

/// OAM-side measurement in a 2x2 subspace: one of the eigenstates, or the
/// hologram superposition (|ℓ₁⟩ + e^{iθ}|ℓ₂⟩)/√2.
struct OamSelection {
    enum class Kind { Ell1, Ell2, Superposition };
    Kind kind = Kind::Ell1;
    double theta = 0.0;

    static OamSelection ell1() { return {Kind::Ell1, 0.0}; }
    static OamSelection ell2() { return {Kind::Ell2, 0.0}; }
    static OamSelection superposition(double theta) { return {Kind::Superposition, theta}; }
};

struct OamProjector {
    ComplexMatrix matrix;
    std::string label;
};

/// θ is reduced into [0, 2π).
OamProjector projector_oam(const SubspaceLabel &sub, const OamSelection &which);

double wrap_angle(double theta);

// ---------------------------------------------------------------------------
// Full pipeline ket: spin photon (OAM window ⊗ spin) ⊗ OAM photon (OAM window).
// ---------------------------------------------------------------------------

class SpinOrbitKet {
   public:
    SpinOrbitKet(int spin_photon_ell_max, int oam_photon_ell_max);

    /// Materialize the spin register of an SPDC pair. The spin photon's
    /// OAM window is widened to `spin_photon_ell_max` to leave room for
    /// the q-plate shifts.
    static SpinOrbitKet from_spdc(const SpdcState &spdc, int spin_photon_ell_max);

    int spin_photon_ell_max() const { return spin_ell_max_; }
    int oam_photon_ell_max() const { return oam_ell_max_; }
    Eigen::Index index(int spin_photon_ell, int spin, int oam_photon_ell) const;
    bool in_window(int spin_photon_ell, int oam_photon_ell) const;

    Complex &at(int spin_photon_ell, int spin, int oam_photon_ell) {
        return amplitudes_(index(spin_photon_ell, spin, oam_photon_ell));
    }
    Complex at(int spin_photon_ell, int spin, int oam_photon_ell) const {
        return amplitudes_(index(spin_photon_ell, spin, oam_photon_ell));
    }

    const Ket &amplitudes() const { return amplitudes_; }
    Ket &amplitudes() { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }

   private:
    int spin_ell_max_;
    int oam_ell_max_;
    Ket amplitudes_;
};

/// Throws DimensionError (naming the required ell_max) if a populated
/// amplitude would be shifted outside the spin photon's window.
SpinOrbitKet qplate_apply(const SpinOrbitKet &ket, const QPlate &plate);
SpinOrbitKet spin_element_apply(const SpinOrbitKet &ket, const SpinElement &element);

/// Matrix of the q-plate on the spin photon's truncated OAM ⊗ spin space.
/// Columns whose image leaves the window are zero.
ComplexMatrix qplate_matrix(const QPlate &plate, int ell_max);

using OpticalElement = std::variant<QPlate, SpinElement>;

/// target 1 → [q=1/2]; target 2 → [q=1/2, HWP(hwp_axis), q=1/2].
std::vector<OpticalElement> qplate_cascade_spec(int target_ell, double hwp_axis = 0.0);
SpinOrbitKet apply_elements(const SpinOrbitKet &ket, const std::vector<OpticalElement> &elements);

struct PostSelection {
    BiPhotonDensity density;
    double probability;
};

/// Single-mode fibre coupling as a filter: keep the spin photon's ℓ = 0
/// component, trace nothing else, renormalize. Throws NumericalError if the
/// ℓ = 0 component is empty.
PostSelection post_select_fundamental(const SpinOrbitKet &ket);

/// SPDC → spin-orbit optics → fibre post-selection, ending on the ±target
/// hybrid subspace.
HybridState hybrid_from_spdc(const OAMSpectrum &spectrum, int target_ell, double hwp_axis = 0.0);

}  // namespace hybridlab

#endif
