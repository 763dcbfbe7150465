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

#include "hybridlab/optics.h"

#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "hybridlab/errors.h"

namespace hybridlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Columns are |H⟩ and |V⟩ written in the circular basis.
ComplexMatrix hv_to_circular() {
    ComplexMatrix t(2, 2);
    t.col(0) = polarisation_ket(Polarisation::H);
    t.col(1) = polarisation_ket(Polarisation::V);
    return t;
}

ComplexMatrix rotation_hv(double theta) {
    ComplexMatrix r(2, 2);
    r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    return r;
}

std::string angle_label(double theta) {
    return fmt::format("{:.6g}pi", theta / kPi);
}

}  // namespace

QPlate QPlate::from_charge(double q) {
    const double twice = 2.0 * q;
    if (std::abs(twice - std::round(twice)) > 1e-12) {
        throw ArgumentError(fmt::format("QPlate: charge q = {} is not a half-integer", q));
    }
    return QPlate(static_cast<int>(std::lround(twice)));
}

SpinElement::SpinElement(ComplexMatrix jones, std::string label) : jones_(std::move(jones)), label_(std::move(label)) {
    if (jones_.rows() != 2 || jones_.cols() != 2) {
        throw DimensionError("SpinElement: Jones matrix must be 2x2");
    }
    const double dev = max_abs(jones_.adjoint() * jones_ - ComplexMatrix::Identity(2, 2));
    if (dev >= 1e-10) {
        throw NumericalError(fmt::format("SpinElement '{}': not unitary (deviation {:.3g})", label_, dev));
    }
}

SpinElement waveplate(WaveplateKind kind, double fast_axis) {
    const double retardance = kind == WaveplateKind::QWP ? kPi / 2 : kPi;
    ComplexMatrix retarder = ComplexMatrix::Zero(2, 2);
    retarder(0, 0) = 1.0;
    retarder(1, 1) = std::polar(1.0, retardance);
    const ComplexMatrix jones_hv = rotation_hv(-fast_axis) * retarder * rotation_hv(fast_axis);
    const ComplexMatrix t = hv_to_circular();
    return SpinElement(t * jones_hv * t.adjoint(),
                       fmt::format("{}({})", kind == WaveplateKind::QWP ? "QWP" : "HWP", angle_label(fast_axis)));
}

SpinElement spin_rotation(const std::array<double, 3> &angles) {
    auto rz = [](double a) {
        ComplexMatrix m = ComplexMatrix::Zero(2, 2);
        m(0, 0) = std::polar(1.0, -a / 2);
        m(1, 1) = std::polar(1.0, a / 2);
        return m;
    };
    ComplexMatrix ry(2, 2);
    const double c = std::cos(angles[1] / 2);
    const double s = std::sin(angles[1] / 2);
    ry << c, -s, s, c;
    return SpinElement(rz(angles[0]) * ry * rz(angles[2]),
                       fmt::format("rotation({:.6g},{:.6g},{:.6g})", angles[0], angles[1], angles[2]));
}

void ChannelParams::validate() const {
    if (!(werner_p >= 0.0 && werner_p <= 1.0)) {
        throw ArgumentError(fmt::format("ChannelParams: werner_p must lie in [0, 1], got {}", werner_p));
    }
    for (double a : birefringence_angles) {
        if (!std::isfinite(a)) {
            throw ArgumentError("ChannelParams: birefringence angles must be finite");
        }
    }
}

HybridState smf_channel(const HybridState &state, const ChannelParams &params) {
    params.validate();
    const ComplexMatrix u = tensor_product(spin_rotation(params.birefringence_angles).jones(),
                                           ComplexMatrix::Identity(2, 2));
    ComplexMatrix rotated = u * state.rho() * u.adjoint();
    rotated = 0.5 * (rotated + rotated.adjoint());
    return apply_werner(HybridState(std::move(rotated), state.subspace(), state.label()), params.werner_p);
}

ComplexMatrix projector_spin(Polarisation p) {
    return outer(polarisation_ket(p));
}

ComplexMatrix projector_spin(const SpinElement &element, Polarisation passed) {
    const ComplexMatrix &u = element.jones();
    return u.adjoint() * projector_spin(passed) * u;
}

ComplexMatrix projector_spin_phase(double phase) {
    return outer(equatorial_spin_ket(phase));
}

double wrap_angle(double theta) {
    double t = std::fmod(theta, 2 * kPi);
    if (t < 0) {
        t += 2 * kPi;
    }
    // fmod of values a rounding error below 2π lands on ~2π; fold to 0.
    if (2 * kPi - t < 1e-12) {
        t = 0.0;
    }
    return t;
}

OamProjector projector_oam(const SubspaceLabel &sub, const OamSelection &which) {
    Ket k = Ket::Zero(2);
    std::string label;
    auto ell_str = [](int v) { return fmt::format("l={:+d}", v); };
    switch (which.kind) {
        case OamSelection::Kind::Ell1:
            k(0) = 1.0;
            label = ell_str(sub.ell_1);
            break;
        case OamSelection::Kind::Ell2:
            k(1) = 1.0;
            label = ell_str(sub.ell_2);
            break;
        case OamSelection::Kind::Superposition: {
            const double theta = wrap_angle(which.theta);
            k(0) = kInvSqrt2;
            k(1) = std::polar(kInvSqrt2, theta);
            label = "theta=" + angle_label(theta);
            break;
        }
    }
    return OamProjector{outer(k), std::move(label)};
}

SpinOrbitKet::SpinOrbitKet(int spin_photon_ell_max, int oam_photon_ell_max)
    : spin_ell_max_(spin_photon_ell_max), oam_ell_max_(oam_photon_ell_max) {
    if (spin_ell_max_ < 0 || oam_ell_max_ < 0) {
        throw DimensionError("SpinOrbitKet: OAM windows must be non-negative");
    }
    amplitudes_ = Ket::Zero(static_cast<Eigen::Index>(2 * spin_ell_max_ + 1) * 2 * (2 * oam_ell_max_ + 1));
}

SpinOrbitKet SpinOrbitKet::from_spdc(const SpdcState &spdc, int spin_photon_ell_max) {
    if (spin_photon_ell_max < spdc.ell_max) {
        throw DimensionError(fmt::format("SpinOrbitKet::from_spdc: spin photon window {} smaller than SPDC window {}",
                                         spin_photon_ell_max, spdc.ell_max));
    }
    SpinOrbitKet out(spin_photon_ell_max, spdc.ell_max);
    const Ket pol = polarisation_ket(spdc.spin_photon_polarisation);
    for (int la = -spdc.ell_max; la <= spdc.ell_max; ++la) {
        for (int lb = -spdc.ell_max; lb <= spdc.ell_max; ++lb) {
            const Complex amp = spdc.amplitude(la, lb);
            if (amp == Complex(0.0, 0.0)) {
                continue;
            }
            for (int s = 0; s < 2; ++s) {
                out.at(la, s, lb) = amp * pol(s);
            }
        }
    }
    return out;
}

bool SpinOrbitKet::in_window(int spin_photon_ell, int oam_photon_ell) const {
    return std::abs(spin_photon_ell) <= spin_ell_max_ && std::abs(oam_photon_ell) <= oam_ell_max_;
}

Eigen::Index SpinOrbitKet::index(int spin_photon_ell, int spin, int oam_photon_ell) const {
    if (!in_window(spin_photon_ell, oam_photon_ell) || spin < 0 || spin > 1) {
        throw DimensionError(fmt::format("SpinOrbitKet: index ({}, {}, {}) outside windows (±{}, ±{})",
                                         spin_photon_ell, spin, oam_photon_ell, spin_ell_max_, oam_ell_max_));
    }
    const Eigen::Index d_oam = 2 * oam_ell_max_ + 1;
    return (static_cast<Eigen::Index>(spin_photon_ell + spin_ell_max_) * 2 + spin) * d_oam +
           (oam_photon_ell + oam_ell_max_);
}

SpinOrbitKet qplate_apply(const SpinOrbitKet &ket, const QPlate &plate) {
    const int shift = plate.twice_q();
    const int lmax = ket.spin_photon_ell_max();
    const int omax = ket.oam_photon_ell_max();
    SpinOrbitKet out(lmax, omax);
    int required = lmax;
    for (int ls = -lmax; ls <= lmax; ++ls) {
        for (int lo = -omax; lo <= omax; ++lo) {
            for (int s = 0; s < 2; ++s) {
                const Complex amp = ket.at(ls, s, lo);
                if (amp == Complex(0.0, 0.0)) {
                    continue;
                }
                // R: ℓ → ℓ − 2q, becomes L. L: ℓ → ℓ + 2q, becomes R.
                const int target_ell = s == kSpinR ? ls - shift : ls + shift;
                const int target_spin = s == kSpinR ? kSpinL : kSpinR;
                if (std::abs(target_ell) > lmax) {
                    required = std::max(required, std::abs(target_ell));
                    continue;
                }
                out.at(target_ell, target_spin, lo) += amp;
            }
        }
    }
    if (required > lmax) {
        throw DimensionError(fmt::format("qplate_apply: q = {} shifts populated modes outside the window ±{}; "
                                         "required ell_max = {}",
                                         plate.charge(), lmax, required));
    }
    return out;
}

SpinOrbitKet spin_element_apply(const SpinOrbitKet &ket, const SpinElement &element) {
    const int lmax = ket.spin_photon_ell_max();
    const int omax = ket.oam_photon_ell_max();
    SpinOrbitKet out(lmax, omax);
    const ComplexMatrix &u = element.jones();
    for (int ls = -lmax; ls <= lmax; ++ls) {
        for (int lo = -omax; lo <= omax; ++lo) {
            const Complex r = ket.at(ls, kSpinR, lo);
            const Complex l = ket.at(ls, kSpinL, lo);
            out.at(ls, kSpinR, lo) = u(0, 0) * r + u(0, 1) * l;
            out.at(ls, kSpinL, lo) = u(1, 0) * r + u(1, 1) * l;
        }
    }
    return out;
}

ComplexMatrix qplate_matrix(const QPlate &plate, int ell_max) {
    const int d = 2 * ell_max + 1;
    ComplexMatrix m = ComplexMatrix::Zero(2 * d, 2 * d);
    auto idx = [&](int ell, int s) { return (ell + ell_max) * 2 + s; };
    for (int ell = -ell_max; ell <= ell_max; ++ell) {
        const int from_r = ell - plate.twice_q();
        const int from_l = ell + plate.twice_q();
        if (std::abs(from_r) <= ell_max) {
            m(idx(from_r, kSpinL), idx(ell, kSpinR)) = 1.0;
        }
        if (std::abs(from_l) <= ell_max) {
            m(idx(from_l, kSpinR), idx(ell, kSpinL)) = 1.0;
        }
    }
    return m;
}

std::vector<OpticalElement> qplate_cascade_spec(int target_ell, double hwp_axis) {
    switch (target_ell) {
        case 1:
            return {QPlate(1)};
        case 2:
            return {QPlate(1), waveplate(WaveplateKind::HWP, hwp_axis), QPlate(1)};
        default:
            throw ArgumentError(fmt::format("qplate_cascade_spec: unsupported target |l| = {} (supported: 1, 2)",
                                            target_ell));
    }
}

SpinOrbitKet apply_elements(const SpinOrbitKet &ket, const std::vector<OpticalElement> &elements) {
    SpinOrbitKet out = ket;
    for (const OpticalElement &e : elements) {
        if (const auto *plate = std::get_if<QPlate>(&e)) {
            out = qplate_apply(out, *plate);
        } else {
            out = spin_element_apply(out, std::get<SpinElement>(e));
        }
    }
    return out;
}

PostSelection post_select_fundamental(const SpinOrbitKet &ket) {
    const int omax = ket.oam_photon_ell_max();
    const int d = 2 * omax + 1;
    Ket kept = Ket::Zero(2 * d);
    for (int s = 0; s < 2; ++s) {
        for (int lo = -omax; lo <= omax; ++lo) {
            kept(s * d + (lo + omax)) = ket.at(0, s, lo);
        }
    }
    const double norm2 = kept.squaredNorm();
    const double total = ket.amplitudes().squaredNorm();
    if (!(norm2 > 1e-300)) {
        throw NumericalError("post_select_fundamental: no amplitude couples into the fundamental mode");
    }
    ComplexMatrix rho = outer(kept) / norm2;
    return PostSelection{BiPhotonDensity(std::move(rho), omax), norm2 / total};
}

HybridState hybrid_from_spdc(const OAMSpectrum &spectrum, int target_ell, double hwp_axis) {
    const auto elements = qplate_cascade_spec(target_ell, hwp_axis);
    if (spectrum.ell_max() < target_ell) {
        throw DimensionError(fmt::format("hybrid_from_spdc: spectrum window ±{} does not contain l = ±{}",
                                         spectrum.ell_max(), target_ell));
    }
    const SpdcState spdc = spdc_state(spectrum);
    SpinOrbitKet ket = SpinOrbitKet::from_spdc(spdc, spdc.ell_max + target_ell);
    ket = apply_elements(ket, elements);
    PostSelection ps = post_select_fundamental(ket);
    return restrict_to_subspace(ps.density, SubspaceLabel::make(target_ell, -target_ell),
                                fmt::format("spdc-cascade(l={})", target_ell));
}

}  // namespace hybridlab
