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

#include <gtest/gtest.h>

#include <numbers>

#include "hybridlab/errors.h"
#include "hybridlab/metrics.h"
#include "hybridlab/optics.h"
#include "test_support.h"

namespace hybridlab {
namespace {

constexpr double kPi = std::numbers::pi;

double overlap2(const Ket &a, const Ket &b) { return std::norm(a.dot(b)); }

SpinOrbitKet basis_ket(int lmax, int ell, int spin) {
    SpinOrbitKet k(lmax, 0);
    k.at(ell, spin, 0) = 1.0;
    return k;
}

TEST(QPlate, Charge) {
    EXPECT_EQ(QPlate::from_charge(0.5).twice_q(), 1);
    EXPECT_EQ(QPlate::from_charge(-1.5).twice_q(), -3);
    EXPECT_THROW(QPlate::from_charge(0.3), ArgumentError);
}

TEST(QPlate, BranchesForHalfCharge) {
    const QPlate q(1);
    const SpinOrbitKet r = qplate_apply(basis_ket(2, 0, kSpinR), q);
    EXPECT_NEAR(std::abs(r.at(-1, kSpinL, 0)), 1.0, 1e-15);
    EXPECT_NEAR(r.norm(), 1.0, 1e-15);
    const SpinOrbitKet l = qplate_apply(basis_ket(2, 0, kSpinL), q);
    EXPECT_NEAR(std::abs(l.at(1, kSpinR, 0)), 1.0, 1e-15);
}

TEST(QPlate, NormPreservedAndSelfInverse) {
    testing::Rng rng(21);
    const int lmax = 6;
    for (int trial = 0; trial < 20; ++trial) {
        SpinOrbitKet k(lmax, 1);
        const Ket v = testing::random_ket(rng, 2 * 5 * 3);
        // Populate |ℓ| ≤ 2 only so the shifts stay in the window.
        int n = 0;
        for (int ls = -2; ls <= 2; ++ls)
            for (int s = 0; s < 2; ++s)
                for (int lo = -1; lo <= 1; ++lo) k.at(ls, s, lo) = v(n++);
        const SpinOrbitKet once = qplate_apply(k, QPlate(1));
        EXPECT_NEAR(once.norm(), 1.0, 1e-12);
        const SpinOrbitKet twice = qplate_apply(once, QPlate(1));
        EXPECT_LT((twice.amplitudes() - k.amplitudes()).norm(), 1e-12);
        const SpinOrbitKet big = qplate_apply(k, QPlate(3));
        EXPECT_NEAR(big.norm(), 1.0, 1e-12);
        EXPECT_LT((qplate_apply(big, QPlate(3)).amplitudes() - k.amplitudes()).norm(), 1e-12);
    }
}

TEST(QPlate, MatrixIsUnitaryInsideWindow) {
    const int lmax = 4;
    const ComplexMatrix m = qplate_matrix(QPlate(1), lmax);
    // Columns whose images stay inside the window form an isometry.
    std::vector<Eigen::Index> inner;
    for (int ell = -lmax + 1; ell <= lmax - 1; ++ell)
        for (int s = 0; s < 2; ++s) inner.push_back((ell + lmax) * 2 + s);
    ComplexMatrix sub(m.rows(), static_cast<Eigen::Index>(inner.size()));
    for (std::size_t k = 0; k < inner.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = m.col(inner[k]);
    EXPECT_TRUE(approx_equal(sub.adjoint() * sub, ComplexMatrix::Identity(sub.cols(), sub.cols()), 1e-15));
    const ComplexMatrix mm = m * m;
    for (Eigen::Index c : inner) {
        EXPECT_NEAR(std::abs(mm(c, c) - 1.0), 0.0, 1e-15);
    }
}

TEST(QPlate, WindowOverflowNamesRequiredSize) {
    try {
        qplate_apply(basis_ket(1, 1, kSpinL), QPlate(1));
        FAIL() << "expected DimensionError";
    } catch (const DimensionError &e) {
        EXPECT_NE(std::string(e.what()).find("required ell_max = 2"), std::string::npos) << e.what();
    }
}

TEST(Cascade, Specs) {
    EXPECT_EQ(qplate_cascade_spec(1).size(), 1u);
    const auto two = qplate_cascade_spec(2);
    ASSERT_EQ(two.size(), 3u);
    EXPECT_TRUE(std::holds_alternative<QPlate>(two[0]));
    EXPECT_TRUE(std::holds_alternative<SpinElement>(two[1]));
    EXPECT_TRUE(std::holds_alternative<QPlate>(two[2]));
    EXPECT_THROW(qplate_cascade_spec(3), ArgumentError);
    EXPECT_THROW(qplate_cascade_spec(0), ArgumentError);
}

TEST(Cascade, ComposedOperatorReachesTwo) {
    const auto out = apply_elements(basis_ket(3, 0, kSpinL), qplate_cascade_spec(2));
    EXPECT_NEAR(std::abs(out.at(2, kSpinR, 0)), 1.0, 1e-12);
    const auto out_r = apply_elements(basis_ket(3, 0, kSpinR), qplate_cascade_spec(2));
    EXPECT_NEAR(std::abs(out_r.at(-2, kSpinL, 0)), 1.0, 1e-12);
}

TEST(Cascade, TwoPlatesWithoutWaveplateCancel) {
    const auto out = apply_elements(basis_ket(2, 0, kSpinR), {QPlate(1), QPlate(1)});
    EXPECT_NEAR(std::abs(out.at(0, kSpinR, 0)), 1.0, 1e-15);
}

TEST(Cascade, SpdcPipelineMatchesShortcut) {
    for (int target : {1, 2}) {
        for (const OAMSpectrum &spec : {OAMSpectrum::uniform(3), OAMSpectrum::gaussian(4, 2.5)}) {
            const HybridState via_optics = hybrid_from_spdc(spec, target);
            const HybridState shortcut = post_select_hybrid(SubspaceLabel::make(target, -target));
            EXPECT_TRUE(approx_equal(via_optics.rho(), shortcut.rho(), 1e-12)) << "target " << target;
            EXPECT_NEAR(concurrence(via_optics.rho()), 1.0, 1e-9);
        }
    }
}

TEST(Waveplate, QwpOnAxisKeepsH) {
    const Ket h = polarisation_ket(Polarisation::H);
    EXPECT_NEAR(overlap2(h, waveplate(WaveplateKind::QWP, 0.0).jones() * h), 1.0, 1e-14);
}

TEST(Waveplate, HwpDiagonalSwapsHV) {
    const ComplexMatrix u = waveplate(WaveplateKind::HWP, kPi / 4).jones();
    const Ket h = polarisation_ket(Polarisation::H);
    const Ket v = polarisation_ket(Polarisation::V);
    EXPECT_NEAR(overlap2(v, u * h), 1.0, 1e-14);
    EXPECT_NEAR(overlap2(h, u * v), 1.0, 1e-14);
}

TEST(Waveplate, QwpDiagonalMapsCircularToLinear) {
    const ComplexMatrix u = waveplate(WaveplateKind::QWP, kPi / 4).jones();
    const Ket h = polarisation_ket(Polarisation::H);
    const Ket v = polarisation_ket(Polarisation::V);
    EXPECT_NEAR(overlap2(h, u * polarisation_ket(Polarisation::R)), 0.0, 1e-14);
    EXPECT_NEAR(overlap2(v, u * polarisation_ket(Polarisation::R)), 1.0, 1e-14);
    EXPECT_NEAR(overlap2(h, u * polarisation_ket(Polarisation::L)), 1.0, 1e-14);
}

TEST(Waveplate, UnitaryForAnyAxis) {
    for (double axis = -3.0; axis < 3.0; axis += 0.25) {
        for (WaveplateKind k : {WaveplateKind::QWP, WaveplateKind::HWP}) {
            const ComplexMatrix u = waveplate(k, axis).jones();
            EXPECT_TRUE(approx_equal(u.adjoint() * u, ComplexMatrix::Identity(2, 2), 1e-13));
        }
    }
    EXPECT_THROW(SpinElement(ComplexMatrix::Identity(2, 2) * 2.0, "bad"), NumericalError);
}

TEST(SmfChannel, Examples) {
    const HybridState bell = post_select_hybrid(SubspaceLabel::make(1, -1));
    EXPECT_TRUE(approx_equal(smf_channel(bell, {}).rho(), bell.rho(), 1e-15));
    ChannelParams noisy;
    noisy.werner_p = 0.8667;
    EXPECT_NEAR(fidelity(bell.rho(), smf_channel(bell, noisy).rho()), (3 * 0.8667 + 1) / 4, 1e-9);
    ChannelParams twist;
    twist.birefringence_angles = {0.4, 1.3, -2.2};
    const HybridState rotated = smf_channel(bell, twist);
    EXPECT_NEAR(concurrence(rotated.rho()), 1.0, 1e-9);
    EXPECT_LT(fidelity(bell.rho(), rotated.rho()), 0.99);
    noisy.werner_p = 1.2;
    EXPECT_THROW(smf_channel(bell, noisy), ArgumentError);
}

TEST(SmfChannel, PhysicalOverParameterGrid) {
    testing::Rng rng(22);
    const HybridState start(testing::random_density(rng, 4), SubspaceLabel::make(1, -1));
    for (int i = 0; i < 100; ++i) {
        ChannelParams params;
        params.werner_p = (i % 10) / 9.0;
        params.birefringence_angles = {0.3 * i, -0.17 * i, 0.05 * i * i};
        const HybridState out = smf_channel(start, params);
        EXPECT_TRUE(validate_density(out.rho(), 1e-10).passed);
        EXPECT_NEAR(out.rho().trace().real(), 1.0, 1e-10);
    }
}

TEST(ProjectorSpin, Basics) {
    for (Polarisation p : {Polarisation::R, Polarisation::L, Polarisation::H, Polarisation::V, Polarisation::D,
                           Polarisation::A}) {
        const ComplexMatrix m = projector_spin(p);
        EXPECT_NEAR(m.trace().real(), 1.0, 1e-15);
        EXPECT_TRUE(approx_equal(m * m, m, 1e-15));
        EXPECT_TRUE(approx_equal(m, m.adjoint(), 0.0));
    }
    ComplexMatrix r = ComplexMatrix::Zero(2, 2);
    r(0, 0) = 1.0;
    EXPECT_TRUE(approx_equal(projector_spin(Polarisation::R), r, 1e-15));
    EXPECT_TRUE(approx_equal(projector_spin(Polarisation::H), ComplexMatrix::Constant(2, 2, 0.5), 1e-15));
}

TEST(ProjectorSpin, AnalyzerComposition) {
    const SpinElement q = waveplate(WaveplateKind::QWP, kPi / 4);
    const ComplexMatrix expected = q.jones().adjoint() * projector_spin(Polarisation::H) * q.jones();
    EXPECT_TRUE(approx_equal(projector_spin(q, Polarisation::H), expected, 1e-15));
    EXPECT_TRUE(approx_equal(projector_spin(q, Polarisation::H), projector_spin(Polarisation::L), 1e-14));
}

TEST(ProjectorOam, Examples) {
    const SubspaceLabel sub = SubspaceLabel::make(1, -1);
    ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
    e1(0, 0) = 1.0;
    EXPECT_TRUE(approx_equal(projector_oam(sub, OamSelection::ell1()).matrix, e1, 0.0));
    EXPECT_TRUE(approx_equal(projector_oam(sub, OamSelection::superposition(0.0)).matrix,
                             ComplexMatrix::Constant(2, 2, 0.5), 1e-15));
    const ComplexMatrix half = projector_oam(sub, OamSelection::superposition(kPi / 2)).matrix;
    EXPECT_NEAR(std::abs(std::abs(half(0, 1).imag()) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(half(0, 1).real()), 0.0, 1e-15);
    EXPECT_TRUE(approx_equal(half * half, half, 1e-12));
    EXPECT_EQ(projector_oam(sub, OamSelection::ell2()).label, "l=-1");
}

TEST(ProjectorOam, AngleWraps) {
    const SubspaceLabel sub = SubspaceLabel::make(1, -1);
    EXPECT_TRUE(approx_equal(projector_oam(sub, OamSelection::superposition(-kPi / 2)).matrix,
                             projector_oam(sub, OamSelection::superposition(3 * kPi / 2)).matrix, 1e-14));
    EXPECT_NEAR(wrap_angle(2 * kPi), 0.0, 1e-15);
    EXPECT_NEAR(wrap_angle(-0.5), 2 * kPi - 0.5, 1e-15);
}

}  // namespace
}  // namespace hybridlab
