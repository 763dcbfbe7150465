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
#include "hybridlab/states.h"
#include "test_support.h"

namespace hybridlab {
namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

TEST(Polarisation, ConventionAndOrthogonality) {
    const Ket h = polarisation_ket(Polarisation::H);
    EXPECT_NEAR(std::abs(h(0) - kInvSqrt2), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(h(1) - kInvSqrt2), 0.0, 1e-15);
    const std::pair<Polarisation, Polarisation> pairs[] = {
        {Polarisation::R, Polarisation::L}, {Polarisation::H, Polarisation::V}, {Polarisation::D, Polarisation::A}};
    for (auto [a, b] : pairs) {
        EXPECT_NEAR(std::abs(polarisation_ket(a).dot(polarisation_ket(b))), 0.0, 1e-15);
        EXPECT_NEAR(polarisation_ket(a).norm(), 1.0, 1e-15);
    }
    // Mutually unbiased bases.
    EXPECT_NEAR(std::norm(polarisation_ket(Polarisation::H).dot(polarisation_ket(Polarisation::D))), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(polarisation_ket(Polarisation::R).dot(polarisation_ket(Polarisation::D))), 0.5, 1e-15);
}

TEST(Polarisation, EquatorialPhases) {
    const std::pair<double, Polarisation> marks[] = {
        {0.0, Polarisation::H}, {kPi / 2, Polarisation::D}, {kPi, Polarisation::V}, {3 * kPi / 2, Polarisation::A}};
    for (auto [phase, p] : marks) {
        EXPECT_NEAR(std::norm(equatorial_spin_ket(phase).dot(polarisation_ket(p))), 1.0, 1e-14) << to_string(p);
    }
    for (Polarisation p : {Polarisation::R, Polarisation::L, Polarisation::H, Polarisation::V, Polarisation::D,
                           Polarisation::A}) {
        EXPECT_EQ(parse_polarisation(to_string(p)), p);
    }
    EXPECT_FALSE(parse_polarisation("X").has_value());
}

TEST(SubspaceLabel, Invariants) {
    EXPECT_THROW(SubspaceLabel::make(1, 1), ArgumentError);
    const SubspaceLabel s = SubspaceLabel::make(2, -2);
    EXPECT_EQ(s.max_abs_ell(), 2);
    EXPECT_EQ(s.to_string(), "(+2,-2)");
}

TEST(OAMSpectrum, Normalization) {
    EXPECT_THROW(OAMSpectrum(1, {1.0, 1.0, 1.0}), ArgumentError);
    EXPECT_THROW(OAMSpectrum(1, {1.0, 0.0}), DimensionError);
    const OAMSpectrum g = OAMSpectrum::gaussian(2, 2.0);
    double norm = 0.0;
    for (const Complex &c : g.coefficients()) norm += std::norm(c);
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(g.coefficient(1) / g.coefficient(0)), std::exp(-0.25), 1e-12);
}

TEST(SpdcState, UniformEllMaxOne) {
    const SpdcState s = spdc_state(OAMSpectrum::uniform(1));
    ASSERT_EQ(s.amplitudes.size(), 9);
    for (int la = -1; la <= 1; ++la) {
        for (int lb = -1; lb <= 1; ++lb) {
            const double expected = la == -lb ? 1.0 / std::sqrt(3.0) : 0.0;
            EXPECT_NEAR(std::abs(s.amplitude(la, lb) - expected), 0.0, 1e-15);
        }
    }
    EXPECT_EQ(s.spin_photon_polarisation, Polarisation::H);
    EXPECT_EQ(s.oam_photon_polarisation, Polarisation::H);
}

TEST(SpdcState, SingleMode) {
    const SpdcState s = spdc_state(OAMSpectrum::uniform(0));
    ASSERT_EQ(s.amplitudes.size(), 1);
    EXPECT_NEAR(std::abs(s.amplitudes(0)), 1.0, 1e-15);
}

TEST(SpdcState, GaussianAnticorrelation) {
    const SpdcState s = spdc_state(OAMSpectrum::gaussian(2, 2.0));
    double norm = 0.0, mean_a = 0.0, mean_b = 0.0;
    for (int la = -2; la <= 2; ++la) {
        for (int lb = -2; lb <= 2; ++lb) {
            const double w = std::norm(s.amplitude(la, lb));
            norm += w;
            mean_a += la * w;
            mean_b += lb * w;
        }
    }
    EXPECT_NEAR(norm, 1.0, 1e-12);
    EXPECT_NEAR(mean_a, -mean_b, 1e-12);
}

TEST(SpdcState, RandomSpectraStayNormalized) {
    testing::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int ell_max = 1 + trial % 5;
        const Ket raw = testing::random_ket(rng, 2 * ell_max + 1);
        std::vector<Complex> c(raw.data(), raw.data() + raw.size());
        const SpdcState s = spdc_state(OAMSpectrum::normalized(ell_max, c));
        EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-12);
    }
}

TEST(PostSelectHybrid, BellMatrix) {
    const HybridState b = post_select_hybrid(SubspaceLabel::make(1, -1));
    EXPECT_TRUE(approx_equal(b.rho(), testing::werner_oracle(1.0), 1e-15));
    const HybridState b2 = post_select_hybrid(SubspaceLabel::make(2, -2));
    EXPECT_TRUE(approx_equal(b.rho(), b2.rho(), 0.0));
    EXPECT_EQ(b2.subspace(), SubspaceLabel::make(2, -2));
}

TEST(PostSelectHybrid, PhasePi) {
    const SubspaceLabel sub = SubspaceLabel::make(1, -1);
    const HybridState flipped = post_select_hybrid(sub, kPi);
    EXPECT_NEAR(concurrence(flipped.rho()), 1.0, 1e-9);
    EXPECT_NEAR(fidelity(post_select_hybrid(sub).rho(), flipped.rho()), 0.0, 1e-9);
}

TEST(PostSelectHybrid, AlwaysMaximallyEntangled) {
    for (double phase = 0.0; phase < 2 * kPi; phase += 0.37) {
        const HybridState s = post_select_hybrid(SubspaceLabel::make(3, -1), phase);
        EXPECT_NEAR(concurrence(s.rho()), 1.0, 1e-9);
        EXPECT_TRUE(approx_equal(reduce_oam_photon(s), ComplexMatrix::Identity(2, 2) / 2.0, 1e-12));
        EXPECT_TRUE(approx_equal(partial_trace(s.rho(), 2, 2, Subsystem::A), ComplexMatrix::Identity(2, 2) / 2.0,
                                 1e-12));
    }
}

TEST(MultiDimMixture, Purity) {
    const HybridState b1 = post_select_hybrid(SubspaceLabel::make(1, -1));
    const HybridState b2 = post_select_hybrid(SubspaceLabel::make(2, -2));

    const MultiDimState single = multidim_mixture({{1.0, b1}});
    const BiPhotonDensity d1 = single.density();
    EXPECT_TRUE(approx_equal(restrict_to_subspace(d1, b1.subspace()).rho(), b1.rho(), 1e-15));

    const BiPhotonDensity half = multidim_mixture({{0.5, b1}, {0.5, b2}}).density();
    EXPECT_NEAR(half.rho().trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(purity(half.rho()), 0.5, 1e-12);
    EXPECT_TRUE(validate_density(half.rho()).passed);

    const BiPhotonDensity weighted = multidim_mixture({{0.7, b1}, {0.3, b2}}).density();
    EXPECT_NEAR(purity(weighted.rho()), 0.58, 1e-12);
}

TEST(MultiDimMixture, RejectsBadWeights) {
    const HybridState b1 = post_select_hybrid(SubspaceLabel::make(1, -1));
    EXPECT_THROW(multidim_mixture({{-0.1, b1}, {1.1, b1}}), ArgumentError);
    EXPECT_THROW(multidim_mixture({{0.5, b1}}), ArgumentError);
}

TEST(MultiDimMixture, RandomMixturesArePhysical) {
    testing::Rng rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double w = u(rng);
        const HybridState a(testing::random_density(rng, 4), SubspaceLabel::make(1, -1));
        const HybridState b(testing::random_density(rng, 4), SubspaceLabel::make(2, 0));
        const BiPhotonDensity d = multidim_mixture({{w, a}, {1.0 - w, b}}).density(3);
        EXPECT_EQ(d.ell_max(), 3);
        EXPECT_TRUE(validate_density(d.rho()).passed);
    }
}

TEST(ReduceOamPhoton, Examples) {
    const SubspaceLabel sub = SubspaceLabel::make(1, -1);
    EXPECT_TRUE(approx_equal(reduce_oam_photon(post_select_hybrid(sub)), ComplexMatrix::Identity(2, 2) / 2.0));
    ComplexMatrix product = ComplexMatrix::Zero(4, 4);
    product(0, 0) = 1.0;
    ComplexMatrix ell1 = ComplexMatrix::Zero(2, 2);
    ell1(0, 0) = 1.0;
    EXPECT_TRUE(approx_equal(reduce_oam_photon(HybridState(product, sub)), ell1));
    for (double p : {0.0, 0.3, 0.8667, 1.0}) {
        const HybridState w = apply_werner(post_select_hybrid(sub), p);
        EXPECT_TRUE(approx_equal(reduce_oam_photon(w), testing::partial_trace_oracle(w.rho(), 2, 2, true), 1e-14));
        EXPECT_TRUE(approx_equal(reduce_oam_photon(w), ComplexMatrix::Identity(2, 2) / 2.0, 1e-14));
    }
}

TEST(ApplyWerner, Examples) {
    const HybridState bell = post_select_hybrid(SubspaceLabel::make(1, -1));
    EXPECT_TRUE(approx_equal(apply_werner(bell, 1.0).rho(), bell.rho(), 0.0));
    EXPECT_TRUE(approx_equal(apply_werner(bell, 0.0).rho(), ComplexMatrix::Identity(4, 4) / 4.0, 1e-15));
    const double p = (4 * 0.90 - 1) / 3;
    EXPECT_NEAR(fidelity(bell.rho(), apply_werner(bell, p).rho()), 0.90, 1e-9);
    EXPECT_NEAR(fidelity(bell.rho(), apply_werner(bell, 0.8667).rho()), 0.900025, 1e-9);
    EXPECT_THROW(apply_werner(bell, 1.5), ArgumentError);
    EXPECT_THROW(apply_werner(bell, -0.1), ArgumentError);
}

TEST(ApplyWerner, Composes) {
    testing::Rng rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const HybridState s(testing::random_density(rng, 4), SubspaceLabel::make(1, -1));
        const double p1 = u(rng), p2 = u(rng);
        EXPECT_TRUE(approx_equal(apply_werner(apply_werner(s, p1), p2).rho(), apply_werner(s, p1 * p2).rho(), 1e-12));
    }
}

TEST(HybridState, RejectsInvalidDensity) {
    EXPECT_THROW(HybridState(ComplexMatrix::Identity(4, 4), SubspaceLabel::make(1, -1)), NumericalError);
}

TEST(Embed, RoundTripAndLeakage) {
    const HybridState bell = post_select_hybrid(SubspaceLabel::make(2, -2));
    const BiPhotonDensity d = embed(bell, 3);
    EXPECT_EQ(d.rho().rows(), 14);
    EXPECT_NEAR(std::abs(d.rho()(d.index(kSpinR, 2), d.index(kSpinL, -2)) - 0.5), 0.0, 1e-15);
    EXPECT_TRUE(approx_equal(restrict_to_subspace(d, bell.subspace()).rho(), bell.rho(), 1e-15));
    EXPECT_THROW(restrict_to_subspace(d, SubspaceLabel::make(1, -1)), NumericalError);
    EXPECT_THROW(embed(bell, 1), DimensionError);
}

}  // namespace
}  // namespace hybridlab
