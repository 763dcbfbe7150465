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

#include <algorithm>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "hybridlab/errors.h"
#include "hybridlab/measurement.h"
#include "hybridlab/metrics.h"
#include "hybridlab/optics.h"
#include "hybridlab/tomography.h"
#include "test_support.h"

namespace hybridlab {
namespace {

constexpr double kPi = std::numbers::pi;
const SubspaceLabel kSub{1, -1};

HybridState bell() { return post_select_hybrid(kSub); }

MeasurementSetting setting(Polarisation spin, OamSelection oam) {
    return MeasurementSetting::make(projector_spin(spin), projector_oam(kSub, oam).matrix, "test",
                                    std::string(to_string(spin)));
}

TEST(MeasurementSetting, RejectsNonProjectors) {
    EXPECT_THROW(MeasurementSetting::make(ComplexMatrix::Identity(2, 2), projector_spin(Polarisation::H), "x", "x"),
                 NumericalError);
    EXPECT_THROW(MeasurementSetting::make(ComplexMatrix::Identity(2, 2) * 0.5, projector_spin(Polarisation::H), "x",
                                          "x"),
                 NumericalError);
}

TEST(DetectionProbability, BellExamples) {
    EXPECT_NEAR(detection_probability(bell(), setting(Polarisation::R, OamSelection::ell1())), 0.5, 1e-15);
    EXPECT_NEAR(detection_probability(bell(), setting(Polarisation::R, OamSelection::ell2())), 0.0, 1e-15);
    for (double theta = 0.0; theta < 2 * kPi; theta += 0.3) {
        EXPECT_NEAR(detection_probability(bell(), setting(Polarisation::H, OamSelection::superposition(theta))),
                    (1 + std::cos(theta)) / 4, 1e-14);
    }
}

TEST(DetectionProbability, RejectsWrongDimension) {
    EXPECT_THROW(detection_probability(ComplexMatrix::Identity(6, 6) / 6.0,
                                       setting(Polarisation::R, OamSelection::ell1())),
                 DimensionError);
}

TEST(DetectionProbability, CompletePairsSumToOne) {
    testing::Rng rng(31);
    const std::pair<Polarisation, Polarisation> spins[] = {
        {Polarisation::R, Polarisation::L}, {Polarisation::H, Polarisation::V}, {Polarisation::D, Polarisation::A}};
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix rho = testing::random_density(rng, 4);
        for (auto [p, p_perp] : spins) {
            const double theta = 0.1 * trial;
            double total = 0.0;
            for (Polarisation s : {p, p_perp}) {
                for (double t : {theta, theta + kPi}) {
                    total += detection_probability(rho, setting(s, OamSelection::superposition(t)));
                }
            }
            EXPECT_NEAR(total, 1.0, 1e-9);
        }
    }
}

TEST(SampleCounts, ZeroMeanIsZero) {
    for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(sample_counts(0.0, 9, i), 0u);
}

TEST(SampleCounts, PoissonMeanAndVariance) {
    const int reps = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < reps; ++i) {
        const double n = static_cast<double>(sample_counts(1000.0, 77, static_cast<std::uint64_t>(i)));
        sum += n;
        sum2 += n * n;
    }
    const double mean = sum / reps;
    const double var = sum2 / reps - mean * mean;
    EXPECT_NEAR(mean, 1000.0, 3 * std::sqrt(1000.0 / reps));
    // Sample variance of Poisson(λ) has standard error ≈ √(2λ²/n) for large λ.
    EXPECT_NEAR(var, 1000.0, 4 * std::sqrt(2.0 * 1000.0 * 1000.0 / reps));
}

TEST(SimulateCounts, DeterministicAndOrderIndependent) {
    const TomographySet set = standard_settings(kSub);
    const HybridState state = apply_werner(bell(), 0.8);
    SimulationOptions opts{5000, 42, 0, 0.0};
    const auto a = simulate_counts(state, set.settings, opts);
    const auto b = simulate_counts(state, set.settings, opts);
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double mean = 5000 * detection_probability(state, set.settings[i]);
        EXPECT_EQ(a[i].counts, sample_counts(mean, 42, i));
        EXPECT_EQ(a[i].total_pairs, 5000u);
        EXPECT_EQ(a[i].seed, 42u);
    }
    // A slice simulated on its own sees the same substreams.
    const std::vector<MeasurementSetting> tail(set.settings.begin() + 10, set.settings.end());
    const auto c = simulate_counts(state, tail, SimulationOptions{5000, 42, 10, 0.0});
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], a[i + 10]);
    opts.seed = 43;
    EXPECT_NE(simulate_counts(state, set.settings, opts), a);
}

TEST(SimulateCounts, BackgroundRaisesFloor) {
    const auto rec = simulate_counts(bell(), std::vector{setting(Polarisation::R, OamSelection::ell2())},
                                     SimulationOptions{1000, 1, 0, 50.0});
    EXPECT_GT(rec[0].counts, 0u);
}

// Aggregate Pearson chi-square over 100 seeds × 36 settings.
TEST(SimulateCounts, ChiSquareAggregate) {
    const TomographySet set = standard_settings(kSub);
    const HybridState state = apply_werner(bell(), 0.9);
    const std::uint64_t n = 10000;
    double chi2 = 0.0;
    int dof = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto rec = simulate_counts(state, set.settings, SimulationOptions{n, seed, 0, 0.0});
        for (std::size_t i = 0; i < rec.size(); ++i) {
            const double mu = n * detection_probability(state, set.settings[i]);
            const double d = static_cast<double>(rec[i].counts) - mu;
            chi2 += d * d / mu;
            ++dof;
        }
    }
    const boost::math::chi_squared dist(dof);
    const double p_upper = boost::math::cdf(boost::math::complement(dist, chi2));
    const double p_lower = boost::math::cdf(dist, chi2);
    EXPECT_GT(p_upper, 0.001) << "chi2 " << chi2 << " dof " << dof;
    EXPECT_GT(p_lower, 0.001) << "chi2 " << chi2 << " dof " << dof;
}

TEST(ModeSpectrum, IdealBell) {
    const BiPhotonDensity d = embed(bell(), 3);
    const auto l = mode_spectrum(d, Polarisation::L, 3);
    EXPECT_EQ(l.size(), 7u);
    EXPECT_NEAR(l.at(-1), 1.0, 1e-15);
    const auto r = mode_spectrum(d, Polarisation::R, 3);
    EXPECT_NEAR(r.at(1), 1.0, 1e-15);
    const auto h = mode_spectrum(d, Polarisation::H, 3);
    EXPECT_NEAR(h.at(1), 0.5, 1e-15);
    EXPECT_NEAR(h.at(-1), 0.5, 1e-15);
    EXPECT_THROW(mode_spectrum(d, Polarisation::H, -1), ArgumentError);
}

TEST(ModeSpectrum, WernerDominantWeight) {
    const BiPhotonDensity d = embed(apply_werner(bell(), 0.86), 4);
    const auto r = mode_spectrum(d, Polarisation::R, 4);
    EXPECT_NEAR(r.at(1), 0.86 + 0.14 / 2, 1e-12);
    EXPECT_NEAR(r.at(-1), 0.07, 1e-12);
    double total = 0.0;
    for (auto [ell, p] : r) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(ModeSpectrum, SimulatedMatchesExact) {
    const BiPhotonDensity d = embed(apply_werner(bell(), 0.86), 2);
    const auto pts = simulate_mode_spectrum(d, Polarisation::L, 2, SimulationOptions{100000, 3, 0, 0.0});
    ASSERT_EQ(pts.size(), 5u);
    for (const SpectrumPoint &p : pts) {
        EXPECT_NEAR(p.measured, p.probability, 0.01);
        EXPECT_EQ(p.record.theta_b_or_mode, "L");
    }
}

TEST(BellCurve, IdealClosedForm) {
    const auto grid = uniform_grid(16);
    ASSERT_EQ(grid.size(), 16u);
    EXPECT_NEAR(grid[4], kPi / 2, 1e-15);
    for (double tb : {3 * kPi / 2, kPi, kPi / 2, 0.0}) {
        for (double ta : grid) {
            EXPECT_NEAR(detection_probability(bell(), bell_setting(kSub, ta, tb)), (1 + std::cos(ta - tb)) / 4,
                        1e-14);
        }
    }
    EXPECT_NEAR(detection_probability(bell(), bell_setting(kSub, 0.0, 0.0)), 0.5, 1e-15);
    EXPECT_NEAR(detection_probability(bell(), bell_setting(kSub, kPi, 0.0)), 0.0, 1e-15);
}

TEST(BellCurve, WernerScalesFringe) {
    const double p = 0.7;
    const HybridState w = apply_werner(bell(), p);
    for (double ta : uniform_grid(16)) {
        EXPECT_NEAR(detection_probability(w, bell_setting(kSub, ta, kPi / 2)),
                    p * (1 + std::cos(ta - kPi / 2)) / 4 + (1 - p) / 4, 1e-14);
    }
}

TEST(BellCurve, SampledFitIsFullVisibility) {
    const auto grid = uniform_grid(16);
    const Curve c = bell_curve(bell(), kPi, grid, SimulationOptions{100000, 8, 0, 0.0});
    ASSERT_EQ(c.records.size(), 16u);
    const VisibilityFit fit = visibility(c.thetas(), c.counts());
    EXPECT_GT(fit.visibility, 0.995);
    EXPECT_NEAR(wrap_angle(fit.phase), kPi, 0.02);
}

TEST(Eraser, IdealVisibilities) {
    const auto grid = uniform_grid(16);
    std::vector<double> dist, erase;
    for (double t : grid) {
        dist.push_back(detection_probability(bell(), eraser_setting(kSub, EraserMode::Distinguish, t)));
        erase.push_back(detection_probability(bell(), eraser_setting(kSub, EraserMode::Erase, t)));
    }
    EXPECT_NEAR(visibility(grid, dist, false).visibility, 0.0, 1e-12);
    EXPECT_NEAR(visibility(grid, erase, false).visibility, 1.0, 1e-12);
    EXPECT_NEAR(dist[0], 0.25, 1e-15);
}

TEST(Eraser, WernerErase) {
    const auto grid = uniform_grid(16);
    std::vector<double> erase;
    for (double t : grid) {
        erase.push_back(detection_probability(apply_werner(bell(), 0.93), eraser_setting(kSub, EraserMode::Erase, t)));
    }
    EXPECT_NEAR(visibility(grid, erase, false).visibility, 0.93, 1e-12);
}

TEST(Eraser, DistinguishCurveIsFlat) {
    const std::uint64_t n = 10000;
    const Curve c = eraser_scan(bell(), EraserMode::Distinguish, uniform_grid(16), SimulationOptions{n, 12, 0, 0.0});
    const auto counts = c.counts();
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    const double sigma_shot = std::sqrt(n * 0.25);
    EXPECT_LT(*hi - *lo, 5 * sigma_shot);
    EXPECT_EQ(c.records.front().theta_b_or_mode, "distinguish");
}

}  // namespace
}  // namespace hybridlab
