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

#include "hybridlab/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hybridlab/errors.h"
#include "hybridlab/optics.h"

namespace hybridlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-9;

bool same_angle(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return d < kAngleTol || std::abs(d - 2 * kPi) < kAngleTol;
}

struct Correlation {
    double value;
    double variance;
};

Correlation correlation_from_counts(const CoincidenceLookup &lookup, double theta_oam, double theta_spin) {
    auto get = [&](double ta, double tb) {
        const double wa = wrap_angle(ta);
        const double wb = wrap_angle(tb);
        std::optional<double> c = lookup(wa, wb);
        if (!c) {
            throw ArgumentError(
                fmt::format("chsh_from_counts: no coincidences recorded for theta_A = {:.6g}pi, theta_B = {:.6g}pi",
                            wa / kPi, wb / kPi));
        }
        return *c;
    };
    const double a = get(theta_oam, theta_spin) + get(theta_oam + kPi, theta_spin + kPi);
    const double b = get(theta_oam + kPi, theta_spin) + get(theta_oam, theta_spin + kPi);
    const double sum = a + b;
    if (!(sum > 0.0)) {
        throw ArgumentError(fmt::format(
            "chsh_from_counts: setting theta_A = {:.6g}pi, theta_B = {:.6g}pi is unmeasured (A + B = 0)",
            wrap_angle(theta_oam) / kPi, wrap_angle(theta_spin) / kPi));
    }
    return Correlation{(a - b) / sum, 4.0 * a * b / (sum * sum * sum)};
}

}  // namespace

double fidelity(const ComplexMatrix &rho_target, const ComplexMatrix &rho_predicted) {
    if (rho_target.rows() != rho_predicted.rows() || rho_target.cols() != rho_predicted.cols() ||
        rho_target.rows() != rho_target.cols()) {
        throw DimensionError(fmt::format("fidelity: dimension mismatch ({}x{} vs {}x{})", rho_target.rows(),
                                         rho_target.cols(), rho_predicted.rows(), rho_predicted.cols()));
    }
    // With ρ = X X†, √ρ_T √ρ_P and X_T† X_P share singular values.
    const ComplexMatrix xt = psd_factor(rho_target);
    const ComplexMatrix xp = psd_factor(rho_predicted);
    if (xt.cols() == 0 || xp.cols() == 0) {
        throw NumericalError("fidelity: input has no positive eigenvalue");
    }
    const ComplexMatrix overlap = xt.adjoint() * xp;
    const double tr = Eigen::JacobiSVD<ComplexMatrix>(overlap).singularValues().sum();
    return std::clamp(tr * tr, 0.0, 1.0);
}

double concurrence(const ComplexMatrix &rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw DimensionError(fmt::format("concurrence: expected a 4x4 density, got {}x{}", rho.rows(), rho.cols()));
    }
    // With ρ = X X†, the eigenvalues of ρ ρ̃ are the squared singular values of
    // Xᵀ (σy⊗σy) X.
    const ComplexMatrix yy = tensor_product(pauli(2), pauli(2));
    const ComplexMatrix x = psd_factor(rho);
    const ComplexMatrix tau = x.transpose() * yy * x;
    std::array<double, 4> lambda{};
    if (tau.size() > 0) {
        const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(tau).singularValues();
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
            lambda[static_cast<std::size_t>(k)] = sv(k);
        }
    }
    return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

double werner_p_for_fidelity(double target_fidelity) {
    if (!(target_fidelity >= 0.25 && target_fidelity <= 1.0)) {
        throw ArgumentError(
            fmt::format("werner_p_for_fidelity: target fidelity {} outside the reachable range [0.25, 1]",
                        target_fidelity));
    }
    return (4.0 * target_fidelity - 1.0) / 3.0;
}

std::vector<std::array<double, 2>> chsh_required_settings(const ChshAngles &angles) {
    std::vector<std::array<double, 2>> out;
    for (double a : {angles.oam_a, angles.oam_a_prime}) {
        for (double b : {angles.spin_b, angles.spin_b_prime}) {
            for (double da : {0.0, kPi}) {
                for (double db : {0.0, kPi}) {
                    out.push_back({wrap_angle(a + da), wrap_angle(b + db)});
                }
            }
        }
    }
    return out;
}

ChshResult chsh_from_counts(const CoincidenceLookup &lookup, const ChshAngles &angles) {
    const Correlation e_ab = correlation_from_counts(lookup, angles.oam_a, angles.spin_b);
    const Correlation e_abp = correlation_from_counts(lookup, angles.oam_a, angles.spin_b_prime);
    const Correlation e_apb = correlation_from_counts(lookup, angles.oam_a_prime, angles.spin_b);
    const Correlation e_apbp = correlation_from_counts(lookup, angles.oam_a_prime, angles.spin_b_prime);
    ChshResult out;
    out.correlations = {e_ab.value, e_abp.value, e_apb.value, e_apbp.value};
    out.s = e_ab.value - e_abp.value + e_apb.value + e_apbp.value;
    out.sigma = std::sqrt(e_ab.variance + e_abp.variance + e_apb.variance + e_apbp.variance);
    return out;
}

CoincidenceLookup lookup_from_records(std::span<const CoincidenceRecord> records) {
    struct Entry {
        double theta_a;
        double theta_b;
        double counts;
    };
    std::vector<Entry> entries;
    for (const CoincidenceRecord &r : records) {
        if (std::isnan(r.theta_a)) {
            continue;
        }
        double tb = 0.0;
        try {
            std::size_t used = 0;
            tb = std::stod(r.theta_b_or_mode, &used);
            if (used != r.theta_b_or_mode.size()) {
                continue;
            }
        } catch (const std::exception &) {
            continue;
        }
        entries.push_back({wrap_angle(r.theta_a), wrap_angle(tb), static_cast<double>(r.counts)});
    }
    return [entries = std::move(entries)](double ta, double tb) -> std::optional<double> {
        std::optional<double> total;
        for (const Entry &e : entries) {
            if (same_angle(e.theta_a, ta) && same_angle(e.theta_b, tb)) {
                total = total.value_or(0.0) + e.counts;
            }
        }
        return total;
    };
}

double chsh_exact(const ComplexMatrix &rho, const ChshAngles &angles) {
    auto observable_spin = [](double b) -> ComplexMatrix { return projector_spin_phase(b) - projector_spin_phase(b + kPi); };
    auto observable_oam = [](double a) -> ComplexMatrix {
        const SubspaceLabel sub{1, -1};
        return projector_oam(sub, OamSelection::superposition(a)).matrix -
               projector_oam(sub, OamSelection::superposition(a + kPi)).matrix;
    };
    auto e = [&](double a, double b) {
        return (rho * tensor_product(observable_spin(b), observable_oam(a))).trace().real();
    };
    return e(angles.oam_a, angles.spin_b) - e(angles.oam_a, angles.spin_b_prime) +
           e(angles.oam_a_prime, angles.spin_b) + e(angles.oam_a_prime, angles.spin_b_prime);
}

VisibilityFit visibility(std::span<const double> theta, std::span<const double> y, bool poisson_errors) {
    if (theta.size() != y.size()) {
        throw DimensionError("visibility: theta and y differ in length");
    }
    const std::size_t n = theta.size();
    if (n < 8) {
        throw ArgumentError(fmt::format("visibility: need at least 8 points, got {}", n));
    }
    std::vector<double> wrapped(theta.begin(), theta.end());
    for (double &t : wrapped) {
        t = wrap_angle(t);
    }
    std::sort(wrapped.begin(), wrapped.end());
    double max_gap = wrapped.front() + 2 * kPi - wrapped.back();
    for (std::size_t k = 1; k < n; ++k) {
        max_gap = std::max(max_gap, wrapped[k] - wrapped[k - 1]);
    }
    if (max_gap > kPi / 2 + 1e-12) {
        throw ArgumentError("visibility: points do not span a full period (gap wider than a quarter period)");
    }

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd yy(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        x(i, 0) = 1.0;
        x(i, 1) = std::cos(theta[k]);
        x(i, 2) = std::sin(theta[k]);
        yy(i) = y[k];
    }
    const Eigen::Matrix3d xtx_inv = (x.transpose() * x).inverse();
    const Eigen::Vector3d beta = xtx_inv * x.transpose() * yy;

    VisibilityFit fit;
    fit.offset = beta(0);
    fit.amplitude = std::hypot(beta(1), beta(2));
    fit.phase = std::atan2(beta(2), beta(1));
    if (!(fit.offset > 0.0)) {
        throw NumericalError(fmt::format("visibility: fitted offset {} is not positive", fit.offset));
    }
    fit.visibility = std::clamp(fit.amplitude / fit.offset, 0.0, 1.0);

    Eigen::VectorXd var(static_cast<Eigen::Index>(n));
    if (poisson_errors) {
        for (std::size_t k = 0; k < n; ++k) {
            var(static_cast<Eigen::Index>(k)) = std::max(y[k], 1.0);
        }
    } else {
        const Eigen::VectorXd resid = yy - x * beta;
        const double s2 = n > 3 ? resid.squaredNorm() / static_cast<double>(n - 3) : 0.0;
        var.setConstant(s2);
    }
    const Eigen::Matrix3d cov = xtx_inv * x.transpose() * var.asDiagonal() * x * xtx_inv;
    const double a = fit.offset;
    const double b = fit.amplitude;
    if (b > 1e-12 * a) {
        Eigen::Vector3d grad(-b / (a * a), beta(1) / (a * b), beta(2) / (a * b));
        fit.sigma = std::sqrt(std::max(grad.dot(cov * grad), 0.0));
    } else {
        fit.sigma = std::sqrt(0.5 * (cov(1, 1) + cov(2, 2))) / a;
    }
    return fit;
}

void MetricReport::clip_to_ranges() {
    auto clip = [](std::optional<Uncertain> &m, double lo, double hi, const char *name) {
        if (!m) {
            return;
        }
        if (m->value < lo - 1e-9 || m->value > hi + 1e-9) {
            throw NumericalError(fmt::format("MetricReport: {} = {} outside [{}, {}]", name, m->value, lo, hi));
        }
        m->value = std::clamp(m->value, lo, hi);
    };
    clip(fidelity, 0.0, 1.0, "fidelity");
    clip(concurrence, 0.0, 1.0, "concurrence");
    clip(chsh_s, 0.0, 2.0 * std::numbers::sqrt2, "chsh_s");
    clip(visibility, 0.0, 1.0, "visibility");
    clip(purity, 0.25, 1.0, "purity");
}

NormalizedMetrics normalized_metrics(const MetricReport &free_space, const MetricReport &fibre) {
    if (!free_space.fidelity || !free_space.concurrence || !fibre.fidelity || !fibre.concurrence) {
        throw ArgumentError("normalized_metrics: both reports need fidelity and concurrence");
    }
    if (!(free_space.fidelity->value > 0.0) || !(free_space.concurrence->value > 0.0)) {
        throw ArgumentError("normalized_metrics: free-space fidelity and concurrence must be positive");
    }
    return NormalizedMetrics{fibre.fidelity->value / free_space.fidelity->value,
                             fibre.concurrence->value / free_space.concurrence->value};
}

SummaryStats summarize(std::span<const double> values) {
    SummaryStats out;
    if (values.empty()) {
        return out;
    }
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.stddev = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

}  // namespace hybridlab
