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

#include "hybridlab/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>

#include <fmt/format.h>

#include "hybridlab/io.h"
#include "hybridlab/measurement.h"
#include "hybridlab/metrics.h"
#include "hybridlab/optics.h"
#include "hybridlab/tomography.h"

namespace hybridlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char *kToolVersion = "hybridlab 1.0.0";
constexpr const char *kMetricsFile = "metrics.json";
constexpr const char *kManifestFile = "manifest.json";

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Descriptive source parameters; they do not enter the state-level model.
nlohmann::json source_metadata() {
    return {
        {"pump_wavelength_nm", 405},
        {"pump_power_mW", 118},
        {"crystal", "PPKTP, 10 mm, type-I"},
        {"photon_wavelength_nm", 810},
        {"filter_bandwidth_nm", 10},
        {"fibre", "single-mode fibre (phenomenological channel)"},
    };
}

class OutputDir {
   public:
    explicit OutputDir(const ExperimentConfig &cfg) : cfg_(cfg), dir_(cfg.output_dir) {
        std::filesystem::create_directories(dir_);
    }

    std::filesystem::path add(const std::string &name, const std::string &kind) {
        files_.push_back({{"path", name}, {"kind", kind}});
        paths_.push_back(dir_ / name);
        return dir_ / name;
    }

    RunArtifacts finish(const nlohmann::json &metrics) {
        RunArtifacts out;
        out.metric_report = dir_ / kMetricsFile;
        write_json(out.metric_report, metrics);
        files_.push_back({{"path", kMetricsFile}, {"kind", "metrics"}});

        nlohmann::json manifest = {
            {"scenario", std::string(to_string(cfg_.scenario))},
            {"config_hash", cfg_.hash()},
            {"hash_algorithm", "sha256(canonical-json(semantic config))"},
            {"config", cfg_.semantic_json()},
            {"timestamp", utc_timestamp()},
            {"tool", kToolVersion},
            {"files", files_},
            {"source_metadata", source_metadata()},
        };
        out.manifest = dir_ / kManifestFile;
        write_json(out.manifest, manifest);
        out.data_files = paths_;
        out.metrics = metrics;
        return out;
    }

   private:
    const ExperimentConfig &cfg_;
    std::filesystem::path dir_;
    nlohmann::json files_ = nlohmann::json::array();
    std::vector<std::filesystem::path> paths_;
};

nlohmann::json uncertain(double value, double sigma) {
    return {{"value", value}, {"sigma", sigma}};
}

ChannelParams channel_for(const ExperimentConfig &cfg, double werner_p) {
    ChannelParams params = cfg.channel;
    params.werner_p = werner_p;
    return params;
}

struct TomographyRun {
    std::vector<CoincidenceRecord> records;
    ReconstructionResult reconstruction;
    Uncertain fidelity;
    Uncertain concurrence;
    Uncertain purity;
};

// One primary reconstruction plus `extra_seeds` repetitions on fresh
// substreams for the spread of each metric.
TomographyRun simulate_tomography(const HybridState &state, const HybridState &target, const ExperimentConfig &cfg,
                                  std::uint64_t first_index) {
    const TomographySet set = standard_settings(state.subspace());
    const auto n = static_cast<std::uint64_t>(set.settings.size());
    std::vector<double> fids, concs, purs;
    TomographyRun run;
    for (int k = 0; k <= cfg.uncertainty_seeds; ++k) {
        SimulationOptions opts{cfg.pairs_per_setting, cfg.seed, first_index + static_cast<std::uint64_t>(k) * n,
                               cfg.background};
        std::vector<CoincidenceRecord> records = simulate_counts(state, set.settings, opts);
        ReconstructionResult rec = reconstruct_linear(records, set);
        fids.push_back(fidelity(target.rho(), rec.rho_physical));
        concs.push_back(concurrence(rec.rho_physical));
        purs.push_back(purity(rec.rho_physical));
        if (k == 0) {
            run.records = std::move(records);
            run.reconstruction = std::move(rec);
        }
    }
    run.fidelity = {fids[0], summarize(fids).stddev};
    run.concurrence = {concs[0], summarize(concs).stddev};
    run.purity = {purs[0], summarize(purs).stddev};
    return run;
}

nlohmann::json pauli_json(const Eigen::Matrix4d &r) {
    nlohmann::json rows = nlohmann::json::array();
    for (int m = 0; m < 4; ++m) {
        rows.push_back({r(m, 0), r(m, 1), r(m, 2), r(m, 3)});
    }
    return rows;
}

nlohmann::json predictions(const HybridState &state, const HybridState &target) {
    return {
        {"fidelity", fidelity(target.rho(), state.rho())},
        {"concurrence", concurrence(state.rho())},
        {"chsh_s", chsh_exact(state.rho())},
        {"purity", purity(state.rho())},
    };
}

std::string percent(double v) {
    return fmt::format("{}%", static_cast<long long>(std::floor(v * 100.0 + 0.5)));
}

std::string two_decimals(double v) {
    return fmt::format("{:.2f}", std::floor(v * 100.0 + 0.5) / 100.0);
}

}  // namespace

HybridState target_state(const ExperimentConfig &cfg) {
    return post_select_hybrid(cfg.subspace, cfg.relative_phase);
}

HybridState channel_state(const ExperimentConfig &cfg) {
    return smf_channel(target_state(cfg), cfg.channel);
}

RunArtifacts run_spectrum(const ExperimentConfig &cfg) {
    validate(cfg);
    OutputDir out(cfg);
    const BiPhotonDensity density = embed(channel_state(cfg), cfg.ell_window);
    const int window = cfg.ell_window;
    const auto per_selection = static_cast<std::uint64_t>(2 * window + 1);

    CsvTable table;
    table.header = {"spin_selection", "ell", "probability", "measured", "counts", "total_pairs", "seed"};
    std::vector<CoincidenceRecord> records;
    nlohmann::json selections = nlohmann::json::object();
    const Polarisation order[] = {Polarisation::R, Polarisation::L, Polarisation::H, Polarisation::V};
    for (std::uint64_t s = 0; s < 4; ++s) {
        SimulationOptions opts{cfg.pairs_per_setting, cfg.seed, s * per_selection, cfg.background};
        const auto points = simulate_mode_spectrum(density, order[s], window, opts);
        const auto dominant = std::max_element(points.begin(), points.end(), [](const auto &a, const auto &b) {
            return a.probability < b.probability;
        });
        for (const SpectrumPoint &p : points) {
            table.rows.push_back({std::string(to_string(order[s])), std::to_string(p.ell), format_double(p.probability),
                                  format_double(p.measured), std::to_string(p.record.counts),
                                  std::to_string(p.record.total_pairs), std::to_string(p.record.seed)});
            records.push_back(p.record);
        }
        selections[std::string(to_string(order[s]))] = {
            {"dominant_ell", dominant->ell},
            {"dominant_probability", dominant->probability},
            {"dominant_measured", dominant->measured},
        };
    }
    write_csv(out.add("spectrum.csv", "spectrum"), table);
    write_records_csv(out.add("spectrum_counts.csv", "coincidences"), records);

    nlohmann::json metrics = {
        {"scenario", "spectrum"},
        {"report", metric_report_to_json(MetricReport{})},
        {"details",
         {{"werner_p", cfg.channel.werner_p}, {"ell_window", window}, {"selections", selections}}},
    };
    return out.finish(metrics);
}

RunArtifacts run_tomography(const ExperimentConfig &cfg) {
    validate(cfg);
    OutputDir out(cfg);
    const HybridState target = target_state(cfg);
    const HybridState state = channel_state(cfg);
    TomographyRun run = simulate_tomography(state, target, cfg, 0);

    write_records_csv(out.add("tomography_counts.csv", "coincidences"), run.records);
    const ReconstructionResult &rec = run.reconstruction;
    write_json(out.add("rho.json", "density"),
               {{"subspace", {cfg.subspace.ell_1, cfg.subspace.ell_2}},
                {"basis", {"R,l1", "R,l2", "L,l1", "L,l2"}},
                {"rho_raw", matrix_to_json(rec.rho_raw)},
                {"rho_physical", matrix_to_json(rec.rho_physical)},
                {"target", matrix_to_json(target.rho())},
                {"pauli_coefficients", pauli_json(rec.pauli_coefficients)},
                {"residual", rec.residual}});

    CsvTable pauli_table;
    pauli_table.header = {"m", "n", "coefficient"};
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            pauli_table.rows.push_back({std::to_string(m), std::to_string(n), format_double(rec.pauli_coefficients(m, n))});
        }
    }
    write_csv(out.add("pauli_coefficients.csv", "pauli"), pauli_table);

    MetricReport report;
    report.fidelity = run.fidelity;
    report.concurrence = run.concurrence;
    report.purity = run.purity;
    report.clip_to_ranges();
    nlohmann::json metrics = {
        {"scenario", "tomography"},
        {"report", metric_report_to_json(report)},
        {"details",
         {{"werner_p", cfg.channel.werner_p},
          {"residual", rec.residual},
          {"ensemble_size", cfg.uncertainty_seeds + 1},
          {"predicted", predictions(state, target)}}},
    };
    return out.finish(metrics);
}

RunArtifacts run_bell(const ExperimentConfig &cfg) {
    validate(cfg);
    OutputDir out(cfg);
    const HybridState state = channel_state(cfg);
    const ChshAngles angles;

    std::vector<double> grid = uniform_grid(cfg.theta_grid_points);
    for (const auto &setting : chsh_required_settings(angles)) {
        const double a = setting[0];
        if (std::none_of(grid.begin(), grid.end(), [&](double g) { return std::abs(g - a) < 1e-9; })) {
            grid.push_back(a);
        }
    }
    std::sort(grid.begin(), grid.end());

    std::vector<CoincidenceRecord> records;
    nlohmann::json curves = nlohmann::json::array();
    const double spin_angles[] = {3 * kPi / 2, kPi, kPi / 2, 0.0};
    for (std::uint64_t c = 0; c < 4; ++c) {
        SimulationOptions opts{cfg.pairs_per_setting, cfg.seed, c * grid.size(), cfg.background};
        Curve curve = bell_curve(state, spin_angles[c], grid, opts);
        curves.push_back({{"theta_B", spin_angles[c]}, {"points", curve.records.size()}});
        records.insert(records.end(), curve.records.begin(), curve.records.end());
    }
    write_records_csv(out.add("bell_curves.csv", "coincidences"), records);

    const ChshResult chsh = chsh_from_counts(lookup_from_records(records), angles);
    // Shot noise can push the estimate past the physical bounds; the report
    // carries the clamped value and the details keep the raw one.
    MetricReport report;
    report.chsh_s = Uncertain{std::clamp(chsh.s, 0.0, 2.0 * std::numbers::sqrt2), chsh.sigma};
    report.clip_to_ranges();
    nlohmann::json metrics = {
        {"scenario", "bell"},
        {"report", metric_report_to_json(report)},
        {"details",
         {{"werner_p", cfg.channel.werner_p},
          {"chsh_s_raw", uncertain(chsh.s, chsh.sigma)},
          {"correlations",
           {{"E(a,b)", chsh.correlations[0]},
            {"E(a,b')", chsh.correlations[1]},
            {"E(a',b)", chsh.correlations[2]},
            {"E(a',b')", chsh.correlations[3]}}},
          {"angles",
           {{"a", angles.oam_a}, {"a_prime", angles.oam_a_prime}, {"b", angles.spin_b}, {"b_prime", angles.spin_b_prime}}},
          {"curves", curves},
          {"predicted_chsh_s", chsh_exact(state.rho())}}},
    };
    return out.finish(metrics);
}

RunArtifacts run_eraser(const ExperimentConfig &cfg) {
    validate(cfg);
    OutputDir out(cfg);
    const HybridState state = channel_state(cfg);
    const std::vector<double> grid = uniform_grid(cfg.theta_grid_points);

    std::vector<CoincidenceRecord> records;
    nlohmann::json details = {{"werner_p", cfg.channel.werner_p}};
    Uncertain erase_v;
    std::uint64_t index = 0;
    for (EraserMode mode : {EraserMode::Distinguish, EraserMode::Erase}) {
        SimulationOptions opts{cfg.pairs_per_setting, cfg.seed, index, cfg.background};
        index += grid.size();
        const Curve curve = eraser_scan(state, mode, grid, opts);
        const VisibilityFit fit = visibility(curve.thetas(), curve.counts());

        std::vector<double> exact;
        for (double t : grid) {
            exact.push_back(detection_probability(state, eraser_setting(state.subspace(), mode, t)));
        }
        const VisibilityFit ideal = visibility(grid, exact, false);
        details[std::string(to_string(mode))] = {
            {"visibility", uncertain(fit.visibility, fit.sigma)},
            {"offset", fit.offset},
            {"amplitude", fit.amplitude},
            {"phase", fit.phase},
            {"predicted_visibility", ideal.visibility},
        };
        if (mode == EraserMode::Erase) {
            erase_v = {fit.visibility, fit.sigma};
        }
        records.insert(records.end(), curve.records.begin(), curve.records.end());
    }
    write_records_csv(out.add("eraser_curves.csv", "coincidences"), records);

    MetricReport report;
    report.visibility = erase_v;
    report.clip_to_ranges();
    nlohmann::json metrics = {{"scenario", "eraser"}, {"report", metric_report_to_json(report)}, {"details", details}};
    return out.finish(metrics);
}

RunArtifacts run_table_s1(const ExperimentConfig &cfg) {
    validate(cfg);
    OutputDir out(cfg);

    struct Row {
        const char *environment;
        const char *key;
        int ell;
        std::optional<double> target;
    };
    const Row rows[] = {
        {"Free-space", "free_space", 1, cfg.table_s1.free_space_l1},
        {"2m", "smf_2m", 1, cfg.table_s1.smf_2m_l1},
        {"250m", "smf_250m", 1, cfg.table_s1.smf_250m_l1},
        {"Free-space", "free_space", 2, cfg.table_s1.free_space_l2},
        {"2m", "smf_2m", 2, cfg.table_s1.smf_2m_l2},
        {"250m", "smf_250m", 2, cfg.table_s1.smf_250m_l2},
    };

    struct Result {
        MetricReport report;
        double werner_p;
        nlohmann::json predicted;
    };
    std::vector<std::optional<Result>> results(std::size(rows));
    const std::uint64_t stride = 36ull * static_cast<std::uint64_t>(cfg.uncertainty_seeds + 1);
    for (std::size_t r = 0; r < std::size(rows); ++r) {
        if (!rows[r].target) {
            continue;
        }
        const double p = werner_p_for(Calibration::Fidelity, *rows[r].target);
        const HybridState target = post_select_hybrid(SubspaceLabel::make(rows[r].ell, -rows[r].ell), cfg.relative_phase);
        const HybridState state = smf_channel(target, channel_for(cfg, p));
        const TomographyRun run = simulate_tomography(state, target, cfg, r * stride);
        Result res{MetricReport{}, p, predictions(state, target)};
        res.report.fidelity = run.fidelity;
        res.report.concurrence = run.concurrence;
        res.report.purity = run.purity;
        results[r] = std::move(res);
    }
    // Normalize each fibre row by the free-space row of the same subspace.
    for (std::size_t r = 0; r < std::size(rows); ++r) {
        const std::size_t free_row = rows[r].ell == 1 ? 0 : 3;
        if (results[r] && results[free_row]) {
            const NormalizedMetrics n = normalized_metrics(results[free_row]->report, results[r]->report);
            results[r]->report.normalized_fidelity = n.fidelity;
            results[r]->report.normalized_concurrence = n.concurrence;
        }
        if (results[r]) {
            results[r]->report.clip_to_ranges();
        }
    }

    CsvTable raw;
    raw.header = {"environment", "ell", "target_fidelity", "werner_p", "F", "F_sigma", "F_n",
                  "C", "C_sigma", "C_n", "predicted_C", "predicted_S"};
    CsvTable layout;
    layout.header = {"environment", "l1_F", "l1_F_n", "l1_C", "l1_C_n", "l2_F", "l2_F_n", "l2_C", "l2_C_n"};
    nlohmann::json row_json = nlohmann::json::array();
    for (const char *env : {"Free-space", "2m", "250m"}) {
        std::vector<std::string> line{env};
        for (std::size_t r = 0; r < std::size(rows); ++r) {
            if (std::string(rows[r].environment) != env) {
                continue;
            }
            if (!results[r]) {
                line.insert(line.end(), 4, "\\");
                continue;
            }
            const Result &res = *results[r];
            const MetricReport &m = res.report;
            line.push_back(percent(m.fidelity->value));
            line.push_back(m.normalized_fidelity ? percent(*m.normalized_fidelity) : "\\");
            line.push_back(two_decimals(m.concurrence->value));
            line.push_back(m.normalized_concurrence ? two_decimals(*m.normalized_concurrence) : "\\");
            raw.rows.push_back({env, std::to_string(rows[r].ell), format_double(*rows[r].target),
                                format_double(res.werner_p), format_double(m.fidelity->value),
                                format_double(m.fidelity->sigma),
                                m.normalized_fidelity ? format_double(*m.normalized_fidelity) : "",
                                format_double(m.concurrence->value), format_double(m.concurrence->sigma),
                                m.normalized_concurrence ? format_double(*m.normalized_concurrence) : "",
                                format_double(res.predicted.at("concurrence").get<double>()),
                                format_double(res.predicted.at("chsh_s").get<double>())});
            row_json.push_back({{"environment", env},
                                {"key", rows[r].key},
                                {"ell", rows[r].ell},
                                {"target_fidelity", *rows[r].target},
                                {"werner_p", res.werner_p},
                                {"report", metric_report_to_json(m)},
                                {"predicted", res.predicted}});
        }
        layout.rows.push_back(std::move(line));
    }
    write_csv(out.add("table_s1.csv", "table"), layout);
    write_csv(out.add("table_s1_raw.csv", "table"), raw);

    nlohmann::json metrics = {
        {"scenario", "table_s1"},
        {"report", metric_report_to_json(MetricReport{})},
        {"details", {{"rows", row_json}}},
    };
    return out.finish(metrics);
}

RunArtifacts run_scenario(const ExperimentConfig &cfg) {
    switch (cfg.scenario) {
        case Scenario::Spectrum:
            return run_spectrum(cfg);
        case Scenario::Tomography:
            return run_tomography(cfg);
        case Scenario::Bell:
            return run_bell(cfg);
        case Scenario::Eraser:
            return run_eraser(cfg);
        case Scenario::TableS1:
            return run_table_s1(cfg);
    }
    throw ConfigError("scenario.name", 0, "unknown scenario");
}

}  // namespace hybridlab
