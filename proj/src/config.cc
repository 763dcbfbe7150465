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

#include "hybridlab/config.h"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace hybridlab {

namespace {

int line_of(const toml::node *n) {
    return n ? static_cast<int>(n->source().begin.line) : 0;
}

class Section {
   public:
    Section(const toml::table *table, std::string name) : table_(table), name_(std::move(name)) {}

    bool present() const { return table_ != nullptr; }
    std::string key(std::string_view k) const { return name_ + "." + std::string(k); }

    const toml::node *find(std::string_view k) const {
        return table_ ? table_->get(k) : nullptr;
    }

    void reject_unknown(std::initializer_list<std::string_view> allowed) const {
        if (!table_) {
            return;
        }
        const std::set<std::string_view> ok(allowed);
        for (const auto &[k, node] : *table_) {
            if (!ok.count(k.str())) {
                throw ConfigError(key(k.str()), line_of(&node), "unknown key");
            }
        }
    }

    std::optional<double> number(std::string_view k) const {
        const toml::node *n = find(k);
        if (!n) {
            return std::nullopt;
        }
        if (auto v = n->value<double>()) {
            if (!std::isfinite(*v)) {
                throw ConfigError(key(k), line_of(n), "must be finite");
            }
            return *v;
        }
        throw ConfigError(key(k), line_of(n), "expected a number");
    }

    std::optional<std::int64_t> integer(std::string_view k) const {
        const toml::node *n = find(k);
        if (!n) {
            return std::nullopt;
        }
        if (!n->is_integer()) {
            throw ConfigError(key(k), line_of(n), "expected an integer");
        }
        return n->value<std::int64_t>();
    }

    std::optional<std::string> string(std::string_view k) const {
        const toml::node *n = find(k);
        if (!n) {
            return std::nullopt;
        }
        if (!n->is_string()) {
            throw ConfigError(key(k), line_of(n), "expected a string");
        }
        return n->value<std::string>();
    }

    template <std::size_t N, typename T>
    std::optional<std::array<T, N>> array(std::string_view k) const {
        const toml::node *n = find(k);
        if (!n) {
            return std::nullopt;
        }
        const toml::array *arr = n->as_array();
        if (!arr || arr->size() != N) {
            throw ConfigError(key(k), line_of(n), fmt::format("expected an array of {} numbers", N));
        }
        std::array<T, N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            const toml::node &e = (*arr)[i];
            if constexpr (std::is_integral_v<T>) {
                if (!e.is_integer()) {
                    throw ConfigError(key(k), line_of(n), "array entries must be integers");
                }
                out[i] = static_cast<T>(*e.value<std::int64_t>());
            } else {
                auto v = e.value<double>();
                if (!v) {
                    throw ConfigError(key(k), line_of(n), "array entries must be numbers");
                }
                out[i] = *v;
            }
        }
        return out;
    }

    int line(std::string_view k) const { return line_of(find(k)); }

   private:
    const toml::table *table_;
    std::string name_;
};

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += fmt::format("{:02x}", digest[i]);
    }
    return out;
}

nlohmann::json optional_json(const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string_view calibration_name(Calibration c) {
    switch (c) {
        case Calibration::Direct:
            return "werner_p";
        case Calibration::Fidelity:
            return "target_fidelity";
        case Calibration::DominantMode:
            return "target_dominant";
    }
    return "?";
}

}  // namespace

ConfigError::ConfigError(std::string field, int line, const std::string &message)
    : std::runtime_error(message), field_(std::move(field)), line_(line) {}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::Spectrum:
            return "spectrum";
        case Scenario::Tomography:
            return "tomography";
        case Scenario::Bell:
            return "bell";
        case Scenario::Eraser:
            return "eraser";
        case Scenario::TableS1:
            return "table_s1";
    }
    return "?";
}

std::optional<Scenario> parse_scenario(std::string_view text) {
    for (Scenario s : {Scenario::Spectrum, Scenario::Tomography, Scenario::Bell, Scenario::Eraser, Scenario::TableS1}) {
        if (text == to_string(s)) {
            return s;
        }
    }
    if (text == "table-s1") {
        return Scenario::TableS1;
    }
    return std::nullopt;
}

double werner_p_for(Calibration mode, double target) {
    switch (mode) {
        case Calibration::Direct:
            return target;
        case Calibration::Fidelity:
            return (4.0 * target - 1.0) / 3.0;
        case Calibration::DominantMode:
            return 2.0 * target - 1.0;
    }
    return target;
}

nlohmann::json ExperimentConfig::semantic_json() const {
    nlohmann::json j;
    j["scenario"] = std::string(to_string(scenario));
    j["subspace"] = {subspace.ell_1, subspace.ell_2};
    j["channel"] = {
        {"werner_p", channel.werner_p},
        {"birefringence", {channel.birefringence_angles[0], channel.birefringence_angles[1],
                           channel.birefringence_angles[2]}},
        {"calibration", std::string(calibration_name(calibration))},
        {"calibration_target", calibration_target},
        {"background", background},
    };
    j["pairs_per_setting"] = pairs_per_setting;
    j["seed"] = seed;
    j["theta_grid_points"] = theta_grid_points;
    j["relative_phase"] = relative_phase;
    j["ell_window"] = ell_window;
    j["uncertainty_seeds"] = uncertainty_seeds;
    j["table_s1"] = {
        {"free_space_l1", optional_json(table_s1.free_space_l1)},
        {"smf_2m_l1", optional_json(table_s1.smf_2m_l1)},
        {"smf_250m_l1", optional_json(table_s1.smf_250m_l1)},
        {"free_space_l2", optional_json(table_s1.free_space_l2)},
        {"smf_2m_l2", optional_json(table_s1.smf_2m_l2)},
        {"smf_250m_l2", optional_json(table_s1.smf_250m_l2)},
    };
    return j;
}

std::string ExperimentConfig::hash() const {
    return sha256_hex(semantic_json().dump());
}

void validate(const ExperimentConfig &cfg) {
    if (cfg.subspace.ell_1 == cfg.subspace.ell_2) {
        throw ConfigError("scenario.subspace", 0, "the two OAM values must differ");
    }
    if (cfg.pairs_per_setting < 1) {
        throw ConfigError("scenario.pairs_per_setting", 0, "must be at least 1");
    }
    if (cfg.theta_grid_points < 8) {
        throw ConfigError("scenario.theta_grid_points", 0, "must be at least 8");
    }
    if (cfg.uncertainty_seeds < 0) {
        throw ConfigError("scenario.uncertainty_seeds", 0, "must be non-negative");
    }
    if (cfg.ell_window < cfg.subspace.max_abs_ell()) {
        throw ConfigError("scenario.ell_window", 0,
                          fmt::format("window ±{} does not contain subspace {}", cfg.ell_window,
                                      cfg.subspace.to_string()));
    }
    if (!(cfg.channel.werner_p >= 0.0 && cfg.channel.werner_p <= 1.0)) {
        throw ConfigError(fmt::format("channel.{}", calibration_name(cfg.calibration)), 0,
                          fmt::format("resolves to werner_p = {}, outside [0, 1]", cfg.channel.werner_p));
    }
    if (!(cfg.background >= 0.0) || !std::isfinite(cfg.background)) {
        throw ConfigError("channel.background", 0, "must be finite and non-negative");
    }
    for (double a : cfg.channel.birefringence_angles) {
        if (!std::isfinite(a)) {
            throw ConfigError("channel.birefringence", 0, "angles must be finite");
        }
    }
    if (!std::isfinite(cfg.relative_phase)) {
        throw ConfigError("scenario.relative_phase", 0, "must be finite");
    }
}

ExperimentConfig parse_config(std::string_view text, const std::string &source_name) {
    toml::table root;
    try {
        root = toml::parse(text, source_name);
    } catch (const toml::parse_error &e) {
        throw ConfigError("", static_cast<int>(e.source().begin.line), std::string(e.description()));
    }

    for (const auto &[k, node] : root) {
        if (k != "scenario" && k != "channel" && k != "table_s1") {
            throw ConfigError(std::string(k.str()), line_of(&node), "unknown section");
        }
        if (!node.is_table()) {
            throw ConfigError(std::string(k.str()), line_of(&node), "expected a [section]");
        }
    }

    const Section scenario(root["scenario"].as_table(), "scenario");
    const Section channel(root["channel"].as_table(), "channel");
    const Section table(root["table_s1"].as_table(), "table_s1");
    if (!scenario.present()) {
        throw ConfigError("scenario", 0, "missing [scenario] section");
    }
    scenario.reject_unknown({"name", "subspace", "pairs_per_setting", "seed", "output_dir", "theta_grid_points",
                             "relative_phase", "ell_window", "uncertainty_seeds"});
    channel.reject_unknown({"werner_p", "target_fidelity", "target_dominant", "birefringence", "background"});
    table.reject_unknown(
        {"free_space_l1", "smf_2m_l1", "smf_250m_l1", "free_space_l2", "smf_2m_l2", "smf_250m_l2"});

    ExperimentConfig cfg;
    const auto name = scenario.string("name");
    if (!name) {
        throw ConfigError("scenario.name", 0, "required field missing");
    }
    const auto parsed = parse_scenario(*name);
    if (!parsed) {
        throw ConfigError("scenario.name", scenario.line("name"),
                          fmt::format("unknown scenario '{}' (spectrum, tomography, bell, eraser, table_s1)", *name));
    }
    cfg.scenario = *parsed;

    if (auto sub = scenario.array<2, int>("subspace")) {
        if ((*sub)[0] == (*sub)[1]) {
            throw ConfigError("scenario.subspace", scenario.line("subspace"), "the two OAM values must differ");
        }
        cfg.subspace = SubspaceLabel{(*sub)[0], (*sub)[1]};
    } else if (cfg.scenario != Scenario::TableS1) {
        throw ConfigError("scenario.subspace", 0, "required field missing");
    }

    auto positive_int = [&](std::string_view key, std::int64_t min) -> std::optional<std::int64_t> {
        auto v = scenario.integer(key);
        if (v && *v < min) {
            throw ConfigError(scenario.key(key), scenario.line(key), fmt::format("must be at least {}", min));
        }
        return v;
    };
    if (auto v = positive_int("pairs_per_setting", 1)) cfg.pairs_per_setting = static_cast<std::uint64_t>(*v);
    if (auto v = positive_int("seed", 0)) cfg.seed = static_cast<std::uint64_t>(*v);
    if (auto v = positive_int("theta_grid_points", 8)) cfg.theta_grid_points = static_cast<int>(*v);
    if (auto v = positive_int("ell_window", 0)) cfg.ell_window = static_cast<int>(*v);
    if (auto v = positive_int("uncertainty_seeds", 0)) cfg.uncertainty_seeds = static_cast<int>(*v);
    if (auto v = scenario.string("output_dir")) cfg.output_dir = *v;
    if (auto v = scenario.number("relative_phase")) cfg.relative_phase = *v;

    int calibrations = 0;
    for (auto [key, mode] : {std::pair{"werner_p", Calibration::Direct},
                             std::pair{"target_fidelity", Calibration::Fidelity},
                             std::pair{"target_dominant", Calibration::DominantMode}}) {
        if (auto v = channel.number(key)) {
            ++calibrations;
            if (calibrations > 1) {
                throw ConfigError(channel.key(key), channel.line(key),
                                  "give only one of werner_p, target_fidelity, target_dominant");
            }
            cfg.calibration = mode;
            cfg.calibration_target = *v;
            cfg.channel.werner_p = werner_p_for(mode, *v);
            if (!(cfg.channel.werner_p >= 0.0 && cfg.channel.werner_p <= 1.0)) {
                throw ConfigError(channel.key(key), channel.line(key),
                                  fmt::format("resolves to werner_p = {}, outside [0, 1]", cfg.channel.werner_p));
            }
        }
    }
    if (auto v = channel.array<3, double>("birefringence")) cfg.channel.birefringence_angles = *v;
    if (auto v = channel.number("background")) {
        if (*v < 0.0) {
            throw ConfigError("channel.background", channel.line("background"), "must be non-negative");
        }
        cfg.background = *v;
    }

    auto target = [&](std::string_view key, std::optional<double> &slot) {
        if (auto v = table.number(key)) {
            if (!(*v >= 0.25 && *v <= 1.0)) {
                throw ConfigError(table.key(key), table.line(key), "fidelity target must lie in [0.25, 1]");
            }
            slot = *v;
        }
    };
    target("free_space_l1", cfg.table_s1.free_space_l1);
    target("smf_2m_l1", cfg.table_s1.smf_2m_l1);
    target("smf_250m_l1", cfg.table_s1.smf_250m_l1);
    target("free_space_l2", cfg.table_s1.free_space_l2);
    target("smf_2m_l2", cfg.table_s1.smf_2m_l2);
    target("smf_250m_l2", cfg.table_s1.smf_250m_l2);

    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("", 0, "cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

}  // namespace hybridlab
