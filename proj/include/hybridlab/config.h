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

#ifndef HYBRIDLAB_CONFIG_H
#define HYBRIDLAB_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hybridlab/optics.h"
#include "hybridlab/states.h"

namespace hybridlab {

enum class Scenario { Spectrum, Tomography, Bell, Eraser, TableS1 };

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view text);

/// Invalid configuration. `field` is the dotted key ("channel.werner_p"),
/// `line` the 1-based source line or 0 when unknown.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string field, int line, const std::string &message);

    const std::string &field() const { return field_; }
    int line() const { return line_; }

   private:
    std::string field_;
    int line_;
};

/// How the channel's Werner weight was chosen.
enum class Calibration {
    Direct,          // channel.werner_p given
    Fidelity,        // channel.target_fidelity: p = (4F − 1)/3
    DominantMode,    // channel.target_dominant: p = 2P − 1
};

/// Fidelity targets for the Table S1 rows; empty cells are not simulated.
struct TableS1Targets {
    std::optional<double> free_space_l1 = 0.95;
    std::optional<double> smf_2m_l1 = 0.94;
    std::optional<double> smf_250m_l1 = 0.90;
    std::optional<double> free_space_l2 = 0.93;
    std::optional<double> smf_2m_l2;
    std::optional<double> smf_250m_l2 = 0.86;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::Tomography;
    SubspaceLabel subspace{1, -1};
    ChannelParams channel;
    Calibration calibration = Calibration::Direct;
    double calibration_target = 1.0;
    double background = 0.0;
    std::uint64_t pairs_per_setting = 10000;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";
    int theta_grid_points = 16;
    double relative_phase = 0.0;
    int ell_window = 4;
    int uncertainty_seeds = 5;
    TableS1Targets table_s1;

    /// Every field that affects results (everything except output_dir), as a
    /// JSON object with sorted keys.
    nlohmann::json semantic_json() const;
    /// Lower-case hex SHA-256 of semantic_json().dump().
    std::string hash() const;
};

/// Resolve the Werner weight for a calibration target.
double werner_p_for(Calibration mode, double target);

/// Parse TOML text. Throws ConfigError with field and line information.
ExperimentConfig parse_config(std::string_view text, const std::string &source_name = "<config>");
ExperimentConfig load_config(const std::filesystem::path &path);

/// Re-check invariants after command-line overrides. Throws ConfigError.
void validate(const ExperimentConfig &cfg);

}  // namespace hybridlab

#endif
