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

#ifndef HYBRIDLAB_EXPERIMENTS_H
#define HYBRIDLAB_EXPERIMENTS_H

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "hybridlab/config.h"
#include "hybridlab/states.h"

namespace hybridlab {

/// Files written by one scenario run. Paths are absolute or relative to the
/// working directory, as given in the config's output_dir.
struct RunArtifacts {
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> data_files;
    std::filesystem::path metric_report;
    /// Contents of the metric report file.
    nlohmann::json metrics;
};

/// Ideal Bell state of the configured subspace/phase sent through the
/// configured fibre channel.
HybridState channel_state(const ExperimentConfig &cfg);
HybridState target_state(const ExperimentConfig &cfg);

RunArtifacts run_spectrum(const ExperimentConfig &cfg);
RunArtifacts run_tomography(const ExperimentConfig &cfg);
RunArtifacts run_bell(const ExperimentConfig &cfg);
RunArtifacts run_eraser(const ExperimentConfig &cfg);
RunArtifacts run_table_s1(const ExperimentConfig &cfg);

/// Dispatch on cfg.scenario.
RunArtifacts run_scenario(const ExperimentConfig &cfg);

}  // namespace hybridlab

#endif
