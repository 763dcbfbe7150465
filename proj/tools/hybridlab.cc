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

// Command-line runner for the simulated experiments.
//
//   hybridlab <spectrum|tomography|bell|eraser|table-s1> --config PATH
//             [--seed N] [--out DIR]
//
// Exit status: 0 on success, 2 for configuration errors, 3 for numerical
// failures. Errors are printed as one line on stderr.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hybridlab/config.h"
#include "hybridlab/errors.h"
#include "hybridlab/experiments.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string one_line(std::string s) {
    for (char &c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hybrid spin-OAM entanglement experiment simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;

    const char *names[] = {"spectrum", "tomography", "bell", "eraser", "table-s1"};
    for (const char *name : names) {
        CLI::App *sub = app.add_subcommand(name, std::string("Run the ") + name + " scenario");
        sub->add_option("--config", config_path, "TOML configuration file")->required();
        sub->add_option("--seed", seed, "Override the configured seed");
        sub->add_option("--out", out_dir, "Override the output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: kind=usage message=\"" << one_line(e.what()) << "\"\n";
        return kExitConfig;
    }

    const std::string chosen = app.get_subcommands().front()->get_name();
    try {
        hybridlab::ExperimentConfig cfg = hybridlab::load_config(config_path);
        const auto scenario = hybridlab::parse_scenario(chosen);
        if (cfg.scenario != *scenario) {
            throw hybridlab::ConfigError("scenario.name", 0,
                                         "config is for '" + std::string(hybridlab::to_string(cfg.scenario)) +
                                             "' but subcommand is '" + chosen + "'");
        }
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.output_dir = *out_dir;
        hybridlab::validate(cfg);

        const hybridlab::RunArtifacts art = hybridlab::run_scenario(cfg);
        std::cout << "wrote " << art.manifest.string() << '\n';
        return 0;
    } catch (const hybridlab::ConfigError &e) {
        std::cerr << "error: kind=config field=" << e.field() << " line=" << e.line() << " message=\""
                  << one_line(e.what()) << "\"\n";
        return kExitConfig;
    } catch (const hybridlab::NumericalError &e) {
        std::cerr << "error: kind=numerical message=\"" << one_line(e.what()) << "\"\n";
        return kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: kind=runtime message=\"" << one_line(e.what()) << "\"\n";
        return 1;
    }
}
