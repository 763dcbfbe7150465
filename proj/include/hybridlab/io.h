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

#ifndef HYBRIDLAB_IO_H
#define HYBRIDLAB_IO_H

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridlab/linalg.h"
#include "hybridlab/measurement.h"
#include "hybridlab/metrics.h"

namespace hybridlab {

/// Comma-separated table with a header row. Cells must not contain commas,
/// quotes or newlines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws ArgumentError if absent.
    std::size_t column(const std::string &name) const;
};

void write_csv(const std::filesystem::path &path, const CsvTable &table);
CsvTable read_csv(const std::filesystem::path &path);

/// Shortest round-trip decimal form ("." separator); NaN prints as "".
std::string format_double(double v);
double parse_double(const std::string &cell);

/// Columns: setting_label, theta_A, theta_B_or_mode, counts, total_pairs, seed.
CsvTable records_table(std::span<const CoincidenceRecord> records);
std::vector<CoincidenceRecord> records_from_table(const CsvTable &table);
void write_records_csv(const std::filesystem::path &path, std::span<const CoincidenceRecord> records);
std::vector<CoincidenceRecord> read_records_csv(const std::filesystem::path &path);

/// Nested row arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const nlohmann::json &j);

nlohmann::json metric_report_to_json(const MetricReport &report);
MetricReport metric_report_from_json(const nlohmann::json &j);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path &path, const nlohmann::json &j);
nlohmann::json read_json(const std::filesystem::path &path);

}  // namespace hybridlab

#endif
