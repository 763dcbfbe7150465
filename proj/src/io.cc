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

#include "hybridlab/io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "hybridlab/errors.h"

namespace hybridlab {

namespace {

std::vector<std::string> split_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

void check_cell(const std::string &cell) {
    if (cell.find_first_of(",\"\n\r") != std::string::npos) {
        throw ArgumentError("write_csv: cell contains a separator: " + cell);
    }
}

std::uint64_t parse_u64(const std::string &cell) {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(cell, &used);
    if (used != cell.size()) {
        throw ArgumentError("CSV: not an unsigned integer: '" + cell + "'");
    }
    return static_cast<std::uint64_t>(v);
}

nlohmann::json uncertain_to_json(const Uncertain &u) {
    return nlohmann::json{{"value", u.value}, {"sigma", u.sigma}};
}

std::optional<Uncertain> uncertain_from_json(const nlohmann::json &j, const char *key) {
    if (!j.contains(key)) {
        return std::nullopt;
    }
    return Uncertain{j.at(key).at("value").get<double>(), j.at(key).at("sigma").get<double>()};
}

}  // namespace

std::size_t CsvTable::column(const std::string &name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) {
            return k;
        }
    }
    throw ArgumentError("CSV: missing column '" + name + "'");
}

void write_csv(const std::filesystem::path &path, const CsvTable &table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    auto write_row = [&](const std::vector<std::string> &row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            check_cell(row[k]);
            out << (k ? "," : "") << row[k];
        }
        out << '\n';
    };
    write_row(table.header);
    for (const auto &row : table.rows) {
        if (row.size() != table.header.size()) {
            throw DimensionError(fmt::format("write_csv: row has {} cells, header has {}", row.size(),
                                             table.header.size()));
        }
        write_row(row);
    }
}

CsvTable read_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw ArgumentError("CSV: empty file " + path.string());
    }
    table.header = split_line(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (cells.size() != table.header.size()) {
            throw ArgumentError(fmt::format("CSV: {} line {} has {} cells, expected {}", path.string(), line_no,
                                            cells.size(), table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "";
    }
    return fmt::format("{}", v);
}

double parse_double(const std::string &cell) {
    if (cell.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) {
        throw ArgumentError("CSV: not a number: '" + cell + "'");
    }
    return v;
}

CsvTable records_table(std::span<const CoincidenceRecord> records) {
    CsvTable t;
    t.header = {"setting_label", "theta_A", "theta_B_or_mode", "counts", "total_pairs", "seed"};
    for (const CoincidenceRecord &r : records) {
        t.rows.push_back({r.label, format_double(r.theta_a), r.theta_b_or_mode, std::to_string(r.counts),
                          std::to_string(r.total_pairs), std::to_string(r.seed)});
    }
    return t;
}

std::vector<CoincidenceRecord> records_from_table(const CsvTable &table) {
    const std::size_t c_label = table.column("setting_label");
    const std::size_t c_theta = table.column("theta_A");
    const std::size_t c_mode = table.column("theta_B_or_mode");
    const std::size_t c_counts = table.column("counts");
    const std::size_t c_total = table.column("total_pairs");
    const std::size_t c_seed = table.column("seed");
    std::vector<CoincidenceRecord> out;
    for (const auto &row : table.rows) {
        CoincidenceRecord r;
        r.label = row[c_label];
        r.theta_a = parse_double(row[c_theta]);
        r.theta_b_or_mode = row[c_mode];
        r.counts = parse_u64(row[c_counts]);
        r.total_pairs = parse_u64(row[c_total]);
        r.seed = parse_u64(row[c_seed]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_records_csv(const std::filesystem::path &path, std::span<const CoincidenceRecord> records) {
    write_csv(path, records_table(records));
}

std::vector<CoincidenceRecord> read_records_csv(const std::filesystem::path &path) {
    return records_from_table(read_csv(path));
}

nlohmann::json matrix_to_json(const ComplexMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.empty()) {
        throw ArgumentError("matrix JSON: expected a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto &row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw DimensionError("matrix JSON: ragged rows");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const auto &entry = row.at(static_cast<std::size_t>(k));
            if (!entry.is_array() || entry.size() != 2) {
                throw ArgumentError("matrix JSON: entries must be [re, im] pairs");
            }
            m(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

nlohmann::json metric_report_to_json(const MetricReport &r) {
    nlohmann::json j = nlohmann::json::object();
    if (r.fidelity) j["fidelity"] = uncertain_to_json(*r.fidelity);
    if (r.concurrence) j["concurrence"] = uncertain_to_json(*r.concurrence);
    if (r.chsh_s) j["chsh_s"] = uncertain_to_json(*r.chsh_s);
    if (r.visibility) j["visibility"] = uncertain_to_json(*r.visibility);
    if (r.purity) j["purity"] = uncertain_to_json(*r.purity);
    if (r.normalized_fidelity) j["normalized_fidelity"] = *r.normalized_fidelity;
    if (r.normalized_concurrence) j["normalized_concurrence"] = *r.normalized_concurrence;
    return j;
}

MetricReport metric_report_from_json(const nlohmann::json &j) {
    MetricReport r;
    r.fidelity = uncertain_from_json(j, "fidelity");
    r.concurrence = uncertain_from_json(j, "concurrence");
    r.chsh_s = uncertain_from_json(j, "chsh_s");
    r.visibility = uncertain_from_json(j, "visibility");
    r.purity = uncertain_from_json(j, "purity");
    if (j.contains("normalized_fidelity")) r.normalized_fidelity = j.at("normalized_fidelity").get<double>();
    if (j.contains("normalized_concurrence")) r.normalized_concurrence = j.at("normalized_concurrence").get<double>();
    return r;
}

void write_json(const std::filesystem::path &path, const nlohmann::json &j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return nlohmann::json::parse(in);
}

}  // namespace hybridlab
