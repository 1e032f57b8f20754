// Copyright 2026 The pbqaoa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pbqaoa/problem.hpp"

namespace pbq {

/// Locale-independent shortest round-trip decimal (at most 17 significant
/// digits). Non-finite values are written as "nan", "inf" or "-inf".
std::string format_double(double value);

/// Parses what format_double writes.
double parse_double(std::string_view text);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

std::string read_file(const std::filesystem::path &path);

/// Minimal CSV table: header row, '.' decimals, no quoting (fields never
/// contain commas).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::string to_string() const;
    static CsvTable parse(std::string_view text);
    [[nodiscard]] std::size_t column(std::string_view name) const;
};

nlohmann::json problem_to_json(const IsingProblem &problem);
IsingProblem problem_from_json(const nlohmann::json &doc);

void write_problem(const std::filesystem::path &path, const IsingProblem &problem);
IsingProblem read_problem(const std::filesystem::path &path);

} // namespace pbq
