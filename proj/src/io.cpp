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
#include "pbqaoa/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace pbq {

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (result.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return {buffer, result.ptr};
}

double parse_double(std::string_view text) {
    if (text == "nan") {
        return std::nan("");
    }
    if (text == "inf") {
        return INFINITY;
    }
    if (text == "-inf") {
        return -INFINITY;
    }
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw std::invalid_argument("parse_double: not a number: " + std::string(text));
    }
    return value;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string CsvTable::to_string() const {
    std::string out;
    auto append_row = [&out](const std::vector<std::string> &row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k != 0) {
                out += ',';
            }
            out += row[k];
        }
        out += '\n';
    };
    append_row(header);
    for (const auto &row : rows) {
        append_row(row);
    }
    return out;
}

CsvTable CsvTable::parse(std::string_view text) {
    CsvTable table;
    bool first = true;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size()) {
                throw std::runtime_error("csv: ragged row");
            }
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) {
            return k;
        }
    }
    throw std::out_of_range("csv: no column named " + std::string(name));
}

nlohmann::json problem_to_json(const IsingProblem &problem) {
    nlohmann::json doc;
    doc["n"] = problem.n();
    doc["family"] = std::string(to_string(problem.family()));
    nlohmann::json graph;
    graph["type"] = std::string(to_string(problem.graph().kind));
    if (problem.graph().kind == GraphKind::Gnm) {
        graph["density"] = problem.graph().parameter;
    } else {
        graph["degree"] = static_cast<std::size_t>(problem.graph().parameter);
    }
    doc["graph"] = graph;
    doc["sigma2"] = problem.sigma2();
    doc["seed"] = problem.seed();
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge &e : problem.edges()) {
        edges.push_back({e.i, e.j, problem.J(e.i, e.j)});
    }
    doc["edges"] = edges;
    doc["h"] = problem.fields();
    return doc;
}

IsingProblem problem_from_json(const nlohmann::json &doc) {
    const auto n = doc.at("n").get<std::size_t>();
    const Family family = parse_family(doc.at("family").get<std::string>());
    GraphMeta meta;
    const auto &graph = doc.at("graph");
    meta.kind = parse_graph_kind(graph.at("type").get<std::string>());
    meta.parameter = meta.kind == GraphKind::Gnm ? graph.at("density").get<double>()
                                                 : graph.at("degree").get<double>();
    std::vector<double> J(n * n, 0.0);
    for (const auto &edge : doc.at("edges")) {
        const auto i = edge.at(0).get<std::size_t>();
        const auto j = edge.at(1).get<std::size_t>();
        if (i >= n || j >= n || i == j) {
            throw std::invalid_argument("problem json: invalid edge");
        }
        const double v = edge.at(2).get<double>();
        J[i * n + j] = v;
        J[j * n + i] = v;
    }
    auto h = doc.at("h").get<std::vector<double>>();
    return IsingProblem(n, std::move(J), std::move(h), family, meta,
                        doc.at("sigma2").get<double>(), doc.at("seed").get<std::uint64_t>());
}

void write_problem(const std::filesystem::path &path, const IsingProblem &problem) {
    write_file_atomic(path, problem_to_json(problem).dump(2) + "\n");
}

IsingProblem read_problem(const std::filesystem::path &path) {
    return problem_from_json(nlohmann::json::parse(read_file(path)));
}

} // namespace pbq
