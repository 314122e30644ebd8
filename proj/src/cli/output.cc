// Copyright 2026 The nlaphase Authors
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

#include <charconv>
#include <cmath>
#include <system_error>

#include "table.h"

namespace nlaphase::cli {

namespace {

std::string quote_csv(const std::string &field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell &cell) {
    if (const auto *d = std::get_if<double>(&cell)) {
        return format_double(*d);
    }
    if (const auto *i = std::get_if<std::int64_t>(&cell)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(cell);
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, res.ptr);
}

std::string render_csv(const Table &table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += quote_csv(table.header[i]);
    }
    out += "\r\n";
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += quote_csv(cell_text(row[i]));
        }
        out += "\r\n";
    }
    return out;
}

nlohmann::ordered_json cell_to_json(const Cell &cell) {
    if (const auto *d = std::get_if<double>(&cell)) {
        if (!std::isfinite(*d)) {
            return nullptr;
        }
        return *d;
    }
    if (const auto *i = std::get_if<std::int64_t>(&cell)) {
        return *i;
    }
    return std::get<std::string>(cell);
}

nlohmann::ordered_json table_to_json(const Table &table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            obj[table.header[i]] = cell_to_json(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

}  // namespace nlaphase::cli
