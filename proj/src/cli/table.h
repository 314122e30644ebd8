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

#ifndef NLAPHASE_CLI_TABLE_H
#define NLAPHASE_CLI_TABLE_H

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace nlaphase::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal form that parses back to the same double; "inf", "-inf"
/// and "nan" for non-finite values.
std::string format_double(double v);

/// RFC 4180: fields containing a comma, quote or line break are quoted and
/// embedded quotes doubled. Lines end in CRLF.
std::string render_csv(const Table &table);

/// Array of row objects keyed by column name. Non-finite doubles become null.
nlohmann::ordered_json table_to_json(const Table &table);

nlohmann::ordered_json cell_to_json(const Cell &cell);

}  // namespace nlaphase::cli

#endif  // NLAPHASE_CLI_TABLE_H
