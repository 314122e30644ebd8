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

#ifndef NLAPHASE_CLI_H
#define NLAPHASE_CLI_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlaphase/cost.h"

namespace nlaphase::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalidConfig = 2,
    kExitIoFailure = 3,
    kExitDegenerate = 4,
};

enum class Format { kCsv, kJson };

/// A configuration value is missing, malformed or out of range.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error("invalid configuration: " + field + ": " + message),
          field_(std::move(field)) {}
    const std::string &field() const { return field_; }

   private:
    std::string field_;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Fully resolved parameters of one command invocation. Everything that
/// affects the dataset bytes lives here and is echoed into the manifest.
struct RunParams {
    std::string command;
    double r = 0.25;
    double theta_true = 0.01;
    std::vector<double> gain_grid;
    std::vector<int> n0_list;
    std::int64_t m = 1000;
    std::int64_t runs = 100000;
    std::uint64_t seed = 1;
    CostParams cost;
    /// Explicit information values for `cost`, replacing the computed ones.
    std::optional<double> j_alpha_override;
    std::optional<double> j_s_override;
    std::optional<double> p_s_override;
    Format format = Format::kCsv;
    bool strict = false;
    bool gnuplot_hints = false;
};

/// Per-command defaults (reference parameters: r = 0.25, theta_true = 0.01,
/// m = 1000; 40 log-spaced gains in [1, 8] for the sweeps).
RunParams defaults_for(const std::string &command);

/// Overlays the keys of a config-file object. Unknown keys and wrong types
/// are ConfigErrors naming the field.
void apply_config(const nlohmann::ordered_json &config, RunParams &params);

/// Throws ConfigError for out-of-range values.
void validate(const RunParams &params);

nlohmann::ordered_json params_to_json(const RunParams &params);
RunParams params_from_json(const nlohmann::ordered_json &j);

/// The dataset bytes for a command. Deterministic in `params`; `workers`
/// only changes how fast Monte Carlo runs are evaluated.
std::string render_dataset(const RunParams &params, unsigned workers = 1);

/// Axis and normalization notes for plotting the dataset.
std::string gnuplot_hints(const RunParams &params);

/// Writes the dataset to `output` ("-" for stdout) plus the manifest
/// sidecar `<output>.manifest.json` and, when requested, `<output>.hints.txt`.
int execute(const RunParams &params, const std::string &output, unsigned workers,
            std::ostream &out, std::ostream &err);

/// Full command-line entry point; args exclude the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

std::string manifest_path(const std::string &output);

}  // namespace nlaphase::cli

#endif  // NLAPHASE_CLI_H
