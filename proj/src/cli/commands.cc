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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "nlaphase/cli.h"
#include "nlaphase/errors.h"
#include "nlaphase/fisher.h"
#include "nlaphase/montecarlo.h"
#include "table.h"

#ifndef NLAPHASE_VERSION
#define NLAPHASE_VERSION "0.0.0"
#endif

namespace nlaphase::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"probabilities", "fisher-sweep", "fraction",
                                            "simulate", "cost"};

bool is_single_point(const std::string &command) {
    return command == "fraction" || command == "cost";
}

// ---------------------------------------------------------------------------
// Config parsing

double get_number(const Json &j, const std::string &field) {
    if (!j.is_number()) {
        throw ConfigError(field, "expected a number");
    }
    return j.get<double>();
}

std::int64_t get_integer(const Json &j, const std::string &field) {
    if (!j.is_number_integer()) {
        throw ConfigError(field, "expected an integer");
    }
    return j.get<std::int64_t>();
}

std::uint64_t get_seed(const Json &j, const std::string &field) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw ConfigError(field, "expected a nonnegative integer");
}

bool get_bool(const Json &j, const std::string &field) {
    if (!j.is_boolean()) {
        throw ConfigError(field, "expected true or false");
    }
    return j.get<bool>();
}

std::optional<double> get_optional_number(const Json &j, const std::string &field) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return get_number(j, field);
}

Format parse_format(const std::string &s) {
    if (s == "csv") return Format::kCsv;
    if (s == "json") return Format::kJson;
    throw ConfigError("format", "expected csv or json, got '" + s + "'");
}

std::string format_name(Format f) {
    return f == Format::kCsv ? "csv" : "json";
}

// ---------------------------------------------------------------------------
// Dataset builders

Table probabilities_table(const RunParams &p) {
    Table t{{"g", "n0", "p_s", "p_f"}, {}};
    for (int n0 : p.n0_list) {
        for (double g : p.gain_grid) {
            const NlaParams nla{g, n0};
            t.rows.push_back({g, std::int64_t{n0}, success_probability(p.r, nla),
                              failure_probability(p.r, nla)});
        }
    }
    return t;
}

Table fisher_table(const RunParams &p) {
    Table t{{"g", "n0", "j_alpha", "j_s", "j_f", "j_ideal", "ps_js", "pf_jf", "j_nla_asymptotic",
             "j_s_norm", "j_f_norm", "j_ideal_norm", "ps_js_norm", "pf_jf_norm",
             "j_nla_asymptotic_norm"},
            {}};
    for (const auto &b : sweep_gain(p.r, p.n0_list, p.gain_grid)) {
        const double norm = b.j_alpha;
        auto scaled = [&](double v) {
            return norm > 0 ? v / norm : std::numeric_limits<double>::quiet_NaN();
        };
        t.rows.push_back({b.nla.gain, std::int64_t{b.nla.n0}, b.j_alpha, b.j_s, b.j_f, b.j_ideal,
                          b.success_share(), b.failure_share(), b.j_nla_asymptotic, scaled(b.j_s),
                          scaled(b.j_f), scaled(b.j_ideal), scaled(b.success_share()),
                          scaled(b.failure_share()), scaled(b.j_nla_asymptotic)});
    }
    return t;
}

std::string fraction_dataset(const RunParams &p) {
    const NlaParams nla{p.gain_grid.front(), p.n0_list.front()};
    const FisherBreakdown b = branch_breakdown(p.r, nla);
    const FractionSweep sweep = sweep_fraction(p.m, b);
    if (!sweep.crossing && p.strict) {
        throw NoCrossing("j_s <= j_alpha: no n_s makes the conditional information exceed j_alpha");
    }
    const std::vector<double> tails = binomial_tails(p.m, b.p_s);

    Table t{{"n_s", "fraction", "success_part", "failure_part", "j_nla", "j_alpha", "j_nla_norm",
             "tail_probability", "most_likely", "crossing"},
            {}};
    for (const auto &row : sweep.rows) {
        t.rows.push_back({row.n_s, row.fraction, row.success_part, row.failure_part, row.j_nla,
                          b.j_alpha,
                          b.j_alpha > 0 ? row.j_nla / b.j_alpha
                                        : std::numeric_limits<double>::quiet_NaN(),
                          tails[row.n_s], std::int64_t{row.n_s == sweep.most_likely_ns},
                          std::int64_t{sweep.crossing && row.n_s == *sweep.crossing}});
    }
    if (p.format == Format::kCsv) {
        return render_csv(t);
    }
    Json out;
    out["m"] = p.m;
    out["g"] = nla.gain;
    out["n0"] = nla.n0;
    out["p_s"] = b.p_s;
    out["j_alpha"] = b.j_alpha;
    out["j_s"] = b.j_s;
    out["j_f"] = b.j_f;
    out["most_likely_ns"] = sweep.most_likely_ns;
    if (sweep.crossing) {
        out["crossing_ns"] = *sweep.crossing;
        out["crossing_tail_probability"] = tails[*sweep.crossing];
    } else {
        out["crossing_ns"] = nullptr;
        out["crossing_tail_probability"] = nullptr;
    }
    out["rows"] = table_to_json(t);
    return out.dump(2) + "\n";
}

Table simulate_table(const RunParams &p, unsigned workers) {
    Table t{{"g", "n0", "precision_direct", "stderr_direct", "precision_nla", "stderr_nla",
             "precision_nla_theory", "runs_used_direct", "runs_used_nla", "mse_direct", "mse_nla",
             "success_fraction"},
            {}};
    const double j_alpha = qfi_coherent(p.r);
    if (!(j_alpha > 0)) {
        throw DegenerateObservable("r = 0: the probe carries no phase information");
    }
    for (int n0 : p.n0_list) {
        for (double g : p.gain_grid) {
            SimConfig config;
            config.r = p.r;
            config.theta_true = p.theta_true;
            config.gain = g;
            config.n0 = n0;
            config.m = p.m;
            config.runs = p.runs;
            config.seed = p.seed;
            const SimulationResult direct = simulate_direct(config, workers);
            const SimulationResult nla = simulate_nla(config, workers);

            // Asymptotic precision at the most likely branch split.
            const FisherBreakdown b = branch_breakdown(p.r, {g, n0});
            const auto n_s = static_cast<std::int64_t>(std::llround(p.m * b.p_s));
            const double theory = j_nla_conditional(n_s, p.m - n_s, b) / j_alpha;

            t.rows.push_back({g, std::int64_t{n0}, direct.report.precision / j_alpha,
                              direct.report.stderr_precision / j_alpha,
                              nla.report.precision / j_alpha, nla.report.stderr_precision / j_alpha,
                              theory, direct.report.runs_used, nla.report.runs_used,
                              direct.report.mse, nla.report.mse, nla.success_fraction});
        }
    }
    return t;
}

std::string cost_dataset(const RunParams &p) {
    const NlaParams nla{p.gain_grid.front(), p.n0_list.front()};
    FisherBreakdown b = branch_breakdown(p.r, nla);
    if (p.j_alpha_override) b.j_alpha = *p.j_alpha_override;
    if (p.j_s_override) b.j_s = *p.j_s_override;
    if (p.p_s_override) b.p_s = *p.p_s_override;

    const StrategyRecommendation rec = recommend_strategy(p.cost, b);
    if (!rec.breakeven_y && p.strict) {
        throw NoBreakeven("j_s <= j_alpha: post-selection never becomes cheaper");
    }

    Table t{{"x", "y", "z", "epsilon", "r", "g", "n0", "j_alpha", "j_s", "p_s", "cost_direct",
             "cost_postselect", "breakeven", "breakeven_y", "recommendation"},
            {}};
    t.rows.push_back({p.cost.x, p.cost.y, p.cost.z, p.cost.epsilon, p.r, nla.gain,
                      std::int64_t{nla.n0}, b.j_alpha, b.j_s, b.p_s, rec.cost_direct,
                      rec.cost_postselect, std::string(rec.breakeven_y ? "defined" : "no-breakeven"),
                      rec.breakeven_y ? Cell{*rec.breakeven_y} : Cell{std::string()},
                      std::string(strategy_name(rec.strategy))});
    if (p.format == Format::kCsv) {
        return render_csv(t);
    }
    Json out = table_to_json(t).front();
    if (!rec.breakeven_y) {
        out["breakeven_y"] = nullptr;
    }
    return out.dump(2) + "\n";
}

std::string render_table(const Table &t, Format format) {
    if (format == Format::kCsv) {
        return render_csv(t);
    }
    return table_to_json(t).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// IO

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    f << content;
    f.flush();
    if (!f) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Json parse_json_file(const std::string &path, const std::string &what) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(what, std::string("not valid JSON: ") + e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string default_output(const RunParams &p) {
    return "nlaphase-" + p.command + "." + format_name(p.format);
}

// Maps library and CLI exceptions onto exit codes.
template <typename F>
int guarded(std::ostream &err, F &&body) {
    try {
        return body();
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const InvalidArgument &e) {
        err << "error: invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIoFailure;
    } catch (const NumericalDegeneracy &e) {
        err << "error: numerical degeneracy: " << e.what() << "\n";
        return kExitDegenerate;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

RunParams defaults_for(const std::string &command) {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
        throw ConfigError("command", "unknown command '" + command + "'");
    }
    RunParams p;
    p.command = command;
    if (command == "probabilities" || command == "fisher-sweep") {
        p.gain_grid = default_gain_grid();
        p.n0_list = {1, 2, 3};
    } else if (command == "simulate") {
        p.gain_grid = {1.0, 1.5, 2.0, 3.0};
        p.n0_list = {1, 2, 3};
    } else {
        p.gain_grid = {2.0};
        p.n0_list = {2};
    }
    if (command == "cost") {
        p.format = Format::kJson;
    }
    return p;
}

void apply_config(const Json &config, RunParams &p) {
    if (!config.is_object()) {
        throw ConfigError("config", "expected a JSON object");
    }
    for (const auto &[key, value] : config.items()) {
        if (key == "r") {
            p.r = get_number(value, key);
        } else if (key == "theta_true") {
            p.theta_true = get_number(value, key);
        } else if (key == "gain_grid") {
            if (!value.is_array()) throw ConfigError(key, "expected an array of numbers");
            p.gain_grid.clear();
            for (const auto &g : value) p.gain_grid.push_back(get_number(g, key));
        } else if (key == "n0_list") {
            if (!value.is_array()) throw ConfigError(key, "expected an array of integers");
            p.n0_list.clear();
            for (const auto &n : value) {
                const std::int64_t n0 = get_integer(n, key);
                if (n0 < 1 || n0 > 1000) throw ConfigError(key, "entries must lie in [1, 1000]");
                p.n0_list.push_back(static_cast<int>(n0));
            }
        } else if (key == "m") {
            p.m = get_integer(value, key);
        } else if (key == "runs") {
            p.runs = get_integer(value, key);
        } else if (key == "seed") {
            p.seed = get_seed(value, key);
        } else if (key == "cost") {
            if (!value.is_object()) throw ConfigError(key, "expected an object");
            for (const auto &[ck, cv] : value.items()) {
                const std::string field = "cost." + ck;
                if (ck == "x") p.cost.x = get_number(cv, field);
                else if (ck == "y") p.cost.y = get_number(cv, field);
                else if (ck == "z") p.cost.z = get_number(cv, field);
                else if (ck == "epsilon") p.cost.epsilon = get_number(cv, field);
                else throw ConfigError(field, "unknown key");
            }
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
}

void validate(const RunParams &p) {
    if (!std::isfinite(p.r) || p.r < 0) throw ConfigError("r", "must be finite and >= 0");
    if (!std::isfinite(p.theta_true)) throw ConfigError("theta_true", "must be finite");
    if (p.gain_grid.empty()) throw ConfigError("gain_grid", "must not be empty");
    for (double g : p.gain_grid) {
        if (!std::isfinite(g) || g < 1) throw ConfigError("gain_grid", "gains must be >= 1");
    }
    if (p.n0_list.empty()) throw ConfigError("n0_list", "must not be empty");
    for (int n0 : p.n0_list) {
        if (n0 < 1) throw ConfigError("n0_list", "entries must be >= 1");
    }
    if (is_single_point(p.command)) {
        if (p.gain_grid.size() != 1) {
            throw ConfigError("gain_grid", p.command + " takes exactly one gain");
        }
        if (p.n0_list.size() != 1) {
            throw ConfigError("n0_list", p.command + " takes exactly one n0");
        }
    }
    if (p.m < 1) throw ConfigError("m", "must be >= 1");
    if (p.runs < 1) throw ConfigError("runs", "must be >= 1");
    const std::pair<const char *, double> costs[] = {
        {"cost.x", p.cost.x}, {"cost.y", p.cost.y}, {"cost.z", p.cost.z}};
    for (const auto &[name, v] : costs) {
        if (!std::isfinite(v) || v < 0) throw ConfigError(name, "must be finite and >= 0");
    }
    if (!std::isfinite(p.cost.epsilon) || p.cost.epsilon <= 0) {
        throw ConfigError("cost.epsilon", "must be finite and > 0");
    }
    if (p.j_alpha_override && !(*p.j_alpha_override > 0)) {
        throw ConfigError("j_alpha", "must be > 0");
    }
    if (p.j_s_override && !(*p.j_s_override > 0)) throw ConfigError("j_s", "must be > 0");
    if (p.p_s_override && !(*p.p_s_override > 0 && *p.p_s_override <= 1)) {
        throw ConfigError("p_s", "must lie in (0, 1]");
    }
}

Json params_to_json(const RunParams &p) {
    Json j;
    j["command"] = p.command;
    j["r"] = p.r;
    j["theta_true"] = p.theta_true;
    j["gain_grid"] = p.gain_grid;
    j["n0_list"] = p.n0_list;
    j["m"] = p.m;
    j["runs"] = p.runs;
    j["seed"] = p.seed;
    j["cost"] = {{"x", p.cost.x}, {"y", p.cost.y}, {"z", p.cost.z}, {"epsilon", p.cost.epsilon}};
    auto opt = [](const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); };
    j["j_alpha"] = opt(p.j_alpha_override);
    j["j_s"] = opt(p.j_s_override);
    j["p_s"] = opt(p.p_s_override);
    j["format"] = format_name(p.format);
    j["strict"] = p.strict;
    j["gnuplot_hints"] = p.gnuplot_hints;
    return j;
}

RunParams params_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("command") || !j["command"].is_string()) {
        throw ConfigError("command", "missing");
    }
    RunParams p = defaults_for(j["command"].get<std::string>());
    Json base = Json::object();
    for (const auto &[key, value] : j.items()) {
        if (key == "command") continue;
        if (key == "j_alpha") p.j_alpha_override = get_optional_number(value, key);
        else if (key == "j_s") p.j_s_override = get_optional_number(value, key);
        else if (key == "p_s") p.p_s_override = get_optional_number(value, key);
        else if (key == "format") {
            if (!value.is_string()) throw ConfigError(key, "expected a string");
            p.format = parse_format(value.get<std::string>());
        } else if (key == "strict") p.strict = get_bool(value, key);
        else if (key == "gnuplot_hints") p.gnuplot_hints = get_bool(value, key);
        else base[key] = value;
    }
    apply_config(base, p);
    return p;
}

// ---------------------------------------------------------------------------
// Commands

std::string render_dataset(const RunParams &p, unsigned workers) {
    validate(p);
    if (p.command == "probabilities") return render_table(probabilities_table(p), p.format);
    if (p.command == "fisher-sweep") return render_table(fisher_table(p), p.format);
    if (p.command == "fraction") return fraction_dataset(p);
    if (p.command == "simulate") return render_table(simulate_table(p, workers), p.format);
    if (p.command == "cost") return cost_dataset(p);
    throw ConfigError("command", "unknown command '" + p.command + "'");
}

std::string gnuplot_hints(const RunParams &p) {
    std::ostringstream h;
    h << "# nlaphase " << p.command << " dataset, r = " << format_double(p.r) << "\n";
    if (p.command == "probabilities") {
        h << "x axis: g (column 'g'); one curve per n0\n"
             "y axis: probability; 'p_s' decreases with g, 'p_f' increases, they sum to 1\n";
    } else if (p.command == "fisher-sweep") {
        h << "x axis: g; one curve per n0\n"
             "information per branch: j_s_norm, j_f_norm, j_ideal_norm (= g^2)\n"
             "probability-weighted: ps_js_norm, pf_jf_norm, j_nla_asymptotic_norm\n"
             "normalization: *_norm columns divide by j_alpha = 4 r^2, so no-NLA is 1\n";
    } else if (p.command == "fraction") {
        h << "x axis: fraction (n_s / m), m = " << p.m << "\n"
             "y axis: success_part, failure_part, j_nla (raw) or j_nla_norm (j_alpha = 1)\n"
             "vertical marker: row with most_likely = 1 (n_s = round(m p_s))\n"
             "crossing: row with crossing = 1, first n_s with j_nla > j_alpha;\n"
             "tail_probability on that row is P(n_s' >= n_s)\n";
    } else if (p.command == "simulate") {
        h << "x axis: g; one curve per n0; points precision_nla +- stderr_nla\n"
             "reference: precision_direct (normalized so the bound 4 r^2 is 1)\n"
             "lines: precision_nla_theory at the most likely branch split\n"
             "m = " << p.m << ", runs = " << p.runs << ", theta_true = "
          << format_double(p.theta_true) << "\n";
    } else {
        h << "single-row report: compare cost_direct and cost_postselect;\n"
             "post-selection wins when y exceeds breakeven_y\n";
    }
    return h.str();
}

std::string manifest_path(const std::string &output) {
    return output + ".manifest.json";
}

int execute(const RunParams &params, const std::string &output, unsigned workers,
            std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const std::string data = render_dataset(params, workers);
        if (output == "-") {
            out << data;
            return static_cast<int>(kExitOk);
        }
        write_file(output, data);

        Json manifest;
        manifest["tool"] = "nlaphase";
        manifest["version"] = NLAPHASE_VERSION;
        manifest["command"] = params.command;
        manifest["timestamp"] = utc_timestamp();
        manifest["seed"] = params.seed;
        manifest["workers"] = workers;
        manifest["parameters"] = params_to_json(params);
        Json outputs;
        outputs["data"] = output;
        if (params.gnuplot_hints) {
            const std::string hints = output + ".hints.txt";
            write_file(hints, gnuplot_hints(params));
            outputs["hints"] = hints;
        }
        manifest["outputs"] = outputs;
        write_file(manifest_path(output), manifest.dump(2) + "\n");
        return static_cast<int>(kExitOk);
    });
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Phase estimation of coherent states with a noiseless linear amplifier"};
    app.name("nlaphase");
    app.require_subcommand(1);

    struct Flags {
        std::string config;
        double r = 0, theta_true = 0, x = 0, y = 0, z = 0, epsilon = 0;
        double j_alpha = 0, j_s = 0, p_s = 0;
        std::vector<double> gains;
        std::vector<double> gain_range;
        std::vector<int> n0;
        std::int64_t m = 0, runs = 0;
        std::uint64_t seed = 0;
        std::string output;
        std::string format;
        bool strict = false, hints = false;
        unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    } f;

    struct Bound {
        CLI::App *sub;
        std::map<std::string, CLI::Option *> opts;
    };
    std::vector<Bound> bound;

    const std::map<std::string, std::string> descriptions = {
        {"probabilities", "success/failure probabilities versus gain"},
        {"fisher-sweep", "branch Fisher information versus gain"},
        {"fraction", "conditional information versus the success fraction n_s/m"},
        {"simulate", "Monte Carlo precision of the direct and NLA estimators"},
        {"cost", "cost of direct versus post-selected estimation"},
    };
    for (const std::string &name : kCommands) {
        CLI::App *sub = app.add_subcommand(name, descriptions.at(name));
        Bound b{sub, {}};
        b.opts["config"] = sub->add_option("--config", f.config, "JSON config file");
        b.opts["r"] = sub->add_option("--r", f.r, "coherent amplitude r");
        b.opts["gains"] = sub->add_option("--gains", f.gains, "comma-separated gains")
                              ->delimiter(',');
        b.opts["gain_range"] =
            sub->add_option("--gain-range", f.gain_range, "log-spaced gains: LO,HI,COUNT")
                ->delimiter(',')
                ->expected(3);
        b.opts["n0"] = sub->add_option("--n0", f.n0, "comma-separated n0 values")->delimiter(',');
        b.opts["seed"] = sub->add_option("--seed", f.seed, "master random seed");
        b.opts["output"] = sub->add_option("--output,-o", f.output, "output path, '-' for stdout");
        b.opts["format"] = sub->add_option("--format", f.format, "csv or json")
                               ->check(CLI::IsMember({"csv", "json"}));
        b.opts["hints"] = sub->add_flag("--gnuplot-hints", f.hints, "write plotting notes");
        b.opts["strict"] =
            sub->add_flag("--strict", f.strict, "treat missing crossings/break-evens as errors");
        sub->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
        if (name == "simulate" || name == "fraction") {
            b.opts["m"] = sub->add_option("--m", f.m, "sample size per experiment");
        }
        if (name == "simulate") {
            b.opts["theta_true"] = sub->add_option("--theta-true", f.theta_true, "true phase");
            b.opts["runs"] = sub->add_option("--runs", f.runs, "estimation runs per point");
        }
        if (name == "cost") {
            b.opts["x"] = sub->add_option("--x", f.x, "cost per acquired sample");
            b.opts["y"] = sub->add_option("--y", f.y, "cost per estimator measurement");
            b.opts["z"] = sub->add_option("--z", f.z, "cost per amplification");
            b.opts["epsilon"] = sub->add_option("--epsilon", f.epsilon, "information budget");
            b.opts["j_alpha"] = sub->add_option("--j-alpha", f.j_alpha, "override j_alpha");
            b.opts["j_s"] = sub->add_option("--j-s", f.j_s, "override j_s");
            b.opts["p_s"] = sub->add_option("--p-s", f.p_s, "override p_s");
        }
        bound.push_back(std::move(b));
    }

    std::string replay_manifest;
    std::string replay_output;
    CLI::App *replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("manifest", replay_manifest, "manifest JSON file")->required();
    CLI::Option *replay_out =
        replay->add_option("--output,-o", replay_output, "output path (default: recorded path)");
    replay->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> argv_storage{"nlaphase"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : argv_storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitInvalidConfig);
    }

    if (replay->parsed()) {
        return guarded(err, [&] {
            const Json manifest = parse_json_file(replay_manifest, "manifest");
            if (!manifest.contains("parameters")) {
                throw ConfigError("parameters", "manifest has no parameters");
            }
            const RunParams params = params_from_json(manifest["parameters"]);
            std::string output = replay_output;
            if (!replay_out->count()) {
                if (!manifest.contains("outputs") || !manifest["outputs"].contains("data")) {
                    throw ConfigError("outputs.data", "manifest has no recorded output");
                }
                output = manifest["outputs"]["data"].get<std::string>();
            }
            return execute(params, output, f.workers, out, err);
        });
    }

    for (const Bound &b : bound) {
        if (!b.sub->parsed()) continue;
        const std::string command = b.sub->get_name();
        return guarded(err, [&] {
            RunParams p = defaults_for(command);
            auto given = [&](const std::string &key) {
                const auto it = b.opts.find(key);
                return it != b.opts.end() && it->second->count() > 0;
            };
            if (given("config")) {
                apply_config(parse_json_file(f.config, "config"), p);
            }
            if (given("r")) p.r = f.r;
            if (given("theta_true")) p.theta_true = f.theta_true;
            if (given("gains")) p.gain_grid = f.gains;
            if (given("gain_range")) {
                const double count = f.gain_range[2];
                if (count < 1 || count != std::floor(count)) {
                    throw ConfigError("gain_range", "COUNT must be a positive integer");
                }
                if (!(f.gain_range[0] >= 1) || !(f.gain_range[1] >= f.gain_range[0])) {
                    throw ConfigError("gain_range", "need 1 <= LO <= HI");
                }
                p.gain_grid = log_spaced(f.gain_range[0], f.gain_range[1], static_cast<int>(count));
            }
            if (given("n0")) p.n0_list = f.n0;
            if (given("m")) p.m = f.m;
            if (given("runs")) p.runs = f.runs;
            if (given("seed")) p.seed = f.seed;
            if (given("x")) p.cost.x = f.x;
            if (given("y")) p.cost.y = f.y;
            if (given("z")) p.cost.z = f.z;
            if (given("epsilon")) p.cost.epsilon = f.epsilon;
            if (given("j_alpha")) p.j_alpha_override = f.j_alpha;
            if (given("j_s")) p.j_s_override = f.j_s;
            if (given("p_s")) p.p_s_override = f.p_s;
            if (given("format")) p.format = parse_format(f.format);
            p.strict = f.strict;
            p.gnuplot_hints = f.hints;
            const std::string output = given("output") ? f.output : default_output(p);
            return execute(p, output, f.workers, out, err);
        });
    }
    return kExitInvalidConfig;
}

}  // namespace nlaphase::cli
