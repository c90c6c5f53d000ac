// Copyright 2026 The sa3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration: flat `key = value` files overridden by command-line flags.
#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "experiments.hpp"
#include "pulses.hpp"

namespace sa3d {

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 8> kExperiments{"pulses",           "evolve",           "scan-g-omega0",
                                                              "scan-deviations",  "scan-decoherence", "speedup",
                                                              "rb-point",         "validate"};

struct RunConfig {
    std::string experiment;
    Scheme scheme = Scheme::STA;

    // protocol, t_f = 1 units
    double omega0 = 8.0;
    double g = 70.0;
    double t0 = 0.18;
    double tc = 0.24;
    std::optional<double> gamma;  // gamma / g
    std::optional<double> kappa;  // kappa / g
    std::map<ParamId, double> deviations;

    // integration and output
    int grid = 2001;
    double rel_tol = 1e-9;
    double abs_tol = 1e-9;
    unsigned workers = 1;
    std::string out = "out";
    bool check = false;
    double threshold = 0.993;

    // sweeps; n = 0 picks the experiment's default grid size
    int n = 0;
    double g_min = 10.0;
    double g_max = 100.0;
    double omega0_min = 2.0;
    double omega0_max = 14.0;
    std::vector<ParamPair> pairs = default_deviation_pairs();
    double range = 0.1;
    double kappa_max = 0.02;
    double gamma_max = 0.02;

    // speedup
    double target_f = 0.98;
    double omega0_scale = 8.0 / 70.0;

    // rb-point: "g" or "g_a"
    std::string coupling = "g";

    // validate
    int samples = 200;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    ProtocolPoint point() const {
        ProtocolPoint p;
        p.g = g;
        p.omega0 = omega0;
        p.t0 = t0;
        p.tc = tc;
        p.gamma_over_g = gamma;
        p.kappa_over_g = kappa;
        p.deviations = deviations;
        return p;
    }

    IntegratorConfig integrator() const {
        IntegratorConfig c;
        c.rel_tol = rel_tol;
        c.abs_tol = abs_tol;
        c.output_grid = grid;
        return c;
    }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto piece = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (!piece.empty()) out.push_back(piece);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double to_double(const std::string& key, const std::string& v) {
    double x = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || ptr != end) throw usage_error("cannot parse '" + v + "' as a number for " + key);
    return x;
}

inline long to_int(const std::string& key, const std::string& v) {
    long x = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || ptr != end) throw usage_error("cannot parse '" + v + "' as an integer for " + key);
    return x;
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw usage_error("cannot parse '" + v + "' as a boolean for " + key);
}

inline ParamId to_param(const std::string& s) {
    if (auto p = parse_param(s)) return *p;
    std::string valid;
    for (ParamId p : kAllParams) valid += (valid.empty() ? "" : ", ") + std::string(to_string(p));
    throw usage_error("unknown parameter '" + s + "' (valid: " + valid + ")");
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace config_detail

inline std::string valid_schemes() { return "STIRAP, STA, STA_FITTED"; }

/// Applies one key/value pair; throws usage_error on unknown keys or bad values.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
    using namespace config_detail;
    const std::string v = trim(raw);
    if (key == "experiment") {
        if (v.empty()) {
            c.experiment.clear();
            return;
        }
        if (std::find(kExperiments.begin(), kExperiments.end(), v) == kExperiments.end())
            throw usage_error("unknown experiment '" + v + "'");
        c.experiment = v;
    } else if (key == "scheme") {
        auto s = parse_scheme(v);
        if (!s) throw usage_error("unknown scheme '" + v + "' (valid: " + valid_schemes() + ")");
        c.scheme = *s;
    } else if (key == "omega0") {
        c.omega0 = to_double(key, v);
    } else if (key == "g") {
        c.g = to_double(key, v);
    } else if (key == "t0") {
        c.t0 = to_double(key, v);
    } else if (key == "tc") {
        c.tc = to_double(key, v);
    } else if (key == "gamma") {
        c.gamma = to_double(key, v);
    } else if (key == "kappa") {
        c.kappa = to_double(key, v);
    } else if (key == "deviations") {
        c.deviations.clear();
        for (const auto& item : split(v, ',')) {
            const auto kv = split(item, '=');
            if (kv.size() != 2) throw usage_error("deviation entries look like name=offset, got '" + item + "'");
            c.deviations[to_param(kv[0])] = to_double(key, kv[1]);
        }
    } else if (key == "grid") {
        c.grid = static_cast<int>(to_int(key, v));
    } else if (key == "tol") {
        c.rel_tol = c.abs_tol = to_double(key, v);
    } else if (key == "rel_tol") {
        c.rel_tol = to_double(key, v);
    } else if (key == "abs_tol") {
        c.abs_tol = to_double(key, v);
    } else if (key == "workers") {
        const long w = to_int(key, v);
        if (w < 1) throw usage_error("workers must be at least 1");
        c.workers = static_cast<unsigned>(w);
    } else if (key == "out") {
        c.out = v;
    } else if (key == "check") {
        c.check = to_bool(key, v);
    } else if (key == "threshold") {
        c.threshold = to_double(key, v);
    } else if (key == "n") {
        c.n = static_cast<int>(to_int(key, v));
    } else if (key == "g_min") {
        c.g_min = to_double(key, v);
    } else if (key == "g_max") {
        c.g_max = to_double(key, v);
    } else if (key == "omega0_min") {
        c.omega0_min = to_double(key, v);
    } else if (key == "omega0_max") {
        c.omega0_max = to_double(key, v);
    } else if (key == "pairs") {
        c.pairs.clear();
        for (const auto& item : split(v, ',')) {
            const auto ab = split(item, ':');
            if (ab.size() != 2) throw usage_error("pairs look like a:b, got '" + item + "'");
            c.pairs.emplace_back(to_param(ab[0]), to_param(ab[1]));
        }
    } else if (key == "range") {
        c.range = to_double(key, v);
    } else if (key == "kappa_max") {
        c.kappa_max = to_double(key, v);
    } else if (key == "gamma_max") {
        c.gamma_max = to_double(key, v);
    } else if (key == "target_f") {
        c.target_f = to_double(key, v);
    } else if (key == "omega0_scale") {
        c.omega0_scale = to_double(key, v);
    } else if (key == "coupling") {
        if (v != "g" && v != "g_a") throw usage_error("coupling must be g or g_a");
        c.coupling = v;
    } else if (key == "samples") {
        c.samples = static_cast<int>(to_int(key, v));
    } else {
        throw usage_error("unknown key '" + key + "'");
    }
}

/// Parses `key = value` lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_text(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = config_detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw usage_error("line " + std::to_string(lineno) + ": expected key = value");
        kv[config_detail::trim(t.substr(0, eq))] = config_detail::trim(t.substr(eq + 1));
    }
    return kv;
}

inline RunConfig config_from_text(std::string_view text) {
    RunConfig c;
    for (const auto& [k, v] : parse_config_text(text)) apply_setting(c, k, v);
    return c;
}

inline std::string serialize(const RunConfig& c) {
    using config_detail::fmt;
    std::ostringstream os;
    os << "experiment = " << c.experiment << '\n';
    os << "scheme = " << to_string(c.scheme) << '\n';
    os << "omega0 = " << fmt(c.omega0) << '\n';
    os << "g = " << fmt(c.g) << '\n';
    os << "t0 = " << fmt(c.t0) << '\n';
    os << "tc = " << fmt(c.tc) << '\n';
    if (c.gamma) os << "gamma = " << fmt(*c.gamma) << '\n';
    if (c.kappa) os << "kappa = " << fmt(*c.kappa) << '\n';
    os << "deviations = ";
    bool first = true;
    for (const auto& [p, x] : c.deviations) {
        os << (first ? "" : ",") << to_string(p) << '=' << fmt(x);
        first = false;
    }
    os << '\n';
    os << "grid = " << c.grid << '\n';
    os << "rel_tol = " << fmt(c.rel_tol) << '\n';
    os << "abs_tol = " << fmt(c.abs_tol) << '\n';
    os << "workers = " << c.workers << '\n';
    os << "out = " << c.out << '\n';
    os << "check = " << (c.check ? "true" : "false") << '\n';
    os << "threshold = " << fmt(c.threshold) << '\n';
    os << "n = " << c.n << '\n';
    os << "g_min = " << fmt(c.g_min) << '\n';
    os << "g_max = " << fmt(c.g_max) << '\n';
    os << "omega0_min = " << fmt(c.omega0_min) << '\n';
    os << "omega0_max = " << fmt(c.omega0_max) << '\n';
    os << "pairs = ";
    first = true;
    for (const auto& [a, b] : c.pairs) {
        os << (first ? "" : ",") << to_string(a) << ':' << to_string(b);
        first = false;
    }
    os << '\n';
    os << "range = " << fmt(c.range) << '\n';
    os << "kappa_max = " << fmt(c.kappa_max) << '\n';
    os << "gamma_max = " << fmt(c.gamma_max) << '\n';
    os << "target_f = " << fmt(c.target_f) << '\n';
    os << "omega0_scale = " << fmt(c.omega0_scale) << '\n';
    os << "coupling = " << c.coupling << '\n';
    os << "samples = " << c.samples << '\n';
    return os.str();
}

/// Command line: `<experiment> [--config FILE] [--key value ...]`. Flag values
/// take precedence over the file.
inline RunConfig parse_config(int argc, const char* const* argv) {
    CLI::App app{"Superadiabatic two-atom 3D entanglement simulator"};
    app.set_help_flag();  // help is handled by the caller

    std::string experiment, config_file;
    app.add_option("experiment", experiment, "one of: pulses, evolve, scan-g-omega0, scan-deviations, "
                                             "scan-decoherence, speedup, rb-point, validate");
    app.add_option("--config", config_file, "flat key = value configuration file");

    // flag name -> config key
    const std::vector<std::pair<std::string, std::string>> flags{
        {"--scheme", "scheme"},         {"--omega0", "omega0"},       {"--g", "g"},
        {"--t0", "t0"},                 {"--tc", "tc"},               {"--gamma", "gamma"},
        {"--kappa", "kappa"},           {"--deviations", "deviations"}, {"--grid", "grid"},
        {"--tol", "tol"},               {"--rel-tol", "rel_tol"},     {"--abs-tol", "abs_tol"},
        {"--workers", "workers"},       {"--out", "out"},             {"--threshold", "threshold"},
        {"--n", "n"},                   {"--g-min", "g_min"},         {"--g-max", "g_max"},
        {"--omega0-min", "omega0_min"}, {"--omega0-max", "omega0_max"}, {"--pairs", "pairs"},
        {"--range", "range"},           {"--kappa-max", "kappa_max"}, {"--gamma-max", "gamma_max"},
        {"--target-f", "target_f"},     {"--omega0-scale", "omega0_scale"}, {"--coupling", "coupling"},
        {"--samples", "samples"},
    };
    std::vector<std::string> values(flags.size());
    for (std::size_t i = 0; i < flags.size(); ++i) app.add_option(flags[i].first, values[i]);
    bool check = false;
    app.add_flag("--check", check, "exit nonzero when the experiment's acceptance threshold is missed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }

    RunConfig c;
    if (!config_file.empty()) {
        std::ifstream f(config_file);
        if (!f) throw usage_error("cannot read config file " + config_file);
        std::stringstream ss;
        ss << f.rdbuf();
        c = config_from_text(ss.str());
    }
    if (!experiment.empty()) {
        if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end())
            throw usage_error("unknown experiment '" + experiment + "'");
        if (!c.experiment.empty() && c.experiment != experiment)
            throw usage_error("conflicting experiments: '" + c.experiment + "' in config, '" + experiment + "' on command line");
        c.experiment = experiment;
    }
    if (c.experiment.empty()) throw usage_error("no experiment given");
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (app.get_option(flags[i].first)->count() > 0) apply_setting(c, flags[i].second, values[i]);
    }
    if (check) c.check = true;
    return c;
}

}  // namespace sa3d
