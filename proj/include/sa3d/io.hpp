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

// CSV and metadata writers. CSV layout: `# key: value` metadata lines, one
// header row, then data rows.
#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "experiments.hpp"
#include "hilbert.hpp"
#include "pulses.hpp"

namespace sa3d {

inline constexpr std::string_view kVersion = "0.1.0";

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

namespace csv {

inline const std::vector<std::string>& basis_header() {
    static const std::vector<std::string> h{"index", "atomA", "atomB", "cavA", "fiber", "cavB"};
    return h;
}

inline const std::vector<std::string>& pulses_header() {
    static const std::vector<std::string> h{"t",          "omega1",     "omega2",     "omega1_cd", "omega2_cd", "omega1_mod",
                                            "omega2_mod", "omega1_fit", "omega2_fit", "theta0",    "theta1"};
    return h;
}

inline std::vector<std::string> trajectory_header() {
    std::vector<std::string> h{"t"};
    for (int i = 0; i < 18; ++i) h.push_back("p" + std::to_string(i));
    h.emplace_back("fidelity");
    h.emplace_back("norm_or_trace");
    return h;
}

inline std::string format(double x) {
    if (std::isnan(x)) return "nan";
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

inline void write_header(std::ostream& os, const Metadata& meta, const std::vector<std::string>& header) {
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
}

inline void write_row(std::ostream& os, const std::vector<double>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format(row[i]);
    os << '\n';
}

}  // namespace csv

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path);
    if (!f) throw io_error("cannot open " + path.string() + " for writing");
    return f;
}

inline void write_basis_csv(std::ostream& os) {
    const StateSpace s;
    csv::write_header(os, {}, csv::basis_header());
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        const auto& b = s[i];
        os << i << ',' << to_string(b.atom_a) << ',' << to_string(b.atom_b) << ',' << to_string(b.cav_a) << ','
           << to_string(b.fiber) << ',' << to_string(b.cav_b) << '\n';
    }
}

/// Pulse profiles on a uniform grid; the "fit" columns are the tabulated
/// Gaussian refits.
inline void write_pulses_csv(std::ostream& os, const StirapParams& p, int n, const Metadata& meta = {}) {
    if (n < 2) throw invalid_input("pulse grid needs at least 2 points");
    const PulseSet set(Scheme::STA, p);
    const auto [fit1, fit2] = tabulated_fitted_pulses(p.tf);
    csv::write_header(os, meta, csv::pulses_header());
    for (int i = 0; i < n; ++i) {
        const double t = p.tf * i / (n - 1);
        const PulsePair base = set.stirap(t), cd = set.correction(t), mod = set.modified(t);
        const FrameAngles a = superadiabatic_angle(set.base(), t);
        csv::write_row(os, {t, base.omega1, base.omega2, cd.omega1, cd.omega2, mod.omega1, mod.omega2, fit1(t),
                            fit2(t), a.theta0, a.theta1});
    }
}

/// One row per sample: t, 18 populations, F(t), norm (pure) or trace (open).
inline void write_trajectory_csv(std::ostream& os, const SimResult& r, const Metadata& meta = {}) {
    csv::write_header(os, meta, csv::trajectory_header());
    for (std::size_t k = 0; k < r.samples(); ++k) {
        std::vector<double> row{r.times[k]};
        const auto pops = r.populations.row(static_cast<Eigen::Index>(k));
        for (Eigen::Index i = 0; i < pops.size(); ++i) row.push_back(pops(i));
        row.push_back(r.fidelity_trace.empty() ? std::nan("") : r.fidelity_trace[k]);
        // sum of populations equals the squared norm (pure) or the trace (open)
        row.push_back(r.open_system ? pops.sum() : std::sqrt(pops.sum()));
        csv::write_row(os, row);
    }
}

inline std::vector<std::string> sweep_header(const SweepResult& r) {
    return {std::string(to_string(r.axis1.param)), std::string(to_string(r.axis2.param)), "fidelity"};
}

/// Long format: one row per cell.
inline void write_sweep_csv(std::ostream& os, const SweepResult& r, const Metadata& meta = {}) {
    csv::write_header(os, meta, sweep_header(r));
    for (int i = 0; i < r.axis1.n; ++i)
        for (int j = 0; j < r.axis2.n; ++j) csv::write_row(os, {r.axis1.value(i), r.axis2.value(j), r.grid(i, j)});
}

inline std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline nlohmann::json to_json(const IntegratorConfig& c) {
    return {{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}, {"max_step", c.max_step}, {"output_grid", c.output_grid}};
}

inline nlohmann::json to_json(const ProtocolPoint& p) {
    nlohmann::json j{{"g", p.g}, {"omega0", p.omega0}, {"t0", p.t0}, {"tc", p.tc}, {"tf", 1.0}};
    if (p.gamma_over_g) j["gamma_over_g"] = *p.gamma_over_g;
    if (p.kappa_over_g) j["kappa_over_g"] = *p.kappa_over_g;
    nlohmann::json dev = nlohmann::json::object();
    for (const auto& [k, v] : p.deviations) dev[std::string(to_string(k))] = v;
    j["deviations"] = dev;
    return j;
}

inline nlohmann::json to_json(const SimResult& r) {
    nlohmann::json j{{"final_fidelity", r.final_fidelity}, {"open_system", r.open_system}, {"samples", r.samples()}};
    if (r.open_system) {
        j["max_trace_drift"] = r.max_trace_drift;
        j["min_eigenvalue"] = r.min_eigenvalue;
    } else {
        j["max_norm_drift"] = r.max_norm_drift;
    }
    return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto f = open_output(path);
    f << j.dump(2) << '\n';
    if (!f) throw io_error("failed writing " + path.string());
}

/// Base metadata for every experiment output.
inline nlohmann::json run_metadata(std::string_view experiment, std::string_view scheme) {
    return {{"experiment", experiment}, {"scheme", scheme}, {"version", kVersion}, {"timestamp", timestamp_utc()}};
}

}  // namespace sa3d
