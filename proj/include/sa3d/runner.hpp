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

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <ostream>
#include <string>

#include "config.hpp"
#include "experiments.hpp"
#include "io.hpp"

namespace sa3d {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitIntegration = 3,
    kExitCheckFailed = 4,
    kExitIo = 5,
};

namespace runner_detail {

namespace fs = std::filesystem;

inline std::string stem(const RunConfig& c, std::string_view scheme) { return c.experiment + "_" + std::string(scheme); }

inline Metadata csv_meta(const RunConfig& c, std::string_view scheme) {
    return {{"experiment", c.experiment}, {"scheme", std::string(scheme)}, {"version", std::string(kVersion)}};
}

inline nlohmann::json base_json(const RunConfig& c, std::string_view scheme) {
    nlohmann::json j = run_metadata(c.experiment, scheme);
    j["protocol"] = to_json(c.point());
    j["integrator"] = to_json(c.integrator());
    j["workers"] = c.workers;
    return j;
}

inline int report(std::ostream& log, bool ok, const std::string& what) {
    log << (ok ? "check passed: " : "check FAILED: ") << what << '\n';
    return ok ? kExitOk : kExitCheckFailed;
}

inline int run_pulses(const RunConfig& c, std::ostream& log) {
    const fs::path dir(c.out);
    const StirapParams p{c.omega0, c.t0, c.tc, 1.0};
    const int n = c.grid;
    {
        auto f = open_output(dir / (stem(c, "STA") + ".csv"));
        write_pulses_csv(f, p, n, csv_meta(c, "STA"));
    }
    const double theta_final = superadiabatic_angle(StirapPulses(p), 1.0).theta0;
    auto j = base_json(c, "STA");
    j["theta0_final"] = theta_final;
    write_json(dir / (stem(c, "STA") + ".json"), j);
    log << "theta0(tf) = " << theta_final << '\n';
    if (!c.check) return kExitOk;
    return report(log, std::abs(theta_final + std::atan(std::numbers::sqrt2)) <= 2e-3, "theta0(tf) = -atan(sqrt2) within 2e-3");
}

inline int run_evolve(const RunConfig& c, std::ostream& log) {
    const fs::path dir(c.out);
    const std::string scheme(to_string(c.scheme));
    const SimResult r = run_point(c.scheme, c.point(), c.integrator());
    {
        auto f = open_output(dir / (stem(c, scheme) + ".csv"));
        write_trajectory_csv(f, r, csv_meta(c, scheme));
        auto b = open_output(dir / "basis.csv");
        write_basis_csv(b);
    }
    auto j = base_json(c, scheme);
    j["result"] = to_json(r);
    write_json(dir / (stem(c, scheme) + ".json"), j);
    log << "F(tf) = " << r.final_fidelity << '\n';
    if (!c.check) return kExitOk;
    return report(log, r.final_fidelity >= c.threshold, "F(tf) >= " + csv::format(c.threshold));
}

inline void write_sweep(const RunConfig& c, const SweepResult& r, const std::string& scheme) {
    const fs::path dir(c.out);
    auto f = open_output(dir / (stem(c, scheme) + ".csv"));
    write_sweep_csv(f, r, csv_meta(c, scheme));
    auto j = base_json(c, scheme);
    j["integrator"] = to_json(r.cfg);
    j["axes"] = {{"axis1", {to_string(r.axis1.param), r.axis1.min, r.axis1.max, r.axis1.n}},
                 {"axis2", {to_string(r.axis2.param), r.axis2.min, r.axis2.max, r.axis2.n}}};
    j["failed_cells"] = r.failed_cells;
    j["min_fidelity"] = r.min();
    j["max_fidelity"] = r.max();
    write_json(dir / (stem(c, scheme) + ".json"), j);
}

inline int run_scan_g_omega0(const RunConfig& c, std::ostream& log) {
    SweepSpec s = default_g_omega0_spec(c.scheme);
    const int n = c.n > 0 ? c.n : 40;
    s.axis1 = {ParamId::g, c.g_min, c.g_max, n};
    s.axis2 = {ParamId::omega0, c.omega0_min, c.omega0_max, n};
    s.base = c.point();
    s.cfg = c.integrator();
    s.cfg.output_grid = 2;
    s.workers = c.workers;
    const SweepResult r = scan_g_omega0(s);
    write_sweep(c, r, std::string(to_string(c.scheme)));
    log << "F range [" << r.min() << ", " << r.max() << "], failed cells: " << r.failed_cells << '\n';
    return kExitOk;
}

inline int run_scan_deviations(const RunConfig& c, std::ostream& log) {
    IntegratorConfig cfg = c.integrator();
    cfg.output_grid = 2;
    const int n = c.n > 0 ? c.n : 11;
    const auto results = scan_deviations(c.pairs, c.range, n, c.point(), c.scheme, cfg, c.workers);
    const std::string scheme(to_string(c.scheme));
    const fs::path dir(c.out);
    auto f = open_output(dir / (stem(c, scheme) + ".csv"));
    csv::write_header(f, csv_meta(c, scheme), {"param1", "param2", "delta1", "delta2", "fidelity"});
    auto j = base_json(c, scheme);
    j["integrator"] = to_json(cfg);
    j["pairs"] = nlohmann::json::array();
    for (const auto& r : results) {
        for (int a = 0; a < r.axis1.n; ++a)
            for (int b = 0; b < r.axis2.n; ++b)
                f << to_string(r.axis1.param) << ',' << to_string(r.axis2.param) << ',' << csv::format(r.axis1.value(a))
                  << ',' << csv::format(r.axis2.value(b)) << ',' << csv::format(r.grid(a, b)) << '\n';
        j["pairs"].push_back({{"param1", to_string(r.axis1.param)},
                              {"param2", to_string(r.axis2.param)},
                              {"min_fidelity", r.min()},
                              {"spread", r.spread()},
                              {"failed_cells", r.failed_cells}});
        log << to_string(r.axis1.param) << "/" << to_string(r.axis2.param) << ": min F = " << r.min()
            << ", spread = " << r.spread() << '\n';
    }
    write_json(dir / (stem(c, scheme) + ".json"), j);
    return kExitOk;
}

inline int run_scan_decoherence(const RunConfig& c, std::ostream& log) {
    IntegratorConfig cfg = c.integrator();
    cfg.output_grid = 2;
    const int n = c.n > 0 ? c.n : 21;
    const SweepResult r = scan_decoherence(c.kappa_max, c.gamma_max, n, c.point(), cfg, c.workers, c.scheme);
    write_sweep(c, r, std::string(to_string(c.scheme)));
    log << "F range [" << r.min() << ", " << r.max() << "], failed cells: " << r.failed_cells << '\n';
    return kExitOk;
}

inline int run_speedup(const RunConfig& c, std::ostream& log) {
    SpeedupOptions opt;
    opt.cfg = c.integrator();
    opt.cfg.output_grid = 2;
    const SpeedupResult r = speedup_ratio(c.target_f, c.omega0_scale, opt);
    const fs::path dir(c.out);
    {
        auto f = open_output(dir / (stem(c, "STA-STIRAP") + ".csv"));
        csv::write_header(f, csv_meta(c, "STA-STIRAP"), {"target_f", "omega0_over_g", "gtf_sta", "gtf_stirap", "ratio"});
        csv::write_row(f, {r.target_fidelity, r.omega0_over_g, r.sta.g_tf, r.stirap.g_tf, r.ratio});
    }
    auto j = base_json(c, "STA-STIRAP");
    j["integrator"] = to_json(opt.cfg);
    j["gtf_sta"] = r.sta.g_tf;
    j["gtf_stirap"] = r.stirap.g_tf;
    j["evaluations"] = r.sta.evaluations + r.stirap.evaluations;
    j["ratio"] = r.ratio;
    write_json(dir / (stem(c, "STA-STIRAP") + ".json"), j);
    log << "g*tf STA = " << r.sta.g_tf << ", STIRAP = " << r.stirap.g_tf << ", duration ratio = " << r.ratio << '\n';
    if (!c.check) return kExitOk;
    return report(log, r.ratio >= 1.0 / 8.0 && r.ratio <= 1.0 / 3.0, "duration ratio in [1/8, 1/3]");
}

inline int run_rb_point(const RunConfig& c, std::ostream& log) {
    const RbCoupling coupling = c.coupling == "g_a" ? RbCoupling::lambda_is_g_a : RbCoupling::lambda_is_g;
    const RbResult r = rb_operating_point(coupling, c.integrator());
    const fs::path dir(c.out);
    {
        auto f = open_output(dir / (stem(c, "STA") + ".csv"));
        write_trajectory_csv(f, r.result, csv_meta(c, "STA"));
    }
    auto j = base_json(c, "STA");
    j["coupling"] = c.coupling;
    j["g_rad_per_s"] = r.g_rad_per_s;
    j["tf_seconds"] = r.tf_seconds;
    j["kappa_over_g"] = r.kappa_over_g;
    j["gamma_over_g"] = r.gamma_over_g;
    j["result"] = to_json(r.result);
    write_json(dir / (stem(c, "STA") + ".json"), j);
    log << "kappa/g = " << r.kappa_over_g << ", gamma/g = " << r.gamma_over_g << ", F(tf) = " << r.result.final_fidelity
        << '\n';
    if (!c.check) return kExitOk;
    return report(log, std::abs(r.result.final_fidelity - 0.9993) <= 0.002, "F(tf) = 0.9993 +- 0.002");
}

inline int run_validate(const RunConfig& c, std::ostream& log) {
    const FrameReport r = validate_frames(c.samples, StirapParams{c.omega0, c.t0, c.tc, 1.0});
    nlohmann::json j = base_json(c, "STA");
    j["samples"] = r.samples;
    j["skipped"] = r.skipped;
    j["max_dev_h1"] = r.max_dev_h1;
    j["max_dev_cd1"] = r.max_dev_cd1;
    j["max_dev_cd2"] = r.max_dev_cd2;
    j["max_cd2_end_coupling"] = r.max_cd2_end_coupling;
    write_json(fs::path(c.out) / (stem(c, "STA") + ".json"), j);
    log << "max deviation: H1 " << r.max_dev_h1 << ", CD1 " << r.max_dev_cd1 << ", CD2 " << r.max_dev_cd2 << '\n';
    return report(log, r.max_deviation() <= 1e-5 && r.max_cd2_end_coupling == 0.0, "frame identities within 1e-5");
}

}  // namespace runner_detail

/// Executes the configured experiment and returns the process exit code.
inline int run(const RunConfig& c, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
    using namespace runner_detail;
    try {
        if (c.experiment == "pulses") return run_pulses(c, log);
        if (c.experiment == "evolve") return run_evolve(c, log);
        if (c.experiment == "scan-g-omega0") return run_scan_g_omega0(c, log);
        if (c.experiment == "scan-deviations") return run_scan_deviations(c, log);
        if (c.experiment == "scan-decoherence") return run_scan_decoherence(c, log);
        if (c.experiment == "speedup") return run_speedup(c, log);
        if (c.experiment == "rb-point") return run_rb_point(c, log);
        if (c.experiment == "validate") return run_validate(c, log);
        err << "unknown experiment '" << c.experiment << "'\n";
        return kExitUsage;
    } catch (const io_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const integration_failure& e) {
        err << e.what() << '\n';
        return kExitIntegration;
    } catch (const bracket_exhausted& e) {
        err << e.what() << '\n';
        return kExitIntegration;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace sa3d
