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

// Scenario runners: single protocols, fidelity landscapes, robustness and
// decoherence scans, the STIRAP/STA duration ratio, the Rb operating point and
// the frame-identity checks.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "hilbert.hpp"
#include "model.hpp"
#include "pulses.hpp"
#include "sweep.hpp"

namespace sa3d {

/// Absolute decay rates in the same units as the couplings.
struct Decoherence {
    double gamma = 0.0;
    double kappa = 0.0;
};

/// End-to-end run from |phi_1>: pulses per scheme, lifted to the 18-state
/// Hamiltonian, integrated closed or open. `window` overrides the integration
/// end time (pulses keep their own tf).
inline SimResult run_protocol(const PulseSet& pulses, const ModelParams& params, const std::optional<Decoherence>& deco,
                              const IntegratorConfig& cfg = {}, std::optional<double> window = {}) {
    params.validate();
    const StateSpace space;
    const double tf = window.value_or(pulses.base().params().tf);
    const HamiltonianFn h = [&](double t) {
        const PulsePair d = pulses.drives(t);
        return full_hamiltonian(params, d.omega1, d.omega2).entries;
    };
    const StateVector psi0 = phi(space, 1);
    const StateVector target = target_state(space);
    if (!deco) return evolve_pure(h, psi0, tf, cfg, target);
    const auto channels = lindblad_channels(params, deco->gamma, deco->kappa);
    return evolve_lindblad(h, channels, projector(psi0), tf, cfg, target);
}

inline SimResult run_protocol(Scheme scheme, const ModelParams& params, const StirapParams& pulse_params,
                              const std::optional<Decoherence>& deco, const IntegratorConfig& cfg = {}) {
    return run_protocol(PulseSet(scheme, pulse_params), params, deco, cfg);
}

/// Three-level evolution under the effective Hamiltonian driven by the
/// scheme's effective pulses, from |phi_1>. Target is (|phi_1> + sqrt2|psi_5>)/sqrt3.
inline SimResult run_effective(const PulseSet& pulses, const IntegratorConfig& cfg = {}) {
    const HamiltonianFn h = [&](double t) {
        const PulsePair e = pulses.effective(t);
        return Eigen::MatrixXcd(effective_hamiltonian(e.omega1, e.omega2));
    };
    StateVector psi0 = StateVector::Zero(3);
    psi0(eff::kPhi1) = 1.0;
    StateVector target = StateVector::Zero(3);
    target(eff::kPhi1) = 1.0 / kSqrt3;
    target(eff::kPsi5) = kSqrt2 / kSqrt3;
    return evolve_pure(h, psi0, pulses.base().params().tf, cfg, target);
}

// ---------------------------------------------------------------------------
// Parameter points and sweeps

enum class ParamId { omega0, t0, tc, g, v, g_a, g_b, gamma, kappa, T };

inline constexpr std::array kAllParams{ParamId::omega0, ParamId::t0,    ParamId::tc,    ParamId::g, ParamId::v,
                                       ParamId::g_a,    ParamId::g_b,   ParamId::gamma, ParamId::kappa, ParamId::T};

constexpr std::string_view to_string(ParamId p) {
    switch (p) {
        case ParamId::omega0: return "omega0";
        case ParamId::t0: return "t0";
        case ParamId::tc: return "tc";
        case ParamId::g: return "g";
        case ParamId::v: return "v";
        case ParamId::g_a: return "g_a";
        case ParamId::g_b: return "g_b";
        case ParamId::gamma: return "gamma";
        case ParamId::kappa: return "kappa";
        case ParamId::T: return "T";
    }
    return "?";
}

inline std::optional<ParamId> parse_param(std::string_view s) {
    for (ParamId p : kAllParams) {
        if (to_string(p) == s) return p;
    }
    return std::nullopt;
}

/// A protocol in units of t_f = 1. Pulse timings are fractions of t_f, decay
/// rates are ratios to g. `deviations` holds fractional offsets dx/x.
///
/// Offsets on couplings (g, g_a, g_b, v) and rates change the physical
/// system only. Offsets on pulse parameters (omega0, t0, tc) feed the pulse
/// synthesizer, i.e. the whole modified waveform is built from the actual
/// value. An offset on T stretches the integration window while the pulses
/// keep the nominal t_f.
struct ProtocolPoint {
    double g = 70.0;
    double omega0 = 8.0;
    double t0 = 0.18;
    double tc = 0.24;
    std::optional<double> gamma_over_g;
    std::optional<double> kappa_over_g;
    std::map<ParamId, double> deviations;

    double dev(ParamId p) const {
        auto it = deviations.find(p);
        return it == deviations.end() ? 0.0 : it->second;
    }

    StirapParams pulse_params() const {
        StirapParams p{omega0 * (1 + dev(ParamId::omega0)), t0 * (1 + dev(ParamId::t0)), tc * (1 + dev(ParamId::tc)),
                       1.0};
        p.validate();
        return p;
    }

    ModelParams model_params() const {
        const double gg = g * (1 + dev(ParamId::g));
        ModelParams m{gg / kSqrt2 * (1 + dev(ParamId::g_a)), gg * (1 + dev(ParamId::g_b)), g * (1 + dev(ParamId::v)), g,
                      1.0};
        m.validate();
        return m;
    }

    std::optional<Decoherence> decoherence() const {
        if (!gamma_over_g && !kappa_over_g) return std::nullopt;
        return Decoherence{gamma_over_g.value_or(0.0) * g * (1 + dev(ParamId::gamma)),
                           kappa_over_g.value_or(0.0) * g * (1 + dev(ParamId::kappa))};
    }

    double window() const { return 1.0 + dev(ParamId::T); }

    /// Sets the nominal value of a parameter (sweep "absolute" mode).
    void set(ParamId p, double value) {
        switch (p) {
            case ParamId::omega0: omega0 = value; break;
            case ParamId::t0: t0 = value; break;
            case ParamId::tc: tc = value; break;
            case ParamId::g: g = value; break;
            case ParamId::gamma: gamma_over_g = value; break;
            case ParamId::kappa: kappa_over_g = value; break;
            case ParamId::T: deviations[ParamId::T] = value - 1.0; break;
            case ParamId::v:
            case ParamId::g_a:
            case ParamId::g_b:
                // These only exist relative to the reference g.
                deviations[p] = value - 1.0;
                break;
        }
    }
};

inline SimResult run_point(Scheme scheme, const ProtocolPoint& point, const IntegratorConfig& cfg = {}) {
    const PulseSet pulses(scheme, point.pulse_params());
    return run_protocol(pulses, point.model_params(), point.decoherence(), cfg, point.window());
}

struct Axis {
    ParamId param = ParamId::g;
    double min = 0.0;
    double max = 1.0;
    int n = 2;

    double value(int i) const { return n == 1 ? min : min + (max - min) * i / (n - 1); }
    std::vector<double> values() const {
        std::vector<double> v;
        for (int i = 0; i < n; ++i) v.push_back(value(i));
        return v;
    }
};

enum class AxisMode { absolute, deviation };

struct SweepSpec {
    Axis axis1;
    Axis axis2;
    Scheme scheme = Scheme::STA;
    AxisMode mode = AxisMode::absolute;
    ProtocolPoint base;
    IntegratorConfig cfg = [] {
        IntegratorConfig c;
        c.output_grid = 2;
        return c;
    }();
    unsigned workers = 1;
    /// Optional evaluation order of the flattened cells (row-major over
    /// axis1 x axis2); only affects scheduling.
    std::vector<std::size_t> cell_order;

    void validate() const {
        if (axis1.n < 2 || axis2.n < 2) throw invalid_input("sweep axes need at least 2 points");
    }
};

struct SweepResult {
    Scheme scheme = Scheme::STA;
    AxisMode mode = AxisMode::absolute;
    Axis axis1;
    Axis axis2;
    /// F(tf) per cell; NaN marks a cell whose integration failed.
    Eigen::MatrixXd grid;
    int failed_cells = 0;
    ProtocolPoint base;
    IntegratorConfig cfg;

    double min() const {
        double m = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < grid.size(); ++i)
            if (!std::isnan(grid.data()[i])) m = std::min(m, grid.data()[i]);
        return m;
    }
    double max() const {
        double m = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < grid.size(); ++i)
            if (!std::isnan(grid.data()[i])) m = std::max(m, grid.data()[i]);
        return m;
    }
    double spread() const { return max() - min(); }
};

inline ProtocolPoint cell_point(const SweepSpec& spec, int i, int j) {
    ProtocolPoint p = spec.base;
    const std::array<std::pair<ParamId, double>, 2> settings{{{spec.axis1.param, spec.axis1.value(i)},
                                                              {spec.axis2.param, spec.axis2.value(j)}}};
    for (const auto& [id, value] : settings) {
        if (spec.mode == AxisMode::absolute)
            p.set(id, value);
        else
            p.deviations[id] = value;
    }
    return p;
}

/// Independent F(tf) per cell, evaluated on a deterministic worker pool.
inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const int n1 = spec.axis1.n, n2 = spec.axis2.n;
    const std::size_t cells = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
    const std::function<double(std::size_t)> cell = [&](std::size_t k) {
        const int i = static_cast<int>(k / static_cast<std::size_t>(n2));
        const int j = static_cast<int>(k % static_cast<std::size_t>(n2));
        try {
            return run_point(spec.scheme, cell_point(spec, i, j), spec.cfg).final_fidelity;
        } catch (const integration_failure&) {
            return std::numeric_limits<double>::quiet_NaN();
        } catch (const frame_degenerate&) {
            return std::numeric_limits<double>::quiet_NaN();
        } catch (const fit_failure&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    const auto values = parallel_map<double>(cells, spec.workers, cell, spec.cell_order);

    SweepResult r;
    r.scheme = spec.scheme;
    r.mode = spec.mode;
    r.axis1 = spec.axis1;
    r.axis2 = spec.axis2;
    r.base = spec.base;
    r.cfg = spec.cfg;
    r.grid.resize(n1, n2);
    for (std::size_t k = 0; k < cells; ++k) {
        const auto i = static_cast<Eigen::Index>(k / static_cast<std::size_t>(n2));
        const auto j = static_cast<Eigen::Index>(k % static_cast<std::size_t>(n2));
        r.grid(i, j) = values[k];
        if (std::isnan(values[k])) ++r.failed_cells;
    }
    return r;
}

/// Fidelity landscape over (g, Omega0), both in units of 1/t_f.
inline SweepResult scan_g_omega0(const SweepSpec& spec) {
    if (spec.mode != AxisMode::absolute || spec.axis1.param != ParamId::g || spec.axis2.param != ParamId::omega0)
        throw invalid_input("scan_g_omega0 expects absolute axes (g, omega0)");
    return run_sweep(spec);
}

inline SweepSpec default_g_omega0_spec(Scheme scheme) {
    SweepSpec s;
    s.axis1 = {ParamId::g, 10.0, 100.0, 40};
    s.axis2 = {ParamId::omega0, 2.0, 14.0, 40};
    s.scheme = scheme;
    return s;
}

using ParamPair = std::pair<ParamId, ParamId>;

inline std::vector<ParamPair> default_deviation_pairs() {
    return {{ParamId::omega0, ParamId::t0},
            {ParamId::omega0, ParamId::tc},
            {ParamId::t0, ParamId::tc},
            {ParamId::g, ParamId::v}};
}

/// One 2-D grid of F(tf) per parameter pair, fractional offsets in [-range, range].
inline std::vector<SweepResult> scan_deviations(const std::vector<ParamPair>& pairs, double range, int n,
                                                const ProtocolPoint& base = {}, Scheme scheme = Scheme::STA,
                                                const IntegratorConfig& cfg = SweepSpec{}.cfg, unsigned workers = 1) {
    if (!(range >= 0) || range >= 1) throw invalid_input("deviation range must be in [0, 1)");
    std::vector<SweepResult> out;
    for (const auto& [a, b] : pairs) {
        if (a == b) throw invalid_input("deviation pair must name two different parameters");
        SweepSpec s;
        s.axis1 = {a, -range, range, n};
        s.axis2 = {b, -range, range, n};
        s.scheme = scheme;
        s.mode = AxisMode::deviation;
        s.base = base;
        s.cfg = cfg;
        s.workers = workers;
        out.push_back(run_sweep(s));
    }
    return out;
}

/// Lindblad runs on an n x n grid of (kappa/g, gamma/g) in [0, kappa_max] x [0, gamma_max].
inline SweepResult scan_decoherence(double kappa_max, double gamma_max, int n, const ProtocolPoint& base = {},
                                    const IntegratorConfig& cfg = SweepSpec{}.cfg, unsigned workers = 1,
                                    Scheme scheme = Scheme::STA) {
    if (!(kappa_max >= 0) || !(gamma_max >= 0)) throw invalid_input("decay maxima must be non-negative");
    SweepSpec s;
    s.axis1 = {ParamId::kappa, 0.0, kappa_max, n};
    s.axis2 = {ParamId::gamma, 0.0, gamma_max, n};
    s.scheme = scheme;
    s.base = base;
    s.cfg = cfg;
    s.workers = workers;
    return run_sweep(s);
}

// ---------------------------------------------------------------------------
// Duration ratio

struct MinimalDuration {
    double g_tf = 0.0;  // minimal dimensionless g * t_f reaching the target
    int evaluations = 0;
    std::vector<std::pair<double, double>> brackets;  // (lo, hi) per bisection step
};

struct SpeedupResult {
    double target_fidelity = 0.0;
    double omega0_over_g = 0.0;
    MinimalDuration sta;
    MinimalDuration stirap;
    /// t_f(STA) / t_f(STIRAP) at equal physical g.
    double ratio = 0.0;
};

struct SpeedupOptions {
    double g_tf_min = 5.0;
    double g_tf_max = 2000.0;
    double rel_resolution = 1e-3;
    IntegratorConfig cfg = SweepSpec{}.cfg;
};

/// Smallest g*t_f with F(tf) >= target at fixed pulse shape (Omega0 / g held
/// constant): doubling search for the first passing point, then bisection.
inline MinimalDuration minimal_duration(Scheme scheme, double target_f, double omega0_over_g,
                                        const SpeedupOptions& opt = {}) {
    MinimalDuration out;
    auto passes = [&](double g_tf) {
        ++out.evaluations;
        ProtocolPoint p;
        p.g = g_tf;
        p.omega0 = omega0_over_g * g_tf;
        try {
            return run_point(scheme, p, opt.cfg).final_fidelity >= target_f;
        } catch (const integration_failure&) {
            return false;
        }
    };
    double lo = opt.g_tf_min;
    if (passes(lo)) {
        out.g_tf = lo;
        return out;
    }
    double hi = 2.0 * lo;
    while (!passes(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > opt.g_tf_max)
            throw bracket_exhausted(std::string(to_string(scheme)) + ": target fidelity not reached for g*t_f <= " +
                                    std::to_string(opt.g_tf_max));
    }
    while (hi - lo > opt.rel_resolution * hi) {
        out.brackets.emplace_back(lo, hi);
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? hi : lo) = mid;
    }
    out.brackets.emplace_back(lo, hi);
    out.g_tf = hi;
    return out;
}

inline SpeedupResult speedup_ratio(double target_f, double omega0_over_g = 8.0 / 70.0, const SpeedupOptions& opt = {}) {
    if (!(target_f > 0) || !(target_f < 1)) throw invalid_input("target fidelity must lie in (0, 1)");
    if (!(omega0_over_g > 0)) throw invalid_input("omega0 scale must be positive");
    SpeedupResult r;
    r.target_fidelity = target_f;
    r.omega0_over_g = omega0_over_g;
    r.sta = minimal_duration(Scheme::STA, target_f, omega0_over_g, opt);
    r.stirap = minimal_duration(Scheme::STIRAP, target_f, omega0_over_g, opt);
    r.ratio = r.sta.g_tf / r.stirap.g_tf;
    return r;
}

// ---------------------------------------------------------------------------
// 87Rb operating point

/// Which coupling the quoted cavity-QED lambda is taken to be.
enum class RbCoupling { lambda_is_g, lambda_is_g_a };

struct RbResult {
    RbCoupling coupling = RbCoupling::lambda_is_g;
    double g_rad_per_s = 0.0;
    double kappa_rad_per_s = 0.0;
    double gamma_rad_per_s = 0.0;
    double tf_seconds = 0.0;
    double kappa_over_g = 0.0;
    double gamma_over_g = 0.0;
    SimResult result;
};

/// (lambda, kappa, gamma)/2pi = (750, 3.5, 2.62) MHz, t_f = 70/g, Omega0 = 8/t_f,
/// STA under the master equation.
inline RbResult rb_operating_point(RbCoupling coupling = RbCoupling::lambda_is_g, const IntegratorConfig& cfg = {},
                                   bool with_decay = true) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double lambda = two_pi * 750e6;
    RbResult r;
    r.coupling = coupling;
    r.g_rad_per_s = coupling == RbCoupling::lambda_is_g ? lambda : kSqrt2 * lambda;
    r.kappa_rad_per_s = two_pi * 3.5e6;
    r.gamma_rad_per_s = two_pi * 2.62e6;
    r.tf_seconds = 70.0 / r.g_rad_per_s;
    r.kappa_over_g = r.kappa_rad_per_s / r.g_rad_per_s;
    r.gamma_over_g = r.gamma_rad_per_s / r.g_rad_per_s;

    // Dimensionless units t_f = 1.
    ProtocolPoint p;
    p.g = r.g_rad_per_s * r.tf_seconds;
    p.omega0 = 8.0;
    p.kappa_over_g = with_decay ? r.kappa_over_g : 0.0;
    p.gamma_over_g = with_decay ? r.gamma_over_g : 0.0;
    r.result = run_point(Scheme::STA, p, cfg);
    return r;
}

// ---------------------------------------------------------------------------
// Frame identities

struct FrameReport {
    int samples = 0;
    int skipped = 0;
    /// Closed-form adiabatic-frame Hamiltonian vs U0 He U0^dag + i dU0 U0^dag.
    double max_dev_h1 = 0.0;
    /// First CD term vs -i U0^dag dU0.
    double max_dev_cd1 = 0.0;
    /// Second CD term vs -i U0^dag U1^dag dU1 U0.
    double max_dev_cd2 = 0.0;
    /// Largest |<phi1|H_CD2|psi5>|; zero when cd2 shares the effective coupling pattern.
    double max_cd2_end_coupling = 0.0;

    double max_deviation() const { return std::max({max_dev_h1, max_dev_cd1, max_dev_cd2}); }
};

/// Fourth-order central difference of a matrix-valued function.
template <class F>
Mat3 central_difference(const F& f, double t, double h) {
    return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
}

/// Checks the frame-transformation identities on `n` uniform samples of the
/// interior [0.01 tf, 0.99 tf], with U0, U1 built from the closed-form
/// eigenstates and their time derivatives taken by finite differences.
inline FrameReport validate_frames(int n, const StirapParams& p = StirapParams::defaults(8.0)) {
    if (n < 2) throw invalid_input("validate_frames needs at least 2 samples");
    const StirapPulses pulses(p);
    const double h = 1e-4 * p.tf;
    auto u0 = [&](double t) { return adiabatic_transform(mixing_angle(pulses, t).theta0); };
    auto u1 = [&](double t) { return superadiabatic_transform(superadiabatic_angle(pulses, t).theta1); };

    FrameReport rep;
    for (int k = 0; k < n; ++k) {
        const double t = p.tf * (0.01 + 0.98 * k / (n - 1));
        try {
            const FrameAngles a = superadiabatic_angle(pulses, t);
            const Mat3 he = effective_hamiltonian(pulses.omega1(t).value, pulses.omega2(t).value);
            const Mat3 U0 = u0(t), dU0 = central_difference(u0, t, h);
            const Mat3 U1 = u1(t), dU1 = central_difference(u1, t, h);

            const Mat3 h1_fd = U0 * he * U0.adjoint() + kI * dU0 * U0.adjoint();
            const Mat3 cd1_fd = -kI * U0.adjoint() * dU0;
            const Mat3 cd2_fd = -kI * U0.adjoint() * U1.adjoint() * dU1 * U0;
            const Mat3 c2 = cd2(a);

            rep.max_dev_h1 = std::max(rep.max_dev_h1, (adiabatic_frame_hamiltonian(a) - h1_fd).cwiseAbs().maxCoeff());
            rep.max_dev_cd1 = std::max(rep.max_dev_cd1, (cd1(a) - cd1_fd).cwiseAbs().maxCoeff());
            rep.max_dev_cd2 = std::max(rep.max_dev_cd2, (c2 - cd2_fd).cwiseAbs().maxCoeff());
            rep.max_cd2_end_coupling = std::max(rep.max_cd2_end_coupling, std::abs(c2(eff::kPhi1, eff::kPsi5)));
            ++rep.samples;
        } catch (const frame_degenerate&) {
            ++rep.skipped;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Effective vs full

struct EffectiveComparison {
    /// max_t |P_full(x) - P_eff(x)| for x = phi1, Psi_d, psi5.
    std::array<double, 3> max_abs_diff{};
    double max() const { return std::max({max_abs_diff[0], max_abs_diff[1], max_abs_diff[2]}); }
};

/// Projects the full 18-state evolution onto {phi1, Psi_d, psi5} and compares
/// with the three-level effective evolution on the same sample grid.
inline EffectiveComparison compare_effective_full(double g, Scheme scheme = Scheme::STA, double omega0 = 8.0,
                                                  IntegratorConfig cfg = {}) {
    cfg.store_states = true;
    const PulseSet pulses(scheme, StirapParams::defaults(omega0));
    const SimResult full = run_protocol(pulses, ModelParams::nominal(g), std::nullopt, cfg);
    const SimResult effective = run_effective(pulses, cfg);
    const StateSpace s;
    const std::array<StateVector, 3> proj{phi(s, 1), psi_d(s), psi_plus(s, 5)};
    EffectiveComparison c;
    for (std::size_t k = 0; k < full.states.size(); ++k) {
        for (std::size_t x = 0; x < 3; ++x) {
            const double pf = std::norm(proj[x].dot(full.states[k]));
            const double pe = effective.populations(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(x));
            c.max_abs_diff[x] = std::max(c.max_abs_diff[x], std::abs(pf - pe));
        }
    }
    return c;
}

}  // namespace sa3d
