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

// Drive profiles: counterintuitive Gaussian pair, mixing angles and the
// superadiabatic correction that turns them into a shortcut.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"
#include "gaussian_fit.hpp"
#include "model.hpp"

namespace sa3d {

struct StirapParams {
    double omega0 = 8.0;
    double t0 = 0.18;
    double tc = 0.24;
    double tf = 1.0;

    /// t0 = 0.18 tf, tc = 0.24 tf.
    static StirapParams defaults(double omega0, double tf = 1.0) {
        StirapParams p{omega0, 0.18 * tf, 0.24 * tf, tf};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(tc > 0)) throw invalid_input("tc must be positive");
        if (!(tf > 0)) throw invalid_input("tf must be positive");
    }
};

/// Value with first and second time derivatives.
struct PulseValue {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    PulseValue operator+(const PulseValue& o) const { return {value + o.value, d1 + o.d1, d2 + o.d2}; }
    PulseValue operator*(double s) const { return {value * s, d1 * s, d2 * s}; }
};

/// exp(-(t - center)^2 / width^2) with exact derivatives.
inline PulseValue gaussian(double t, double center, double width) {
    const double x = t - center;
    const double w2 = width * width;
    const double e = std::exp(-x * x / w2);
    return {e, -2.0 * x / w2 * e, (4.0 * x * x / (w2 * w2) - 2.0 / w2) * e};
}

/// Omega_2 = (Omega0/sqrt3) G(t - tf/2 - t0) + Omega0 G(t - tf/2 + t0),
/// Omega_1 = -(sqrt2/sqrt3) Omega0 G(t - tf/2 - t0).
class StirapPulses {
public:
    explicit StirapPulses(StirapParams p) : p_(p) { p_.validate(); }

    const StirapParams& params() const { return p_; }

    PulseValue omega1(double t) const { return late(t) * (-kSqrt2 / kSqrt3 * p_.omega0); }
    PulseValue omega2(double t) const { return late(t) * (p_.omega0 / kSqrt3) + early(t) * p_.omega0; }

private:
    PulseValue late(double t) const { return gaussian(t, p_.tf / 2 + p_.t0, p_.tc); }
    PulseValue early(double t) const { return gaussian(t, p_.tf / 2 - p_.t0, p_.tc); }

    StirapParams p_;
};

/// All frame quantities at time t, including theta0's second derivative.
struct FrameSample {
    FrameAngles angles;
    double theta0_ddot = 0.0;
    double omega_dot = 0.0;
};

inline FrameSample frame_sample(const StirapPulses& pulses, double t) {
    const PulseValue o1 = pulses.omega1(t);
    const PulseValue o2 = pulses.omega2(t);
    FrameSample fs;
    FrameAngles& a = fs.angles;
    a.omega_scale = std::abs(pulses.params().omega0) > 0 ? std::abs(pulses.params().omega0) : 1.0;

    const double w2 = o1.value * o1.value + o2.value * o2.value;
    a.omega = std::sqrt(w2);
    if (!(a.omega >= kDegeneracyRatio * a.omega_scale)) throw frame_degenerate("pulse norm Omega vanishes at t=" + std::to_string(t));

    // theta0 = atan(Omega1/Omega2) on (-pi/2, pi/2)
    a.theta0 = std::atan(o1.value / o2.value);
    const double num = o1.d1 * o2.value - o1.value * o2.d1;
    const double num_dot = o1.d2 * o2.value - o1.value * o2.d2;
    const double w2_dot = 2.0 * (o1.value * o1.d1 + o2.value * o2.d1);
    a.theta0_dot = num / w2;
    fs.theta0_ddot = (num_dot * w2 - num * w2_dot) / (w2 * w2);
    fs.omega_dot = w2_dot / (2.0 * a.omega);

    const double wp2 = a.theta0_dot * a.theta0_dot + w2;
    a.omega_prime = std::sqrt(wp2);
    a.theta1 = std::atan(a.theta0_dot / a.omega);
    a.theta1_dot = (fs.theta0_ddot * a.omega - a.theta0_dot * fs.omega_dot) / wp2;
    return fs;
}

/// theta0, its rate and Omega; superadiabatic fields left at zero.
inline FrameAngles mixing_angle(const StirapPulses& pulses, double t) {
    FrameAngles a = frame_sample(pulses, t).angles;
    a.theta1 = a.theta1_dot = a.omega_prime = 0.0;
    return a;
}

/// Complete frame angles: theta0, theta1 and their rates, Omega and Omega'.
inline FrameAngles superadiabatic_angle(const StirapPulses& pulses, double t) { return frame_sample(pulses, t).angles; }

struct PulsePair {
    double omega1 = 0.0;
    double omega2 = 0.0;
};

/// Auxiliary pulses realizing the second-iteration CD term.
inline PulsePair cd_corrections(const StirapPulses& pulses, double t) {
    const FrameAngles a = superadiabatic_angle(pulses, t);
    const Mat3 h = cd2(a);
    return {h(eff::kPhi1, eff::kPsiD).real(), h(eff::kPsiD, eff::kPsi5).real()};
}

inline PulsePair modified_pulses(const StirapPulses& pulses, double t) {
    const PulsePair cd = cd_corrections(pulses, t);
    return {pulses.omega1(t).value + cd.omega1, pulses.omega2(t).value + cd.omega2};
}

enum class Scheme { STIRAP, STA, STA_FITTED };

constexpr std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::STIRAP: return "STIRAP";
        case Scheme::STA: return "STA";
        case Scheme::STA_FITTED: return "STA_FITTED";
    }
    return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view s) {
    if (s == "STIRAP") return Scheme::STIRAP;
    if (s == "STA") return Scheme::STA;
    if (s == "STA_FITTED" || s == "FITTED") return Scheme::STA_FITTED;
    return std::nullopt;
}

/// Refit of the modified pulses by Gaussian sums, initialised from the
/// tabulated parameters scaled to the protocol duration.
struct FittedPulses {
    FitResult omega1;
    FitResult omega2;
};

inline FittedPulses fit_modified_pulses(const StirapPulses& pulses, int n_samples = 201) {
    const double tf = pulses.params().tf;
    auto [init1, init2] = tabulated_fitted_pulses(tf);
    std::vector<Sample> s1, s2;
    s1.reserve(static_cast<std::size_t>(n_samples));
    s2.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double t = tf * i / (n_samples - 1);
        const PulsePair m = modified_pulses(pulses, t);
        s1.push_back({t, m.omega1});
        s2.push_back({t, m.omega2});
    }
    FitOptions opt;
    opt.time_scale = tf;
    return {fit_gaussian_sum(s1, static_cast<int>(init1.terms.size()), init1, opt),
            fit_gaussian_sum(s2, static_cast<int>(init2.terms.size()), init2, opt)};
}

/// The drive set of one protocol. Effective pulses Omega_{1,2} map to physical
/// Rabi frequencies as Omega_A = sqrt3 Omega_1, Omega_B = sqrt3 Omega_2.
class PulseSet {
public:
    PulseSet(Scheme scheme, StirapParams p) : scheme_(scheme), base_(p) {
        if (scheme_ == Scheme::STA_FITTED) {
            auto f = fit_modified_pulses(base_);
            fit_ = std::make_pair(std::move(f.omega1.fit), std::move(f.omega2.fit));
        }
    }

    /// Fitted scheme with an explicit pair of Gaussian sums (e.g. the tabulated one).
    PulseSet(StirapParams p, GaussianSum omega1_fit, GaussianSum omega2_fit)
        : scheme_(Scheme::STA_FITTED), base_(p), fit_(std::make_pair(std::move(omega1_fit), std::move(omega2_fit))) {}

    Scheme scheme() const { return scheme_; }
    const StirapPulses& base() const { return base_; }

    PulsePair stirap(double t) const { return {base_.omega1(t).value, base_.omega2(t).value}; }
    PulsePair correction(double t) const { return cd_corrections(base_, t); }
    PulsePair modified(double t) const { return modified_pulses(base_, t); }

    std::optional<PulsePair> fitted(double t) const {
        if (!fit_) return std::nullopt;
        return PulsePair{fit_->first(t), fit_->second(t)};
    }

    /// Effective-level pulses actually applied under this scheme.
    PulsePair effective(double t) const {
        switch (scheme_) {
            case Scheme::STIRAP: return stirap(t);
            case Scheme::STA: return modified(t);
            case Scheme::STA_FITTED: return *fitted(t);
        }
        return {};
    }

    /// Physical drives (Omega_A, Omega_B).
    PulsePair drives(double t) const {
        const PulsePair e = effective(t);
        return {kSqrt3 * e.omega1, kSqrt3 * e.omega2};
    }

    const std::optional<std::pair<GaussianSum, GaussianSum>>& fit() const { return fit_; }

private:
    Scheme scheme_;
    StirapPulses base_;
    std::optional<std::pair<GaussianSum, GaussianSum>> fit_;
};

}  // namespace sa3d
