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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sa3d {

struct GaussianTerm {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
};

/// sign * sum_m a_m exp(-(t - tau_m)^2 / chi_m^2)
struct GaussianSum {
    std::vector<GaussianTerm> terms;
    double sign = 1.0;

    double operator()(double t) const {
        double acc = 0.0;
        for (const auto& g : terms) {
            const double x = (t - g.center) / g.width;
            acc += g.amplitude * std::exp(-x * x);
        }
        return sign * acc;
    }

    void sort_by_center() {
        std::sort(terms.begin(), terms.end(),
                  [](const GaussianTerm& a, const GaussianTerm& b) { return a.center < b.center; });
    }
};

/// Reference four-term Gaussian refits of the modified pulses, scaled to
/// duration tf (amplitudes in 1/tf, centers and widths in tf).
inline std::pair<GaussianSum, GaussianSum> tabulated_fitted_pulses(double tf) {
    if (!(tf > 0)) throw invalid_input("tf must be positive");
    auto make = [tf](std::initializer_list<GaussianTerm> unit, double sign) {
        GaussianSum s;
        s.sign = sign;
        for (const auto& g : unit) s.terms.push_back({g.amplitude / tf, g.center * tf, g.width * tf});
        return s;
    };
    GaussianSum o1 = make({{1.4695, 0.3733, 0.1494},
                           {2.4114, 0.4424, 0.0939},
                           {1.9854, 0.6547, 0.1358},
                           {4.4491, 0.7568, 0.2044}},
                          -1.0);
    GaussianSum o2 = make({{6.7888, 0.2814, 0.2204},
                           {1.1904, 0.3712, 0.1200},
                           {1.6490, 0.5752, 0.0987},
                           {5.4413, 0.6588, 0.2475}},
                          +1.0);
    return {std::move(o1), std::move(o2)};
}

struct Sample {
    double t = 0.0;
    double value = 0.0;
};

struct FitOptions {
    int max_iterations = 500;
    /// Widths below time_scale * 1e-4 are rejected; 0 means "sample span".
    double time_scale = 0.0;
};

struct FitResult {
    GaussianSum fit;
    double max_residual = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

class fit_failure : public std::runtime_error {
public:
    fit_failure(const std::string& what, FitResult best) : std::runtime_error(what), best_(std::move(best)) {}
    const FitResult& best_so_far() const { return best_; }

private:
    FitResult best_;
};

namespace detail {

inline void residuals(std::span<const Sample> samples, const GaussianSum& model, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) r(static_cast<Eigen::Index>(i)) = model(samples[i].t) - samples[i].value;
}

inline void jacobian(std::span<const Sample> samples, const GaussianSum& model, Eigen::MatrixXd& j) {
    const auto n = static_cast<Eigen::Index>(model.terms.size());
    j.resize(static_cast<Eigen::Index>(samples.size()), 3 * n);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        for (Eigen::Index m = 0; m < n; ++m) {
            const auto& g = model.terms[static_cast<std::size_t>(m)];
            const double x = samples[i].t - g.center;
            const double w2 = g.width * g.width;
            const double e = model.sign * std::exp(-x * x / w2);
            j(row, 3 * m) = e;
            j(row, 3 * m + 1) = g.amplitude * e * 2.0 * x / w2;
            j(row, 3 * m + 2) = g.amplitude * e * 2.0 * x * x / (w2 * g.width);
        }
    }
}

inline Eigen::VectorXd pack(const GaussianSum& s) {
    Eigen::VectorXd p(3 * static_cast<Eigen::Index>(s.terms.size()));
    for (std::size_t m = 0; m < s.terms.size(); ++m) {
        const auto k = 3 * static_cast<Eigen::Index>(m);
        p(k) = s.terms[m].amplitude;
        p(k + 1) = s.terms[m].center;
        p(k + 2) = s.terms[m].width;
    }
    return p;
}

inline void unpack(const Eigen::VectorXd& p, GaussianSum& s) {
    for (std::size_t m = 0; m < s.terms.size(); ++m) {
        const auto k = 3 * static_cast<Eigen::Index>(m);
        s.terms[m] = {p(k), p(k + 1), p(k + 2)};
    }
}

}  // namespace detail

/// Unweighted least-squares fit of an n-term Gaussian sum by damped
/// Gauss-Newton (Levenberg-Marquardt scaling) with analytic Jacobian.
/// Throws fit_failure carrying the best iterate if the iteration cap is hit.
inline FitResult fit_gaussian_sum(std::span<const Sample> samples, int n_terms, const GaussianSum& init,
                                  const FitOptions& opt = {}) {
    if (n_terms < 1) throw invalid_input("n_terms must be positive");
    if (static_cast<int>(init.terms.size()) != n_terms) throw invalid_input("init must have n_terms terms");
    if (samples.size() < 10 * static_cast<std::size_t>(n_terms))
        throw invalid_input("need at least 10 samples per Gaussian term");
    for (const auto& g : init.terms) {
        if (!(g.width > 0)) throw invalid_input("initial widths must be positive");
    }

    double scale = opt.time_scale;
    if (!(scale > 0)) {
        auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const Sample& a, const Sample& b) { return a.t < b.t; });
        scale = hi->t - lo->t;
    }
    const double min_width = scale * 1e-4;

    GaussianSum model = init;
    Eigen::VectorXd p = detail::pack(model);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    detail::residuals(samples, model, r);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    int it = 0;

    for (; it < opt.max_iterations && !converged; ++it) {
        detail::jacobian(samples, model, jac);
        const Eigen::MatrixXd a = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        if (grad.lpNorm<Eigen::Infinity>() <= 1e-300) {
            converged = true;
            break;
        }
        const double diag_floor = 1e-12 * a.diagonal().maxCoeff();

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = a;
            for (Eigen::Index k = 0; k < a.rows(); ++k) damped(k, k) += lambda * std::max(a(k, k), diag_floor);
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            const Eigen::VectorXd trial = p + step;

            bool width_ok = true;
            for (Eigen::Index m = 2; m < trial.size(); m += 3) width_ok = width_ok && trial(m) >= min_width;

            GaussianSum candidate = model;
            detail::unpack(trial, candidate);
            Eigen::VectorXd r_new;
            double cost_new = std::numeric_limits<double>::infinity();
            if (width_ok && trial.allFinite()) {
                detail::residuals(samples, candidate, r_new);
                cost_new = r_new.squaredNorm();
            }

            if (cost_new < cost) {
                const double drop = cost - cost_new;
                const bool small_step = step.norm() <= 1e-10 * (p.norm() + 1e-10);
                p = trial;
                model = std::move(candidate);
                r = std::move(r_new);
                cost = cost_new;
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                if (small_step || drop <= 1e-15 * cost || cost <= 1e-30) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e16) {
                    // No descent direction left at working precision.
                    converged = true;
                    break;
                }
            }
        }
    }

    model.sort_by_center();
    FitResult res;
    detail::residuals(samples, model, r);
    res.fit = std::move(model);
    res.max_residual = r.lpNorm<Eigen::Infinity>();
    res.rms_residual = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
    res.iterations = it;
    res.converged = converged;
    if (!converged) throw fit_failure("Gaussian fit did not converge in " + std::to_string(it) + " iterations", res);
    return res;
}

}  // namespace sa3d
