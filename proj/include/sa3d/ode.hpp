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

// Adaptive Dormand-Prince 5(4) with dense output on a uniform sample grid.
#pragma once

#include <boost/numeric/odeint.hpp>

#include <functional>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace sa3d {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-9;
    /// Upper bound on the internal step; 0 leaves it unbounded.
    double max_step = 0.0;
    /// Number of uniformly spaced output samples on [0, tf], endpoints included.
    int output_grid = 2001;
    /// Keep the full state at every output sample (pure evolution only).
    bool store_states = false;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0)) throw invalid_input("integrator tolerances must be positive");
        if (!(max_step >= 0)) throw invalid_input("max_step must be non-negative");
        if (output_grid < 2) throw invalid_input("output_grid must be at least 2");
    }
};

namespace ode {

using State = std::vector<double>;
using Rhs = std::function<void(const State&, State&, double)>;
using Observer = std::function<void(const State&, double)>;

/// Uniform sample times 0, tf/(n-1), ..., tf.
inline std::vector<double> uniform_grid(double tf, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = tf * i / (n - 1);
    t.back() = tf;
    return t;
}

/// Thrown when the stepper cannot make progress (step-size underflow or too
/// many rejected steps).
class stepper_stalled : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integrates x' = rhs(x, t) from 0 to the last entry of `times`, invoking
/// `observe` at every entry. No post-processing of the state is done.
inline void integrate(const Rhs& rhs, State x, const std::vector<double>& times, const IntegratorConfig& cfg,
                      const Observer& observe) {
    namespace odeint = boost::numeric::odeint;
    using stepper_type = odeint::runge_kutta_dopri5<State>;
    auto stepper = odeint::make_dense_output(cfg.abs_tol, cfg.rel_tol, cfg.max_step, stepper_type());
    const double span = times.back() - times.front();
    const double dt0 = span > 0 ? span * 1e-4 : 1e-4;
    try {
        odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt0, observe,
                                odeint::max_step_checker(50'000'000));
    } catch (const odeint::odeint_error& e) {
        throw stepper_stalled(e.what());
    }
}

}  // namespace ode
}  // namespace sa3d
