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

// Closed (Schroedinger) and open (Lindblad) time evolution, fidelity.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "hilbert.hpp"
#include "model.hpp"
#include "ode.hpp"

namespace sa3d {

using HamiltonianFn = std::function<Eigen::MatrixXcd(double)>;

struct SimResult {
    std::vector<double> times;
    /// rows: samples, columns: basis states
    Eigen::MatrixXd populations;
    std::vector<double> fidelity_trace;
    double final_fidelity = std::numeric_limits<double>::quiet_NaN();
    bool open_system = false;
    /// Pure runs: max | ||psi|| - 1 | over samples.
    double max_norm_drift = 0.0;
    /// Open runs: max | Tr rho - 1 | over samples.
    double max_trace_drift = 0.0;
    /// Open runs: smallest eigenvalue of rho(tf).
    double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    std::vector<StateVector> states;
    StateVector final_state;
    DensityMatrix final_rho;

    std::size_t samples() const { return times.size(); }
    double norm_or_trace_drift() const { return open_system ? max_trace_drift : max_norm_drift; }
};

class integration_failure : public std::runtime_error {
public:
    integration_failure(const std::string& what, SimResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const SimResult& partial() const { return partial_; }

private:
    SimResult partial_;
};

class numerical_blowup : public integration_failure {
public:
    using integration_failure::integration_failure;
};

inline double fidelity(const StateVector& target, const StateVector& state) {
    if (target.size() != state.size()) throw invalid_input("fidelity: dimension mismatch");
    return std::norm(target.dot(state));
}

/// <target|rho|target>; the imaginary part must vanish to 1e-10.
inline double fidelity(const StateVector& target, const DensityMatrix& rho) {
    if (rho.rows() != rho.cols() || target.size() != rho.rows()) throw invalid_input("fidelity: dimension mismatch");
    const cplx f = target.dot(rho * target);
    if (std::abs(f.imag()) >= 1e-10) throw invalid_input("fidelity: density matrix is not Hermitian");
    return f.real();
}

namespace detail {

inline void resize_result(SimResult& r, const std::vector<double>& times, Eigen::Index dim, bool with_target) {
    r.times = times;
    r.populations = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(times.size()), dim);
    if (with_target) r.fidelity_trace.assign(times.size(), std::numeric_limits<double>::quiet_NaN());
}

/// Drops unfilled rows so a partial result only reports what was computed.
inline SimResult truncated(SimResult r, std::size_t filled) {
    r.times.resize(filled);
    r.populations.conservativeResize(static_cast<Eigen::Index>(filled), r.populations.cols());
    if (!r.fidelity_trace.empty()) r.fidelity_trace.resize(filled);
    return r;
}

}  // namespace detail

/// i d|psi>/dt = H(t)|psi> on [0, tf]. No renormalization; drift is reported.
inline SimResult evolve_pure(const HamiltonianFn& hamiltonian, const StateVector& psi0, double tf,
                             const IntegratorConfig& cfg = {}, const std::optional<StateVector>& target = {}) {
    cfg.validate();
    if (!(tf > 0)) throw invalid_input("tf must be positive");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw invalid_input("initial state must be normalized");
    if (target && target->size() != psi0.size()) throw invalid_input("target dimension mismatch");

    const Eigen::Index n = psi0.size();
    const auto times = ode::uniform_grid(tf, cfg.output_grid);
    SimResult res;
    detail::resize_result(res, times, n, target.has_value());
    std::size_t filled = 0;

    auto rhs = [&](const ode::State& x, ode::State& dxdt, double t) {
        const Eigen::Map<const Eigen::VectorXcd> psi(reinterpret_cast<const cplx*>(x.data()), n);
        Eigen::Map<Eigen::VectorXcd> dpsi(reinterpret_cast<cplx*>(dxdt.data()), n);
        dpsi.noalias() = -kI * (hamiltonian(t) * psi);
    };
    auto observe = [&](const ode::State& x, double t) {
        const Eigen::Map<const Eigen::VectorXcd> psi(reinterpret_cast<const cplx*>(x.data()), n);
        if (!psi.allFinite())
            throw numerical_blowup("non-finite amplitude at t=" + std::to_string(t), detail::truncated(res, filled));
        const auto row = static_cast<Eigen::Index>(filled);
        res.populations.row(row) = psi.cwiseAbs2().transpose();
        if (target) res.fidelity_trace[filled] = fidelity(*target, StateVector(psi));
        res.max_norm_drift = std::max(res.max_norm_drift, std::abs(psi.norm() - 1.0));
        if (cfg.store_states) res.states.emplace_back(psi);
        if (filled + 1 == times.size()) res.final_state = psi;
        ++filled;
    };

    ode::State x(2 * static_cast<std::size_t>(n));
    Eigen::Map<Eigen::VectorXcd>(reinterpret_cast<cplx*>(x.data()), n) = psi0;
    try {
        ode::integrate(rhs, std::move(x), times, cfg, observe);
    } catch (const ode::stepper_stalled& e) {
        throw integration_failure(std::string("integration failed: ") + e.what(), detail::truncated(res, filled));
    }
    if (target) res.final_fidelity = res.fidelity_trace.back();
    return res;
}

/// d rho/dt = -i[H, rho] + sum_k rate_k D[c_k] rho, D[c] rho = c rho c^dag - {c^dag c, rho}/2.
/// The full matrix is propagated; it is symmetrized only at output samples
/// when measuring populations, fidelity and the final state.
inline SimResult evolve_lindblad(const HamiltonianFn& hamiltonian, std::span<const CollapseChannel> channels,
                                 const DensityMatrix& rho0, double tf, const IntegratorConfig& cfg = {},
                                 const std::optional<StateVector>& target = {}) {
    cfg.validate();
    if (!(tf > 0)) throw invalid_input("tf must be positive");
    const Eigen::Index n = rho0.rows();
    if (rho0.cols() != n) throw invalid_input("density matrix must be square");
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw invalid_input("initial density matrix not Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-10) throw invalid_input("initial density matrix must have unit trace");
    if (target && target->size() != n) throw invalid_input("target dimension mismatch");

    // Sparse form of each jump operator: (row, col, weight) with the rate folded in.
    struct Entry {
        Eigen::Index row, col;
        cplx value;
    };
    std::vector<std::tuple<double, std::vector<Entry>>> jumps;
    Eigen::MatrixXcd decay = Eigen::MatrixXcd::Zero(n, n);  // sum_k rate_k c_k^dag c_k
    for (const auto& ch : channels) {
        if (ch.rate < 0) throw invalid_input("negative channel rate");
        if (ch.op.entries.rows() != n || ch.op.entries.cols() != n) throw invalid_input("channel dimension mismatch");
        if (ch.rate == 0.0) continue;
        std::vector<Entry> nz;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                if (ch.op.entries(i, j) != cplx{}) nz.push_back({i, j, ch.op.entries(i, j)});
        jumps.emplace_back(ch.rate, std::move(nz));
        decay += ch.rate * ch.op.entries.adjoint() * ch.op.entries;
    }

    const auto times = ode::uniform_grid(tf, cfg.output_grid);
    SimResult res;
    res.open_system = true;
    detail::resize_result(res, times, n, target.has_value());
    std::size_t filled = 0;

    auto rhs = [&](const ode::State& x, ode::State& dxdt, double t) {
        const Eigen::Map<const Eigen::MatrixXcd> rho(reinterpret_cast<const cplx*>(x.data()), n, n);
        Eigen::Map<Eigen::MatrixXcd> drho(reinterpret_cast<cplx*>(dxdt.data()), n, n);
        const Eigen::MatrixXcd h = hamiltonian(t);
        const Eigen::MatrixXcd eff = h - 0.5 * kI * decay;  // non-Hermitian effective generator
        drho.noalias() = -kI * (eff * rho);
        drho.noalias() += kI * (rho * eff.adjoint());
        for (const auto& [rate, nz] : jumps) {
            for (const auto& a : nz)
                for (const auto& b : nz) drho(a.row, b.row) += rate * a.value * rho(a.col, b.col) * std::conj(b.value);
        }
    };
    auto observe = [&](const ode::State& x, double t) {
        const Eigen::Map<const Eigen::MatrixXcd> raw(reinterpret_cast<const cplx*>(x.data()), n, n);
        if (!raw.allFinite())
            throw numerical_blowup("non-finite density matrix at t=" + std::to_string(t), detail::truncated(res, filled));
        const Eigen::MatrixXcd rho = 0.5 * (raw + raw.adjoint());
        const auto row = static_cast<Eigen::Index>(filled);
        res.populations.row(row) = rho.diagonal().real().transpose();
        if (target) res.fidelity_trace[filled] = fidelity(*target, rho);
        res.max_trace_drift = std::max(res.max_trace_drift, std::abs(rho.trace().real() - 1.0));
        if (filled + 1 == times.size()) res.final_rho = rho;
        ++filled;
    };

    ode::State x(2 * static_cast<std::size_t>(n * n));
    Eigen::Map<Eigen::MatrixXcd>(reinterpret_cast<cplx*>(x.data()), n, n) = rho0;
    try {
        ode::integrate(rhs, std::move(x), times, cfg, observe);
    } catch (const ode::stepper_stalled& e) {
        throw integration_failure(std::string("integration failed: ") + e.what(), detail::truncated(res, filled));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(res.final_rho, Eigen::EigenvaluesOnly);
    res.min_eigenvalue = es.eigenvalues().minCoeff();
    if (target) res.final_fidelity = res.fidelity_trace.back();
    return res;
}

}  // namespace sa3d
