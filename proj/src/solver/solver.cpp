// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "tvtv/solver.hpp"

#include "tvtv/errors.hpp"
#include "tvtv/kernels.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace tvtv {

void SolverConfig::validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw InvalidArgument("beta must be finite and >= 0");
    if (!(rho0 > 0.0) || !std::isfinite(rho0))
        throw InvalidArgument("rho0 must be finite and > 0");
    if (!(eps_pri > 0.0) || !(eps_dual > 0.0))
        throw InvalidArgument("tolerances must be > 0");
    if (max_iter < 1)
        throw InvalidArgument("max_iter must be >= 1");
    if (rho_adapt.enabled) {
        if (!(rho_adapt.mu > 1.0) || !(rho_adapt.tau_incr > 1.0) || !(rho_adapt.tau_decr > 1.0))
            throw InvalidArgument("rho adaptation needs mu, tau_incr, tau_decr > 1");
        if (rho_adapt.period < 1)
            throw InvalidArgument("rho adaptation period must be >= 1");
    }
    if (!(cg.tolerance > 0.0) || cg.max_iterations < 1)
        throw InvalidArgument("CG tolerance must be > 0 and the iteration cap >= 1");
}

double consistency(const OperatorSpec& op, std::span<const double> x, std::span<const double> b) {
    if (b.size() != op.output_size())
        throw DimensionError("consistency: b does not match the operator");
    const auto ax = apply_forward(op, x);
    return std::sqrt(simd::active().dist_sq(ax.data(), b.data(), ax.size()));
}

struct TvTvSolver::Workspace {
    explicit Workspace(std::size_t n)
        : s(2 * n), dv(2 * n), dv_old(2 * n), tmp2(2 * n), p(n), rhs(n), v_old(n) {}
    std::vector<double> s, dv, dv_old, tmp2;
    std::vector<double> p, rhs, v_old;
};

namespace {

const OperatorSpec& checked(const OperatorSpec& op, std::span<const double> b, std::span<const double> w,
                            const SolverConfig& config) {
    config.validate();
    if (!op.is_downsampling())
        throw InvalidArgument("solve_tvtv: A must be a downsampling operator");
    if (w.size() != op.input_size())
        throw DimensionError("solve_tvtv: w has length " + std::to_string(w.size()) + ", operator expects " +
                             std::to_string(op.input_size()));
    if (b.size() != op.output_size())
        throw DimensionError("solve_tvtv: b has length " + std::to_string(b.size()) + ", operator expects " +
                             std::to_string(op.output_size()));
    require_finite(w, "w");
    require_finite(b, "b");
    return op;
}

} // namespace

TvTvSolver::TvTvSolver(const OperatorSpec& op, std::span<const double> b, std::span<const double> w,
                       const SolverConfig& config)
    : op_(checked(op, b, w, config)), b_(b.begin(), b.end()), w_(w.begin(), w.end()), config_(config),
      projector_(op, b_, config.projection, config.cg), ipgd_(op.rows(), op.cols()),
      ws_(std::make_unique<Workspace>(op.input_size())) {
    wbar_.resize(2 * w_.size());
    simd::active().diff_forward(w_.data(), op_.rows(), op_.cols(), wbar_.data());
    reset();
}

TvTvSolver::~TvTvSolver() = default;

void TvTvSolver::reset() {
    const std::size_t n = w_.size();
    state_.u = wbar_;
    state_.x = w_;
    state_.v = w_;
    state_.eta.assign(2 * n, 0.0);
    state_.mu.assign(n, 0.0);
    state_.rho = config_.rho0;
    state_.iter = 0;
    state_.primal_residual = state_.dual_residual = 0.0;
    state_.eps_pri = state_.eps_dual = 0.0;
    ws_->dv = wbar_;
    max_cg_iterations_ = 0;
}

bool TvTvSolver::step() {
    const auto& k = simd::active();
    const std::size_t rows = op_.rows(), cols = op_.cols();
    const std::size_t n = rows * cols, n2 = 2 * n;
    auto& st = state_;
    auto& ws = *ws_;

    // u = prox(D v + eta); ws.dv holds D v from the previous sweep.
    k.add(ws.dv.data(), st.eta.data(), ws.s.data(), n2);
    k.prox_tvtv(ws.s.data(), wbar_.data(), config_.beta, st.rho, st.u.data(), n2);

    // x = projection of v - mu onto {A x = b}
    k.sub(st.v.data(), st.mu.data(), ws.p.data(), n);
    max_cg_iterations_ = std::max(max_cg_iterations_, projector_.project(ws.p, st.x));

    // v = (I + D^T D)^{-1} [x + mu + D^T (u - eta)]
    k.sub(st.u.data(), st.eta.data(), ws.tmp2.data(), n2);
    k.diff_adjoint(ws.tmp2.data(), rows, cols, ws.rhs.data());
    k.add(st.x.data(), ws.rhs.data(), ws.rhs.data(), n);
    k.add(ws.rhs.data(), st.mu.data(), ws.rhs.data(), n);
    ws.v_old.swap(st.v);
    ws.dv_old.swap(ws.dv);
    ipgd_.solve(ws.rhs, st.v);
    k.diff_forward(st.v.data(), rows, cols, ws.dv.data());

    // eta += D v - u; mu += x - v
    const double r_sq = k.dual_step(st.eta.data(), ws.dv.data(), st.u.data(), n2) +
                        k.dual_step(st.mu.data(), st.x.data(), st.v.data(), n);
    const double s_sq = k.dist_sq(ws.dv.data(), ws.dv_old.data(), n2) + k.dist_sq(st.v.data(), ws.v_old.data(), n);
    ++st.iter;

    const double r = std::sqrt(r_sq);
    const double s = st.rho * std::sqrt(s_sq);
    const double ux = std::sqrt(k.dot(st.u.data(), st.u.data(), n2) + k.dot(st.x.data(), st.x.data(), n));
    const double dvv = std::sqrt(k.dot(ws.dv.data(), ws.dv.data(), n2) + k.dot(st.v.data(), st.v.data(), n));
    const double duals =
        std::sqrt(k.dot(st.eta.data(), st.eta.data(), n2) + k.dot(st.mu.data(), st.mu.data(), n));
    if (!std::isfinite(r) || !std::isfinite(s) || !std::isfinite(ux) || !std::isfinite(dvv) ||
        !std::isfinite(duals))
        throw SolverError("ADMM produced non-finite iterates at iteration " + std::to_string(st.iter), r);

    const double floor_pri = std::sqrt(3.0 * static_cast<double>(n)) * config_.eps_pri;
    const double floor_dual = std::sqrt(3.0 * static_cast<double>(n)) * config_.eps_dual;
    st.primal_residual = r;
    st.dual_residual = s;
    st.eps_pri = floor_pri + config_.eps_pri * std::max(ux, dvv);
    st.eps_dual = floor_dual + config_.eps_dual * st.rho * duals;
    if (r < st.eps_pri && s < st.eps_dual)
        return true;

    const auto& ad = config_.rho_adapt;
    if (ad.enabled && st.iter % ad.period == 0 && st.iter <= ad.max_adapt_iter) {
        double factor = 1.0;
        if (r > ad.mu * s)
            factor = ad.tau_incr;
        else if (s > ad.mu * r)
            factor = 1.0 / ad.tau_decr;
        if (factor != 1.0) {
            st.rho *= factor;
            const double rescale = 1.0 / factor;
            for (double& e : st.eta)
                e *= rescale;
            for (double& m : st.mu)
                m *= rescale;
        }
    }
    return false;
}

SolveResult TvTvSolver::run() {
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    auto& rep = result.report;
    rep.primal_residuals.reserve(config_.max_iter);
    rep.dual_residuals.reserve(config_.max_iter);
    while (state_.iter < config_.max_iter) {
        const bool done = step();
        rep.primal_residuals.push_back(state_.primal_residual);
        rep.dual_residuals.push_back(state_.dual_residual);
        if (done) {
            rep.converged = true;
            break;
        }
    }
    result.x = state_.x;
    rep.iterations = state_.iter;
    rep.final_rho = state_.rho;
    rep.max_cg_iterations = max_cg_iterations_;
    rep.consistency = consistency(op_, result.x, b_);
    rep.objective = tvtv_objective(result.x, w_, op_.rows(), op_.cols(), config_.beta);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

SolveResult solve_tvtv(std::span<const double> b, std::span<const double> w, const OperatorSpec& op,
                       const SolverConfig& config) {
    return TvTvSolver(op, b, w, config).run();
}

} // namespace tvtv
