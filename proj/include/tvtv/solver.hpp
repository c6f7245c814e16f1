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
#pragma once

#include "tvtv/linops.hpp"

#include <memory>
#include <span>
#include <vector>

namespace tvtv {

/// Residual balancing: every `period` iterations (up to `max_adapt_iter`),
/// rho is multiplied by tau_incr when the primal residual exceeds mu times the
/// dual one, and divided by tau_decr in the opposite case. Scaled duals are
/// rescaled by rho_old / rho_new.
struct RhoAdaptation {
    double mu = 10.0;
    double tau_incr = 2.0;
    double tau_decr = 2.0;
    bool enabled = true;
    int period = 10;
    int max_adapt_iter = 1000;
};

enum class Projection {
    Auto,       // closed form for subsample/box, CG for bicubic
    ClosedForm, // rejected for bicubic
    Cg,
};

struct SolverConfig {
    double beta = 1.0;
    double rho0 = 0.5;
    double eps_pri = 1e-3;
    double eps_dual = 1e-3;
    int max_iter = 1500;
    RhoAdaptation rho_adapt;
    Projection projection = Projection::Auto;
    CgOptions cg;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
};

/// ADMM iterates in scaled form. u and eta have length 2n ([V; H] blocks),
/// the rest length n.
struct SolverState {
    std::vector<double> u;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> eta;
    std::vector<double> mu;
    double rho = 0.0;
    int iter = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double eps_pri = 0.0;
    double eps_dual = 0.0;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> primal_residuals;
    std::vector<double> dual_residuals;
    double consistency = 0.0; // ||A x - b||_2 of the returned image
    double objective = 0.0;   // ||x||_TV + beta ||x - w||_TV
    double final_rho = 0.0;
    int max_cg_iterations = 0;
    double wall_time = 0.0; // seconds
};

struct SolveResult {
    std::vector<double> x;
    SolveReport report;
};

/// argmin_t |t| + beta |t - wbar| + rho/2 (t - s)^2
double prox_u_component(double s, double wbar, double beta, double rho);

/// Componentwise prox over whole vectors with the active kernel backend.
void prox_u(std::span<const double> s, std::span<const double> wbar, double beta, double rho,
            std::span<double> out);

/// Euclidean projection onto {x : A x = b}: x = p - A^T (A A^T)^{-1} (A p - b).
class Projector {
public:
    Projector(const OperatorSpec& op, std::vector<double> b, Projection method = Projection::Auto,
              CgOptions cg = {});

    /// Returns the CG iteration count (0 on the closed-form path).
    int project(std::span<const double> p, std::span<double> out) const;

    const OperatorSpec& op() const noexcept { return gram_.op(); }
    std::span<const double> b() const noexcept { return b_; }
    bool uses_cg() const noexcept { return gram_.uses_cg(); }

private:
    std::vector<double> b_;
    GramSolver gram_;
};

std::vector<double> update_x(std::span<const double> p, const OperatorSpec& op, std::span<const double> b);

/// v = (I + D^T D)^{-1} [x + mu + D^T (u - eta)]
void update_v(const IdentityPlusGramD& solver, std::span<const double> x, std::span<const double> u,
              std::span<const double> eta, std::span<const double> mu, std::span<double> out);
std::vector<double> update_v(std::size_t rows, std::size_t cols, std::span<const double> x,
                             std::span<const double> u, std::span<const double> eta, std::span<const double> mu);

/// eta += D v - u; mu += x - v
void update_duals(SolverState& state, std::size_t rows, std::size_t cols);

/// ADMM for  minimize ||x||_TV + beta ||x - w||_TV  subject to  A x = b.
///
/// Starts from x = v = w, u = D w, zero duals. Each step runs the u, x and v
/// updates, the dual updates, the stopping test and (periodically) the rho
/// update. Every x iterate is a projection onto {A x = b}.
class TvTvSolver {
public:
    TvTvSolver(const OperatorSpec& op, std::span<const double> b, std::span<const double> w,
               const SolverConfig& config = {});
    ~TvTvSolver();
    TvTvSolver(const TvTvSolver&) = delete;
    TvTvSolver& operator=(const TvTvSolver&) = delete;

    void reset();

    /// One iteration; returns true once the stopping test is met.
    bool step();

    /// Iterates until convergence or max_iter and returns x with a report.
    SolveResult run();

    const SolverState& state() const noexcept { return state_; }
    const SolverConfig& config() const noexcept { return config_; }
    const OperatorSpec& op() const noexcept { return op_; }

private:
    struct Workspace;

    OperatorSpec op_;
    std::vector<double> b_;
    std::vector<double> w_;
    std::vector<double> wbar_;
    SolverConfig config_;
    Projector projector_;
    IdentityPlusGramD ipgd_;
    SolverState state_;
    std::unique_ptr<Workspace> ws_;
    int max_cg_iterations_ = 0;
};

SolveResult solve_tvtv(std::span<const double> b, std::span<const double> w, const OperatorSpec& op,
                       const SolverConfig& config = {});

/// ||A x - b||_2
double consistency(const OperatorSpec& op, std::span<const double> x, std::span<const double> b);

} // namespace tvtv
