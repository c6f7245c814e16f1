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
#include "tvtv/linops.hpp"

#include "tvtv/errors.hpp"
#include "tvtv/kernels.hpp"

#include <cmath>
#include <string>

namespace tvtv {

CgStats conjugate_gradient(const MatVec& apply, std::span<const double> rhs, std::span<double> z,
                           const CgOptions& options) {
    const std::size_t n = rhs.size();
    if (z.size() != n)
        throw DimensionError("conjugate_gradient: solution length does not match rhs");
    const auto& k = simd::active();
    std::fill(z.begin(), z.end(), 0.0);
    const double rhs_norm = std::sqrt(k.dot(rhs.data(), rhs.data(), n));
    if (rhs_norm == 0.0)
        return {0, 0.0};

    std::vector<double> r(rhs.begin(), rhs.end()), p(r), q(n);
    double rr = rhs_norm * rhs_norm;
    CgStats stats;
    for (int it = 1; it <= options.max_iterations; ++it) {
        apply(p, q);
        const double pq = k.dot(p.data(), q.data(), n);
        if (!(pq > 0.0) || !std::isfinite(pq))
            throw SolverError("conjugate_gradient: operator is not positive definite", std::sqrt(rr) / rhs_norm);
        const double alpha = rr / pq;
        for (std::size_t i = 0; i < n; ++i) {
            z[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        const double rr_new = k.dot(r.data(), r.data(), n);
        stats.iterations = it;
        stats.relative_residual = std::sqrt(rr_new) / rhs_norm;
        if (stats.relative_residual <= options.tolerance)
            return stats;
        const double gamma = rr_new / rr;
        for (std::size_t i = 0; i < n; ++i)
            p[i] = r[i] + gamma * p[i];
        rr = rr_new;
    }
    throw SolverError("conjugate_gradient: no convergence after " + std::to_string(options.max_iterations) +
                          " iterations (relative residual " + std::to_string(stats.relative_residual) + ")",
                      stats.relative_residual);
}

GramSolver::GramSolver(const OperatorSpec& op, CgOptions options, bool force_cg)
    : op_(op), options_(options), use_cg_(force_cg || op.kind() == OperatorKind::Bicubic) {
    if (!op.is_downsampling())
        throw InvalidArgument("GramSolver: not a downsampling operator");
    if (op.kind() == OperatorKind::Bicubic) {
        std::vector<double> e0(op.output_size(), 0.0);
        e0[0] = 1.0;
        const auto column = apply_forward(op, apply_adjoint(op, e0));
        gram_.emplace(op.lr_rows(), op.lr_cols(), column);
    }
}

void GramSolver::apply(std::span<const double> z, std::span<double> out) const {
    if (z.size() != op_.output_size() || out.size() != op_.output_size())
        throw DimensionError("GramSolver::apply: size mismatch");
    switch (op_.kind()) {
    case OperatorKind::Subsample:
        std::copy(z.begin(), z.end(), out.begin());
        return;
    case OperatorKind::BoxAverage: {
        const double s2 = static_cast<double>(op_.scale()) * op_.scale();
        for (std::size_t i = 0; i < z.size(); ++i)
            out[i] = z[i] / s2;
        return;
    }
    default:
        gram_->apply(z, out);
    }
}

CgStats GramSolver::solve(std::span<const double> rhs, std::span<double> out) const {
    if (rhs.size() != op_.output_size() || out.size() != op_.output_size())
        throw DimensionError("GramSolver::solve: size mismatch");
    if (use_cg_)
        return conjugate_gradient([this](std::span<const double> z, std::span<double> o) { apply(z, o); }, rhs,
                                  out, options_);
    if (op_.kind() == OperatorKind::Subsample) {
        std::copy(rhs.begin(), rhs.end(), out.begin());
    } else {
        const double s2 = static_cast<double>(op_.scale()) * op_.scale();
        for (std::size_t i = 0; i < rhs.size(); ++i)
            out[i] = rhs[i] * s2;
    }
    return {0, 0.0};
}

std::vector<double> GramSolver::solve(std::span<const double> rhs) const {
    std::vector<double> out(op_.output_size());
    solve(rhs, out);
    return out;
}

std::vector<double> solve_gram(const OperatorSpec& op, std::span<const double> rhs, double tolerance) {
    CgOptions options;
    options.tolerance = tolerance;
    return GramSolver(op, options).solve(rhs);
}

CirculantKernel vertical_diff_kernel(std::size_t rows, std::size_t cols) {
    std::vector<double> g(rows * cols, 0.0);
    g[0] -= 1.0;
    g[vec_index(rows - 1, 0, rows)] += 1.0;
    return CirculantKernel(rows, cols, std::move(g));
}

CirculantKernel horizontal_diff_kernel(std::size_t rows, std::size_t cols) {
    std::vector<double> g(rows * cols, 0.0);
    g[0] -= 1.0;
    g[vec_index(0, cols - 1, rows)] += 1.0;
    return CirculantKernel(rows, cols, std::move(g));
}

IdentityPlusGramD::IdentityPlusGramD(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    const auto v = vertical_diff_kernel(rows, cols);
    const auto h = horizontal_diff_kernel(rows, cols);
    fft_ = v.fft();
    const auto vs = v.spectrum();
    const auto hs = h.spectrum();
    const double n = static_cast<double>(rows * cols);
    denominator_.resize(vs.size());
    inverse_scale_.resize(vs.size());
    for (std::size_t k = 0; k < vs.size(); ++k) {
        denominator_[k] = 1.0 + std::norm(vs[k]) + std::norm(hs[k]);
        inverse_scale_[k] = 1.0 / (denominator_[k] * n);
    }
}

void IdentityPlusGramD::solve(std::span<const double> rhs, std::span<double> out) const {
    if (rhs.size() != rows_ * cols_ || out.size() != rows_ * cols_)
        throw DimensionError("IdentityPlusGramD::solve: size mismatch");
    std::vector<std::complex<double>> work(fft_->spectrum_size());
    fft_->forward(rhs, work);
    simd::active().scale_spectrum(work.data(), inverse_scale_.data(), work.size());
    fft_->inverse(work, out);
}

std::vector<double> IdentityPlusGramD::solve(std::span<const double> rhs) const {
    std::vector<double> out(rows_ * cols_);
    solve(rhs, out);
    return out;
}

void IdentityPlusGramD::apply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != rows_ * cols_ || out.size() != rows_ * cols_)
        throw DimensionError("IdentityPlusGramD::apply: size mismatch");
    const auto& k = simd::active();
    std::vector<double> dx(2 * x.size());
    k.diff_forward(x.data(), rows_, cols_, dx.data());
    k.diff_adjoint(dx.data(), rows_, cols_, out.data());
    k.add(out.data(), x.data(), out.data(), x.size());
}

std::vector<double> solve_identity_plus_gram_D(std::size_t rows, std::size_t cols, std::span<const double> rhs) {
    return IdentityPlusGramD(rows, cols).solve(rhs);
}

} // namespace tvtv
