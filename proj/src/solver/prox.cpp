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

#include "kernels/detail.hpp"
#include "tvtv/errors.hpp"
#include "tvtv/kernels.hpp"

namespace tvtv {

double prox_u_component(double s, double wbar, double beta, double rho) {
    return simd::detail::prox_one(s, wbar, beta, rho);
}

void prox_u(std::span<const double> s, std::span<const double> wbar, double beta, double rho,
            std::span<double> out) {
    if (wbar.size() != s.size() || out.size() != s.size())
        throw DimensionError("prox_u: length mismatch");
    simd::active().prox_tvtv(s.data(), wbar.data(), beta, rho, out.data(), s.size());
}

namespace {

GramSolver make_gram(const OperatorSpec& op, Projection method, CgOptions cg) {
    if (!op.is_downsampling())
        throw InvalidArgument("Projector: not a downsampling operator");
    if (method == Projection::ClosedForm && op.kind() == OperatorKind::Bicubic)
        throw InvalidArgument("Projector: bicubic has no closed-form projection");
    return GramSolver(op, cg, method == Projection::Cg);
}

} // namespace

Projector::Projector(const OperatorSpec& op, std::vector<double> b, Projection method, CgOptions cg)
    : b_(std::move(b)), gram_(make_gram(op, method, cg)) {
    if (b_.size() != op.output_size())
        throw DimensionError("Projector: b has length " + std::to_string(b_.size()) + ", operator expects " +
                             std::to_string(op.output_size()));
    require_finite(b_, "b");
}

int Projector::project(std::span<const double> p, std::span<double> out) const {
    const auto& op = gram_.op();
    const auto& k = simd::active();
    std::vector<double> r = apply_forward(op, p);
    k.sub(r.data(), b_.data(), r.data(), r.size());
    std::vector<double> z(r.size());
    const CgStats stats = gram_.solve(r, z);
    apply_adjoint(op, z, out);
    k.sub(p.data(), out.data(), out.data(), out.size());
    return stats.iterations;
}

std::vector<double> update_x(std::span<const double> p, const OperatorSpec& op, std::span<const double> b) {
    Projector proj(op, std::vector<double>(b.begin(), b.end()));
    std::vector<double> out(op.input_size());
    proj.project(p, out);
    return out;
}

void update_v(const IdentityPlusGramD& solver, std::span<const double> x, std::span<const double> u,
              std::span<const double> eta, std::span<const double> mu, std::span<double> out) {
    const std::size_t n = solver.rows() * solver.cols();
    if (x.size() != n || mu.size() != n || out.size() != n || u.size() != 2 * n || eta.size() != 2 * n)
        throw DimensionError("update_v: length mismatch");
    const auto& k = simd::active();
    std::vector<double> diff(2 * n), rhs(n);
    k.sub(u.data(), eta.data(), diff.data(), 2 * n);
    k.diff_adjoint(diff.data(), solver.rows(), solver.cols(), rhs.data());
    k.add(x.data(), rhs.data(), rhs.data(), n);
    k.add(rhs.data(), mu.data(), rhs.data(), n);
    solver.solve(rhs, out);
}

std::vector<double> update_v(std::size_t rows, std::size_t cols, std::span<const double> x,
                             std::span<const double> u, std::span<const double> eta, std::span<const double> mu) {
    std::vector<double> out(rows * cols);
    update_v(IdentityPlusGramD(rows, cols), x, u, eta, mu, out);
    return out;
}

void update_duals(SolverState& state, std::size_t rows, std::size_t cols) {
    const std::size_t n = rows * cols;
    if (state.x.size() != n || state.v.size() != n || state.mu.size() != n || state.u.size() != 2 * n ||
        state.eta.size() != 2 * n)
        throw DimensionError("update_duals: state does not match the plane");
    const auto& k = simd::active();
    std::vector<double> dv(2 * n);
    k.diff_forward(state.v.data(), rows, cols, dv.data());
    k.dual_step(state.eta.data(), dv.data(), state.u.data(), 2 * n);
    k.dual_step(state.mu.data(), state.x.data(), state.v.data(), n);
}

} // namespace tvtv
