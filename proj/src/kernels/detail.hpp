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

#include "tvtv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace tvtv::simd::detail {

// Work is split into fixed-size chunks so that reductions sum the same
// partials in the same order whatever the thread count.
inline constexpr std::size_t kChunk = std::size_t{1} << 14;

template <class F>
void for_chunks(std::size_t n, F&& f) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    if (chunks <= 1) {
        f(std::size_t{0}, n);
        return;
    }
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
        f(begin, std::min(n, begin + kChunk));
    }
}

template <class F>
double reduce_chunks(std::size_t n, F&& f) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    if (chunks <= 1)
        return f(std::size_t{0}, n);
    std::vector<double> partial(chunks);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
        partial[c] = f(begin, std::min(n, begin + kChunk));
    }
    double total = 0.0;
    for (double p : partial)
        total += p;
    return total;
}

// Columns of a column-major plane, parallel when the plane is large.
template <class F>
void for_columns(std::size_t rows, std::size_t cols, F&& f) {
    if (rows * cols < kChunk) {
        for (std::size_t j = 0; j < cols; ++j)
            f(j);
        return;
    }
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(cols); ++j)
        f(static_cast<std::size_t>(j));
}

// Reference prox for one component. Candidates are the two kinks and the four
// stationary points of the smooth pieces; the objective is strongly convex, so
// the best candidate is the minimiser. The AVX2 kernel evaluates the same
// expressions in the same order.
inline double prox_one(double s, double w, double beta, double rho) {
    const double inv = 1.0 / rho;
    const double a = (1.0 + beta) * inv;
    const double b = (1.0 - beta) * inv;
    const double half_rho = 0.5 * rho;
    const double cand[6] = {0.0, w, s - a, s - b, s + b, s + a};
    double best = cand[0];
    double best_val = INFINITY;
    for (double t : cand) {
        const double d = t - s;
        const double val = std::fabs(t) + beta * std::fabs(t - w) + half_rho * (d * d);
        if (val < best_val) {
            best_val = val;
            best = t;
        }
    }
    return best;
}

const KernelTable* avx2_table() noexcept;

} // namespace tvtv::simd::detail
