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
#include "detail.hpp"

#include <cmath>

namespace tvtv::simd {

namespace {

using detail::for_chunks;
using detail::for_columns;
using detail::reduce_chunks;

void prox_tvtv(const double* s, const double* wbar, double beta, double rho, double* u, std::size_t n) {
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            u[k] = detail::prox_one(s[k], wbar[k], beta, rho);
    });
}

void diff_forward(const double* x, std::size_t rows, std::size_t cols, double* out) {
    const std::size_t n = rows * cols;
    for_columns(rows, cols, [&](std::size_t j) {
        const double* col = x + j * rows;
        const double* next = x + ((j + 1) % cols) * rows;
        double* v = out + j * rows;
        double* h = out + n + j * rows;
        for (std::size_t i = 0; i + 1 < rows; ++i)
            v[i] = col[i + 1] - col[i];
        v[rows - 1] = col[0] - col[rows - 1];
        for (std::size_t i = 0; i < rows; ++i)
            h[i] = next[i] - col[i];
    });
}

void diff_adjoint(const double* y, std::size_t rows, std::size_t cols, double* out) {
    const std::size_t n = rows * cols;
    for_columns(rows, cols, [&](std::size_t j) {
        const double* a = y + j * rows;
        const double* b = y + n + j * rows;
        const double* b_prev = y + n + ((j + cols - 1) % cols) * rows;
        double* o = out + j * rows;
        o[0] = (a[rows - 1] - a[0]) + (b_prev[0] - b[0]);
        for (std::size_t i = 1; i < rows; ++i)
            o[i] = (a[i - 1] - a[i]) + (b_prev[i] - b[i]);
    });
}

void add(const double* a, const double* b, double* out, std::size_t n) {
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            out[k] = a[k] + b[k];
    });
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            out[k] = a[k] - b[k];
    });
}

double dual_step(double* dual, const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            const double d = a[k] - b[k];
            dual[k] += d;
            acc += d * d;
        }
        return acc;
    });
}

double dot(const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t k = begin; k < end; ++k)
            acc += a[k] * b[k];
        return acc;
    });
}

double dist_sq(const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            const double d = a[k] - b[k];
            acc += d * d;
        }
        return acc;
    });
}

double abs_sum(const double* a, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t k = begin; k < end; ++k)
            acc += std::fabs(a[k]);
        return acc;
    });
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        double acc = 0.0;
        for (std::size_t k = begin; k < end; ++k)
            acc += std::fabs(a[k] - b[k]);
        return acc;
    });
}

void scale_spectrum(std::complex<double>* z, const double* factor, std::size_t n) {
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            z[k] = std::complex<double>(z[k].real() * factor[k], z[k].imag() * factor[k]);
    });
}

constexpr KernelTable kScalarTable{
    Backend::Scalar, "scalar",   prox_tvtv, diff_forward, diff_adjoint, add,           sub,
    dual_step,       dot,        dist_sq,   abs_sum,      abs_diff_sum, scale_spectrum,
};

} // namespace

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

} // namespace tvtv::simd
