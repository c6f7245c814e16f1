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

// Data-parallel inner loops of the solver. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant selected at runtime. The
// elementwise kernels produce bit-identical results on every backend;
// reductions agree to rounding (summation order differs).

#include <complex>
#include <cstddef>

namespace tvtv::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    Backend backend;
    const char* name;

    // u[k] = argmin_t |t| + beta*|t - wbar[k]| + rho/2 (t - s[k])^2
    void (*prox_tvtv)(const double* s, const double* wbar, double beta, double rho, double* u, std::size_t n);

    // out[0:n] = V x, out[n:2n] = H x (periodic forward differences, column-major rows x cols)
    void (*diff_forward)(const double* x, std::size_t rows, std::size_t cols, double* out);

    // out = V^T y[0:n] + H^T y[n:2n]
    void (*diff_adjoint)(const double* y, std::size_t rows, std::size_t cols, double* out);

    // out = a + b, out = a - b
    void (*add)(const double* a, const double* b, double* out, std::size_t n);
    void (*sub)(const double* a, const double* b, double* out, std::size_t n);

    // dual += a - b; returns ||a - b||^2
    double (*dual_step)(double* dual, const double* a, const double* b, std::size_t n);

    double (*dot)(const double* a, const double* b, std::size_t n);
    // ||a - b||^2
    double (*dist_sq)(const double* a, const double* b, std::size_t n);
    // ||a||_1, ||a - b||_1
    double (*abs_sum)(const double* a, std::size_t n);
    double (*abs_diff_sum)(const double* a, const double* b, std::size_t n);

    // z[k] *= factor[k] (complex by real)
    void (*scale_spectrum)(std::complex<double>* z, const double* factor, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// AVX2+FMA table, or nullptr when the build or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

/// Table used by the library. Defaults to the best supported backend; the
/// environment variable TVTV_SIMD=scalar forces the reference kernels.
const KernelTable& active() noexcept;

/// Overrides the active backend. Returns false (and changes nothing) if the
/// backend is unavailable.
bool select(Backend backend) noexcept;

/// Number of OpenMP threads used by kernels and FFT-free loops; 0 means the
/// hardware count.
void set_num_threads(int threads);
int num_threads() noexcept;

} // namespace tvtv::simd
