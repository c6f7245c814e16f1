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
// Compiled with -mavx2 -mfma -ffp-contract=off; only reached after a cpuid check.

#include "detail.hpp"

#include <immintrin.h>

namespace tvtv::simd {

namespace {

using detail::for_chunks;
using detail::for_columns;
using detail::reduce_chunks;

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void prox_tvtv(const double* s, const double* wbar, double beta, double rho, double* u, std::size_t n) {
    const double inv = 1.0 / rho;
    const double a = (1.0 + beta) * inv;
    const double b = (1.0 - beta) * inv;
    const double half_rho = 0.5 * rho;
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        const __m256d va = _mm256_set1_pd(a);
        const __m256d vb = _mm256_set1_pd(b);
        const __m256d vbeta = _mm256_set1_pd(beta);
        const __m256d vhr = _mm256_set1_pd(half_rho);
        std::size_t k = begin;
        for (; k + 4 <= end; k += 4) {
            const __m256d vs = _mm256_loadu_pd(s + k);
            const __m256d vw = _mm256_loadu_pd(wbar + k);
            auto objective = [&](__m256d t) {
                const __m256d d = _mm256_sub_pd(t, vs);
                const __m256d lin = _mm256_add_pd(vabs(t), _mm256_mul_pd(vbeta, vabs(_mm256_sub_pd(t, vw))));
                return _mm256_add_pd(lin, _mm256_mul_pd(vhr, _mm256_mul_pd(d, d)));
            };
            __m256d best = _mm256_setzero_pd();
            __m256d best_val = objective(best);
            const __m256d cand[5] = {vw, _mm256_sub_pd(vs, va), _mm256_sub_pd(vs, vb), _mm256_add_pd(vs, vb),
                                     _mm256_add_pd(vs, va)};
            for (const __m256d t : cand) {
                const __m256d val = objective(t);
                const __m256d better = _mm256_cmp_pd(val, best_val, _CMP_LT_OQ);
                best = _mm256_blendv_pd(best, t, better);
                best_val = _mm256_blendv_pd(best_val, val, better);
            }
            _mm256_storeu_pd(u + k, best);
        }
        for (; k < end; ++k)
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
        std::size_t i = 0;
        for (; i + 5 <= rows; i += 4)
            _mm256_storeu_pd(v + i, _mm256_sub_pd(_mm256_loadu_pd(col + i + 1), _mm256_loadu_pd(col + i)));
        for (; i + 1 < rows; ++i)
            v[i] = col[i + 1] - col[i];
        v[rows - 1] = col[0] - col[rows - 1];
        i = 0;
        for (; i + 4 <= rows; i += 4)
            _mm256_storeu_pd(h + i, _mm256_sub_pd(_mm256_loadu_pd(next + i), _mm256_loadu_pd(col + i)));
        for (; i < rows; ++i)
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
        std::size_t i = 1;
        for (; i + 4 <= rows; i += 4) {
            const __m256d va = _mm256_sub_pd(_mm256_loadu_pd(a + i - 1), _mm256_loadu_pd(a + i));
            const __m256d vb = _mm256_sub_pd(_mm256_loadu_pd(b_prev + i), _mm256_loadu_pd(b + i));
            _mm256_storeu_pd(o + i, _mm256_add_pd(va, vb));
        }
        for (; i < rows; ++i)
            o[i] = (a[i - 1] - a[i]) + (b_prev[i] - b[i]);
    });
}

void add(const double* a, const double* b, double* out, std::size_t n) {
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        std::size_t k = begin;
        for (; k + 4 <= end; k += 4)
            _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
        for (; k < end; ++k)
            out[k] = a[k] + b[k];
    });
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        std::size_t k = begin;
        for (; k + 4 <= end; k += 4)
            _mm256_storeu_pd(out + k, _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
        for (; k < end; ++k)
            out[k] = a[k] - b[k];
    });
}

double dual_step(double* dual, const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = begin;
        for (; k + 4 <= end; k += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
            _mm256_storeu_pd(dual + k, _mm256_add_pd(_mm256_loadu_pd(dual + k), d));
            acc = _mm256_fmadd_pd(d, d, acc);
        }
        double tail = 0.0;
        for (; k < end; ++k) {
            const double d = a[k] - b[k];
            dual[k] += d;
            tail += d * d;
        }
        return hsum(acc) + tail;
    });
}

double dot(const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
        std::size_t k = begin;
        for (; k + 8 <= end; k += 8) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
        }
        double tail = 0.0;
        for (; k < end; ++k)
            tail += a[k] * b[k];
        return hsum(_mm256_add_pd(acc0, acc1)) + tail;
    });
}

double dist_sq(const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = begin;
        for (; k + 4 <= end; k += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
            acc = _mm256_fmadd_pd(d, d, acc);
        }
        double tail = 0.0;
        for (; k < end; ++k) {
            const double d = a[k] - b[k];
            tail += d * d;
        }
        return hsum(acc) + tail;
    });
}

double abs_sum(const double* a, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = begin;
        for (; k + 4 <= end; k += 4)
            acc = _mm256_add_pd(acc, vabs(_mm256_loadu_pd(a + k)));
        double tail = 0.0;
        for (; k < end; ++k)
            tail += std::fabs(a[k]);
        return hsum(acc) + tail;
    });
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [&](std::size_t begin, std::size_t end) {
        __m256d acc = _mm256_setzero_pd();
        std::size_t k = begin;
        for (; k + 4 <= end; k += 4)
            acc = _mm256_add_pd(acc, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k))));
        double tail = 0.0;
        for (; k < end; ++k)
            tail += std::fabs(a[k] - b[k]);
        return hsum(acc) + tail;
    });
}

void scale_spectrum(std::complex<double>* z, const double* factor, std::size_t n) {
    double* zd = reinterpret_cast<double*>(z);
    for_chunks(n, [&](std::size_t begin, std::size_t end) {
        std::size_t k = begin;
        for (; k + 2 <= end; k += 2) {
            // (f0, f0, f1, f1)
            const __m256d f = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(factor + k)), 0x50);
            _mm256_storeu_pd(zd + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(zd + 2 * k), f));
        }
        for (; k < end; ++k)
            z[k] = std::complex<double>(z[k].real() * factor[k], z[k].imag() * factor[k]);
    });
}

constexpr KernelTable kAvx2Table{
    Backend::Avx2, "avx2", prox_tvtv, diff_forward, diff_adjoint, add,           sub,
    dual_step,     dot,    dist_sq,   abs_sum,      abs_diff_sum, scale_spectrum,
};

} // namespace

const KernelTable* detail::avx2_table() noexcept { return &kAvx2Table; }

} // namespace tvtv::simd
