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

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace tvtv::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(TVTV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() noexcept {
    if (const char* env = std::getenv("TVTV_SIMD"); env && std::string_view(env) == "scalar")
        return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels())
        return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

std::atomic<int> g_threads{0};

} // namespace

#if !defined(TVTV_HAVE_AVX2)
const KernelTable* detail::avx2_table() noexcept { return nullptr; }
#endif

const KernelTable* avx2_kernels() noexcept {
    static const bool supported = cpu_has_avx2();
    return supported ? detail::avx2_table() : nullptr;
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

bool select(Backend backend) noexcept {
    const KernelTable* table = backend == Backend::Scalar ? &scalar_kernels() : avx2_kernels();
    if (!table)
        return false;
    active_slot().store(table, std::memory_order_release);
    return true;
}

void set_num_threads(int threads) {
    g_threads.store(threads);
    omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int num_threads() noexcept {
    const int t = g_threads.load();
    return t > 0 ? t : omp_get_num_procs();
}

} // namespace tvtv::simd
