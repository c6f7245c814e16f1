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
#include "tvtv/circulant.hpp"

#include "tvtv/errors.hpp"

#include <fftw3.h>

#include <mutex>
#include <string>

namespace tvtv {

namespace {

// FFTW's planner is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

struct Fft2d::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

Fft2d::Fft2d(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), plans_(std::make_unique<Plans>()) {
    if (rows == 0 || cols == 0)
        throw DimensionError("Fft2d: empty plane");
    // A column-major rows x cols array is a row-major cols x rows array.
    const int n0 = static_cast<int>(cols), n1 = static_cast<int>(rows);
    double* real = fftw_alloc_real(size());
    fftw_complex* spec = fftw_alloc_complex(spectrum_size());
    {
        std::lock_guard lock(planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        plans_->r2c = fftw_plan_dft_r2c_2d(n0, n1, real, spec, flags);
        plans_->c2r = fftw_plan_dft_c2r_2d(n0, n1, spec, real, flags | FFTW_DESTROY_INPUT);
    }
    fftw_free(real);
    fftw_free(spec);
    if (!plans_->r2c || !plans_->c2r)
        throw Error("Fft2d: FFTW planning failed for " + std::to_string(rows) + "x" + std::to_string(cols));
}

Fft2d::~Fft2d() {
    if (!plans_)
        return;
    std::lock_guard lock(planner_mutex());
    if (plans_->r2c)
        fftw_destroy_plan(plans_->r2c);
    if (plans_->c2r)
        fftw_destroy_plan(plans_->c2r);
}

void Fft2d::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    if (in.size() != size() || out.size() != spectrum_size())
        throw DimensionError("Fft2d::forward: size mismatch");
    // Out-of-place r2c leaves the input untouched.
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void Fft2d::inverse(std::span<std::complex<double>> in, std::span<double> out) const {
    if (in.size() != spectrum_size() || out.size() != size())
        throw DimensionError("Fft2d::inverse: size mismatch");
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

CirculantKernel::CirculantKernel(std::size_t rows, std::size_t cols, std::vector<double> generator)
    : rows_(rows), cols_(cols), generator_(std::move(generator)), fft_(std::make_shared<Fft2d>(rows, cols)) {
    if (generator_.size() != rows * cols)
        throw DimensionError("CirculantKernel: generator length does not match the plane");
    spectrum_.resize(fft_->spectrum_size());
    fft_->forward(generator_, spectrum_);
}

void CirculantKernel::multiply(std::span<const double> x, std::span<double> out, bool conjugate) const {
    if (x.size() != size() || out.size() != size())
        throw DimensionError("CirculantKernel: vector length does not match the plane");
    std::vector<std::complex<double>> work(spectrum_.size());
    fft_->forward(x, work);
    const double inv_n = 1.0 / static_cast<double>(size());
    for (std::size_t k = 0; k < work.size(); ++k) {
        const std::complex<double> g = conjugate ? std::conj(spectrum_[k]) : spectrum_[k];
        work[k] *= g * inv_n;
    }
    fft_->inverse(work, out);
}

void CirculantKernel::apply(std::span<const double> x, std::span<double> out) const { multiply(x, out, false); }

void CirculantKernel::apply_adjoint(std::span<const double> x, std::span<double> out) const {
    multiply(x, out, true);
}

std::vector<double> CirculantKernel::apply(std::span<const double> x) const {
    std::vector<double> out(size());
    apply(x, out);
    return out;
}

} // namespace tvtv
