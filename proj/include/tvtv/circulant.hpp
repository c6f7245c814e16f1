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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace tvtv {

/// Real 2-D DFT of column-major rows x cols planes. Only the non-redundant
/// half spectrum is kept: cols x (rows/2 + 1) coefficients, with the rows
/// axis halved. Transforms may run concurrently; plan creation is serialised
/// internally.
class Fft2d {
public:
    Fft2d(std::size_t rows, std::size_t cols);
    ~Fft2d();
    Fft2d(const Fft2d&) = delete;
    Fft2d& operator=(const Fft2d&) = delete;

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return rows_ * cols_; }
    std::size_t spectrum_size() const noexcept { return cols_ * (rows_ / 2 + 1); }

    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

    /// Unnormalised inverse (the result is n times the true inverse).
    /// Destroys `in`.
    void inverse(std::span<std::complex<double>> in, std::span<double> out) const;

private:
    struct Plans;
    std::size_t rows_;
    std::size_t cols_;
    std::unique_ptr<Plans> plans_;
};

/// A 2-D circulant operator given by its generator g (a column-major plane):
/// (C x)(p) = sum_q g(p - q) x(q), indices taken modulo the plane size. The
/// DFT of the generator is cached, so application costs two FFTs.
class CirculantKernel {
public:
    CirculantKernel(std::size_t rows, std::size_t cols, std::vector<double> generator);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return rows_ * cols_; }

    std::span<const double> generator() const noexcept { return generator_; }
    std::span<const std::complex<double>> spectrum() const noexcept { return spectrum_; }

    void apply(std::span<const double> x, std::span<double> out) const;
    void apply_adjoint(std::span<const double> x, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> x) const;

    const std::shared_ptr<const Fft2d>& fft() const noexcept { return fft_; }

private:
    void multiply(std::span<const double> x, std::span<double> out, bool conjugate) const;

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> generator_;
    std::shared_ptr<const Fft2d> fft_;
    std::vector<std::complex<double>> spectrum_;
};

} // namespace tvtv
