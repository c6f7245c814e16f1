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

#include "tvtv/circulant.hpp"
#include "tvtv/image.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvtv {

enum class OperatorKind { Subsample, BoxAverage, Bicubic, VerticalDiff, HorizontalDiff, StackedDiff };

std::string_view to_string(OperatorKind kind) noexcept;

/// A matrix-free linear operator on column-major rows x cols planes.
///
/// Downsampling kinds map R^n to R^m with m = n / s^2:
///  - subsample: keeps pixel (s*i, s*j) of every s x s block;
///  - box: mean of every s x s block;
///  - bicubic: separable Keys (a = -0.5) filter stretched by s for
///    antialiasing, periodic boundary, evaluated at block centres.
/// Difference kinds are periodic forward differences: vertical and horizontal
/// map R^n to R^n, stacked maps R^n to R^2n as [V; H].
class OperatorSpec {
public:
    static OperatorSpec subsample(std::size_t rows, std::size_t cols, int scale);
    static OperatorSpec box_average(std::size_t rows, std::size_t cols, int scale);
    static OperatorSpec bicubic(std::size_t rows, std::size_t cols, int scale);
    static OperatorSpec downsampling(OperatorKind kind, std::size_t rows, std::size_t cols, int scale);
    static OperatorSpec vertical_diff(std::size_t rows, std::size_t cols);
    static OperatorSpec horizontal_diff(std::size_t rows, std::size_t cols);
    static OperatorSpec stacked_diff(std::size_t rows, std::size_t cols);

    OperatorKind kind() const noexcept { return kind_; }
    int scale() const noexcept { return scale_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t lr_rows() const noexcept { return rows_ / scale_; }
    std::size_t lr_cols() const noexcept { return cols_ / scale_; }
    std::size_t input_size() const noexcept { return rows_ * cols_; }
    std::size_t output_size() const noexcept;
    bool is_downsampling() const noexcept;

    /// 1-D bicubic filter; tap k reads HR index s*i + tap_offset() + k.
    std::span<const double> taps() const noexcept { return taps_; }
    int tap_offset() const noexcept { return tap_offset_; }

    /// "box:4" style name for downsampling kinds, the kind name otherwise.
    std::string name() const;

private:
    OperatorSpec(OperatorKind kind, std::size_t rows, std::size_t cols, int scale);

    OperatorKind kind_;
    std::size_t rows_;
    std::size_t cols_;
    int scale_;
    std::vector<double> taps_;
    int tap_offset_ = 0;
};

struct OperatorString {
    OperatorKind kind;
    int scale;
};

/// Parses "subsample:4", "box:4", "bicubic:4". A bare kind takes
/// `default_scale` (which must then be >= 1).
OperatorString parse_operator(std::string_view text, int default_scale = 0);
OperatorSpec make_operator(std::string_view text, std::size_t rows, std::size_t cols, int default_scale = 0);

/// Keys cubic convolution kernel with a = -0.5.
double keys_cubic(double x) noexcept;

void apply_forward(const OperatorSpec& op, std::span<const double> x, std::span<double> out);
void apply_adjoint(const OperatorSpec& op, std::span<const double> y, std::span<double> out);
std::vector<double> apply_forward(const OperatorSpec& op, std::span<const double> x);
std::vector<double> apply_adjoint(const OperatorSpec& op, std::span<const double> y);

/// Downsamples a plane with a downsampling operator.
ImagePlane downsample(const OperatorSpec& op, const ImagePlane& plane);

/// Anisotropic TV: ||D x||_1 with periodic forward differences.
double tv_norm(std::span<const double> x, std::size_t rows, std::size_t cols);

/// ||x||_TV + beta * ||x - w||_TV
double tvtv_objective(std::span<const double> x, std::span<const double> w, std::size_t rows,
                      std::size_t cols, double beta);

// ---------------------------------------------------------------------------
// Conjugate gradient and Gram solves

struct CgOptions {
    double tolerance = 1e-9; // relative to ||rhs||
    int max_iterations = 500;
};

struct CgStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

/// Solves M z = rhs for symmetric positive definite M from a zero start.
/// Throws SolverError (carrying the relative residual) when the tolerance is
/// not met within the iteration cap or the iteration breaks down.
CgStats conjugate_gradient(const MatVec& apply, std::span<const double> rhs, std::span<double> z,
                           const CgOptions& options = {});

/// Solves A A^T z = rhs for a downsampling operator.
///
/// Subsample and box have A A^T = I and I/s^2 and are solved in closed form.
/// Bicubic uses CG; on the LR grid A A^T is a 2-D circulant, so its matvec
/// is an FFT multiply.
class GramSolver {
public:
    explicit GramSolver(const OperatorSpec& op, CgOptions options = {}, bool force_cg = false);

    /// out = A A^T z
    void apply(std::span<const double> z, std::span<double> out) const;

    CgStats solve(std::span<const double> rhs, std::span<double> out) const;
    std::vector<double> solve(std::span<const double> rhs) const;

    bool uses_cg() const noexcept { return use_cg_; }
    const OperatorSpec& op() const noexcept { return op_; }

private:
    OperatorSpec op_;
    CgOptions options_;
    bool use_cg_;
    std::optional<CirculantKernel> gram_;
};

std::vector<double> solve_gram(const OperatorSpec& op, std::span<const double> rhs, double tolerance = 1e-9);

/// (I + D^T D)^{-1} through the DFT: V and H are circulant, so the inverse is
/// a division by 1 + |DFT(v)|^2 + |DFT(h)|^2 per frequency.
class IdentityPlusGramD {
public:
    IdentityPlusGramD(std::size_t rows, std::size_t cols);

    void solve(std::span<const double> rhs, std::span<double> out) const;
    std::vector<double> solve(std::span<const double> rhs) const;

    /// out = (I + D^T D) x, computed with difference stencils.
    void apply(std::span<const double> x, std::span<double> out) const;

    /// 1 + |DFT(v)|^2 + |DFT(h)|^2 on the half spectrum.
    std::span<const double> denominator() const noexcept { return denominator_; }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::shared_ptr<const Fft2d> fft_;
    std::vector<double> denominator_;
    std::vector<double> inverse_scale_; // 1 / (denominator * n)
};

std::vector<double> solve_identity_plus_gram_D(std::size_t rows, std::size_t cols, std::span<const double> rhs);

CirculantKernel vertical_diff_kernel(std::size_t rows, std::size_t cols);
CirculantKernel horizontal_diff_kernel(std::size_t rows, std::size_t cols);

// ---------------------------------------------------------------------------
// Resampling (not part of the operator catalogue)

/// Bicubic interpolation by an integer factor: Keys a = -0.5, half-pixel
/// centres, symmetric edge extension.
ImagePlane upsample_bicubic(const ImagePlane& plane, int scale);

} // namespace tvtv
