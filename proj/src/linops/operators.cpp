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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace tvtv {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                             std::to_string(got));
}

// Wrapped HR indices read by each LR sample: table[i*T + k] = (s*i + offset + k) mod extent.
std::vector<std::size_t> tap_indices(std::size_t lr_extent, std::size_t extent, int scale, int offset,
                                     std::size_t taps) {
    std::vector<std::size_t> table(lr_extent * taps);
    const long long ext = static_cast<long long>(extent);
    for (std::size_t i = 0; i < lr_extent; ++i) {
        for (std::size_t k = 0; k < taps; ++k) {
            long long idx = static_cast<long long>(i) * scale + offset + static_cast<long long>(k);
            idx %= ext;
            if (idx < 0)
                idx += ext;
            table[i * taps + k] = static_cast<std::size_t>(idx);
        }
    }
    return table;
}

void bicubic_forward(const OperatorSpec& op, std::span<const double> x, std::span<double> y) {
    const std::size_t rows = op.rows(), cols = op.cols();
    const std::size_t lr_rows = op.lr_rows(), lr_cols = op.lr_cols();
    const auto taps = op.taps();
    const std::size_t t = taps.size();
    const auto row_idx = tap_indices(lr_rows, rows, op.scale(), op.tap_offset(), t);
    const auto col_idx = tap_indices(lr_cols, cols, op.scale(), op.tap_offset(), t);

    std::vector<double> tmp(lr_rows * cols);
    for (std::size_t c = 0; c < cols; ++c) {
        const double* col = x.data() + c * rows;
        double* dst = tmp.data() + c * lr_rows;
        for (std::size_t i = 0; i < lr_rows; ++i) {
            const std::size_t* idx = row_idx.data() + i * t;
            double acc = 0.0;
            for (std::size_t k = 0; k < t; ++k)
                acc += taps[k] * col[idx[k]];
            dst[i] = acc;
        }
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t l = 0; l < lr_cols; ++l) {
        double* dst = y.data() + l * lr_rows;
        for (std::size_t k = 0; k < t; ++k) {
            const double w = taps[k];
            const double* src = tmp.data() + col_idx[l * t + k] * lr_rows;
            for (std::size_t i = 0; i < lr_rows; ++i)
                dst[i] += w * src[i];
        }
    }
}

void bicubic_adjoint(const OperatorSpec& op, std::span<const double> y, std::span<double> x) {
    const std::size_t rows = op.rows(), cols = op.cols();
    const std::size_t lr_rows = op.lr_rows(), lr_cols = op.lr_cols();
    const auto taps = op.taps();
    const std::size_t t = taps.size();
    const auto row_idx = tap_indices(lr_rows, rows, op.scale(), op.tap_offset(), t);
    const auto col_idx = tap_indices(lr_cols, cols, op.scale(), op.tap_offset(), t);

    std::vector<double> tmp(lr_rows * cols, 0.0);
    for (std::size_t l = 0; l < lr_cols; ++l) {
        const double* src = y.data() + l * lr_rows;
        for (std::size_t k = 0; k < t; ++k) {
            const double w = taps[k];
            double* dst = tmp.data() + col_idx[l * t + k] * lr_rows;
            for (std::size_t i = 0; i < lr_rows; ++i)
                dst[i] += w * src[i];
        }
    }
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        const double* src = tmp.data() + c * lr_rows;
        double* col = x.data() + c * rows;
        for (std::size_t i = 0; i < lr_rows; ++i) {
            const std::size_t* idx = row_idx.data() + i * t;
            for (std::size_t k = 0; k < t; ++k)
                col[idx[k]] += taps[k] * src[i];
        }
    }
}

void box_forward(const OperatorSpec& op, std::span<const double> x, std::span<double> y) {
    const std::size_t rows = op.rows(), s = static_cast<std::size_t>(op.scale());
    const std::size_t lr_rows = op.lr_rows(), lr_cols = op.lr_cols();
    const double inv = 1.0 / static_cast<double>(s * s);
    for (std::size_t l = 0; l < lr_cols; ++l) {
        for (std::size_t i = 0; i < lr_rows; ++i) {
            double acc = 0.0;
            for (std::size_t b = 0; b < s; ++b) {
                const double* col = x.data() + (s * l + b) * rows + s * i;
                for (std::size_t a = 0; a < s; ++a)
                    acc += col[a];
            }
            y[l * lr_rows + i] = acc * inv;
        }
    }
}

void box_adjoint(const OperatorSpec& op, std::span<const double> y, std::span<double> x) {
    const std::size_t rows = op.rows(), s = static_cast<std::size_t>(op.scale());
    const std::size_t lr_rows = op.lr_rows(), lr_cols = op.lr_cols();
    const double inv = 1.0 / static_cast<double>(s * s);
    for (std::size_t l = 0; l < lr_cols; ++l) {
        for (std::size_t i = 0; i < lr_rows; ++i) {
            const double v = y[l * lr_rows + i] * inv;
            for (std::size_t b = 0; b < s; ++b) {
                double* col = x.data() + (s * l + b) * rows + s * i;
                for (std::size_t a = 0; a < s; ++a)
                    col[a] = v;
            }
        }
    }
}

void subsample_forward(const OperatorSpec& op, std::span<const double> x, std::span<double> y) {
    const std::size_t rows = op.rows(), s = static_cast<std::size_t>(op.scale());
    const std::size_t lr_rows = op.lr_rows(), lr_cols = op.lr_cols();
    for (std::size_t l = 0; l < lr_cols; ++l)
        for (std::size_t i = 0; i < lr_rows; ++i)
            y[l * lr_rows + i] = x[(s * l) * rows + s * i];
}

void subsample_adjoint(const OperatorSpec& op, std::span<const double> y, std::span<double> x) {
    const std::size_t rows = op.rows(), s = static_cast<std::size_t>(op.scale());
    const std::size_t lr_rows = op.lr_rows(), lr_cols = op.lr_cols();
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t l = 0; l < lr_cols; ++l)
        for (std::size_t i = 0; i < lr_rows; ++i)
            x[(s * l) * rows + s * i] = y[l * lr_rows + i];
}

} // namespace

std::string_view to_string(OperatorKind kind) noexcept {
    switch (kind) {
    case OperatorKind::Subsample: return "subsample";
    case OperatorKind::BoxAverage: return "box";
    case OperatorKind::Bicubic: return "bicubic";
    case OperatorKind::VerticalDiff: return "vertical-diff";
    case OperatorKind::HorizontalDiff: return "horizontal-diff";
    case OperatorKind::StackedDiff: return "stacked-diff";
    }
    return "unknown";
}

double keys_cubic(double x) noexcept {
    const double a = -0.5;
    const double t = std::fabs(x);
    if (t <= 1.0)
        return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    if (t < 2.0)
        return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
    return 0.0;
}

OperatorSpec::OperatorSpec(OperatorKind kind, std::size_t rows, std::size_t cols, int scale)
    : kind_(kind), rows_(rows), cols_(cols), scale_(scale) {
    if (rows == 0 || cols == 0)
        throw DimensionError("OperatorSpec: empty plane");
    if (!is_downsampling())
        return;
    if (scale < 1)
        throw InvalidArgument("OperatorSpec: scale must be >= 1");
    const auto s = static_cast<std::size_t>(scale);
    if (rows % s != 0 || cols % s != 0)
        throw DimensionError("OperatorSpec: " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " is not divisible by scale " + std::to_string(scale));
    if (kind == OperatorKind::Bicubic) {
        // LR sample i sits at HR coordinate s*i + (s-1)/2; the kernel is
        // stretched by s and renormalised to unit sum.
        const double centre = (scale - 1) / 2.0;
        double sum = 0.0;
        for (int k = -2 * scale; k <= 3 * scale; ++k) {
            const double d = (k - centre) / scale;
            if (std::fabs(d) >= 2.0)
                continue;
            if (taps_.empty())
                tap_offset_ = k;
            taps_.push_back(keys_cubic(d));
            sum += taps_.back();
        }
        for (double& t : taps_)
            t /= sum;
    }
}

OperatorSpec OperatorSpec::subsample(std::size_t rows, std::size_t cols, int scale) {
    return OperatorSpec(OperatorKind::Subsample, rows, cols, scale);
}
OperatorSpec OperatorSpec::box_average(std::size_t rows, std::size_t cols, int scale) {
    return OperatorSpec(OperatorKind::BoxAverage, rows, cols, scale);
}
OperatorSpec OperatorSpec::bicubic(std::size_t rows, std::size_t cols, int scale) {
    return OperatorSpec(OperatorKind::Bicubic, rows, cols, scale);
}
OperatorSpec OperatorSpec::downsampling(OperatorKind kind, std::size_t rows, std::size_t cols, int scale) {
    if (kind != OperatorKind::Subsample && kind != OperatorKind::BoxAverage && kind != OperatorKind::Bicubic)
        throw InvalidArgument("OperatorSpec::downsampling: not a downsampling kind");
    return OperatorSpec(kind, rows, cols, scale);
}
OperatorSpec OperatorSpec::vertical_diff(std::size_t rows, std::size_t cols) {
    return OperatorSpec(OperatorKind::VerticalDiff, rows, cols, 1);
}
OperatorSpec OperatorSpec::horizontal_diff(std::size_t rows, std::size_t cols) {
    return OperatorSpec(OperatorKind::HorizontalDiff, rows, cols, 1);
}
OperatorSpec OperatorSpec::stacked_diff(std::size_t rows, std::size_t cols) {
    return OperatorSpec(OperatorKind::StackedDiff, rows, cols, 1);
}

bool OperatorSpec::is_downsampling() const noexcept {
    return kind_ == OperatorKind::Subsample || kind_ == OperatorKind::BoxAverage || kind_ == OperatorKind::Bicubic;
}

std::size_t OperatorSpec::output_size() const noexcept {
    if (is_downsampling())
        return lr_rows() * lr_cols();
    if (kind_ == OperatorKind::StackedDiff)
        return 2 * input_size();
    return input_size();
}

std::string OperatorSpec::name() const {
    std::string out(to_string(kind_));
    if (is_downsampling())
        out += ":" + std::to_string(scale_);
    return out;
}

OperatorString parse_operator(std::string_view text, int default_scale) {
    const auto colon = text.find(':');
    const std::string_view kind_text = text.substr(0, colon);
    OperatorKind kind;
    if (kind_text == "subsample" || kind_text == "sub")
        kind = OperatorKind::Subsample;
    else if (kind_text == "box")
        kind = OperatorKind::BoxAverage;
    else if (kind_text == "bicubic" || kind_text == "bic")
        kind = OperatorKind::Bicubic;
    else
        throw InvalidArgument("unknown operator '" + std::string(text) + "' (expected subsample, box or bicubic)");

    int scale = default_scale;
    if (colon != std::string_view::npos) {
        const std::string_view num = text.substr(colon + 1);
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), scale);
        if (ec != std::errc() || ptr != num.data() + num.size())
            throw InvalidArgument("bad scale in operator '" + std::string(text) + "'");
    }
    if (scale < 1)
        throw InvalidArgument("operator '" + std::string(text) + "' needs a scale >= 1");
    return {kind, scale};
}

OperatorSpec make_operator(std::string_view text, std::size_t rows, std::size_t cols, int default_scale) {
    const auto parsed = parse_operator(text, default_scale);
    return OperatorSpec::downsampling(parsed.kind, rows, cols, parsed.scale);
}

void apply_forward(const OperatorSpec& op, std::span<const double> x, std::span<double> out) {
    require_size(x.size(), op.input_size(), "apply_forward input");
    require_size(out.size(), op.output_size(), "apply_forward output");
    const auto& k = simd::active();
    switch (op.kind()) {
    case OperatorKind::Subsample: subsample_forward(op, x, out); return;
    case OperatorKind::BoxAverage: box_forward(op, x, out); return;
    case OperatorKind::Bicubic: bicubic_forward(op, x, out); return;
    case OperatorKind::StackedDiff: k.diff_forward(x.data(), op.rows(), op.cols(), out.data()); return;
    case OperatorKind::VerticalDiff:
    case OperatorKind::HorizontalDiff: {
        std::vector<double> both(2 * op.input_size());
        k.diff_forward(x.data(), op.rows(), op.cols(), both.data());
        const auto first = both.begin() + (op.kind() == OperatorKind::VerticalDiff ? 0 : op.input_size());
        std::copy(first, first + static_cast<std::ptrdiff_t>(op.input_size()), out.begin());
        return;
    }
    }
}

void apply_adjoint(const OperatorSpec& op, std::span<const double> y, std::span<double> out) {
    require_size(y.size(), op.output_size(), "apply_adjoint input");
    require_size(out.size(), op.input_size(), "apply_adjoint output");
    const auto& k = simd::active();
    switch (op.kind()) {
    case OperatorKind::Subsample: subsample_adjoint(op, y, out); return;
    case OperatorKind::BoxAverage: box_adjoint(op, y, out); return;
    case OperatorKind::Bicubic: bicubic_adjoint(op, y, out); return;
    case OperatorKind::StackedDiff: k.diff_adjoint(y.data(), op.rows(), op.cols(), out.data()); return;
    case OperatorKind::VerticalDiff:
    case OperatorKind::HorizontalDiff: {
        std::vector<double> both(2 * op.input_size(), 0.0);
        const auto first = both.begin() + (op.kind() == OperatorKind::VerticalDiff ? 0 : op.input_size());
        std::copy(y.begin(), y.end(), first);
        k.diff_adjoint(both.data(), op.rows(), op.cols(), out.data());
        return;
    }
    }
}

std::vector<double> apply_forward(const OperatorSpec& op, std::span<const double> x) {
    std::vector<double> out(op.output_size());
    apply_forward(op, x, out);
    return out;
}

std::vector<double> apply_adjoint(const OperatorSpec& op, std::span<const double> y) {
    std::vector<double> out(op.input_size());
    apply_adjoint(op, y, out);
    return out;
}

ImagePlane downsample(const OperatorSpec& op, const ImagePlane& plane) {
    if (!op.is_downsampling())
        throw InvalidArgument("downsample: not a downsampling operator");
    if (plane.rows() != op.rows() || plane.cols() != op.cols())
        throw DimensionError("downsample: plane does not match operator dimensions");
    return ImagePlane(op.lr_rows(), op.lr_cols(), apply_forward(op, plane.data()));
}

double tv_norm(std::span<const double> x, std::size_t rows, std::size_t cols) {
    require_size(x.size(), rows * cols, "tv_norm");
    const auto& k = simd::active();
    std::vector<double> dx(2 * x.size());
    k.diff_forward(x.data(), rows, cols, dx.data());
    return k.abs_sum(dx.data(), dx.size());
}

double tvtv_objective(std::span<const double> x, std::span<const double> w, std::size_t rows, std::size_t cols,
                      double beta) {
    require_size(w.size(), x.size(), "tvtv_objective");
    const auto& k = simd::active();
    std::vector<double> dx(2 * x.size()), dw(2 * x.size());
    k.diff_forward(x.data(), rows, cols, dx.data());
    k.diff_forward(w.data(), rows, cols, dw.data());
    return k.abs_sum(dx.data(), dx.size()) + beta * k.abs_diff_sum(dx.data(), dw.data(), dx.size());
}

} // namespace tvtv
