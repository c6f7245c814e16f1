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
#include "tvtv/image.hpp"

#include "tvtv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tvtv {

namespace {

constexpr double kCbScale = 0.5 / (1.0 - kLumaB);
constexpr double kCrScale = 0.5 / (1.0 - kLumaR);

} // namespace

ImagePlane::ImagePlane(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (!std::isfinite(fill))
        throw InvalidArgument("ImagePlane: fill value is not finite");
}

ImagePlane::ImagePlane(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("ImagePlane: data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
    require_finite(data_, "ImagePlane");
}

ImagePlane ImagePlane::from_row_major(std::size_t rows, std::size_t cols,
                                      std::span<const double> row_major) {
    if (row_major.size() != rows * cols)
        throw DimensionError("ImagePlane::from_row_major: data length mismatch");
    std::vector<double> data(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            data[vec_index(i, j, rows)] = row_major[i * cols + j];
    return ImagePlane(rows, cols, std::move(data));
}

std::vector<double> ImagePlane::to_row_major() const {
    std::vector<double> out(data_.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out[i * cols_ + j] = data_[vec_index(i, j, rows_)];
    return out;
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v))
            throw InvalidArgument(std::string(what) + ": non-finite value");
    }
}

void require_same_shape(const ImagePlane& a, const ImagePlane& b, const char* what) {
    if (!a.same_shape(b))
        throw DimensionError(std::string(what) + ": shape " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
}

ImagePlane rgb_to_luminance(const ImagePlane& r, const ImagePlane& g, const ImagePlane& b) {
    require_same_shape(r, g, "rgb_to_luminance");
    require_same_shape(r, b, "rgb_to_luminance");
    std::vector<double> y(r.size());
    const auto rd = r.data(), gd = g.data(), bd = b.data();
    for (std::size_t k = 0; k < y.size(); ++k)
        y[k] = kLumaR * rd[k] + kLumaG * gd[k] + kLumaB * bd[k];
    return ImagePlane(r.rows(), r.cols(), std::move(y));
}

ImagePlane luminance(const ColorImage& image) {
    if (image.is_gray())
        return image.channels.front();
    if (image.is_rgb())
        return rgb_to_luminance(image.channels[0], image.channels[1], image.channels[2]);
    throw InvalidArgument("luminance: expected 1 or 3 channels, got " +
                          std::to_string(image.channels.size()));
}

YCbCrPlanes rgb_to_ycbcr(const ImagePlane& r, const ImagePlane& g, const ImagePlane& b) {
    const ImagePlane y = rgb_to_luminance(r, g, b);
    std::vector<double> cb(y.size()), cr(y.size());
    const auto yd = y.data(), rd = r.data(), bd = b.data();
    for (std::size_t k = 0; k < y.size(); ++k) {
        cb[k] = 0.5 + kCbScale * (bd[k] - yd[k]);
        cr[k] = 0.5 + kCrScale * (rd[k] - yd[k]);
    }
    const std::size_t rows = y.rows(), cols = y.cols();
    return {y, ImagePlane(rows, cols, std::move(cb)), ImagePlane(rows, cols, std::move(cr))};
}

std::array<ImagePlane, 3> ycbcr_to_rgb(const ImagePlane& y, const ImagePlane& cb, const ImagePlane& cr) {
    require_same_shape(y, cb, "ycbcr_to_rgb");
    require_same_shape(y, cr, "ycbcr_to_rgb");
    const std::size_t n = y.size();
    std::vector<double> r(n), g(n), b(n);
    const auto yd = y.data(), cbd = cb.data(), crd = cr.data();
    for (std::size_t k = 0; k < n; ++k) {
        r[k] = yd[k] + (crd[k] - 0.5) / kCrScale;
        b[k] = yd[k] + (cbd[k] - 0.5) / kCbScale;
        g[k] = (yd[k] - kLumaR * r[k] - kLumaB * b[k]) / kLumaG;
    }
    return {ImagePlane(y.rows(), y.cols(), std::move(r)), ImagePlane(y.rows(), y.cols(), std::move(g)),
            ImagePlane(y.rows(), y.cols(), std::move(b))};
}

ImagePlane clamp01(const ImagePlane& plane) {
    std::vector<double> out(plane.data().begin(), plane.data().end());
    for (double& v : out)
        v = std::clamp(v, 0.0, 1.0);
    return ImagePlane(plane.rows(), plane.cols(), std::move(out));
}

} // namespace tvtv
