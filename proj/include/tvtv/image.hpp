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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tvtv {

/// Index of pixel (row, col) in a column-major vectorised plane with `rows` rows.
constexpr std::size_t vec_index(std::size_t row, std::size_t col, std::size_t rows) noexcept {
    return col * rows + row;
}

/// One channel of an image. Pixels are stored column-major, so element
/// (i, j) lives at j*rows + i, which is the vectorisation the solver works on.
/// Values are nominally in [0, 1] and always finite.
class ImagePlane {
public:
    ImagePlane() = default;
    ImagePlane(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Takes ownership of column-major data. Throws DimensionError on a size
    /// mismatch and InvalidArgument on non-finite values.
    ImagePlane(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    static ImagePlane from_row_major(std::size_t rows, std::size_t cols,
                                     std::span<const double> row_major);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(std::size_t row, std::size_t col) const { return data_[vec_index(row, col, rows_)]; }
    double& operator()(std::size_t row, std::size_t col) { return data_[vec_index(row, col, rows_)]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }
    const std::vector<double>& vec() const noexcept { return data_; }

    std::vector<double> to_row_major() const;

    bool same_shape(const ImagePlane& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Throws InvalidArgument naming `what` if any value is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

/// Throws DimensionError unless both planes have the same shape.
void require_same_shape(const ImagePlane& a, const ImagePlane& b, const char* what);

/// A 1- or 3-channel image (gray or RGB).
struct ColorImage {
    std::vector<ImagePlane> channels;

    std::size_t rows() const noexcept { return channels.empty() ? 0 : channels.front().rows(); }
    std::size_t cols() const noexcept { return channels.empty() ? 0 : channels.front().cols(); }
    bool is_gray() const noexcept { return channels.size() == 1; }
    bool is_rgb() const noexcept { return channels.size() == 3; }
};

// BT.601 full-range luma weights.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

ImagePlane rgb_to_luminance(const ImagePlane& r, const ImagePlane& g, const ImagePlane& b);

/// Luminance of an RGB image, or the single channel of a gray image.
ImagePlane luminance(const ColorImage& image);

struct YCbCrPlanes {
    ImagePlane y;
    ImagePlane cb;
    ImagePlane cr;
};

/// Full-range BT.601 YCbCr with chroma centred on 0.5.
YCbCrPlanes rgb_to_ycbcr(const ImagePlane& r, const ImagePlane& g, const ImagePlane& b);
std::array<ImagePlane, 3> ycbcr_to_rgb(const ImagePlane& y, const ImagePlane& cb, const ImagePlane& cr);

ImagePlane clamp01(const ImagePlane& plane);

} // namespace tvtv
