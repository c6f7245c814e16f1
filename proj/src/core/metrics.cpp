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
#include "tvtv/metrics.hpp"

#include "tvtv/errors.hpp"

#include <array>
#include <cmath>

namespace tvtv {

namespace {

std::array<double, kSsimWindow> gaussian_window() {
    std::array<double, kSsimWindow> w{};
    const double c = (kSsimWindow - 1) / 2.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < kSsimWindow; ++k) {
        const double d = static_cast<double>(k) - c;
        w[k] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
        sum += w[k];
    }
    for (double& v : w)
        v /= sum;
    return w;
}

// 'valid' separable filtering: output is (rows-10) x (cols-10), column-major.
std::vector<double> filter_valid(std::span<const double> in, std::size_t rows, std::size_t cols,
                                 const std::array<double, kSsimWindow>& w) {
    const std::size_t out_rows = rows - kSsimWindow + 1;
    const std::size_t out_cols = cols - kSsimWindow + 1;
    std::vector<double> tmp(out_rows * cols);
    for (std::size_t j = 0; j < cols; ++j) {
        const double* col = in.data() + j * rows;
        for (std::size_t i = 0; i < out_rows; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kSsimWindow; ++k)
                acc += w[k] * col[i + k];
            tmp[j * out_rows + i] = acc;
        }
    }
    std::vector<double> out(out_rows * out_cols);
    for (std::size_t j = 0; j < out_cols; ++j) {
        for (std::size_t i = 0; i < out_rows; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < kSsimWindow; ++k)
                acc += w[k] * tmp[(j + k) * out_rows + i];
            out[j * out_rows + i] = acc;
        }
    }
    return out;
}

} // namespace

double mean_squared_error(const ImagePlane& reference, const ImagePlane& test) {
    require_same_shape(reference, test, "mean_squared_error");
    if (reference.empty())
        throw DimensionError("mean_squared_error: empty image");
    const auto a = reference.data(), b = test.data();
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr(const ImagePlane& reference, const ImagePlane& test, double peak) {
    if (!(peak > 0.0))
        throw InvalidArgument("psnr: peak must be positive");
    const double mse = mean_squared_error(reference, test);
    if (mse == 0.0)
        return kPsnrIdentical;
    return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const ImagePlane& reference, const ImagePlane& test, double peak) {
    require_same_shape(reference, test, "ssim");
    if (reference.rows() < kSsimWindow || reference.cols() < kSsimWindow)
        throw DimensionError("ssim: image smaller than the 11x11 window");
    if (!(peak > 0.0))
        throw InvalidArgument("ssim: peak must be positive");

    const std::size_t rows = reference.rows(), cols = reference.cols(), n = reference.size();
    const auto x = reference.data(), y = test.data();
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t k = 0; k < n; ++k) {
        xx[k] = x[k] * x[k];
        yy[k] = y[k] * y[k];
        xy[k] = x[k] * y[k];
    }
    const auto w = gaussian_window();
    const auto mu_x = filter_valid(x, rows, cols, w);
    const auto mu_y = filter_valid(y, rows, cols, w);
    const auto e_xx = filter_valid(xx, rows, cols, w);
    const auto e_yy = filter_valid(yy, rows, cols, w);
    const auto e_xy = filter_valid(xy, rows, cols, w);

    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    double sum = 0.0;
    for (std::size_t k = 0; k < mu_x.size(); ++k) {
        const double mx = mu_x[k], my = mu_y[k];
        const double vx = e_xx[k] - mx * mx;
        const double vy = e_yy[k] - my * my;
        const double cov = e_xy[k] - mx * my;
        const double num = (2.0 * (mx * my) + c1) * (2.0 * cov + c2);
        const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
        sum += num / den;
    }
    return sum / static_cast<double>(mu_x.size());
}

QualityScores evaluate_quality(const ImagePlane& reference, const ImagePlane& test, double peak) {
    return {psnr(reference, test, peak), ssim(reference, test, peak)};
}

} // namespace tvtv
