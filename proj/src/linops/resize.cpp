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

#include <cmath>

namespace tvtv {

namespace {

std::size_t reflect(long long idx, std::size_t extent) {
    const long long n = static_cast<long long>(extent);
    while (idx < 0 || idx >= n) {
        if (idx < 0)
            idx = -idx - 1;
        if (idx >= n)
            idx = 2 * n - idx - 1;
    }
    return static_cast<std::size_t>(idx);
}

struct Resample1d {
    std::vector<std::size_t> index; // 4 per output sample
    std::vector<double> weight;
};

Resample1d resample_table(std::size_t in, std::size_t out, int scale) {
    Resample1d t;
    t.index.resize(4 * out);
    t.weight.resize(4 * out);
    for (std::size_t o = 0; o < out; ++o) {
        const double c = (static_cast<double>(o) + 0.5) / scale - 0.5;
        const long long base = static_cast<long long>(std::floor(c)) - 1;
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
            t.index[4 * o + k] = reflect(base + k, in);
            t.weight[4 * o + k] = keys_cubic(c - static_cast<double>(base + k));
            sum += t.weight[4 * o + k];
        }
        for (int k = 0; k < 4; ++k)
            t.weight[4 * o + k] /= sum;
    }
    return t;
}

} // namespace

ImagePlane upsample_bicubic(const ImagePlane& plane, int scale) {
    if (scale < 1)
        throw InvalidArgument("upsample_bicubic: scale must be >= 1");
    if (plane.empty())
        throw DimensionError("upsample_bicubic: empty plane");
    const std::size_t rows = plane.rows(), cols = plane.cols();
    const std::size_t out_rows = rows * scale, out_cols = cols * scale;
    const auto rt = resample_table(rows, out_rows, scale);
    const auto ct = resample_table(cols, out_cols, scale);
    const auto src = plane.data();

    std::vector<double> tmp(out_rows * cols);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t o = 0; o < out_rows; ++o) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += rt.weight[4 * o + k] * src[c * rows + rt.index[4 * o + k]];
            tmp[c * out_rows + o] = acc;
        }
    }
    std::vector<double> out(out_rows * out_cols, 0.0);
    for (std::size_t o = 0; o < out_cols; ++o) {
        double* dst = out.data() + o * out_rows;
        for (int k = 0; k < 4; ++k) {
            const double w = ct.weight[4 * o + k];
            const double* col = tmp.data() + ct.index[4 * o + k] * out_rows;
            for (std::size_t i = 0; i < out_rows; ++i)
                dst[i] += w * col[i];
        }
    }
    return ImagePlane(out_rows, out_cols, std::move(out));
}

} // namespace tvtv
