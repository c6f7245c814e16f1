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

#include "tvtv/image.hpp"
#include "tvtv/linops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace tvtv::test {

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v)
        x = dist(rng);
    return v;
}

inline ImagePlane random_plane(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    return ImagePlane(rows, cols, random_vector(rows * cols, rng));
}

/// A few random rectangles of constant intensity on a black background.
inline ImagePlane piecewise_constant(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int rects = 4) {
    ImagePlane g(rows, cols, 0.0);
    std::uniform_int_distribution<std::size_t> r0(0, rows - 1), c0(0, cols - 1);
    std::uniform_int_distribution<std::size_t> ext(2, std::max<std::size_t>(2, rows / 2));
    std::uniform_real_distribution<double> level(0.0, 1.0);
    for (int k = 0; k < rects; ++k) {
        const std::size_t i0 = r0(rng), j0 = c0(rng), h = ext(rng), w = ext(rng);
        const double v = level(rng);
        for (std::size_t j = j0; j < std::min(cols, j0 + w); ++j)
            for (std::size_t i = i0; i < std::min(rows, i0 + h); ++i)
                g(i, j) = v;
    }
    return g;
}

/// Nearest-neighbour upsampling by an integer factor.
inline ImagePlane nearest_upsample(const ImagePlane& lr, int scale) {
    const std::size_t s = static_cast<std::size_t>(scale);
    ImagePlane out(lr.rows() * s, lr.cols() * s);
    for (std::size_t j = 0; j < out.cols(); ++j)
        for (std::size_t i = 0; i < out.rows(); ++i)
            out(i, j) = lr(i / s, j / s);
    return out;
}

inline double norm2(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v)
        acc += x * x;
    return std::sqrt(acc);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("tvtv_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace tvtv::test
