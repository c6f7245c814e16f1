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
#include "helpers.hpp"
#include "oracle.hpp"

#include "tvtv/errors.hpp"
#include "tvtv/image.hpp"

#include <doctest.h>

#include <limits>

using namespace tvtv;

TEST_SUITE("image") {

TEST_CASE("plane construction validates size and finiteness") {
    CHECK_THROWS_AS(ImagePlane(2, 3, std::vector<double>(5)), DimensionError);
    std::vector<double> bad(6, 0.0);
    bad[4] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ImagePlane(2, 3, bad), InvalidArgument);
    bad[4] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ImagePlane(2, 3, bad), InvalidArgument);
    CHECK_THROWS_AS(ImagePlane(2, 2, std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
}

TEST_CASE("vectorisation is column-major") {
    // 2x3 row-major [[1 2 3] [4 5 6]]
    const std::vector<double> rm{1, 2, 3, 4, 5, 6};
    const auto p = ImagePlane::from_row_major(2, 3, rm);
    CHECK(p.vec() == std::vector<double>{1, 4, 2, 5, 3, 6});
    CHECK(p(1, 2) == 6.0);
    CHECK(p.data()[vec_index(1, 2, 2)] == 6.0);
    CHECK(p.to_row_major() == rm);
}

TEST_CASE("vec/unvec round trip for many shapes") {
    std::mt19937_64 rng(1);
    for (std::size_t m = 1; m <= 7; ++m) {
        for (std::size_t n = 1; n <= 7; ++n) {
            const auto rm = test::random_vector(m * n, rng);
            const auto p = ImagePlane::from_row_major(m, n, rm);
            CHECK(p.to_row_major() == rm);
            const ImagePlane q(m, n, p.vec());
            CHECK(q.vec() == p.vec());
        }
    }
}

TEST_CASE("luminance of gray and pure red") {
    const ImagePlane half(4, 5, 0.5), one(4, 5, 1.0), zero(4, 5, 0.0);
    const auto y = rgb_to_luminance(half, half, half);
    for (double v : y.data())
        CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
    const auto red = rgb_to_luminance(one, zero, zero);
    for (double v : red.data())
        CHECK(v == doctest::Approx(0.299).epsilon(1e-15));
}

TEST_CASE("luminance matches a scalar loop on random RGB") {
    std::mt19937_64 rng(2);
    const auto r = test::random_plane(8, 8, rng), g = test::random_plane(8, 8, rng), b = test::random_plane(8, 8, rng);
    const auto y = rgb_to_luminance(r, g, b);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(std::abs(y(i, j) - oracle::loop_luminance(r(i, j), g(i, j), b(i, j))) <= 1e-12);
}

TEST_CASE("luminance of a gray triple is the common channel") {
    std::mt19937_64 rng(3);
    const auto c = test::random_plane(9, 6, rng);
    const auto y = rgb_to_luminance(c, c, c);
    CHECK(test::max_abs_diff(y.data(), c.data()) <= 1e-12);
    const auto gray = luminance(ColorImage{{c}});
    CHECK(gray.vec() == c.vec());
}

TEST_CASE("luminance rejects mismatched planes") {
    const ImagePlane a(4, 4), b(4, 5);
    CHECK_THROWS_AS(rgb_to_luminance(a, a, b), DimensionError);
    CHECK_THROWS_AS(luminance(ColorImage{{a, a}}), InvalidArgument);
}

TEST_CASE("YCbCr round trip") {
    std::mt19937_64 rng(4);
    const auto r = test::random_plane(6, 7, rng), g = test::random_plane(6, 7, rng), b = test::random_plane(6, 7, rng);
    const auto ycc = rgb_to_ycbcr(r, g, b);
    CHECK(ycc.y.vec() == rgb_to_luminance(r, g, b).vec());
    const auto back = ycbcr_to_rgb(ycc.y, ycc.cb, ycc.cr);
    CHECK(test::max_abs_diff(back[0].data(), r.data()) <= 1e-12);
    CHECK(test::max_abs_diff(back[1].data(), g.data()) <= 1e-12);
    CHECK(test::max_abs_diff(back[2].data(), b.data()) <= 1e-12);
}

TEST_CASE("clamp01") {
    const auto p = ImagePlane::from_row_major(1, 3, std::vector<double>{-0.5, 0.25, 1.5});
    CHECK(clamp01(p).vec() == std::vector<double>{0.0, 0.25, 1.0});
}

}
