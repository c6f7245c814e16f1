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

#include "tvtv/errors.hpp"
#include "tvtv/image_io.hpp"

#include <doctest.h>

#include <fstream>

using namespace tvtv;

namespace {

ImagePlane quantized(const ImagePlane& p) {
    ImagePlane q = p;
    for (double& v : q.data())
        v = quantize_u8(v) / 255.0;
    return q;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("quantize_u8 rounds and clamps") {
    CHECK(quantize_u8(-1.0) == 0);
    CHECK(quantize_u8(2.0) == 255);
    CHECK(quantize_u8(0.5) == 128);
    CHECK(quantize_u8(100.0 / 255.0) == 100);
}

TEST_CASE("gray PNG round trip") {
    test::TempDir dir("io");
    std::mt19937_64 rng(20);
    const auto p = test::random_plane(7, 11, rng);
    write_png(dir / "g.png", p);
    const auto img = read_image(dir / "g.png");
    REQUIRE(img.is_gray());
    CHECK(img.rows() == 7);
    CHECK(img.cols() == 11);
    CHECK(img.channels[0].vec() == quantized(p).vec());
}

TEST_CASE("RGB PNG round trip keeps raster order") {
    test::TempDir dir("io");
    std::mt19937_64 rng(21);
    ColorImage c{{test::random_plane(5, 9, rng), test::random_plane(5, 9, rng), test::random_plane(5, 9, rng)}};
    write_png(dir / "c.png", c);
    const auto img = read_image(dir / "c.png");
    REQUIRE(img.is_rgb());
    for (int k = 0; k < 3; ++k)
        CHECK(img.channels[k].vec() == quantized(c.channels[k]).vec());
}

TEST_CASE("PGM round trip and dispatch by extension") {
    test::TempDir dir("io");
    std::mt19937_64 rng(22);
    const auto p = test::random_plane(6, 4, rng);
    write_image(dir / "p.pgm", ColorImage{{p}});
    std::ifstream in(dir / "p.pgm", std::ios::binary);
    std::string magic;
    in >> magic;
    CHECK(magic == "P5");
    CHECK(read_image(dir / "p.pgm").channels[0].vec() == quantized(p).vec());
}

TEST_CASE("binary PPM is readable") {
    test::TempDir dir("io");
    {
        std::ofstream out(dir / "x.ppm", std::ios::binary);
        out << "P6\n# comment\n2 1\n255\n";
        const unsigned char px[] = {255, 0, 0, 0, 0, 255};
        out.write(reinterpret_cast<const char*>(px), sizeof px);
    }
    const auto img = read_image(dir / "x.ppm");
    REQUIRE(img.is_rgb());
    CHECK(img.channels[0](0, 0) == 1.0);
    CHECK(img.channels[2](0, 1) == 1.0);
    CHECK(img.channels[1](0, 1) == 0.0);
}

TEST_CASE("raw dump round trip is exact and loads through read_image") {
    test::TempDir dir("io");
    std::mt19937_64 rng(23);
    const auto p = test::random_plane(5, 3, rng);
    write_raw(dir / "p.raw", p);
    CHECK(read_raw(dir / "p.raw").vec() == p.vec());
    const auto img = read_image(dir / "p.raw");
    REQUIRE(img.is_gray());
    CHECK(img.channels[0].vec() == p.vec());
}

TEST_CASE("IO failures raise IoError") {
    test::TempDir dir("io");
    CHECK_THROWS_AS(read_image(dir / "missing.png"), IoError);
    {
        std::ofstream out(dir / "junk.png");
        out << "not an image at all";
    }
    CHECK_THROWS_AS(read_image(dir / "junk.png"), IoError);
    {
        std::ofstream out(dir / "short.pgm", std::ios::binary);
        out << "P5\n4 4\n255\nab";
    }
    CHECK_THROWS_AS(read_image(dir / "short.pgm"), IoError);
    CHECK_THROWS_AS(write_png(dir / "no" / "such" / "dir.png", ImagePlane(2, 2)), IoError);
}

}
