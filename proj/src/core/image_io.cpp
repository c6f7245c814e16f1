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
#include "tvtv/image_io.hpp"

#include "tvtv/errors.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace tvtv {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

ColorImage from_interleaved(const std::uint8_t* pixels, std::size_t rows, std::size_t cols,
                            std::size_t channels, double maxval) {
    ColorImage image;
    for (std::size_t c = 0; c < channels; ++c) {
        std::vector<double> data(rows * cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                data[vec_index(i, j, rows)] = pixels[(i * cols + j) * channels + c] / maxval;
        image.channels.emplace_back(rows, cols, std::move(data));
    }
    return image;
}

std::vector<std::uint8_t> to_interleaved(const ColorImage& image) {
    const std::size_t rows = image.rows(), cols = image.cols(), channels = image.channels.size();
    std::vector<std::uint8_t> pixels(rows * cols * channels);
    for (std::size_t c = 0; c < channels; ++c) {
        const ImagePlane& plane = image.channels[c];
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                pixels[(i * cols + j) * channels + c] = quantize_u8(plane(i, j));
    }
    return pixels;
}

void check_writable(const ColorImage& image) {
    if (!image.is_gray() && !image.is_rgb())
        throw InvalidArgument("write: expected 1 or 3 channels");
    for (const auto& ch : image.channels)
        require_same_shape(image.channels.front(), ch, "write");
    if (image.rows() == 0 || image.cols() == 0)
        throw DimensionError("write: empty image");
}

ColorImage read_png(const std::filesystem::path& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str()))
        throw IoError("cannot read PNG '" + path.string() + "': " + png.message);
    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw IoError("cannot decode PNG '" + path.string() + "': " + msg);
    }
    return from_interleaved(buffer.data(), png.height, png.width, color ? 3 : 1, 255.0);
}

// Skips whitespace and '#' comments in a PNM header.
void skip_pnm_space(std::istream& in) {
    while (true) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

ColorImage read_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (magic != "P5" && magic != "P6")
        throw IoError("'" + path.string() + "' is not a binary PGM/PPM");
    std::size_t width = 0, height = 0;
    int maxval = 0;
    skip_pnm_space(in);
    in >> width;
    skip_pnm_space(in);
    in >> height;
    skip_pnm_space(in);
    in >> maxval;
    in.get(); // single whitespace before the raster
    if (!in || width == 0 || height == 0 || maxval <= 0 || maxval > 255)
        throw IoError("'" + path.string() + "': unsupported PNM header");
    const std::size_t channels = magic == "P5" ? 1 : 3;
    std::vector<std::uint8_t> pixels(width * height * channels);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(pixels.size()))
        throw IoError("'" + path.string() + "': truncated raster");
    return from_interleaved(pixels.data(), height, width, channels, maxval);
}

} // namespace

std::uint8_t quantize_u8(double value) noexcept {
    const double v = std::clamp(value, 0.0, 1.0) * 255.0;
    return static_cast<std::uint8_t>(std::lround(v));
}

ColorImage read_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw IoError("cannot open '" + path.string() + "'");
    char sig[8] = {};
    probe.read(sig, sizeof(sig));
    probe.close();
    if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6'))
        return read_pnm(path);
    if (png_sig_cmp(reinterpret_cast<png_const_bytep>(sig), 0, 8) == 0)
        return read_png(path);
    if (std::string_view(sig, sizeof(sig)) == "TVTVRAW1")
        return ColorImage{{read_raw(path)}};
    throw IoError("'" + path.string() + "': unrecognised image format");
}

void write_png(const std::filesystem::path& path, const ColorImage& image) {
    check_writable(image);
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.cols());
    png.height = static_cast<png_uint_32>(image.rows());
    png.format = image.is_rgb() ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const auto pixels = to_interleaved(image);
    if (!png_image_write_to_file(&png, path.c_str(), 0, pixels.data(), 0, nullptr))
        throw IoError("cannot write PNG '" + path.string() + "': " + png.message);
}

void write_png(const std::filesystem::path& path, const ImagePlane& plane) {
    write_png(path, ColorImage{{plane}});
}

void write_pgm(const std::filesystem::path& path, const ImagePlane& plane) {
    const ColorImage image{{plane}};
    check_writable(image);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << "P5\n" << plane.cols() << " " << plane.rows() << "\n255\n";
    const auto pixels = to_interleaved(image);
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

void write_image(const std::filesystem::path& path, const ColorImage& image) {
    if (lower_extension(path) == ".raw") {
        if (!image.is_gray())
            throw InvalidArgument("raw output requires a gray image");
        write_raw(path, image.channels.front());
        return;
    }
    if (lower_extension(path) == ".pgm") {
        if (!image.is_gray())
            throw InvalidArgument("PGM output requires a gray image");
        write_pgm(path, image.channels.front());
        return;
    }
    write_png(path, image);
}

void write_raw(const std::filesystem::path& path, const ImagePlane& plane) {
    static_assert(std::endian::native == std::endian::little, "raw dumps assume a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << "TVTVRAW1 " << plane.rows() << " " << plane.cols() << "\n";
    out.write(reinterpret_cast<const char*>(plane.data().data()),
              static_cast<std::streamsize>(plane.size() * sizeof(double)));
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

ImagePlane read_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic;
    std::size_t rows = 0, cols = 0;
    hs >> magic >> rows >> cols;
    if (magic != "TVTVRAW1" || !hs)
        throw IoError("'" + path.string() + "': not a TVTVRAW1 file");
    std::vector<double> data(rows * cols);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(double)))
        throw IoError("'" + path.string() + "': truncated data");
    return ImagePlane(rows, cols, std::move(data));
}

} // namespace tvtv
