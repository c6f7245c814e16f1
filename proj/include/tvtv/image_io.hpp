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

#include <cstdint>
#include <filesystem>

namespace tvtv {

/// Reads an 8-bit PNG (gray, gray+alpha, RGB, RGBA, palette) or a binary
/// PGM (P5) / PPM (P6) with maxval <= 255. Alpha is dropped. Samples are
/// divided by 255 (by maxval for PNM).
/// Raw dumps (see write_raw) load as a one-channel image.
ColorImage read_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG; values are clamped to [0,1] and rounded.
void write_png(const std::filesystem::path& path, const ColorImage& image);
void write_png(const std::filesystem::path& path, const ImagePlane& plane);

/// Writes a binary 8-bit PGM (P5).
void write_pgm(const std::filesystem::path& path, const ImagePlane& plane);

/// Picks PGM for `.pgm`, a raw dump for `.raw` (both gray only) and PNG otherwise.
void write_image(const std::filesystem::path& path, const ColorImage& image);

/// Raw double dump: the ASCII line "TVTVRAW1 <rows> <cols>\n" followed by
/// rows*cols little-endian IEEE-754 doubles in column-major order.
void write_raw(const std::filesystem::path& path, const ImagePlane& plane);
ImagePlane read_raw(const std::filesystem::path& path);

std::uint8_t quantize_u8(double value) noexcept;

} // namespace tvtv
