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

#include <limits>

namespace tvtv {

/// PSNR of identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

struct QualityScores {
    double psnr = 0.0; // dB, kPsnrIdentical when MSE is zero
    double ssim = 0.0;
};

double mean_squared_error(const ImagePlane& reference, const ImagePlane& test);

/// 10*log10(peak^2 / MSE), or kPsnrIdentical when the images are equal.
double psnr(const ImagePlane& reference, const ImagePlane& test, double peak = 1.0);

/// Mean SSIM over all fully-contained 11x11 windows.
///
/// Local statistics use a normalised Gaussian window (sigma 1.5) and the usual
/// stabilisers C1 = (0.01*peak)^2, C2 = (0.03*peak)^2. Both images must be at
/// least 11x11.
double ssim(const ImagePlane& reference, const ImagePlane& test, double peak = 1.0);

QualityScores evaluate_quality(const ImagePlane& reference, const ImagePlane& test, double peak = 1.0);

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;

} // namespace tvtv
