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

#include "tvtv/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tvtv {

/// One manifest record. Lines are whitespace-separated key=value tokens:
///
///   name=baboon gt=gt/baboon.png w=srcnn/baboon.png op=bicubic:4,box:4 beta=1
///   name=synth lr=lr/synth.png w=bicubic op=subsample:4 beta=0,1
///
/// `w=bicubic` requests a synthetic side image (bicubic upsampling of b).
/// Relative paths resolve against the manifest's directory; `#` starts a
/// comment.
struct ManifestRow {
    std::string name;
    std::filesystem::path gt;
    std::filesystem::path lr;
    std::filesystem::path w; // empty when synthetic
    bool synthetic_w = false;
    std::vector<std::string> operators;
    std::vector<double> betas;
    int line = 0;
};

struct Manifest {
    std::vector<ManifestRow> rows;
};

/// Throws InvalidArgument with the offending line number on malformed input.
Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

struct HarnessOptions {
    SolverConfig config;
    int jobs = 1;
    int default_scale = 4;
    bool require_gt = false; // mismatch grids need ground truth
};

/// One (image, operator, beta) cell. Metrics are NaN when no ground truth is
/// available or the cell failed; `error` is empty on success.
struct CellResult {
    std::string image;
    std::string op;
    double beta = 0.0;
    std::string w_source; // "file" or "bicubic"
    double psnr_w = 0.0;
    double psnr_xhat = 0.0;
    double ssim_w = 0.0;
    double ssim_xhat = 0.0;
    double consistency_w = 0.0;
    double consistency_xhat = 0.0;
    int iterations = 0;
    double wall_time = 0.0;
    std::string error;
};

/// Expands the manifest into cells and solves each on the luminance channel.
/// The measurement is b = A(gt) when ground truth is given and the LR file
/// otherwise. Per-cell failures are recorded, not thrown. Results are sorted
/// by (image, operator, beta).
std::vector<CellResult> run_grid(const Manifest& manifest, const HarnessOptions& options);

CellResult run_cell(const ManifestRow& row, const std::string& op, double beta, const HarnessOptions& options);

/// image,operator,beta,w_source,consistency_w,consistency_xhat,iterations,wall_time,error
void write_consistency_csv(std::ostream& out, const std::vector<CellResult>& cells);

/// image,operator,beta,w_source,psnr_w,psnr_xhat,ssim_w,ssim_xhat,
/// consistency_w,consistency_xhat,iterations,wall_time,error
void write_mismatch_csv(std::ostream& out, const std::vector<CellResult>& cells);

} // namespace tvtv
