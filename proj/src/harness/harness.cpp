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
#include "tvtv/harness.hpp"

#include "tvtv/errors.hpp"
#include "tvtv/image_io.hpp"
#include "tvtv/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace tvtv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

[[noreturn]] void bad_line(int line, const std::string& msg) {
    throw InvalidArgument("manifest line " + std::to_string(line) + ": " + msg);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

// Top-left crop to the largest multiple of `scale` in each dimension.
ImagePlane crop_to_multiple(const ImagePlane& plane, int scale) {
    const std::size_t s = static_cast<std::size_t>(scale);
    const std::size_t rows = plane.rows() - plane.rows() % s, cols = plane.cols() - plane.cols() % s;
    if (rows == plane.rows() && cols == plane.cols())
        return plane;
    if (rows == 0 || cols == 0)
        throw DimensionError("image smaller than the scale factor");
    ImagePlane out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            out(i, j) = plane(i, j);
    return out;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos)
        return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string num(double v) {
    if (std::isnan(v))
        return "";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
    Manifest manifest;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream tokens(line);
        std::string token;
        ManifestRow row;
        row.line = lineno;
        bool any = false;
        while (tokens >> token) {
            any = true;
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0)
                bad_line(lineno, "expected key=value, got '" + token + "'");
            const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
            if (key == "name") {
                row.name = value;
            } else if (key == "gt") {
                row.gt = resolve(base_dir, value);
            } else if (key == "lr") {
                row.lr = resolve(base_dir, value);
            } else if (key == "w") {
                if (value == "bicubic")
                    row.synthetic_w = true;
                else
                    row.w = resolve(base_dir, value);
            } else if (key == "op") {
                row.operators = split_list(value);
            } else if (key == "beta") {
                for (const auto& b : split_list(value)) {
                    try {
                        std::size_t used = 0;
                        row.betas.push_back(std::stod(b, &used));
                        if (used != b.size())
                            throw std::invalid_argument(b);
                    } catch (const std::exception&) {
                        bad_line(lineno, "bad beta '" + b + "'");
                    }
                }
            } else {
                bad_line(lineno, "unknown key '" + key + "'");
            }
        }
        if (!any)
            continue;
        if (row.gt.empty() && row.lr.empty())
            bad_line(lineno, "needs gt= or lr=");
        if (row.w.empty() && !row.synthetic_w)
            bad_line(lineno, "needs w=<path> or w=bicubic");
        if (row.operators.empty())
            bad_line(lineno, "needs op=");
        for (const auto& op : row.operators) {
            try {
                parse_operator(op, 1);
            } catch (const InvalidArgument& e) {
                bad_line(lineno, e.what());
            }
        }
        if (row.betas.empty())
            row.betas.push_back(1.0);
        if (row.name.empty())
            row.name = (row.gt.empty() ? row.lr : row.gt).stem().string();
        manifest.rows.push_back(std::move(row));
    }
    return manifest;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open manifest " + path.string());
    return parse_manifest(in, path.parent_path());
}

CellResult run_cell(const ManifestRow& row, const std::string& op_text, double beta, const HarnessOptions& options) {
    CellResult cell;
    cell.image = row.name;
    cell.beta = beta;
    cell.w_source = row.synthetic_w ? "bicubic" : "file";
    cell.psnr_w = cell.psnr_xhat = cell.ssim_w = cell.ssim_xhat = kNaN;
    cell.consistency_w = cell.consistency_xhat = kNaN;
    cell.wall_time = kNaN;
    try {
        const auto parsed = parse_operator(op_text, options.default_scale);
        cell.op = std::string(to_string(parsed.kind)) + ":" + std::to_string(parsed.scale);
        if (options.require_gt && row.gt.empty())
            throw InvalidArgument("ground truth required");

        std::optional<ImagePlane> gt;
        ImagePlane b;
        std::size_t rows = 0, cols = 0;
        if (!row.gt.empty()) {
            gt = crop_to_multiple(luminance(read_image(row.gt)), parsed.scale);
            rows = gt->rows();
            cols = gt->cols();
        } else {
            b = luminance(read_image(row.lr));
            rows = b.rows() * parsed.scale;
            cols = b.cols() * parsed.scale;
        }
        const auto op = OperatorSpec::downsampling(parsed.kind, rows, cols, parsed.scale);
        if (gt)
            b = downsample(op, *gt);

        ImagePlane w;
        if (row.synthetic_w) {
            w = upsample_bicubic(b, parsed.scale);
        } else {
            w = luminance(read_image(row.w));
            if (w.rows() != rows || w.cols() != cols)
                w = crop_to_multiple(w, parsed.scale);
            if (w.rows() != rows || w.cols() != cols)
                throw DimensionError("w is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                                     ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
        }

        SolverConfig config = options.config;
        config.beta = beta;
        cell.consistency_w = consistency(op, w.data(), b.data());
        const auto result = solve_tvtv(b.data(), w.data(), op, config);
        cell.consistency_xhat = result.report.consistency;
        cell.iterations = result.report.iterations;
        cell.wall_time = result.report.wall_time;
        if (gt) {
            const ImagePlane xhat(rows, cols, result.x);
            cell.psnr_w = psnr(*gt, w);
            cell.psnr_xhat = psnr(*gt, xhat);
            cell.ssim_w = ssim(*gt, w);
            cell.ssim_xhat = ssim(*gt, xhat);
        }
    } catch (const std::exception& e) {
        cell.error = e.what();
        if (cell.op.empty())
            cell.op = op_text;
    }
    return cell;
}

std::vector<CellResult> run_grid(const Manifest& manifest, const HarnessOptions& options) {
    struct Task {
        const ManifestRow* row;
        std::string op;
        double beta;
    };
    std::vector<Task> tasks;
    for (const auto& row : manifest.rows)
        for (const auto& op : row.operators)
            for (double beta : row.betas)
                tasks.push_back({&row, op, beta});

    std::vector<CellResult> cells(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++)
            cells[i] = run_cell(*tasks[i].row, tasks[i].op, tasks[i].beta, options);
    };
    const std::size_t jobs = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.jobs, 1)), 1,
                                                     std::max<std::size_t>(tasks.size(), 1));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }
    std::stable_sort(cells.begin(), cells.end(), [](const CellResult& a, const CellResult& b) {
        return std::tie(a.image, a.op, a.beta) < std::tie(b.image, b.op, b.beta);
    });
    return cells;
}

void write_consistency_csv(std::ostream& out, const std::vector<CellResult>& cells) {
    out << "image,operator,beta,w_source,consistency_w,consistency_xhat,iterations,wall_time,error\n";
    for (const auto& c : cells)
        out << csv_field(c.image) << ',' << csv_field(c.op) << ',' << num(c.beta) << ',' << c.w_source << ','
            << num(c.consistency_w) << ',' << num(c.consistency_xhat) << ',' << c.iterations << ','
            << num(c.wall_time) << ',' << csv_field(c.error) << '\n';
}

void write_mismatch_csv(std::ostream& out, const std::vector<CellResult>& cells) {
    out << "image,operator,beta,w_source,psnr_w,psnr_xhat,ssim_w,ssim_xhat,consistency_w,consistency_xhat,"
           "iterations,wall_time,error\n";
    for (const auto& c : cells)
        out << csv_field(c.image) << ',' << csv_field(c.op) << ',' << num(c.beta) << ',' << c.w_source << ','
            << num(c.psnr_w) << ',' << num(c.psnr_xhat) << ',' << num(c.ssim_w) << ',' << num(c.ssim_xhat) << ','
            << num(c.consistency_w) << ',' << num(c.consistency_xhat) << ',' << c.iterations << ','
            << num(c.wall_time) << ',' << csv_field(c.error) << '\n';
}

} // namespace tvtv
