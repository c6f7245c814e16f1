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
// tvtv: downsample, post-process and evaluate super-resolved images.

#include "tvtv/errors.hpp"
#include "tvtv/harness.hpp"
#include "tvtv/image_io.hpp"
#include "tvtv/kernels.hpp"
#include "tvtv/metrics.hpp"
#include "tvtv/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace tvtv;

enum Exit { kOk = 0, kIo = 1, kValidation = 2, kNumerical = 3 };

struct SolveFlags {
    std::string op = "bicubic";
    int scale = 4;
    double beta = 1.0;
    double rho0 = 0.5;
    double eps = 1e-3;
    int max_iter = 1500;
    int threads = 0;
    double cg_tol = 1e-9;
    int cg_max_iter = 500;
    std::string projection = "auto";
    std::string report;
    std::string raw;
    bool gray = false;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
    cmd->add_option("--operator", f.op, "Downsampling operator: subsample, box or bicubic, optionally kind:scale")
        ->capture_default_str();
    cmd->add_option("--scale", f.scale, "Scale factor when --operator has none")->capture_default_str();
    cmd->add_option("--beta", f.beta, "Weight of the side-information TV term")->capture_default_str();
    cmd->add_option("--rho0", f.rho0, "Initial ADMM penalty")->capture_default_str();
    cmd->add_option("--eps", f.eps, "Primal and dual stopping tolerance")->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "Iteration cap")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
    cmd->add_option("--projection", f.projection, "auto, closed or cg")
        ->check(CLI::IsMember({"auto", "closed", "cg"}))
        ->capture_default_str();
    cmd->add_option("--cg-tol", f.cg_tol, "Relative tolerance of the bicubic projection solve")
        ->capture_default_str();
    cmd->add_option("--cg-max-iter", f.cg_max_iter, "Iteration cap of the projection solve")->capture_default_str();
    cmd->add_option("--report", f.report, "Write a key=value report to this path");
    cmd->add_option("--raw", f.raw, "Also write the luminance result as raw doubles");
    cmd->add_flag("--gray", f.gray, "Solve and write luminance only");
}

SolverConfig make_config(const SolveFlags& f) {
    SolverConfig cfg;
    cfg.beta = f.beta;
    cfg.rho0 = f.rho0;
    cfg.eps_pri = cfg.eps_dual = f.eps;
    cfg.max_iter = f.max_iter;
    cfg.cg.tolerance = f.cg_tol;
    cfg.cg.max_iterations = f.cg_max_iter;
    cfg.projection = f.projection == "closed" ? Projection::ClosedForm
                     : f.projection == "cg"   ? Projection::Cg
                                              : Projection::Auto;
    cfg.validate();
    return cfg;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SolvedImage {
    ColorImage image;
    ImagePlane luma;
    SolveReport report;
    double consistency_w = 0.0;
};

// Solves on luminance; RGB inputs get bicubic-upsampled LR chroma back.
SolvedImage solve_image(const ColorImage& lr, const ColorImage& side, const OperatorSpec& op,
                        const SolverConfig& cfg, bool gray) {
    const bool color = !gray && lr.is_rgb() && side.is_rgb();
    ImagePlane b, w;
    std::optional<YCbCrPlanes> lr_ycc;
    if (color) {
        lr_ycc = rgb_to_ycbcr(lr.channels[0], lr.channels[1], lr.channels[2]);
        b = lr_ycc->y;
        w = rgb_to_ycbcr(side.channels[0], side.channels[1], side.channels[2]).y;
    } else {
        b = luminance(lr);
        w = luminance(side);
    }
    if (w.rows() != op.rows() || w.cols() != op.cols())
        throw DimensionError("side image is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                             ", expected " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()));

    SolvedImage out;
    out.consistency_w = consistency(op, w.data(), b.data());
    auto result = solve_tvtv(b.data(), w.data(), op, cfg);
    out.report = result.report;
    out.luma = ImagePlane(op.rows(), op.cols(), std::move(result.x));
    if (color) {
        const auto cb = upsample_bicubic(lr_ycc->cb, op.scale());
        const auto cr = upsample_bicubic(lr_ycc->cr, op.scale());
        auto rgb = ycbcr_to_rgb(out.luma, cb, cr);
        out.image.channels.assign(rgb.begin(), rgb.end());
    } else {
        out.image.channels = {out.luma};
    }
    return out;
}

void print_summary(const SolvedImage& s) {
    const auto& r = s.report;
    std::printf("iterations %d (%s)\n", r.iterations, r.converged ? "converged" : "iteration cap");
    std::printf("consistency ||Aw-b|| = %.6e -> ||Ax-b|| = %.6e\n", s.consistency_w, r.consistency);
    std::printf("objective %.10g\n", r.objective);
    std::printf("wall time %.3f s\n", r.wall_time);
}

void write_report(const std::string& path, const OperatorSpec& op, const SolverConfig& cfg, const SolvedImage& s) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write report " + path);
    const auto& r = s.report;
    out << "format=tvtv-report-v1\n"
        << "operator=" << op.name() << "\n"
        << "rows=" << op.rows() << "\n"
        << "cols=" << op.cols() << "\n"
        << "beta=" << fmt(cfg.beta) << "\n"
        << "rho0=" << fmt(cfg.rho0) << "\n"
        << "eps=" << fmt(cfg.eps_pri) << "\n"
        << "max_iter=" << cfg.max_iter << "\n"
        << "iterations=" << r.iterations << "\n"
        << "converged=" << (r.converged ? 1 : 0) << "\n"
        << "consistency_w=" << fmt(s.consistency_w) << "\n"
        << "consistency=" << fmt(r.consistency) << "\n"
        << "objective=" << fmt(r.objective) << "\n"
        << "final_rho=" << fmt(r.final_rho) << "\n"
        << "primal_residual=" << fmt(r.primal_residuals.empty() ? 0.0 : r.primal_residuals.back()) << "\n"
        << "dual_residual=" << fmt(r.dual_residuals.empty() ? 0.0 : r.dual_residuals.back()) << "\n"
        << "wall_time=" << fmt(r.wall_time) << "\n";
    if (!out)
        throw IoError("failed writing report " + path);
}

void finish_solve(const SolveFlags& f, const std::string& output, const OperatorSpec& op, const SolverConfig& cfg,
                  const SolvedImage& solved) {
    write_image(output, solved.image);
    if (!f.raw.empty())
        write_raw(f.raw, solved.luma);
    if (!f.report.empty())
        write_report(f.report, op, cfg, solved);
    print_summary(solved);
}

int run_downsample(const std::string& input, const std::string& output, const std::string& op_text, int scale) {
    const auto img = read_image(input);
    const auto op = make_operator(op_text, img.rows(), img.cols(), scale);
    ColorImage lr;
    for (const auto& ch : img.channels)
        lr.channels.push_back(downsample(op, ch));
    write_image(output, lr);
    std::printf("m=%zu n=%zu s=%d\n", op.output_size(), op.input_size(), op.scale());
    return kOk;
}

int run_solve(const std::string& lr_path, const std::string& side_path, const std::string& output,
              const SolveFlags& f) {
    const auto cfg = make_config(f);
    const auto lr = read_image(lr_path);
    const auto side = read_image(side_path);
    const auto parsed = parse_operator(f.op, f.scale);
    const auto op =
        OperatorSpec::downsampling(parsed.kind, lr.rows() * parsed.scale, lr.cols() * parsed.scale, parsed.scale);
    finish_solve(f, output, op, cfg, solve_image(lr, side, op, cfg, f.gray));
    return kOk;
}

int run_eval(const std::string& ref_path, const std::string& test_path, bool rgb, double peak) {
    const auto ref = read_image(ref_path);
    const auto test = read_image(test_path);
    if (ref.rows() != test.rows() || ref.cols() != test.cols())
        throw DimensionError("images differ in size");
    QualityScores q;
    if (rgb && ref.is_rgb() && test.is_rgb()) {
        for (int c = 0; c < 3; ++c) {
            const auto s = evaluate_quality(ref.channels[c], test.channels[c], peak);
            q.psnr += s.psnr / 3.0;
            q.ssim += s.ssim / 3.0;
        }
    } else {
        q = evaluate_quality(luminance(ref), luminance(test), peak);
    }
    std::printf("psnr=%.10f\nssim=%.10f\n", q.psnr, q.ssim);
    return kOk;
}

int run_pipeline(const std::string& gt_path, const std::string& side, const std::string& output,
                 const SolveFlags& f) {
    const auto cfg = make_config(f);
    const auto gt = read_image(gt_path);
    const auto op = make_operator(f.op, gt.rows(), gt.cols(), f.scale);
    ColorImage lr;
    for (const auto& ch : gt.channels)
        lr.channels.push_back(downsample(op, ch));
    ColorImage w;
    if (side == "bicubic") {
        for (const auto& ch : lr.channels)
            w.channels.push_back(clamp01(upsample_bicubic(ch, op.scale())));
    } else {
        w = read_image(side);
    }
    const auto solved = solve_image(lr, w, op, cfg, f.gray);
    finish_solve(f, output, op, cfg, solved);
    const auto gt_y = luminance(gt);
    const auto before = evaluate_quality(gt_y, luminance(w));
    const auto after = evaluate_quality(gt_y, solved.luma);
    std::printf("psnr %.4f -> %.4f dB\nssim %.6f -> %.6f\n", before.psnr, after.psnr, before.ssim, after.ssim);
    return kOk;
}

int run_table(const std::string& manifest, const std::string& output, const SolveFlags& f, int jobs, bool mismatch) {
    HarnessOptions opts;
    opts.config = make_config(f);
    opts.jobs = jobs;
    opts.default_scale = f.scale;
    opts.require_gt = mismatch;
    const auto cells = run_grid(load_manifest(manifest), opts);
    auto write = [&](std::ostream& os) {
        if (mismatch)
            write_mismatch_csv(os, cells);
        else
            write_consistency_csv(os, cells);
    };
    if (output.empty() || output == "-") {
        write(std::cout);
    } else {
        std::ofstream out(output);
        if (!out)
            throw IoError("cannot write " + output);
        write(out);
    }
    std::size_t failed = 0;
    for (const auto& c : cells)
        failed += !c.error.empty();
    if (failed)
        std::fprintf(stderr, "%zu of %zu cells failed\n", failed, cells.size());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"TV-TV post-processing of super-resolved images"};
    app.require_subcommand(1);

    std::string in, out, lr, side, ref, test, manifest, csv_out;
    std::string ds_op = "bicubic";
    int ds_scale = 4;
    SolveFlags sf;
    bool rgb = false;
    double peak = 1.0;
    int jobs = 1;

    auto* ds = app.add_subcommand("downsample", "Apply a downsampling operator (b = A x)");
    ds->add_option("input", in, "High-resolution image")->required();
    ds->add_option("output", out, "Low-resolution image (.png or .pgm)")->required();
    ds->add_option("--operator", ds_op, "subsample, box or bicubic, optionally kind:scale")->capture_default_str();
    ds->add_option("--scale", ds_scale, "Scale factor when --operator has none")->capture_default_str();
    ds->add_option("--threads", sf.threads, "Worker threads (0 = all cores)");

    auto* solve = app.add_subcommand("solve", "Restore consistency of a super-resolved image with its LR source");
    solve->add_option("lr", lr, "Low-resolution image b")->required();
    solve->add_option("side", side, "Super-resolved side image w")->required();
    solve->add_option("output", out, "Output image")->required();
    add_solver_flags(solve, sf);

    auto* eval = app.add_subcommand("eval", "PSNR and SSIM of a test image against a reference");
    eval->add_option("reference", ref, "Reference image")->required();
    eval->add_option("test", test, "Test image")->required();
    eval->add_flag("--rgb", rgb, "Average over RGB channels instead of using luminance");
    eval->add_option("--peak", peak, "Peak signal value (images are scaled to [0,1])")->capture_default_str();

    auto* pipe = app.add_subcommand("pipeline", "Downsample a ground truth, post-process w, report metrics");
    pipe->add_option("gt", in, "Ground-truth image")->required();
    pipe->add_option("side", side, "Side image w, or 'bicubic' to upsample b")->required();
    pipe->add_option("output", out, "Output image")->required();
    add_solver_flags(pipe, sf);

    auto* cons = app.add_subcommand("consistency", "Consistency table (||Aw-b||, ||Ax-b||) from a manifest");
    auto* mism = app.add_subcommand("mismatch", "PSNR/SSIM grid over operators from a manifest");
    for (auto* cmd : {cons, mism}) {
        cmd->add_option("manifest", manifest, "Manifest file")->required();
        cmd->add_option("-o,--output", csv_out, "CSV path (default stdout)");
        cmd->add_option("--jobs", jobs, "Rows solved in parallel")->capture_default_str();
        add_solver_flags(cmd, sf);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        simd::set_num_threads(sf.threads);
        if (ds->parsed())
            return run_downsample(in, out, ds_op, ds_scale);
        if (solve->parsed())
            return run_solve(lr, side, out, sf);
        if (eval->parsed())
            return run_eval(ref, test, rgb, peak);
        if (pipe->parsed())
            return run_pipeline(in, side, out, sf);
        if (cons->parsed())
            return run_table(manifest, csv_out, sf, jobs, false);
        if (mism->parsed())
            return run_table(manifest, csv_out, sf, jobs, true);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIo;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidation;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kNumerical;
    }
    return kOk;
}
