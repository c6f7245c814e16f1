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
#include "tvtv/linops.hpp"

#include <doctest.h>

#include <numbers>

using namespace tvtv;

namespace {

std::vector<OperatorSpec> all_operators(std::size_t rows, std::size_t cols, int scale) {
    return {OperatorSpec::subsample(rows, cols, scale),  OperatorSpec::box_average(rows, cols, scale),
            OperatorSpec::bicubic(rows, cols, scale),    OperatorSpec::vertical_diff(rows, cols),
            OperatorSpec::horizontal_diff(rows, cols),   OperatorSpec::stacked_diff(rows, cols)};
}

} // namespace

TEST_SUITE("linops") {

TEST_CASE("operator parsing") {
    auto p = parse_operator("box:4");
    CHECK(p.kind == OperatorKind::BoxAverage);
    CHECK(p.scale == 4);
    p = parse_operator("bicubic", 3);
    CHECK(p.kind == OperatorKind::Bicubic);
    CHECK(p.scale == 3);
    CHECK(parse_operator("subsample:2").kind == OperatorKind::Subsample);
    CHECK_THROWS_AS(parse_operator("bilinear:4"), InvalidArgument);
    CHECK_THROWS_AS(parse_operator("box:x"), InvalidArgument);
    CHECK_THROWS_AS(parse_operator("box:0"), InvalidArgument);
    CHECK_THROWS_AS(parse_operator("box"), InvalidArgument);
    CHECK(make_operator("box:4", 480, 320).name() == "box:4");
}

TEST_CASE("downsampling needs divisible dimensions") {
    CHECK_THROWS_AS(OperatorSpec::box_average(10, 12, 4), DimensionError);
    CHECK_THROWS_AS(make_operator("bicubic:4", 12, 10), DimensionError);
    const auto op = OperatorSpec::box_average(12, 8, 4);
    CHECK(op.lr_rows() == 3);
    CHECK(op.lr_cols() == 2);
    CHECK(op.output_size() == 6);
    CHECK(OperatorSpec::stacked_diff(3, 5).output_size() == 30);
}

TEST_CASE("length mismatches are rejected") {
    const auto op = OperatorSpec::box_average(4, 4, 2);
    CHECK_THROWS_AS(apply_forward(op, std::vector<double>(15)), DimensionError);
    CHECK_THROWS_AS(apply_adjoint(op, std::vector<double>(5)), DimensionError);
}

TEST_CASE("box average preserves constants") {
    const auto op = OperatorSpec::box_average(4, 4, 2);
    const auto y = apply_forward(op, std::vector<double>(16, 0.4));
    REQUIRE(y.size() == 4);
    for (double v : y)
        CHECK(v == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("every downsampling kind maps constants to the same constant") {
    for (int s : {2, 3, 4}) {
        for (const auto& op : all_operators(24, 36, s)) {
            if (!op.is_downsampling())
                continue;
            const auto y = apply_forward(op, std::vector<double>(op.input_size(), 0.7));
            for (double v : y)
                CHECK(std::abs(v - 0.7) <= 1e-14);
        }
    }
}

TEST_CASE("bicubic taps sum to one and are symmetric") {
    for (int s : {1, 2, 3, 4, 5}) {
        const auto op = OperatorSpec::bicubic(60, 60, s);
        double sum = 0.0;
        for (double t : op.taps())
            sum += t;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
        const auto taps = op.taps();
        for (std::size_t k = 0; k < taps.size(); ++k)
            CHECK(taps[k] == doctest::Approx(taps[taps.size() - 1 - k]).epsilon(1e-15));
    }
    CHECK(OperatorSpec::bicubic(8, 8, 1).taps().size() == 3);
}

TEST_CASE("differences of a constant are exactly zero") {
    for (const auto& op : all_operators(6, 10, 2)) {
        if (op.is_downsampling())
            continue;
        for (double v : apply_forward(op, std::vector<double>(op.input_size(), 0.123)))
            CHECK(v == 0.0);
    }
    CHECK(tv_norm(std::vector<double>(60, 0.9), 6, 10) == 0.0);
}

TEST_CASE("difference conventions") {
    // 3x2 plane, column-major
    const std::vector<double> x{1, 2, 4, 8, 16, 32};
    const auto v = apply_forward(OperatorSpec::vertical_diff(3, 2), x);
    CHECK(v == std::vector<double>{1, 2, -3, 8, 16, -24});
    const auto h = apply_forward(OperatorSpec::horizontal_diff(3, 2), x);
    CHECK(h == std::vector<double>{7, 14, 28, -7, -14, -28});
    std::vector<double> both = v;
    both.insert(both.end(), h.begin(), h.end());
    CHECK(apply_forward(OperatorSpec::stacked_diff(3, 2), x) == both);
}

TEST_CASE("tv_norm equals the double-sum definition") {
    std::mt19937_64 rng(30);
    for (auto [m, n] : {std::pair{1, 1}, {1, 5}, {7, 1}, {9, 13}, {32, 24}}) {
        const auto x = test::random_vector(m * n, rng, -1.0, 1.0);
        const double ref = oracle::dense_tv(x, m, n);
        CHECK(std::abs(tv_norm(x, m, n) - ref) <= 1e-13 * std::max(1.0, ref));
    }
}

TEST_CASE("tvtv_objective matches scalar loops") {
    std::mt19937_64 rng(31);
    const auto x = test::random_vector(80, rng), w = test::random_vector(80, rng);
    for (double beta : {0.0, 0.5, 1.0, 2.0})
        CHECK(std::abs(tvtv_objective(x, w, 8, 10, beta) - oracle::dense_objective(x, w, 8, 10, beta)) <= 1e-12);
}

TEST_CASE("bicubic forward equals dense materialisation") {
    std::mt19937_64 rng(32);
    const auto op = OperatorSpec::bicubic(32, 32, 4);
    const auto dense = oracle::materialize(op);
    const auto x = test::random_vector(op.input_size(), rng);
    const auto y = apply_forward(op, x);
    const auto ref = oracle::to_std(dense.entries * oracle::to_eigen(x));
    CHECK(test::max_abs_diff(y, ref) <= 1e-10);
}

TEST_CASE("downsampling matrices match an entrywise construction") {
    for (int s : {2, 4}) {
        for (auto kind : {OperatorKind::Subsample, OperatorKind::BoxAverage, OperatorKind::Bicubic}) {
            const auto op = OperatorSpec::downsampling(kind, 16, 24, s);
            const auto dense = oracle::materialize(op).entries;
            const auto ref = oracle::downsampling_matrix(kind, 16, 24, s);
            CHECK((dense - ref).cwiseAbs().maxCoeff() <= 1e-15);
        }
    }
    CHECK((oracle::materialize(OperatorSpec::stacked_diff(5, 7)).entries - oracle::difference_matrix(5, 7))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("adjoint identity on random pairs for every kind") {
    std::mt19937_64 rng(33);
    for (int s : {2, 4}) {
        for (const auto& op : all_operators(16, 24, s)) {
            double worst = 0.0;
            for (int k = 0; k < 100; ++k) {
                const auto x = test::random_vector(op.input_size(), rng, -1.0, 1.0);
                const auto y = test::random_vector(op.output_size(), rng, -1.0, 1.0);
                const double lhs = test::dot(apply_forward(op, x), y);
                const double rhs = test::dot(x, apply_adjoint(op, y));
                worst = std::max(worst, std::abs(lhs - rhs) / (test::norm2(x) * test::norm2(y)));
            }
            INFO(op.name());
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("subsample adjoint zero-fills around the anchors") {
    const auto op = OperatorSpec::subsample(4, 6, 2);
    const std::vector<double> y{1, 2, 3, 4, 5, 6};
    const auto x = apply_adjoint(op, y);
    const ImagePlane p(4, 6, x);
    CHECK(p(0, 0) == 1.0);
    CHECK(p(2, 0) == 2.0);
    CHECK(p(0, 2) == 3.0);
    CHECK(p(2, 4) == 6.0);
    double sum = 0.0;
    for (double v : x)
        sum += v;
    CHECK(sum == 21.0);
}

TEST_CASE("box adjoint of a constant") {
    const auto op = OperatorSpec::box_average(8, 8, 4);
    for (double v : apply_adjoint(op, std::vector<double>(4, 2.0)))
        CHECK(v == doctest::Approx(2.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("solve_gram closed forms") {
    std::mt19937_64 rng(34);
    const auto rhs = test::random_vector(16, rng);
    CHECK(solve_gram(OperatorSpec::subsample(8, 8, 2), rhs) == rhs);
    const auto z = solve_gram(OperatorSpec::box_average(8, 8, 2), rhs);
    for (std::size_t i = 0; i < rhs.size(); ++i)
        CHECK(z[i] == doctest::Approx(4.0 * rhs[i]).epsilon(1e-15));
}

TEST_CASE("bicubic solve_gram matches a dense Cholesky solve") {
    std::mt19937_64 rng(35);
    const auto op = OperatorSpec::bicubic(16, 16, 2);
    const auto A = oracle::materialize(op).entries;
    const auto rhs = test::random_vector(op.output_size(), rng, -1.0, 1.0);
    const auto z = solve_gram(op, rhs);
    const auto ref = oracle::to_std(oracle::dense_gram_solve(A, oracle::to_eigen(rhs)));
    CHECK(test::max_abs_diff(z, ref) <= 1e-8);
}

TEST_CASE("Gram solve inverts the Gram apply on every branch") {
    std::mt19937_64 rng(36);
    for (auto kind : {OperatorKind::Subsample, OperatorKind::BoxAverage, OperatorKind::Bicubic}) {
        for (bool force_cg : {false, true}) {
            const auto op = OperatorSpec::downsampling(kind, 24, 16, 4);
            const GramSolver gram(op, {}, force_cg);
            const auto z = test::random_vector(op.output_size(), rng, -1.0, 1.0);
            std::vector<double> gz(z.size());
            gram.apply(z, gz);
            const auto back = gram.solve(gz);
            CHECK(test::max_abs_diff(back, z) <= 1e-8);
            // A A^T from its definition
            const auto direct = apply_forward(op, apply_adjoint(op, z));
            CHECK(test::max_abs_diff(direct, gz) <= 1e-13);
        }
    }
}

TEST_CASE("CG failure raises SolverError with the residual") {
    const auto op = OperatorSpec::bicubic(32, 32, 4);
    std::mt19937_64 rng(37);
    const auto rhs = test::random_vector(op.output_size(), rng);
    CgOptions tight;
    tight.max_iterations = 1;
    tight.tolerance = 1e-14;
    const GramSolver gram(op, tight);
    std::vector<double> out(rhs.size());
    try {
        gram.solve(rhs, out);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.residual() > 1e-14);
    }
}

TEST_CASE("conjugate gradient on a zero right-hand side") {
    std::vector<double> z(5, 3.0);
    const auto stats = conjugate_gradient([](std::span<const double> a, std::span<double> o) {
        std::copy(a.begin(), a.end(), o.begin());
    }, std::vector<double>(5, 0.0), z);
    CHECK(stats.iterations == 0);
    CHECK(z == std::vector<double>(5, 0.0));
}

TEST_CASE("(I + D^T D)^{-1} fixes constants") {
    const auto out = solve_identity_plus_gram_D(6, 9, std::vector<double>(54, 0.37));
    for (double v : out)
        CHECK(v == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("(I + D^T D)^{-1} matches a dense solve and round-trips") {
    std::mt19937_64 rng(38);
    for (auto [m, n] : {std::pair{8, 8}, {5, 7}, {16, 16}, {1, 6}}) {
        const auto rhs = test::random_vector(m * n, rng, -1.0, 1.0);
        const IdentityPlusGramD solver(m, n);
        const auto x = solver.solve(rhs);
        const auto D = oracle::difference_matrix(m, n);
        const auto ref = oracle::to_std(oracle::dense_identity_plus_gram_solve(D, oracle::to_eigen(rhs)));
        CHECK(test::max_abs_diff(x, ref) <= 1e-8);
        std::vector<double> back(x.size());
        solver.apply(x, back);
        CHECK(test::max_abs_diff(back, rhs) <= 1e-10);
    }
}

TEST_CASE("(I + D^T D) denominator has the closed form") {
    const std::size_t m = 6, n = 10;
    const IdentityPlusGramD solver(m, n);
    const auto den = solver.denominator();
    const std::size_t half = m / 2 + 1;
    REQUIRE(den.size() == n * half);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t k = 0; k < half; ++k) {
            const double sk = std::sin(std::numbers::pi * k / m), sl = std::sin(std::numbers::pi * l / n);
            CHECK(den[l * half + k] == doctest::Approx(1.0 + 4.0 * sk * sk + 4.0 * sl * sl).epsilon(1e-13));
            CHECK(den[l * half + k] >= 1.0);
        }
    }
}

TEST_CASE("circulant FFT application equals the dense circulant matrix") {
    std::mt19937_64 rng(39);
    for (auto [m, n] : {std::pair{4, 4}, {5, 3}, {32, 32}, {1, 9}}) {
        const auto g = test::random_vector(m * n, rng, -1.0, 1.0);
        const CirculantKernel kernel(m, n, g);
        oracle::Matrix C(m * n, m * n);
        for (int q = 0; q < m * n; ++q) {
            const int qi = q % m, qj = q / m;
            for (int p = 0; p < m * n; ++p) {
                const int pi = p % m, pj = p / m;
                C(p, q) = g[((pj - qj + n) % n) * m + (pi - qi + m) % m];
            }
        }
        const auto x = test::random_vector(m * n, rng, -1.0, 1.0);
        const auto y = kernel.apply(x);
        CHECK(test::max_abs_diff(y, oracle::to_std(C * oracle::to_eigen(x))) <= 1e-10);
        std::vector<double> yt(x.size());
        kernel.apply_adjoint(x, yt);
        CHECK(test::max_abs_diff(yt, oracle::to_std(C.transpose() * oracle::to_eigen(x))) <= 1e-10);
    }
}

TEST_CASE("difference kernels reproduce the stencils") {
    std::mt19937_64 rng(40);
    const auto x = test::random_vector(7 * 5, rng);
    const auto v = vertical_diff_kernel(7, 5).apply(x);
    const auto h = horizontal_diff_kernel(7, 5).apply(x);
    CHECK(test::max_abs_diff(v, apply_forward(OperatorSpec::vertical_diff(7, 5), x)) <= 1e-12);
    CHECK(test::max_abs_diff(h, apply_forward(OperatorSpec::horizontal_diff(7, 5), x)) <= 1e-12);
}

TEST_CASE("keys kernel values") {
    CHECK(keys_cubic(0.0) == 1.0);
    CHECK(keys_cubic(1.0) == 0.0);
    CHECK(keys_cubic(2.0) == 0.0);
    CHECK(keys_cubic(0.5) == doctest::Approx(0.5625));
    CHECK(keys_cubic(1.5) == doctest::Approx(-0.0625));
    CHECK(keys_cubic(-0.5) == keys_cubic(0.5));
}

TEST_CASE("bicubic upsampling") {
    const auto up = upsample_bicubic(ImagePlane(3, 5, 0.25), 4);
    CHECK(up.rows() == 12);
    CHECK(up.cols() == 20);
    for (double v : up.data())
        CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
    // A linear ramp is reproduced away from the borders.
    ImagePlane ramp(8, 1);
    for (std::size_t i = 0; i < 8; ++i)
        ramp(i, 0) = 0.1 * static_cast<double>(i);
    const auto r = upsample_bicubic(ramp, 2);
    for (std::size_t o = 4; o < 12; ++o)
        CHECK(r(o, 0) == doctest::Approx(0.1 * ((o + 0.5) / 2.0 - 0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(upsample_bicubic(ImagePlane(2, 2), 0), InvalidArgument);
}

TEST_CASE("downsample wraps apply_forward") {
    std::mt19937_64 rng(41);
    const auto p = test::random_plane(8, 12, rng);
    const auto op = OperatorSpec::box_average(8, 12, 4);
    const auto lr = downsample(op, p);
    CHECK(lr.rows() == 2);
    CHECK(lr.cols() == 3);
    CHECK(lr.vec() == apply_forward(op, p.data()));
    CHECK_THROWS_AS(downsample(op, test::random_plane(8, 8, rng)), DimensionError);
}

}
