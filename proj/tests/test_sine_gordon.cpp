#include "flatnormal/curvature.hpp"
#include "flatnormal/error.hpp"
#include "flatnormal/fundamental.hpp"
#include "flatnormal/sine_gordon.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace flatnormal;
using flatnormal::testing::vec2;

TEST_CASE("1-soliton patch reproduces the Chebyshev metric") {
    const auto field = one_soliton();
    const auto e = sine_gordon_surface(field);
    CHECK(e.diagnostics.at("phi_residual") < 1e-5);
    CHECK(e.diagnostics.at("monodromy") < 1e-8);
    const Box box = e.chart.usable_domain();
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double u = box[0].lo + (a + 0.5) / 3.0 * box[0].span();
            const double v = box[1].lo + (b + 0.5) / 3.0 * box[1].span();
            const Eigen::MatrixXd g = first_fundamental_form(e.chart, vec2(u, v));
            const double c = std::cos(field.phi(u, v));
            CHECK(std::abs(g(0, 0) - 1.0) < 1e-3);
            CHECK(std::abs(g(1, 1) - 1.0) < 1e-3);
            CHECK(std::abs(g(0, 1) - c) < 1e-3);
        }
    }
}

TEST_CASE("1-soliton patch has curvature -1") {
    const auto e = sine_gordon_surface(one_soliton());
    const MetricSampler metric = [&](const Eigen::VectorXd& x) { return first_fundamental_form(e.chart, x); };
    for (const auto& u : {e.anchor, vec2(-0.9, -0.5), vec2(-0.5, -0.8)}) {
        const auto R = riemann_curvature_at(metric, u, {0.02, 0.02});
        CHECK(std::abs(sectional_curvature(R, metric(u), 0, 1) + 1.0) < 1e-2);
    }
}

TEST_CASE("frame integration") {
    const auto field = one_soliton();
    const Eigen::Vector2d base(-0.7, -0.7);
    const auto f = sine_gordon_frame(field, base, -0.3, -1.1, 256);
    const auto g = sine_gordon_frame_v_first(field, base, -0.3, -1.1, 256);
    CHECK((f.position - g.position).norm() < 1e-8);
    CHECK((f.normal - g.normal).norm() < 1e-8);
    CHECK(f.tu.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.tv.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.tu.dot(f.tv) == doctest::Approx(std::cos(field.phi(-0.3, -1.1))).epsilon(1e-10));
    CHECK(std::abs(f.normal.dot(f.tu)) < 1e-10);
    CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("constant right angle gives unit Chebyshev net but fails sine-Gordon") {
    SineGordonField flat{[](double, double) { return std::numbers::pi / 2; }, [](double, double) { return 0.0; },
                         [](double, double) { return 0.0; }};
    const auto f = sine_gordon_frame(flat, Eigen::Vector2d(0, 0), 0.4, -0.3, 64);
    CHECK(f.tu.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.tv.norm() == doctest::Approx(1.0).epsilon(1e-12));
    try {
        sine_gordon_surface(flat);
        FAIL("expected rejection");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::argument);
    }
}

TEST_CASE("residual of the sampled soliton converges") {
    const auto field = one_soliton();
    double prev = 0;
    for (int res : {17, 33, 65}) {
        Grid grid({{-1.2, -0.2}, {-1.2, -0.2}}, {res, res});
        const auto phi = sample_scalar(grid, [&](const Eigen::VectorXd& x) { return field.phi(x[0], x[1]); });
        const double r = sine_gordon_residual(phi);
        if (prev > 0) CHECK(r < prev / 8.0);
        prev = r;
    }
}

TEST_CASE("patch leaving 0 < phi < pi is rejected") {
    SineGordonOptions opts;
    opts.patch = {{-0.2, 0.8}, {-0.2, 0.8}};
    CHECK_THROWS_AS(sine_gordon_surface(one_soliton(), opts), Error);
}
