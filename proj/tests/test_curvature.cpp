#include "flatnormal/curvature.hpp"
#include "flatnormal/error.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace flatnormal;
using flatnormal::testing::vec2;
using flatnormal::testing::vec3;

TEST_CASE("unit sphere has sectional curvature +1") {
    const MetricSampler sphere = [](const Eigen::VectorXd& u) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
        g(0, 0) = 1.0;
        g(1, 1) = std::sin(u[0]) * std::sin(u[0]);
        return g;
    };
    for (double th : {0.6, 1.0, 1.9}) {
        const Eigen::VectorXd u = vec2(th, 0.4);
        const auto R = riemann_curvature_at(sphere, u, {1e-3, 1e-3});
        CHECK(sectional_curvature(R, sphere(u), 0, 1) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(R(0, 1, 0, 1) + R(0, 1, 1, 0)) < 1e-10);
        CHECK(std::abs(R(0, 1, 1, 0) - R(1, 0, 0, 1)) < 1e-10);
    }
}

TEST_CASE("upper half-plane has sectional curvature -1") {
    const MetricSampler half_plane = [](const Eigen::VectorXd& u) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2) / (u[1] * u[1]));
    };
    const Eigen::VectorXd u = vec2(0.3, 1.4);
    const auto R = riemann_curvature_at(half_plane, u, {1e-3, 1e-3});
    CHECK(sectional_curvature(R, half_plane(u), 0, 1) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("round 3-sphere in polar coordinates") {
    const MetricSampler s3 = [](const Eigen::VectorXd& u) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
        g(0, 0) = 1.0;
        g(1, 1) = std::pow(std::sin(u[0]), 2);
        g(2, 2) = std::pow(std::sin(u[0]) * std::sin(u[1]), 2);
        return g;
    };
    const Eigen::VectorXd u = vec3(1.1, 0.9, 0.2);
    const auto R = riemann_curvature_at(s3, u, {1e-3, 1e-3, 1e-3});
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) CHECK(sectional_curvature(R, s3(u), i, j) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("constant metric is flat on a grid") {
    Grid grid({{0, 1}, {0, 1}}, {9, 9});
    Eigen::MatrixXd c(2, 2);
    c << 2.0, 0.3, 0.3, 1.5;
    const auto field = sample_metric(grid, [&](const Eigen::VectorXd&) { return c; });
    const auto R = riemann_curvature(field, {4, 4});
    CHECK(R.max_abs() < 1e-12);
    for (const auto& G : christoffel_from_metric(field, {4, 4})) CHECK(G.norm() < 1e-14);
    CHECK_THROWS_AS(riemann_curvature(field, {1, 4}), Error);
}

TEST_CASE("grid Christoffel symbols of polar coordinates") {
    Grid grid({{0.5, 1.5}, {0.0, 1.0}}, {33, 33});
    const auto field = sample_metric(grid, [](const Eigen::VectorXd& u) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        g(1, 1) = u[0] * u[0];
        return g;
    });
    const std::vector<int> idx{16, 16};
    const double r = grid.point(idx)[0];
    const auto G = christoffel_from_metric(field, idx);
    CHECK(G[0](1, 1) == doctest::Approx(-r).epsilon(1e-9));
    CHECK(G[1](0, 1) == doctest::Approx(1.0 / r).epsilon(1e-8));
    CHECK(G[1](1, 0) == doctest::Approx(1.0 / r).epsilon(1e-8));
    CHECK(riemann_curvature(field, idx).max_abs() < 1e-6);
}
