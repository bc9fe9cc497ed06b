#include "flatnormal/catalog.hpp"
#include "flatnormal/curvature.hpp"
#include "flatnormal/error.hpp"
#include "flatnormal/principal.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace flatnormal;
using flatnormal::testing::Sampler;

namespace {

std::vector<Eigen::VectorXd> interior_points(const ImmersionChart& chart, int count, std::uint64_t seed) {
    Sampler rng(seed);
    const Box box = chart.usable_domain();
    std::vector<Eigen::VectorXd> pts;
    for (int k = 0; k < count; ++k) {
        Eigen::VectorXd u(chart.n);
        for (int i = 0; i < chart.n; ++i)
            u[i] = rng.uniform(box[i].lo + 0.15 * box[i].span(), box[i].hi - 0.15 * box[i].span());
        pts.push_back(u);
    }
    return pts;
}

}  // namespace

TEST_CASE("every catalog entry satisfies its registered properties") {
    for (const auto& listing : catalog_listing()) {
        CAPTURE(listing.name);
        const CatalogEntry e = make_entry(listing.name);
        const auto& chart = e.chart;
        CHECK_NOTHROW(chart.validate());
        const bool ad = chart.engine() == Engine::ad;
        const double curvature_tol = ad ? 1e-5 : 1e-2;

        // c < c~ re-derived from the asserted curvatures.
        const bool positive_C = chart.intrinsic_curvature && chart.ambient.curvature - *chart.intrinsic_curvature > 0;
        CHECK(positive_C == e.expected.positive_C);

        const int samples = ad ? 6 : 2;
        bool all_flat = true, all_simple = true, constant = true;
        for (const auto& u : interior_points(chart, samples, 101)) {
            const auto fd = second_fundamental_form(chart, u);
            CHECK(fd.p() == e.codimension);
            const bool flat = normal_bundle_is_flat(fd, 10 * chart.default_tolerance()).flat;
            all_flat = all_flat && flat;
            if (flat && fd.p() > 0) {
                PrincipalOptions opts;
                opts.exploratory = true;
                const auto d = principal_decomposition(fd, std::nullopt, opts);
                all_simple = all_simple && d.all_simple() && d.s == chart.n;
            } else {
                all_simple = false;
            }
            if (chart.intrinsic_curvature) {
                const MetricSampler metric = [&](const Eigen::VectorXd& x) { return first_fundamental_form(chart, x); };
                std::vector<double> h(static_cast<std::size_t>(chart.n));
                for (int i = 0; i < chart.n; ++i) h[static_cast<std::size_t>(i)] = (ad ? 1e-3 : 1e-2) * chart.domain[i].span();
                const auto R = riemann_curvature_at(metric, u, h);
                const Eigen::MatrixXd g = metric(u);
                for (int i = 0; i < chart.n; ++i)
                    for (int j = i + 1; j < chart.n; ++j)
                        constant = constant &&
                                   std::abs(sectional_curvature(R, g, i, j) - *chart.intrinsic_curvature) < curvature_tol;
            } else {
                constant = false;
            }
        }
        CHECK(all_flat == e.expected.flat_normal_bundle);
        CHECK(all_simple == e.expected.simple_principal);
        CHECK(constant == e.expected.constant_curvature);
        CHECK(box_contains(chart.usable_domain(), e.anchor));
    }
}

TEST_CASE("dini with b = 0 is a rescaled pseudosphere") {
    const double a = 1.7;
    const auto e = dini(a, 0.0);
    REQUIRE(e.chart.intrinsic_curvature);
    CHECK(*e.chart.intrinsic_curvature == doctest::Approx(-1.0 / (a * a)));
    for (const auto& u : interior_points(e.chart, 5, 7)) {
        const auto fd = second_fundamental_form(e.chart, u);
        const auto d = principal_decomposition(fd, 1.0 / (a * a));
        REQUIRE(d.s == 2);
        CHECK(d.etas[0].dot(d.etas[1]) == doctest::Approx(-1.0 / (a * a)).epsilon(1e-10));
    }
}

TEST_CASE("dini family samples satisfy the Gauss identity") {
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {0.8, 0.2}, {1.5, 1.0}}) {
        const auto e = dini(a, b);
        const double C = -*e.chart.intrinsic_curvature;
        for (const auto& u : interior_points(e.chart, 5, 13)) {
            const auto d = principal_decomposition(second_fundamental_form(e.chart, u), C);
            REQUIRE(d.s == 2);
            CHECK(std::abs(d.etas[0].dot(d.etas[1]) + C) < 1e-10);
        }
    }
}

TEST_CASE("product torus curvature vectors") {
    const auto e = product_torus_r4(1.5, 0.5);
    PrincipalOptions opts;
    opts.exploratory = true;
    for (const auto& u : interior_points(e.chart, 5, 3)) {
        const auto fd = second_fundamental_form(e.chart, u);
        CHECK(normal_bundle_is_flat(fd, 1e-12).flat);
        const auto d = principal_decomposition(fd, 0.0, opts);
        REQUIRE(d.s == 2);
        CHECK(d.etas[0].norm() == doctest::Approx(2.0));
        CHECK(d.etas[1].norm() == doctest::Approx(1.0 / 1.5));
    }
}

TEST_CASE("parameter preconditions") {
    CHECK_THROWS_AS(dini(0.0, 0.5), Error);
    CHECK_THROWS_AS(dini(1.0, -0.1), Error);
    CHECK_THROWS_AS(product_torus_r4(0.0, 1.0), Error);
    CHECK_THROWS_AS(clifford_torus_s3(0.0), Error);
    CHECK_THROWS_AS(clifford_torus_s3(1.6), Error);
    CHECK_THROWS_AS(sphere_negative_control(-1.0), Error);
    CHECK_THROWS_AS(make_entry("no_such_surface"), Error);
}
