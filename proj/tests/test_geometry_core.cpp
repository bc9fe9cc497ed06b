#include "flatnormal/catalog.hpp"
#include "flatnormal/error.hpp"
#include "flatnormal/fundamental.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace flatnormal;
using flatnormal::testing::Sampler;
using flatnormal::testing::vec2;

namespace {

double sorted_gap(Eigen::Vector2d a, Eigen::Vector2d b) {
    std::sort(a.data(), a.data() + 2);
    std::sort(b.data(), b.data() + 2);
    return (a - b).cwiseAbs().maxCoeff();
}

Eigen::Vector2d shape_eigenvalues(const FundamentalData& fd) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fd.shape_operators().front());
    return eig.eigenvalues();
}

}  // namespace

TEST_CASE("hyper-dual arithmetic matches closed-form derivatives") {
    const HyperDual x(0.7, 1.0, 1.0, 0.0);
    const HyperDual y = sech(x) * sin(x) + log(x) * sqrt(x);
    // f = sech(x) sin(x) + log(x) sqrt(x), differentiated by hand.
    const double v = 0.7;
    const double s = 1.0 / std::cosh(v), t = std::tanh(v);
    const double f1 = -s * t * std::sin(v) + s * std::cos(v) + std::sqrt(v) / v + std::log(v) * 0.5 / std::sqrt(v);
    const double f2 = s * (t * t - (1 - t * t)) * std::sin(v) - 2 * s * t * std::cos(v) - s * std::sin(v) +
                      (-1.0 / (v * v)) * std::sqrt(v) + 2 * (1.0 / v) * 0.5 / std::sqrt(v) +
                      std::log(v) * (-0.25) / (v * std::sqrt(v));
    CHECK(y.d1 == doctest::Approx(f1).epsilon(1e-13));
    CHECK(y.d2 == doctest::Approx(f1).epsilon(1e-13));
    CHECK(y.d12 == doctest::Approx(f2).epsilon(1e-12));
}

TEST_CASE("evaluate_chart") {
    SUBCASE("pseudosphere at the rim") {
        auto chart = pseudosphere().chart;
        chart.domain[0].lo = 0.0;
        const Eigen::VectorXd x = evaluate_chart(chart, vec2(0.0, 0.0));
        CHECK(x[0] == doctest::Approx(1.0));
        CHECK(x[1] == 0.0);
        CHECK(x[2] == 0.0);
    }
    SUBCASE("unit sphere equator lies on the model") {
        const auto chart = equatorial_sphere_s3().chart;
        const Eigen::VectorXd x = evaluate_chart(chart, vec2(std::numbers::pi / 2, 1.0));
        CHECK(chart.ambient.inner(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("dini against a long double evaluation") {
        const auto chart = dini(1.0, 0.5).chart;
        Sampler rng(7);
        for (int k = 0; k < 5; ++k) {
            const double u = rng.uniform(0.0, 6.0), v = rng.uniform(0.45, 1.15);
            const long double a = 1.0L, b = 0.5L, ul = u, vl = v;
            const long double ref[3] = {a * std::cos(ul) * std::sin(vl), a * std::sin(ul) * std::sin(vl),
                                        a * (std::cos(vl) + std::log(std::tan(vl / 2.0L))) + b * ul};
            const Eigen::VectorXd x = evaluate_chart(chart, vec2(u, v));
            for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - static_cast<double>(ref[i])) < 1e-14);
        }
    }
    SUBCASE("out of domain") {
        CHECK_THROWS_AS(evaluate_chart(pseudosphere().chart, vec2(0.1, 0.0)), Error);
        try {
            evaluate_chart(pseudosphere().chart, vec2(0.1, 0.0));
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::domain);
        }
    }
    SUBCASE("model constraint violation") {
        auto chart = equatorial_sphere_s3().chart;
        chart.map = ChartMap::closed_form([](const auto& u) {
            using T = std::decay_t<decltype(u[0])>;
            return std::vector<T>{u[0], u[1], T(0.0), T(0.0)};
        });
        try {
            evaluate_chart(chart, vec2(1.0, 1.0));
            FAIL("expected model-consistency error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::model_consistency);
        }
    }
}

TEST_CASE("first fundamental form") {
    SUBCASE("pseudosphere matches diag(tanh^2 u, sech^2 u) at random points") {
        for (Engine engine : {Engine::ad, Engine::fd}) {
            const auto chart = pseudosphere().chart.with_engine(engine);
            const double tol = engine == Engine::ad ? 1e-14 : 1e-9;
            Sampler rng(11);
            for (int k = 0; k < 10; ++k) {
                const double u = rng.uniform(0.35, 2.9), v = rng.uniform(0.1, 6.0);
                const Eigen::MatrixXd g = first_fundamental_form(chart, vec2(u, v));
                CHECK(std::abs(g(0, 0) - std::pow(std::tanh(u), 2)) < tol);
                CHECK(std::abs(g(1, 1) - std::pow(1.0 / std::cosh(u), 2)) < tol);
                CHECK(std::abs(g(0, 1)) < tol);
                CHECK(g(0, 1) == g(1, 0));
            }
        }
    }
    SUBCASE("flat plane is the identity") {
        const Eigen::MatrixXd g = first_fundamental_form(flat_plane().chart, vec2(0.2, -0.3));
        CHECK((g - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
    }
    SUBCASE("degenerate chart") {
        auto chart = flat_plane().chart;
        chart.map = ChartMap::closed_form([](const auto& u) {
            using T = std::decay_t<decltype(u[0])>;
            return std::vector<T>{u[0] + u[1], u[0] + u[1], T(0.0)};
        });
        try {
            first_fundamental_form(chart, vec2(0.0, 0.0));
            FAIL("expected degeneracy error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::degeneracy);
        }
    }
    SUBCASE("finite-difference stencil must fit in the domain") {
        const auto chart = pseudosphere().chart.with_engine(Engine::fd);
        CHECK_THROWS_AS(first_fundamental_form(chart, vec2(0.3, 1.0)), Error);
        CHECK_NOTHROW(first_fundamental_form(pseudosphere().chart, vec2(0.3, 1.0)));
    }
}

TEST_CASE("second fundamental form") {
    SUBCASE("pseudosphere principal curvatures") {
        const double u1 = std::asinh(1.0);
        for (Engine engine : {Engine::ad, Engine::fd}) {
            const auto chart = pseudosphere().chart.with_engine(engine);
            const double tol = engine == Engine::ad ? 1e-12 : 1e-8;
            const auto fd = second_fundamental_form(chart, vec2(u1, 2.0));
            CHECK(sorted_gap(shape_eigenvalues(fd), Eigen::Vector2d(-1.0, 1.0)) < tol);
            Sampler rng(3);
            for (int k = 0; k < 5; ++k) {
                const double u = rng.uniform(0.4, 2.8);
                const auto f = second_fundamental_form(chart, vec2(u, rng.uniform(0.1, 6.0)));
                const Eigen::Vector2d ev = shape_eigenvalues(f);
                const Eigen::Vector2d k12(-1.0 / std::sinh(u), std::sinh(u));
                CHECK(std::min(sorted_gap(ev, k12), sorted_gap(ev, -k12)) < tol * std::max(1.0, std::sinh(u)));
            }
        }
    }
    SUBCASE("totally geodesic charts have zero alpha") {
        for (const auto& entry : {equatorial_sphere_s3(), flat_plane()}) {
            const auto fd = second_fundamental_form(entry.chart, entry.anchor);
            CHECK(fd.sff_norm_sq < 1e-24);
            CHECK(fd.p() == 1);
        }
    }
    SUBCASE("alpha is symmetric and the normal frame is orthonormal") {
        const auto entry = clifford_torus_s3(0.6);
        const auto fd = second_fundamental_form(entry.chart, vec2(1.0, 2.0));
        for (const auto& h : fd.alpha) CHECK((h - h.transpose()).norm() == 0.0);
        const auto& amb = entry.chart.ambient;
        for (int a = 0; a < fd.p(); ++a) {
            CHECK(amb.inner(fd.normal_frame.col(a), fd.normal_frame.col(a)) == doctest::Approx(1.0));
            CHECK(std::abs(amb.inner(fd.normal_frame.col(a), fd.position)) < 1e-14);
            for (int i = 0; i < 2; ++i) CHECK(std::abs(amb.inner(fd.normal_frame.col(a), fd.tangents.col(i))) < 1e-14);
        }
    }
    SUBCASE("hyperbolic ambient: normal frame in the Lorentzian container") {
        // Round sphere of radius 1 inside H^3 realised on a hyperboloid slice.
        ImmersionChart chart;
        chart.name = "geodesic_sphere_h3";
        chart.n = 2;
        chart.ambient = AmbientModel::hyperbolic(3, -1.0);
        chart.intrinsic_curvature = 1.0 / (std::sinh(1.0) * std::sinh(1.0));
        chart.domain = {{0.3, 2.8}, {0.0, 6.2}};
        chart.map = ChartMap::closed_form([](const auto& u) {
            using std::cos, std::sin;
            using T = std::decay_t<decltype(u[0])>;
            const double r = std::sinh(1.0);
            return std::vector<T>{r * sin(u[0]) * cos(u[1]), r * sin(u[0]) * sin(u[1]), r * cos(u[0]), T(std::cosh(1.0))};
        });
        const auto fd = second_fundamental_form(chart, vec2(1.0, 1.0));
        CHECK(chart.ambient.constraint_defect(fd.position) < 1e-14);
        // Geodesic sphere of radius r in H^3 is umbilical with principal curvature coth r.
        const Eigen::Vector2d ev = shape_eigenvalues(fd).cwiseAbs();
        CHECK(ev[0] == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-12));
        CHECK(ev[1] == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-12));
    }
}

TEST_CASE("normal bundle flatness") {
    SUBCASE("hypersurfaces are exactly flat") {
        const auto fd = second_fundamental_form(pseudosphere().chart, pseudosphere().anchor);
        const auto r = normal_bundle_is_flat(fd, 1e-8);
        CHECK(r.flat);
        CHECK(r.residual == 0.0);
    }
    SUBCASE("product torus in R^4") {
        const auto e = product_torus_r4(1.0, 2.0);
        Sampler rng(5);
        for (int k = 0; k < 5; ++k) {
            const auto fd = second_fundamental_form(e.chart, vec2(rng.uniform(0.1, 6.0), rng.uniform(0.1, 6.0)));
            CHECK(normal_bundle_is_flat(fd, 1e-8).flat);
        }
    }
    SUBCASE("Veronese control matches an independent long double commutator") {
        const auto e = veronese_r5();
        Sampler rng(9);
        for (int k = 0; k < 5; ++k) {
            const double u = rng.uniform(-0.9, 0.9), v = rng.uniform(-0.9, 0.9);
            const auto fd = second_fundamental_form(e.chart, vec2(u, v));
            const auto flat = normal_bundle_is_flat(fd, 1e-8);
            CHECK_FALSE(flat.flat);

            // Oracle: normal space from the full-pivot kernel of the tangent matrix in long double;
            // compare the frame-invariant sum of squared commutators.
            using ML = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
            ML T(5, 2);
            T << 1, 0, 0, 1, u, 0, v, u, 0, v;
            ML G = T.transpose() * T;
            Eigen::LLT<ML> llt(G);
            ML L = llt.matrixL();
            ML B = L.inverse().transpose();
            Eigen::FullPivLU<ML> lu(T.transpose());
            ML K = lu.kernel();
            Eigen::HouseholderQR<ML> qr(K);
            ML Nf = qr.householderQ() * ML::Identity(5, 3);
            const long double hess[3][5] = {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};  // uu, uv, vv
            std::vector<ML> H;
            for (int a = 0; a < 3; ++a) {
                ML h(2, 2);
                auto dot = [&](int which) {
                    long double s = 0;
                    for (int c = 0; c < 5; ++c) s += hess[which][c] * Nf(c, a);
                    return s;
                };
                h << dot(0), dot(1), dot(1), dot(2);
                H.push_back(B.transpose() * h * B);
            }
            long double oracle = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) oracle += (H[a] * H[b] - H[b] * H[a]).squaredNorm();
            const auto Hi = fd.shape_operators();
            double ours = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) ours += (Hi[a] * Hi[b] - Hi[b] * Hi[a]).squaredNorm();
            CHECK(ours == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
            CHECK(flat.residual > 1e-2);
        }
    }
}

TEST_CASE("properties") {
    SUBCASE("sff norm is independent of the orthonormal basis") {
        for (const auto& e : {pseudosphere(), dini(1.0, 0.5), clifford_torus_s3(0.5), product_torus_r4(1.0, 2.0)}) {
            for (Engine engine : {Engine::ad, Engine::fd}) {
                const auto chart = e.chart.with_engine(engine);
                const auto fd = second_fundamental_form(chart, e.anchor);
                const Eigen::MatrixXd B = fd.orthonormal_basis();
                const double th = 0.731;
                Eigen::Matrix2d R;
                R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
                const double a = sff_norm_sq_in_basis(fd, B);
                const double b = sff_norm_sq_in_basis(fd, B * R);
                CHECK(std::abs(a - b) <= 10.0 * chart.default_tolerance() * std::max(1.0, a));
                CHECK(std::abs(a - fd.sff_norm_sq) <= 10.0 * chart.default_tolerance() * std::max(1.0, a));
            }
        }
    }
    SUBCASE("model constraint on non-flat ambients") {
        Sampler rng(21);
        for (const auto& e : {clifford_torus_s3(0.4), equatorial_sphere_s3(), hyperbolic_plane(-1.0)}) {
            for (int k = 0; k < 20; ++k) {
                Eigen::VectorXd u(2);
                for (int i = 0; i < 2; ++i) u[i] = rng.uniform(e.chart.domain[i].lo, e.chart.domain[i].hi);
                const Eigen::VectorXd x = evaluate_chart(e.chart, u);
                CHECK(e.chart.ambient.constraint_defect(x) <= 1e-12 * std::max(1.0, x.squaredNorm()));
            }
        }
    }
    SUBCASE("AD and FD engines agree on alpha") {
        const auto e = dini(1.0, 0.5);
        const auto a = second_fundamental_form(e.chart, e.anchor);
        const auto b = second_fundamental_form(e.chart.with_engine(Engine::fd), e.anchor);
        CHECK(std::abs(a.sff_norm_sq - b.sff_norm_sq) < 1e-6);
    }
}
