#include "flatnormal/catalog.hpp"
#include "flatnormal/coords.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace flatnormal;
using flatnormal::testing::vec2;

namespace {

int rotational_axis(const PrincipalFrame& f) {
    return std::abs(f.directions(1, 0)) > std::abs(f.directions(0, 0)) ? 0 : 1;
}

const ResidualReport& find(const CoordsReport& r, const std::string& name) {
    for (const auto& q : r.reports)
        if (q.identity == name) return q;
    throw std::runtime_error("missing report " + name);
}

}  // namespace

TEST_CASE("flows on the pseudosphere") {
    const auto e = pseudosphere();
    const PrincipalFlowField field(e.chart, 1.0);
    const Eigen::VectorXd x0 = vec2(1.1, 2.0);
    const FlowState start{x0, field.frame(x0)};

    SUBCASE("t = 0 is the identity") {
        for (int axis : {0, 1}) CHECK(integrate_flow(field, start, axis, 0.0, 0.005).u == x0);
    }
    SUBCASE("rotational direction advances v at unit speed") {
        // Along the parallels X = cosh u d/dv and sqrt(|eta|^2 + 1) = cosh u, so Y = +-d/dv.
        const int axis = rotational_axis(start.frame);
        for (double t : {0.3, -0.7, 1.2}) {
            const FlowState s = integrate_flow(field, start, axis, t, 0.005);
            CHECK(std::abs(s.u[0] - x0[0]) < 1e-12);
            CHECK(std::abs(std::abs(s.u[1] - x0[1]) - std::abs(t)) < 1e-12);
        }
    }
    SUBCASE("meridian direction advances u at unit speed") {
        const int axis = 1 - rotational_axis(start.frame);
        const FlowState s = integrate_flow(field, start, axis, 0.4, 0.005);
        CHECK(std::abs(std::abs(s.u[0] - x0[0]) - 0.4) < 1e-12);
        CHECK(std::abs(s.u[1] - x0[1]) < 1e-12);
    }
    SUBCASE("round trip") {
        for (int axis : {0, 1}) {
            const FlowState there = integrate_flow(field, start, axis, 0.5, 0.005);
            const FlowState back = integrate_flow(field, there, axis, -0.5, 0.005);
            CHECK((back.u - x0).norm() < 1e-8);
        }
    }
    SUBCASE("domain exit carries the exit time") {
        const int axis = 1 - rotational_axis(start.frame);
        try {
            integrate_flow(field, start, axis, 5.0, 0.01);
            integrate_flow(field, start, axis, -5.0, 0.01);
            FAIL("expected a domain exit");
        } catch (const FlowExit& exit) {
            CHECK(exit.axis() == axis);
            CHECK(std::abs(exit.exit_time()) > 0.5);
            CHECK(std::abs(exit.exit_time()) < 5.0);
            CHECK(exit.kind() == ErrorKind::domain);
        }
    }
}

TEST_CASE("lie brackets") {
    SUBCASE("constant coordinate fields commute exactly") {
        const auto fields = [](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)); };
        for (const auto& b : lie_brackets(fields, vec2(0.1, 0.2), {1e-3, 1e-3})) CHECK(b.norm() == 0.0);
    }
    SUBCASE("polar fields against the closed form") {
        // [d/dx, x d/dy] = d/dy
        const auto fields = [](const Eigen::VectorXd& u) {
            Eigen::MatrixXd V = Eigen::MatrixXd::Zero(2, 2);
            V(0, 0) = 1.0;
            V(1, 1) = u[0];
            return V;
        };
        const auto b = lie_brackets(fields, vec2(0.4, -0.3), {1e-3, 1e-3});
        REQUIRE(b.size() == 1);
        CHECK((b[0] - vec2(0.0, 1.0)).norm() < 1e-12);
    }
    SUBCASE("principal fields") {
        const auto ps = pseudosphere();
        CHECK(commutator_residual(PrincipalFlowField(ps.chart, 1.0), vec2(1.3, 2.0)) < 1e-4);
        const auto d = dini(1.0, 0.5);
        CHECK(commutator_residual(PrincipalFlowField(d.chart, 0.8), d.anchor) < 1e-4);
        PrincipalOptions exploratory;
        exploratory.exploratory = true;
        const auto torus = product_torus_r4(1.0, 2.0);
        CHECK(commutator_residual(PrincipalFlowField(torus.chart, 0.0, exploratory), vec2(1.0, 2.0)) < 1e-4);
    }
}

TEST_CASE("flow map") {
    const auto e = pseudosphere();
    SUBCASE("F(0) = x0 and sampled values follow the closed form") {
        FlowOptions opts;
        opts.points = 11;
        opts.half_widths = {0.3, 0.4};
        const FlowMap map = build_flow_map(e.chart, e.anchor, opts);
        CHECK(map.size() == 121);
        CHECK(map.values[map.linear_index({5, 5})] == e.anchor);
        CHECK(map.t(map.linear_index({5, 5})).norm() == 0.0);
        CHECK(map.warnings.empty());
        for (std::size_t k = 0; k < map.size(); ++k) {
            const Eigen::VectorXd d = (map.values[k] - e.anchor).cwiseAbs();
            const Eigen::VectorXd t = map.t(k).cwiseAbs();
            // principal coordinates of the pseudosphere are (u, v) up to order and sign
            CHECK(std::min((d - t).norm(), (d - t.reverse()).norm()) < 1e-12);
        }
    }
    SUBCASE("zero-size box gives a single row") {
        FlowOptions opts;
        opts.half_widths = {0.0, 0.0};
        const FlowMap map = build_flow_map(e.chart, e.anchor, opts);
        REQUIRE(map.size() == 1);
        CHECK(map.values[0] == e.anchor);
        std::ostringstream csv;
        write_flow_csv(csv, map);
        CHECK(csv.str() == "t1,t2,u1,u2\n0,0,0.88137358701954305,3.1415926535897931\n");
    }
    SUBCASE("box forcing a domain exit is shrunk") {
        FlowOptions opts;
        opts.half_widths = {2.0, 2.0};
        opts.points = 9;
        const FlowMap map = build_flow_map(e.chart, e.anchor, opts);
        CHECK_FALSE(map.warnings.empty());
        CHECK(std::min(map.half_widths[0], map.half_widths[1]) < 2.0);
        for (const auto& u : map.values) CHECK(box_contains(e.chart.usable_domain(), u));
    }
    SUBCASE("invalid options") {
        FlowOptions opts;
        opts.points = 10;
        CHECK_THROWS_AS(build_flow_map(e.chart, e.anchor, opts), Error);
        opts.points = 11;
        opts.half_widths = {0.1};
        CHECK_THROWS_AS(build_flow_map(e.chart, e.anchor, opts), Error);
    }
}

TEST_CASE("principal coordinate reports") {
    SUBCASE("pseudosphere and Clifford torus pass every check") {
        for (const auto& e : {pseudosphere(), clifford_torus_s3(std::numbers::pi / 4)}) {
            CAPTURE(e.name);
            const auto r = principal_coordinates_report(e.chart, e.anchor);
            CHECK_FALSE(r.skipped);
            CHECK(r.reports.size() == 9);
            for (const auto& q : r.reports) {
                CAPTURE(q.identity);
                CHECK(q.passed());
            }
            CHECK(find(r, "homomorphism").points == 100);
            CHECK(find(r, "pullback_g0").max <= 1e-3);
        }
    }
    SUBCASE("Dini family orthonormality") {
        for (const auto& [a, b] : std::vector<std::pair<double, double>>{{1.0, 0.5}, {0.8, 0.3}, {1.3, 0.9}}) {
            const auto e = dini(a, b);
            CoordsOptions opts;
            opts.flow.half_widths = {0.2, 0.05};
            opts.flow.points = 9;
            opts.random_pairs = 20;
            const auto r = principal_coordinates_report(e.chart, e.anchor, opts);
            CAPTURE(a);
            CHECK(find(r, "pullback_orthonormal").max <= 1e-3);
            CHECK(find(r, "pullback_g0").passed());
            CHECK(find(r, "homomorphism").passed());
        }
    }
    SUBCASE("flat plane violates the hypotheses and is skipped") {
        CoordsOptions opts;
        opts.flow.C_override = 1.0;
        const auto e = flat_plane();
        const auto r = principal_coordinates_report(e.chart, e.anchor, opts);
        CHECK(r.skipped);
        CHECK_FALSE(r.note.empty());
        for (const auto& q : r.reports) CHECK(q.verdict == Verdict::skipped);
    }
    SUBCASE("product torus needs exploratory mode") {
        const auto e = product_torus_r4(1.0, 2.0);
        CHECK(principal_coordinates_report(e.chart, e.anchor).skipped);
        CoordsOptions opts;
        opts.flow.principal.exploratory = true;
        opts.random_pairs = 10;
        const auto r = principal_coordinates_report(e.chart, e.anchor, opts);
        CHECK_FALSE(r.skipped);
        CHECK(find(r, "commutator").passed());
    }
    SUBCASE("flow csv is deterministic") {
        const auto e = dini(1.0, 0.5);
        FlowOptions opts;
        opts.half_widths = {0.1, 0.05};
        opts.points = 5;
        std::ostringstream a, b;
        write_flow_csv(a, build_flow_map(e.chart, e.anchor, opts));
        write_flow_csv(b, build_flow_map(e.chart, e.anchor, opts));
        CHECK(a.str() == b.str());
    }
}
