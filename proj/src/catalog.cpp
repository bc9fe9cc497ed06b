#include "flatnormal/catalog.hpp"

#include "flatnormal/error.hpp"
#include "flatnormal/sine_gordon.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

namespace flatnormal {

namespace {

using std::numbers::pi;

template <class V>
using scalar_t = std::decay_t<decltype(std::declval<V>()[0])>;

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

double param(const std::vector<double>& params, std::size_t i, double fallback) {
    return i < params.size() ? params[i] : fallback;
}

}  // namespace

CatalogEntry pseudosphere() {
    CatalogEntry e;
    e.name = "pseudosphere";
    e.description = "tractricoid (sech u cos v, sech u sin v, u - tanh u) in R^3, K = -1";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::euclidean(3);
    e.chart.intrinsic_curvature = -1.0;
    e.chart.domain = {{0.3, 3.0}, {0.0, 2.0 * pi}};
    e.chart.map = ChartMap::closed_form([](const auto& u) {
        using std::cos, std::sin, std::tanh;
        using T = scalar_t<decltype(u)>;
        const T s = sech(u[0]);
        return std::vector<T>{s * cos(u[1]), s * sin(u[1]), u[0] - tanh(u[0])};
    });
    e.anchor = vec({std::asinh(1.0), pi});
    return e;
}

CatalogEntry dini(double a, double b) {
    if (!(a > 0.0) || b < 0.0) throw Error(ErrorKind::argument, "dini requires a > 0 and b >= 0");
    CatalogEntry e;
    e.name = "dini";
    e.description = "Dini helicoid (a cos u sin v, a sin u sin v, a(cos v + log tan(v/2)) + b u), K = -1/(a^2+b^2)";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::euclidean(3);
    e.chart.intrinsic_curvature = -1.0 / (a * a + b * b);
    e.chart.domain = {{0.0, 2.0 * pi}, {0.4, 1.2}};
    e.chart.map = ChartMap::closed_form([a, b](const auto& u) {
        using std::cos, std::sin, std::tan, std::log;
        using T = scalar_t<decltype(u)>;
        const T sv = sin(u[1]);
        return std::vector<T>{a * cos(u[0]) * sv, a * sin(u[0]) * sv,
                              a * (cos(u[1]) + log(tan(u[1] / 2.0))) + b * u[0]};
    });
    e.anchor = vec({pi, 0.8});
    return e;
}

CatalogEntry product_torus_r4(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw Error(ErrorKind::argument, "product torus radii must be positive");
    CatalogEntry e;
    e.name = "product_torus_r4";
    e.description = "flat product of circles (r1 cos u, r1 sin u, r2 cos v, r2 sin v) in R^4; C = 0 edge case";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::euclidean(4);
    e.chart.intrinsic_curvature = 0.0;
    e.chart.domain = {{0.0, 2.0 * pi}, {0.0, 2.0 * pi}};
    e.chart.map = ChartMap::closed_form([r1, r2](const auto& u) {
        using std::cos, std::sin;
        using T = scalar_t<decltype(u)>;
        return std::vector<T>{r1 * cos(u[0]), r1 * sin(u[0]), r2 * cos(u[1]), r2 * sin(u[1])};
    });
    e.codimension = 2;
    e.expected.positive_C = false;
    e.anchor = vec({pi, pi});
    return e;
}

CatalogEntry clifford_torus_s3(double t) {
    if (!(t > 1e-3) || !(t < pi / 2.0 - 1e-3)) throw Error(ErrorKind::argument, "clifford torus needs t in (0, pi/2)");
    CatalogEntry e;
    e.name = "clifford_torus_s3";
    e.description = "flat torus (cos t cos u, cos t sin u, sin t cos v, sin t sin v) in S^3; C = 1";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::sphere(3, 1.0);
    e.chart.intrinsic_curvature = 0.0;
    e.chart.domain = {{0.0, 2.0 * pi}, {0.0, 2.0 * pi}};
    const double ct = std::cos(t), st = std::sin(t);
    e.chart.map = ChartMap::closed_form([ct, st](const auto& u) {
        using std::cos, std::sin;
        using T = scalar_t<decltype(u)>;
        return std::vector<T>{ct * cos(u[0]), ct * sin(u[0]), st * cos(u[1]), st * sin(u[1])};
    });
    e.anchor = vec({pi, pi});
    return e;
}

CatalogEntry sphere_negative_control(double c) {
    if (!(c > 0.0)) throw Error(ErrorKind::argument, "sphere control requires c > 0");
    const double R = 1.0 / std::sqrt(c);
    CatalogEntry e;
    e.name = "sphere_negative_control";
    e.description = "round sphere of curvature c in R^3; umbilical, violates c < c~";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::euclidean(3);
    e.chart.intrinsic_curvature = c;
    e.chart.domain = {{0.3, pi - 0.3}, {0.0, 2.0 * pi}};
    e.chart.map = ChartMap::closed_form([R](const auto& u) {
        using std::cos, std::sin;
        using T = scalar_t<decltype(u)>;
        return std::vector<T>{R * sin(u[0]) * cos(u[1]), R * sin(u[0]) * sin(u[1]), R * cos(u[0])};
    });
    e.expected.positive_C = false;
    e.expected.simple_principal = false;
    e.anchor = vec({pi / 2.0, pi});
    return e;
}

CatalogEntry flat_plane() {
    CatalogEntry e;
    e.name = "flat_plane";
    e.description = "plane (u1, u2, 0) in R^3; totally geodesic";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::euclidean(3);
    e.chart.intrinsic_curvature = 0.0;
    e.chart.domain = {{-1.0, 1.0}, {-1.0, 1.0}};
    e.chart.map = ChartMap::closed_form([](const auto& u) {
        using T = scalar_t<decltype(u)>;
        return std::vector<T>{u[0], u[1], T(0.0)};
    });
    e.expected.positive_C = false;
    e.expected.simple_principal = false;
    e.anchor = vec({0.0, 0.0});
    return e;
}

CatalogEntry equatorial_sphere_s3() {
    CatalogEntry e;
    e.name = "equatorial_s2_s3";
    e.description = "totally geodesic equatorial S^2 in S^3";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::sphere(3, 1.0);
    e.chart.intrinsic_curvature = 1.0;
    e.chart.domain = {{0.3, pi - 0.3}, {0.0, 2.0 * pi}};
    e.chart.map = ChartMap::closed_form([](const auto& u) {
        using std::cos, std::sin;
        using T = scalar_t<decltype(u)>;
        return std::vector<T>{sin(u[0]) * cos(u[1]), sin(u[0]) * sin(u[1]), cos(u[0]), T(0.0)};
    });
    e.expected.positive_C = false;
    e.expected.simple_principal = false;
    e.anchor = vec({pi / 2.0, pi});
    return e;
}

CatalogEntry hyperbolic_plane(double c) {
    if (!(c < 0.0)) throw Error(ErrorKind::argument, "hyperbolic plane requires c < 0");
    const double R2 = -1.0 / c;
    CatalogEntry e;
    e.name = "hyperbolic_plane";
    e.description = "hyperboloid graph (u1, u2, sqrt(1/|c| + |u|^2)) in Lorentzian R^{2,1}; identity of H^2_c";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::hyperbolic(2, c);
    e.chart.intrinsic_curvature = c;
    e.chart.domain = {{-11.0, 11.0}, {-11.0, 11.0}};
    e.chart.map = ChartMap::closed_form([R2](const auto& u) {
        using std::sqrt;
        using T = scalar_t<decltype(u)>;
        return std::vector<T>{u[0], u[1], sqrt(R2 + u[0] * u[0] + u[1] * u[1])};
    });
    e.codimension = 0;
    e.expected.positive_C = false;
    e.expected.simple_principal = false;
    e.anchor = vec({0.0, 0.0});
    return e;
}

CatalogEntry pseudosphere_times_line() {
    CatalogEntry e;
    e.name = "ps3";
    e.description = "pseudosphere x line in R^4; n = 3 control, not of constant curvature";
    e.chart.name = e.name;
    e.chart.n = 3;
    e.chart.ambient = AmbientModel::euclidean(4);
    e.chart.domain = {{0.3, 3.0}, {0.0, 2.0 * pi}, {-1.0, 1.0}};
    e.chart.map = ChartMap::closed_form([](const auto& u) {
        using std::cos, std::sin, std::tanh;
        using T = scalar_t<decltype(u)>;
        const T s = sech(u[0]);
        return std::vector<T>{s * cos(u[1]), s * sin(u[1]), u[0] - tanh(u[0]), u[2]};
    });
    e.expected.positive_C = false;
    e.expected.constant_curvature = false;
    e.anchor = vec({std::asinh(1.0), pi, 0.0});
    return e;
}

CatalogEntry veronese_r5() {
    CatalogEntry e;
    e.name = "veronese_r5";
    e.description = "quadratic Veronese-type graph (u, v, u^2/2, uv, v^2/2) in R^5; non-flat normal bundle";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::euclidean(5);
    e.chart.domain = {{-1.0, 1.0}, {-1.0, 1.0}};
    e.chart.map = ChartMap::closed_form([](const auto& u) {
        using T = scalar_t<decltype(u)>;
        return std::vector<T>{u[0], u[1], 0.5 * u[0] * u[0], u[0] * u[1], 0.5 * u[1] * u[1]};
    });
    e.codimension = 3;
    e.expected.flat_normal_bundle = false;
    e.expected.positive_C = false;
    e.expected.simple_principal = false;
    e.expected.constant_curvature = false;
    e.anchor = vec({0.3, 0.2});
    return e;
}

std::vector<CatalogListing> catalog_listing() {
    return {
        {"pseudosphere", "", "K = -1 tractricoid in R^3 (c = -1, c~ = 0)"},
        {"dini", "a=1 b=0.5", "Dini helicoid, K = -1/(a^2+b^2) in R^3"},
        {"clifford_torus_s3", "t=pi/4", "flat torus in S^3 (c = 0, c~ = 1)"},
        {"sine_gordon_soliton", "", "K = -1 patch from the 1-soliton of phi_uv = sin phi"},
        {"product_torus_r4", "r1=1 r2=2", "flat product torus in R^4 (C = 0, exploratory only)"},
        {"sphere_negative_control", "c=1", "round sphere in R^3 (c > c~, umbilical)"},
        {"flat_plane", "", "plane in R^3 (totally geodesic)"},
        {"equatorial_s2_s3", "", "totally geodesic S^2 in S^3"},
        {"hyperbolic_plane", "c=-1", "H^2_c as hyperboloid graph (oracle chart, p = 0)"},
        {"ps3", "", "pseudosphere x line in R^4 (n = 3 control)"},
        {"veronese_r5", "", "quadratic surface in R^5 with non-flat normal bundle"},
    };
}

CatalogEntry make_entry(const std::string& name, const std::vector<double>& params) {
    if (name == "pseudosphere") return pseudosphere();
    if (name == "dini") return dini(param(params, 0, 1.0), param(params, 1, 0.5));
    if (name == "product_torus_r4") return product_torus_r4(param(params, 0, 1.0), param(params, 1, 2.0));
    if (name == "clifford_torus_s3") return clifford_torus_s3(param(params, 0, pi / 4.0));
    if (name == "sphere_negative_control") return sphere_negative_control(param(params, 0, 1.0));
    if (name == "flat_plane") return flat_plane();
    if (name == "equatorial_s2_s3") return equatorial_sphere_s3();
    if (name == "hyperbolic_plane") return hyperbolic_plane(param(params, 0, -1.0));
    if (name == "ps3") return pseudosphere_times_line();
    if (name == "veronese_r5") return veronese_r5();
    if (name == "sine_gordon_soliton") return sine_gordon_soliton_entry();
    throw Error(ErrorKind::argument, "unknown catalog entry '" + name + "'");
}

}  // namespace flatnormal
