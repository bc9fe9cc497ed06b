#include "flatnormal/sine_gordon.hpp"

#include "flatnormal/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace flatnormal {

namespace {

using State = Eigen::Matrix<double, 12, 1>;  // F, T1, T2, N

struct PhiJet {
    double phi, pu, pv;
};

PhiJet phi_jet(const SineGordonField& f, double u, double v) {
    PhiJet j{f.phi(u, v), 0.0, 0.0};
    constexpr double h = 1e-3;
    auto d = [&](double du, double dv) {
        return (f.phi(u - 2 * du, v - 2 * dv) - 8 * f.phi(u - du, v - dv) + 8 * f.phi(u + du, v + dv) -
                f.phi(u + 2 * du, v + 2 * dv)) /
               (12.0 * (du + dv));
    };
    j.pu = f.phi_u ? f.phi_u(u, v) : d(h, 0.0);
    j.pv = f.phi_v ? f.phi_v(u, v) : d(0.0, h);
    return j;
}

State rhs(const SineGordonField& f, double u, double v, const State& y, bool along_u) {
    const PhiJet j = phi_jet(f, u, v);
    const double s = std::sin(j.phi), c = std::cos(j.phi);
    if (!(s > 0.0)) throw Error(ErrorKind::integration, "sine-Gordon frame degenerates (sin phi <= 0)");
    const Eigen::Vector3d T1 = y.segment<3>(3), T2 = y.segment<3>(6), N = y.segment<3>(9);
    State dy;
    if (along_u) {
        dy.segment<3>(0) = T1;
        dy.segment<3>(3) = j.pu * (c / s) * T1 - (j.pu / s) * T2;
        dy.segment<3>(6) = s * N;
        dy.segment<3>(9) = (c * T1 - T2) / s;
    } else {
        dy.segment<3>(0) = T2;
        dy.segment<3>(3) = s * N;
        dy.segment<3>(6) = -(j.pv / s) * T1 + j.pv * (c / s) * T2;
        dy.segment<3>(9) = (-T1 + c * T2) / s;
    }
    return dy;
}

// RK4 along one coordinate line from (u, v) to the target value of the moving coordinate.
State leg(const SineGordonField& f, State y, double u, double v, double target, bool along_u, int steps) {
    const double start = along_u ? u : v;
    const double h = (target - start) / steps;
    auto at = [&](double t) { return along_u ? std::array<double, 2>{t, v} : std::array<double, 2>{u, t}; };
    for (int k = 0; k < steps; ++k) {
        const double t = start + k * h;
        auto p0 = at(t), p1 = at(t + 0.5 * h), p2 = at(t + h);
        const State k1 = rhs(f, p0[0], p0[1], y, along_u);
        const State k2 = rhs(f, p1[0], p1[1], y + 0.5 * h * k1, along_u);
        const State k3 = rhs(f, p1[0], p1[1], y + 0.5 * h * k2, along_u);
        const State k4 = rhs(f, p2[0], p2[1], y + h * k3, along_u);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

State initial_state(const SineGordonField& f, const Eigen::Vector2d& base) {
    const double phi = f.phi(base[0], base[1]);
    State y;
    y << 0, 0, 0, 1, 0, 0, std::cos(phi), std::sin(phi), 0, 0, 0, 1;
    return y;
}

SineGordonFrame unpack(const State& y) {
    return {y.segment<3>(0), y.segment<3>(3), y.segment<3>(6), y.segment<3>(9)};
}

}  // namespace

SineGordonField one_soliton() {
    SineGordonField f;
    f.phi = [](double u, double v) { return 4.0 * std::atan(std::exp(u + v)); };
    f.phi_u = [](double u, double v) { return 2.0 / std::cosh(u + v); };
    f.phi_v = f.phi_u;
    return f;
}

SineGordonFrame sine_gordon_frame(const SineGordonField& field, const Eigen::Vector2d& base, double u, double v,
                                  int steps) {
    State y = initial_state(field, base);
    y = leg(field, y, base[0], base[1], u, true, steps);
    y = leg(field, y, u, base[1], v, false, steps);
    return unpack(y);
}

SineGordonFrame sine_gordon_frame_v_first(const SineGordonField& field, const Eigen::Vector2d& base, double u,
                                          double v, int steps) {
    State y = initial_state(field, base);
    y = leg(field, y, base[0], base[1], v, false, steps);
    y = leg(field, y, base[0], v, u, true, steps);
    return unpack(y);
}

double sine_gordon_residual(const ScalarField& phi) {
    constexpr std::array<int, 4> off{-2, -1, 1, 2};
    constexpr std::array<double, 4> w{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
    const Grid& g = phi.grid;
    if (g.dimension() != 2) throw Error(ErrorKind::argument, "sine-Gordon field must be two-dimensional");
    const double hu = g.spacing(0), hv = g.spacing(1);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.multi_index(i);
        if (!g.interior(idx, 2)) continue;
        double mixed = 0.0;
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b)
                mixed += w[a] * w[b] * phi.at({idx[0] + off[a], idx[1] + off[b]});
        mixed /= hu * hv;
        worst = std::max(worst, std::abs(mixed - std::sin(phi.at(idx))));
    }
    return worst;
}

CatalogEntry sine_gordon_surface(const SineGordonField& field, const SineGordonOptions& options) {
    if (!field.phi) throw Error(ErrorKind::argument, "sine-Gordon field has no phi");
    if (options.patch.size() != 2) throw Error(ErrorKind::argument, "sine-Gordon patch must be two-dimensional");

    const Grid check = Grid::uniform(options.patch, options.check_resolution);
    const ScalarField samples =
        sample_scalar(check, [&](const Eigen::VectorXd& p) { return field.phi(p[0], p[1]); });
    for (double v : samples.values)
        if (!(v > 0.0 && v < std::numbers::pi))
            throw Error(ErrorKind::argument, "phi leaves (0, pi) on the patch: not an immersion");
    const double residual = sine_gordon_residual(samples);
    if (residual > options.residual_tolerance)
        throw Error(ErrorKind::argument, "phi does not solve phi_uv = sin phi (residual " + std::to_string(residual) + ")");

    const Eigen::Vector2d base(0.5 * (options.patch[0].lo + options.patch[0].hi),
                               0.5 * (options.patch[1].lo + options.patch[1].hi));
    const int steps = options.steps;

    // Path independence at the patch corners certifies the frame system is integrable.
    double monodromy = 0.0;
    for (double u : {options.patch[0].lo, options.patch[0].hi})
        for (double v : {options.patch[1].lo, options.patch[1].hi}) {
            const auto a = sine_gordon_frame(field, base, u, v, steps);
            const auto b = sine_gordon_frame_v_first(field, base, u, v, steps);
            monodromy = std::max({monodromy, (a.position - b.position).norm(), (a.tu - b.tu).norm(),
                                  (a.tv - b.tv).norm(), (a.normal - b.normal).norm()});
        }
    if (monodromy > options.monodromy_tolerance)
        throw Error(ErrorKind::integration, "frame monodromy " + std::to_string(monodromy) + " exceeds tolerance");

    CatalogEntry e;
    e.name = "sine_gordon";
    e.description = "K = -1 surface in asymptotic Chebyshev coordinates from a sine-Gordon solution";
    e.chart.name = e.name;
    e.chart.n = 2;
    e.chart.ambient = AmbientModel::euclidean(3);
    e.chart.intrinsic_curvature = -1.0;
    e.chart.domain = options.patch;
    e.chart.differentiation.engine = Engine::fd;
    e.chart.map = ChartMap::black_box([field, base, steps](const std::vector<double>& u) {
        const auto fr = sine_gordon_frame(field, base, u[0], u[1], steps);
        return std::vector<double>{fr.position[0], fr.position[1], fr.position[2]};
    });
    e.anchor = Eigen::VectorXd(base);
    e.diagnostics = {{"phi_residual", residual}, {"monodromy", monodromy}};
    return e;
}

CatalogEntry sine_gordon_soliton_entry() {
    CatalogEntry e = sine_gordon_surface(one_soliton());
    e.name = "sine_gordon_soliton";
    e.chart.name = e.name;
    return e;
}

}  // namespace flatnormal
