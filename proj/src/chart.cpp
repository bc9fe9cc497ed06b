#include "flatnormal/chart.hpp"

#include "flatnormal/error.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace flatnormal {

namespace {

// 4th-order central stencils on offsets -2,-1,+1,+2 (first) and -2..+2 (second).
constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
constexpr std::array<double, 4> kFirst{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr std::array<double, 4> kSecondOff{-1.0 / 12.0, 16.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
constexpr double kSecondCentre = -30.0 / 12.0;

std::string describe(const Eigen::VectorXd& u) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
    os << ")";
    return os.str();
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd raw_eval(const ImmersionChart& chart, const Eigen::VectorXd& u) {
    std::vector<double> in(u.data(), u.data() + u.size());
    return to_eigen(chart.map.value(in));
}

void check_output_size(const ImmersionChart& chart, Eigen::Index size) {
    if (size != chart.ambient.container_dimension()) {
        throw Error(ErrorKind::argument, "chart '" + chart.name + "' returned " + std::to_string(size) +
                                             " coordinates, container has " +
                                             std::to_string(chart.ambient.container_dimension()));
    }
}

ChartJet ad_jet(const ImmersionChart& chart, const Eigen::VectorXd& u, bool with_second) {
    const int n = chart.n;
    const int N = chart.ambient.container_dimension();
    ChartJet jet;
    jet.d1 = Eigen::MatrixXd::Zero(N, n);
    if (with_second) jet.d2.assign(static_cast<std::size_t>(n * n), Eigen::VectorXd::Zero(N));

    std::vector<HyperDual> in(static_cast<std::size_t>(n));
    auto run = [&](int i, int j) {
        for (int k = 0; k < n; ++k) in[static_cast<std::size_t>(k)] = HyperDual(u[k], k == i, k == j, 0.0);
        return chart.map.dual(in);
    };

    bool have_x = false;
    auto take_x = [&](const std::vector<HyperDual>& out) {
        if (have_x) return;
        check_output_size(chart, static_cast<Eigen::Index>(out.size()));
        jet.x.resize(N);
        for (int a = 0; a < N; ++a) jet.x[a] = out[static_cast<std::size_t>(a)].v;
        have_x = true;
    };

    if (with_second) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const auto out = run(i, j);
                take_x(out);
                for (int a = 0; a < N; ++a) {
                    const auto& o = out[static_cast<std::size_t>(a)];
                    jet.d1(a, i) = o.d1;
                    jet.d1(a, j) = o.d2;
                    jet.d2[static_cast<std::size_t>(i * n + j)][a] = o.d12;
                    jet.d2[static_cast<std::size_t>(j * n + i)][a] = o.d12;
                }
            }
        }
    } else {
        for (int i = 0; i < n; i += 2) {
            const int j = std::min(i + 1, n - 1);
            const auto out = run(i, j);
            take_x(out);
            for (int a = 0; a < N; ++a) {
                jet.d1(a, i) = out[static_cast<std::size_t>(a)].d1;
                jet.d1(a, j) = out[static_cast<std::size_t>(a)].d2;
            }
        }
    }
    return jet;
}

ChartJet fd_jet(const ImmersionChart& chart, const Eigen::VectorXd& u, bool with_second) {
    const int n = chart.n;
    const int N = chart.ambient.container_dimension();
    ChartJet jet;
    jet.x = raw_eval(chart, u);
    check_output_size(chart, jet.x.size());
    jet.d1 = Eigen::MatrixXd::Zero(N, n);
    if (with_second) jet.d2.assign(static_cast<std::size_t>(n * n), Eigen::VectorXd::Zero(N));

    std::vector<double> h(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) h[static_cast<std::size_t>(k)] = chart.fd_step(k);

    for (int i = 0; i < n; ++i) {
        const double hi = h[static_cast<std::size_t>(i)];
        Eigen::VectorXd first = Eigen::VectorXd::Zero(N);
        Eigen::VectorXd second = kSecondCentre * jet.x;
        for (std::size_t s = 0; s < kOffsets.size(); ++s) {
            Eigen::VectorXd p = u;
            p[i] += kOffsets[s] * hi;
            const Eigen::VectorXd f = raw_eval(chart, p);
            first += kFirst[s] * f;
            second += kSecondOff[s] * f;
        }
        jet.d1.col(i) = first / hi;
        if (with_second) jet.d2[static_cast<std::size_t>(i * n + i)] = second / (hi * hi);
    }
    if (!with_second) return jet;

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double hi = h[static_cast<std::size_t>(i)], hj = h[static_cast<std::size_t>(j)];
            Eigen::VectorXd mixed = Eigen::VectorXd::Zero(N);
            for (std::size_t a = 0; a < kOffsets.size(); ++a) {
                for (std::size_t b = 0; b < kOffsets.size(); ++b) {
                    Eigen::VectorXd p = u;
                    p[i] += kOffsets[a] * hi;
                    p[j] += kOffsets[b] * hj;
                    mixed += (kFirst[a] * kFirst[b]) * raw_eval(chart, p);
                }
            }
            mixed /= hi * hj;
            jet.d2[static_cast<std::size_t>(i * n + j)] = mixed;
            jet.d2[static_cast<std::size_t>(j * n + i)] = mixed;
        }
    }
    return jet;
}

}  // namespace

const char* to_string(Engine engine) noexcept { return engine == Engine::ad ? "ad" : "fd"; }

double ImmersionChart::C() const {
    if (!intrinsic_curvature)
        throw Error(ErrorKind::hypothesis, "chart '" + name + "' asserts no constant intrinsic curvature");
    return ambient.curvature - *intrinsic_curvature;
}

ImmersionChart ImmersionChart::with_engine(Engine e) const {
    ImmersionChart copy = *this;
    copy.differentiation.engine = (e == Engine::ad && !has_ad()) ? Engine::fd : e;
    return copy;
}

double ImmersionChart::fd_step(int axis) const {
    return differentiation.fd_step_scale * domain[static_cast<std::size_t>(axis)].span();
}

Box ImmersionChart::usable_domain() const {
    Box box = domain;
    if (differentiation.engine == Engine::fd) {
        for (int k = 0; k < n; ++k) {
            const double r = 2.0 * fd_step(k);
            box[static_cast<std::size_t>(k)].lo += r;
            box[static_cast<std::size_t>(k)].hi -= r;
        }
    }
    return box;
}

double ImmersionChart::default_tolerance() const noexcept {
    return differentiation.engine == Engine::ad ? 1e-8 : 1e-4;
}

void ImmersionChart::validate() const {
    if (n < 1) throw Error(ErrorKind::argument, "chart dimension must be positive");
    if (static_cast<int>(domain.size()) != n) throw Error(ErrorKind::argument, "chart domain has wrong dimension");
    for (const auto& iv : domain)
        if (!(iv.hi > iv.lo)) throw Error(ErrorKind::argument, "chart domain interval must have hi > lo");
    if (!map.value) throw Error(ErrorKind::argument, "chart has no map");
    if (n > ambient.dimension) throw Error(ErrorKind::argument, "chart dimension exceeds ambient dimension");
    ambient.validate();
    if (differentiation.engine == Engine::ad && !has_ad())
        throw Error(ErrorKind::argument, "chart '" + name + "' is black-box; AD engine unavailable");
}

Eigen::VectorXd evaluate_chart(const ImmersionChart& chart, const Eigen::VectorXd& u) {
    if (u.size() != chart.n || !box_contains(chart.domain, u))
        throw Error(ErrorKind::domain, "parameter " + describe(u) + " outside domain of '" + chart.name + "'");
    Eigen::VectorXd x = raw_eval(chart, u);
    check_output_size(chart, x.size());
    const double tol = 1e-8 * std::max(1.0, std::abs(chart.ambient.is_flat() ? 1.0 : 1.0 / chart.ambient.curvature));
    if (chart.ambient.constraint_defect(x) > tol)
        throw Error(ErrorKind::model_consistency,
                    "chart '" + chart.name + "' leaves the ambient model at " + describe(u));
    return x;
}

ChartJet chart_jet(const ImmersionChart& chart, const Eigen::VectorXd& u, bool with_second) {
    if (u.size() != chart.n || !box_contains(chart.usable_domain(), u))
        throw Error(ErrorKind::domain,
                    "differentiation stencil at " + describe(u) + " leaves the domain of '" + chart.name + "'");
    if (chart.differentiation.engine == Engine::ad && chart.has_ad()) return ad_jet(chart, u, with_second);
    return fd_jet(chart, u, with_second);
}

}  // namespace flatnormal
