#include "flatnormal/curvature.hpp"

#include "flatnormal/error.hpp"

#include <array>
#include <cmath>

namespace flatnormal {

namespace {

constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
constexpr std::array<double, 4> kFirst{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr std::array<double, 4> kSecondOff{-1.0 / 12.0, 16.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
constexpr double kSecondCentre = -30.0 / 12.0;

std::vector<int> shift(std::vector<int> idx, int axis, int by) {
    idx[static_cast<std::size_t>(axis)] += by;
    return idx;
}

void require_margin(const MetricField& field, const std::vector<int>& idx) {
    if (!field.grid.interior(idx, 2)) throw Error(ErrorKind::domain, "curvature stencil leaves the metric grid");
}

std::vector<std::vector<Eigen::MatrixXd>> metric_hessian(const MetricField& field, const std::vector<int>& idx) {
    const int n = field.grid.dimension();
    const Eigen::MatrixXd& g = field.at(idx);
    std::vector<std::vector<Eigen::MatrixXd>> d2(static_cast<std::size_t>(n),
                                                 std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
        const double ha = field.grid.spacing(a);
        Eigen::MatrixXd acc = kSecondCentre * g;
        for (std::size_t s = 0; s < kOffsets.size(); ++s) acc += kSecondOff[s] * field.at(shift(idx, a, kOffsets[s]));
        d2[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = acc / (ha * ha);
        for (int b = a + 1; b < n; ++b) {
            const double hb = field.grid.spacing(b);
            Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(n, n);
            for (std::size_t s = 0; s < kOffsets.size(); ++s)
                for (std::size_t t = 0; t < kOffsets.size(); ++t)
                    mixed += (kFirst[s] * kFirst[t]) * field.at(shift(shift(idx, a, kOffsets[s]), b, kOffsets[t]));
            mixed /= ha * hb;
            d2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = mixed;
            d2[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = mixed;
        }
    }
    return d2;
}

}  // namespace

double CurvatureTensor::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

MetricField sample_metric(const Grid& grid, const MetricSampler& sampler) {
    MetricField f{grid, {}};
    f.values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f.values.push_back(sampler(grid.point(i)));
    return f;
}

ScalarField sample_scalar(const Grid& grid, const ScalarSampler& sampler) {
    ScalarField f{grid, {}};
    f.values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f.values.push_back(sampler(grid.point(i)));
    return f;
}

std::vector<Eigen::MatrixXd> metric_gradient(const MetricField& field, const std::vector<int>& idx) {
    require_margin(field, idx);
    const int n = field.grid.dimension();
    std::vector<Eigen::MatrixXd> d1(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t s = 0; s < kOffsets.size(); ++s) acc += kFirst[s] * field.at(shift(idx, a, kOffsets[s]));
        d1[static_cast<std::size_t>(a)] = acc / field.grid.spacing(a);
    }
    return d1;
}

std::vector<Eigen::MatrixXd> christoffel_from_metric(const MetricField& field, const std::vector<int>& idx) {
    const int n = field.grid.dimension();
    const auto dg = metric_gradient(field, idx);
    const Eigen::MatrixXd ginv = field.at(idx).inverse();
    // First kind: Gamma_{k,ij} = (d_i g_jk + d_j g_ik - d_k g_ij) / 2.
    std::vector<Eigen::MatrixXd> gamma(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd first(n);
            for (int k = 0; k < n; ++k)
                first[k] = 0.5 * (dg[static_cast<std::size_t>(i)](j, k) + dg[static_cast<std::size_t>(j)](i, k) -
                                  dg[static_cast<std::size_t>(k)](i, j));
            const Eigen::VectorXd second = ginv * first;
            for (int k = 0; k < n; ++k) gamma[static_cast<std::size_t>(k)](i, j) = second[k];
        }
    }
    return gamma;
}

CurvatureTensor riemann_curvature(const MetricField& field, const std::vector<int>& idx) {
    require_margin(field, idx);
    const int n = field.grid.dimension();
    const Eigen::MatrixXd& g = field.at(idx);
    const auto d2 = metric_hessian(field, idx);
    const auto G = christoffel_from_metric(field, idx);
    auto dd = [&](int a, int b, int r, int s) {
        return d2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)](r, s);
    };
    CurvatureTensor R(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = 0.5 * (dd(j, k, i, l) + dd(i, l, j, k) - dd(i, k, j, l) - dd(j, l, i, k));
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q)
                            v += g(p, q) * (G[static_cast<std::size_t>(p)](j, k) * G[static_cast<std::size_t>(q)](i, l) -
                                            G[static_cast<std::size_t>(p)](j, l) * G[static_cast<std::size_t>(q)](i, k));
                    R(i, j, k, l) = -v;
                }
    return R;
}

CurvatureTensor riemann_curvature_at(const MetricSampler& sampler, const Eigen::VectorXd& u,
                                     const std::vector<double>& h) {
    const auto n = static_cast<std::size_t>(u.size());
    Box box(n);
    for (std::size_t k = 0; k < n; ++k) box[k] = {u[static_cast<Eigen::Index>(k)] - 2.0 * h[k], u[static_cast<Eigen::Index>(k)] + 2.0 * h[k]};
    const MetricField field = sample_metric(Grid::uniform(box, 5), sampler);
    return riemann_curvature(field, std::vector<int>(n, 2));
}

double sectional_curvature(const CurvatureTensor& R, const Eigen::MatrixXd& g, int i, int j) {
    const double area = g(i, i) * g(j, j) - g(i, j) * g(i, j);
    return R(i, j, j, i) / area;
}

}  // namespace flatnormal
