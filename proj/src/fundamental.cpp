#include "flatnormal/fundamental.hpp"

#include "flatnormal/error.hpp"

#include <algorithm>
#include <cmath>

namespace flatnormal {

namespace {

Eigen::MatrixXd gram(const AmbientModel& ambient, const Eigen::MatrixXd& tangents) {
    const Eigen::VectorXd sig = ambient.signature();
    const auto n = tangents.cols();
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = (tangents.col(i).array() * sig.array() * tangents.col(j).array()).sum();
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Eigen::LLT<Eigen::MatrixXd> checked_cholesky(const Eigen::MatrixXd& g, const ImmersionChart& chart) {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    const Eigen::VectorXd pivots = llt.matrixLLT().diagonal();
    const double scale = std::sqrt(std::max(g.diagonal().maxCoeff(), 0.0));
    if (llt.info() != Eigen::Success || !(pivots.minCoeff() > 1e-7 * scale))
        throw Error(ErrorKind::degeneracy, "first fundamental form of '" + chart.name + "' is not positive definite");
    return llt;
}

// Deterministic Gram-Schmidt of e_0, e_1, ... projected to the normal space.
Eigen::MatrixXd build_normal_frame(const AmbientModel& ambient, const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& tangents, const Eigen::MatrixXd& g_inverse, int p) {
    const int N = ambient.container_dimension();
    const Eigen::VectorXd sig = ambient.signature();
    Eigen::MatrixXd frame(N, p);
    int found = 0;
    const double xx = ambient.is_flat() ? 0.0 : ambient.inner(x, x);

    auto project = [&](Eigen::VectorXd v) {
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd t = tangents.transpose() * (sig.asDiagonal() * v);
            v -= tangents * (g_inverse * t);
            if (!ambient.is_flat()) v -= (ambient.inner(v, x) / xx) * x;
            for (int b = 0; b < found; ++b) v -= ambient.inner(v, frame.col(b)) * frame.col(b);
        }
        return v;
    };

    for (int k = 0; k < N && found < p; ++k) {
        Eigen::VectorXd v = project(Eigen::VectorXd::Unit(N, k));
        const double nn = ambient.inner(v, v);
        if (nn > 1e-6) frame.col(found++) = v / std::sqrt(nn);
    }
    if (found < p) throw Error(ErrorKind::frame, "normal frame has rank " + std::to_string(found) + " < " + std::to_string(p));
    return frame;
}

}  // namespace

Eigen::VectorXd FundamentalData::alpha_at(int i, int j) const {
    Eigen::VectorXd v(p());
    for (int a = 0; a < p(); ++a) v[a] = alpha[static_cast<std::size_t>(a)](i, j);
    return v;
}

Eigen::VectorXd FundamentalData::alpha_of(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
    Eigen::VectorXd v(p());
    for (int a = 0; a < p(); ++a) v[a] = X.dot(alpha[static_cast<std::size_t>(a)] * Y);
    return v;
}

Eigen::MatrixXd FundamentalData::orthonormal_basis() const {
    const Eigen::MatrixXd Linv = g_cholesky.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n(), n()));
    return Linv.transpose();
}

std::vector<Eigen::MatrixXd> FundamentalData::shape_operators() const {
    const Eigen::MatrixXd B = orthonormal_basis();
    std::vector<Eigen::MatrixXd> H;
    H.reserve(alpha.size());
    for (const auto& h : alpha) {
        Eigen::MatrixXd m = B.transpose() * h * B;
        H.emplace_back(0.5 * (m + m.transpose()));
    }
    return H;
}

std::vector<Eigen::MatrixXd> FundamentalData::christoffel() const {
    const int dim = n();
    const auto N = tangents.rows();
    std::vector<Eigen::MatrixXd> gamma(static_cast<std::size_t>(dim), Eigen::MatrixXd::Zero(dim, dim));
    Eigen::VectorXd sig = Eigen::VectorXd::Ones(N);
    if (lorentzian) sig[N - 1] = -1.0;
    for (int k = 0; k < dim; ++k) {
        for (int m = k; m < dim; ++m) {
            const Eigen::VectorXd& Fkm = hessian[static_cast<std::size_t>(k * dim + m)];
            const Eigen::VectorXd lowered = tangents.transpose() * (sig.asDiagonal() * Fkm);
            const Eigen::VectorXd raised = g_inverse * lowered;
            for (int l = 0; l < dim; ++l) {
                gamma[static_cast<std::size_t>(l)](k, m) = raised[l];
                gamma[static_cast<std::size_t>(l)](m, k) = raised[l];
            }
        }
    }
    return gamma;
}

Eigen::VectorXd FundamentalData::normal_vector(const Eigen::VectorXd& comps) const { return normal_frame * comps; }

Eigen::MatrixXd first_fundamental_form(const ImmersionChart& chart, const Eigen::VectorXd& u) {
    const ChartJet jet = chart_jet(chart, u, false);
    Eigen::MatrixXd g = gram(chart.ambient, jet.d1);
    checked_cholesky(g, chart);
    return g;
}

FundamentalData second_fundamental_form(const ImmersionChart& chart, const Eigen::VectorXd& u) {
    const ChartJet jet = chart_jet(chart, u, true);
    FundamentalData fd;
    fd.u = u;
    fd.position = jet.x;
    fd.tangents = jet.d1;
    fd.hessian = jet.d2;
    fd.lorentzian = chart.ambient.kind == AmbientKind::hyperbolic;
    fd.g = gram(chart.ambient, jet.d1);
    const auto llt = checked_cholesky(fd.g, chart);
    fd.g_cholesky = llt.matrixL();
    fd.g_inverse = llt.solve(Eigen::MatrixXd::Identity(chart.n, chart.n));

    const int p = chart.ambient.container_dimension() - chart.n - (chart.ambient.is_flat() ? 0 : 1);
    if (p < 0) throw Error(ErrorKind::argument, "chart dimension exceeds ambient dimension");
    fd.normal_frame = build_normal_frame(chart.ambient, jet.x, jet.d1, fd.g_inverse, p);

    fd.alpha.assign(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(chart.n, chart.n));
    for (int a = 0; a < p; ++a) {
        for (int i = 0; i < chart.n; ++i) {
            for (int j = i; j < chart.n; ++j) {
                const double v = chart.ambient.inner(jet.d2[static_cast<std::size_t>(i * chart.n + j)], fd.normal_frame.col(a));
                fd.alpha[static_cast<std::size_t>(a)](i, j) = v;
                fd.alpha[static_cast<std::size_t>(a)](j, i) = v;
            }
        }
    }
    fd.sff_norm_sq = 0.0;
    for (const auto& H : fd.shape_operators()) fd.sff_norm_sq += H.squaredNorm();
    return fd;
}

NormalFlatness normal_bundle_is_flat(const FundamentalData& fd, double tolerance) {
    NormalFlatness out;
    const auto H = fd.shape_operators();
    for (std::size_t a = 0; a < H.size(); ++a)
        for (std::size_t b = a + 1; b < H.size(); ++b)
            out.residual = std::max(out.residual, (H[a] * H[b] - H[b] * H[a]).norm());
    out.flat = out.residual <= tolerance;
    return out;
}

double sff_norm_sq_in_basis(const FundamentalData& fd, const Eigen::MatrixXd& basis) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < basis.cols(); ++i)
        for (Eigen::Index j = 0; j < basis.cols(); ++j) s += fd.alpha_of(basis.col(i), basis.col(j)).squaredNorm();
    return s;
}

}  // namespace flatnormal
