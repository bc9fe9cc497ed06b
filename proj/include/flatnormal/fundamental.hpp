#pragma once

#include "flatnormal/chart.hpp"

#include <Eigen/Dense>
#include <vector>

namespace flatnormal {

/// Pointwise extrinsic data of a chart. The second fundamental form is
/// stored per normal-frame vector: alpha[a](i, j) = <alpha(d_i, d_j), xi_a>.
struct FundamentalData {
    Eigen::VectorXd u;
    Eigen::VectorXd position;
    Eigen::MatrixXd tangents;                  // N x n, dF/du_i
    std::vector<Eigen::VectorXd> hessian;      // n*n container second derivatives
    Eigen::MatrixXd g;                         // n x n first fundamental form
    Eigen::MatrixXd g_inverse;
    Eigen::MatrixXd g_cholesky;                // lower L with g = L L^T
    Eigen::MatrixXd normal_frame;              // N x p, orthonormal normals
    std::vector<Eigen::MatrixXd> alpha;        // p matrices, n x n symmetric
    double sff_norm_sq = 0.0;
    bool lorentzian = false;                   // container carries the hyperbolic signature

    [[nodiscard]] int n() const noexcept { return static_cast<int>(g.rows()); }
    [[nodiscard]] int p() const noexcept { return static_cast<int>(normal_frame.cols()); }

    /// alpha(d_i, d_j) in normal-frame components.
    [[nodiscard]] Eigen::VectorXd alpha_at(int i, int j) const;

    /// alpha(X, Y) for chart-coordinate tangent vectors.
    [[nodiscard]] Eigen::VectorXd alpha_of(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;

    /// Columns of L^{-T}: a g-orthonormal tangent basis in chart coordinates.
    [[nodiscard]] Eigen::MatrixXd orthonormal_basis() const;

    /// Shape operators written in the orthonormal basis above (symmetric).
    [[nodiscard]] std::vector<Eigen::MatrixXd> shape_operators() const;

    /// Coordinate Christoffel symbols Gamma^l_{km}; entry [l](k, m).
    [[nodiscard]] std::vector<Eigen::MatrixXd> christoffel() const;

    /// Container vector sum_a comps[a] xi_a.
    [[nodiscard]] Eigen::VectorXd normal_vector(const Eigen::VectorXd& comps) const;
};

Eigen::MatrixXd first_fundamental_form(const ImmersionChart& chart, const Eigen::VectorXd& u);

/// Full pointwise data. Tangential and (non-flat ambient) radial parts of
/// the container second derivatives are removed by projecting on a normal
/// frame built by Gram-Schmidt over the container standard basis.
FundamentalData second_fundamental_form(const ImmersionChart& chart, const Eigen::VectorXd& u);

struct NormalFlatness {
    bool flat = true;
    double residual = 0.0;  // max_{a<b} ||A_a A_b - A_b A_a||_F
};

NormalFlatness normal_bundle_is_flat(const FundamentalData& fd, double tolerance);

/// Sum over an arbitrary g-orthonormal basis of ||alpha(X_i, X_j)||^2.
double sff_norm_sq_in_basis(const FundamentalData& fd, const Eigen::MatrixXd& orthonormal_basis);

}  // namespace flatnormal
