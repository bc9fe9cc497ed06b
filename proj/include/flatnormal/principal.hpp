#pragma once

#include "flatnormal/fundamental.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace flatnormal {

struct PrincipalOptions {
    /// Directions whose curvature normals agree within
    /// cluster_threshold * max(||alpha||, 1) share one principal normal.
    double cluster_threshold = 1e-6;
    /// Seed of the generic weight vector used to combine shape operators.
    std::uint64_t seed = 20240601;
    /// Allow lambda_i with C <= 0 (only ||eta_i||^2 + C > 0 is then required).
    bool exploratory = false;
};

struct PrincipalDecomposition {
    std::vector<Eigen::VectorXd> etas;        // normal-frame components
    std::vector<Eigen::MatrixXd> directions;  // per eta: n x m_i g-orthonormal chart vectors
    std::vector<int> multiplicities;
    std::vector<double> lambdas;              // empty when C was not supplied
    int s = 0;
    bool joint_fallback = false;              // Jacobi joint diagonalisation was needed

    [[nodiscard]] bool all_simple() const;
};

/// Simultaneous diagonalisation of the (commuting) shape operators.
/// Ordered by ||eta|| descending, ties by the first nonzero component of X.
PrincipalDecomposition principal_decomposition(const FundamentalData& fd, std::optional<double> C,
                                               const PrincipalOptions& options = {});

/// Jacobi-type joint diagonalisation of symmetric matrices; returns the
/// orthogonal Q with Q^T M_k Q as diagonal as possible.
Eigen::MatrixXd joint_diagonalize(const std::vector<Eigen::MatrixXd>& matrices, double tolerance = 1e-14,
                                  int max_sweeps = 100);

/// III(d_i, d_j) = sum_a (h_a g^{-1} h_a)_{ij}.
Eigen::MatrixXd third_fundamental_form(const FundamentalData& fd);

struct ComparisonMetric {
    Eigen::MatrixXd g0;
    double C = 0.0;
    bool positive_definite = true;
};

/// g0 = C g + III. Requires C > 0 unless `exploratory`.
ComparisonMetric comparison_metric(const FundamentalData& fd, const Eigen::MatrixXd& III, double C,
                                   bool exploratory = false);

/// Principal frame at a point where every principal normal is simple
/// (s = n). Column i of `directions` is X_i in chart coordinates, column i
/// of `etas` is eta_i as a container vector.
struct PrincipalFrame {
    Eigen::MatrixXd directions;
    Eigen::MatrixXd etas;
    Eigen::MatrixXd eta_components;  // p x n normal-frame components
    Eigen::VectorXd eta_norm_sq;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(directions.cols()); }
    [[nodiscard]] Eigen::VectorXd lambdas(double C) const;
};

/// Flattens a decomposition with s = n; throws Error(hypothesis) otherwise.
PrincipalFrame principal_frame(const FundamentalData& fd, const PrincipalDecomposition& d);

enum class AlignmentStatus { ok, ambiguous };

/// Reorders and re-signs `candidate` to match `reference` by maximal |g-inner
/// product|; ambiguous when the best two candidates are within `ambiguity`.
AlignmentStatus align_frame(const PrincipalFrame& reference, PrincipalFrame& candidate, const Eigen::MatrixXd& g,
                            double ambiguity = 1e-3);

}  // namespace flatnormal
