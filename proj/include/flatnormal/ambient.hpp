#pragma once

#include <Eigen/Dense>
#include <string>

namespace flatnormal {

enum class AmbientKind { euclidean, sphere, hyperbolic };

const char* to_string(AmbientKind kind) noexcept;

/// Space-form model realized inside a flat container: R^m itself, the
/// sphere <x,x> = 1/c in R^{m+1}, or the upper hyperboloid sheet
/// <x,x> = 1/c (x_last > 0) in Lorentzian R^{m,1}.
struct AmbientModel {
    AmbientKind kind = AmbientKind::euclidean;
    double curvature = 0.0;
    int dimension = 3;  // m, intrinsic dimension of the space form

    static AmbientModel euclidean(int m);
    static AmbientModel sphere(int m, double curvature);
    static AmbientModel hyperbolic(int m, double curvature);

    [[nodiscard]] int container_dimension() const noexcept {
        return kind == AmbientKind::euclidean ? dimension : dimension + 1;
    }
    [[nodiscard]] bool is_flat() const noexcept { return kind == AmbientKind::euclidean; }

    /// Container inner product (one minus sign on the last axis for hyperbolic).
    [[nodiscard]] double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

    /// Diagonal of the container metric.
    [[nodiscard]] Eigen::VectorXd signature() const;

    /// |<x,x> - 1/c| for non-flat kinds, 0 for euclidean.
    [[nodiscard]] double constraint_defect(const Eigen::VectorXd& x) const;

    /// Throws Error(argument) when kind and curvature sign disagree.
    void validate() const;
};

}  // namespace flatnormal
