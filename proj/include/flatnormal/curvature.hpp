#pragma once

#include "flatnormal/grid.hpp"

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace flatnormal {

using MetricSampler = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using ScalarSampler = std::function<double(const Eigen::VectorXd&)>;

/// Symmetric bilinear forms sampled on a rectangular grid.
struct MetricField {
    Grid grid;
    std::vector<Eigen::MatrixXd> values;

    [[nodiscard]] const Eigen::MatrixXd& at(const std::vector<int>& idx) const {
        return values[grid.linear_index(idx)];
    }
};

/// Scalars sampled on a rectangular grid.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    [[nodiscard]] double at(const std::vector<int>& idx) const { return values[grid.linear_index(idx)]; }
};

MetricField sample_metric(const Grid& grid, const MetricSampler& sampler);
ScalarField sample_scalar(const Grid& grid, const ScalarSampler& sampler);

/// All components R_{ijkl} = <R(d_i, d_j) d_k, d_l>, so that the sectional
/// curvature of span(d_i, d_j) is R_{ijji} / (g_ii g_jj - g_ij^2).
class CurvatureTensor {
public:
    explicit CurvatureTensor(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

    [[nodiscard]] int dimension() const noexcept { return n_; }
    double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
    [[nodiscard]] double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }
    [[nodiscard]] double max_abs() const;

private:
    [[nodiscard]] std::size_t index(int i, int j, int k, int l) const {
        return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
    }
    int n_;
    std::vector<double> data_;
};

/// First derivatives of the metric from 4th-order central differences;
/// entry [a] = d_a g.
std::vector<Eigen::MatrixXd> metric_gradient(const MetricField& field, const std::vector<int>& idx);

/// Christoffel symbols Gamma^k_{ij} (entry [k](i, j)) and curvature tensor
/// from 4th-order differences of grid samples. Needs two nodes of margin.
std::vector<Eigen::MatrixXd> christoffel_from_metric(const MetricField& field, const std::vector<int>& idx);
CurvatureTensor riemann_curvature(const MetricField& field, const std::vector<int>& idx);

/// Curvature at an arbitrary point from a 5^n local stencil of spacing h.
CurvatureTensor riemann_curvature_at(const MetricSampler& sampler, const Eigen::VectorXd& u,
                                     const std::vector<double>& h);

double sectional_curvature(const CurvatureTensor& R, const Eigen::MatrixXd& g, int i, int j);

}  // namespace flatnormal
