#pragma once

#include "flatnormal/chart.hpp"
#include "flatnormal/curvature.hpp"
#include "flatnormal/grid.hpp"
#include "flatnormal/verifiers.hpp"

#include <Eigen/Dense>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace flatnormal {

/// Worst-case relative metrication error of the 16-neighbour graph distance
/// on smooth metrics.
inline constexpr double graph16_stencil_error = 0.028;

struct CurveLength {
    double length = 0.0;
    double max_sff = 0.0;  // max |alpha|^2 over quadrature nodes and vertices
};

/// Composite midpoint rule with `subdivisions` pieces per polyline segment.
CurveLength curve_length(const MetricSampler& metric, const std::vector<Eigen::VectorXd>& polyline,
                         const ScalarSampler& sff = {}, int subdivisions = 16, const Box* domain = nullptr);

/// Grid whose nodes include x0 exactly, spacing span / (resolution - 1).
Grid anchored_grid(const Box& box, const Eigen::VectorXd& x0, int resolution);

/// Metric sampled on the half-lattice of `coarse`, so that every edge of
/// the 16-neighbour graph has its midpoint available.
struct LatticeMetric {
    Grid coarse;
    Grid fine;
    std::vector<Eigen::MatrixXd> values;  // on fine

    [[nodiscard]] const Eigen::MatrixXd& node(const std::vector<int>& idx) const;
    [[nodiscard]] const Eigen::MatrixXd& midpoint(const std::vector<int>& idx, const std::vector<int>& offset) const;
};

LatticeMetric sample_lattice_metric(const Grid& coarse, const MetricSampler& sampler);

enum class DistanceMethod { graph16, fast_marching };

const char* to_string(DistanceMethod m);

struct DistanceField {
    Grid grid;
    std::vector<int> anchor;
    DistanceMethod method = DistanceMethod::graph16;
    std::vector<double> values;
    std::vector<long> predecessor;  // graph16 only; -1 at the anchor and unreached nodes

    [[nodiscard]] double at(const std::vector<int>& idx) const { return values[grid.linear_index(idx)]; }
    /// Discrete geodesic from the anchor (graph16).
    [[nodiscard]] std::vector<std::size_t> path_to(std::size_t linear) const;
};

/// Primitive lattice offsets with entries in [-2, 2]: 16 in two dimensions.
std::vector<std::vector<int>> graph_offsets(int n);

/// graph16: Dijkstra on the grid graph, edge weight = midpoint-metric length
/// of the straight parameter segment. fast_marching (n = 2): the same
/// stencil with semi-Lagrangian updates across angularly adjacent neighbours.
DistanceField distance_field(const LatticeMetric& metric, const std::vector<int>& anchor,
                             DistanceMethod method = DistanceMethod::graph16);

DistanceField distance_field(const MetricSampler& metric, const Eigen::VectorXd& x0, const Grid& grid,
                             DistanceMethod method = DistanceMethod::graph16);

/// max |alpha|^2 over nodes with d <= r. Throws for r < 0.
double ball_max_sff(const DistanceField& distance, const std::vector<double>& sff, double r);

struct BallVolume {
    double volume = 0.0;
    bool truncated = false;  // the ball reaches the grid boundary: lower bound only
};

/// Riemann sum of sqrt(det g) over nodes with d <= r.
BallVolume ball_volume(const LatticeMetric& metric, const DistanceField& distance, double r);

/// omega_n = pi^(n/2) / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Volume of a geodesic r-ball in the n-dimensional space form of curvature c.
double space_form_ball_volume(int n, double c, double r);

struct ExponentialFit {
    double k = 0.0;
    double ell = 0.0;
    double r_squared = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    int rows = 0;
};

/// Least squares of log(value) against r for rows with r in [r_lo, r_hi].
ExponentialFit fit_exponential(const std::vector<double>& r, const std::vector<double>& value, double r_lo,
                               double r_hi);

/// Window that skips the smallest 20% of radii.
std::pair<double, double> default_fit_window(const std::vector<double>& radii);

struct ChainCheck {
    Verdict verdict = Verdict::skipped;
    double margin = 0.0;  // relative: (rhs - lhs) / rhs, worst case
};

/// PASS when margin > error, FAIL when margin < -error, INDETERMINATE otherwise.
Verdict margin_verdict(double margin, double error);

struct GrowthRow {
    double r = 0.0;
    double S = 0.0;
    double psi = 0.0;
    double vol = 0.0;
    double bound = 0.0;
    double ref_vol = 0.0;
    bool truncated = false;
    double stencil_error = 0.0;  // relative; margins must exceed it for a verdict
    ChainCheck length;        // L_g0 <= sqrt(S_hat + C) L_g along discrete geodesics
    ChainCheck distance;      // d_g0 <= sqrt(S_hat + C) d_g
    ChainCheck balls;         // D_r^g inside the g0 ball of radius psi(r)
    ChainCheck volume_bound;  // Vol_g(D_r) <= r^n (1 + S/C)^(n/2) omega_n
};

struct GrowthOptions {
    std::vector<double> radii{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    std::optional<std::pair<double, double>> window;
    int resolution = 257;
    bool exploratory = false;
    std::optional<double> C_override;
    /// Distances for balls, volumes and the chain; graph16 paths always
    /// provide the discrete geodesics.
    DistanceMethod method = DistanceMethod::fast_marching;
    /// Fixed relative stencil error. When empty it is measured per radius
    /// by comparing with the every-other-node subgrid.
    std::optional<double> stencil_error;
};

struct GrowthReport {
    std::string chart;
    Eigen::VectorXd anchor;
    std::optional<double> C;
    DistanceMethod method = DistanceMethod::fast_marching;
    std::vector<GrowthRow> rows;
    std::optional<ExponentialFit> fit;  // sqrt(S) against r
    bool chain_enabled = false;
    std::string note;
    std::vector<std::string> warnings;
};

/// Full table, bound-chain verdicts and growth fit. The chain is refused
/// (with a note) unless C > 0 or exploratory mode is on.
GrowthReport growth_report(const ImmersionChart& chart, const Eigen::VectorXd& x0, const GrowthOptions& options = {});

/// Header r,S,psi,vol,bound,ref_vol; 17 significant digits.
void write_growth_csv(std::ostream& out, const GrowthReport& report);

}  // namespace flatnormal
