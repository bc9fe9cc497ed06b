#pragma once

#include "flatnormal/chart.hpp"
#include "flatnormal/curvature.hpp"
#include "flatnormal/grid.hpp"
#include "flatnormal/principal.hpp"

#include <Eigen/Dense>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace flatnormal {

enum class Verdict { pass, fail, indeterminate, skipped };

const char* to_string(Verdict v);

struct ResidualSample {
    Eigen::VectorXd u;
    double residual = 0.0;
};

struct ResidualReport {
    std::string identity;
    double tolerance = 0.0;
    int points = 0;
    int excluded = 0;  // nodes dropped (non-simple, incoherent frame, hypothesis)
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double q90 = 0.0;
    double q99 = 0.0;
    Verdict verdict = Verdict::pass;
    std::string note;
    std::vector<ResidualSample> samples;

    [[nodiscard]] bool passed() const noexcept { return verdict == Verdict::pass; }
};

/// Aggregates samples. No samples gives `skipped` when `excluded` > 0,
/// otherwise a vacuous pass.
ResidualReport summarize(std::string identity, std::vector<ResidualSample> samples, double tolerance,
                         int excluded = 0, std::string note = {});

struct VerifierOptions {
    PrincipalOptions principal;
    /// Replaces C = c~ - c (used by negative controls).
    std::optional<double> C_override;
    double ambiguity = 1e-3;
    /// Gauss: also evaluate points with s < n on the expanded frame.
    bool include_non_simple = false;
    /// Evaluate only nodes whose indices are multiples of `stride`
    /// (nested-grid convergence studies).
    int stride = 1;
};

/// C from the override or from the asserted curvatures.
std::optional<double> effective_C(const ImmersionChart& chart, const VerifierOptions& options);

/// Uniform grid of `resolution` nodes per axis over the usable domain.
Grid verification_grid(const ImmersionChart& chart, int resolution);

/// max_{i != j} |<eta_i, eta_j> - (c - c~)| on the expanded frame
/// (one eta per direction, repeated by multiplicity).
double gauss_residual(const PrincipalDecomposition& d, double c, double c_ambient);

ResidualReport check_gauss(const ImmersionChart& chart, const Grid& grid, const VerifierOptions& options = {});

/// Principal frame and its first derivatives at one node, with neighbours
/// aligned to the centre frame.
struct PrincipalJet {
    Eigen::VectorXd u;
    PrincipalFrame frame;
    Eigen::MatrixXd g;
    Eigen::MatrixXd normal_frame;
    std::vector<Eigen::MatrixXd> d_etas;        // [k]: d_k of eta columns (container)
    std::vector<Eigen::MatrixXd> d_directions;  // [k]: d_k of X columns (chart)
    std::vector<Eigen::VectorXd> d_q;           // [k]: d_k of 1/lambda_i, empty without C
    Eigen::MatrixXd q;                          // 1/lambda_i (n x 1), empty without C
    std::vector<Eigen::MatrixXd> coordinate_christoffel;
};

/// Gamma_ij^k = <nabla_{X_i} X_j, X_k> in the principal frame.
struct ChristoffelSample {
    int n = 0;
    std::vector<double> values;

    [[nodiscard]] double operator()(int i, int j, int k) const {
        return values[static_cast<std::size_t>((i * n + j) * n + k)];
    }
};

/// Frame data on all grid nodes, computed once and shared by the stencil checks.
class PrincipalField {
public:
    PrincipalField(const ImmersionChart& chart, Grid grid, const VerifierOptions& options = {});

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const ImmersionChart& chart() const noexcept { return chart_; }
    [[nodiscard]] std::optional<double> C() const noexcept { return C_; }
    [[nodiscard]] const VerifierOptions& options() const noexcept { return options_; }

    /// Nodes checked by the stencil identities (two-node margin, stride applied).
    [[nodiscard]] std::vector<std::vector<int>> evaluation_nodes() const;

    /// Empty with `reason` set when the node or its stencil is unusable.
    [[nodiscard]] std::optional<PrincipalJet> jet(const std::vector<int>& idx, std::string* reason = nullptr) const;

private:
    struct Node {
        bool valid = false;
        std::string reason;
        Eigen::VectorXd u;
        Eigen::MatrixXd g;
        Eigen::MatrixXd normal_frame;
        std::vector<Eigen::MatrixXd> christoffel;
        PrincipalFrame frame;
    };

    ImmersionChart chart_;
    Grid grid_;
    VerifierOptions options_;
    std::optional<double> C_;
    std::vector<Node> nodes_;
};

/// nabla_{X_i} X_j as a chart vector.
Eigen::VectorXd covariant_derivative(const PrincipalJet& jet, int i, int j);

ChristoffelSample christoffel_sample(const PrincipalJet& jet);

ResidualReport check_codazzi_normal(const PrincipalField& field, double tolerance);
ResidualReport check_codazzi_triple(const PrincipalField& field, double tolerance);
ResidualReport check_connection_formula(const PrincipalField& field, double tolerance);

/// max |R0_ijkl| / (1 + ||g0||_F^2) on the interior of the grid.
ResidualReport check_g0_flat(const ImmersionChart& chart, const Grid& grid, double tolerance,
                             const VerifierOptions& options = {});

/// Sectional curvatures of the induced metric against the asserted c.
ResidualReport check_intrinsic_curvature(const ImmersionChart& chart, const Grid& grid, double tolerance);

struct ConvergenceStudy {
    std::vector<int> resolutions;
    std::vector<double> spacings;
    std::vector<double> max_residuals;
    double slope = 0.0;
};

enum class StencilIdentity { codazzi_normal, connection };

/// Nested grids N, 2N-1, 4N-3, ... evaluated on the nodes of the coarsest one.
/// Slope is the least-squares order of max residual against spacing.
ConvergenceStudy convergence_study(const ImmersionChart& chart, StencilIdentity identity, int base_resolution,
                                   int levels = 3, const VerifierOptions& options = {});

/// Columns u1..un,residual with 17 significant digits.
void write_residual_csv(std::ostream& out, const ResidualReport& report, int n);

}  // namespace flatnormal
