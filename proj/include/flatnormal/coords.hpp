#pragma once

#include "flatnormal/chart.hpp"
#include "flatnormal/error.hpp"
#include "flatnormal/principal.hpp"
#include "flatnormal/verifiers.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace flatnormal {

/// A trajectory left the usable domain; `exit_time` is the last in-domain time.
class FlowExit : public Error {
public:
    FlowExit(int axis, double exit_time);

    [[nodiscard]] int axis() const noexcept { return axis_; }
    [[nodiscard]] double exit_time() const noexcept { return exit_time_; }

private:
    int axis_;
    double exit_time_;
};

/// Y_i = lambda_i X_i with the principal frame gauge carried by continuity.
class PrincipalFlowField {
public:
    PrincipalFlowField(ImmersionChart chart, double C, PrincipalOptions principal = {}, double ambiguity = 1e-3);

    [[nodiscard]] const ImmersionChart& chart() const noexcept { return chart_; }
    [[nodiscard]] double C() const noexcept { return C_; }

    /// Canonical frame at u, or the frame aligned to `reference` when given.
    [[nodiscard]] PrincipalFrame frame(const Eigen::VectorXd& u, const PrincipalFrame* reference = nullptr) const;

    /// Columns Y_i in chart coordinates.
    [[nodiscard]] Eigen::MatrixXd fields(const PrincipalFrame& frame) const;

private:
    ImmersionChart chart_;
    double C_;
    PrincipalOptions principal_;
    double ambiguity_;
};

struct FlowState {
    Eigen::VectorXd u;
    PrincipalFrame frame;
};

/// Classical RK4 for du/dt = Y_axis(u) over time t with ceil(|t|/step) steps.
/// Throws FlowExit when a stage leaves the usable domain.
FlowState integrate_flow(const PrincipalFlowField& field, const FlowState& start, int axis, double t, double step);

/// phi_n(...phi_1(start, t_1)..., t_n).
FlowState compose_flows(const PrincipalFlowField& field, const FlowState& start, const Eigen::VectorXd& t,
                        double step, const std::vector<int>& order = {});

/// Lie bracket [V_i, V_j] of chart vector fields (columns of `fields(u)`)
/// by 4th-order central differences with per-axis step h.
std::vector<Eigen::VectorXd> lie_brackets(const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& fields,
                                          const Eigen::VectorXd& u, const std::vector<double>& h);

/// max over pairs of the g-norm of [Y_i, Y_j] at u.
double commutator_residual(const PrincipalFlowField& field, const Eigen::VectorXd& u,
                           const PrincipalFrame* reference = nullptr);

struct FlowMap {
    Eigen::VectorXd x0;
    std::vector<double> half_widths;  // t-box [-a_i, a_i]
    std::vector<int> counts;          // odd, 1 on zero-width axes
    double step = 0.0;
    int order = 4;
    double C = 0.0;
    std::vector<Eigen::VectorXd> values;  // axis 0 fastest
    std::vector<PrincipalFrame> frames;
    std::vector<std::string> warnings;

    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(counts.size()); }
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double spacing(int axis) const;
    [[nodiscard]] std::vector<int> multi_index(std::size_t linear) const;
    [[nodiscard]] std::size_t linear_index(const std::vector<int>& idx) const;
    [[nodiscard]] Eigen::VectorXd t(std::size_t linear) const;
};

struct FlowOptions {
    double step = 0.005;
    std::vector<double> half_widths{0.5, 0.5};
    int points = 21;
    PrincipalOptions principal;
    std::optional<double> C_override;
    double ambiguity = 1e-3;
    double shrink = 0.9;
    int max_shrinks = 30;
};

/// Samples F on the t-grid. Domain exits shrink the offending axis to
/// shrink * |exit time| and retry, with a warning.
FlowMap build_flow_map(const ImmersionChart& chart, const Eigen::VectorXd& x0, const FlowOptions& options = {});

struct PullbackReports {
    ResidualReport orthonormality;
    ResidualReport alignment;
    ResidualReport g0_identity;
};

/// Scaled pushforwards sqrt(|eta_i|^2 + C) F_*(d/dt_i) at interior t-grid
/// points: orthonormal in g, equal to X_i up to sign, and F^* g0 = I.
PullbackReports verify_principal_frame_property(const FlowMap& map, const ImmersionChart& chart, double tolerance,
                                               const FlowOptions& options = {});

struct CoordsOptions {
    FlowOptions flow;
    double commutator_tolerance = 1e-4;
    double homomorphism_tolerance = 1e-6;
    double pullback_tolerance = 1e-3;
    double round_trip_tolerance = 1e-8;
    double distance_tolerance = 1e-3;
    int random_pairs = 100;
    std::uint64_t seed = 20240601;
};

struct CoordsReport {
    std::optional<FlowMap> flow;
    std::vector<ResidualReport> reports;
    std::vector<std::string> warnings;
    bool skipped = false;
    std::string note;
};

/// Builds F and runs every check: commutators, homomorphism,
/// round trip, composition order, pullback, injectivity and g0 distances.
/// Hypothesis violations give a skipped report instead of an exception.
CoordsReport principal_coordinates_report(const ImmersionChart& chart, const Eigen::VectorXd& x0,
                                          const CoordsOptions& options = {});

/// Columns t1..tn,u1..un with 17 significant digits.
void write_flow_csv(std::ostream& out, const FlowMap& map);

}  // namespace flatnormal
