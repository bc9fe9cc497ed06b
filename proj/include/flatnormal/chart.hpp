#pragma once

#include "flatnormal/ambient.hpp"
#include "flatnormal/grid.hpp"
#include "flatnormal/hyperdual.hpp"

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace flatnormal {

enum class Engine { ad, fd };

const char* to_string(Engine engine) noexcept;

/// How derivatives of a chart are obtained. The finite-difference step on
/// axis k is fd_step_scale * span(domain_k); stencils are 4th order and
/// reach two steps from the centre.
struct Differentiation {
    Engine engine = Engine::ad;
    double fd_step_scale = 1e-3;
};

template <class T>
using MapFn = std::function<std::vector<T>(const std::vector<T>&)>;

/// A chart map in container coordinates. `dual` is empty for black-box
/// charts, which are then differentiated by finite differences only.
struct ChartMap {
    MapFn<double> value;
    MapFn<HyperDual> dual;

    /// Instantiates a generic callable `f(const std::vector<T>&) -> std::vector<T>`
    /// for both double and HyperDual scalars.
    template <class F>
    static ChartMap closed_form(F f) {
        ChartMap m;
        m.value = [f](const std::vector<double>& u) { return f(u); };
        m.dual = [f](const std::vector<HyperDual>& u) { return f(u); };
        return m;
    }

    static ChartMap black_box(MapFn<double> f) {
        ChartMap m;
        m.value = std::move(f);
        return m;
    }
};

struct ImmersionChart {
    std::string name;
    int n = 2;
    AmbientModel ambient;
    /// Asserted constant intrinsic curvature c; empty for charts that are
    /// not of constant curvature (controls).
    std::optional<double> intrinsic_curvature;
    Box domain;
    ChartMap map;
    Differentiation differentiation;

    [[nodiscard]] bool has_ad() const noexcept { return static_cast<bool>(map.dual); }
    [[nodiscard]] Engine engine() const noexcept { return differentiation.engine; }

    /// C = c~ - c. Throws Error(hypothesis) when c is not asserted.
    [[nodiscard]] double C() const;

    /// Copy with a different engine; AD on a black-box chart falls back to FD.
    [[nodiscard]] ImmersionChart with_engine(Engine engine) const;

    [[nodiscard]] double fd_step(int axis) const;

    /// Declared domain shrunk by the differentiation stencil radius.
    [[nodiscard]] Box usable_domain() const;

    /// Default residual tolerance of the active engine (1e-8 AD, 1e-4 FD).
    [[nodiscard]] double default_tolerance() const noexcept;

    /// Structural checks (dimension agreement, domain, map present).
    void validate() const;
};

/// map(u) with the domain and ambient-model checks.
Eigen::VectorXd evaluate_chart(const ImmersionChart& chart, const Eigen::VectorXd& u);

/// Container position with first and (optionally) second partial derivatives.
struct ChartJet {
    Eigen::VectorXd x;
    Eigen::MatrixXd d1;               // N x n, column i = dF/du_i
    std::vector<Eigen::VectorXd> d2;  // n*n, entry i*n+j = d2F/du_i du_j
};

ChartJet chart_jet(const ImmersionChart& chart, const Eigen::VectorXd& u, bool with_second = true);

}  // namespace flatnormal
