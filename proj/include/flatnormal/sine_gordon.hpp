#pragma once

#include "flatnormal/catalog.hpp"
#include "flatnormal/curvature.hpp"

#include <Eigen/Dense>
#include <functional>

namespace flatnormal {

/// Angle between the asymptotic lines of a K = -1 surface in Chebyshev
/// coordinates. Derivatives may be left empty; they are then taken by
/// 4th-order central differences of `phi`.
struct SineGordonField {
    std::function<double(double, double)> phi;
    std::function<double(double, double)> phi_u;
    std::function<double(double, double)> phi_v;
};

/// phi(u, v) = 4 arctan(exp(u + v)).
SineGordonField one_soliton();

/// Position and Gauss frame (F_u, F_v, N) of the asymptotic-coordinate surface.
struct SineGordonFrame {
    Eigen::Vector3d position;
    Eigen::Vector3d tu;
    Eigen::Vector3d tv;
    Eigen::Vector3d normal;
};

/// Integrates the Gauss-Weingarten system from `base` along u, then along v,
/// with `steps` classical RK4 steps per leg. The frame at `base` is
/// F_u = e1, F_v = (cos phi, sin phi, 0), N = e3.
SineGordonFrame sine_gordon_frame(const SineGordonField& field, const Eigen::Vector2d& base, double u, double v,
                                  int steps);

/// Same, integrating along v first and then along u.
SineGordonFrame sine_gordon_frame_v_first(const SineGordonField& field, const Eigen::Vector2d& base, double u,
                                          double v, int steps);

/// max |phi_uv - sin phi| over the interior of the samples (4th-order stencil).
double sine_gordon_residual(const ScalarField& phi);

struct SineGordonOptions {
    Box patch{{-1.2, -0.2}, {-1.2, -0.2}};
    int steps = 128;
    int check_resolution = 65;
    double residual_tolerance = 1e-5;
    double monodromy_tolerance = 1e-8;
};

/// K = -1 chart (black box, finite differences) realising
/// I = du^2 + 2 cos phi du dv + dv^2 and II = 2 sin phi du dv.
/// The entry's diagnostics carry "phi_residual" and "monodromy".
CatalogEntry sine_gordon_surface(const SineGordonField& field, const SineGordonOptions& options = {});

CatalogEntry sine_gordon_soliton_entry();

}  // namespace flatnormal
