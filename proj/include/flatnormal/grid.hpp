#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace flatnormal {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double span() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double x, double slack = 0.0) const noexcept {
        return x >= lo - slack && x <= hi + slack;
    }
};

using Box = std::vector<Interval>;

bool box_contains(const Box& box, const Eigen::VectorXd& u, double relative_slack = 1e-12);

/// Rectangular grid with `count[k]` nodes per axis spanning `axes[k]`
/// inclusive of both end points. Linear indices run fastest along axis 0.
class Grid {
public:
    Grid() = default;
    Grid(Box axes, std::vector<int> counts);

    /// Same resolution on every axis.
    static Grid uniform(const Box& axes, int count);

    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(axes_.size()); }
    [[nodiscard]] const Box& axes() const noexcept { return axes_; }
    [[nodiscard]] const std::vector<int>& counts() const noexcept { return counts_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] double spacing(int axis) const;

    [[nodiscard]] std::vector<int> multi_index(std::size_t linear) const;
    [[nodiscard]] std::size_t linear_index(const std::vector<int>& idx) const;
    [[nodiscard]] Eigen::VectorXd point(std::size_t linear) const;
    [[nodiscard]] Eigen::VectorXd point(const std::vector<int>& idx) const;

    /// Node nearest to u (clamped to the grid).
    [[nodiscard]] std::vector<int> nearest(const Eigen::VectorXd& u) const;

    /// True when every axis index has at least `margin` nodes on both sides.
    [[nodiscard]] bool interior(const std::vector<int>& idx, int margin) const;
    [[nodiscard]] bool on_boundary(const std::vector<int>& idx) const { return !interior(idx, 1); }

    /// Neighbour at idx + offset, or false when it leaves the grid.
    [[nodiscard]] bool shifted(const std::vector<int>& idx, int axis, int offset, std::vector<int>& out) const;

    /// Grid with (count-1)*factor+1 nodes per axis over the same box; the
    /// original nodes are every `factor`-th node of the refinement.
    [[nodiscard]] Grid refined(int factor) const;

private:
    Box axes_;
    std::vector<int> counts_;
    std::size_t size_ = 0;
};

}  // namespace flatnormal
