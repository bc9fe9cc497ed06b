#include "flatnormal/grid.hpp"

#include "flatnormal/error.hpp"

#include <algorithm>
#include <cmath>

namespace flatnormal {

bool box_contains(const Box& box, const Eigen::VectorXd& u, double relative_slack) {
    if (static_cast<Eigen::Index>(box.size()) != u.size()) return false;
    for (std::size_t k = 0; k < box.size(); ++k) {
        const double slack = relative_slack * std::max(1.0, std::abs(box[k].span()));
        if (!box[k].contains(u[static_cast<Eigen::Index>(k)], slack)) return false;
    }
    return true;
}

Grid::Grid(Box axes, std::vector<int> counts) : axes_(std::move(axes)), counts_(std::move(counts)) {
    if (axes_.size() != counts_.size() || axes_.empty())
        throw Error(ErrorKind::argument, "grid axes and counts must match and be non-empty");
    size_ = 1;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        if (counts_[k] < 1) throw Error(ErrorKind::argument, "grid needs at least one node per axis");
        if (counts_[k] > 1 && !(axes_[k].hi > axes_[k].lo))
            throw Error(ErrorKind::argument, "grid axis must have hi > lo");
        size_ *= static_cast<std::size_t>(counts_[k]);
    }
}

Grid Grid::uniform(const Box& axes, int count) {
    return Grid(axes, std::vector<int>(axes.size(), count));
}

double Grid::spacing(int axis) const {
    const auto k = static_cast<std::size_t>(axis);
    if (counts_[k] < 2) return 0.0;
    return axes_[k].span() / (counts_[k] - 1);
}

std::vector<int> Grid::multi_index(std::size_t linear) const {
    std::vector<int> idx(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        idx[k] = static_cast<int>(linear % static_cast<std::size_t>(counts_[k]));
        linear /= static_cast<std::size_t>(counts_[k]);
    }
    return idx;
}

std::size_t Grid::linear_index(const std::vector<int>& idx) const {
    std::size_t linear = 0;
    for (std::size_t k = axes_.size(); k-- > 0;)
        linear = linear * static_cast<std::size_t>(counts_[k]) + static_cast<std::size_t>(idx[k]);
    return linear;
}

Eigen::VectorXd Grid::point(std::size_t linear) const { return point(multi_index(linear)); }

Eigen::VectorXd Grid::point(const std::vector<int>& idx) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(axes_.size()));
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        if (counts_[k] < 2) {
            u[i] = axes_[k].lo;
        } else if (idx[k] == counts_[k] - 1) {
            u[i] = axes_[k].hi;  // exact end point
        } else {
            u[i] = axes_[k].lo + idx[k] * spacing(static_cast<int>(k));
        }
    }
    return u;
}

std::vector<int> Grid::nearest(const Eigen::VectorXd& u) const {
    std::vector<int> idx(axes_.size(), 0);
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        if (counts_[k] < 2) continue;
        const double h = spacing(static_cast<int>(k));
        const long i = std::lround((u[static_cast<Eigen::Index>(k)] - axes_[k].lo) / h);
        idx[k] = static_cast<int>(std::clamp<long>(i, 0, counts_[k] - 1));
    }
    return idx;
}

bool Grid::interior(const std::vector<int>& idx, int margin) const {
    for (std::size_t k = 0; k < axes_.size(); ++k)
        if (idx[k] < margin || idx[k] > counts_[k] - 1 - margin) return false;
    return true;
}

bool Grid::shifted(const std::vector<int>& idx, int axis, int offset, std::vector<int>& out) const {
    out = idx;
    const auto k = static_cast<std::size_t>(axis);
    out[k] += offset;
    return out[k] >= 0 && out[k] < counts_[k];
}

Grid Grid::refined(int factor) const {
    std::vector<int> counts(counts_.size());
    for (std::size_t k = 0; k < counts_.size(); ++k) counts[k] = (counts_[k] - 1) * factor + 1;
    return Grid(axes_, counts);
}

}  // namespace flatnormal
