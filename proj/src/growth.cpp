#include "flatnormal/growth.hpp"

#include "flatnormal/error.hpp"
#include "flatnormal/fundamental.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace flatnormal {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double metric_length(const Eigen::MatrixXd& g, const Eigen::VectorXd& d) {
    return std::sqrt(std::max(0.0, d.dot(g * d)));
}

Eigen::VectorXd offset_vector(const Grid& grid, const std::vector<int>& offset) {
    Eigen::VectorXd d(grid.dimension());
    for (int k = 0; k < grid.dimension(); ++k) d[k] = offset[static_cast<std::size_t>(k)] * grid.spacing(k);
    return d;
}

bool shift(const Grid& grid, const std::vector<int>& idx, const std::vector<int>& offset, std::vector<int>& out) {
    out.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        out[k] = idx[k] + offset[k];
        if (out[k] < 0 || out[k] >= grid.counts()[k]) return false;
    }
    return true;
}

using Entry = std::pair<double, std::size_t>;
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

void dijkstra(const LatticeMetric& metric, DistanceField& field, const std::vector<std::vector<int>>& offsets,
              std::vector<Eigen::VectorXd>& steps) {
    const Grid& grid = field.grid;
    std::vector<char> done(grid.size(), 0);
    MinHeap heap;
    const std::size_t start = grid.linear_index(field.anchor);
    field.values[start] = 0.0;
    heap.emplace(0.0, start);
    std::vector<int> nb;
    while (!heap.empty()) {
        const auto [d, x] = heap.top();
        heap.pop();
        if (done[x]) continue;
        done[x] = 1;
        const std::vector<int> idx = grid.multi_index(x);
        for (std::size_t o = 0; o < offsets.size(); ++o) {
            if (!shift(grid, idx, offsets[o], nb)) continue;
            const std::size_t y = grid.linear_index(nb);
            if (done[y]) continue;
            const double w = metric_length(metric.midpoint(idx, offsets[o]), steps[o]);
            if (d + w < field.values[y]) {
                field.values[y] = d + w;
                field.predecessor[y] = static_cast<long>(x);
                heap.emplace(d + w, y);
            }
        }
    }
}

/// min over lambda in [0, 1] of (1 - lambda) da + lambda db + |p - lambda q|_G.
double simplex_update(double da, double db, const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                      const Eigen::Matrix2d& G) {
    auto cost = [&](double lambda) {
        const Eigen::Vector2d v = p - lambda * q;
        return da + lambda * (db - da) + std::sqrt(std::max(0.0, v.dot(G * v)));
    };
    double best = std::min(cost(0.0), cost(1.0));
    const double A = q.dot(G * q);
    const double B = q.dot(G * p);
    const double C = p.dot(G * p);
    const double delta = db - da;
    if (A > 0.0 && delta * delta < A) {
        const double radicand = (C - B * B / A) / (1.0 - delta * delta / A);
        if (radicand >= 0.0) {
            const double mu = std::copysign(std::abs(delta) * std::sqrt(radicand), delta);
            const double lambda = (B - mu) / A;
            if (lambda > 0.0 && lambda < 1.0) best = std::min(best, cost(lambda));
        }
    }
    return best;
}

void fast_marching(const LatticeMetric& metric, DistanceField& field, const std::vector<std::vector<int>>& offsets,
                   std::vector<Eigen::VectorXd>& steps) {
    const Grid& grid = field.grid;
    const std::size_t m = offsets.size();
    std::vector<char> done(grid.size(), 0);
    MinHeap heap;
    const std::size_t start = grid.linear_index(field.anchor);
    field.values[start] = 0.0;
    heap.emplace(0.0, start);
    std::vector<int> nb;
    std::vector<int> a_idx;
    std::vector<int> b_idx;
    while (!heap.empty()) {
        const auto [d, x] = heap.top();
        heap.pop();
        if (done[x]) continue;
        done[x] = 1;
        const std::vector<int> idx = grid.multi_index(x);
        for (std::size_t o = 0; o < m; ++o) {
            if (!shift(grid, idx, offsets[o], nb)) continue;
            const std::size_t y = grid.linear_index(nb);
            if (done[y]) continue;
            // y sees x at offset -o.
            double best = d + metric_length(metric.midpoint(idx, offsets[o]), steps[o]);
            const Eigen::Matrix2d Gy = metric.node(nb);
            for (std::size_t k = 0; k < m; ++k) {
                const std::size_t k1 = (k + 1) % m;
                if (!shift(grid, nb, offsets[k], a_idx) || !shift(grid, nb, offsets[k1], b_idx)) continue;
                const std::size_t a = grid.linear_index(a_idx);
                const std::size_t b = grid.linear_index(b_idx);
                if (a != x && b != x) continue;
                if (!done[a] || !done[b]) continue;
                const Eigen::Matrix2d Gm =
                    0.5 * Gy + 0.25 * (metric.node(a_idx) + metric.node(b_idx));
                const Eigen::Vector2d p = -steps[k];
                const Eigen::Vector2d q = steps[k1] - steps[k];
                best = std::min(best, simplex_update(field.values[a], field.values[b], p, q, Gm));
            }
            if (best < field.values[y]) {
                field.values[y] = best;
                heap.emplace(best, y);
            }
        }
    }
}

}  // namespace

CurveLength curve_length(const MetricSampler& metric, const std::vector<Eigen::VectorXd>& polyline,
                         const ScalarSampler& sff, int subdivisions, const Box* domain) {
    if (subdivisions < 1) throw Error(ErrorKind::argument, "curve_length: subdivisions must be >= 1");
    CurveLength out;
    auto visit = [&](const Eigen::VectorXd& u, std::size_t segment) {
        if (domain && !box_contains(*domain, u))
            throw Error(ErrorKind::domain, fmt::format("curve_length: segment {} leaves the domain", segment));
        if (sff) out.max_sff = std::max(out.max_sff, sff(u));
    };
    for (std::size_t s = 0; s < polyline.size(); ++s) visit(polyline[s], s == 0 ? 0 : s - 1);
    for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
        const Eigen::VectorXd step = (polyline[s + 1] - polyline[s]) / subdivisions;
        for (int q = 0; q < subdivisions; ++q) {
            const Eigen::VectorXd mid = polyline[s] + (q + 0.5) * step;
            visit(mid, s);
            out.length += metric_length(metric(mid), step);
        }
    }
    return out;
}

Grid anchored_grid(const Box& box, const Eigen::VectorXd& x0, int resolution) {
    if (resolution < 3) throw Error(ErrorKind::argument, "anchored_grid: resolution must be >= 3");
    if (static_cast<std::size_t>(x0.size()) != box.size() || !box_contains(box, x0))
        throw Error(ErrorKind::domain, "anchored_grid: anchor outside the domain");
    Box axes;
    std::vector<int> counts;
    for (std::size_t k = 0; k < box.size(); ++k) {
        const double h = box[k].span() / (resolution - 1);
        const double x = x0[static_cast<Eigen::Index>(k)];
        const int below = static_cast<int>(std::floor((x - box[k].lo) / h + 1e-9));
        const int above = static_cast<int>(std::floor((box[k].hi - x) / h + 1e-9));
        axes.push_back({x - below * h, x + above * h});
        counts.push_back(below + above + 1);
    }
    return Grid(axes, counts);
}

const Eigen::MatrixXd& LatticeMetric::node(const std::vector<int>& idx) const {
    std::vector<int> f(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) f[k] = 2 * idx[k];
    return values[fine.linear_index(f)];
}

const Eigen::MatrixXd& LatticeMetric::midpoint(const std::vector<int>& idx, const std::vector<int>& offset) const {
    std::vector<int> f(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) f[k] = 2 * idx[k] + offset[k];
    return values[fine.linear_index(f)];
}

LatticeMetric sample_lattice_metric(const Grid& coarse, const MetricSampler& sampler) {
    LatticeMetric m{coarse, coarse.refined(2), {}};
    m.values.reserve(m.fine.size());
    for (std::size_t i = 0; i < m.fine.size(); ++i) m.values.push_back(sampler(m.fine.point(i)));
    return m;
}

const char* to_string(DistanceMethod m) {
    switch (m) {
        case DistanceMethod::graph16: return "graph16";
        case DistanceMethod::fast_marching: return "fast_marching";
    }
    return "?";
}

std::vector<std::size_t> DistanceField::path_to(std::size_t linear) const {
    std::vector<std::size_t> path;
    if (method != DistanceMethod::graph16 || !std::isfinite(values[linear])) return path;
    for (long v = static_cast<long>(linear); v >= 0; v = predecessor[static_cast<std::size_t>(v)])
        path.push_back(static_cast<std::size_t>(v));
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<std::vector<int>> graph_offsets(int n) {
    if (n < 1) throw Error(ErrorKind::argument, "graph_offsets: dimension must be >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> o(static_cast<std::size_t>(n), -2);
    while (true) {
        int g = 0;
        for (int v : o) g = std::gcd(g, std::abs(v));
        if (g == 1) out.push_back(o);
        int k = 0;
        while (k < n && o[static_cast<std::size_t>(k)] == 2) o[static_cast<std::size_t>(k++)] = -2;
        if (k == n) break;
        ++o[static_cast<std::size_t>(k)];
    }
    if (n == 2) {
        std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
            return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
        });
    }
    return out;
}

DistanceField distance_field(const LatticeMetric& metric, const std::vector<int>& anchor, DistanceMethod method) {
    const Grid& grid = metric.coarse;
    if (static_cast<int>(anchor.size()) != grid.dimension())
        throw Error(ErrorKind::argument, "distance_field: anchor dimension mismatch");
    for (int k = 0; k < grid.dimension(); ++k)
        if (anchor[static_cast<std::size_t>(k)] < 0 || anchor[static_cast<std::size_t>(k)] >= grid.counts()[static_cast<std::size_t>(k)])
            throw Error(ErrorKind::domain, "distance_field: anchor outside the grid");
    if (method == DistanceMethod::fast_marching && grid.dimension() != 2)
        throw Error(ErrorKind::argument, "distance_field: fast marching is two-dimensional only");
    DistanceField field{grid, anchor, method, std::vector<double>(grid.size(), inf),
                        std::vector<long>(grid.size(), -1)};
    const auto offsets = graph_offsets(grid.dimension());
    std::vector<Eigen::VectorXd> steps;
    for (const auto& o : offsets) steps.push_back(offset_vector(grid, o));
    if (method == DistanceMethod::graph16) {
        dijkstra(metric, field, offsets, steps);
    } else {
        fast_marching(metric, field, offsets, steps);
        field.predecessor.clear();
    }
    return field;
}

DistanceField distance_field(const MetricSampler& metric, const Eigen::VectorXd& x0, const Grid& grid,
                             DistanceMethod method) {
    const std::vector<int> anchor = grid.nearest(x0);
    if ((grid.point(anchor) - x0).norm() > 1e-9 * (1.0 + x0.norm()))
        throw Error(ErrorKind::argument, "distance_field: anchor is not a grid node");
    return distance_field(sample_lattice_metric(grid, metric), anchor, method);
}

double ball_max_sff(const DistanceField& distance, const std::vector<double>& sff, double r) {
    if (!(r >= 0.0)) throw Error(ErrorKind::argument, "ball_max_sff: radius must be >= 0");
    if (sff.size() != distance.values.size()) throw Error(ErrorKind::argument, "ball_max_sff: size mismatch");
    double S = 0.0;
    for (std::size_t i = 0; i < sff.size(); ++i)
        if (distance.values[i] <= r) S = std::max(S, sff[i]);
    return S;
}

BallVolume ball_volume(const LatticeMetric& metric, const DistanceField& distance, double r) {
    if (!(r >= 0.0)) throw Error(ErrorKind::argument, "ball_volume: radius must be >= 0");
    const Grid& grid = distance.grid;
    double cell = 1.0;
    for (int k = 0; k < grid.dimension(); ++k) cell *= grid.spacing(k);
    BallVolume out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(distance.values[i] <= r)) continue;
        const auto idx = grid.multi_index(i);
        out.volume += std::sqrt(std::max(0.0, metric.node(idx).determinant())) * cell;
        if (grid.on_boundary(idx)) out.truncated = true;
    }
    return out;
}

double unit_ball_volume(int n) {
    if (n < 1) throw Error(ErrorKind::argument, "unit_ball_volume: dimension must be >= 1");
    // omega_n = 2 pi / n * omega_{n-2}
    double w = (n % 2 == 0) ? 1.0 : 2.0;
    for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) w *= 2.0 * M_PI / k;
    return w;
}

double space_form_ball_volume(int n, double c, double r) {
    if (!(r >= 0.0)) throw Error(ErrorKind::argument, "space_form_ball_volume: radius must be >= 0");
    const double sphere_area = n * unit_ball_volume(n);
    if (c == 0.0) return unit_ball_volume(n) * std::pow(r, n);
    auto sn = [c](double t) {
        return c > 0.0 ? std::sin(std::sqrt(c) * t) / std::sqrt(c) : std::sinh(std::sqrt(-c) * t) / std::sqrt(-c);
    };
    if (c > 0.0) r = std::min(r, M_PI / std::sqrt(c));
    const int intervals = 2000;
    const double h = r / intervals;
    double sum = 0.0;
    for (int i = 0; i <= intervals; ++i) {
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * std::pow(sn(i * h), n - 1);
    }
    return sphere_area * sum * h / 3.0;
}

ExponentialFit fit_exponential(const std::vector<double>& r, const std::vector<double>& value, double r_lo,
                               double r_hi) {
    if (r.size() != value.size()) throw Error(ErrorKind::argument, "fit_exponential: size mismatch");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < r_lo || r[i] > r_hi) continue;
        if (!(value[i] > 0.0) || !std::isfinite(value[i]))
            throw Error(ErrorKind::argument, fmt::format("fit_exponential: non-positive value at r = {}", r[i]));
        xs.push_back(r[i]);
        ys.push_back(std::log(value[i]));
    }
    if (xs.size() < 4) throw Error(ErrorKind::argument, "fit_exponential: fewer than 4 rows in the window");
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::argument, "fit_exponential: radii in the window are all equal");
    ExponentialFit fit;
    fit.ell = sxy / sxx;
    fit.k = std::exp(my - fit.ell * mx);
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + fit.ell * (xs[i] - mx));
        ss_res += e * e;
    }
    fit.r_squared = syy > 1e-24 * m * (1.0 + my * my) ? 1.0 - ss_res / syy : 1.0;
    fit.r_lo = *std::min_element(xs.begin(), xs.end());
    fit.r_hi = *std::max_element(xs.begin(), xs.end());
    fit.rows = static_cast<int>(xs.size());
    return fit;
}

std::pair<double, double> default_fit_window(const std::vector<double>& radii) {
    if (radii.empty()) throw Error(ErrorKind::argument, "default_fit_window: no radii");
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    const auto skip = static_cast<std::size_t>(std::floor(0.2 * static_cast<double>(sorted.size())));
    return {sorted[std::min(skip, sorted.size() - 1)], sorted.back()};
}

Verdict margin_verdict(double margin, double error) {
    if (std::isnan(margin)) return Verdict::fail;
    if (margin > error) return Verdict::pass;
    if (margin < -error) return Verdict::fail;
    return Verdict::indeterminate;
}

static LatticeMetric subsample_lattice(const LatticeMetric& metric, const std::vector<int>& anchor) {
    const Grid& grid = metric.coarse;
    Box axes;
    std::vector<int> counts;
    for (int k = 0; k < grid.dimension(); ++k) {
        const auto sk = static_cast<std::size_t>(k);
        const double h = grid.spacing(k);
        const int below = anchor[sk] / 2;
        const int above = (grid.counts()[sk] - 1 - anchor[sk]) / 2;
        const double x = grid.axes()[sk].lo + anchor[sk] * h;
        axes.push_back({x - 2 * below * h, x + 2 * above * h});
        counts.push_back(below + above + 1);
    }
    Grid coarse(axes, counts);
    LatticeMetric out{coarse, coarse.refined(2), {}};
    out.values.reserve(out.fine.size());
    std::vector<int> idx(anchor.size());
    for (std::size_t i = 0; i < out.fine.size(); ++i) {
        const auto f = out.fine.multi_index(i);
        for (std::size_t k = 0; k < f.size(); ++k) idx[k] = anchor[k] - 2 * (anchor[k] / 2) + f[k];
        out.values.push_back(metric.node(idx));
    }
    return out;
}

static std::vector<int> subsampled_anchor(const std::vector<int>& anchor) {
    std::vector<int> out(anchor.size());
    for (std::size_t k = 0; k < anchor.size(); ++k) out[k] = anchor[k] / 2;
    return out;
}

static double stencil_error_estimate(const DistanceField& full, const DistanceField& half, double r) {
    const Grid& grid = full.grid;
    double worst = 0.0;
    std::vector<int> idx(full.anchor.size());
    for (std::size_t i = 0; i < half.grid.size(); ++i) {
        const auto h = half.grid.multi_index(i);
        for (std::size_t k = 0; k < h.size(); ++k) idx[k] = full.anchor[k] - 2 * (full.anchor[k] / 2) + 2 * h[k];
        const double d = full.values[grid.linear_index(idx)];
        if (!(d <= r) || d < 0.5 * r || d <= 0.0) continue;
        worst = std::max(worst, std::abs(d - half.values[i]) / d);
    }
    return worst;
}

GrowthReport growth_report(const ImmersionChart& chart, const Eigen::VectorXd& x0, const GrowthOptions& options) {
    if (options.radii.empty()) throw Error(ErrorKind::argument, "growth_report: no radii");
    for (std::size_t i = 0; i < options.radii.size(); ++i) {
        if (!(options.radii[i] >= 0.0)) throw Error(ErrorKind::argument, "growth_report: radii must be >= 0");
        if (i > 0 && !(options.radii[i] > options.radii[i - 1]))
            throw Error(ErrorKind::argument, "growth_report: radii must be strictly increasing");
    }
    if (options.stencil_error && !(*options.stencil_error >= 0.0))
        throw Error(ErrorKind::argument, "growth_report: stencil error must be >= 0");

    GrowthReport report;
    report.chart = chart.name;
    report.anchor = x0;
    if (options.C_override) report.C = options.C_override;
    else if (chart.intrinsic_curvature) report.C = chart.C();

    const Box usable = chart.usable_domain();
    if (!box_contains(usable, x0)) throw Error(ErrorKind::domain, "growth_report: anchor outside the usable domain");
    const Grid grid = anchored_grid(usable, x0, options.resolution);
    const std::vector<int> anchor = grid.nearest(x0);
    const int n = chart.n;
    report.method = options.method;
    if (report.method == DistanceMethod::fast_marching && n != 2) {
        report.method = DistanceMethod::graph16;
        report.warnings.push_back("fast marching is two-dimensional only, using graph16 distances");
    }

    if (!report.C) {
        report.note = "hypothesis: intrinsic curvature not asserted, bound chain refused";
    } else if (*report.C <= 0.0 && !options.exploratory) {
        report.note = fmt::format("hypothesis: C = {} <= 0, bound chain refused", *report.C);
    } else {
        report.chain_enabled = true;
        if (*report.C <= 0.0) report.note = fmt::format("exploratory: C = {} <= 0, volume bound undefined", *report.C);
    }
    const FundamentalData at_anchor = second_fundamental_form(chart, x0);
    if (!normal_bundle_is_flat(at_anchor, 1e-8).flat)
        report.warnings.push_back("normal bundle is not flat at the anchor");

    LatticeMetric g{grid, grid.refined(2), {}};
    LatticeMetric g0{grid, g.fine, {}};
    std::vector<double> sff_fine;
    g.values.reserve(g.fine.size());
    g0.values.reserve(g.fine.size());
    sff_fine.reserve(g.fine.size());
    const double C = report.C.value_or(0.0);
    for (std::size_t i = 0; i < g.fine.size(); ++i) {
        const FundamentalData fd = second_fundamental_form(chart, g.fine.point(i));
        Eigen::MatrixXd third = Eigen::MatrixXd::Zero(n, n);
        for (const auto& a : fd.alpha) third += a * fd.g_inverse * a;
        g.values.push_back(fd.g);
        g0.values.push_back(C * fd.g + third);
        sff_fine.push_back(fd.sff_norm_sq);
    }
    auto sff_mid = [&](const std::vector<int>& idx, const std::vector<int>& offset) {
        std::vector<int> f(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) f[k] = 2 * idx[k] + offset[k];
        return sff_fine[g.fine.linear_index(f)];
    };

    // Discrete g-geodesics come from the graph; distances from the chosen method.
    const DistanceField paths = distance_field(g, anchor, DistanceMethod::graph16);
    const DistanceField dg =
        report.method == DistanceMethod::graph16 ? paths : distance_field(g, anchor, report.method);
    std::optional<DistanceField> dg0;
    if (report.chain_enabled) dg0 = distance_field(g0, anchor, report.method);

    std::optional<DistanceField> dg_half;
    std::optional<DistanceField> dg0_half;
    if (!options.stencil_error) {
        const LatticeMetric g_half = subsample_lattice(g, anchor);
        dg_half = distance_field(g_half, subsampled_anchor(anchor), report.method);
        if (dg0) dg0_half = distance_field(subsample_lattice(g0, anchor), subsampled_anchor(anchor), report.method);
    }

    // Per node: |alpha|^2 at the node and on its incoming tree edge, the same
    // maximised along the discrete geodesic, and the geodesic's lengths.
    const std::size_t size = grid.size();
    std::vector<double> node_sff(size, 0.0);
    std::vector<double> path_sff(size, 0.0);
    std::vector<double> path_g0(size, 0.0);
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return paths.values[a] < paths.values[b] || (paths.values[a] == paths.values[b] && a < b);
    });
    for (std::size_t v : order) {
        const auto idx = grid.multi_index(v);
        node_sff[v] = sff_mid(idx, std::vector<int>(static_cast<std::size_t>(n), 0));
        const long p = paths.predecessor[v];
        if (p < 0) {
            path_sff[v] = node_sff[v];
            continue;
        }
        const auto pidx = grid.multi_index(static_cast<std::size_t>(p));
        std::vector<int> off(static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < off.size(); ++k) off[k] = idx[k] - pidx[k];
        node_sff[v] = std::max(node_sff[v], sff_mid(pidx, off));
        path_sff[v] = std::max(node_sff[v], path_sff[static_cast<std::size_t>(p)]);
        path_g0[v] = path_g0[static_cast<std::size_t>(p)] +
                     metric_length(g0.midpoint(pidx, off), offset_vector(grid, off));
    }

    const double omega = unit_ball_volume(n);
    for (double r : options.radii) {
        GrowthRow row;
        row.r = r;
        row.S = 0.0;
        for (std::size_t v = 0; v < size; ++v)
            if (dg.values[v] <= r) row.S = std::max(row.S, node_sff[v]);
        const BallVolume bv = ball_volume(g, dg, r);
        row.vol = bv.volume;
        row.truncated = bv.truncated;
        row.ref_vol = chart.intrinsic_curvature ? space_form_ball_volume(n, *chart.intrinsic_curvature, r) : nan;
        row.psi = (report.C && row.S + C > 0.0) ? r * std::sqrt(row.S + C) : nan;
        row.bound = (report.C && C > 0.0) ? std::pow(r, n) * std::pow(1.0 + row.S / C, 0.5 * n) * omega : nan;
        if (options.stencil_error) {
            row.stencil_error = *options.stencil_error;
        } else {
            row.stencil_error = stencil_error_estimate(dg, *dg_half, r);
            if (dg0) {
                double reach = 0.0;
                for (std::size_t v = 0; v < size; ++v)
                    if (dg.values[v] <= r) reach = std::max(reach, dg0->values[v]);
                row.stencil_error = std::max(row.stencil_error, stencil_error_estimate(*dg0, *dg0_half, reach));
            }
        }
        if (bv.truncated)
            report.warnings.push_back(fmt::format("ball of radius {} reaches the grid boundary", r));

        if (report.chain_enabled) {
            const double eps = row.stencil_error;
            double length_margin = inf;
            double distance_margin = inf;
            double reach = 0.0;
            for (std::size_t v = 0; v < size; ++v) {
                if (!(dg.values[v] <= r)) continue;
                reach = std::max(reach, dg0->values[v]);
                if (paths.values[v] <= 0.0 || dg.values[v] <= 0.0) continue;
                const double scale = std::sqrt(path_sff[v] + C);
                const double along = scale * paths.values[v];
                length_margin = std::min(length_margin, (along - path_g0[v]) / along);
                const double rhs = scale * dg.values[v];
                distance_margin = std::min(distance_margin, (rhs - dg0->values[v]) / rhs);
            }
            if (std::isfinite(length_margin)) {
                row.length = {margin_verdict(length_margin, eps), length_margin};
                row.distance = {margin_verdict(distance_margin, eps), distance_margin};
            }
            if (row.psi > 0.0) {
                const double m = (row.psi - reach) / row.psi;
                row.balls = {margin_verdict(m, eps), m};
            }
            if (C > 0.0 && row.bound > 0.0) {
                const double m = (row.bound - row.vol) / row.bound;
                row.volume_bound = {margin_verdict(m, eps), m};
            }
        }
        report.rows.push_back(row);
    }

    const auto window = options.window ? *options.window : default_fit_window(options.radii);
    std::vector<double> rs;
    std::vector<double> roots;
    for (const auto& row : report.rows) {
        rs.push_back(row.r);
        roots.push_back(std::sqrt(row.S));
    }
    try {
        report.fit = fit_exponential(rs, roots, window.first, window.second);
    } catch (const Error& e) {
        report.warnings.push_back(fmt::format("growth fit unavailable: {}", e.what()));
    }
    return report;
}

void write_growth_csv(std::ostream& out, const GrowthReport& report) {
    out << "r,S,psi,vol,bound,ref_vol\n";
    for (const auto& row : report.rows)
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", row.r, row.S, row.psi, row.vol,
                           row.bound, row.ref_vol);
}

}  // namespace flatnormal
