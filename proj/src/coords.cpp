#include "flatnormal/coords.hpp"

#include "flatnormal/fundamental.hpp"
#include "flatnormal/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace flatnormal {

namespace {

constexpr int offsets[4] = {-2, -1, 1, 2};
constexpr double weights[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

double g_norm(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

FlowState integrate_steps(const PrincipalFlowField& field, const FlowState& start, int axis, double h, int steps,
                          double time_offset) {
    const Box domain = field.chart().usable_domain();
    FlowState state = start;
    double time = time_offset;
    auto stage = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
        if (!box_contains(domain, u)) throw FlowExit(axis, time);
        return field.fields(field.frame(u, &state.frame)).col(axis);
    };
    for (int k = 0; k < steps; ++k) {
        const Eigen::VectorXd& u = state.u;
        const Eigen::VectorXd k1 = field.fields(state.frame).col(axis);
        const Eigen::VectorXd k2 = stage(u + 0.5 * h * k1);
        const Eigen::VectorXd k3 = stage(u + 0.5 * h * k2);
        const Eigen::VectorXd k4 = stage(u + h * k3);
        const Eigen::VectorXd next = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!box_contains(domain, next)) throw FlowExit(axis, time);
        PrincipalFrame frame = field.frame(next, &state.frame);
        state.u = next;
        state.frame = std::move(frame);
        time += h;
    }
    return state;
}

// States at t_axis = -a + m * delta, m = 0..count-1, starting from t_axis = 0.
std::vector<FlowState> march_line(const PrincipalFlowField& field, const FlowState& start, int axis, double a,
                                  int count, double step) {
    std::vector<FlowState> line(static_cast<std::size_t>(count));
    const int centre = (count - 1) / 2;
    line[static_cast<std::size_t>(centre)] = start;
    if (count == 1) return line;
    const double delta = 2.0 * a / (count - 1);
    const int sub = std::max(1, static_cast<int>(std::ceil(delta / step - 1e-12)));
    for (int dir : {1, -1}) {
        FlowState s = start;
        for (int m = 1; m <= centre; ++m) {
            const double h = dir * delta / sub;
            s = integrate_steps(field, s, axis, h, sub, dir * (m - 1) * delta);
            line[static_cast<std::size_t>(centre + dir * m)] = s;
        }
    }
    return line;
}

double resolve_C(const ImmersionChart& chart, const FlowOptions& options) {
    if (options.C_override) return *options.C_override;
    return chart.C();
}

}  // namespace

FlowExit::FlowExit(int axis, double exit_time)
    : Error(ErrorKind::domain,
            fmt::format("flow along axis {} leaves the usable domain at t = {:.17g}", axis + 1, exit_time)),
      axis_(axis),
      exit_time_(exit_time) {}

PrincipalFlowField::PrincipalFlowField(ImmersionChart chart, double C, PrincipalOptions principal, double ambiguity)
    : chart_(std::move(chart)), C_(C), principal_(principal), ambiguity_(ambiguity) {}

PrincipalFrame PrincipalFlowField::frame(const Eigen::VectorXd& u, const PrincipalFrame* reference) const {
    const auto fd = second_fundamental_form(chart_, u);
    const auto d = principal_decomposition(fd, C_, principal_);
    PrincipalFrame f = principal_frame(fd, d);
    if (reference && align_frame(*reference, f, fd.g, ambiguity_) == AlignmentStatus::ambiguous)
        throw Error(ErrorKind::frame, "principal frame lost coherence along a trajectory");
    return f;
}

Eigen::MatrixXd PrincipalFlowField::fields(const PrincipalFrame& frame) const {
    Eigen::MatrixXd Y = frame.directions;
    for (int i = 0; i < frame.n(); ++i) Y.col(i) /= std::sqrt(frame.eta_norm_sq[i] + C_);
    return Y;
}

FlowState integrate_flow(const PrincipalFlowField& field, const FlowState& start, int axis, double t, double step) {
    if (!(step > 0.0)) throw Error(ErrorKind::argument, "flow step must be positive");
    if (t == 0.0) return start;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / step - 1e-12)));
    return integrate_steps(field, start, axis, t / steps, steps, 0.0);
}

FlowState compose_flows(const PrincipalFlowField& field, const FlowState& start, const Eigen::VectorXd& t,
                        double step, const std::vector<int>& order) {
    std::vector<int> axes = order;
    if (axes.empty()) {
        axes.resize(static_cast<std::size_t>(t.size()));
        std::iota(axes.begin(), axes.end(), 0);
    }
    FlowState s = start;
    for (int axis : axes) s = integrate_flow(field, s, axis, t[axis], step);
    return s;
}

std::vector<Eigen::VectorXd> lie_brackets(const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& fields,
                                          const Eigen::VectorXd& u, const std::vector<double>& h) {
    const auto n = u.size();
    const Eigen::MatrixXd V = fields(u);
    std::vector<Eigen::MatrixXd> dV;  // [k]: d_k of the columns
    for (Eigen::Index k = 0; k < n; ++k) {
        const double hk = h[static_cast<std::size_t>(k)];
        auto at = [&](int m) {
            Eigen::VectorXd x = u;
            x[k] += m * hk;
            return fields(x);
        };
        dV.push_back((8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * hk));
    }
    std::vector<Eigen::VectorXd> out;
    for (Eigen::Index i = 0; i < V.cols(); ++i)
        for (Eigen::Index j = i + 1; j < V.cols(); ++j) {
            Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
            for (Eigen::Index k = 0; k < n; ++k)
                b += V(k, i) * dV[static_cast<std::size_t>(k)].col(j) - V(k, j) * dV[static_cast<std::size_t>(k)].col(i);
            out.push_back(std::move(b));
        }
    return out;
}

double commutator_residual(const PrincipalFlowField& field, const Eigen::VectorXd& u, const PrincipalFrame* reference) {
    const ImmersionChart& chart = field.chart();
    const PrincipalFrame centre = field.frame(u, reference);
    std::vector<double> h;
    for (int k = 0; k < chart.n; ++k) h.push_back(chart.fd_step(k));
    const auto brackets = lie_brackets(
        [&](const Eigen::VectorXd& x) { return field.fields(field.frame(x, &centre)); }, u, h);
    const Eigen::MatrixXd g = first_fundamental_form(chart, u);
    double worst = 0.0;
    for (const auto& b : brackets) worst = std::max(worst, g_norm(g, b));
    return worst;
}

double FlowMap::spacing(int axis) const {
    const auto k = static_cast<std::size_t>(axis);
    return counts[k] > 1 ? 2.0 * half_widths[k] / (counts[k] - 1) : 0.0;
}

std::vector<int> FlowMap::multi_index(std::size_t linear) const {
    std::vector<int> idx(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        idx[k] = static_cast<int>(linear % static_cast<std::size_t>(counts[k]));
        linear /= static_cast<std::size_t>(counts[k]);
    }
    return idx;
}

std::size_t FlowMap::linear_index(const std::vector<int>& idx) const {
    std::size_t linear = 0;
    for (std::size_t k = counts.size(); k-- > 0;)
        linear = linear * static_cast<std::size_t>(counts[k]) + static_cast<std::size_t>(idx[k]);
    return linear;
}

Eigen::VectorXd FlowMap::t(std::size_t linear) const {
    const auto idx = multi_index(linear);
    Eigen::VectorXd out(dimension());
    for (int k = 0; k < dimension(); ++k) {
        const int centre = (counts[static_cast<std::size_t>(k)] - 1) / 2;
        out[k] = (idx[static_cast<std::size_t>(k)] - centre) * spacing(k);
    }
    return out;
}

FlowMap build_flow_map(const ImmersionChart& chart, const Eigen::VectorXd& x0, const FlowOptions& options) {
    const int n = chart.n;
    if (static_cast<int>(options.half_widths.size()) != n)
        throw Error(ErrorKind::argument, "flow box needs one half-width per chart axis");
    if (options.points < 1 || options.points % 2 == 0)
        throw Error(ErrorKind::argument, "flow points per axis must be a positive odd number");
    for (double a : options.half_widths)
        if (!(a >= 0.0)) throw Error(ErrorKind::argument, "flow half-widths must be non-negative");
    if (!box_contains(chart.usable_domain(), x0)) throw Error(ErrorKind::domain, "anchor lies outside the usable domain");

    const double C = resolve_C(chart, options);
    const PrincipalFlowField field(chart, C, options.principal, options.ambiguity);
    const FlowState origin{x0, field.frame(x0)};

    FlowMap map;
    map.x0 = x0;
    map.step = options.step;
    map.C = C;
    map.half_widths = options.half_widths;
    for (int attempt = 0;; ++attempt) {
        map.counts.clear();
        for (double a : map.half_widths) map.counts.push_back(a > 0.0 ? options.points : 1);
        try {
            std::vector<FlowState> current{origin};
            for (int axis = 0; axis < n; ++axis) {
                const int count = map.counts[static_cast<std::size_t>(axis)];
                std::vector<FlowState> next(current.size() * static_cast<std::size_t>(count));
                for (std::size_t j = 0; j < current.size(); ++j) {
                    auto line = march_line(field, current[j], axis, map.half_widths[static_cast<std::size_t>(axis)],
                                           count, options.step);
                    for (int m = 0; m < count; ++m)
                        next[j + static_cast<std::size_t>(m) * current.size()] = std::move(line[static_cast<std::size_t>(m)]);
                }
                current = std::move(next);
            }
            map.values.clear();
            map.frames.clear();
            for (auto& s : current) {
                map.values.push_back(std::move(s.u));
                map.frames.push_back(std::move(s.frame));
            }
            return map;
        } catch (const FlowExit& exit) {
            if (attempt >= options.max_shrinks) throw;
            auto& a = map.half_widths[static_cast<std::size_t>(exit.axis())];
            a = options.shrink * std::min(std::abs(exit.exit_time()), a);
            if (a < 1e-9) a = 0.0;
            map.warnings.push_back(fmt::format("t-box axis {} shrunk to half-width {:.17g} after domain exit",
                                               exit.axis() + 1, a));
        }
    }
}

PullbackReports verify_principal_frame_property(const FlowMap& map, const ImmersionChart& chart, double tolerance,
                                               const FlowOptions& options) {
    const int n = map.dimension();
    std::vector<ResidualSample> orth, align, pull;
    bool differentiable = true;
    for (int k = 0; k < n; ++k) differentiable = differentiable && map.counts[static_cast<std::size_t>(k)] >= 5;
    if (differentiable) {
        for (std::size_t lin = 0; lin < map.size(); ++lin) {
            const auto idx = map.multi_index(lin);
            bool interior = true;
            for (int k = 0; k < n; ++k)
                interior = interior && idx[static_cast<std::size_t>(k)] >= 2 &&
                           idx[static_cast<std::size_t>(k)] <= map.counts[static_cast<std::size_t>(k)] - 3;
            if (!interior) continue;
            Eigen::MatrixXd Fstar(n, n);
            for (int k = 0; k < n; ++k) {
                Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
                for (int s = 0; s < 4; ++s) {
                    auto nb = idx;
                    nb[static_cast<std::size_t>(k)] += offsets[s];
                    d += weights[s] * map.values[map.linear_index(nb)];
                }
                Fstar.col(k) = d / map.spacing(k);
            }
            const Eigen::VectorXd& u = map.values[lin];
            const PrincipalFrame& frame = map.frames[lin];
            const auto fd = second_fundamental_form(chart, u);
            const Eigen::MatrixXd g0 =
                comparison_metric(fd, third_fundamental_form(fd), map.C, options.principal.exploratory).g0;
            Eigen::MatrixXd Z = Fstar;
            for (int i = 0; i < n; ++i) Z.col(i) *= std::sqrt(frame.eta_norm_sq[i] + map.C);
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            orth.push_back({u, (Z.transpose() * fd.g * Z - I).cwiseAbs().maxCoeff()});
            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                worst = std::max(worst, std::min(g_norm(fd.g, Z.col(i) - frame.directions.col(i)),
                                                 g_norm(fd.g, Z.col(i) + frame.directions.col(i))));
            align.push_back({u, worst});
            pull.push_back({u, (Fstar.transpose() * g0 * Fstar - I).cwiseAbs().maxCoeff()});
        }
    }
    auto finish = [&](const char* name, std::vector<ResidualSample> s) {
        ResidualReport r = summarize(name, std::move(s), tolerance);
        if (r.points == 0) {
            r.verdict = Verdict::indeterminate;
            r.note = "t-grid too small for 4th-order differences";
        }
        return r;
    };
    return {finish("pullback_orthonormal", std::move(orth)), finish("pullback_alignment", std::move(align)),
            finish("pullback_g0", std::move(pull))};
}

CoordsReport principal_coordinates_report(const ImmersionChart& chart, const Eigen::VectorXd& x0,
                                          const CoordsOptions& options) {
    CoordsReport report;
    const FlowOptions& fo = options.flow;
    const char* names[] = {"commutator",           "homomorphism",  "round_trip",  "composition_order",
                           "pullback_orthonormal", "pullback_alignment", "pullback_g0", "injectivity",
                           "g0_distance"};
    try {
        report.flow = build_flow_map(chart, x0, fo);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::hypothesis) throw;
        report.skipped = true;
        report.note = e.what();
        for (const char* name : names) report.reports.push_back(summarize(name, {}, 0.0, 1, e.what()));
        return report;
    }
    const FlowMap& map = *report.flow;
    report.warnings = map.warnings;
    const int n = chart.n;
    const PrincipalFlowField field(chart, map.C, fo.principal, fo.ambiguity);
    const FlowState base{x0, field.frame(x0)};

    // Commutators at the sampled images.
    {
        std::vector<ResidualSample> samples;
        int excluded = 0;
        for (std::size_t k = 0; k < map.size(); ++k) {
            const Eigen::VectorXd& u = map.values[k];
            bool fits = true;
            for (int a = 0; a < n; ++a) {
                const double h = 2.0 * chart.fd_step(a);
                fits = fits && chart.domain[static_cast<std::size_t>(a)].contains(u[a] - h) &&
                       chart.domain[static_cast<std::size_t>(a)].contains(u[a] + h);
            }
            if (!fits) {
                ++excluded;
                continue;
            }
            samples.push_back({u, commutator_residual(field, u, &map.frames[k])});
        }
        report.reports.push_back(summarize("commutator", std::move(samples), options.commutator_tolerance, excluded));
    }

    // Homomorphism, round trip and composition order on seeded random pairs.
    std::vector<ResidualSample> homomorphism, round_trip, composition;
    int exits = 0;
    std::mt19937_64 rng(options.seed);
    std::vector<int> reversed(static_cast<std::size_t>(n));
    std::iota(reversed.rbegin(), reversed.rend(), 0);
    for (int pair = 0; pair < options.random_pairs; ++pair) {
        Eigen::VectorXd s(n), t(n);
        for (int k = 0; k < n; ++k) {
            const double a = 0.5 * map.half_widths[static_cast<std::size_t>(k)];
            s[k] = (2.0 * unit_uniform(rng) - 1.0) * a;
            t[k] = (2.0 * unit_uniform(rng) - 1.0) * a;
        }
        try {
            const FlowState lhs = compose_flows(field, base, s + t, fo.step);
            const FlowState mid = compose_flows(field, base, s, fo.step);
            const FlowState rhs = compose_flows(field, mid, t, fo.step);
            const Eigen::MatrixXd g = first_fundamental_form(chart, lhs.u);
            homomorphism.push_back({t, g_norm(g, lhs.u - rhs.u)});

            double back = 0.0;
            for (int k = 0; k < n; ++k) {
                const FlowState there = integrate_flow(field, base, k, t[k], fo.step);
                const FlowState again = integrate_flow(field, there, k, -t[k], fo.step);
                back = std::max(back, g_norm(first_fundamental_form(chart, x0), again.u - x0));
            }
            round_trip.push_back({t, back});

            const FlowState other = compose_flows(field, base, t, fo.step, reversed);
            const FlowState forward = compose_flows(field, base, t, fo.step);
            composition.push_back({t, g_norm(first_fundamental_form(chart, forward.u), forward.u - other.u)});
        } catch (const FlowExit&) {
            ++exits;
        }
    }
    report.reports.push_back(summarize("homomorphism", std::move(homomorphism), options.homomorphism_tolerance, exits));
    report.reports.push_back(summarize("round_trip", std::move(round_trip), options.round_trip_tolerance, exits));
    report.reports.push_back(
        summarize("composition_order", std::move(composition), 10.0 * options.round_trip_tolerance, exits));

    const PullbackReports pb = verify_principal_frame_property(map, chart, options.pullback_tolerance, fo);
    report.reports.push_back(pb.orthonormality);
    report.reports.push_back(pb.alignment);
    report.reports.push_back(pb.g0_identity);

    // Injectivity and g0 distances between images of t-grid points.
    std::vector<Eigen::MatrixXd> g0s;
    auto g0_at = [&](const Eigen::VectorXd& u) {
        const auto fd = second_fundamental_form(chart, u);
        return comparison_metric(fd, third_fundamental_form(fd), map.C, fo.principal.exploratory).g0;
    };
    for (const auto& u : map.values) g0s.push_back(g0_at(u));
    double cell = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k)
        if (map.counts[static_cast<std::size_t>(k)] > 1) cell = std::min(cell, map.spacing(k));
    std::vector<ResidualSample> injective, distance;
    if (map.size() > 1) {
        for (std::size_t a = 0; a < map.size(); ++a) {
            double worst = 0.0;
            for (std::size_t b = 0; b < map.size(); ++b) {
                if (a == b) continue;
                const double d = g_norm(g0s[a], map.values[b] - map.values[a]);
                worst = std::max(worst, std::max(0.0, 0.5 * cell - d) / (0.5 * cell));
            }
            injective.push_back({map.values[a], worst});
            const auto idx = map.multi_index(a);
            double rel = 0.0;
            bool any = false;
            for (int k = 0; k < n; ++k) {
                auto nb = idx;
                if (++nb[static_cast<std::size_t>(k)] >= map.counts[static_cast<std::size_t>(k)]) continue;
                const Eigen::VectorXd& ub = map.values[map.linear_index(nb)];
                const Eigen::VectorXd mid = 0.5 * (map.values[a] + ub);
                const double len = g_norm(g0_at(mid), ub - map.values[a]);
                rel = std::max(rel, std::abs(len - map.spacing(k)) / map.spacing(k));
                any = true;
            }
            if (any) distance.push_back({map.values[a], rel});
        }
    }
    report.reports.push_back(summarize("injectivity", std::move(injective), 0.0));
    report.reports.push_back(summarize("g0_distance", std::move(distance), options.distance_tolerance));
    return report;
}

void write_flow_csv(std::ostream& out, const FlowMap& map) {
    const int n = map.dimension();
    for (int i = 0; i < n; ++i) out << 't' << (i + 1) << ',';
    for (int i = 0; i < n; ++i) out << 'u' << (i + 1) << (i + 1 < n ? "," : "\n");
    for (std::size_t k = 0; k < map.size(); ++k) {
        const Eigen::VectorXd t = map.t(k);
        for (int i = 0; i < n; ++i) out << fmt::format("{:.17g},", t[i]);
        for (int i = 0; i < n; ++i) out << fmt::format("{:.17g}", map.values[k][i]) << (i + 1 < n ? ',' : '\n');
    }
}

}  // namespace flatnormal
