#include "flatnormal/verifiers.hpp"

#include "flatnormal/error.hpp"
#include "flatnormal/fundamental.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace flatnormal {

namespace {

constexpr int offsets[4] = {-2, -1, 1, 2};
constexpr double weights[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

double quantile(const std::vector<double>& sorted, double p) {
    const auto n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

double curvature_scale(const PrincipalFrame& frame) {
    return std::max(1.0, frame.eta_norm_sq.maxCoeff());
}

Eigen::VectorXd lambda_inverse(const PrincipalFrame& frame, double C) {
    Eigen::VectorXd q(frame.n());
    for (int i = 0; i < frame.n(); ++i) q[i] = std::sqrt(frame.eta_norm_sq[i] + C);
    return q;
}

std::vector<std::vector<int>> stride_nodes(const Grid& grid, int stride) {
    std::vector<std::vector<int>> out;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        auto idx = grid.multi_index(k);
        if (!grid.interior(idx, 2 * stride)) continue;
        if (std::any_of(idx.begin(), idx.end(), [&](int i) { return i % stride != 0; })) continue;
        out.push_back(std::move(idx));
    }
    return out;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::indeterminate: return "INDETERMINATE";
        case Verdict::skipped: return "SKIPPED";
    }
    return "?";
}

ResidualReport summarize(std::string identity, std::vector<ResidualSample> samples, double tolerance, int excluded,
                         std::string note) {
    ResidualReport r;
    r.identity = std::move(identity);
    r.tolerance = tolerance;
    r.excluded = excluded;
    r.note = std::move(note);
    r.points = static_cast<int>(samples.size());
    if (samples.empty()) {
        r.verdict = excluded > 0 ? Verdict::skipped : Verdict::pass;
        r.samples = std::move(samples);
        return r;
    }
    std::vector<double> values;
    values.reserve(samples.size());
    bool finite = true;
    for (const auto& s : samples) {
        values.push_back(s.residual);
        finite = finite && std::isfinite(s.residual);
    }
    std::sort(values.begin(), values.end());
    r.max = finite ? values.back() : std::numeric_limits<double>::infinity();
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    r.median = quantile(values, 0.5);
    r.q90 = quantile(values, 0.9);
    r.q99 = quantile(values, 0.99);
    r.verdict = finite && r.max <= tolerance ? Verdict::pass : Verdict::fail;
    r.samples = std::move(samples);
    return r;
}

std::optional<double> effective_C(const ImmersionChart& chart, const VerifierOptions& options) {
    if (options.C_override) return options.C_override;
    if (chart.intrinsic_curvature) return chart.C();
    return std::nullopt;
}

Grid verification_grid(const ImmersionChart& chart, int resolution) {
    if (resolution < 5) throw Error(ErrorKind::argument, "verification grid needs at least 5 nodes per axis");
    return Grid::uniform(chart.usable_domain(), resolution);
}

double gauss_residual(const PrincipalDecomposition& d, double c, double c_ambient) {
    std::vector<const Eigen::VectorXd*> expanded;
    for (int i = 0; i < d.s; ++i)
        for (int m = 0; m < d.multiplicities[static_cast<std::size_t>(i)]; ++m)
            expanded.push_back(&d.etas[static_cast<std::size_t>(i)]);
    double worst = 0.0;
    for (std::size_t a = 0; a < expanded.size(); ++a)
        for (std::size_t b = 0; b < expanded.size(); ++b)
            if (a != b) worst = std::max(worst, std::abs(expanded[a]->dot(*expanded[b]) - (c - c_ambient)));
    return worst;
}

ResidualReport check_gauss(const ImmersionChart& chart, const Grid& grid, const VerifierOptions& options) {
    const std::string name = "gauss";
    if (!chart.intrinsic_curvature)
        return summarize(name, {}, chart.default_tolerance(), 1, "intrinsic curvature not asserted");
    const double c = *chart.intrinsic_curvature;
    std::vector<ResidualSample> samples;
    int excluded = 0;
    std::string note;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const std::vector<int> idx = grid.multi_index(k);
        if (options.stride > 1 &&
            std::any_of(idx.begin(), idx.end(), [&](int i) { return i % options.stride != 0; }))
            continue;
        const Eigen::VectorXd u = grid.point(k);
        try {
            const auto fd = second_fundamental_form(chart, u);
            const auto d = principal_decomposition(fd, std::nullopt, options.principal);
            if (d.s < chart.n && !options.include_non_simple) {
                ++excluded;
                note = "s < n (multiplicity guard)";
                continue;
            }
            samples.push_back({u, gauss_residual(d, c, chart.ambient.curvature)});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::hypothesis) throw;
            ++excluded;
            note = e.what();
        }
    }
    return summarize(name, std::move(samples), chart.default_tolerance(), excluded, note);
}

PrincipalField::PrincipalField(const ImmersionChart& chart, Grid grid, const VerifierOptions& options)
    : chart_(chart), grid_(std::move(grid)), options_(options), C_(effective_C(chart, options)) {
    if (options_.stride < 1) throw Error(ErrorKind::argument, "stride must be positive");
    nodes_.resize(grid_.size());
    const double flat_tol = 10.0 * chart_.default_tolerance();
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        Node& node = nodes_[k];
        node.u = grid_.point(k);
        try {
            const auto fd = second_fundamental_form(chart_, node.u);
            if (!normal_bundle_is_flat(fd, flat_tol).flat) {
                node.reason = "normal bundle not flat";
                continue;
            }
            const auto d = principal_decomposition(fd, C_, options_.principal);
            if (d.s < chart_.n) {
                node.reason = "s < n (multiplicity guard)";
                continue;
            }
            node.frame = principal_frame(fd, d);
            node.g = fd.g;
            node.normal_frame = fd.normal_frame;
            node.christoffel = fd.christoffel();
            node.valid = true;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::hypothesis) throw;
            node.reason = e.what();
        }
    }
}

std::vector<std::vector<int>> PrincipalField::evaluation_nodes() const { return stride_nodes(grid_, options_.stride); }

std::optional<PrincipalJet> PrincipalField::jet(const std::vector<int>& idx, std::string* reason) const {
    auto fail = [&](const std::string& why) -> std::optional<PrincipalJet> {
        if (reason) *reason = why;
        return std::nullopt;
    };
    if (!grid_.interior(idx, 2)) return fail("stencil leaves the grid");
    const Node& centre = nodes_[grid_.linear_index(idx)];
    if (!centre.valid) return fail(centre.reason);

    const int n = chart_.n;
    PrincipalJet jet;
    jet.u = centre.u;
    jet.frame = centre.frame;
    jet.g = centre.g;
    jet.normal_frame = centre.normal_frame;
    jet.coordinate_christoffel = centre.christoffel;
    if (C_) jet.q = lambda_inverse(centre.frame, *C_);

    for (int k = 0; k < n; ++k) {
        const double h = grid_.spacing(k);
        Eigen::MatrixXd de = Eigen::MatrixXd::Zero(centre.frame.etas.rows(), n);
        Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd dq = Eigen::VectorXd::Zero(n);
        for (int s = 0; s < 4; ++s) {
            std::vector<int> nb;
            if (!grid_.shifted(idx, k, offsets[s], nb)) return fail("stencil leaves the grid");
            const Node& other = nodes_[grid_.linear_index(nb)];
            if (!other.valid) return fail("stencil node: " + other.reason);
            PrincipalFrame aligned = other.frame;
            if (align_frame(centre.frame, aligned, centre.g, options_.ambiguity) == AlignmentStatus::ambiguous)
                return fail("incoherent principal frame on the stencil");
            const double w = weights[s] / h;
            de += w * aligned.etas;
            dx += w * aligned.directions;
            if (C_) dq += w * lambda_inverse(aligned, *C_);
        }
        jet.d_etas.push_back(std::move(de));
        jet.d_directions.push_back(std::move(dx));
        if (C_) jet.d_q.push_back(std::move(dq));
    }
    return jet;
}

Eigen::VectorXd covariant_derivative(const PrincipalJet& jet, int i, int j) {
    const Eigen::MatrixXd& X = jet.frame.directions;
    const auto n = X.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) v += X(k, i) * jet.d_directions[static_cast<std::size_t>(k)].col(j);
    for (Eigen::Index m = 0; m < n; ++m)
        v[m] += X.col(i).dot(jet.coordinate_christoffel[static_cast<std::size_t>(m)] * X.col(j));
    return v;
}

ChristoffelSample christoffel_sample(const PrincipalJet& jet) {
    const int n = jet.frame.n();
    ChristoffelSample out;
    out.n = n;
    out.values.resize(static_cast<std::size_t>(n * n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Eigen::VectorXd nab = covariant_derivative(jet, i, j);
            for (int k = 0; k < n; ++k)
                out.values[static_cast<std::size_t>((i * n + j) * n + k)] =
                    nab.dot(jet.g * jet.frame.directions.col(k));
        }
    return out;
}

namespace {

template <typename PointResidual>
ResidualReport sweep(const PrincipalField& field, const std::string& name, double tolerance,
                     PointResidual&& residual) {
    std::vector<ResidualSample> samples;
    int excluded = 0;
    std::string note;
    for (const auto& idx : field.evaluation_nodes()) {
        std::string why;
        const auto jet = field.jet(idx, &why);
        if (!jet) {
            ++excluded;
            note = why;
            continue;
        }
        samples.push_back({jet->u, residual(*jet)});
    }
    return summarize(name, std::move(samples), tolerance, excluded, note);
}

}  // namespace

ResidualReport check_codazzi_normal(const PrincipalField& field, double tolerance) {
    const AmbientModel& ambient = field.chart().ambient;
    return sweep(field, "codazzi_normal", tolerance, [&](const PrincipalJet& jet) {
        const int n = jet.frame.n();
        const int p = static_cast<int>(jet.normal_frame.cols());
        const ChristoffelSample G = christoffel_sample(jet);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                Eigen::VectorXd deriv = Eigen::VectorXd::Zero(jet.normal_frame.rows());
                for (int k = 0; k < n; ++k)
                    deriv += jet.frame.directions(k, j) * jet.d_etas[static_cast<std::size_t>(k)].col(i);
                Eigen::VectorXd lhs(p);
                for (int a = 0; a < p; ++a) lhs[a] = ambient.inner(deriv, jet.normal_frame.col(a));
                const Eigen::VectorXd rhs =
                    G(i, i, j) * (jet.frame.eta_components.col(i) - jet.frame.eta_components.col(j));
                worst = std::max(worst, (lhs - rhs).norm());
            }
        return worst / curvature_scale(jet.frame);
    });
}

ResidualReport check_codazzi_triple(const PrincipalField& field, double tolerance) {
    if (field.chart().n < 3) return summarize("codazzi_triple", {}, tolerance, 0, "vacuous for n < 3");
    return sweep(field, "codazzi_triple", tolerance, [&](const PrincipalJet& jet) {
        const int n = jet.frame.n();
        const ChristoffelSample G = christoffel_sample(jet);
        const Eigen::MatrixXd& eta = jet.frame.eta_components;
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    if (i == j || j == l || i == l) continue;
                    const Eigen::VectorXd diff =
                        G(l, j, i) * (eta.col(i) - eta.col(j)) - G(j, l, i) * (eta.col(i) - eta.col(l));
                    worst = std::max(worst, diff.norm());
                }
        return worst / curvature_scale(jet.frame);
    });
}

ResidualReport check_connection_formula(const PrincipalField& field, double tolerance) {
    if (!field.C()) return summarize("connection", {}, tolerance, 1, "C not available");
    return sweep(field, "connection", tolerance, [&](const PrincipalJet& jet) {
        const int n = jet.frame.n();
        const Eigen::MatrixXd& X = jet.frame.directions;
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                double xj_q = 0.0;
                for (int k = 0; k < n; ++k) xj_q += X(k, j) * jet.d_q[static_cast<std::size_t>(k)][i];
                const double lambda = 1.0 / jet.q(i, 0);
                const Eigen::VectorXd r = covariant_derivative(jet, i, j) + lambda * xj_q * X.col(i);
                worst = std::max(worst, std::sqrt(std::max(0.0, r.dot(jet.g * r))));
            }
        return worst;
    });
}

ResidualReport check_g0_flat(const ImmersionChart& chart, const Grid& grid, double tolerance,
                             const VerifierOptions& options) {
    const std::string name = "g0_flat";
    const auto C = effective_C(chart, options);
    if (!C) return summarize(name, {}, tolerance, 1, "C not available");
    if (*C <= 0.0 && !options.principal.exploratory)
        return summarize(name, {}, tolerance, 1, "C <= 0 guard (exploratory mode required)");
    const MetricField g0 = sample_metric(grid, [&](const Eigen::VectorXd& u) {
        const auto fd = second_fundamental_form(chart, u);
        return comparison_metric(fd, third_fundamental_form(fd), *C, options.principal.exploratory).g0;
    });
    std::vector<ResidualSample> samples;
    for (const auto& idx : stride_nodes(grid, options.stride)) {
        const CurvatureTensor R = riemann_curvature(g0, idx);
        samples.push_back({grid.point(idx), R.max_abs() / (1.0 + g0.at(idx).squaredNorm())});
    }
    return summarize(name, std::move(samples), tolerance);
}

ResidualReport check_intrinsic_curvature(const ImmersionChart& chart, const Grid& grid, double tolerance) {
    const std::string name = "intrinsic_curvature";
    if (!chart.intrinsic_curvature) return summarize(name, {}, tolerance, 1, "intrinsic curvature not asserted");
    const double c = *chart.intrinsic_curvature;
    const MetricField g = sample_metric(grid, [&](const Eigen::VectorXd& u) { return first_fundamental_form(chart, u); });
    std::vector<ResidualSample> samples;
    for (const auto& idx : stride_nodes(grid, 1)) {
        const CurvatureTensor R = riemann_curvature(g, idx);
        double worst = 0.0;
        for (int i = 0; i < chart.n; ++i)
            for (int j = i + 1; j < chart.n; ++j)
                worst = std::max(worst, std::abs(sectional_curvature(R, g.at(idx), i, j) - c));
        samples.push_back({grid.point(idx), worst});
    }
    return summarize(name, std::move(samples), tolerance);
}

ConvergenceStudy convergence_study(const ImmersionChart& chart, StencilIdentity identity, int base_resolution,
                                   int levels, const VerifierOptions& options) {
    if (levels < 2) throw Error(ErrorKind::argument, "convergence study needs at least two levels");
    const Grid base = verification_grid(chart, base_resolution);
    ConvergenceStudy study;
    for (int level = 0; level < levels; ++level) {
        const int factor = 1 << level;
        VerifierOptions opts = options;
        opts.stride = factor;
        const Grid grid = base.refined(factor);
        const PrincipalField field(chart, grid, opts);
        const ResidualReport r = identity == StencilIdentity::codazzi_normal
                                     ? check_codazzi_normal(field, std::numeric_limits<double>::infinity())
                                     : check_connection_formula(field, std::numeric_limits<double>::infinity());
        if (r.points == 0) throw Error(ErrorKind::numerical, "convergence study evaluated no points");
        study.resolutions.push_back(grid.counts()[0]);
        study.spacings.push_back(grid.spacing(0));
        study.max_residuals.push_back(r.max);
    }
    const auto m = static_cast<double>(levels);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < levels; ++k) {
        const double x = std::log(study.spacings[static_cast<std::size_t>(k)]);
        const double y = std::log(study.max_residuals[static_cast<std::size_t>(k)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    study.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return study;
}

void write_residual_csv(std::ostream& out, const ResidualReport& report, int n) {
    for (int i = 0; i < n; ++i) out << 'u' << (i + 1) << ',';
    out << "residual\n";
    for (const auto& s : report.samples) {
        for (int i = 0; i < n; ++i) out << fmt::format("{:.17g},", s.u[i]);
        out << fmt::format("{:.17g}\n", s.residual);
    }
}

}  // namespace flatnormal
