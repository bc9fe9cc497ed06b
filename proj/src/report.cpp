#include "flatnormal/report.hpp"

#include "flatnormal/catalog.hpp"
#include "flatnormal/coords.hpp"
#include "flatnormal/error.hpp"
#include "flatnormal/expression.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <functional>
#include <sstream>

namespace flatnormal {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::argument, fmt::format("cannot read '{}'", path));
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::ofstream open_output(const RunConfig& config, const std::string& file) {
    const fs::path dir(config.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::argument, fmt::format("cannot write '{}'", (dir / file).string()));
    return out;
}

std::string join(const std::vector<double>& v, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{}", i ? sep : "", v[i]);
    return out;
}

std::string grid_text(const std::vector<int>& counts) {
    std::string out;
    for (std::size_t i = 0; i < counts.size(); ++i) out += fmt::format("{}{}", i ? "x" : "", counts[i]);
    return out;
}

void write_header(std::ostream& out, const std::string& command, const RunConfig& config, const ResolvedChart& chart,
                  const std::string& grid, const std::string& tolerances) {
    out << "# flatnormal " << command << "\n";
    out << "# chart " << chart.description << "\n";
    out << "# anchor " << join(std::vector<double>(chart.anchor.data(), chart.anchor.data() + chart.anchor.size()))
        << "\n";
    out << "# engine " << to_string(chart.chart.engine()) << "\n";
    out << "# seed " << config.seed << "\n";
    out << "# grid " << grid << "\n";
    out << "# tolerances " << tolerances << "\n";
}

int verdict_exit(const std::vector<Verdict>& verdicts) {
    for (Verdict v : verdicts)
        if (v == Verdict::fail || v == Verdict::indeterminate) return exit_identity_failure;
    return exit_success;
}

/// Runs `body`, turning errors into a diagnostic and an exit code.
int guarded(std::ostream& console, const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        console << "ERROR " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        console << "ERROR " << e.what() << "\n";
        return exit_numerical;
    }
}

std::vector<int> axis_counts(const RunConfig& config, int n, int fallback) {
    if (config.resolution.empty()) return std::vector<int>(static_cast<std::size_t>(n), fallback);
    if (config.resolution.size() == 1) return std::vector<int>(static_cast<std::size_t>(n), config.resolution[0]);
    if (static_cast<int>(config.resolution.size()) != n)
        throw Error(ErrorKind::parse,
                    fmt::format("config: resolution has {} entries for a {}-dimensional chart",
                                config.resolution.size(), n));
    return config.resolution;
}

PrincipalOptions principal_options(const RunConfig& config) {
    PrincipalOptions p;
    p.seed = config.seed;
    p.exploratory = config.exploratory;
    return p;
}

}  // namespace

int exit_code_for(const Error& error) {
    switch (error.kind()) {
        case ErrorKind::parse:
        case ErrorKind::argument: return exit_usage;
        default: return exit_numerical;
    }
}

ResolvedChart resolve_chart(const RunConfig& config) {
    ResolvedChart out;
    if (!config.expression.empty()) {
        out.chart = parse_chart_file(read_file(config.expression), fs::path(config.expression).stem().string());
        out.description = fmt::format("{} (expression {})", out.chart.name, config.expression);
        out.anchor = Eigen::VectorXd(out.chart.n);
        for (int k = 0; k < out.chart.n; ++k) {
            const auto& axis = out.chart.domain[static_cast<std::size_t>(k)];
            out.anchor[k] = 0.5 * (axis.lo + axis.hi);
        }
    } else {
        CatalogEntry entry = make_entry(config.chart_name, config.chart_params);
        out.chart = entry.chart;
        out.anchor = entry.anchor;
        out.description = config.chart_params.empty()
                              ? entry.name
                              : fmt::format("{} ({})", entry.name, join(config.chart_params, " "));
    }
    out.chart = out.chart.with_engine(config.engine);
    if (config.anchor) {
        if (static_cast<int>(config.anchor->size()) != out.chart.n)
            throw Error(ErrorKind::parse, fmt::format("config: anchor has {} coordinates for a {}-dimensional chart",
                                                      config.anchor->size(), out.chart.n));
        out.anchor = Eigen::Map<const Eigen::VectorXd>(config.anchor->data(), out.chart.n);
    }
    return out;
}

std::string summary_line(const ResidualReport& report) {
    std::string line = fmt::format("{} {} {:.17g} {} {}", to_string(report.verdict), report.identity, report.max,
                                   report.tolerance, report.points);
    if (!report.note.empty()) line += " # " + report.note;
    return line;
}

Verdict combine(const std::vector<Verdict>& verdicts) {
    bool any_pass = false;
    bool any_indeterminate = false;
    for (Verdict v : verdicts) {
        if (v == Verdict::fail) return Verdict::fail;
        any_indeterminate |= v == Verdict::indeterminate;
        any_pass |= v == Verdict::pass;
    }
    if (any_indeterminate) return Verdict::indeterminate;
    return any_pass ? Verdict::pass : Verdict::skipped;
}

void write_growth_summary(std::ostream& out, const GrowthReport& report) {
    if (report.fit) {
        out << fmt::format("FIT k={:.17g} ell={:.17g} R2={:.17g} window={:.17g},{:.17g} rows={}\n", report.fit->k,
                           report.fit->ell, report.fit->r_squared, report.fit->r_lo, report.fit->r_hi,
                           report.fit->rows);
    } else {
        out << "FIT unavailable\n";
    }
    struct Link {
        const char* name;
        ChainCheck GrowthRow::*check;
    };
    const Link links[] = {{"length_comparison", &GrowthRow::length},
                          {"distance_comparison", &GrowthRow::distance},
                          {"ball_containment", &GrowthRow::balls},
                          {"volume_bound", &GrowthRow::volume_bound}};
    for (const auto& link : links) {
        std::vector<Verdict> verdicts;
        double worst = std::numeric_limits<double>::infinity();
        double error = 0.0;
        int rows = 0;
        for (const auto& row : report.rows) {
            const ChainCheck& c = row.*link.check;
            verdicts.push_back(c.verdict);
            if (c.verdict == Verdict::skipped) continue;
            worst = std::min(worst, c.margin);
            error = std::max(error, row.stencil_error);
            ++rows;
        }
        const Verdict v = combine(verdicts);
        if (rows == 0) worst = 0.0;
        out << fmt::format("{} {} {:.17g} {:.17g} {}", to_string(v), link.name, worst, error, rows);
        if (v == Verdict::skipped && !report.note.empty()) out << " # " << report.note;
        out << "\n";
    }
    if (!report.note.empty()) out << "NOTE " << report.note << "\n";
    for (const auto& w : report.warnings) out << "WARN " << w << "\n";
}

int run_verify(const RunConfig& config, std::ostream& console) {
    return guarded(console, [&] {
        const ResolvedChart rc = resolve_chart(config);
        const ImmersionChart& chart = rc.chart;
        const std::vector<int> counts = axis_counts(config, chart.n, 129);
        const Grid grid(chart.usable_domain(), counts);
        const double gauss_tol = config.gauss.value_or(chart.default_tolerance());

        VerifierOptions vo;
        vo.principal = principal_options(config);

        std::vector<ResidualReport> reports;
        auto attempt = [&](const std::string& identity, double tol, const std::function<ResidualReport()>& run) {
            try {
                reports.push_back(run());
            } catch (const Error& e) {
                ResidualReport r;
                r.identity = identity;
                r.tolerance = tol;
                r.verdict = e.kind() == ErrorKind::hypothesis ? Verdict::skipped : Verdict::fail;
                r.note = fmt::format("{}: {}", to_string(e.kind()), e.what());
                reports.push_back(r);
                if (r.verdict == Verdict::fail) throw;
            }
        };
        int code = exit_success;
        try {
            attempt("gauss", gauss_tol, [&] { return check_gauss(chart, grid, vo); });
            const PrincipalField field(chart, grid, vo);
            attempt("codazzi_normal", config.codazzi, [&] { return check_codazzi_normal(field, config.codazzi); });
            if (chart.n >= 3)
                attempt("codazzi_triple", config.codazzi, [&] { return check_codazzi_triple(field, config.codazzi); });
            attempt("connection", config.connection,
                    [&] { return check_connection_formula(field, config.connection); });
            attempt("g0_flat", config.g0_flat, [&] { return check_g0_flat(chart, grid, config.g0_flat, vo); });
            attempt("intrinsic_curvature", config.intrinsic,
                    [&] { return check_intrinsic_curvature(chart, grid, config.intrinsic); });
        } catch (const Error& e) {
            code = exit_code_for(e) == exit_usage ? exit_usage : exit_numerical;
        }

        for (const auto& r : reports) {
            if (r.samples.empty()) continue;
            auto csv = open_output(config, fmt::format("verify_{}.csv", r.identity));
            write_residual_csv(csv, r, chart.n);
        }
        std::ostringstream summary;
        write_header(summary, "verify", config, rc, grid_text(counts),
                     fmt::format("gauss={} codazzi={} connection={} g0_flat={} intrinsic={}", gauss_tol,
                                 config.codazzi, config.connection, config.g0_flat, config.intrinsic));
        std::vector<Verdict> verdicts;
        for (const auto& r : reports) {
            summary << summary_line(r) << "\n";
            verdicts.push_back(r.verdict);
        }
        auto file = open_output(config, "verify_summary.txt");
        file << summary.str();
        console << summary.str();
        return code != exit_success ? code : verdict_exit(verdicts);
    });
}

int run_growth(const RunConfig& config, std::ostream& console) {
    return guarded(console, [&] {
        const ResolvedChart rc = resolve_chart(config);
        GrowthOptions go;
        const std::vector<int> counts = axis_counts(config, rc.chart.n, go.resolution);
        for (int c : counts)
            if (c != counts.front())
                throw Error(ErrorKind::parse, "config: growth needs the same resolution on every axis");
        go.resolution = counts.front();
        go.radii = config.radii;
        go.window = config.window;
        go.exploratory = config.exploratory;
        go.method = config.method;
        const GrowthReport report = growth_report(rc.chart, rc.anchor, go);

        auto csv = open_output(config, "growth.csv");
        write_growth_csv(csv, report);

        std::ostringstream summary;
        write_header(summary, "growth", config, rc, fmt::format("{} anchored, {}", grid_text(counts), to_string(report.method)),
                     "stencil error measured per radius");
        summary << "# radii " << join(config.radii) << "\n";
        write_growth_summary(summary, report);
        auto file = open_output(config, "growth_summary.txt");
        file << summary.str();
        console << summary.str();

        std::vector<Verdict> verdicts;
        for (const auto& row : report.rows)
            for (const ChainCheck* c : {&row.length, &row.distance, &row.balls, &row.volume_bound})
                verdicts.push_back(c->verdict);
        return verdict_exit(verdicts);
    });
}

int run_coords(const RunConfig& config, std::ostream& console) {
    return guarded(console, [&] {
        const ResolvedChart rc = resolve_chart(config);
        CoordsOptions co;
        co.flow.step = config.flow_step;
        co.flow.points = config.flow_points;
        co.flow.half_widths = config.flow_half_widths.empty()
                                  ? std::vector<double>(static_cast<std::size_t>(rc.chart.n), 0.5)
                                  : config.flow_half_widths;
        if (static_cast<int>(co.flow.half_widths.size()) != rc.chart.n)
            throw Error(ErrorKind::parse, "config: flow_half_widths needs one entry per axis");
        co.flow.principal = principal_options(config);
        co.commutator_tolerance = config.commutator;
        co.homomorphism_tolerance = config.homomorphism;
        co.pullback_tolerance = config.pullback;
        co.round_trip_tolerance = config.round_trip;
        co.distance_tolerance = config.distance;
        co.seed = config.seed;
        const CoordsReport report = principal_coordinates_report(rc.chart, rc.anchor, co);

        if (report.flow) {
            auto csv = open_output(config, "flow.csv");
            write_flow_csv(csv, *report.flow);
        }
        std::ostringstream summary;
        const std::string box =
            report.flow ? fmt::format("t-box {} with {} points, step {}", join(report.flow->half_widths, " x "),
                                      config.flow_points, config.flow_step)
                        : std::string("t-box unavailable");
        write_header(summary, "coords", config, rc, box,
                     fmt::format("commutator={} homomorphism={} pullback={} round_trip={} distance={}",
                                 config.commutator, config.homomorphism, config.pullback, config.round_trip,
                                 config.distance));
        std::vector<Verdict> verdicts;
        for (const auto& r : report.reports) {
            summary << summary_line(r) << "\n";
            verdicts.push_back(r.verdict);
        }
        if (!report.note.empty()) summary << "NOTE " << report.note << "\n";
        for (const auto& w : report.warnings) summary << "WARN " << w << "\n";
        auto file = open_output(config, "coords_summary.txt");
        file << summary.str();
        console << summary.str();
        return verdict_exit(verdicts);
    });
}

}  // namespace flatnormal
