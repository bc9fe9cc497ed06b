// Acceptance run: one PASS/FAIL line per criterion, exit 1 on any failure.

#include "flatnormal/catalog.hpp"
#include "flatnormal/coords.hpp"
#include "flatnormal/curvature.hpp"
#include "flatnormal/fundamental.hpp"
#include "flatnormal/growth.hpp"
#include "flatnormal/report.hpp"
#include "flatnormal/sine_gordon.hpp"
#include "flatnormal/verifiers.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace flatnormal;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void expect(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(fmt::format("{}{}", ok ? "" : "!", what));
    }
};

std::string g(double v) { return fmt::format("{:.3g}", v); }

const ResidualReport& find(const CoordsReport& r, const std::string& name) {
    for (const auto& q : r.reports)
        if (q.identity == name) return q;
    throw std::runtime_error("missing report " + name);
}

bool all_chain(const GrowthReport& rep, Verdict v) {
    for (const auto& row : rep.rows)
        for (const ChainCheck* c : {&row.length, &row.distance, &row.balls, &row.volume_bound})
            if (c->verdict != v) return false;
    return !rep.rows.empty();
}

Outcome gauss_identity() {
    Outcome o;
    const auto e = pseudosphere();
    const auto fd_chart = e.chart.with_engine(Engine::fd);
    const auto start = std::chrono::steady_clock::now();
    const auto ad = check_gauss(e.chart, verification_grid(e.chart, 257));
    const auto fd = check_gauss(fd_chart, verification_grid(fd_chart, 257));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.expect(ad.verdict != Verdict::skipped && ad.max <= 1e-8, "ad " + g(ad.max));
    o.expect(fd.verdict != Verdict::skipped && fd.max <= 1e-4, "fd " + g(fd.max));
    o.expect(seconds <= 10.0, fmt::format("{:.2f}s", seconds));
    return o;
}

Outcome codazzi_connection() {
    Outcome o;
    for (const auto& e : {pseudosphere(), dini(1.0, 0.5)}) {
        const PrincipalField field(e.chart, verification_grid(e.chart, 129));
        const auto c1 = check_codazzi_normal(field, 1e-4);
        const auto nn = check_connection_formula(field, 1e-4);
        o.expect(c1.passed() && c1.points > 0, e.name + " codazzi " + g(c1.max));
        o.expect(nn.passed() && nn.points > 0, e.name + " connection " + g(nn.max));
        for (auto id : {StencilIdentity::codazzi_normal, StencilIdentity::connection}) {
            const auto s = convergence_study(e.chart, id, 17);
            o.expect(s.slope >= 3.5, e.name + " slope " + g(s.slope));
        }
    }
    return o;
}

Outcome g0_flatness() {
    Outcome o;
    for (const auto& e : {pseudosphere(), dini(1.0, 0.5)}) {
        const auto r = check_g0_flat(e.chart, verification_grid(e.chart, 65), 1e-3);
        o.expect(r.passed() && r.points > 0, e.name + " " + g(r.max));
    }
    const auto clifford = clifford_torus_s3(pi / 4);
    const auto r = check_g0_flat(clifford.chart, verification_grid(clifford.chart, 65), 1e-8);
    o.expect(r.passed() && r.points > 0, "clifford " + g(r.max));
    return o;
}

Outcome principal_coordinates() {
    Outcome o;
    for (const auto& e : {pseudosphere(), clifford_torus_s3(pi / 4)}) {
        const auto r = principal_coordinates_report(e.chart, e.anchor);
        o.expect(!r.skipped, e.name + " ran");
        if (r.skipped) continue;
        const auto& comm = find(r, "commutator");
        const auto& hom = find(r, "homomorphism");
        const auto& pull = find(r, "pullback_g0");
        const auto& trip = find(r, "round_trip");
        o.expect(comm.max <= 1e-4, e.name + " commutator " + g(comm.max));
        o.expect(hom.max <= 1e-6 && hom.points == 100, e.name + " homomorphism " + g(hom.max));
        o.expect(pull.max <= 1e-3 && pull.points > 0, e.name + " pullback " + g(pull.max));
        o.expect(trip.max <= 1e-8, e.name + " round trip " + g(trip.max));
    }
    return o;
}

Outcome inequality_chain() {
    Outcome o;
    const auto ps = pseudosphere();
    const auto rep = growth_report(ps.chart, ps.anchor);
    o.expect(rep.chain_enabled && all_chain(rep, Verdict::pass), fmt::format("pseudosphere {} rows", rep.rows.size()));
    const auto d = dini(1.0, 0.5);
    const auto drep = growth_report(d.chart, d.anchor);
    o.expect(drep.chain_enabled && all_chain(drep, Verdict::pass), fmt::format("dini {} rows", drep.rows.size()));
    double error = 0.0;
    for (const auto* r : {&rep, &drep})
        for (const auto& row : r->rows) error = std::max(error, row.stencil_error);
    o.details.push_back("stencil error " + g(error));
    return o;
}

Outcome hyperbolic_oracles() {
    Outcome o;
    const auto e = hyperbolic_plane(-1.0);
    const Grid grid = anchored_grid(e.chart.domain, e.anchor, 513);
    const auto metric =
        sample_lattice_metric(grid, [&](const Eigen::VectorXd& u) { return first_fundamental_form(e.chart, u); });
    const auto dist = distance_field(metric, grid.nearest(e.anchor), DistanceMethod::fast_marching);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double exact = std::acosh(std::sqrt(1.0 + grid.point(i).squaredNorm()));
        if (exact < 0.1 || exact > 3.0) continue;
        worst = std::max(worst, std::abs(dist.values[i] - exact) / exact);
    }
    o.expect(worst <= 0.03, "distance " + g(worst));
    double vol_worst = 0.0;
    for (double r : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto vol = ball_volume(metric, dist, r);
        const double exact = 2.0 * pi * (std::cosh(r) - 1.0);
        vol_worst = std::max(vol_worst, vol.truncated ? 1.0 : std::abs(vol.volume - exact) / exact);
    }
    o.expect(vol_worst <= 0.02, "volume " + g(vol_worst));
    std::vector<double> rs;
    std::vector<double> ref;
    for (int k = 0; k <= 12; ++k) {
        rs.push_back(3.0 + 0.25 * k);
        ref.push_back(space_form_ball_volume(2, -1.0, rs.back()));
    }
    const auto fit = fit_exponential(rs, ref, 3.0, 6.0);
    o.expect(std::abs(fit.ell - 1.0) <= 0.1, "ell " + g(fit.ell));
    return o;
}

Outcome guards() {
    Outcome o;
    const auto sphere = sphere_negative_control(1.0);
    o.expect(check_gauss(sphere.chart, verification_grid(sphere.chart, 33)).verdict == Verdict::skipped,
             "sphere gauss skipped");
    GrowthOptions opts;
    opts.resolution = 33;
    opts.radii = {0.1, 0.2, 0.3, 0.4};
    const auto srep = growth_report(sphere.chart, sphere.anchor, opts);
    o.expect(!srep.chain_enabled && all_chain(srep, Verdict::skipped), "sphere growth skipped");
    o.expect(principal_coordinates_report(sphere.chart, sphere.anchor).skipped, "sphere coords skipped");

    const auto torus = product_torus_r4(1.0, 2.0);
    o.expect(!growth_report(torus.chart, torus.anchor, opts).chain_enabled, "torus refused");
    o.expect(principal_coordinates_report(torus.chart, torus.anchor).skipped, "torus coords refused");
    opts.exploratory = true;
    o.expect(growth_report(torus.chart, torus.anchor, opts).chain_enabled, "torus exploratory");
    return o;
}

Outcome sine_gordon() {
    Outcome o;
    const auto field = one_soliton();
    const auto e = sine_gordon_surface(field);
    const Box box = e.chart.usable_domain();
    double metric_err = 0.0;
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) {
            Eigen::VectorXd u(2);
            u << box[0].lo + (a + 0.5) / 9.0 * box[0].span(), box[1].lo + (b + 0.5) / 9.0 * box[1].span();
            const Eigen::MatrixXd m = first_fundamental_form(e.chart, u);
            const double c = std::cos(field.phi(u[0], u[1]));
            metric_err = std::max({metric_err, std::abs(m(0, 0) - 1.0), std::abs(m(1, 1) - 1.0),
                                   std::abs(m(0, 1) - c)});
        }
    o.expect(metric_err <= 1e-3, "metric " + g(metric_err));
    const MetricSampler metric = [&](const Eigen::VectorXd& x) { return first_fundamental_form(e.chart, x); };
    double k_err = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            Eigen::VectorXd u(2);
            u << box[0].lo + (a + 1) / 4.0 * box[0].span(), box[1].lo + (b + 1) / 4.0 * box[1].span();
            const auto R = riemann_curvature_at(metric, u, {0.02, 0.02});
            k_err = std::max(k_err, std::abs(sectional_curvature(R, metric(u), 0, 1) + 1.0));
        }
    o.expect(k_err <= 1e-2, "curvature " + g(k_err));
    return o;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "flatnormal_acceptance";
    using Runner = int (*)(const RunConfig&, std::ostream&);
    const std::vector<std::pair<Runner, std::vector<std::string>>> commands{
        {run_verify, {"verify_gauss.csv", "verify_codazzi_normal.csv", "verify_g0_flat.csv"}},
        {run_growth, {"growth.csv"}},
        {run_coords, {"flow.csv"}}};
    for (const auto& [run, files] : commands) {
        std::vector<std::string> first;
        for (int pass = 0; pass < 2; ++pass) {
            RunConfig c;
            c.chart_name = "dini";
            c.resolution = {65};
            c.directory = (root / std::to_string(pass)).string();
            fs::remove_all(c.directory);
            std::ostringstream console;
            run(c, console);
            for (std::size_t k = 0; k < files.size(); ++k) {
                const std::string bytes = slurp(fs::path(c.directory) / files[k]);
                if (pass == 0) first.push_back(bytes);
                else o.expect(!bytes.empty() && bytes == first[k], files[k]);
            }
        }
    }
    fs::remove_all(root);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"gauss_identity", gauss_identity},
        {"codazzi_connection", codazzi_connection},
        {"g0_flatness", g0_flatness},
        {"principal_coordinates", principal_coordinates},
        {"inequality_chain", inequality_chain},
        {"hyperbolic_oracles", hyperbolic_oracles},
        {"guards", guards},
        {"sine_gordon_patch", sine_gordon},
        {"determinism", determinism},
    };
    bool all = true;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.details.push_back(std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::string detail;
        for (const auto& d : o.details) detail += (detail.empty() ? "" : "; ") + d;
        std::cout << fmt::format("{} {} {} # {}", o.pass ? "PASS" : "FAIL", index, name, detail) << std::endl;
    }
    return all ? 0 : 1;
}
