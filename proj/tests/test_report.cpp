#include "flatnormal/report.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace flatnormal;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "flatnormal_report_tests" / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

RunConfig catalog_config(const std::string& chart, const std::string& dir) {
    RunConfig c;
    c.chart_name = chart;
    c.directory = scratch(dir).string();
    return c;
}

int count_lines_starting(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("verify on the pseudosphere passes every identity") {
    RunConfig c = catalog_config("pseudosphere", "verify_ps");
    std::ostringstream console;
    CHECK(run_verify(c, console) == exit_success);
    const std::string text = console.str();
    CHECK(count_lines_starting(text, "PASS ") == 5);
    CHECK(count_lines_starting(text, "PASS codazzi_triple") == 0);
    CHECK(text.find("# engine ad") != std::string::npos);
    CHECK(text.find("# grid 129x129") != std::string::npos);
    CHECK(slurp(fs::path(c.directory) / "verify_summary.txt") == text);
    CHECK(fs::exists(fs::path(c.directory) / "verify_gauss.csv"));
}

TEST_CASE("verify skips identities whose hypotheses fail") {
    RunConfig c = catalog_config("sphere_negative_control", "verify_sphere");
    std::ostringstream console;
    CHECK(run_verify(c, console) == exit_success);
    CHECK(count_lines_starting(console.str(), "SKIPPED ") >= 1);
    CHECK(count_lines_starting(console.str(), "FAIL ") == 0);
}

TEST_CASE("verify reports parse errors with exit 2") {
    RunConfig c = catalog_config("pseudosphere", "verify_broken");
    c.chart_name.clear();
    c.expression = std::string(FLATNORMAL_TEST_DATA) + "/broken.chart";
    std::ostringstream console;
    CHECK(run_verify(c, console) == exit_usage);
    CHECK(console.str().find("ERROR parse") != std::string::npos);

    RunConfig unknown = catalog_config("no_such_surface", "verify_unknown");
    std::ostringstream out2;
    CHECK(run_verify(unknown, out2) == exit_usage);
}

TEST_CASE("verify accepts an expression chart") {
    RunConfig c = catalog_config("pseudosphere", "verify_expression");
    c.chart_name.clear();
    c.expression = std::string(FLATNORMAL_TEST_DATA) + "/pseudosphere.chart";
    c.resolution = {65};
    std::ostringstream console;
    CHECK(run_verify(c, console) == exit_success);
    CHECK(count_lines_starting(console.str(), "PASS ") == 5);
    CHECK(console.str().find("(expression") != std::string::npos);
}

TEST_CASE("an anchor outside the domain is a numerical error") {
    RunConfig c = catalog_config("pseudosphere", "coords_outside");
    c.anchor = std::vector<double>{-5.0, 1.0};
    std::ostringstream console;
    CHECK(run_coords(c, console) == exit_numerical);
    CHECK(console.str().find("ERROR") != std::string::npos);

    RunConfig wrong = catalog_config("pseudosphere", "coords_wrong_size");
    wrong.anchor = std::vector<double>{1.0};
    std::ostringstream out2;
    CHECK(run_coords(wrong, out2) == exit_usage);
}

TEST_CASE("growth on the pseudosphere") {
    RunConfig c = catalog_config("pseudosphere", "growth_ps");
    c.resolution = {129};
    std::ostringstream console;
    CHECK(run_growth(c, console) == exit_success);
    const std::string text = console.str();
    CHECK(count_lines_starting(text, "FIT k=") == 1);
    CHECK(count_lines_starting(text, "PASS ") == 4);
    CHECK(text.find("WARN ball of radius 2 reaches the grid boundary") != std::string::npos);

    std::istringstream csv(slurp(fs::path(c.directory) / "growth.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "r,S,psi,vol,bound,ref_vol");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::stringstream fields(line);
        std::vector<double> v;
        std::string cell;
        while (std::getline(fields, cell, ',')) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 6);
        CHECK(v[4] >= v[3]);
    }
    CHECK(rows == 8);

    RunConfig mixed = c;
    mixed.resolution = {129, 65};
    std::ostringstream out2;
    CHECK(run_growth(mixed, out2) == exit_usage);
}

TEST_CASE("growth summary of a synthetic exponential report") {
    GrowthReport report;
    report.C = 1.0;
    for (int i = 1; i <= 8; ++i) {
        GrowthRow row;
        row.r = 0.25 * i;
        row.S = std::pow(3.0 * std::exp(2.0 * row.r), 2);
        row.length = ChainCheck{margin_verdict(0.1, 0.01), 0.1};
        row.stencil_error = 0.01;
        report.rows.push_back(row);
    }
    std::vector<double> rs;
    std::vector<double> roots;
    for (const auto& row : report.rows) {
        rs.push_back(row.r);
        roots.push_back(std::sqrt(row.S));
    }
    report.fit = fit_exponential(rs, roots, 0.5, 2.0);
    std::ostringstream out;
    write_growth_summary(out, report);
    std::string first;
    std::getline(std::istringstream(out.str()) >> std::ws, first);
    double k = 0;
    double ell = 0;
    REQUIRE(std::sscanf(first.c_str(), "FIT k=%lf ell=%lf", &k, &ell) == 2);
    CHECK(std::abs(k - 3.0) < 1e-10);
    CHECK(std::abs(ell - 2.0) < 1e-10);
    CHECK(out.str().find("PASS length_comparison 0.10000000000000001 0.01 8") != std::string::npos);
    CHECK(out.str().find("SKIPPED volume_bound") != std::string::npos);
}

TEST_CASE("coords on the pseudosphere") {
    RunConfig c = catalog_config("pseudosphere", "coords_ps");
    std::ostringstream console;
    CHECK(run_coords(c, console) == exit_success);
    CHECK(count_lines_starting(console.str(), "FAIL ") == 0);
    CHECK(console.str().find("PASS pullback") != std::string::npos);
    CHECK(fs::exists(fs::path(c.directory) / "flow.csv"));
}

TEST_CASE("zero t-box gives the anchor alone") {
    RunConfig c = catalog_config("pseudosphere", "coords_zero");
    c.flow_half_widths = {0.0, 0.0};
    std::ostringstream console;
    run_coords(c, console);
    std::istringstream csv(slurp(fs::path(c.directory) / "flow.csv"));
    std::string header;
    std::string row;
    std::string extra;
    std::getline(csv, header);
    REQUIRE(std::getline(csv, row));
    CHECK_FALSE(std::getline(csv, extra));
    std::vector<double> v;
    std::stringstream fields(row);
    std::string cell;
    while (std::getline(fields, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 4);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
    CHECK(v[2] == doctest::Approx(std::asinh(1.0)).epsilon(1e-15));
    CHECK(v[3] == doctest::Approx(3.141592653589793).epsilon(1e-15));
}

TEST_CASE("an oversized t-box shrinks with a warning") {
    RunConfig c = catalog_config("pseudosphere", "coords_big");
    c.flow_half_widths = {5.0, 5.0};
    std::ostringstream console;
    CHECK(run_coords(c, console) == exit_success);
    CHECK(count_lines_starting(console.str(), "WARN ") >= 1);
}

TEST_CASE("repeated runs write identical files") {
    for (const char* command : {"verify", "growth", "coords"}) {
        std::string first;
        for (int run = 0; run < 2; ++run) {
            RunConfig c = catalog_config("dini", std::string("determinism_") + command + std::to_string(run));
            c.resolution = {65};
            std::ostringstream console;
            const std::string cmd = command;
            std::string file;
            if (cmd == "verify") {
                run_verify(c, console);
                file = "verify_gauss.csv";
            } else if (cmd == "growth") {
                run_growth(c, console);
                file = "growth.csv";
            } else {
                run_coords(c, console);
                file = "flow.csv";
            }
            const std::string bytes = slurp(fs::path(c.directory) / file);
            CHECK_FALSE(bytes.empty());
            if (run == 0) first = bytes;
            else CHECK_MESSAGE(bytes == first, command);
        }
    }
}

TEST_CASE("combining verdicts") {
    using V = Verdict;
    CHECK(combine({}) == V::skipped);
    CHECK(combine({V::skipped, V::skipped}) == V::skipped);
    CHECK(combine({V::skipped, V::pass}) == V::pass);
    CHECK(combine({V::pass, V::indeterminate}) == V::indeterminate);
    CHECK(combine({V::indeterminate, V::fail, V::pass}) == V::fail);
}

TEST_CASE("exit codes by error kind") {
    CHECK(exit_code_for(Error(ErrorKind::parse, "x")) == exit_usage);
    CHECK(exit_code_for(Error(ErrorKind::argument, "x")) == exit_usage);
    CHECK(exit_code_for(Error(ErrorKind::domain, "x")) == exit_numerical);
    CHECK(exit_code_for(Error(ErrorKind::numerical, "x")) == exit_numerical);
}
