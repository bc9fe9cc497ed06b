#include "flatnormal/config.hpp"

#include "flatnormal/error.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace flatnormal {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE)
        throw Error(ErrorKind::parse, fmt::format("config line {}: '{}' is not a number", line, s));
    return v;
}

long long to_integer(const std::string& s, int line) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno == ERANGE)
        throw Error(ErrorKind::parse, fmt::format("config line {}: '{}' is not an integer", line, s));
    return v;
}

std::vector<double> to_doubles(const std::string& s, int line) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(to_double(item, line));
    return out;
}

bool to_bool(const std::string& s, int line) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw Error(ErrorKind::parse, fmt::format("config line {}: '{}' is not a boolean", line, s));
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"chart.name", [](RunConfig& c, const std::string& v, int) { c.chart_name = v; }},
        {"chart.params", [](RunConfig& c, const std::string& v, int l) { c.chart_params = to_doubles(v, l); }},
        {"chart.expression", [](RunConfig& c, const std::string& v, int) { c.expression = v; }},
        {"chart.anchor", [](RunConfig& c, const std::string& v, int l) { c.anchor = to_doubles(v, l); }},
        {"chart.exploratory", [](RunConfig& c, const std::string& v, int l) { c.exploratory = to_bool(v, l); }},
        {"grid.resolution",
         [](RunConfig& c, const std::string& v, int l) {
             c.resolution.clear();
             for (const auto& item : split_list(v)) c.resolution.push_back(static_cast<int>(to_integer(item, l)));
         }},
        {"grid.engine",
         [](RunConfig& c, const std::string& v, int l) {
             if (v == "ad") c.engine = Engine::ad;
             else if (v == "fd") c.engine = Engine::fd;
             else throw Error(ErrorKind::parse, fmt::format("config line {}: engine must be ad or fd", l));
         }},
        {"grid.seed",
         [](RunConfig& c, const std::string& v, int l) {
             const long long s = to_integer(v, l);
             if (s < 0) throw Error(ErrorKind::parse, fmt::format("config line {}: seed must be >= 0", l));
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"grid.flow_half_widths",
         [](RunConfig& c, const std::string& v, int l) { c.flow_half_widths = to_doubles(v, l); }},
        {"grid.flow_points",
         [](RunConfig& c, const std::string& v, int l) { c.flow_points = static_cast<int>(to_integer(v, l)); }},
        {"grid.flow_step", [](RunConfig& c, const std::string& v, int l) { c.flow_step = to_double(v, l); }},
        {"tolerances.gauss", [](RunConfig& c, const std::string& v, int l) { c.gauss = to_double(v, l); }},
        {"tolerances.codazzi", [](RunConfig& c, const std::string& v, int l) { c.codazzi = to_double(v, l); }},
        {"tolerances.connection", [](RunConfig& c, const std::string& v, int l) { c.connection = to_double(v, l); }},
        {"tolerances.g0_flat", [](RunConfig& c, const std::string& v, int l) { c.g0_flat = to_double(v, l); }},
        {"tolerances.intrinsic", [](RunConfig& c, const std::string& v, int l) { c.intrinsic = to_double(v, l); }},
        {"tolerances.commutator", [](RunConfig& c, const std::string& v, int l) { c.commutator = to_double(v, l); }},
        {"tolerances.homomorphism",
         [](RunConfig& c, const std::string& v, int l) { c.homomorphism = to_double(v, l); }},
        {"tolerances.pullback", [](RunConfig& c, const std::string& v, int l) { c.pullback = to_double(v, l); }},
        {"tolerances.round_trip", [](RunConfig& c, const std::string& v, int l) { c.round_trip = to_double(v, l); }},
        {"tolerances.distance", [](RunConfig& c, const std::string& v, int l) { c.distance = to_double(v, l); }},
        {"growth.radii", [](RunConfig& c, const std::string& v, int l) { c.radii = to_doubles(v, l); }},
        {"growth.window",
         [](RunConfig& c, const std::string& v, int l) {
             const auto w = to_doubles(v, l);
             if (w.size() != 2)
                 throw Error(ErrorKind::parse, fmt::format("config line {}: window expects 'lo, hi'", l));
             c.window = std::make_pair(w[0], w[1]);
         }},
        {"growth.method",
         [](RunConfig& c, const std::string& v, int l) {
             if (v == "fast_marching") c.method = DistanceMethod::fast_marching;
             else if (v == "graph16") c.method = DistanceMethod::graph16;
             else throw Error(ErrorKind::parse, fmt::format("config line {}: method must be fast_marching or graph16", l));
         }},
        {"output.directory", [](RunConfig& c, const std::string& v, int) { c.directory = v; }},
    };
    return table;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{}", i ? ", " : "", v[i]);
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, bool strict, std::vector<std::string>* warnings) {
    RunConfig config;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(ErrorKind::parse, fmt::format("config line {}: unterminated section header", line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "chart" && section != "grid" && section != "tolerances" && section != "growth" &&
                section != "output")
                throw Error(ErrorKind::parse, fmt::format("config line {}: unknown section [{}]", line_no, section));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::parse, fmt::format("config line {}: expected 'key = value'", line_no));
        if (section.empty())
            throw Error(ErrorKind::parse, fmt::format("config line {}: key outside any section", line_no));
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto setter = setters().find(key);
        if (setter == setters().end()) {
            const std::string message = fmt::format("config line {}: unknown key '{}'", line_no, key);
            if (strict) throw Error(ErrorKind::parse, message);
            if (warnings) warnings->push_back(message);
            continue;
        }
        if (const auto prev = seen.find(key); prev != seen.end())
            throw Error(ErrorKind::parse,
                        fmt::format("config line {}: '{}' already set on line {}", line_no, key, prev->second));
        seen[key] = line_no;
        setter->second(config, value, line_no);
    }
    validate_config(config);
    return config;
}

void validate_config(const RunConfig& c) {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::parse, "config: " + what); };
    if (c.chart_name.empty() == c.expression.empty()) fail("exactly one of chart.name and chart.expression is required");
    if (!c.expression.empty() && !c.chart_params.empty()) fail("chart.params applies to catalog charts only");
    for (int r : c.resolution)
        if (r < 17) fail(fmt::format("resolution {} is below 17", r));
    if (c.radii.empty()) fail("radii must not be empty");
    for (std::size_t i = 0; i < c.radii.size(); ++i) {
        if (!(c.radii[i] > 0.0)) fail("radii must be positive");
        if (i > 0 && !(c.radii[i] > c.radii[i - 1])) fail("radii must be strictly increasing");
    }
    if (c.window && !(c.window->first < c.window->second)) fail("window needs lo < hi");
    for (double tol : {c.codazzi, c.connection, c.g0_flat, c.intrinsic, c.commutator, c.homomorphism, c.pullback,
                       c.round_trip, c.distance})
        if (!(tol > 0.0)) fail("tolerances must be positive");
    if (c.gauss && !(*c.gauss > 0.0)) fail("tolerances must be positive");
    for (double a : c.flow_half_widths)
        if (!(a >= 0.0)) fail("flow half widths must be >= 0");
    if (c.flow_points < 1 || c.flow_points % 2 == 0) fail("flow_points must be odd and positive");
    if (!(c.flow_step > 0.0)) fail("flow_step must be positive");
    if (c.directory.empty()) fail("output directory must not be empty");
}

std::string dump_config(const RunConfig& c) {
    std::string out = "[chart]\n";
    if (!c.chart_name.empty()) out += fmt::format("name = {}\n", c.chart_name);
    if (!c.chart_params.empty()) out += fmt::format("params = {}\n", join(c.chart_params));
    if (!c.expression.empty()) out += fmt::format("expression = {}\n", c.expression);
    if (c.anchor) out += fmt::format("anchor = {}\n", join(*c.anchor));
    out += fmt::format("exploratory = {}\n", c.exploratory);

    out += "\n[grid]\n";
    if (!c.resolution.empty()) {
        std::vector<double> r(c.resolution.begin(), c.resolution.end());
        out += fmt::format("resolution = {}\n", join(r));
    }
    out += fmt::format("engine = {}\n", to_string(c.engine));
    out += fmt::format("seed = {}\n", c.seed);
    if (!c.flow_half_widths.empty()) out += fmt::format("flow_half_widths = {}\n", join(c.flow_half_widths));
    out += fmt::format("flow_points = {}\n", c.flow_points);
    out += fmt::format("flow_step = {}\n", c.flow_step);

    out += "\n[tolerances]\n";
    if (c.gauss) out += fmt::format("gauss = {}\n", *c.gauss);
    out += fmt::format("codazzi = {}\nconnection = {}\ng0_flat = {}\nintrinsic = {}\n", c.codazzi, c.connection,
                       c.g0_flat, c.intrinsic);
    out += fmt::format("commutator = {}\nhomomorphism = {}\npullback = {}\nround_trip = {}\ndistance = {}\n",
                       c.commutator, c.homomorphism, c.pullback, c.round_trip, c.distance);

    out += "\n[growth]\n";
    out += fmt::format("radii = {}\n", join(c.radii));
    if (c.window) out += fmt::format("window = {}, {}\n", c.window->first, c.window->second);
    out += fmt::format("method = {}\n", to_string(c.method));

    out += "\n[output]\n";
    out += fmt::format("directory = {}\n", c.directory);
    return out;
}

}  // namespace flatnormal
