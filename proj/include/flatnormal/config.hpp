#pragma once

#include "flatnormal/chart.hpp"
#include "flatnormal/growth.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flatnormal {

struct RunConfig {
    // [chart]
    std::string chart_name;            // catalog entry; empty when `expression` is set
    std::vector<double> chart_params;  // positional catalog parameters
    std::string expression;            // chart file path
    std::optional<std::vector<double>> anchor;
    bool exploratory = false;

    // [grid]
    std::vector<int> resolution;  // one entry for all axes or one per axis; empty: module defaults
    Engine engine = Engine::ad;
    std::uint64_t seed = 20240601;
    std::vector<double> flow_half_widths;  // empty: 0.5 on every axis
    int flow_points = 21;
    double flow_step = 0.005;

    // [tolerances]
    std::optional<double> gauss;  // empty: engine default
    double codazzi = 1e-4;
    double connection = 1e-4;
    double g0_flat = 1e-3;
    double intrinsic = 1e-2;
    double commutator = 1e-4;
    double homomorphism = 1e-6;
    double pullback = 1e-3;
    double round_trip = 1e-8;
    double distance = 1e-3;

    // [growth]
    std::vector<double> radii{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    std::optional<std::pair<double, double>> window;
    DistanceMethod method = DistanceMethod::fast_marching;

    // [output]
    std::string directory = "out";

    bool operator==(const RunConfig&) const = default;
};

/// INI-style text: `[section]` headers, `key = value` lines, `#` comments,
/// comma-separated lists. Unknown keys are errors when `strict`, otherwise
/// they are appended to `warnings`. Throws Error(parse) with the line number.
RunConfig parse_config(const std::string& text, bool strict = true, std::vector<std::string>* warnings = nullptr);

/// Throws Error(parse) when an invariant is violated.
void validate_config(const RunConfig& config);

/// Canonical text form; parse_config(dump_config(c)) == c.
std::string dump_config(const RunConfig& config);

}  // namespace flatnormal
