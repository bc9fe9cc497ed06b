#pragma once

#include "flatnormal/chart.hpp"
#include "flatnormal/config.hpp"
#include "flatnormal/error.hpp"
#include "flatnormal/growth.hpp"
#include "flatnormal/verifiers.hpp"

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

namespace flatnormal {

/// Process exit codes of the command-line runs.
enum ExitCode : int {
    exit_success = 0,         // everything passed, or skipped by a guard
    exit_identity_failure = 1,
    exit_usage = 2,           // usage, configuration or parse error
    exit_numerical = 3,
};

/// ErrorKind to exit code: parse/argument -> 2, anything else -> 3.
int exit_code_for(const Error& error);

struct ResolvedChart {
    ImmersionChart chart;
    Eigen::VectorXd anchor;
    std::string description;  // catalog name and parameters, or the expression file
};

/// Catalog entry or expression file, with the configured engine applied.
ResolvedChart resolve_chart(const RunConfig& config);

/// `VERDICT identity max tolerance points`, with ` # note` when present.
std::string summary_line(const ResidualReport& report);

/// Worst verdict over rows: fail, indeterminate, pass, then skipped.
Verdict combine(const std::vector<Verdict>& verdicts);

/// Summary block of a growth report (fit, chain verdicts, warnings).
void write_growth_summary(std::ostream& out, const GrowthReport& report);

/// Each run writes its CSVs and `<command>_summary.txt` into the output
/// directory and echoes the summary to `console`.
int run_verify(const RunConfig& config, std::ostream& console);
int run_growth(const RunConfig& config, std::ostream& console);
int run_coords(const RunConfig& config, std::ostream& console);

}  // namespace flatnormal
