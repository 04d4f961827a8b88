#pragma once

#include "adiabatic/slope.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adiabatic::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kResourceLimit = 3,
    kPrecision = 4,
};

enum class Format { csv, json };

struct Outputs {
    bool exact_count = true;
    bool weyl = true;
    bool asym_closed_form = true;
    bool residual = true;
};

struct SweepSpec {
    Slope slope;
    double lambda = 0.0;
    std::vector<double> h_values;  // sorted descending by make_sweep_spec
    double tie_tolerance = 0.0;
    Outputs outputs;
};

/// Geometric grid from start down to end, `points` values, strictly decreasing.
std::vector<double> geometric_grid(double start, double end, int points);

/// Parses the JSON config mirroring SweepSpec:
/// {"slope": "1/2" | {...}, "lambda": 30, "h_values": [...] |
///  "grid": {"start": 0.1, "end": 0.001, "points": 3},
///  "tie_tolerance": 0, "outputs": ["exact_count", ...]}
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

/// Checks the SweepSpec invariants and orders h descending.
void validate(SweepSpec& spec);

struct ReportRow {
    double h = 0.0;
    std::optional<std::uint64_t> n_h;
    std::optional<double> h_n_h;
    std::optional<double> closed_form_asym;
    std::optional<double> weyl_value;
    std::optional<double> residual;  // h N_h - h closed_form_asym
    std::optional<std::uint64_t> near_boundary;
    double wall_time_ms = 0.0;
};

/// Computes one row with the floating-point counter.
ReportRow compute_row(const Slope& s, double h, double lambda, double tie_tolerance, const Outputs& outputs,
                      unsigned threads = 1);

/// Column names of a row set, in output order.
std::vector<std::string> row_columns(const Outputs& outputs);

std::string format_number(double value);
void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, const Outputs& outputs, Format format);

/// Entry point behind the `adiabatic` executable; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adiabatic::cli
