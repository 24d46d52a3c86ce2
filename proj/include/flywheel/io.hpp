#pragma once

#include <string>
#include <vector>

#include "flywheel/approx.hpp"
#include "flywheel/trace.hpp"

namespace flywheel {

enum class OutputFormat {
    Csv,
    Json,
};

/// Parses a flat key=value parameter file. Recognized keys: t_loss_s,
/// t_cont_s, e_c, e_d, e_init_j, e_cap_j, p_rated_w, delta_s, p_prev_init_w
/// (optional, default 0). Blank lines and lines starting with '#' are
/// skipped. Unknown, duplicate, or missing keys raise ValidationError; an
/// unreadable file raises IoError. The result is not yet validated.
FlywheelParams load_params(const std::string& path);

/// Parses a power profile CSV with the exact header `slot,power_w` and
/// contiguous ascending slot indices 1..K. Parse failures name the
/// offending line; rated-power checking happens later in validate_profile.
PowerProfile load_profile(const std::string& path, double delta_s);

/// A trace as re-read from file: energies round-trip bit-exactly thanks to
/// the 17-significant-digit serialization.
struct LoadedTrace {
    std::vector<TraceEntry> entries;
    std::vector<std::string> cases; ///< per entry; "-" on the initial row
    std::vector<int> flags;
};

/// Reads the first five columns (k,t_s,e_j,case,flag) of a trace CSV,
/// accepting both plain and compare-style files.
LoadedTrace read_trace_csv(const std::string& path);

/// Serializes a trace. CSV columns: k,t_s,e_j,case,flag. JSON mirrors the
/// same fields under "entries". Numbers carry 17 significant digits, so a
/// round-trip through read_trace_csv reproduces every double exactly and
/// identical inputs always yield byte-identical output.
std::string format_trace(const EnergyTrace& trace, OutputFormat format);

/// Serializes a comparison of an engine trace against the exact reference.
/// Adds e_ref_j, gap_j and bound_j columns to the trace layout; `bounds`
/// holds the a-priori gap bound per entry.
std::string format_compare(const EnergyTrace& engine_trace, const EnergyTrace& exact_trace,
                           const std::vector<double>& bounds, OutputFormat format);

/// Serializes a bound report: per-slot gap/bound/ok rows plus the horizon
/// quantities r_max_w and asymptotic_bound_j.
std::string format_bound_report(const BoundReport& report, OutputFormat format);

/// Serializes the per-slot transition classification of a profile.
std::string format_classify(const PowerProfile& profile, const FlywheelParams& params,
                            OutputFormat format);

/// Writes `content` to `path`, or to stdout when `path` is "-".
/// Raises IoError when the destination cannot be written.
void write_output(const std::string& path, const std::string& content);

} // namespace flywheel
