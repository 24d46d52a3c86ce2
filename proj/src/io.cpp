#include "flywheel/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace flywheel {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Full-consumption double parse; %.17g output round-trips through here.
std::optional<double> parse_double(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) {
        return std::nullopt;
    }
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        return std::nullopt;
    }
    return value;
}

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.push_back("");
    }
    return fields;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return in;
}

} // namespace

FlywheelParams load_params(const std::string& path) {
    std::ifstream in = open_input(path);

    std::map<std::string, double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": expected key=value, got '" + text + "'");
        }
        const std::string key = trim(text.substr(0, eq));
        const auto value = parse_double(text.substr(eq + 1));
        if (!value) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": value for '" + key + "' is not a number");
        }
        if (!values.emplace(key, *value).second) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
        }
    }

    FlywheelParams params;
    const std::map<std::string, double*> fields{
        {"t_loss_s", &params.t_loss_s},     {"t_cont_s", &params.t_cont_s},
        {"e_c", &params.e_c},               {"e_d", &params.e_d},
        {"e_init_j", &params.e_init_j},     {"e_cap_j", &params.e_cap_j},
        {"p_rated_w", &params.p_rated_w},   {"delta_s", &params.delta_s},
        {"p_prev_init_w", &params.p_prev_init_w}};
    for (const auto& [key, value] : values) {
        const auto field = fields.find(key);
        if (field == fields.end()) {
            throw ValidationError(path + ": unknown config key '" + key + "'");
        }
        *field->second = value;
    }
    for (const auto& [key, ptr] : fields) {
        if (key != "p_prev_init_w" && values.find(key) == values.end()) {
            throw ValidationError(path + ": missing required key '" + key + "'");
        }
    }
    return params;
}

PowerProfile load_profile(const std::string& path, double delta_s) {
    std::ifstream in = open_input(path);

    std::string line;
    if (!std::getline(in, line) || trim(line) != "slot,power_w") {
        throw ValidationError(path + ":1: expected profile header 'slot,power_w'");
    }

    PowerProfile profile;
    profile.delta_s = delta_s;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": expected 'slot,power_w' row");
        }
        const auto slot = parse_double(fields[0]);
        const auto expected = static_cast<double>(profile.powers_w.size() + 1);
        if (!slot || *slot != expected) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": slot indices must be contiguous ascending from 1 (expected " +
                                  std::to_string(profile.powers_w.size() + 1) + ")");
        }
        const auto power = parse_double(fields[1]);
        if (!power) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": power is not a number");
        }
        profile.powers_w.push_back(*power);
    }
    if (profile.powers_w.empty()) {
        throw ValidationError(path + ": profile contains no slots");
    }
    return profile;
}

LoadedTrace read_trace_csv(const std::string& path) {
    std::ifstream in = open_input(path);

    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError(path + ": empty trace file");
    }
    const auto header = split_fields(line);
    if (header.size() < 5 || header[0] != "k" || header[1] != "t_s" || header[2] != "e_j" ||
        header[3] != "case" || header[4] != "flag") {
        throw ValidationError(path + ":1: expected trace header 'k,t_s,e_j,case,flag'");
    }

    LoadedTrace trace;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() < 5) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": short trace row");
        }
        const auto k = parse_double(fields[0]);
        const auto t = parse_double(fields[1]);
        const auto e = parse_double(fields[2]);
        const auto flag = parse_double(fields[4]);
        if (!k || !t || !e || !flag) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": non-numeric trace field");
        }
        trace.entries.push_back({static_cast<int>(*k), *t, *e});
        trace.cases.push_back(fields[3]);
        trace.flags.push_back(static_cast<int>(*flag));
    }
    if (trace.entries.empty()) {
        throw ValidationError(path + ": trace contains no rows");
    }
    return trace;
}

namespace {

std::string case_label(const EnergyTrace& trace, std::size_t entry_index) {
    return entry_index == 0 ? "-" : to_string(trace.transitions[entry_index - 1].case_tag);
}

int flag_of(const EnergyTrace& trace, std::size_t entry_index) {
    return entry_index != 0 && trace.saturated[entry_index - 1] ? 1 : 0;
}

} // namespace

std::string format_trace(const EnergyTrace& trace, OutputFormat format) {
    std::string out;
    if (format == OutputFormat::Csv) {
        out += "k,t_s,e_j,case,flag\n";
        for (std::size_t i = 0; i < trace.entries.size(); ++i) {
            const TraceEntry& e = trace.entries[i];
            out += std::to_string(e.slot) + "," + fmt(e.t_s) + "," + fmt(e.e_j) + "," +
                   case_label(trace, i) + "," + std::to_string(flag_of(trace, i)) + "\n";
        }
        return out;
    }
    out += "{\n  \"entries\": [\n";
    for (std::size_t i = 0; i < trace.entries.size(); ++i) {
        const TraceEntry& e = trace.entries[i];
        out += "    {\"k\": " + std::to_string(e.slot) + ", \"t_s\": " + fmt(e.t_s) +
               ", \"e_j\": " + fmt(e.e_j) + ", \"case\": \"" + case_label(trace, i) +
               "\", \"flag\": " + std::to_string(flag_of(trace, i)) + "}" +
               (i + 1 < trace.entries.size() ? "," : "") + "\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::string format_compare(const EnergyTrace& engine_trace, const EnergyTrace& exact_trace,
                           const std::vector<double>& bounds, OutputFormat format) {
    if (engine_trace.entries.size() != exact_trace.entries.size() ||
        bounds.size() != engine_trace.entries.size()) {
        throw ValidationError("compare traces must have equal length");
    }
    std::string out;
    const std::size_t n = engine_trace.entries.size();
    if (format == OutputFormat::Csv) {
        out += "k,t_s,e_j,case,flag,e_ref_j,gap_j,bound_j\n";
        for (std::size_t i = 0; i < n; ++i) {
            const TraceEntry& e = engine_trace.entries[i];
            const double ref = exact_trace.entries[i].e_j;
            out += std::to_string(e.slot) + "," + fmt(e.t_s) + "," + fmt(e.e_j) + "," +
                   case_label(engine_trace, i) + "," + std::to_string(flag_of(engine_trace, i)) +
                   "," + fmt(ref) + "," + fmt(std::abs(e.e_j - ref)) + "," + fmt(bounds[i]) + "\n";
        }
        return out;
    }
    out += "{\n  \"entries\": [\n";
    for (std::size_t i = 0; i < n; ++i) {
        const TraceEntry& e = engine_trace.entries[i];
        const double ref = exact_trace.entries[i].e_j;
        out += "    {\"k\": " + std::to_string(e.slot) + ", \"t_s\": " + fmt(e.t_s) +
               ", \"e_j\": " + fmt(e.e_j) + ", \"case\": \"" + case_label(engine_trace, i) +
               "\", \"flag\": " + std::to_string(flag_of(engine_trace, i)) +
               ", \"e_ref_j\": " + fmt(ref) + ", \"gap_j\": " + fmt(std::abs(e.e_j - ref)) +
               ", \"bound_j\": " + fmt(bounds[i]) + "}" + (i + 1 < n ? "," : "") + "\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::string format_bound_report(const BoundReport& report, OutputFormat format) {
    std::string out;
    if (format == OutputFormat::Csv) {
        out += "# r_max_w=" + fmt(report.r_max_w) +
               ",asymptotic_bound_j=" + fmt(report.asymptotic_bound_j) + "\n";
        out += "k,gap_j,bound_j,ok\n";
        for (const BoundEntry& e : report.entries) {
            out += std::to_string(e.slot) + "," + fmt(e.gap_j) + "," + fmt(e.bound_j) + "," +
                   (e.satisfied ? "1" : "0") + "\n";
        }
        return out;
    }
    out += "{\n  \"r_max_w\": " + fmt(report.r_max_w) +
           ",\n  \"asymptotic_bound_j\": " + fmt(report.asymptotic_bound_j) +
           ",\n  \"entries\": [\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const BoundEntry& e = report.entries[i];
        out += "    {\"k\": " + std::to_string(e.slot) + ", \"gap_j\": " + fmt(e.gap_j) +
               ", \"bound_j\": " + fmt(e.bound_j) +
               ", \"ok\": " + (e.satisfied ? "true" : "false") + "}" +
               (i + 1 < report.entries.size() ? "," : "") + "\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::string format_classify(const PowerProfile& profile, const FlywheelParams& params,
                            OutputFormat format) {
    validate_params(params);
    validate_profile(profile, params);
    std::string out;
    const std::size_t slots = profile.powers_w.size();
    const auto transition_at = [&](std::size_t k) {
        const double p_in = profile.powers_w[k - 1];
        const double p_prev = (k == 1) ? params.p_prev_init_w : profile.powers_w[k - 2];
        return std::pair<double, SlotTransition>(
            p_prev, classify_transition(p_in, p_prev, params.delta_s, params.t_cont_s,
                                        params.e_c, params.e_d));
    };
    if (format == OutputFormat::Csv) {
        out += "k,p_prev_w,p_in_w,case,eta_in,eta_prev,eta_eff,t_change_s\n";
        for (std::size_t k = 1; k <= slots; ++k) {
            const auto [p_prev, tr] = transition_at(k);
            out += std::to_string(k) + "," + fmt(p_prev) + "," + fmt(profile.powers_w[k - 1]) +
                   "," + to_string(tr.case_tag) + "," + fmt(tr.eta_in) + "," + fmt(tr.eta_prev) +
                   "," + fmt(tr.eta_eff) + "," + (tr.t_change_s ? fmt(*tr.t_change_s) : "") +
                   "\n";
        }
        return out;
    }
    out += "{\n  \"slots\": [\n";
    for (std::size_t k = 1; k <= slots; ++k) {
        const auto [p_prev, tr] = transition_at(k);
        out += "    {\"k\": " + std::to_string(k) + ", \"p_prev_w\": " + fmt(p_prev) +
               ", \"p_in_w\": " + fmt(profile.powers_w[k - 1]) + ", \"case\": \"" +
               to_string(tr.case_tag) + "\", \"eta_in\": " + fmt(tr.eta_in) +
               ", \"eta_prev\": " + fmt(tr.eta_prev) + ", \"eta_eff\": " + fmt(tr.eta_eff) +
               ", \"t_change_s\": " + (tr.t_change_s ? fmt(*tr.t_change_s) : "null") + "}" +
               (k < slots ? "," : "") + "\n";
    }
    out += "  ]\n}\n";
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        if (!std::cout) {
            throw IoError("failed writing to stdout");
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw IoError("failed writing to '" + path + "'");
    }
}

} // namespace flywheel
