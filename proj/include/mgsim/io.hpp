#pragma once

#include <string>
#include <vector>

#include "mgsim/scenario.hpp"

namespace mgsim {

/// Header plus one row per sample, comma-separated, LF endings, f_hz printed
/// with at least 9 significant digits.
void write_trace_csv(const SimTrace& trace, const std::string& path);
std::string trace_csv_string(const SimTrace& trace);

/// Round-trip reader for the trace CSV (numeric fields at printed precision).
SimTrace read_trace_csv(const std::string& path);

void write_summary_json(const BatchResult& batch, const std::string& path);
std::string summary_json_string(const BatchResult& batch);

/// Plain-text tables, one per scenario: rows frequency min/max, columns
/// V2G off / 100 EVs / 200 EVs. Failed cells print ERROR.
void write_summary_table(const BatchResult& batch, const std::string& path);
std::string summary_table_string(const BatchResult& batch);

/// Self-contained matplotlib script overlaying frequency vs time per
/// scenario, one line per case, referencing the trace CSVs by relative path.
/// Missing files are noted in a script comment. Throws on an empty list.
void emit_plot_script(const std::vector<std::string>& trace_csv_paths, const std::string& out_path);
std::string plot_script_string(const std::vector<std::string>& trace_csv_paths);

}  // namespace mgsim
