#include "mgsim/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mgsim/errors.hpp"

namespace mgsim {

namespace {

FleetMode mode_from_string(const std::string& s) {
    if (s == "charging") return FleetMode::Charging;
    if (s == "regulation") return FleetMode::Regulation;
    if (s == "idle") return FleetMode::Idle;
    throw_config("unknown mode label in trace: " + s);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot open for writing: " + path);
    out << content;
    if (!out) throw_io("write failed: " + path);
}

}  // namespace

std::string trace_csv_string(const SimTrace& trace) {
    std::string out;
    out.reserve(trace.samples.size() * 120 + 128);
    out += "t_s,f_hz,p_diesel_mw,p_pv_mw,p_wind_mw,p_load_mw,p_ev_mw,mean_soc,mode\n";
    char buf[256];
    for (const auto& s : trace.samples) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.17g,%.9g,%.9g,%.9g,%.9g,%.17g,%.17g,%s\n", s.t_s,
                      s.f_hz, s.p_diesel_mw, s.p_pv_mw, s.p_wind_mw, s.p_load_mw, s.p_ev_mw,
                      s.mean_soc, to_string(s.mode));
        out += buf;
    }
    return out;
}

void write_trace_csv(const SimTrace& trace, const std::string& path) {
    write_file(path, trace_csv_string(trace));
}

SimTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open trace file: " + path);
    SimTrace trace;
    std::string line;
    if (!std::getline(in, line)) throw_io("empty trace file: " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        TraceSample s{};
        std::string cell;
        double* fields[8] = {&s.t_s, &s.f_hz, &s.p_diesel_mw, &s.p_pv_mw,
                             &s.p_wind_mw, &s.p_load_mw, &s.p_ev_mw, &s.mean_soc};
        for (double* f : fields) {
            if (!std::getline(ss, cell, ',')) throw_config("short trace row in " + path);
            *f = std::stod(cell);
        }
        if (!std::getline(ss, cell)) throw_config("missing mode column in " + path);
        s.mode = mode_from_string(cell);
        trace.samples.push_back(s);
    }
    return trace;
}

namespace {

nlohmann::json summary_to_json(const RunSummary& s) {
    return {
        {"f_min_hz", s.f_min_hz},
        {"f_max_hz", s.f_max_hz},
        {"max_abs_dev_hz", s.max_abs_dev_hz},
        {"time_of_nadir_s", s.time_of_nadir_s},
        {"mode_duty", {{"idle", s.mode_duty_idle},
                       {"charging", s.mode_duty_charging},
                       {"regulation", s.mode_duty_regulation}}},
        {"final_mean_soc", s.final_mean_soc},
        {"soc_min_seen", s.soc_min_seen},
        {"soc_max_seen", s.soc_max_seen},
        {"max_alloc_residual_mw", s.max_alloc_residual_mw},
        {"max_conservation_err_hz", s.max_conservation_err_hz},
    };
}

}  // namespace

std::string summary_json_string(const BatchResult& batch) {
    nlohmann::json root;
    root["cells"] = nlohmann::json::array();
    for (const auto& cell : batch.cells) {
        nlohmann::json c;
        c["scenario"] = to_string(cell.scenario);
        c["case"] = to_string(cell.case_id);
        if (cell.summary)
            c["summary"] = summary_to_json(*cell.summary);
        else
            c["error"] = cell.error;
        root["cells"].push_back(std::move(c));
    }
    return root.dump(2) + "\n";
}

void write_summary_json(const BatchResult& batch, const std::string& path) {
    write_file(path, summary_json_string(batch));
}

std::string summary_table_string(const BatchResult& batch) {
    std::ostringstream out;
    const char* scenario_titles[3] = {"Scenario 1: reduced PV generation",
                                      "Scenario 2: wind farm trip",
                                      "Scenario 3: asynchronous machine start"};
    for (int s = 0; s < 3; ++s) {
        out << scenario_titles[s] << "\n";
        out << "                         V2G Off      100 EVs      200 EVs\n";
        auto row = [&](const char* label, auto pick) {
            out << label;
            for (int c = 0; c < 3; ++c) {
                const auto& cell = batch.cells[static_cast<std::size_t>(s) * 3 + c];
                char buf[32];
                if (cell.summary)
                    std::snprintf(buf, sizeof(buf), "%12.4f", pick(*cell.summary));
                else
                    std::snprintf(buf, sizeof(buf), "%12s", "ERROR");
                out << buf << " ";
            }
            out << "\n";
        };
        row("Frequency (Min Value) ", [](const RunSummary& r) { return r.f_min_hz; });
        row("Frequency (Max Value) ", [](const RunSummary& r) { return r.f_max_hz; });
        row("Max |deviation| (Hz)  ", [](const RunSummary& r) { return r.max_abs_dev_hz; });
        out << "\n";
    }
    return out.str();
}

void write_summary_table(const BatchResult& batch, const std::string& path) {
    write_file(path, summary_table_string(batch));
}

std::string plot_script_string(const std::vector<std::string>& trace_csv_paths) {
    if (trace_csv_paths.empty()) throw_config("emit_plot_script: no trace files given");
    std::ostringstream out;
    out << "#!/usr/bin/env python3\n"
        << "# Frequency-vs-time overlays, one line per trace.\n"
        << "import csv\n"
        << "import os\n"
        << "import matplotlib\n"
        << "matplotlib.use('Agg')\n"
        << "import matplotlib.pyplot as plt\n\n"
        << "traces = [\n";
    for (const auto& p : trace_csv_paths) {
        std::ifstream probe(p);
        if (!probe)
            out << "    # missing at generation time: '" << p << "'\n";
        out << "    '" << p << "',\n";
    }
    out << "]\n\n"
        << "plt.figure(figsize=(10, 6))\n"
        << "for path in traces:\n"
        << "    if not os.path.exists(path):\n"
        << "        print('skipping missing trace:', path)\n"
        << "        continue\n"
        << "    t, f = [], []\n"
        << "    with open(path) as fh:\n"
        << "        for row in csv.DictReader(fh):\n"
        << "            t.append(float(row['t_s']))\n"
        << "            f.append(float(row['f_hz']))\n"
        << "    plt.plot(t, f, label=os.path.basename(path))\n"
        << "plt.xlabel('time [s]')\n"
        << "plt.ylabel('frequency [Hz]')\n"
        << "plt.legend()\n"
        << "plt.grid(True)\n"
        << "plt.savefig('frequency_overlay.png', dpi=150)\n"
        << "print('wrote frequency_overlay.png')\n";
    return out.str();
}

void emit_plot_script(const std::vector<std::string>& trace_csv_paths, const std::string& out_path) {
    write_file(out_path, plot_script_string(trace_csv_paths));
}

}  // namespace mgsim
