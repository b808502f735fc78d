#include "mgsim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mgsim/errors.hpp"
#include "mgsim/io.hpp"

namespace mgsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
        throw ConfigError("config: bad numeric value for '" + key + "': '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    const int i = static_cast<int>(std::llround(v));
    if (v != static_cast<double>(i))
        throw ConfigError("config: '" + key + "' must be an integer, got '" + value + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config: '" + key + "' must be true/false, got '" + value + "'");
}

// "5:10, 7:2.5" -> {{5, 10}, {7, 2.5}}; empty string disables the compensator.
HarmonicCompParams parse_harmonics(const std::string& value) {
    HarmonicCompParams out;
    std::stringstream ss{value};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("config: harmonics entries must be 'order:gain', got '" + item +
                              "'");
        HarmonicTerm term;
        term.order = parse_int("harmonics", trim(item.substr(0, colon)));
        term.ki = parse_number("harmonics", trim(item.substr(colon + 1)));
        out.push_back(term);
    }
    return out;
}

std::string harmonics_to_string(const HarmonicCompParams& h) {
    std::string s;
    for (size_t i = 0; i < h.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(h[i].order) + ":" + format_double(h[i].ki);
    }
    return s;
}
}  // namespace

FullConfig default_config() {
    FullConfig c;
    c.plant = {0.003, 4.8162e-6, 0.001, 145.2, 800.0, 10000.0};
    c.droop.kw = 0.0003;
    c.droop.kv = 0.004;
    c.droop.omega_nom = 2.0 * kPi * 50.0;
    c.droop.e_nom = 220.0 * std::sqrt(2.0);
    c.droop.wf = 2.0 * kPi * 5.0;
    c.kp_v = 0.2;
    c.ki_v = 100.0;
    c.kp_i = 5.0;
    c.ki_i = 400.0;
    c.wc = 0.01;
    c.pr_track_freq = true;
    c.kp_v_dq = 0.1;
    c.ki_v_dq = 3.0;
    c.kp_i_dq = 20.0;
    c.ki_i_dq = 1000.0;
    c.frame = Frame::StationaryAB;
    c.ts_control = 5e-5;
    c.h_plant = 0.0;
    c.t_end = 0.5;
    c.record_decimation = 10;
    c.ramp_cycles = 2.0;
    c.thd_point = ThdPoint::Capacitor;
    return c;
}

FullConfig parse_config(std::string_view text) {
    FullConfig cfg = default_config();
    std::string section;
    std::stringstream ss{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "plant" && section != "droop" && section != "control" &&
                section != "sim")
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                              "' outside any section");

        auto unknown = [&]() -> ConfigError {
            return ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                               key + "' in section [" + section + "]");
        };

        if (section == "plant") {
            if (key == "l1") cfg.plant.l1 = parse_number(key, value);
            else if (key == "c") cfg.plant.c = parse_number(key, value);
            else if (key == "l2") cfg.plant.l2 = parse_number(key, value);
            else if (key == "r_load") cfg.plant.r_load = parse_number(key, value);
            else if (key == "vdc") cfg.plant.vdc = parse_number(key, value);
            else if (key == "fsw") cfg.plant.fsw = parse_number(key, value);
            else throw unknown();
        } else if (section == "droop") {
            if (key == "kw") cfg.droop.kw = parse_number(key, value);
            else if (key == "kv") cfg.droop.kv = parse_number(key, value);
            else if (key == "omega_nom") cfg.droop.omega_nom = parse_number(key, value);
            else if (key == "e_nom") cfg.droop.e_nom = parse_number(key, value);
            else if (key == "wf") cfg.droop.wf = parse_number(key, value);
            else throw unknown();
        } else if (section == "control") {
            if (key == "kp_v") cfg.kp_v = parse_number(key, value);
            else if (key == "ki_v") cfg.ki_v = parse_number(key, value);
            else if (key == "kp_i") cfg.kp_i = parse_number(key, value);
            else if (key == "ki_i") cfg.ki_i = parse_number(key, value);
            else if (key == "wc") cfg.wc = parse_number(key, value);
            else if (key == "pr_track_freq") cfg.pr_track_freq = parse_bool(key, value);
            else if (key == "kp_v_dq") cfg.kp_v_dq = parse_number(key, value);
            else if (key == "ki_v_dq") cfg.ki_v_dq = parse_number(key, value);
            else if (key == "kp_i_dq") cfg.kp_i_dq = parse_number(key, value);
            else if (key == "ki_i_dq") cfg.ki_i_dq = parse_number(key, value);
            else if (key == "harmonics") cfg.harmonics = parse_harmonics(value);
            else throw unknown();
        } else {  // [sim]
            if (key == "frame") {
                if (value == "ab") cfg.frame = Frame::StationaryAB;
                else if (value == "dq") cfg.frame = Frame::SynchronousDQ;
                else throw ConfigError("config line " + std::to_string(lineno) +
                                       ": frame must be 'ab' or 'dq', got '" + value + "'");
            } else if (key == "ts_control") cfg.ts_control = parse_number(key, value);
            else if (key == "h_plant") cfg.h_plant = parse_number(key, value);
            else if (key == "t_end") cfg.t_end = parse_number(key, value);
            else if (key == "record_decimation") cfg.record_decimation = parse_int(key, value);
            else if (key == "ramp_cycles") cfg.ramp_cycles = parse_number(key, value);
            else if (key == "thd_point") {
                if (value == "capacitor") cfg.thd_point = ThdPoint::Capacitor;
                else if (value == "load") cfg.thd_point = ThdPoint::LoadTerminal;
                else throw ConfigError("config line " + std::to_string(lineno) +
                                       ": thd_point must be 'capacitor' or 'load'");
            } else throw unknown();
        }
    }
    return cfg;
}

FullConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string print_config(const FullConfig& cfg) {
    std::string s;
    auto kv = [&s](const char* key, const std::string& value) {
        s += key;
        s += " = ";
        s += value;
        s += '\n';
    };
    s += "[plant]\n";
    kv("l1", format_double(cfg.plant.l1));
    kv("c", format_double(cfg.plant.c));
    kv("l2", format_double(cfg.plant.l2));
    kv("r_load", format_double(cfg.plant.r_load));
    kv("vdc", format_double(cfg.plant.vdc));
    kv("fsw", format_double(cfg.plant.fsw));
    s += "\n[droop]\n";
    kv("kw", format_double(cfg.droop.kw));
    kv("kv", format_double(cfg.droop.kv));
    kv("omega_nom", format_double(cfg.droop.omega_nom));
    kv("e_nom", format_double(cfg.droop.e_nom));
    kv("wf", format_double(cfg.droop.wf));
    s += "\n[control]\n";
    kv("kp_v", format_double(cfg.kp_v));
    kv("ki_v", format_double(cfg.ki_v));
    kv("kp_i", format_double(cfg.kp_i));
    kv("ki_i", format_double(cfg.ki_i));
    kv("wc", format_double(cfg.wc));
    kv("pr_track_freq", cfg.pr_track_freq ? "true" : "false");
    kv("kp_v_dq", format_double(cfg.kp_v_dq));
    kv("ki_v_dq", format_double(cfg.ki_v_dq));
    kv("kp_i_dq", format_double(cfg.kp_i_dq));
    kv("ki_i_dq", format_double(cfg.ki_i_dq));
    kv("harmonics", harmonics_to_string(cfg.harmonics));
    s += "\n[sim]\n";
    kv("frame", cfg.frame == Frame::StationaryAB ? "ab" : "dq");
    kv("ts_control", format_double(cfg.ts_control));
    kv("h_plant", format_double(cfg.h_plant > 0.0 ? cfg.h_plant
                                                  : (cfg.plant.fsw > 0.0 ? 5e-7 : 1e-5)));
    kv("t_end", format_double(cfg.t_end));
    kv("record_decimation", std::to_string(cfg.record_decimation));
    kv("ramp_cycles", format_double(cfg.ramp_cycles));
    kv("thd_point", cfg.thd_point == ThdPoint::Capacitor ? "capacitor" : "load");
    return s;
}

ScenarioConfig to_scenario(const FullConfig& cfg, Frame frame) {
    ScenarioConfig sc;
    sc.frame = frame;
    sc.plant = cfg.plant;
    sc.droop = cfg.droop;
    sc.pr_voltage = {cfg.kp_v, cfg.ki_v, 0.0, cfg.wc};
    sc.pr_current = {cfg.kp_i, cfg.ki_i, 0.0, cfg.wc};
    sc.pi_voltage = {cfg.kp_v_dq, cfg.ki_v_dq};
    sc.pi_current = {cfg.kp_i_dq, cfg.ki_i_dq};
    sc.harmonic = cfg.harmonics;
    sc.pr_track_frequency = cfg.pr_track_freq;
    sc.ts_control = cfg.ts_control;
    sc.h_plant = cfg.h_plant > 0.0 ? cfg.h_plant : (cfg.plant.fsw > 0.0 ? 5e-7 : 1e-5);
    sc.t_end = cfg.t_end;
    sc.record_decimation = cfg.record_decimation;
    sc.ramp_cycles = cfg.ramp_cycles;
    sc.thd_point = cfg.thd_point;
    return sc;
}

}  // namespace mgsim
