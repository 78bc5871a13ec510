#include "gridmpc/config_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "gridmpc/errors.hpp"
#include "gridmpc/sim.hpp"

namespace gridmpc {
namespace {

struct Entry {
    int line;
    std::string key;
    std::string value;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigInvalid("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const Entry& e, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        fail(e.line, "expected a number for '" + e.key + "', got '" + text + "'");
    return v;
}

double parse_double(const Entry& e) { return parse_double(e, e.value); }

long parse_int(const Entry& e) {
    char* end = nullptr;
    const long v = std::strtol(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0')
        fail(e.line, "expected an integer for '" + e.key + "', got '" + e.value + "'");
    return v;
}

bool parse_bool(const Entry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(e.line, "expected true/false for '" + e.key + "', got '" + e.value + "'");
}

ScenarioEvent parse_event(const Entry& e) {
    std::stringstream ss(e.value);
    ScenarioEvent ev;
    std::string kind;
    if (!(ss >> ev.time >> kind)) fail(e.line, "event needs '<time> <kind> <value...>'");

    const auto need_value = [&](double& out) {
        if (!(ss >> out)) fail(e.line, "event '" + kind + "' needs a value");
    };
    if (kind == "dc_load_step") {
        ev.kind = ScenarioEvent::Kind::kDcLoadStep;
        need_value(ev.value);
    } else if (kind == "pcc_load_step") {
        ev.kind = ScenarioEvent::Kind::kPccLoadStep;
        need_value(ev.value);
    } else if (kind == "irradiance_step") {
        ev.kind = ScenarioEvent::Kind::kIrradianceStep;
        need_value(ev.value);
    } else if (kind == "temperature_step") {
        ev.kind = ScenarioEvent::Kind::kTemperatureStep;
        need_value(ev.value);
    } else if (kind == "vdc_ref_change") {
        ev.kind = ScenarioEvent::Kind::kVdcRefChange;
        need_value(ev.value);
    } else if (kind == "beta_change") {
        ev.kind = ScenarioEvent::Kind::kBetaChange;
        if (!(ss >> ev.index >> ev.value)) fail(e.line, "beta_change needs '<index> <ratio>'");
    } else {
        fail(e.line, "unknown event kind '" + kind + "'");
    }
    std::string extra;
    if (ss >> extra) fail(e.line, "trailing tokens after event: '" + extra + "'");
    return ev;
}

bool apply_vsi_key(VsiParams& p, const std::string& field, double v) {
    if (field == "R_F") p.R_F = v;
    else if (field == "L_F") p.L_F = v;
    else if (field == "C_f") p.C_f = v;
    else if (field == "R_T") p.R_T = v;
    else if (field == "L_T") p.L_T = v;
    else if (field == "V_in") p.V_in = v;
    else if (field == "local_load_ohms") p.local_load_ohms = v;
    else return false;
    return true;
}

}  // namespace

SimulationConfig parse_config_text(const std::string& text) {
    std::vector<Entry> entries;
    {
        std::stringstream ss(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(ss, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string line = trim(raw);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
            Entry e{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
            if (e.key.empty()) fail(line_no, "empty key");
            if (e.value.empty()) fail(line_no, "empty value for '" + e.key + "'");
            entries.push_back(std::move(e));
        }
    }

    SimulationConfig cfg;
    std::size_t vsi_count = 2;
    for (const Entry& e : entries) {
        if (e.key == "sim.vsi_count") {
            const long n = parse_int(e);
            if (n < 1 || n > static_cast<long>(kMaxVsis))
                fail(e.line, "sim.vsi_count must be in 1..8");
            vsi_count = static_cast<std::size_t>(n);
        }
    }
    cfg.vsis.assign(vsi_count, VsiParams{});
    cfg.control.betas.assign(vsi_count - 1, 1.0);

    for (const Entry& e : entries) {
        const std::string& k = e.key;
        if (k == "sim.vsi_count") continue;  // handled above
        else if (k == "sim.duration") cfg.duration = parse_double(e);
        else if (k == "sim.dt") cfg.dt = parse_double(e);
        else if (k == "sim.trace_decimation") cfg.trace_decimation = static_cast<int>(parse_int(e));
        else if (k == "sim.droop_mode") cfg.droop_mode = parse_bool(e);
        else if (k == "sim.ac_only") cfg.ac_only = parse_bool(e);
        else if (k == "sim.seed") cfg.seed = parse_int(e);
        else if (k == "sim.p_dcload") cfg.p_dcload = parse_double(e);
        else if (k == "sim.pcc_load_watts") cfg.pcc_load_watts = parse_double(e);
        else if (k == "sim.irradiance") cfg.irradiance = parse_double(e);
        else if (k == "sim.temperature") cfg.temperature = parse_double(e);
        else if (k == "control.T_S") cfg.control.T_S = parse_double(e);
        else if (k == "control.lambda") cfg.control.lambda = parse_double(e);
        else if (k == "control.v_ref_peak") cfg.control.v_ref_peak = parse_double(e);
        else if (k == "control.v_ref_freq") cfg.control.v_ref_freq = parse_double(e);
        else if (k == "control.V_DC_ref") cfg.control.V_DC_ref = parse_double(e);
        else if (k == "control.joint_search") cfg.control.joint_search = parse_bool(e);
        else if (k == "control.actuation_delay")
            cfg.control.actuation_delay = static_cast<int>(parse_int(e));
        else if (k.rfind("control.beta.", 0) == 0) {
            const long idx = std::strtol(k.c_str() + 13, nullptr, 10);
            if (idx < 1 || static_cast<std::size_t>(idx) > cfg.control.betas.size())
                fail(e.line, "beta index out of range for vsi_count: '" + k + "'");
            cfg.control.betas[idx - 1] = parse_double(e);
        } else if (k == "dc.L_PV") cfg.dc.L_PV = parse_double(e);
        else if (k == "dc.C_PV") cfg.dc.C_PV = parse_double(e);
        else if (k == "dc.L_bat") cfg.dc.L_bat = parse_double(e);
        else if (k == "dc.C_bat") cfg.dc.C_bat = parse_double(e);
        else if (k == "dc.R_parasitic") cfg.dc.R_parasitic = parse_double(e);
        else if (k == "dc.V_bat") cfg.dc.V_bat = parse_double(e);
        else if (k == "dc.R_bat") cfg.dc.R_bat = parse_double(e);
        else if (k == "pv.I_sc_stc") cfg.pv.I_sc_stc = parse_double(e);
        else if (k == "pv.V_oc_stc") cfg.pv.V_oc_stc = parse_double(e);
        else if (k == "pv.diode_ideality") cfg.pv.diode_ideality = parse_double(e);
        else if (k == "pv.series_cells") cfg.pv.series_cells = static_cast<int>(parse_int(e));
        else if (k == "pv.parallel_strings")
            cfg.pv.parallel_strings = static_cast<int>(parse_int(e));
        else if (k == "pv.temp_coeff_isc") cfg.pv.temp_coeff_isc = parse_double(e);
        else if (k == "pv.R_s") cfg.pv.R_s = parse_double(e);
        else if (k == "pv.R_sh") cfg.pv.R_sh = parse_double(e);
        else if (k == "mppt.step_volts") cfg.mppt.step_volts = parse_double(e);
        else if (k == "mppt.epsilon_volts") cfg.mppt.epsilon_volts = parse_double(e);
        else if (k == "mppt.conductance_tol") cfg.mppt.conductance_tol = parse_double(e);
        else if (k == "mppt.power_filter_alpha") cfg.mppt.power_filter_alpha = parse_double(e);
        else if (k == "mppt.anchor_gain") cfg.mppt.anchor_gain = parse_double(e);
        else if (k == "mppt.period_steps") cfg.mppt_period_steps = static_cast<int>(parse_int(e));
        else if (k == "droop.f0") cfg.droop.f0 = parse_double(e);
        else if (k == "droop.E0") cfg.droop.E0 = parse_double(e);
        else if (k == "droop.m_p") cfg.droop.m_p = parse_double(e);
        else if (k == "droop.n_q") cfg.droop.n_q = parse_double(e);
        else if (k == "droop.power_filter_hz") cfg.droop.power_filter_hz = parse_double(e);
        else if (k == "event") cfg.events.push_back(parse_event(e));
        else if (k.rfind("vsi.", 0) == 0) {
            const std::string rest = k.substr(4);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) fail(e.line, "expected vsi.<n>.<field>: '" + k + "'");
            const std::string which = rest.substr(0, dot);
            const std::string field = rest.substr(dot + 1);
            const double v = parse_double(e);
            if (which == "default") {
                for (VsiParams& p : cfg.vsis)
                    if (!apply_vsi_key(p, field, v)) fail(e.line, "unknown VSI field '" + field + "'");
            } else {
                char* end = nullptr;
                const long idx = std::strtol(which.c_str(), &end, 10);
                if (end == which.c_str() || *end != '\0' || idx < 1 ||
                    static_cast<std::size_t>(idx) > cfg.vsis.size())
                    fail(e.line, "VSI index out of range: '" + k + "'");
                if (!apply_vsi_key(cfg.vsis[idx - 1], field, v))
                    fail(e.line, "unknown VSI field '" + field + "'");
            }
        } else {
            fail(e.line, "unknown key '" + k + "'");
        }
    }

    cfg.dc.V_DC_ref = cfg.control.V_DC_ref;
    cfg.mppt.v_max = cfg.pv.V_oc_stc;
    validate_config(cfg);
    return cfg;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigInvalid("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string format_config(const SimulationConfig& c) {
    std::string out;
    const auto kv = [&out](const std::string& k, const std::string& v) {
        out += k + " = " + v + "\n";
    };
    kv("sim.duration", num(c.duration));
    kv("sim.dt", num(c.dt));
    kv("sim.trace_decimation", std::to_string(c.trace_decimation));
    kv("sim.vsi_count", std::to_string(c.vsis.size()));
    kv("sim.droop_mode", c.droop_mode ? "true" : "false");
    kv("sim.ac_only", c.ac_only ? "true" : "false");
    kv("sim.seed", std::to_string(c.seed));
    kv("sim.p_dcload", num(c.p_dcload));
    kv("sim.pcc_load_watts", num(c.pcc_load_watts));
    kv("sim.irradiance", num(c.irradiance));
    kv("sim.temperature", num(c.temperature));
    kv("control.T_S", num(c.control.T_S));
    kv("control.lambda", num(c.control.lambda));
    for (std::size_t i = 0; i < c.control.betas.size(); ++i)
        kv("control.beta." + std::to_string(i + 1), num(c.control.betas[i]));
    kv("control.v_ref_peak", num(c.control.v_ref_peak));
    kv("control.v_ref_freq", num(c.control.v_ref_freq));
    kv("control.V_DC_ref", num(c.control.V_DC_ref));
    kv("control.joint_search", c.control.joint_search ? "true" : "false");
    kv("control.actuation_delay", std::to_string(c.control.actuation_delay));
    kv("dc.L_PV", num(c.dc.L_PV));
    kv("dc.C_PV", num(c.dc.C_PV));
    kv("dc.L_bat", num(c.dc.L_bat));
    kv("dc.C_bat", num(c.dc.C_bat));
    kv("dc.R_parasitic", num(c.dc.R_parasitic));
    kv("dc.V_bat", num(c.dc.V_bat));
    kv("dc.R_bat", num(c.dc.R_bat));
    for (std::size_t j = 0; j < c.vsis.size(); ++j) {
        const std::string p = "vsi." + std::to_string(j + 1) + ".";
        const VsiParams& v = c.vsis[j];
        kv(p + "R_F", num(v.R_F));
        kv(p + "L_F", num(v.L_F));
        kv(p + "C_f", num(v.C_f));
        kv(p + "R_T", num(v.R_T));
        kv(p + "L_T", num(v.L_T));
        kv(p + "V_in", num(v.V_in));
        if (v.local_load_ohms) kv(p + "local_load_ohms", num(*v.local_load_ohms));
    }
    kv("pv.I_sc_stc", num(c.pv.I_sc_stc));
    kv("pv.V_oc_stc", num(c.pv.V_oc_stc));
    kv("pv.diode_ideality", num(c.pv.diode_ideality));
    kv("pv.series_cells", std::to_string(c.pv.series_cells));
    kv("pv.parallel_strings", std::to_string(c.pv.parallel_strings));
    kv("pv.temp_coeff_isc", num(c.pv.temp_coeff_isc));
    kv("pv.R_s", num(c.pv.R_s));
    kv("pv.R_sh", num(c.pv.R_sh));
    kv("mppt.step_volts", num(c.mppt.step_volts));
    kv("mppt.epsilon_volts", num(c.mppt.epsilon_volts));
    kv("mppt.conductance_tol", num(c.mppt.conductance_tol));
    kv("mppt.power_filter_alpha", num(c.mppt.power_filter_alpha));
    kv("mppt.anchor_gain", num(c.mppt.anchor_gain));
    kv("mppt.period_steps", std::to_string(c.mppt_period_steps));
    kv("droop.f0", num(c.droop.f0));
    kv("droop.E0", num(c.droop.E0));
    kv("droop.m_p", num(c.droop.m_p));
    kv("droop.n_q", num(c.droop.n_q));
    kv("droop.power_filter_hz", num(c.droop.power_filter_hz));
    for (const ScenarioEvent& e : c.events) {
        std::string line = num(e.time) + " " + to_string(e.kind);
        if (e.kind == ScenarioEvent::Kind::kBetaChange) line += " " + std::to_string(e.index);
        line += " " + num(e.value);
        kv("event", line);
    }
    return out;
}

}  // namespace gridmpc
