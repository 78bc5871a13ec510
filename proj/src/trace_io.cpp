#include "gridmpc/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridmpc {
namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    out += buf;
}

std::size_t vsi_count_from_header(const std::string& header) {
    std::size_t m = 0;
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) {
        if (col.rfind("p_vsi", 0) == 0) ++m;
    }
    if (m == 0) throw std::runtime_error("trace header has no p_vsi columns");
    return m;
}

}  // namespace

std::string trace_csv_header(std::size_t m) {
    std::string h = "t,v_dc,v_pv,i_pv,p_pv,p_bat,p_dcload";
    for (std::size_t j = 1; j <= m; ++j) h += ",p_vsi" + std::to_string(j);
    h += ",v_pcc_rms,f_pcc";
    for (std::size_t j = 1; j <= m; ++j) h += ",f_bus" + std::to_string(j);
    for (std::size_t j = 1; j <= m; ++j) h += ",chosen_vector" + std::to_string(j);
    h += ",pv_switch,bat_switch";
    return h;
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
    const std::size_t m = trace.empty() ? 2 : trace.front().p_vsi.size();
    std::string out = trace_csv_header(m);
    out += '\n';

    for (const TraceRow& r : trace) {
        append_number(out, r.t);
        for (double v : {r.v_dc, r.v_pv, r.i_pv, r.p_pv, r.p_bat, r.p_dcload}) {
            out += ',';
            append_number(out, v);
        }
        for (double v : r.p_vsi) {
            out += ',';
            append_number(out, v);
        }
        out += ',';
        append_number(out, r.v_pcc_rms);
        out += ',';
        append_number(out, r.f_pcc);
        for (double v : r.f_bus) {
            out += ',';
            append_number(out, v);
        }
        for (int n : r.chosen_vectors) out += ',' + std::to_string(n);
        out += ',' + std::to_string(r.pv_switch);
        out += ',' + std::to_string(r.bat_switch);
        out += '\n';
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);

    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty trace file: " + path);
    const std::size_t m = vsi_count_from_header(line);

    std::vector<TraceRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        const std::size_t expected = 9 + 3 * m + 2;
        if (cells.size() != expected)
            throw std::runtime_error("bad trace row in " + path + ": " + line);

        TraceRow r;
        std::size_t i = 0;
        const auto num = [&] { return std::strtod(cells[i++].c_str(), nullptr); };
        r.t = num();
        r.v_dc = num();
        r.v_pv = num();
        r.i_pv = num();
        r.p_pv = num();
        r.p_bat = num();
        r.p_dcload = num();
        r.p_vsi.resize(m);
        for (std::size_t j = 0; j < m; ++j) r.p_vsi[j] = num();
        r.v_pcc_rms = num();
        r.f_pcc = num();
        r.f_bus.resize(m);
        for (std::size_t j = 0; j < m; ++j) r.f_bus[j] = num();
        r.chosen_vectors.resize(m);
        for (std::size_t j = 0; j < m; ++j)
            r.chosen_vectors[j] = static_cast<int>(std::strtol(cells[i++].c_str(), nullptr, 10));
        r.pv_switch = static_cast<int>(std::strtol(cells[i++].c_str(), nullptr, 10));
        r.bat_switch = static_cast<int>(std::strtol(cells[i++].c_str(), nullptr, 10));
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace gridmpc
