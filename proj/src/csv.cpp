#include "rendezvous/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rendezvous {

namespace {

std::string render(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

} // namespace

void emit_trace_csv(const EpisodeTrace& trace, std::ostream& out) {
    out << "step,time_s";
    for (int i = 0; i < trace.n; ++i) {
        out << ",x_" << i << ",y_" << i << ",theta_" << i << ",xhat_" << i << ",yhat_"
            << i << ",Px_" << i << ",Py_" << i << ",ux_" << i << ",uy_" << i << ",vl_"
            << i << ",vr_" << i;
    }
    out << "\n";
    for (const StepRecord& rec : trace.records) {
        out << rec.step << "," << render(rec.step * trace.h);
        for (int i = 0; i < trace.n; ++i) {
            out << "," << render(rec.truth[i].x) << "," << render(rec.truth[i].y) << ","
                << render(rec.truth[i].theta) << "," << render(rec.xhat(i)) << ","
                << render(rec.yhat(i)) << "," << render(rec.px(i)) << ","
                << render(rec.py(i)) << "," << render(rec.ux(i)) << ","
                << render(rec.uy(i)) << "," << render(rec.wheels[i].left) << ","
                << render(rec.wheels[i].right);
        }
        out << "\n";
    }
}

void emit_trace_csv(const EpisodeTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    emit_trace_csv(trace, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("write failure on '" + path + "'");
    }
}

EpisodeTrace parse_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open trace file '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty trace file '" + path + "'");
    }
    const std::size_t columns = split(line).size();
    if (columns < 2 || (columns - 2) % 11 != 0) {
        throw std::runtime_error("malformed trace header in '" + path + "'");
    }
    const int n = static_cast<int>((columns - 2) / 11);

    EpisodeTrace trace;
    trace.n = n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() != columns) {
            throw std::runtime_error("malformed trace row in '" + path + "'");
        }
        StepRecord rec;
        rec.step = std::stoi(cells[0]);
        const double time_s = std::stod(cells[1]);
        if (rec.step > 0 && trace.h == 0.0) {
            trace.h = time_s / rec.step;
        }
        rec.truth.resize(n);
        rec.xhat.resize(n);
        rec.yhat.resize(n);
        rec.px.resize(n);
        rec.py.resize(n);
        rec.ux.resize(n);
        rec.uy.resize(n);
        rec.wheels.resize(n);
        for (int i = 0; i < n; ++i) {
            const std::size_t base = 2 + 11 * static_cast<std::size_t>(i);
            rec.truth[i].x = std::stod(cells[base + 0]);
            rec.truth[i].y = std::stod(cells[base + 1]);
            rec.truth[i].theta = std::stod(cells[base + 2]);
            rec.xhat(i) = std::stod(cells[base + 3]);
            rec.yhat(i) = std::stod(cells[base + 4]);
            rec.px(i) = std::stod(cells[base + 5]);
            rec.py(i) = std::stod(cells[base + 6]);
            rec.ux(i) = std::stod(cells[base + 7]);
            rec.uy(i) = std::stod(cells[base + 8]);
            rec.wheels[i].left = std::stod(cells[base + 9]);
            rec.wheels[i].right = std::stod(cells[base + 10]);
        }
        trace.records.push_back(std::move(rec));
    }
    return trace;
}

} // namespace rendezvous
