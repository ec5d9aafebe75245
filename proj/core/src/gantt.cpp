#include "jobshop/gantt.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace jobshop {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Evenly spaced hues so neighbouring job ids stay distinguishable.
std::string job_color(int job, int num_jobs) {
    const int hue = num_jobs > 0 ? (job * 360 / std::max(num_jobs, 1) + job * 47) % 360 : 0;
    return "hsl(" + std::to_string(hue) + ",65%,60%)";
}

}  // namespace

std::string render_gantt_svg(const Schedule& schedule, const GanttOptions& options) {
    const Instance& inst = schedule.instance();
    const Time horizon = std::max<Time>(schedule.makespan(), 1);
    const double scale = options.pixels_per_time_unit > 0 ? options.pixels_per_time_unit : 1000.0 / static_cast<double>(horizon);
    const double left = 60.0;
    const double top = options.title.empty() ? 10.0 : 40.0;
    const double row = options.row_height;
    const double width = left + static_cast<double>(horizon) * scale + 20.0;
    const double height = top + row * inst.num_machines() + 40.0;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" data-makespan=\"" << schedule.makespan() << "\">\n";
    if (!options.title.empty())
        svg << "  <text x=\"" << fmt(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << escape(options.title)
            << "</text>\n";
    for (int m = 0; m < inst.num_machines(); ++m) {
        const double y = top + row * m;
        svg << "  <text x=\"4\" y=\"" << fmt(y + row * 0.65) << "\" font-family=\"sans-serif\" font-size=\"12\">M" << m << "</text>\n";
        for (const auto& s : schedule.machine_sequence(m)) {
            svg << "  <rect x=\"" << fmt(left + static_cast<double>(s.start_time) * scale) << "\" y=\"" << fmt(y + 2) << "\" width=\""
                << fmt(static_cast<double>(s.operation.duration) * scale) << "\" height=\"" << fmt(row - 4) << "\" fill=\""
                << job_color(s.operation.job_id, inst.num_jobs()) << "\" stroke=\"black\" data-job=\"" << s.operation.job_id
                << "\" data-operation=\"" << s.operation.operation_id << "\" data-start=\"" << s.start_time << "\" data-end=\""
                << s.end_time() << "\"><title>J" << s.operation.job_id << " O" << s.operation.position_in_job << " ["
                << s.start_time << ", " << s.end_time() << ")</title></rect>\n";
        }
    }
    const double axis_y = top + row * inst.num_machines() + 15.0;
    svg << "  <line x1=\"" << fmt(left) << "\" y1=\"" << fmt(axis_y - 10) << "\" x2=\"" << fmt(left + static_cast<double>(horizon) * scale)
        << "\" y2=\"" << fmt(axis_y - 10) << "\" stroke=\"black\"/>\n";
    const Time step = std::max<Time>(1, horizon / 10);
    for (Time t = 0; t <= horizon; t += step)
        svg << "  <text x=\"" << fmt(left + static_cast<double>(t) * scale) << "\" y=\"" << fmt(axis_y + 5)
            << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" << t << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace jobshop
