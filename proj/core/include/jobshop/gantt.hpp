#pragma once

#include <string>

#include "jobshop/core.hpp"

namespace jobshop {

struct GanttOptions {
    double pixels_per_time_unit = 0.0;  // 0 picks a scale that fits 1000 px
    double row_height = 30.0;
    std::string title;
};

// Machines on rows, time on the x axis, one rect per scheduled operation.
// Each rect carries data-job, data-operation, data-start and data-end
// attributes. The output depends only on the schedule and options.
std::string render_gantt_svg(const Schedule& schedule, const GanttOptions& options = {});

}  // namespace jobshop
