#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>

namespace herd {

// Equally spaced samples; the carrier for every analysis routine.
// Samples live at t0 + k*dt, k = 0..values.size()-1.
struct UniformSeries {
    double t0 = 0.0;
    double dt = 1.0;
    Eigen::ArrayXd values;
    std::map<std::string, std::string> meta;

    Eigen::Index size() const { return values.size(); }
    double time_at(Eigen::Index k) const { return t0 + static_cast<double>(k) * dt; }
    double duration() const { return static_cast<double>(values.size() - 1) * dt; }
};

// Piecewise-constant path produced by event-driven simulation or
// adaptive SDE stepping: value[i] holds on [time[i], time[i+1]).
// Times are strictly increasing.
struct EventPath {
    Eigen::ArrayXd times;
    Eigen::ArrayXd values;

    Eigen::Index size() const { return times.size(); }
};

// Sample-and-hold interpolation of an event path onto a uniform grid
// starting at the path origin.  The last partial interval is dropped.
UniformSeries resample(const EventPath& path, double dt);

// Causal mean over trailing `window` samples; output is shorter by
// window-1 and starts at the time of the first full window.
UniformSeries moving_average(const UniformSeries& series, int window);

// Divide by the mean absolute value; the scale is recorded in
// meta["normalize_scale"].
UniformSeries normalize(const UniformSeries& series);

} // namespace herd
