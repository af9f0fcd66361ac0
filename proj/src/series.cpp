#include "herd/series.hpp"

#include <cmath>
#include <stdexcept>

namespace herd {

UniformSeries resample(const EventPath& path, double dt) {
    if (dt <= 0.0)
        throw std::invalid_argument("resample: dt must be positive");
    if (path.size() < 1)
        throw std::invalid_argument("resample: empty path");
    const double span = path.times(path.size() - 1) - path.times(0);
    if (span < 2.0 * dt)
        throw std::invalid_argument("resample: path spans less than 2*dt");

    const double t0 = path.times(0);
    const auto n = static_cast<Eigen::Index>(std::floor(span / dt + 1e-12)) + 1;

    UniformSeries out;
    out.t0 = t0;
    out.dt = dt;
    out.values.resize(n);

    Eigen::Index j = 0; // current event; value[j] holds on [times[j], times[j+1])
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        while (j + 1 < path.size() && path.times(j + 1) <= t + 1e-12 * dt)
            ++j;
        out.values(k) = path.values(j);
    }
    return out;
}

UniformSeries moving_average(const UniformSeries& series, int window) {
    if (window < 1)
        throw std::invalid_argument("moving_average: window must be >= 1");
    if (window > series.size())
        throw std::invalid_argument("moving_average: window exceeds series length");

    const Eigen::Index n = series.size() - window + 1;
    UniformSeries out;
    out.t0 = series.t0 + static_cast<double>(window - 1) * series.dt;
    out.dt = series.dt;
    out.meta = series.meta;
    out.values.resize(n);

    // running sum; re-accumulated in blocks to keep rounding drift down
    double sum = series.values.head(window).sum();
    out.values(0) = sum / window;
    for (Eigen::Index k = 1; k < n; ++k) {
        if (k % 65536 == 0) {
            sum = series.values.segment(k, window).sum();
        } else {
            sum += series.values(k + window - 1) - series.values(k - 1);
        }
        out.values(k) = sum / window;
    }
    return out;
}

UniformSeries normalize(const UniformSeries& series) {
    if (series.size() == 0)
        throw std::invalid_argument("normalize: empty series");
    const double scale = series.values.abs().mean();
    if (scale <= 0.0)
        throw std::invalid_argument("normalize: degenerate all-zero series");

    UniformSeries out = series;
    out.values /= scale;
    out.meta["normalize_scale"] = std::to_string(scale);
    return out;
}

} // namespace herd
