#include "herd/bass.hpp"

#include <cmath>
#include <stdexcept>

namespace herd {

void BassParams::validate() const {
    if (n_potential < 1)
        throw std::invalid_argument("BassParams: market potential must be >= 1");
    if (sigma < 0.0 || h < 0.0)
        throw std::invalid_argument("BassParams: coefficients must be non-negative");
    if (!(sigma + h > 0.0))
        throw std::invalid_argument("BassParams: sigma + h must be positive");
}

UniformSeries bass_ode_solve(const BassParams& params, double horizon, double dt) {
    params.validate();
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("bass_ode_solve: need positive horizon and dt");

    const double n = static_cast<double>(params.n_potential);
    const auto rhs = [&](double x) {
        return (n - x) * (params.sigma + params.h / n * x);
    };

    const auto steps = static_cast<Eigen::Index>(std::floor(horizon / dt + 1e-12));
    UniformSeries out;
    out.t0 = 0.0;
    out.dt = dt;
    out.values.resize(steps + 1);
    out.meta["model"] = "bass_ode";

    double x = 0.0;
    out.values(0) = x;
    for (Eigen::Index k = 1; k <= steps; ++k) {
        const double k1 = rhs(x);
        const double k2 = rhs(x + 0.5 * dt * k1);
        const double k3 = rhs(x + 0.5 * dt * k2);
        const double k4 = rhs(x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x = std::min(x, n);
        out.values(k) = x;
    }
    return out;
}

UniformSeries adoption_rate_series(const UniformSeries& x_path, double tau) {
    if (!(tau > 0.0))
        throw std::invalid_argument("adoption_rate_series: tau must be positive");
    const double span = x_path.duration();
    if (span < tau)
        throw std::invalid_argument("adoption_rate_series: path shorter than tau");

    const auto stride = static_cast<Eigen::Index>(std::llround(tau / x_path.dt));
    if (stride < 1 ||
        std::abs(static_cast<double>(stride) * x_path.dt - tau) > 1e-6 * tau)
        throw std::invalid_argument(
            "adoption_rate_series: tau must be a multiple of the sampling step");

    const Eigen::Index n_out = (x_path.size() - 1) / stride;
    UniformSeries out;
    out.t0 = x_path.t0;
    out.dt = tau;
    out.values.resize(n_out);
    out.meta = x_path.meta;
    out.meta["observable"] = "adoption_rate";
    for (Eigen::Index k = 0; k < n_out; ++k)
        out.values(k) =
            (x_path.values((k + 1) * stride) - x_path.values(k * stride)) / tau;
    return out;
}

UniformSeries adoption_rate_series(const EventPath& x_path, double tau) {
    if (!(tau > 0.0))
        throw std::invalid_argument("adoption_rate_series: tau must be positive");
    const double span = x_path.times(x_path.size() - 1) - x_path.times(0);
    if (span < tau)
        throw std::invalid_argument("adoption_rate_series: path shorter than tau");

    const auto n_out = static_cast<Eigen::Index>(std::floor(span / tau + 1e-12));
    UniformSeries out;
    out.t0 = x_path.times(0);
    out.dt = tau;
    out.values.resize(n_out);
    out.meta["observable"] = "adoption_rate";

    // sample-and-hold value at each window edge
    Eigen::Index j = 0;
    auto value_at = [&](double t) {
        while (j + 1 < x_path.size() && x_path.times(j + 1) <= t + 1e-12 * tau)
            ++j;
        return x_path.values(j);
    };
    double prev = value_at(out.t0);
    for (Eigen::Index k = 0; k < n_out; ++k) {
        const double next = value_at(out.t0 + static_cast<double>(k + 1) * tau);
        out.values(k) = (next - prev) / tau;
        prev = next;
    }
    return out;
}

} // namespace herd
