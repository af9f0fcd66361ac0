#pragma once

#include "herd/series.hpp"

namespace herd {

// Bass diffusion: dX/dt = (N - X)(sigma + (h/N) X), X(0) = 0.
struct BassParams {
    int n_potential = 1000;
    double sigma = 0.01; // innovation coefficient
    double h = 0.275;    // imitation coefficient

    void validate() const;
};

// Classical RK4 solution of the adoption ODE on a uniform grid
// t = 0, dt, ..., covering [0, horizon].  The internal step equals the
// grid step.
UniformSeries bass_ode_solve(const BassParams& params, double horizon, double dt);

// Adoption rate per observation window: forward differences of X over
// windows of width tau, divided by tau.  Output sample k covers
// [k tau, (k+1) tau).
UniformSeries adoption_rate_series(const UniformSeries& x_path, double tau);
UniformSeries adoption_rate_series(const EventPath& x_path, double tau);

} // namespace herd
