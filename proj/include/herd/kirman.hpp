#pragma once

#include "herd/rng.hpp"
#include "herd/series.hpp"

#include <utility>

namespace herd {

enum class Coupling { Global, Extensive };

// Two-state herding model.  X agents out of n_agents use the tracked
// strategy; sigma1/sigma2 are the idiosyncratic switch rates, h the
// herding rate.  Extensive coupling replaces h by h/N (local/epidemic
// interaction).  unidirectional freezes the down transition (the Bass
// regime).  feedback_alpha > 0 turns on the state-dependent event rate
// tau(y) = y^-alpha, y = X/(N-X), which scales sigma2 and h by y^alpha.
struct KirmanParams {
    int n_agents = 100;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double h = 1.0;
    Coupling coupling = Coupling::Global;
    double feedback_alpha = 0.0;
    bool unidirectional = false;

    void validate() const;
};

// Walrasian market mapping: price from cleared fundamentalist and
// noise-trader demand, return over a window of length window_T.
struct MarketMap {
    double r0 = 1.0;
    double pf = 1.0;
    double window_T = 1.0;

    void validate() const;
};

struct TransitionRates {
    double up = 0.0;
    double down = 0.0;
};

// Jump rates out of occupation count X.  Both rates are finite and
// non-negative; up vanishes at X = N, down at X = 0.
TransitionRates transition_rates(const KirmanParams& params, int occupied);

// Exact event-driven (Gillespie) simulation of the chain.  The path is
// piecewise constant in the agent count X with +-1 jumps and always
// spans [0, horizon]; if the total rate hits zero (saturated
// unidirectional chain) the state simply holds.
EventPath simulate(const KirmanParams& params, int x0, double horizon, SeedSpec seed);

// Identical dynamics streamed onto a uniform grid of the population
// fraction x = X/N; equivalent to resample(simulate(...)) / N without
// storing the event list.
UniformSeries simulate_sampled(const KirmanParams& params, int x0, double horizon,
                               double dt_out, SeedSpec seed);

// Optional pedagogical fixed-step scheme: per tick, X moves +1/-1 with
// probabilities rate*dt (validated to stay below 1) or stays.
UniformSeries simulate_fixed_step(const KirmanParams& params, int x0, double horizon,
                                  double dt, SeedSpec seed);

// y = x/(1-x); singular at x = 1.
UniformSeries absolute_return(const UniformSeries& xpath);

// Price by Walrasian clearing, P = pf * exp(r0 * x/(1-x) * mood), and
// log-return over window_T.  The mood series must share the grid of
// xpath.  Returns {price, ret}; ret starts window_T later.
std::pair<UniformSeries, UniformSeries> price_and_return(const UniformSeries& xpath,
                                                         const MarketMap& map,
                                                         const UniformSeries& mood);

// Symmetric two-state (+1/-1) Markov mood flips with the given rate,
// sampled on the same grid as the template series.
UniformSeries mood_series(const UniformSeries& like, double flip_rate, SeedSpec seed);

// Constant mood = +1 on the same grid (the default |y| modeling).
UniformSeries mood_constant(const UniformSeries& like);

} // namespace herd
