#include "herd/kirman.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace herd {

void KirmanParams::validate() const {
    if (n_agents < 2)
        throw std::invalid_argument("KirmanParams: need at least 2 agents");
    if (sigma1 < 0.0 || sigma2 < 0.0 || h < 0.0)
        throw std::invalid_argument("KirmanParams: rates must be non-negative");
    if (!(sigma1 + h > 0.0))
        throw std::invalid_argument("KirmanParams: sigma1 + h must be positive");
    if (feedback_alpha < 0.0)
        throw std::invalid_argument("KirmanParams: feedback_alpha must be >= 0");
}

void MarketMap::validate() const {
    if (!(r0 > 0.0) || !(pf > 0.0) || !(window_T > 0.0))
        throw std::invalid_argument("MarketMap: r0, pf, window_T must be positive");
}

TransitionRates transition_rates(const KirmanParams& params, int occupied) {
    params.validate();
    const int n = params.n_agents;
    if (occupied < 0 || occupied > n)
        throw std::invalid_argument("transition_rates: X out of [0, N]");

    const double x = static_cast<double>(occupied);
    const double h_eff = params.coupling == Coupling::Extensive
                             ? params.h / static_cast<double>(n)
                             : params.h;

    double s2 = params.sigma2;
    double herd = h_eff;
    if (params.feedback_alpha > 0.0) {
        // y = X/(N-X); capped at N so the rate at X = N stays finite and
        // acts as an instant bounce-back
        const double y = occupied >= n
                             ? static_cast<double>(n)
                             : x / static_cast<double>(n - occupied);
        const double factor = std::pow(y, params.feedback_alpha);
        s2 *= factor;
        herd *= factor;
    }

    TransitionRates r;
    r.up = (n - x) * (params.sigma1 + herd * x);
    r.down = params.unidirectional ? 0.0 : x * (s2 + herd * (n - x));
    return r;
}

namespace {

// Gillespie core; sink(t, X) is called at t = 0 and after each jump.
template <typename Sink>
void run_gillespie(const KirmanParams& params, int x0, double horizon, SeedSpec seed,
                   Sink&& sink) {
    params.validate();
    if (x0 < 0 || x0 > params.n_agents)
        throw std::invalid_argument("simulate: x0 out of [0, N]");
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate: horizon must be positive");

    Rng rng(seed);
    double t = 0.0;
    int x = x0;
    sink(t, x);

    for (;;) {
        const TransitionRates r = transition_rates(params, x);
        const double total = r.up + r.down;
        if (total <= 0.0)
            return; // absorbing state; value holds to the horizon
        t += rng.exponential(total);
        if (t >= horizon)
            return;
        x += rng.uniform01() * total < r.up ? 1 : -1;
        sink(t, x);
    }
}

} // namespace

EventPath simulate(const KirmanParams& params, int x0, double horizon, SeedSpec seed) {
    std::vector<double> times, values;
    run_gillespie(params, x0, horizon, seed, [&](double t, int x) {
        times.push_back(t);
        values.push_back(static_cast<double>(x));
    });
    if (times.back() < horizon) {
        times.push_back(horizon);
        values.push_back(values.back());
    }
    EventPath path;
    path.times = Eigen::Map<Eigen::ArrayXd>(times.data(), static_cast<Eigen::Index>(times.size()));
    path.values =
        Eigen::Map<Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return path;
}

UniformSeries simulate_sampled(const KirmanParams& params, int x0, double horizon,
                               double dt_out, SeedSpec seed) {
    if (!(dt_out > 0.0))
        throw std::invalid_argument("simulate_sampled: dt_out must be positive");
    const auto n = static_cast<Eigen::Index>(std::floor(horizon / dt_out + 1e-12)) + 1;
    const double inv_n = 1.0 / static_cast<double>(params.n_agents);

    UniformSeries out;
    out.t0 = 0.0;
    out.dt = dt_out;
    out.values.resize(n);
    out.meta["model"] = "kirman";

    Eigen::Index k = 0;
    double x_prev = static_cast<double>(x0);
    run_gillespie(params, x0, horizon, seed, [&](double t, int x) {
        while (k < n && static_cast<double>(k) * dt_out < t - 1e-12 * dt_out) {
            out.values(k) = x_prev * inv_n;
            ++k;
        }
        x_prev = static_cast<double>(x);
    });
    while (k < n) {
        out.values(k) = x_prev * inv_n;
        ++k;
    }
    return out;
}

UniformSeries simulate_fixed_step(const KirmanParams& params, int x0, double horizon,
                                  double dt, SeedSpec seed) {
    params.validate();
    if (!(dt > 0.0))
        throw std::invalid_argument("simulate_fixed_step: dt must be positive");
    if (x0 < 0 || x0 > params.n_agents)
        throw std::invalid_argument("simulate_fixed_step: x0 out of [0, N]");

    // the Bernoulli scheme is only meaningful while p_up + p_down <= 1
    double max_total = 0.0;
    for (int x = 0; x <= params.n_agents; ++x) {
        const TransitionRates r = transition_rates(params, x);
        max_total = std::max(max_total, r.up + r.down);
    }
    if (max_total * dt > 1.0)
        throw std::invalid_argument(
            "simulate_fixed_step: dt too large, transition probabilities exceed 1");

    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(std::floor(horizon / dt + 1e-12)) + 1;
    const double inv_n = 1.0 / static_cast<double>(params.n_agents);

    UniformSeries out;
    out.t0 = 0.0;
    out.dt = dt;
    out.values.resize(n);
    out.meta["model"] = "kirman_fixed_step";

    int x = x0;
    out.values(0) = x * inv_n;
    for (Eigen::Index k = 1; k < n; ++k) {
        const TransitionRates r = transition_rates(params, x);
        const double u = rng.uniform01();
        if (u < r.up * dt)
            ++x;
        else if (u < (r.up + r.down) * dt)
            --x;
        out.values(k) = x * inv_n;
    }
    return out;
}

UniformSeries absolute_return(const UniformSeries& xpath) {
    UniformSeries out = xpath;
    out.meta["transform"] = "y = x/(1-x)";
    for (Eigen::Index k = 0; k < xpath.size(); ++k) {
        const double x = xpath.values(k);
        if (!(x >= 0.0) || x >= 1.0)
            throw std::domain_error("absolute_return: x must lie in [0, 1)");
        out.values(k) = x / (1.0 - x);
    }
    return out;
}

std::pair<UniformSeries, UniformSeries> price_and_return(const UniformSeries& xpath,
                                                         const MarketMap& map,
                                                         const UniformSeries& mood) {
    map.validate();
    if (mood.size() != xpath.size() || std::abs(mood.dt - xpath.dt) > 1e-12 * xpath.dt)
        throw std::invalid_argument("price_and_return: mood series not aligned with xpath");

    const auto w = static_cast<Eigen::Index>(std::llround(map.window_T / xpath.dt));
    if (w < 1 || std::abs(static_cast<double>(w) * xpath.dt - map.window_T) >
                     1e-6 * map.window_T)
        throw std::invalid_argument(
            "price_and_return: window_T must be a positive multiple of the sampling step");
    if (w >= xpath.size())
        throw std::invalid_argument("price_and_return: window_T exceeds series span");

    UniformSeries price = xpath;
    price.meta["observable"] = "price";
    for (Eigen::Index k = 0; k < xpath.size(); ++k) {
        const double x = xpath.values(k);
        if (!(x >= 0.0) || x >= 1.0)
            throw std::domain_error("price_and_return: all-chartist state x = 1 is singular");
        price.values(k) = map.pf * std::exp(map.r0 * x / (1.0 - x) * mood.values(k));
    }

    UniformSeries ret;
    ret.t0 = xpath.t0 + static_cast<double>(w) * xpath.dt;
    ret.dt = xpath.dt;
    ret.meta = xpath.meta;
    ret.meta["observable"] = "log_return";
    ret.values.resize(xpath.size() - w);
    for (Eigen::Index k = 0; k < ret.size(); ++k)
        ret.values(k) = std::log(price.values(k + w)) - std::log(price.values(k));

    return {std::move(price), std::move(ret)};
}

UniformSeries mood_series(const UniformSeries& like, double flip_rate, SeedSpec seed) {
    if (flip_rate < 0.0)
        throw std::invalid_argument("mood_series: flip rate must be >= 0");
    Rng rng(seed);
    UniformSeries out;
    out.t0 = like.t0;
    out.dt = like.dt;
    out.values.resize(like.size());
    out.meta["observable"] = "mood";

    // symmetric telegraph process sampled on the grid
    const double p_flip = 0.5 * (1.0 - std::exp(-2.0 * flip_rate * like.dt));
    double state = 1.0;
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        out.values(k) = state;
        if (rng.uniform01() < p_flip)
            state = -state;
    }
    return out;
}

UniformSeries mood_constant(const UniformSeries& like) {
    UniformSeries out;
    out.t0 = like.t0;
    out.dt = like.dt;
    out.values = Eigen::ArrayXd::Ones(like.size());
    out.meta["observable"] = "mood";
    return out;
}

} // namespace herd
