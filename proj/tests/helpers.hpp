#pragma once

#include "herd/kirman.hpp"
#include "herd/series.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <vector>

namespace testutil {

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(Eigen::ArrayXd a, Eigen::ArrayXd b) {
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    Eigen::Index i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a(i) <= b(j))
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }
    return d;
}

// One-sample KS distance against an exact CDF.
inline double ks_vs_cdf(Eigen::ArrayXd samples,
                        const std::function<double(double)>& cdf) {
    std::sort(samples.data(), samples.data() + samples.size());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (Eigen::Index k = 0; k < samples.size(); ++k) {
        const double f = cdf(samples(k));
        d = std::max(d, std::abs(static_cast<double>(k) / n - f));
        d = std::max(d, std::abs(static_cast<double>(k + 1) / n - f));
    }
    return d;
}

// Exact stationary distribution of the birth-death chain, as the
// normalized product of rate ratios.  This is the oracle the simulator
// is checked against.
inline Eigen::ArrayXd birth_death_stationary(const herd::KirmanParams& params) {
    const int n = params.n_agents;
    Eigen::ArrayXd logw(n + 1);
    logw(0) = 0.0;
    for (int x = 1; x <= n; ++x) {
        const auto up = herd::transition_rates(params, x - 1).up;
        const auto down = herd::transition_rates(params, x).down;
        logw(x) = logw(x - 1) + std::log(up) - std::log(down);
    }
    const Eigen::ArrayXd w = (logw - logw.maxCoeff()).exp();
    return w / w.sum();
}

// Occupancy-time-weighted histogram of an event path over states 0..n.
inline Eigen::ArrayXd occupancy_histogram(const herd::EventPath& path, int n) {
    Eigen::ArrayXd occ = Eigen::ArrayXd::Zero(n + 1);
    for (Eigen::Index k = 0; k + 1 < path.size(); ++k)
        occ(static_cast<int>(path.values(k))) += path.times(k + 1) - path.times(k);
    return occ / occ.sum();
}

// Composite Simpson integration on a uniform grid (test-side oracle).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n_panels) {
    const int n = 2 * n_panels;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int k = 1; k < n; ++k)
        sum += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Sample moments.
inline double mean_of(const Eigen::ArrayXd& v) { return v.mean(); }
inline double var_of(const Eigen::ArrayXd& v) {
    return (v - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}
inline double skewness_of(const Eigen::ArrayXd& v) {
    const double m = v.mean();
    const double s2 = (v - m).square().mean();
    return (v - m).cube().mean() / std::pow(s2, 1.5);
}
inline double kurtosis_of(const Eigen::ArrayXd& v) {
    const double m = v.mean();
    const double s2 = (v - m).square().mean();
    return (v - m).square().square().mean() / (s2 * s2);
}

} // namespace testutil
