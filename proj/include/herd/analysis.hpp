#pragma once

#include "herd/series.hpp"

#include <string>
#include <vector>

namespace herd {

// Log-binned empirical density: geometric bin edges, density normalized
// so that sum(density * width) = 1.
struct LogHistogram {
    Eigen::ArrayXd edges;   // n_bins + 1, geometric progression
    Eigen::ArrayXd density; // n_bins
    Eigen::ArrayXd counts;  // n_bins
    double total = 0.0;

    Eigen::ArrayXd centers() const {
        const auto n = density.size();
        return (edges.head(n) * edges.tail(n)).sqrt();
    }
};

// Averaged one-sided periodogram.  Positive frequencies only, DC
// excluded; normalized so that sum(power * df) matches the series
// variance up to window leakage.
struct Spectrum {
    Eigen::ArrayXd freq;
    Eigen::ArrayXd power;
    int segments_averaged = 0;
    std::string window = "hann";
};

// MF-DFA fluctuation functions F_q(s) for a grid of moments q and
// segment sizes s, detrended with polynomials of order m.
struct FluctuationSurface {
    Eigen::ArrayXd q;
    Eigen::ArrayXi s;
    Eigen::MatrixXd fq; // q.size() x s.size()
    int detrend_order = 1;
    int zero_variance_segments = 0;
};

// A fitted power-law exponent plus everything needed to judge it.
struct ExponentReport {
    double exponent = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual_rms = 0.0;
    int n_points = 0;
};

// Log-binned density estimate; requires strictly positive samples.
LogHistogram estimate_pdf(const UniformSeries& series, int bins_per_decade);
LogHistogram estimate_pdf(const std::vector<UniformSeries>& set, int bins_per_decade);

// Welch-style averaged periodogram over non-overlapping, mean-removed,
// Hann-windowed segments, pooled across realizations.  segment_len must
// be a power of two; every series must be at least that long and share
// one sampling step.
Spectrum estimate_psd(const std::vector<UniformSeries>& set, int segment_len);
Spectrum estimate_psd(const UniformSeries& series, int segment_len);

// Least-squares slope on log10-log10 points inside [lo, hi]; the
// reported exponent is the negated slope (so a y ~ x^-3 tail gives 3).
ExponentReport fit_powerlaw(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                            double lo, double hi);
ExponentReport fit_powerlaw(const LogHistogram& hist, double lo, double hi);
ExponentReport fit_powerlaw(const Spectrum& spectrum, double lo, double hi);

// Multifractal detrended fluctuation analysis with both-end
// segmentation (2*N_s segments); q = 0 uses the logarithmic average.
// The series is treated as increments: the analyzed profile is the
// cumulative sum of (value - mean).
FluctuationSurface mfdfa(const UniformSeries& series, const Eigen::ArrayXd& q_grid,
                         const Eigen::ArrayXi& s_grid, int detrend_order);

// Generalized Hurst exponents: per-q slope of log F_q(s) vs log s over
// the fit window.
std::vector<ExponentReport> hurst_spectrum(const FluctuationSurface& surface,
                                           double s_lo, double s_hi);

// Default grids from the MF-DFA conventions used here.
Eigen::ArrayXd default_q_grid();
Eigen::ArrayXi default_s_grid(Eigen::Index series_length);

} // namespace herd
