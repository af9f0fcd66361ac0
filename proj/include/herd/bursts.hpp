#pragma once

#include "herd/series.hpp"
#include "herd/specfun.hpp"

#include <string>
#include <vector>

namespace herd {

// One excursion above the threshold.  Bursts cut off by the series ends
// are flagged truncated; their durations are censored and excluded from
// statistics.
struct Burst {
    double start = 0.0;
    double duration = 0.0;
    double peak = 0.0;
    double size = 0.0; // area above the threshold
    bool truncated = false;
};

struct BurstSet {
    double threshold = 0.0;
    std::vector<Burst> bursts;
    std::string source;

    // durations of complete (non-truncated) bursts
    Eigen::ArrayXd durations() const;
};

// Maximal runs above `threshold`, with crossing times linearly
// interpolated between bracketing samples and sizes by the trapezoid
// rule on (value - threshold)+.
BurstSet extract_bursts(const UniformSeries& series, double threshold);

// Lamperti map l(y) = 1/((eta-1) y^(eta-1)); decreasing, so a burst in y
// above h_y is an excursion of z below h_z = l(h_y).
double lamperti_threshold(double eta, double h_y);

// Bessel index of the transformed power-law SDE:
// nu = (lambda - 2 eta + 1) / (2 (eta - 1)), dim = 2 (nu + 1).
struct BesselIndex {
    double nu;
    double dim;
};
BesselIndex bessel_index(double eta, double lambda);

// Everything needed to map a power-law SDE burst problem onto a Bessel
// first-passage problem.
struct BesselMap {
    double eta;
    double lambda;
    double nu;
    double dim;
    double h_y;
    double h_z;
};
BesselMap make_bessel_map(double eta, double lambda, double h_y);

// First-passage density at level h_z of a Bessel process with the given
// index started from z0 < h_z (Borodin-Salminen series over Bessel
// zeros).  `terms` caps the partial sum; 0 picks the count from a 1e-8
// tail bound at the given t.
double hitting_density(BesselOrder nu, double z0, double h_z, double t, int terms = 0);

enum class DurationPdfMode { Series, ClosedForm };

// Burst-duration density of the transformed SDE, normalized over
// [t_min, inf).  Series mode sums j_k^2 exp(-j_k^2 t / (2 h_z^2)) over
// up to 200 zeros and hands small t to the closed form; closed-form
// mode uses the power law with exponential cut-off everywhere.
class BurstDurationPdf {
public:
    BurstDurationPdf(const BesselMap& map, double t_min, DurationPdfMode mode);

    double density(double t) const; // t in the model's scaled time
    double t_min() const { return t_min_; }
    const BesselMap& map() const { return map_; }

private:
    double series_density(double t) const;
    double closed_form_density(double t) const;
    double closed_form_unnormalized(double t) const;

    BesselMap map_;
    double t_min_;
    DurationPdfMode mode_;
    Eigen::ArrayXd zeros_;
    double series_norm_ = 1.0;      // C1
    double closed_form_norm_ = 1.0; // C2
    double t_switch_ = 0.0;         // series mode falls back below this
};

double burst_duration_pdf(const BesselMap& map, double t, DurationPdfMode mode,
                          double t_min);

} // namespace herd
