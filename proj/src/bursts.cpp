#include "herd/bursts.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

namespace herd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Zeros of J_nu are reused heavily by the density evaluations; cache
// them per order, growing on demand.  Guarded so the densities stay
// callable from any thread.
Eigen::ArrayXd cached_zeros(double nu, int count) {
    static std::mutex mutex;
    static std::map<double, Eigen::ArrayXd> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& entry = cache[nu];
    if (entry.size() < count)
        entry = bessel_zeros(BesselOrder(nu), std::max(count, 64));
    return entry.head(count);
}

double simpson_panel(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_panel(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_panel(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_panel(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

Eigen::ArrayXd BurstSet::durations() const {
    std::vector<double> d;
    for (const auto& b : bursts)
        if (!b.truncated)
            d.push_back(b.duration);
    if (d.empty())
        return Eigen::ArrayXd();
    return Eigen::Map<Eigen::ArrayXd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

BurstSet extract_bursts(const UniformSeries& series, double threshold) {
    if (series.size() < 2)
        throw std::invalid_argument("extract_bursts: need at least 2 samples");

    BurstSet set;
    set.threshold = threshold;
    auto it = series.meta.find("model");
    if (it != series.meta.end())
        set.source = it->second;

    const Eigen::Index n = series.size();
    const double dt = series.dt;

    Eigen::Index k = 0;
    while (k < n) {
        if (!(series.values(k) > threshold)) {
            ++k;
            continue;
        }
        Eigen::Index end = k;
        while (end < n && series.values(end) > threshold)
            ++end;

        Burst b;
        const bool cut_left = (k == 0);
        const bool cut_right = (end == n);
        b.truncated = cut_left || cut_right;

        double t_start, t_end;
        if (cut_left) {
            t_start = series.time_at(0);
        } else {
            const double v0 = series.values(k - 1);
            const double v1 = series.values(k);
            t_start = series.time_at(k - 1) + dt * (threshold - v0) / (v1 - v0);
        }
        if (cut_right) {
            t_end = series.time_at(n - 1);
        } else {
            const double v0 = series.values(end - 1);
            const double v1 = series.values(end);
            t_end = series.time_at(end - 1) + dt * (v0 - threshold) / (v0 - v1);
        }

        b.start = t_start;
        b.duration = t_end - t_start;

        double peak = series.values(k);
        double area = 0.0;
        for (Eigen::Index i = k; i + 1 < end; ++i) {
            peak = std::max(peak, series.values(i + 1));
            area += 0.5 * (series.values(i) + series.values(i + 1) - 2.0 * threshold) * dt;
        }
        if (!cut_left)
            area += 0.5 * (series.values(k) - threshold) * (series.time_at(k) - t_start);
        if (!cut_right)
            area += 0.5 * (series.values(end - 1) - threshold) *
                    (t_end - series.time_at(end - 1));
        b.peak = peak;
        b.size = area;

        set.bursts.push_back(b);
        k = end;
    }
    return set;
}

double lamperti_threshold(double eta, double h_y) {
    if (!(eta > 1.0))
        throw std::domain_error("lamperti_threshold: eta must exceed 1");
    if (!(h_y > 0.0))
        throw std::domain_error("lamperti_threshold: h_y must be positive");
    return 1.0 / ((eta - 1.0) * std::pow(h_y, eta - 1.0));
}

BesselIndex bessel_index(double eta, double lambda) {
    if (!(eta > 1.0))
        throw std::domain_error("bessel_index: eta must exceed 1");
    BesselIndex idx;
    idx.nu = (lambda - 2.0 * eta + 1.0) / (2.0 * (eta - 1.0));
    idx.dim = 2.0 * (idx.nu + 1.0);
    return idx;
}

BesselMap make_bessel_map(double eta, double lambda, double h_y) {
    const BesselIndex idx = bessel_index(eta, lambda);
    BesselMap map;
    map.eta = eta;
    map.lambda = lambda;
    map.nu = idx.nu;
    map.dim = idx.dim;
    map.h_y = h_y;
    map.h_z = lamperti_threshold(eta, h_y);
    return map;
}

double hitting_density(BesselOrder nu, double z0, double h_z, double t, int terms) {
    if (!(h_z > 0.0) || !(z0 > 0.0) || z0 >= h_z)
        throw std::domain_error("hitting_density: need 0 < z0 < h_z");
    if (!(t > 0.0))
        throw std::invalid_argument("hitting_density: t must be positive");

    // reflection bound: below e^-120 the truncated series is pure
    // cancellation noise, and the true density is indistinguishable
    // from zero
    const double gap = h_z - z0;
    if (gap * gap / (2.0 * t) > 120.0)
        return 0.0;

    const double tau = t / (2.0 * h_z * h_z);
    const double ratio = z0 / h_z;

    int k_needed = terms;
    if (k_needed <= 0) {
        // amplitudes grow ~ j_k; stop once the exponential damping puts
        // the tail 1e-8 below the leading term
        const double j1 = cached_zeros(nu.nu, 1)(0);
        double j = j1;
        int k = 1;
        while (k < 100000 && (j * j - j1 * j1) * tau <= std::log(1e8 * j / j1)) {
            j += kPi;
            ++k;
        }
        k_needed = k + 2;
    }

    const Eigen::ArrayXd zeros = cached_zeros(nu.nu, k_needed);
    const BesselOrder nu_plus(nu.nu + 1.0);

    double sum = 0.0;
    for (Eigen::Index k = 0; k < zeros.size(); ++k) {
        const double j = zeros(k);
        sum += j * bessel_j(nu, ratio * j) / bessel_j(nu_plus, j) *
               std::exp(-j * j * tau);
    }
    const double density = std::pow(h_z, nu.nu - 2.0) / std::pow(z0, nu.nu) * sum;
    // truncation noise can leave a tiny negative residue where the true
    // density vanishes
    return std::max(density, 0.0);
}

BurstDurationPdf::BurstDurationPdf(const BesselMap& map, double t_min,
                                   DurationPdfMode mode)
    : map_(map), t_min_(t_min), mode_(mode) {
    if (!(t_min > 0.0))
        throw std::invalid_argument("BurstDurationPdf: t_min must be positive");
    if (!(map_.nu >= -0.5))
        throw std::domain_error("BurstDurationPdf: nu must be >= -0.5");

    const double hz2 = map_.h_z * map_.h_z;
    zeros_ = cached_zeros(map_.nu, 200);
    const double j1 = zeros_(0);
    const double j_last = zeros_(zeros_.size() - 1);

    // below t_switch the 200-term series is not converged; the closed
    // form is asymptotically exact there
    t_switch_ = 2.0 * hz2 * std::log(1e8) / (j_last * j_last - j1 * j1);

    // C1: term-wise analytic integral of the series over [t_min, inf)
    {
        const double tau_min = t_min_ / (2.0 * hz2);
        int count = 200;
        Eigen::ArrayXd z = zeros_;
        while (std::exp(-z(z.size() - 1) * z(z.size() - 1) * tau_min) > 1e-12 &&
               count < 20000) {
            count *= 2;
            z = cached_zeros(map_.nu, count);
        }
        double norm = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i)
            norm += std::exp(-z(i) * z(i) * tau_min);
        series_norm_ = 1.0 / (2.0 * hz2 * norm);
    }

    // C2: numeric normalization of the closed form over [t_min, inf);
    // integrate in log t (the density is steep near t_min), add the
    // analytic tail of the dominant exp(-rate t)/t piece
    {
        const double rate = j1 * j1 / (2.0 * hz2);
        const double t_hi = 50.0 / rate;
        auto g_log = [this](double u) {
            const double t = std::exp(u);
            return closed_form_unnormalized(t) * t;
        };
        const double body =
            integrate_adaptive(g_log, std::log(t_min_), std::log(t_hi), 1e-10);
        const double tail =
            hz2 * j1 * std::exp(-rate * t_hi) / (rate * t_hi);
        closed_form_norm_ = 1.0 / (body + tail);
    }
}

double BurstDurationPdf::density(double t) const {
    if (!(t >= t_min_))
        throw std::invalid_argument("BurstDurationPdf: t below t_min");
    if (mode_ == DurationPdfMode::ClosedForm || t < t_switch_)
        return closed_form_density(t);
    return series_density(t);
}

double BurstDurationPdf::series_density(double t) const {
    const double tau = t / (2.0 * map_.h_z * map_.h_z);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < zeros_.size(); ++i) {
        const double j = zeros_(i);
        const double term = j * j * std::exp(-j * j * tau);
        sum += term;
        if (term < 1e-16 * sum)
            break;
    }
    return series_norm_ * sum;
}

double BurstDurationPdf::closed_form_unnormalized(double t) const {
    const double hz = map_.h_z;
    const double j1 = zeros_(0);
    const double sqrt_t = std::sqrt(t);
    const double expo = std::exp(-j1 * j1 * t / (2.0 * hz * hz));
    const double power_piece = std::sqrt(kPi / 2.0) * hz * hz * hz *
                               erfc_fn(j1 * sqrt_t / (std::sqrt(2.0) * hz)) /
                               (t * sqrt_t);
    return hz * hz * j1 * expo / t + power_piece;
}

double BurstDurationPdf::closed_form_density(double t) const {
    return closed_form_norm_ * closed_form_unnormalized(t);
}

double burst_duration_pdf(const BesselMap& map, double t, DurationPdfMode mode,
                          double t_min) {
    const BurstDurationPdf pdf(map, t_min, mode);
    return pdf.density(t);
}

} // namespace herd
