#include "herd/analysis.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace herd {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct LogLogFit {
    double slope = 0.0;
    double residual_rms = 0.0;
    int n_points = 0;
};

LogLogFit loglog_fit(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                     double lo, double hi) {
    std::vector<double> lx, ly;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (x(k) >= lo && x(k) <= hi && x(k) > 0.0 && y(k) > 0.0) {
            lx.push_back(std::log10(x(k)));
            ly.push_back(std::log10(y(k)));
        }
    }
    const auto n = static_cast<int>(lx.size());
    if (n < 5)
        throw std::invalid_argument("fit: fewer than 5 positive points in window");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0)
        throw std::invalid_argument("fit: degenerate abscissa range");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    double ss = 0.0;
    for (int k = 0; k < n; ++k) {
        const double r = ly[k] - (intercept + slope * lx[k]);
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n), n};
}

} // namespace

LogHistogram estimate_pdf(const std::vector<UniformSeries>& set, int bins_per_decade) {
    if (bins_per_decade < 4)
        throw std::invalid_argument("estimate_pdf: need at least 4 bins per decade");
    if (set.empty())
        throw std::invalid_argument("estimate_pdf: no input series");

    double vmin = std::numeric_limits<double>::max();
    double vmax = 0.0;
    double total = 0.0;
    for (const auto& s : set) {
        for (Eigen::Index k = 0; k < s.size(); ++k) {
            const double v = s.values(k);
            if (!(v > 0.0))
                throw std::domain_error("estimate_pdf: samples must be positive");
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
        total += static_cast<double>(s.size());
    }
    if (!(vmax > vmin))
        throw std::invalid_argument("estimate_pdf: degenerate value range");

    const double decades = std::log10(vmax / vmin);
    const auto n_bins = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::ceil(decades * bins_per_decade)));
    const double log_lo = std::log(vmin);
    const double log_step = (std::log(vmax) - log_lo) / static_cast<double>(n_bins);

    LogHistogram h;
    h.edges.resize(n_bins + 1);
    for (Eigen::Index b = 0; b <= n_bins; ++b)
        h.edges(b) = std::exp(log_lo + log_step * static_cast<double>(b));
    h.edges(0) = vmin;
    h.edges(n_bins) = vmax;

    h.counts = Eigen::ArrayXd::Zero(n_bins);
    for (const auto& s : set)
        for (Eigen::Index k = 0; k < s.size(); ++k) {
            auto b = static_cast<Eigen::Index>((std::log(s.values(k)) - log_lo) / log_step);
            b = std::clamp<Eigen::Index>(b, 0, n_bins - 1);
            h.counts(b) += 1.0;
        }

    h.total = total;
    const auto widths = (h.edges.tail(n_bins) - h.edges.head(n_bins)).eval();
    h.density = h.counts / (total * widths);
    return h;
}

LogHistogram estimate_pdf(const UniformSeries& series, int bins_per_decade) {
    return estimate_pdf(std::vector<UniformSeries>{series}, bins_per_decade);
}

Spectrum estimate_psd(const std::vector<UniformSeries>& set, int segment_len) {
    if (set.empty())
        throw std::invalid_argument("estimate_psd: no input series");
    if (segment_len < 8 || (segment_len & (segment_len - 1)) != 0)
        throw std::invalid_argument("estimate_psd: segment_len must be a power of two >= 8");
    const double dt = set.front().dt;
    for (const auto& s : set) {
        if (s.size() < segment_len)
            throw std::invalid_argument("estimate_psd: series shorter than segment_len");
        if (std::abs(s.dt - dt) > 1e-9 * dt)
            throw std::invalid_argument("estimate_psd: mixed sampling steps");
    }

    const Eigen::Index half = segment_len / 2;
    Eigen::ArrayXd window(segment_len);
    for (Eigen::Index i = 0; i < segment_len; ++i)
        window(i) = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                          static_cast<double>(segment_len)));
    const double wpow = (window * window).sum();
    const double fs = 1.0 / dt;

    Spectrum spec;
    spec.freq.resize(half);
    for (Eigen::Index k = 1; k <= half; ++k)
        spec.freq(k - 1) = static_cast<double>(k) * fs / static_cast<double>(segment_len);
    spec.power = Eigen::ArrayXd::Zero(half);

    Eigen::FFT<double> fft;
    std::vector<double> buf(static_cast<std::size_t>(segment_len));
    std::vector<std::complex<double>> out;

    for (const auto& s : set) {
        const Eigen::Index n_seg = s.size() / segment_len;
        for (Eigen::Index seg = 0; seg < n_seg; ++seg) {
            const auto block = s.values.segment(seg * segment_len, segment_len);
            const double mean = block.mean();
            for (Eigen::Index i = 0; i < segment_len; ++i)
                buf[static_cast<std::size_t>(i)] = (block(i) - mean) * window(i);
            fft.fwd(out, buf);
            for (Eigen::Index k = 1; k <= half; ++k) {
                const double mag2 = std::norm(out[static_cast<std::size_t>(k)]);
                const double one_sided = (k == half) ? 1.0 : 2.0;
                spec.power(k - 1) += one_sided * mag2 / (fs * wpow);
            }
            ++spec.segments_averaged;
        }
    }
    if (spec.segments_averaged == 0)
        throw std::invalid_argument("estimate_psd: no complete segments");
    spec.power /= static_cast<double>(spec.segments_averaged);
    return spec;
}

Spectrum estimate_psd(const UniformSeries& series, int segment_len) {
    return estimate_psd(std::vector<UniformSeries>{series}, segment_len);
}

ExponentReport fit_powerlaw(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                            double lo, double hi) {
    if (x.size() != y.size())
        throw std::invalid_argument("fit_powerlaw: size mismatch");
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("fit_powerlaw: need 0 < lo < hi");
    const LogLogFit f = loglog_fit(x, y, lo, hi);
    ExponentReport rep;
    rep.exponent = -f.slope;
    rep.window_lo = lo;
    rep.window_hi = hi;
    rep.residual_rms = f.residual_rms;
    rep.n_points = f.n_points;
    return rep;
}

ExponentReport fit_powerlaw(const LogHistogram& hist, double lo, double hi) {
    return fit_powerlaw(hist.centers(), hist.density, lo, hi);
}

ExponentReport fit_powerlaw(const Spectrum& spectrum, double lo, double hi) {
    return fit_powerlaw(spectrum.freq, spectrum.power, lo, hi);
}

FluctuationSurface mfdfa(const UniformSeries& series, const Eigen::ArrayXd& q_grid,
                         const Eigen::ArrayXi& s_grid, int detrend_order) {
    const Eigen::Index n = series.size();
    if (q_grid.size() == 0 || s_grid.size() == 0)
        throw std::invalid_argument("mfdfa: empty q or s grid");
    if (detrend_order < 1)
        throw std::invalid_argument("mfdfa: detrend order must be >= 1");
    for (Eigen::Index i = 0; i < s_grid.size(); ++i) {
        if (s_grid(i) < 2 * (detrend_order + 2))
            throw std::invalid_argument("mfdfa: segment size below 2(m+2)");
        if (n < 4 * s_grid(i))
            throw std::invalid_argument("mfdfa: series shorter than 4*max(s)");
    }

    // profile of the increments
    Eigen::ArrayXd profile(n);
    const double mean = series.values.mean();
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        acc += series.values(k) - mean;
        profile(k) = acc;
    }

    FluctuationSurface surf;
    surf.q = q_grid;
    surf.s = s_grid;
    surf.fq.resize(q_grid.size(), s_grid.size());
    surf.detrend_order = detrend_order;

    for (Eigen::Index si = 0; si < s_grid.size(); ++si) {
        const Eigen::Index s = s_grid(si);
        const Eigen::Index n_s = n / s;

        // detrending projector for this segment size, on a scaled
        // abscissa for conditioning
        Eigen::MatrixXd vand(s, detrend_order + 1);
        for (Eigen::Index i = 0; i < s; ++i) {
            const double u =
                (static_cast<double>(i) - 0.5 * static_cast<double>(s - 1)) /
                static_cast<double>(s);
            double p = 1.0;
            for (int d = 0; d <= detrend_order; ++d) {
                vand(i, d) = p;
                p *= u;
            }
        }
        const Eigen::MatrixXd pinv =
            (vand.transpose() * vand).ldlt().solve(vand.transpose());

        Eigen::ArrayXd f2(2 * n_s);
        Eigen::VectorXd seg(s);
        for (Eigen::Index v = 0; v < 2 * n_s; ++v) {
            const Eigen::Index start = v < n_s ? v * s : n - (v - n_s + 1) * s;
            seg = profile.segment(start, s);
            const Eigen::VectorXd coef = pinv * seg;
            const Eigen::VectorXd resid = seg - vand * coef;
            f2(v) = resid.squaredNorm() / static_cast<double>(s);
        }

        Eigen::Index zeros_here = 0;
        for (Eigen::Index v = 0; v < 2 * n_s; ++v)
            if (f2(v) <= 0.0)
                ++zeros_here;
        surf.zero_variance_segments += static_cast<int>(zeros_here);

        for (Eigen::Index qi = 0; qi < q_grid.size(); ++qi) {
            const double q = q_grid(qi);
            if (q == 0.0) {
                double lsum = 0.0;
                Eigen::Index cnt = 0;
                for (Eigen::Index v = 0; v < 2 * n_s; ++v)
                    if (f2(v) > 0.0) {
                        lsum += std::log(f2(v));
                        ++cnt;
                    }
                surf.fq(qi, si) =
                    cnt > 0 ? std::exp(lsum / (2.0 * static_cast<double>(cnt))) : 0.0;
            } else if (q < 0.0) {
                double sum = 0.0;
                Eigen::Index cnt = 0;
                for (Eigen::Index v = 0; v < 2 * n_s; ++v)
                    if (f2(v) > 0.0) {
                        sum += std::pow(f2(v), 0.5 * q);
                        ++cnt;
                    }
                surf.fq(qi, si) =
                    cnt > 0 ? std::pow(sum / static_cast<double>(cnt), 1.0 / q) : 0.0;
            } else {
                double sum = 0.0;
                for (Eigen::Index v = 0; v < 2 * n_s; ++v)
                    sum += std::pow(f2(v), 0.5 * q);
                surf.fq(qi, si) = std::pow(sum / (2.0 * static_cast<double>(n_s)), 1.0 / q);
            }
        }
    }
    return surf;
}

std::vector<ExponentReport> hurst_spectrum(const FluctuationSurface& surface,
                                           double s_lo, double s_hi) {
    Eigen::ArrayXd s_values = surface.s.cast<double>();
    Eigen::Index in_window = 0;
    for (Eigen::Index i = 0; i < s_values.size(); ++i)
        if (s_values(i) >= s_lo && s_values(i) <= s_hi)
            ++in_window;
    if (in_window < 4)
        throw std::invalid_argument("hurst_spectrum: fewer than 4 segment sizes in window");

    std::vector<ExponentReport> out;
    out.reserve(static_cast<std::size_t>(surface.q.size()));
    for (Eigen::Index qi = 0; qi < surface.q.size(); ++qi) {
        const Eigen::ArrayXd fq = surface.fq.row(qi).array().transpose();
        const LogLogFit f = loglog_fit(s_values, fq, s_lo, s_hi);
        ExponentReport rep;
        rep.exponent = f.slope; // F_q(s) ~ s^{h(q)}
        rep.window_lo = s_lo;
        rep.window_hi = s_hi;
        rep.residual_rms = f.residual_rms;
        rep.n_points = f.n_points;
        out.push_back(rep);
    }
    return out;
}

Eigen::ArrayXd default_q_grid() {
    std::vector<double> q;
    for (double v = -10.0; v <= -2.0; v += 2.0)
        q.push_back(v);
    q.push_back(-1.0);
    q.push_back(-0.5);
    q.push_back(0.0);
    q.push_back(0.5);
    q.push_back(1.0);
    for (double v = 2.0; v <= 10.0; v += 1.0)
        q.push_back(v);
    return Eigen::Map<Eigen::ArrayXd>(q.data(), static_cast<Eigen::Index>(q.size()));
}

Eigen::ArrayXi default_s_grid(Eigen::Index series_length) {
    const double lo = 16.0;
    const double hi = static_cast<double>(series_length) / 8.0;
    if (hi <= lo)
        throw std::invalid_argument("default_s_grid: series too short");
    const int points = 20;
    std::vector<int> s;
    for (int k = 0; k < points; ++k) {
        const double v =
            lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
        const int si = static_cast<int>(std::lround(v));
        if (s.empty() || si > s.back())
            s.push_back(si);
    }
    return Eigen::Map<Eigen::ArrayXi>(s.data(), static_cast<Eigen::Index>(s.size()));
}

} // namespace herd
