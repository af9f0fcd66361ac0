#include "herd/analysis.hpp"
#include "herd/rng.hpp"
#include "herd/sde.hpp"

#include "helpers.hpp"

#include <doctest.h>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>

using namespace herd;

namespace {

UniformSeries series_of(Eigen::ArrayXd v, double dt = 1.0) {
    UniformSeries s;
    s.dt = dt;
    s.values = std::move(v);
    return s;
}

Eigen::ArrayXd gaussian_noise(Eigen::Index n, SeedSpec seed) {
    Rng rng(seed);
    Eigen::ArrayXd v(n);
    for (Eigen::Index k = 0; k < n; ++k)
        v(k) = rng.gauss();
    return v;
}

// Independent classical DFA (q = 2 only), written from the original
// method: both-end segmentation, linear detrend, RMS over segments.
double classic_dfa_f2(const Eigen::ArrayXd& values, int s) {
    const Eigen::Index n = values.size();
    Eigen::ArrayXd profile(n);
    double acc = 0.0;
    const double mean = values.mean();
    for (Eigen::Index k = 0; k < n; ++k) {
        acc += values(k) - mean;
        profile(k) = acc;
    }
    const Eigen::Index n_s = n / s;
    double sum = 0.0;
    for (Eigen::Index v = 0; v < 2 * n_s; ++v) {
        const Eigen::Index start = v < n_s ? v * s : n - (v - n_s + 1) * s;
        // linear least squares on (i, profile)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < s; ++i) {
            const double y = profile(start + i);
            sx += i;
            sy += y;
            sxx += static_cast<double>(i) * i;
            sxy += i * y;
        }
        const double denom = s * sxx - sx * sx;
        const double slope = (s * sxy - sx * sy) / denom;
        const double icept = (sy - slope * sx) / s;
        double ss = 0.0;
        for (int i = 0; i < s; ++i) {
            const double r = profile(start + i) - (icept + slope * i);
            ss += r * r;
        }
        sum += std::pow(ss / s, 1.0);
    }
    return std::sqrt(sum / (2.0 * static_cast<double>(n_s)));
}

// Monofractal surrogate with known Hurst exponent via spectral
// synthesis: Gaussian spectral amplitudes shaped by f^{-(2H-1)/2} give
// fractional noise whose profile scales with H.
Eigen::ArrayXd fractional_noise(Eigen::Index n, double hurst, SeedSpec seed) {
    Rng rng(seed);
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(n));
    spec[0] = 0.0;
    for (Eigen::Index k = 1; k <= n / 2; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n);
        const double amp = std::pow(f, -(2.0 * hurst - 1.0) / 2.0);
        const std::complex<double> z(rng.gauss(), rng.gauss());
        spec[static_cast<std::size_t>(k)] = amp * z;
        if (k < n - k)
            spec[static_cast<std::size_t>(n - k)] =
                std::conj(spec[static_cast<std::size_t>(k)]);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> time;
    fft.inv(time, spec);
    Eigen::ArrayXd out(n);
    for (Eigen::Index k = 0; k < n; ++k)
        out(k) = time[static_cast<std::size_t>(k)].real();
    return out;
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("pdf of uniform samples is flat") {
    Rng rng(SeedSpec{100, 0});
    Eigen::ArrayXd v(1000000);
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = 1.0 + rng.uniform01();
    const auto hist = estimate_pdf(series_of(std::move(v)), 10);
    const auto c = hist.centers();
    for (Eigen::Index b = 0; b < hist.density.size(); ++b)
        if (c(b) > 1.02 && c(b) < 1.95) // skip edge bins clipped by the range
            CHECK(hist.density(b) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("pdf change of variables: y = e^U has density 1/(y ln 10)") {
    Rng rng(SeedSpec{101, 0});
    Eigen::ArrayXd v(1000000);
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = std::exp(rng.uniform01() * std::log(10.0));
    const auto hist = estimate_pdf(series_of(std::move(v)), 8);
    const auto c = hist.centers();
    for (Eigen::Index b = 1; b + 1 < hist.density.size(); ++b) {
        const double expected = 1.0 / (c(b) * std::log(10.0));
        CHECK(hist.density(b) == doctest::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("pdf normalization identity and domain error") {
    const auto hist = estimate_pdf(series_of(gaussian_noise(20000, {7, 7}).abs() + 0.1), 6);
    const auto widths =
        hist.edges.tail(hist.density.size()) - hist.edges.head(hist.density.size());
    CHECK(std::abs((hist.density * widths).sum() - 1.0) <= 1e-9);

    CHECK_THROWS_AS(estimate_pdf(series_of(gaussian_noise(100, {1, 1})), 8),
                    std::domain_error);
}

TEST_CASE("psd of white noise is flat and Parseval holds") {
    std::vector<UniformSeries> set;
    for (std::uint32_t r = 0; r < 8; ++r)
        set.push_back(series_of(gaussian_noise(1 << 16, {200, r}), 0.5));
    const auto spec = estimate_psd(set, 1 << 12);

    // Parseval: integrated spectrum matches the variance (= 1)
    const double df = spec.freq(1) - spec.freq(0);
    CHECK(spec.power.sum() * df == doctest::Approx(1.0).epsilon(0.03));

    const auto fit = fit_powerlaw(spec, spec.freq(3), spec.freq(spec.freq.size() / 2));
    CHECK(std::abs(fit.exponent) < 0.05);
}

TEST_CASE("psd of a pure sine concentrates at its frequency") {
    const Eigen::Index n = 1 << 14;
    Eigen::ArrayXd v(n);
    const double f0 = 0.125; // bin-aligned for segment length 4096
    for (Eigen::Index k = 0; k < n; ++k)
        v(k) = std::sin(2.0 * M_PI * f0 * static_cast<double>(k));
    const auto spec = estimate_psd(series_of(std::move(v)), 1 << 12);
    Eigen::Index peak = 0;
    spec.power.maxCoeff(&peak);
    CHECK(spec.freq(peak) == doctest::Approx(f0).epsilon(1e-6));
    CHECK(spec.power(peak) > 100.0 * spec.power(peak + 16));
}

TEST_CASE("psd of Brownian motion falls as 1/f^2") {
    std::vector<UniformSeries> set;
    for (std::uint32_t r = 0; r < 8; ++r) {
        Eigen::ArrayXd noise = gaussian_noise(1 << 17, {300, r});
        Eigen::ArrayXd bm(noise.size());
        double acc = 0.0;
        for (Eigen::Index k = 0; k < noise.size(); ++k) {
            acc += noise(k);
            bm(k) = acc;
        }
        set.push_back(series_of(std::move(bm)));
    }
    const auto spec = estimate_psd(set, 1 << 14);
    const auto fit = fit_powerlaw(spec, 1e-3, 1e-1);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("psd argument validation") {
    CHECK_THROWS_AS(estimate_psd(series_of(gaussian_noise(100, {1, 0})), 256),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_psd(series_of(gaussian_noise(1000, {1, 0})), 300),
                    std::invalid_argument);
}

TEST_CASE("fit_powerlaw on exact data") {
    Eigen::ArrayXd x(40), y(40);
    for (Eigen::Index k = 0; k < 40; ++k) {
        x(k) = std::pow(10.0, 0.1 * static_cast<double>(k));
        y(k) = std::pow(x(k), -3.0);
    }
    auto rep = fit_powerlaw(x, y, x(0), x(39));
    CHECK(rep.exponent == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rep.residual_rms <= 1e-12);
    CHECK(rep.n_points == 40);

    // scale equivariance
    auto scaled = fit_powerlaw(x, (y * 7.3).eval(), x(0), x(39));
    CHECK(std::abs(scaled.exponent - rep.exponent) <= 1e-12);

    // constant data has exponent zero
    auto flat = fit_powerlaw(x, Eigen::ArrayXd::Constant(40, 2.5), x(0), x(39));
    CHECK(flat.exponent == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_powerlaw(x, y, x(0), x(2)), std::invalid_argument);
}

TEST_CASE("fit_powerlaw recovers the q-Gaussian tail") {
    Eigen::ArrayXd y(60), p(60);
    for (Eigen::Index k = 0; k < 60; ++k) {
        y(k) = std::pow(10.0, 1.0 + 2.0 * static_cast<double>(k) / 59.0);
        p(k) = qgaussian_pdf(4.0, y(k));
    }
    const auto rep = fit_powerlaw(y, p, 10.0, 1000.0);
    CHECK(rep.exponent == doctest::Approx(4.0).epsilon(0.0125));
}

TEST_CASE("mfdfa: white noise has h(2) near 1/2, Brownian near 3/2") {
    const auto noise = gaussian_noise(1 << 17, {400, 0});
    const auto surf =
        mfdfa(series_of(noise), default_q_grid(), default_s_grid(noise.size()), 1);
    const auto hs = hurst_spectrum(surf, 16.0, static_cast<double>(noise.size()) / 8.0);
    // locate q = 2 in the default grid
    Eigen::Index q2 = -1;
    for (Eigen::Index k = 0; k < surf.q.size(); ++k)
        if (surf.q(k) == 2.0)
            q2 = k;
    REQUIRE(q2 >= 0);
    CHECK(hs[static_cast<std::size_t>(q2)].exponent == doctest::Approx(0.5).epsilon(0.1));

    Eigen::ArrayXd bm(noise.size());
    double acc = 0.0;
    for (Eigen::Index k = 0; k < noise.size(); ++k) {
        acc += noise(k);
        bm(k) = acc;
    }
    const auto surf_bm =
        mfdfa(series_of(std::move(bm)), default_q_grid(), default_s_grid(noise.size()), 1);
    const auto hs_bm = hurst_spectrum(surf_bm, 16.0, static_cast<double>(noise.size()) / 8.0);
    CHECK(hs_bm[static_cast<std::size_t>(q2)].exponent ==
          doctest::Approx(1.5).epsilon(0.0667));
}

TEST_CASE("mfdfa at q=2 equals classical DFA") {
    const auto v = gaussian_noise(20000, {500, 1});
    Eigen::ArrayXd q(1);
    q << 2.0;
    Eigen::ArrayXi s(4);
    s << 16, 32, 64, 128;
    const auto surf = mfdfa(series_of(v), q, s, 1);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double ref = classic_dfa_f2(v, s(i));
        CHECK(std::abs(surf.fq(0, i) - ref) <= 1e-12 * ref);
    }
}

TEST_CASE("mfdfa handles zero-variance segments") {
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(4096);
    v.head(64) = gaussian_noise(64, {1, 2}); // only the head fluctuates
    Eigen::ArrayXd q(3);
    q << -2.0, 0.0, 2.0;
    Eigen::ArrayXi s(2);
    s << 16, 32;
    const auto surf = mfdfa(series_of(std::move(v)), q, s, 1);
    CHECK(surf.zero_variance_segments > 0);
    for (Eigen::Index qi = 0; qi < 3; ++qi)
        for (Eigen::Index si = 0; si < 2; ++si)
            CHECK(std::isfinite(surf.fq(qi, si)));
}

TEST_CASE("mfdfa argument validation") {
    const auto v = gaussian_noise(1000, {1, 3});
    Eigen::ArrayXd q(1);
    q << 2.0;
    Eigen::ArrayXi s_ok(1), s_small(1), s_big(1);
    s_ok << 16;
    s_small << 4;  // below 2(m+2)
    s_big << 400;  // above length/4
    CHECK_NOTHROW(mfdfa(series_of(v), q, s_ok, 1));
    CHECK_THROWS_AS(mfdfa(series_of(v), q, s_small, 1), std::invalid_argument);
    CHECK_THROWS_AS(mfdfa(series_of(v), q, s_big, 1), std::invalid_argument);
}

TEST_CASE("hurst spectrum of a monofractal surrogate is flat at H") {
    const double hurst = 0.8;
    const auto fn = fractional_noise(1 << 16, hurst, {600, 0});
    const auto surf =
        mfdfa(series_of(fn), default_q_grid(), default_s_grid(fn.size()), 1);
    const auto hs = hurst_spectrum(surf, 16.0, static_cast<double>(fn.size()) / 8.0);
    for (Eigen::Index k = 0; k < surf.q.size(); ++k) {
        if (surf.q(k) < -4.0 || surf.q(k) > 4.0)
            continue; // extreme moments of a finite sample are noisy
        CHECK(std::abs(hs[static_cast<std::size_t>(k)].exponent - hurst) <= 0.1);
    }
}

TEST_CASE("h(q) is non-increasing within estimator noise") {
    auto m = make_model("herding_y_tau",
                        {{"eps1", 1.0}, {"eps2", 1.0}, {"alpha", 1.0}});
    StepControl ctl;
    ctl.kappa = 0.1;
    const auto s = integrate_sampled(m, 1.0, 2000.0, 0.05, ctl, SeedSpec{601, 0});
    const auto surf = mfdfa(s, default_q_grid(), default_s_grid(s.size()), 1);
    const auto hs = hurst_spectrum(surf, 16.0, static_cast<double>(s.size()) / 8.0);
    for (std::size_t k = 1; k < hs.size(); ++k)
        CHECK(hs[k].exponent <= hs[k - 1].exponent + 0.05);
}

} // TEST_SUITE
