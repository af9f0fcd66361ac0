#include "herd/specfun.hpp"

#include <cmath>
#include <limits>

namespace herd {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_gamma(double x) {
    // valid for x >= 0.5
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        acc += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    // split the power so intermediate values stay in range near x = 170
    const double half_pow = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * kPi) * half_pow * std::exp(-t) * half_pow * acc;
}

double erf_series(double x) {
    // erf(x) = 2/sqrt(pi) * sum (-1)^n x^{2n+1} / (n! (2n+1))
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 80; ++n) {
        term *= -x2 / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum))
            break;
    }
    return 2.0 / std::sqrt(kPi) * sum;
}

double erfc_cf(double x) {
    // sqrt(pi) e^{x^2} erfc(x) = 1/(x+ (1/2)/(x+ 1/(x+ (3/2)/(x+ ...))))
    // evaluated with the modified Lentz algorithm; x >= 2.
    const double tiny = 1e-300;
    double f = x > tiny ? x : tiny;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < 200; ++n) {
        const double a = 0.5 * n;
        d = x + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return std::exp(-x * x) / (std::sqrt(kPi) * f);
}

// Hankel large-argument expansion; accurate for x >= 16, |order| <= ~2.5.
double bessel_j_asymptotic(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(term) >= prev)
            break; // asymptotic series started to diverge
        prev = std::abs(term);
        const int phase = (k / 2) % 2; // 0: +, 1: -
        const double signed_term = phase ? -term : term;
        if (k % 2 == 1)
            q += signed_term;
        else
            p += signed_term;
        if (std::abs(term) < 1e-17)
            break;
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (std::cos(chi) * p - std::sin(chi) * q);
}

double bessel_j_series(double nu, double x) {
    // ascending series; cancellation stays below ~1e-9 for x <= 16
    const double x2 = 0.25 * x * x;
    double term = std::pow(0.5 * x, nu) / gamma_fn(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= -x2 / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300) && k > 4)
            break;
    }
    return sum;
}

// McMahon expansion for the k-th zero of J_nu.
double mcmahon_zero(double nu, int k) {
    const double mu = 4.0 * nu * nu;
    const double beta = (k + 0.5 * nu - 0.25) * kPi;
    const double b8 = 8.0 * beta;
    const double c1 = (mu - 1.0) / b8;
    const double c2 = 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    const double c3 = 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) /
                      (15.0 * b8 * b8 * b8 * b8 * b8);
    return beta - c1 - c2 - c3;
}

} // namespace

double gamma_fn(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: argument must be positive");
    if (x > 171.62)
        throw std::domain_error("gamma_fn: argument overflows double range");
    if (x < 0.5)
        return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
    return lanczos_gamma(x);
}

double erfc_fn(double x) {
    if (x < 0.0)
        return 2.0 - erfc_fn(-x);
    if (x < 2.0)
        return 1.0 - erf_series(x);
    if (x > 26.7)
        return 0.0; // below double underflow threshold
    return erfc_cf(x);
}

double bessel_j(BesselOrder order, double x) {
    const double nu = order.nu;
    if (x < 0.0)
        throw std::domain_error("bessel_j: argument must be non-negative");
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    if (x < 16.0)
        return bessel_j_series(nu, x);

    if (nu <= 1.5)
        return bessel_j_asymptotic(nu, x);

    // upward recurrence from fractional base orders; stable while the
    // order stays below the argument
    if (nu + 2.0 < x) {
        double s = nu - std::floor(nu);
        double jm = bessel_j_asymptotic(s, x);
        double jc = bessel_j_asymptotic(s + 1.0, x);
        for (s += 1.0; s < nu - 0.5; s += 1.0) {
            const double jn = (2.0 * s / x) * jc - jm;
            jm = jc;
            jc = jn;
        }
        return jc;
    }
    return bessel_j_series(nu, x);
}

Eigen::ArrayXd bessel_zeros(BesselOrder order, int count) {
    if (count < 1)
        throw std::invalid_argument("bessel_zeros: count must be >= 1");
    const double nu = order.nu;

    Eigen::ArrayXd zeros(count);
    double prev = 0.0;
    for (int k = 1; k <= count; ++k) {
        double guess = mcmahon_zero(nu, k);
        double lo = std::max(prev + 0.3, guess - 1.2);
        double hi = guess + 1.2;

        auto f = [&](double x) { return bessel_j(order, x); };

        // widen until the bracket straddles a sign change
        double flo = f(lo);
        double fhi = f(hi);
        int widen = 0;
        while (flo * fhi > 0.0 && widen < 60) {
            if (std::abs(flo) < std::abs(fhi))
                lo = std::max(prev + 1e-6, lo - 0.4);
            else
                hi += 0.4;
            flo = f(lo);
            fhi = f(hi);
            ++widen;
        }
        if (flo * fhi > 0.0)
            throw std::runtime_error("bessel_zeros: failed to bracket zero");

        for (int it = 0; it < 80 && hi - lo > 1e-13 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (flo * fm <= 0.0) {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        zeros(k - 1) = 0.5 * (lo + hi);
        prev = zeros(k - 1);
    }
    return zeros;
}

} // namespace herd
