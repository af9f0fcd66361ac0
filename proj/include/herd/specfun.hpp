#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace herd {

// Bessel index; orders below -1/2 are outside the supported range
// (the first-passage densities diverge there).
struct BesselOrder {
    double nu;

    explicit BesselOrder(double order) : nu(order) {
        if (!(nu >= -0.5))
            throw std::domain_error("BesselOrder: nu must be >= -0.5");
    }
};

// Gamma function on (0, ~171.6), Lanczos approximation (g = 7).
double gamma_fn(double x);

// Complementary error function.  Maclaurin series of erf for |x| < 2,
// Legendre continued fraction beyond; good to near machine precision,
// comfortably inside the 1e-7 budget the burst densities need.
double erfc_fn(double x);

// Bessel function of the first kind, real order >= -1/2, x >= 0.
// Ascending series for x < 16, Hankel asymptotics plus stable upward
// recurrence beyond.
double bessel_j(BesselOrder order, double x);

// First `count` positive zeros of J_nu, ascending.  McMahon expansion
// seeds a bracketed bisection on bessel_j; zeros are accurate to 1e-9
// or better.
Eigen::ArrayXd bessel_zeros(BesselOrder order, int count);

} // namespace herd
