#pragma once

#include "herd/rng.hpp"
#include "herd/series.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace herd {

// Default scaled-time factor, t_s = sigma_t^2 * t, used when series in
// model time are mapped to seconds.
inline constexpr double kSigmaT2Default = 1.0 / 6.0 * 1e-5;

enum class Boundary { Reflect, Error, Absorb };

struct BoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One Ito diffusion dy = a(y) dt + b(y) dW on an open interval, with a
// per-end boundary policy and an optional scaled-time factor.  `scale`
// is the local length scale used by the adaptive stepper; it defaults
// to |y| and is overridden by registry entries whose natural scale
// differs (distance to the nearest wall for the population model,
// sqrt(1+y^2) for the additive-noise models).
struct SdeModel {
    std::string name;
    std::function<double(double)> drift;
    std::function<double(double)> diffusion;
    std::function<double(double)> scale;
    double lo = 0.0;
    double hi = 0.0;
    Boundary lo_policy = Boundary::Reflect;
    Boundary hi_policy = Boundary::Reflect;
    double time_scale = 1.0; // sigma_t^2; model time = time_scale * seconds
};

// Accuracy knobs for the adaptive Euler-Maruyama stepper.
// dt_i = kappa^2 * min(scale/|a|, scale^2/b^2, dt_max), clipped to
// [dt_min, dt_max].
struct StepControl {
    double kappa = 0.03;
    double dt_max = 1.0;
    double dt_min = 1e-10;

    void validate() const {
        if (!(kappa > 0.0 && kappa <= 1.0))
            throw std::invalid_argument("StepControl: kappa must be in (0, 1]");
        if (!(dt_min > 0.0 && dt_min <= dt_max))
            throw std::invalid_argument("StepControl: need 0 < dt_min <= dt_max");
    }
};

// Builds a registry model by name.  Unknown parameter keys raise; every
// numeric parameter (and the walls lo/hi) can be overridden.
// Names: population, power_general, power_qgauss, power_expmin, cev,
// return_two_region, herding_y, herding_y_tau, herding_asym,
// herding_cev_lim.
SdeModel make_model(const std::string& name,
                    const std::map<std::string, double>& params);

std::vector<std::string> model_names();

// Adaptive Euler-Maruyama path, every accepted step recorded.  Suitable
// for short horizons; long runs should use integrate_sampled.
EventPath integrate(const SdeModel& model, double y0, double horizon,
                    const StepControl& ctl, SeedSpec seed);

// Same dynamics, but streams sample-and-hold values on a uniform grid
// instead of storing each step.  Equivalent to resample(integrate(...)).
UniformSeries integrate_sampled(const SdeModel& model, double y0, double horizon,
                                double dt_out, const StepControl& ctl, SeedSpec seed);

// Spectral exponent of the power-law SDE class: beta = 1 + (lambda-3)/(2(eta-1)).
double predict_beta(double lambda, double eta);

// Stationary density of the additive-restriction class,
// P(y) = Gamma(l/2)/(sqrt(pi) Gamma(l/2-1/2)) (1+y^2)^(-l/2).
double qgaussian_pdf(double lambda, double y);

// Exponent map of the feedback herding model (tau(y) = y^-alpha).
struct HerdingExponents {
    double eta;
    double lambda;
    double pdf_exponent;
    double beta;
};
HerdingExponents herding_exponents(double eps2, double alpha);

} // namespace herd
