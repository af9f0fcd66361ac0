#include "herd/sde.hpp"

#include "herd/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace herd {

namespace {

constexpr double kPi = 3.14159265358979323846;

class ParamReader {
public:
    ParamReader(std::string model, const std::map<std::string, double>& params)
        : model_(std::move(model)), params_(params) {}

    double require(const std::string& key) {
        auto it = params_.find(key);
        if (it == params_.end())
            throw std::invalid_argument(model_ + ": missing parameter `" + key + "`");
        used_.insert(key);
        return it->second;
    }

    double get(const std::string& key, double fallback) {
        auto it = params_.find(key);
        if (it == params_.end())
            return fallback;
        used_.insert(key);
        return it->second;
    }

    void finish() const {
        for (const auto& [key, value] : params_)
            if (!used_.count(key))
                throw std::invalid_argument(model_ + ": unknown parameter `" + key + "`");
    }

private:
    std::string model_;
    const std::map<std::string, double>& params_;
    std::set<std::string> used_;
};

void apply_walls(SdeModel& m, ParamReader& p, double lo_default, double hi_default) {
    m.lo = p.get("lo", lo_default);
    m.hi = p.get("hi", hi_default);
    if (!(m.lo < m.hi))
        throw std::invalid_argument(m.name + ": need lo < hi");
}

double reflect_into(double y, double lo, double hi) {
    // fold once per side, then clamp; covers the rare step that jumps
    // past both walls
    if (y < lo) y = lo + (lo - y);
    if (y > hi) y = hi - (y - hi);
    return std::clamp(y, lo, hi);
}

} // namespace

SdeModel make_model(const std::string& name,
                    const std::map<std::string, double>& params) {
    ParamReader p(name, params);
    SdeModel m;
    m.name = name;
    m.time_scale = p.get("sigma_t2", 1.0);

    if (name == "population") {
        const double s1 = p.require("sigma1");
        const double s2 = p.require("sigma2");
        const double h = p.require("h");
        // n > 0 keeps the finite-size part of the diffusion that the
        // large-N limit drops; needed when matching small systems.
        const double n = p.get("n", 0.0);
        m.drift = [=](double x) { return s1 * (1.0 - x) - s2 * x; };
        m.diffusion = [=](double x) {
            double d = 2.0 * h * x * (1.0 - x);
            if (n > 0.0)
                d += (s1 * (1.0 - x) + s2 * x) / n;
            return std::sqrt(std::max(d, 0.0));
        };
        apply_walls(m, p, 0.005, 0.995);
        const double lo = m.lo, hi = m.hi;
        m.scale = [=](double x) {
            return std::max(std::min(x - lo, hi - x), 1e-4 * (hi - lo));
        };
    } else if (name == "power_general") {
        const double eta = p.require("eta");
        const double lambda = p.require("lambda");
        m.drift = [=](double y) { return (eta - 0.5 * lambda) * std::pow(y, 2.0 * eta - 1.0); };
        m.diffusion = [=](double y) { return std::pow(y, eta); };
        apply_walls(m, p, 1e-3, 1e4);
        m.scale = [](double y) { return std::abs(y); };
    } else if (name == "power_qgauss") {
        const double eta = p.require("eta");
        const double lambda = p.require("lambda");
        m.drift = [=](double y) {
            return (eta - 0.5 * lambda) * std::pow(1.0 + y * y, eta - 1.0) * y;
        };
        m.diffusion = [=](double y) { return std::pow(1.0 + y * y, 0.5 * eta); };
        apply_walls(m, p, -1e4, 1e4);
        m.scale = [](double y) { return std::sqrt(1.0 + y * y); };
    } else if (name == "power_expmin") {
        const double eta = p.require("eta");
        const double lambda = p.require("lambda");
        const double mexp = p.require("m");
        const double ymin = p.require("y_min");
        m.drift = [=](double y) {
            return (eta - 0.5 * lambda + 0.5 * mexp * std::pow(ymin / y, mexp)) *
                   std::pow(y, 2.0 * eta - 1.0);
        };
        m.diffusion = [=](double y) { return std::pow(y, eta); };
        apply_walls(m, p, ymin / 10.0, 1e4);
        m.scale = [](double y) { return std::abs(y); };
    } else if (name == "cev") {
        const double eta = p.require("eta");
        const double ymin = p.require("y_min");
        const double mu = p.get("mu", (eta - 1.0) * std::pow(ymin, 2.0 * (eta - 1.0)));
        m.drift = [=](double y) { return mu * y; };
        m.diffusion = [=](double y) { return std::pow(y, eta); };
        apply_walls(m, p, ymin / 10.0, 1e4);
        m.scale = [](double y) { return std::abs(y); };
    } else if (name == "return_two_region") {
        const double eta = p.require("eta");
        const double lambda = p.require("lambda");
        const double eps = p.require("epsilon");
        m.drift = [=](double y) {
            const double w = 1.0 + y * y;
            const double gate = eps * std::sqrt(w) + 1.0;
            return (eta - 0.5 * lambda) * std::pow(w, eta - 1.0) * y / (gate * gate);
        };
        m.diffusion = [=](double y) {
            const double w = 1.0 + y * y;
            return std::pow(w, 0.5 * eta) / (eps * std::sqrt(w) + 1.0);
        };
        apply_walls(m, p, -1e4, 1e4);
        m.scale = [](double y) { return std::sqrt(1.0 + y * y); };
    } else if (name == "herding_y") {
        const double s1 = p.require("sigma1");
        const double s2 = p.require("sigma2");
        const double h = p.require("h");
        m.drift = [=](double y) { return (s1 - y * (s2 - 2.0 * h)) * (1.0 + y); };
        m.diffusion = [=](double y) {
            return std::sqrt(2.0 * h * std::max(y, 0.0)) * (1.0 + y);
        };
        apply_walls(m, p, 1e-3, 1e4);
        m.scale = [](double y) { return std::abs(y); };
    } else if (name == "herding_y_tau") {
        const double e1 = p.require("eps1");
        const double e2 = p.require("eps2");
        const double alpha = p.require("alpha");
        m.drift = [=](double y) {
            return (e1 + (2.0 - e2) * std::pow(y, 1.0 + alpha)) * (1.0 + y);
        };
        m.diffusion = [=](double y) {
            return std::sqrt(2.0 * std::pow(y, 1.0 + alpha)) * (1.0 + y);
        };
        apply_walls(m, p, 1e-3, 1e4);
        m.scale = [](double y) { return std::abs(y); };
    } else if (name == "herding_asym") {
        const double e2 = p.require("eps2");
        const double alpha = p.require("alpha");
        m.drift = [=](double y) { return (2.0 - e2) * std::pow(y, 2.0 + alpha); };
        m.diffusion = [=](double y) { return std::sqrt(2.0) * std::pow(y, 0.5 * (3.0 + alpha)); };
        apply_walls(m, p, 1e-3, 1e4);
        m.scale = [](double y) { return std::abs(y); };
    } else if (name == "herding_cev_lim") {
        const double e1 = p.require("eps1");
        const double alpha = p.require("alpha");
        m.drift = [=](double y) { return e1 * y; };
        m.diffusion = [=](double y) { return std::sqrt(2.0) * std::pow(y, 0.5 * (3.0 + alpha)); };
        apply_walls(m, p, 1e-3, 1e4);
        m.scale = [](double y) { return std::abs(y); };
    } else {
        throw std::invalid_argument("unknown SDE model `" + name + "`");
    }

    p.finish();
    return m;
}

std::vector<std::string> model_names() {
    return {"population",      "power_general", "power_qgauss",
            "power_expmin",    "cev",           "return_two_region",
            "herding_y",       "herding_y_tau", "herding_asym",
            "herding_cev_lim"};
}

namespace {

// Shared stepping core; calls sink(t, y) after every accepted step.
template <typename Sink>
void run_integration(const SdeModel& model, double y0, double horizon,
                     const StepControl& ctl, SeedSpec seed, Sink&& sink) {
    ctl.validate();
    if (!(y0 > model.lo && y0 < model.hi))
        throw std::invalid_argument(model.name + ": y0 outside open domain");
    if (!(horizon > 0.0))
        throw std::invalid_argument("integrate: horizon must be positive");

    Rng rng(seed);
    const double k2 = ctl.kappa * ctl.kappa;

    double t = 0.0;
    double y = y0;
    sink(t, y);

    while (t < horizon) {
        const double a = model.drift(y);
        const double b = model.diffusion(y);
        const double s = model.scale(y);

        double dt = ctl.dt_max;
        if (a != 0.0)
            dt = std::min(dt, s / std::abs(a));
        if (b != 0.0)
            dt = std::min(dt, s * s / (b * b));
        dt = std::clamp(k2 * dt, ctl.dt_min, ctl.dt_max);
        dt = std::min(dt, horizon - t);

        double y_next = y + a * dt + b * std::sqrt(dt) * rng.gauss();
        if (!std::isfinite(y_next)) {
            std::ostringstream msg;
            msg << model.name << ": integration diverged at t=" << t << " y=" << y
                << " dt=" << dt;
            throw IntegrationError(msg.str());
        }

        if (y_next <= model.lo) {
            if (model.lo_policy == Boundary::Error)
                throw BoundaryError(model.name + ": lower boundary hit");
            if (model.lo_policy == Boundary::Absorb) {
                sink(t + dt, model.lo);
                return;
            }
            y_next = reflect_into(y_next, model.lo, model.hi);
        } else if (y_next >= model.hi) {
            if (model.hi_policy == Boundary::Error)
                throw BoundaryError(model.name + ": upper boundary hit");
            if (model.hi_policy == Boundary::Absorb) {
                sink(t + dt, model.hi);
                return;
            }
            y_next = reflect_into(y_next, model.lo, model.hi);
        }

        t += dt;
        y = y_next;
        sink(t, y);
    }
}

} // namespace

EventPath integrate(const SdeModel& model, double y0, double horizon,
                    const StepControl& ctl, SeedSpec seed) {
    std::vector<double> times, values;
    run_integration(model, y0, horizon, ctl, seed, [&](double t, double y) {
        times.push_back(t);
        values.push_back(y);
    });
    EventPath path;
    path.times = Eigen::Map<Eigen::ArrayXd>(times.data(), static_cast<Eigen::Index>(times.size()));
    path.values =
        Eigen::Map<Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return path;
}

UniformSeries integrate_sampled(const SdeModel& model, double y0, double horizon,
                                double dt_out, const StepControl& ctl, SeedSpec seed) {
    if (!(dt_out > 0.0))
        throw std::invalid_argument("integrate_sampled: dt_out must be positive");
    const auto n = static_cast<Eigen::Index>(std::floor(horizon / dt_out + 1e-12)) + 1;

    UniformSeries out;
    out.t0 = 0.0;
    out.dt = dt_out;
    out.values.resize(n);
    out.meta["model"] = model.name;

    Eigen::Index k = 0;
    double y_prev = y0;
    double t_prev = 0.0;
    run_integration(model, y0, horizon, ctl, seed, [&](double t, double y) {
        // y_prev holds on [t_prev, t); emit every grid point inside
        while (k < n && static_cast<double>(k) * dt_out < t - 1e-12 * dt_out) {
            out.values(k) = y_prev;
            ++k;
        }
        y_prev = y;
        t_prev = t;
    });
    while (k < n) {
        out.values(k) = y_prev;
        ++k;
    }
    return out;
}

double predict_beta(double lambda, double eta) {
    if (eta == 1.0)
        throw std::domain_error("predict_beta: exponent undefined for eta = 1");
    if (!(lambda > 1.0))
        throw std::domain_error("predict_beta: lambda must exceed 1");
    return 1.0 + (lambda - 3.0) / (2.0 * (eta - 1.0));
}

double qgaussian_pdf(double lambda, double y) {
    if (!(lambda > 1.0))
        throw std::domain_error("qgaussian_pdf: non-normalizable for lambda <= 1");
    const double norm =
        gamma_fn(0.5 * lambda) / (std::sqrt(kPi) * gamma_fn(0.5 * lambda - 0.5));
    return norm * std::pow(1.0 + y * y, -0.5 * lambda);
}

HerdingExponents herding_exponents(double eps2, double alpha) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("herding_exponents: alpha must be >= 0");
    HerdingExponents e;
    e.eta = 0.5 * (3.0 + alpha);
    e.lambda = eps2 + alpha + 1.0;
    e.pdf_exponent = e.lambda;
    e.beta = 1.0 + (eps2 + alpha - 2.0) / (1.0 + alpha);
    return e;
}

} // namespace herd
