#include "herd/sde.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace herd;

TEST_SUITE("sde") {

TEST_CASE("zero-diffusion model reduces to the ODE limit") {
    SdeModel m;
    m.name = "decay";
    m.drift = [](double y) { return -y; };
    m.diffusion = [](double) { return 0.0; };
    m.scale = [](double y) { return std::abs(y); };
    m.lo = 1e-6;
    m.hi = 10.0;

    StepControl ctl;
    ctl.kappa = 0.03;
    const auto path = integrate(m, 1.0, 1.0, ctl, SeedSpec{1, 0});
    const double y_end = path.values(path.size() - 1);
    CHECK(std::abs(y_end - std::exp(-1.0)) <= 1e-3);
}

TEST_CASE("power_general with eta=1 is driftless GBM: log-increments normal") {
    // short wall-free paths pooled over realizations; the log drifts
    // down at rate 1/2, so long single paths would pin at the floor
    auto m = make_model("power_general", {{"eta", 1.0}, {"lambda", 2.0},
                                          {"lo", 1e-9}, {"hi", 1e9}});
    StepControl ctl;
    ctl.kappa = 0.05;
    const double dt_out = 0.01;
    const double horizon = 8.0;

    std::vector<double> pool;
    for (std::uint32_t r = 0; r < 50; ++r) {
        const auto s = integrate_sampled(m, 1.0, horizon, dt_out, ctl, SeedSpec{7, r});
        for (Eigen::Index k = 0; k + 1 < s.size(); ++k)
            pool.push_back(std::log(s.values(k + 1)) - std::log(s.values(k)));
    }
    const Eigen::ArrayXd incr =
        Eigen::Map<Eigen::ArrayXd>(pool.data(), static_cast<Eigen::Index>(pool.size()));

    // d ln y = -dt/2 + dW: mean -dt/2, variance dt, normal
    const double n = static_cast<double>(incr.size());
    CHECK(std::abs(testutil::mean_of(incr) + 0.5 * dt_out) <=
          4.0 * std::sqrt(dt_out / n));
    CHECK(testutil::var_of(incr) == doctest::Approx(dt_out).epsilon(0.05));
    CHECK(std::abs(testutil::skewness_of(incr)) <= 0.1);
    CHECK(std::abs(testutil::kurtosis_of(incr) - 3.0) <= 0.2);
}

TEST_CASE("population stationary matches the Fokker-Planck solution (unimodal phase)") {
    const double s1 = 16.0, s2 = 16.0, h = 5.0;
    auto m = make_model("population", {{"sigma1", s1}, {"sigma2", s2}, {"h", h}});
    StepControl ctl;
    ctl.kappa = 0.1;
    ctl.dt_min = 1e-7;

    const auto series = integrate_sampled(m, 0.5, 2000.0, 0.1, ctl, SeedSpec{21, 0});
    const Eigen::ArrayXd samples = series.values.tail(series.size() - 100);

    // oracle: p(x) ~ exp(int 2A/D)/D on the reflected window, by quadrature
    const auto density = [&](double x) {
        return std::pow(x, s1 / h - 1.0) * std::pow(1.0 - x, s2 / h - 1.0);
    };
    const double norm = testutil::simpson(density, 0.005, 0.995, 4000);
    const auto cdf = [&](double x) {
        x = std::clamp(x, 0.005, 0.995);
        return testutil::simpson(density, 0.005, x, 2000) / norm;
    };
    CHECK(testutil::ks_vs_cdf(samples, cdf) < 0.025);
}

TEST_CASE("integrate_sampled equals resample(integrate)") {
    auto m = make_model("power_qgauss", {{"eta", 2.0}, {"lambda", 4.0}});
    StepControl ctl;
    const auto path = integrate(m, 0.5, 5.0, ctl, SeedSpec{3, 4});
    const auto direct = integrate_sampled(m, 0.5, 5.0, 0.05, ctl, SeedSpec{3, 4});
    const auto via_path = resample(path, 0.05);
    REQUIRE(direct.size() == via_path.size());
    for (Eigen::Index k = 0; k < direct.size(); ++k)
        CHECK(direct.values(k) == via_path.values(k));
}

TEST_CASE("fixed seed reproduces, different realization differs") {
    auto m = make_model("herding_y_tau",
                        {{"eps1", 0.0}, {"eps2", 2.0}, {"alpha", 1.0}});
    StepControl ctl;
    const auto a = integrate_sampled(m, 1.0, 10.0, 0.01, ctl, SeedSpec{5, 1});
    const auto b = integrate_sampled(m, 1.0, 10.0, 0.01, ctl, SeedSpec{5, 1});
    const auto c = integrate_sampled(m, 1.0, 10.0, 0.01, ctl, SeedSpec{5, 2});
    CHECK((a.values == b.values).all());
    CHECK(!(a.values == c.values).all());
}

TEST_CASE("adaptive agrees with fixed tiny steps in distribution") {
    auto m = make_model("power_general",
                        {{"eta", 2.5}, {"lambda", 4.0}, {"lo", 1.0}, {"hi", 100.0}});
    StepControl adaptive;
    adaptive.kappa = 0.03;
    const auto sa = integrate_sampled(m, 2.0, 2000.0, 0.05, adaptive, SeedSpec{11, 0});

    StepControl fixed;
    fixed.kappa = 1.0;
    fixed.dt_min = 1e-4;
    fixed.dt_max = 1e-4;
    const auto sf = integrate_sampled(m, 2.0, 2000.0, 0.05, fixed, SeedSpec{11, 5});

    const double ks = testutil::ks_two_sample(sa.values.tail(sa.size() - 200),
                                              sf.values.tail(sf.size() - 200));
    CHECK(ks < 0.05);
}

TEST_CASE("boundary policies") {
    auto m = make_model("power_general",
                        {{"eta", 1.5}, {"lambda", 3.0}, {"lo", 0.5}, {"hi", 2.0}});
    m.lo_policy = Boundary::Error;
    StepControl ctl;
    CHECK_THROWS_AS(integrate(m, 0.6, 50.0, ctl, SeedSpec{2, 0}), BoundaryError);

    m.lo_policy = Boundary::Absorb;
    const auto path = integrate(m, 0.6, 50.0, ctl, SeedSpec{2, 0});
    CHECK(path.values(path.size() - 1) == doctest::Approx(0.5));
    CHECK(path.times(path.size() - 1) < 50.0);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(make_model("no_such_model", {}), std::invalid_argument);
    CHECK_THROWS_AS(make_model("population", {{"sigma1", 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        make_model("population",
                   {{"sigma1", 1.0}, {"sigma2", 1.0}, {"h", 1.0}, {"bogus", 2.0}}),
        std::invalid_argument);

    auto m = make_model("power_general", {{"eta", 2.0}, {"lambda", 4.0}});
    StepControl ctl;
    CHECK_THROWS_AS(integrate(m, 1e-9, 1.0, ctl, SeedSpec{}), std::invalid_argument);
    ctl.kappa = 2.0;
    CHECK_THROWS_AS(integrate(m, 1.0, 1.0, ctl, SeedSpec{}), std::invalid_argument);
}

TEST_CASE("predict_beta arithmetic and domain") {
    CHECK(predict_beta(3.0, 2.5) == doctest::Approx(1.0));
    CHECK(predict_beta(4.0, 2.5) == doctest::Approx(4.0 / 3.0));
    CHECK(predict_beta(4.0, 1.5) == doctest::Approx(2.0));
    CHECK_THROWS_AS(predict_beta(4.0, 1.0), std::domain_error);
}

TEST_CASE("qgaussian_pdf values, normalization, domain") {
    CHECK(qgaussian_pdf(2.0, 0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(qgaussian_pdf(3.0, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(qgaussian_pdf(1.0, 0.0), std::domain_error);

    const double integral = testutil::simpson(
        [](double y) { return qgaussian_pdf(4.0, y); }, -100.0, 100.0, 200000);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("herding exponent map") {
    auto e = herding_exponents(2.0, 1.0);
    CHECK(e.eta == doctest::Approx(2.0));
    CHECK(e.lambda == doctest::Approx(4.0));
    CHECK(e.pdf_exponent == doctest::Approx(4.0));
    CHECK(e.beta == doctest::Approx(1.5));

    e = herding_exponents(0.5, 1.0);
    CHECK(e.pdf_exponent == doctest::Approx(2.5));
    CHECK(e.beta == doctest::Approx(0.75));

    e = herding_exponents(2.0, 0.0);
    CHECK(e.pdf_exponent == doctest::Approx(3.0));
    CHECK(e.beta == doctest::Approx(1.0));
}

TEST_CASE("registry formulas match the transformed population model") {
    // herding_y must be the Ito image of the population SDE under
    // y = x/(1-x): a_y = A (1+y)^2 + D (1+y)^3, b_y = sqrt(D) (1+y)^2
    const double s1 = 0.7, s2 = 1.3, h = 2.0;
    auto pop = make_model("population", {{"sigma1", s1}, {"sigma2", s2}, {"h", h}});
    auto hy = make_model("herding_y", {{"sigma1", s1}, {"sigma2", s2}, {"h", h}});
    for (double y : {0.1, 0.5, 1.0, 3.0, 9.0}) {
        const double x = y / (1.0 + y);
        const double a_x = pop.drift(x);
        const double b_x = pop.diffusion(x);
        const double jac = (1.0 + y) * (1.0 + y); // dy/dx = 1/(1-x)^2
        const double a_expected = a_x * jac + b_x * b_x * (1.0 + y) * jac;
        const double b_expected = b_x * jac;
        CHECK(hy.drift(y) == doctest::Approx(a_expected).epsilon(1e-12));
        CHECK(hy.diffusion(y) == doctest::Approx(b_expected).epsilon(1e-12));
    }
}

} // TEST_SUITE
