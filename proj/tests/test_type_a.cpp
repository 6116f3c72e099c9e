#include <doctest.h>

#include <cmath>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "pmdq/errors.hpp"
#include "pmdq/type_a.hpp"

using namespace pmdq;

namespace {

double tri(double x) { return std::abs(x) < 1.0 ? 1.0 - std::abs(x) : 0.0; }

TypeAConfig base() {
    TypeAConfig cfg;
    cfg.spectrum.omega0 = omega0_from_wavelength(1550.0);
    cfg.spectrum.tau_minus = 35.5;
    cfg.sample_post.length = 100.0;
    cfg.sample_post.h = {10.0, 4.9, 0, 0};
    cfg.sample_post.v = {10.002, 4.95, 0, 0};
    return cfg;
}

TypeAConfig random_linear(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TypeAConfig cfg;
    cfg.spectrum.omega0 = 1.2 + 0.2 * u(rng);
    cfg.spectrum.tau_minus = 5.0 + 3.0 * std::abs(u(rng));
    cfg.sample_pre.length = 30.0 * std::abs(u(rng));
    cfg.sample_pre.h = {1.0, 5.0, 0, 0};
    cfg.sample_pre.v = {1.0 + 0.01 * u(rng), 5.0 + 0.05 * u(rng), 0, 0};
    cfg.sample_post.length = 50.0 * std::abs(u(rng));
    cfg.sample_post.h = {2.0, 5.0, 0, 0};
    cfg.sample_post.v = {2.0 + 0.01 * u(rng), 5.0 + 0.05 * u(rng), 0, 0};
    cfg.delays.tau2 = 3.0 * u(rng);
    cfg.delays.tau1 = type_a_dip_center(cfg) + cfg.spectrum.tau_minus * 0.6 * u(rng);
    return cfg;
}

// Direct integral of |Phi|^2 cos(A) cos(B) on a wide window, with A and B
// built from the V - H wavenumbers at +w and -w.
double brute_modulation(const TypeAConfig& cfg, double half_width) {
    struct Ctx {
        const TypeAConfig* cfg;
    } ctx{&cfg};
    gsl_function f;
    f.function = [](double w, void* p) {
        const TypeAConfig& c = *static_cast<Ctx*>(p)->cfg;
        auto dk = [](const Sample& s, double x) { return wavenumber(s.v, x) - wavenumber(s.h, x); };
        const double l1 = c.sample_pre.length;
        const double l2 = c.sample_post.length;
        const double a = l1 * (dk(c.sample_pre, w) - dk(c.sample_pre, -w)) +
                         0.5 * l2 * (dk(c.sample_post, w) - dk(c.sample_post, -w)) +
                         (2.0 * c.delays.tau1 + c.delays.tau2) * w;
        const double b = 0.5 * l2 * (dk(c.sample_post, w) + dk(c.sample_post, -w)) + c.spectrum.omega0 * c.delays.tau2;
        const double x = 0.5 * c.spectrum.tau_minus * w;
        const double s = x == 0.0 ? 1.0 : std::sin(x) / x;
        return s * s * std::cos(a) * std::cos(b);
    };
    f.params = &ctx;
    gsl_set_error_handler_off();
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(200000);
    double result = 0.0, err = 0.0;
    gsl_integration_qag(&f, -half_width, half_width, 1e-12, 1e-11, 200000, GSL_INTEG_GAUSS61, ws, &result, &err);
    gsl_integration_workspace_free(ws);
    return result;
}

}  // namespace

TEST_SUITE("type_a") {
    TEST_CASE("closed form written out by hand") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 20; ++i) {
            const TypeAConfig cfg = random_linear(rng);
            const PMDDelta d1 = pmd_delta(cfg.sample_pre);
            const PMDDelta d2 = pmd_delta(cfg.sample_post);
            const double tm = cfg.spectrum.tau_minus;
            const double arg = (2.0 * cfg.delays.tau1 + 2.0 * d1.dA + d2.dA + cfg.delays.tau2) / tm;
            const double expect =
                2.0 * kPi / tm * std::cos(d2.dphi + cfg.spectrum.omega0 * cfg.delays.tau2) * tri(arg);
            CHECK(type_a_modulation_linear(cfg) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
        }
    }

    TEST_CASE("quadrature agrees with the closed form") {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 20; ++i) {
            const TypeAConfig cfg = random_linear(rng);
            const double peak = 2.0 * kPi / cfg.spectrum.tau_minus;
            CHECK(std::abs(type_a_modulation(cfg) - type_a_modulation_linear(cfg)) < 1e-8 * peak);
        }
    }

    TEST_CASE("quadrature agrees with a direct wide-window integral for dispersive samples") {
        TypeAConfig cfg = base();
        cfg.spectrum.tau_minus = 6.0;
        cfg.sample_post.length = 20.0;
        cfg.sample_post.v.beta = 0.3;
        cfg.sample_post.v.gamma = 0.002;
        cfg.sample_pre.length = 10.0;
        cfg.sample_pre.h = {1.0, 5.0, 0.1, 0.0};
        cfg.sample_pre.v = {1.01, 5.03, 0.2, 0.02};
        for (double t1 : {-2.0, -0.5, 0.0, 1.0}) {
            cfg.delays.tau1 = t1;
            const double half = 150.0 * 2.0 * kPi / cfg.spectrum.tau_minus;
            const double truncation = sinc2_tail_bound(cfg.spectrum.tau_minus, half);
            CHECK(std::abs(type_a_modulation(cfg) - brute_modulation(cfg, half)) < truncation + 1e-8);
        }
    }

    TEST_CASE("unfactorized form is real and equals the factorized one") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            TypeAConfig cfg = random_linear(rng);
            cfg.sample_pre.v.beta = 0.2 * u(rng);
            cfg.sample_post.v.beta = 0.2 * u(rng);
            cfg.sample_post.v.gamma = 0.02 * u(rng);
            const QuadratureResult lit = type_a_modulation_literal(cfg);
            const double fact = type_a_modulation(cfg);
            const double peak = 2.0 * kPi / cfg.spectrum.tau_minus;
            CHECK(std::abs(lit.value.imag()) < 1e-8 * peak);
            CHECK(std::abs(lit.value.real() - fact) < 1e-8 * peak);
        }
    }

    TEST_CASE("even-order pre-BS terms cancel") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 8; ++i) {
            TypeAConfig cfg = random_linear(rng);
            cfg.sample_post.v.beta = 0.1 * u(rng);
            TypeAConfig empty = cfg;
            empty.sample_pre = Sample{};
            cfg.sample_pre.length = 40.0;
            cfg.sample_pre.h = {3.0, 5.0, 0.1, 0.0};
            cfg.sample_pre.v = {3.0 + 0.5 * u(rng), 5.0, 0.1 + 0.5 * u(rng), 0.0};
            const double peak = 2.0 * kPi / cfg.spectrum.tau_minus;
            CHECK(std::abs(type_a_modulation(cfg) - type_a_modulation(empty)) < 1e-8 * peak);
            CHECK(std::abs(type_a_modulation_correlated(cfg) - type_a_modulation(empty)) > 1e-3 * peak);
        }
    }

    TEST_CASE("correlated control coincides with the quantum result without dispersion") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 5; ++i) {
            TypeAConfig cfg = random_linear(rng);
            cfg.sample_pre = Sample{};
            const double peak = 2.0 * kPi / cfg.spectrum.tau_minus;
            CHECK(std::abs(type_a_modulation_correlated(cfg) - type_a_modulation(cfg)) < 1e-8 * peak);
        }
    }

    TEST_CASE("dip center, support and visibility") {
        TypeAConfig cfg = base();
        CHECK(type_a_dip_center(cfg) == doctest::Approx(-2.5));
        const double tm = cfg.spectrum.tau_minus;
        const double vis = std::abs(std::cos(0.002 * 100.0));
        cfg.delays.tau1 = -2.5;
        CHECK(type_a_rate_linear(cfg) == doctest::Approx(1.0 + std::cos(0.2)));
        cfg.delays.tau1 = -2.5 + 0.51 * tm;
        CHECK(type_a_rate_linear(cfg) == doctest::Approx(1.0));
        cfg.delays.tau1 = -2.5 - 0.51 * tm;
        CHECK(type_a_rate_linear(cfg) == doctest::Approx(1.0));
        cfg.delays.tau1 = -2.5 + 0.25 * tm;
        CHECK(type_a_rate_linear(cfg) == doctest::Approx(1.0 + 0.5 * vis));
    }

    TEST_CASE("tau2 moves the fringe as Omega0 tau2") {
        TypeAConfig cfg = base();
        const double w0 = cfg.spectrum.omega0;
        for (double t2 : {0.0, 0.3, 1.1, 2.0}) {
            cfg.delays.tau2 = t2;
            cfg.delays.tau1 = type_a_dip_center(cfg);
            CHECK(type_a_rate_linear(cfg) == doctest::Approx(1.0 + std::cos(0.2 + w0 * t2)));
        }
    }

    TEST_CASE("scans and engines") {
        TypeAConfig cfg = base();
        const Eigen::VectorXd grid = linspace(-40.0, 40.0, 41);
        ScanOptions opt;
        opt.threads = 4;
        const ScanResult a = type_a_scan(cfg, Axis::tau1, grid, opt);
        CHECK(a.metadata["engine"] == "analytic");
        opt.engine = Engine::numeric;
        const ScanResult n = type_a_scan(cfg, Axis::tau1, grid, opt);
        CHECK((a.value - n.value).cwiseAbs().maxCoeff() < 1e-8);
        CHECK_THROWS_AS(type_a_scan(cfg, Axis::tau, grid, opt), InputDomainError);
        cfg.sample_post.v.beta = 0.1;
        opt.engine = Engine::analytic;
        CHECK_THROWS_AS(type_a_scan(cfg, Axis::tau1, grid, opt), ClosedFormInapplicable);
        opt.engine = Engine::automatic;
        CHECK(type_a_scan(cfg, Axis::tau1, grid, opt).metadata["engine"] == "numeric");
    }
}
