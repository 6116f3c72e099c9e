#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <gsl/gsl_integration.h>

#include "pmdq/errors.hpp"
#include "pmdq/spectral.hpp"

using namespace pmdq;

namespace {

// Reference for the tail integrals: GSL's QAWF (Fourier integral on a
// semi-infinite range) applied to 1/w^2, for linear phases.
double qawf(double q1, double x, bool cosine) {
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
    gsl_integration_workspace* cw = gsl_integration_workspace_alloc(2000);
    gsl_integration_qawo_table* t =
        gsl_integration_qawo_table_alloc(std::abs(q1), 1.0, cosine ? GSL_INTEG_COSINE : GSL_INTEG_SINE, 100);
    gsl_function f;
    f.function = [](double w, void*) { return 1.0 / (w * w); };
    f.params = nullptr;
    double r = 0, e = 0;
    gsl_integration_qawf(&f, x, 1e-13, 2000, w, cw, t, &r, &e);
    gsl_integration_qawo_table_free(t);
    gsl_integration_workspace_free(cw);
    gsl_integration_workspace_free(w);
    return cosine || q1 >= 0 ? r : -r;
}

std::complex<double> brute_tail(const PhasePoly& q, double x, double upto) {
    // Finite quadrature to `upto` plus the first integration-by-parts term
    // for the remainder, -exp(iQ)/(iQ' w^2) at `upto`.
    std::vector<double> br;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) br.push_back(x + (upto - x) * i / n);
    auto f = [&q](double w) { return std::polar(1.0 / (w * w), evaluate(q, w)); };
    const double d = q[1] + upto * (2.0 * q[2] + 3.0 * q[3] * upto);
    const std::complex<double> rest = -std::polar(1.0, evaluate(q, upto)) / (std::complex<double>(0.0, d) * upto * upto);
    return integrate_panels(f, br, 1e-13, 1e-12, 50000000).value + rest;
}

}  // namespace

TEST_SUITE("spectral") {
    TEST_CASE("phi") {
        CHECK(phi(0.0, 3.0) == 1.0);
        CHECK(std::abs(phi(2.0 * M_PI / 1.5, 1.5)) < 1e-15);
        CHECK(phi(1.0, 2.0) == doctest::Approx(std::sin(1.0)));
        CHECK(phi(0.3, 2.0) == phi(-0.3, 2.0));
        CHECK_THROWS_AS(phi(0.1, 0.0), InputDomainError);
    }

    TEST_CASE("triangle") {
        CHECK(triangle(0.0) == 1.0);
        CHECK(triangle(0.5) == 0.5);
        CHECK(triangle(-0.5) == 0.5);
        CHECK(triangle(1.5) == 0.0);
        CHECK(triangle(1.0) == 0.0);
    }

    TEST_CASE("sinc2_cos_integral") {
        CHECK(sinc2_cos_integral(1.0, 0.0) == doctest::Approx(M_PI));
        CHECK(sinc2_cos_integral(1.0, 2.0) == 0.0);
        CHECK(sinc2_cos_integral(0.5, 0.5) == doctest::Approx(M_PI));
        CHECK_THROWS_AS(sinc2_cos_integral(0.0, 1.0), InputDomainError);
    }

    TEST_CASE("integrate: normalization within the documented tail bound") {
        const double tm = 1.0;
        IntegralSpec s;
        s.integrand = [tm](double w) { return std::complex<double>(phi(w, tm) * phi(w, tm)); };
        s.half_width = 20.0 * M_PI / tm;
        s.tail_bound = sinc2_tail_bound(tm, s.half_width);
        const QuadratureResult r = integrate(s);
        const double exact = 2.0 * M_PI / tm;
        CHECK(std::abs(r.value.real() - exact) <= r.error);
        CHECK(r.value.real() < exact);
    }

    TEST_CASE("integrate: truncated normalization increases toward 2 pi / tau_minus") {
        const double tm = 2.0;
        double last = 0.0;
        for (double n : {5.0, 10.0, 20.0}) {
            IntegralSpec s;
            s.integrand = [tm](double w) { return std::complex<double>(phi(w, tm) * phi(w, tm)); };
            s.half_width = 2.0 * n * M_PI / tm;
            const double v = integrate(s).value.real();
            CHECK(v > last);
            CHECK(v < 2.0 * M_PI / tm);
            CHECK(2.0 * M_PI / tm - v <= sinc2_tail_bound(tm, s.half_width));
            last = v;
        }
    }

    TEST_CASE("integrate: odd integrand vanishes") {
        IntegralSpec s;
        s.integrand = [](double w) { return std::complex<double>(w * std::exp(-w * w) * phi(w, 1.0)); };
        s.half_width = 30.0;
        CHECK(std::abs(integrate(s).value) < 1e-10);
    }

    TEST_CASE("integrate: sinc^2 cos identity after tail correction") {
        const double s = 0.3;
        IntegralSpec spec;
        spec.integrand = [s](double w) { return std::complex<double>(phi(w, 1.0) * phi(w, 1.0) * std::cos(w * s)); };
        spec.half_width = 20.0 * M_PI;
        const QuadratureResult r = integrate(spec);
        const PhasePoly p(0, s, 0, 0);
        const std::complex<double> tail = sinc2_tail(0.5, spec.half_width, p, 1e-12);
        CHECK(r.value.real() + tail.real() == doctest::Approx(sinc2_cos_integral(0.5, s)).epsilon(1e-6));
    }

    TEST_CASE("integrate: randomized identity within quadrature plus tail bound") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> ua(0.1, 5.0), uf(-3.0, 3.0);
        for (int i = 0; i < 25; ++i) {
            const double a = ua(rng);
            const double shift = uf(rng) * a;
            IntegralSpec spec;
            spec.integrand = [a, shift](double w) {
                const double x = a * w;
                const double sc = x == 0.0 ? 1.0 : std::sin(x) / x;
                return std::complex<double>(sc * sc * std::cos(w * shift));
            };
            spec.half_width = 20.0 * M_PI / (2.0 * a);
            spec.tail_bound = sinc2_tail_bound(2.0 * a, spec.half_width);
            const QuadratureResult r = integrate(spec);
            CHECK(std::abs(r.value.real() - sinc2_cos_integral(a, shift)) <= r.error);
        }
    }

    TEST_CASE("integrate: reflection invariance") {
        auto f = [](double w) { return std::complex<double>(phi(w, 1.3) * phi(w, 1.3) * std::cos(0.7 * w + 0.2 * w * w), w); };
        IntegralSpec a, b;
        a.integrand = f;
        b.integrand = [f](double w) { return f(-w); };
        a.half_width = b.half_width = 15.0;
        CHECK(integrate(a).value.real() == doctest::Approx(integrate(b).value.real()).epsilon(1e-9));
    }

    TEST_CASE("integrate: budget exhaustion carries the estimate") {
        IntegralSpec s;
        s.integrand = [](double w) { return std::complex<double>(std::cos(1e4 * w * w)); };
        s.half_width = 50.0;
        s.max_evaluations = 2000;
        try {
            integrate(s);
            FAIL("expected a QuadratureError");
        } catch (const QuadratureError& e) {
            CHECK(e.bound() > 0.0);
        }
        s.half_width = -1.0;
        CHECK_THROWS_AS(integrate(s), InputDomainError);
    }

    TEST_CASE("oscillatory_tail: linear closed form against QAWF") {
        for (double q1 : {0.5, -0.5, 3.0, -7.0, 40.0}) {
            for (double x : {1.0, 12.5, 100.0}) {
                const std::complex<double> j = oscillatory_tail(PhasePoly(0.0, q1, 0.0, 0.0), x, 1e-14);
                CHECK(j.real() == doctest::Approx(qawf(q1, x, true)).epsilon(1e-9).scale(1.0 / x));
                CHECK(j.imag() == doctest::Approx(qawf(q1, x, false)).epsilon(1e-9).scale(1.0 / x));
            }
        }
        CHECK(oscillatory_tail(PhasePoly(0.0, 0.0, 0.0, 0.0), 4.0, 1e-14).real() == doctest::Approx(0.25));
        const std::complex<double> shifted = oscillatory_tail(PhasePoly(0.8, 2.0, 0, 0), 3.0, 1e-14);
        const std::complex<double> plain = oscillatory_tail(PhasePoly(0.0, 2.0, 0, 0), 3.0, 1e-14);
        CHECK(std::abs(shifted - std::polar(1.0, 0.8) * plain) < 1e-15);
    }

    TEST_CASE("oscillatory_tail: nonlinear phases against direct quadrature") {
        // A strongly growing phase makes the far remainder negligible, so a
        // long finite quadrature is a valid reference.
        const double x = 10.0;
        for (const PhasePoly& q : {PhasePoly(0.2, 0.5, 0.3, 0.0), PhasePoly(0.0, -4.0, 0.5, 0.0),
                                   PhasePoly(1.0, 2.0, -0.4, 0.01), PhasePoly(0.0, 30.0, -1.0, 0.0)}) {
            double err = 0.0;
            const std::complex<double> j = oscillatory_tail(q, x, 1e-13, &err);
            const std::complex<double> ref = brute_tail(q, x, 200.0);
            CHECK(std::abs(j - ref) < 1e-8);
            CHECK(err < 1e-9);
        }
        CHECK_THROWS_AS(oscillatory_tail(PhasePoly(0, 1, 0, 0), 0.0, 1e-12), InputDomainError);
    }

    TEST_CASE("oscillatory_tail: distant stationary point of a nearly quadratic phase") {
        const double x = 100.0;
        double err0 = 0.0, err1 = 0.0;
        const std::complex<double> quadratic = oscillatory_tail(PhasePoly(0.0, 1.0, -12.0, 0.0), x, 1e-13, &err0);
        const std::complex<double> cubic = oscillatory_tail(PhasePoly(0.0, 1.0, -12.0, 1e-9), x, 1e-13, &err1);
        CHECK(std::abs(cubic - quadratic) < 1e-9);
        CHECK(err1 < 1e-9);
    }

    TEST_CASE("spectral_integral: exact for linear phases with no truncation bias") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-2.5, 2.5), ut(0.3, 4.0), ph(-3.0, 3.0);
        for (int i = 0; i < 30; ++i) {
            const double tm = ut(rng);
            const double s = u(rng) * tm;
            const double c0 = ph(rng);
            const PhaseTerm t{1.0, PhasePoly(c0, s, 0, 0)};
            const QuadratureResult r = spectral_integral(std::span(&t, 1), tm);
            const double tri = 2.0 * M_PI / tm * triangle(s / tm);
            CHECK(std::abs(r.value - std::polar(tri, c0)) < 1e-9 * 2.0 * M_PI / tm);
        }
    }

    TEST_CASE("spectral_integral: nonlinear phases converge with the number of lobes") {
        for (const PhasePoly& p : {PhasePoly(0.3, 0.7, 0.05, 0.0), PhasePoly(0.3, 0.7, 2.0, 0.0),
                                   PhasePoly(-1.0, 0.2, -1.0, 0.002)}) {
            const PhaseTerm t{1.0, p};
            const auto a = spectral_integral(std::span(&t, 1), 1.0, {10, 1e-11, 1e-11, 2000000});
            const auto b = spectral_integral(std::span(&t, 1), 1.0, {40, 1e-11, 1e-11, 4000000});
            CHECK(std::abs(a.value - b.value) < 1e-8);
        }
    }
}
