#include <doctest.h>

#include <cmath>
#include <random>

#include "pmdq/dispersion.hpp"
#include "pmdq/errors.hpp"

using namespace pmdq;

TEST_SUITE("dispersion") {
    TEST_CASE("wavenumber evaluates the cubic expansion") {
        CHECK(wavenumber(DispersionRelation{5, 0, 0, 0}, 0.3) == doctest::Approx(5.0));
        CHECK(wavenumber(DispersionRelation{0, 2, 0, 0}, -0.5) == doctest::Approx(-1.0));
        CHECK(wavenumber(DispersionRelation{1, 1, 1, 1}, 2.0) == doctest::Approx(15.0));
    }

    TEST_CASE("wavenumber accepts Eigen arrays") {
        const Eigen::ArrayXd w = Eigen::ArrayXd::LinSpaced(5, -1.0, 1.0);
        const Eigen::ArrayXd k = wavenumber(DispersionRelation{1, 2, 3, 4}, w);
        for (Eigen::Index i = 0; i < w.size(); ++i)
            CHECK(k(i) == doctest::Approx(wavenumber(DispersionRelation{1, 2, 3, 4}, w(i))));
    }

    TEST_CASE("even/odd split") {
        const EvenOdd e = even_odd_split({1, 1, 1, 0}, 2.0);
        CHECK(e.even == doctest::Approx(5.0));
        CHECK(e.odd == doctest::Approx(2.0));
        const EvenOdd z = even_odd_split({0.7, 3, 2, 1}, 0.0);
        CHECK(z.even == doctest::Approx(0.7));
        CHECK(z.odd == 0.0);
        CHECK(even_odd_split({0, 3, 0, 0}, 1.0).odd == doctest::Approx(3.0));
        CHECK(even_odd_split({0, 3, 0, 0}, -1.0).odd == doctest::Approx(-3.0));
        CHECK(even_odd_split({0, 3, 0, 0}, 1.0).even == 0.0);
    }

    TEST_CASE("split parts sum to the wavenumber and have definite parity") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int i = 0; i < 500; ++i) {
            const DispersionRelation r{u(rng), u(rng), u(rng), u(rng)};
            const double w = u(rng);
            const EvenOdd p = even_odd_split(r, w);
            const EvenOdd m = even_odd_split(r, -w);
            const double k = wavenumber(r, w);
            CHECK(p.even + p.odd == doctest::Approx(k).epsilon(1e-13).scale(std::abs(r.k0) + 1000));
            CHECK(p.even - m.even == 0.0);
            CHECK(p.odd + m.odd == 0.0);
        }
    }

    TEST_CASE("pmd_delta") {
        Sample s;
        s.length = 100;
        s.h = {1.0, 3.0, 0.1, 0.0};
        s.v = {1.0, 3.05, 0.1, 0.0};
        const PMDDelta d = pmd_delta(s);
        CHECK(d.dalpha == doctest::Approx(0.05));
        CHECK(d.dA == doctest::Approx(5.0));
        CHECK(d.dk0 == 0.0);
        CHECK(d.dbeta == 0.0);

        Sample same;
        same.length = 3;
        same.h = same.v = {2, 1, 0.5, 0.1};
        const PMDDelta z = pmd_delta(same);
        CHECK(z.dk0 == 0.0);
        CHECK(z.dalpha == 0.0);
        CHECK(z.dbeta == 0.0);
        CHECK(z.dA == 0.0);

        Sample thin = s;
        thin.length = 0;
        const PMDDelta t = pmd_delta(thin);
        CHECK(t.dphi == 0.0);
        CHECK(t.dA == 0.0);
        CHECK(t.dB == 0.0);
        CHECK(t.dalpha == doctest::Approx(0.05));
    }

    TEST_CASE("pmd_delta lumps exactly and flips sign under H/V swap") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 200; ++i) {
            Sample s;
            s.length = 50.0 * (u(rng) + 2.0);
            s.h = {u(rng), u(rng), u(rng), u(rng)};
            s.v = {u(rng), u(rng), u(rng), u(rng)};
            const PMDDelta d = pmd_delta(s);
            CHECK(d.dphi == s.length * d.dk0);
            CHECK(d.dA == s.length * d.dalpha);
            CHECK(d.dB == s.length * d.dbeta);
            Sample swapped = s;
            std::swap(swapped.h, swapped.v);
            const PMDDelta e = pmd_delta(swapped);
            CHECK(e.dk0 == -d.dk0);
            CHECK(e.dalpha == -d.dalpha);
            CHECK(e.dbeta == -d.dbeta);
            CHECK(e.dA == -d.dA);
        }
    }

    TEST_CASE("omega0 from wavelength") {
        CHECK(omega0_from_wavelength(1550.0) == doctest::Approx(2.0 * M_PI * 299.792458 / 1550.0));
        CHECK(omega0_from_wavelength(1550.0) == doctest::Approx(1.2153).epsilon(1e-4));
        CHECK(omega0_from_wavelength(800.0) / omega0_from_wavelength(1600.0) == doctest::Approx(2.0));
        CHECK_THROWS_AS(omega0_from_wavelength(0.0), InputDomainError);
        CHECK_THROWS_AS(omega0_from_wavelength(-3.0), InputDomainError);
    }

    TEST_CASE("validation") {
        CHECK_THROWS_AS(DispersionRelation({NAN, 0, 0, 0}).validate(), InputDomainError);
        Sample s;
        s.length = -1;
        CHECK_THROWS_AS(s.validate(), InputDomainError);
        CHECK_THROWS_AS(SourceSpectrum({1.0, 0.0, ""}).validate(), InputDomainError);
        CHECK_THROWS_AS(SourceSpectrum({0.0, 1.0, ""}).validate(), InputDomainError);
        DelayConfig d;
        d.tau = -1;
        CHECK_NOTHROW(d.validate(false));
        CHECK_THROWS_AS(d.validate(true), InputDomainError);
    }
}
