#include "pmdq/spectral.hpp"

#include <cmath>

#include "pmdq/dispersion.hpp"
#include "pmdq/errors.hpp"

namespace pmdq {

double phi(double detuning, double tau_minus) {
    if (!(tau_minus > 0.0)) throw InputDomainError("tau_minus must be positive");
    const double x = 0.5 * tau_minus * detuning;
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double triangle(double x) {
    const double ax = std::abs(x);
    return ax <= 1.0 ? 1.0 - ax : 0.0;
}

double sinc2_cos_integral(double a, double shift) {
    if (!(a > 0.0)) throw InputDomainError("sinc^2 width parameter must be positive");
    return kPi / a * triangle(shift / (2.0 * a));
}

double sinc2_tail_bound(double tau_minus, double half_width) {
    if (!(tau_minus > 0.0) || !(half_width > 0.0)) throw InputDomainError("tail bound needs positive arguments");
    const double lobes = half_width * tau_minus / kPi;
    return 2.0 * (2.0 / tau_minus) * (2.0 / (lobes * kPi));
}

std::complex<double> sinc2_tail(double a, double x, const PhasePoly& p, double abs_tol, double* error) {
    // sinc^2(a w) = (2 - e^{2iaw} - e^{-2iaw}) / (4 a^2 w^2)
    const PhasePoly shift(0.0, 2.0 * a, 0.0, 0.0);
    const double tol = abs_tol * 4.0 * a * a / 8.0;
    std::complex<double> sum = 0.0;
    double err = 0.0;
    for (const PhasePoly& side : {p, reflect(p)}) {
        double e0 = 0.0, e1 = 0.0, e2 = 0.0;
        sum += 2.0 * oscillatory_tail(side, x, tol, &e0) - oscillatory_tail(side + shift, x, tol, &e1) -
               oscillatory_tail(side - shift, x, tol, &e2);
        err += 2.0 * e0 + e1 + e2;
    }
    if (error) *error = err / (4.0 * a * a);
    return sum / (4.0 * a * a);
}

QuadratureResult spectral_integral(std::span<const PhaseTerm> terms, double tau_minus, const SpectralOptions& options) {
    if (!(tau_minus > 0.0)) throw InputDomainError("tau_minus must be positive");
    if (options.lobes < 1) throw InputDomainError("need at least one lobe");
    const double a = 0.5 * tau_minus;
    const double lobe = 2.0 * kPi / tau_minus;
    const double x = options.lobes * lobe;

    std::vector<double> breaks;
    for (int k = -options.lobes; k <= options.lobes; ++k) breaks.push_back(k * lobe);

    auto integrand = [&terms, tau_minus](double w) {
        const double s = phi(w, tau_minus);
        std::complex<double> acc = 0.0;
        for (const PhaseTerm& t : terms) acc += t.coeff * std::polar(1.0, evaluate(t.phase, w));
        return s * s * acc;
    };
    QuadratureResult inner = integrate_panels(integrand, breaks, options.abs_tol, options.rel_tol,
                                              options.max_evaluations);

    const double tail_tol = options.abs_tol / static_cast<double>(std::max<std::size_t>(terms.size(), 1));
    for (const PhaseTerm& t : terms) {
        double err = 0.0;
        inner.value += t.coeff * sinc2_tail(a, x, t.phase, tail_tol, &err);
        inner.error += std::abs(t.coeff) * err;
    }
    return inner;
}

}  // namespace pmdq
