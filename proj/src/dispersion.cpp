#include "pmdq/dispersion.hpp"

#include <cmath>

#include "pmdq/errors.hpp"

namespace pmdq {

void DispersionRelation::validate() const {
    if (!std::isfinite(k0) || !std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma))
        throw InputDomainError("dispersion relation has a non-finite coefficient");
}

void Sample::validate() const {
    if (!(length >= 0.0) || !std::isfinite(length))
        throw InputDomainError("sample length must be finite and >= 0");
    h.validate();
    v.validate();
}

void SourceSpectrum::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw InputDomainError("omega0 must be positive");
    if (!(tau_minus > 0.0) || !std::isfinite(tau_minus))
        throw InputDomainError("tau_minus must be positive");
}

void DelayConfig::validate(bool physical) const {
    if (!std::isfinite(tau1) || !std::isfinite(tau2) || !std::isfinite(tau) || !std::isfinite(delta))
        throw InputDomainError("delays must be finite");
    if (physical && tau < 0.0)
        throw InputDomainError("nonbirefringent delay tau is absolute and must be >= 0");
}

EvenOdd even_odd_split(const DispersionRelation& rel, double detuning) {
    const double w2 = detuning * detuning;
    return {rel.k0 + rel.beta * w2, detuning * (rel.alpha + rel.gamma * w2)};
}

DispersionRelation difference(const Sample& sample) {
    return {sample.v.k0 - sample.h.k0, sample.v.alpha - sample.h.alpha, sample.v.beta - sample.h.beta,
            sample.v.gamma - sample.h.gamma};
}

PMDDelta pmd_delta(const Sample& sample) {
    const DispersionRelation d = difference(sample);
    return {d.k0, d.alpha, d.beta, sample.length * d.k0, sample.length * d.alpha, sample.length * d.beta};
}

double omega0_from_wavelength(double lambda0_nm) {
    if (!(lambda0_nm > 0.0) || !std::isfinite(lambda0_nm))
        throw InputDomainError("wavelength must be positive");
    // c in nm/fs
    return 2.0 * kPi * 299.792458 / lambda0_nm;
}

}  // namespace pmdq
