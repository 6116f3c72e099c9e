#include "pmdq/classical.hpp"

#include <cmath>

#include "pmdq/errors.hpp"
#include "pmdq/serialize.hpp"

namespace pmdq {

void ClassicalConfig::validate() const {
    spectrum.validate();
    sample.validate();
    if (!std::isfinite(path_diff)) throw InputDomainError("path_diff must be finite");
    require_monotone(scan);
}

double tau_minus_from_bandwidth(double lambda0_nm, double bandwidth_nm) {
    if (!(lambda0_nm > 0.0) || !(bandwidth_nm > 0.0))
        throw InputDomainError("wavelength and bandwidth must be positive");
    const double dw = 2.0 * kPi * 299.792458 * bandwidth_nm / (lambda0_nm * lambda0_nm);
    return 4.0 * kSinc2HalfPower / dw;
}

PhasePoly classical_phase(const ClassicalConfig& cfg, double delta) {
    const double s = (cfg.path_diff - delta) / kSpeedOfLight;
    const double l = cfg.sample.length;
    const PhasePoly dk = coefficients(difference(cfg.sample));
    PhasePoly p = -l * dk;
    p[0] += cfg.spectrum.omega0 * s;
    p[1] += s;
    return p;
}

double classical_intensity(const ClassicalConfig& cfg, double delta, const SpectralOptions& options) {
    const PhaseTerm term{1.0, classical_phase(cfg, delta)};
    const double tm = cfg.spectrum.tau_minus;
    const QuadratureResult r = spectral_integral(std::span(&term, 1), tm, options);
    return 1.0 + r.value.real() * tm / (2.0 * kPi);
}

ScanResult classical_scan(const ClassicalConfig& cfg, const ScanOptions& options) {
    cfg.validate();
    if (options.engine == Engine::analytic)
        throw ClosedFormInapplicable("classical mode has no closed-form engine");
    ScanResult out;
    out.axis = Axis::delta;
    out.delay = cfg.scan;
    out.value = parallel_map(cfg.scan, options.threads,
                             [&](double d) { return classical_intensity(cfg, d, options.spectral); });
    out.metadata = {{"mode", "classical"},       {"axis", "delta"},
                    {"engine", "numeric"},        {"spectrum", to_json(cfg.spectrum)},
                    {"sample", to_json(cfg.sample)}, {"path_diff", cfg.path_diff}};
    return out;
}

}  // namespace pmdq
