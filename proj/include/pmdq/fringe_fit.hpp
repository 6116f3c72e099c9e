#pragma once

#include "pmdq/scan.hpp"

namespace pmdq {

struct FringeFit {
    double center = 0.0;     // x0
    double width = 0.0;      // w; also the envelope FWHM of the fitted triangle
    double phase = 0.0;      // phi in (-pi, pi]
    double amplitude = 0.0;  // A >= 0
    double offset = 0.0;     // c
    double residual = 0.0;   // rms of the fit residuals
    double center_sigma = 0.0;
    double phase_sigma = 0.0;
    double fringe_period = 0.0;  // from zero crossings, independent of the model
    double envelope_fwhm = 0.0;  // from the demodulated envelope, independent of the model
};

/// Least-squares fit of A Lambda((x - x0)/w) cos(omega x + phi) + c.
/// `omega` is the fringe angular frequency in inverse axis units (Omega0
/// for delay axes, Omega0/c for a path-delay axis). Requires at least 8
/// points per fringe period; throws FitError if the fit does not converge.
FringeFit fit_envelope_and_fringe(const ScanResult& scan, double omega);

/// Wraps an angle to (-pi, pi].
double wrap_phase(double phi);

}  // namespace pmdq
