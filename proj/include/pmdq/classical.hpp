#pragma once

// Single-detector white-light interferometer with the sample after the
// second beam splitter and a 45 degree analyzer.

#include <vector>

#include <Eigen/Core>

#include "pmdq/dispersion.hpp"
#include "pmdq/scan.hpp"
#include "pmdq/spectral.hpp"

namespace pmdq {

struct ClassicalConfig {
    SourceSpectrum spectrum;
    Sample sample;
    double path_diff = 0.0;  // um, d1 - d2
    Eigen::VectorXd scan;    // delta values, um

    void validate() const;
};

/// Half-power point of sinc^2: sinc^2(x) = 1/2.
inline constexpr double kSinc2HalfPower = 1.3915573782515103;

/// tau_minus whose sinc^2 main-lobe FWHM, mapped to wavelength at first
/// order (dw = 2 pi c dl / l0^2), equals `bandwidth_nm`.
double tau_minus_from_bandwidth(double lambda0_nm, double bandwidth_nm);

/// Phase of the interference term at optical detuning w, as a polynomial.
PhasePoly classical_phase(const ClassicalConfig& cfg, double delta);

/// Detector intensity normalized so that the empty, balanced
/// interferometer gives exactly 2 and the washed-out level is 1.
double classical_intensity(const ClassicalConfig& cfg, double delta, const SpectralOptions& options = {});

/// Numeric engine only; an explicit analytic request is rejected.
ScanResult classical_scan(const ClassicalConfig& cfg, const ScanOptions& options = {});

}  // namespace pmdq
