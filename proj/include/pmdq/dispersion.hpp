#pragma once

// Dispersion data model shared by every simulator.
//
// Units used throughout the library: time in fs, length in um, angular
// frequency in rad/fs, wavenumber in rad/um.

#include <string>

#include <Eigen/Core>

namespace pmdq {

inline constexpr double kSpeedOfLight = 0.299792458;  // um/fs
inline constexpr double kPi = 3.14159265358979323846;

/// Taylor coefficients of k(Omega0 + w) about the center frequency.
struct DispersionRelation {
    double k0 = 0.0;     // rad/um
    double alpha = 0.0;  // fs/um, inverse group velocity
    double beta = 0.0;   // fs^2/um
    double gamma = 0.0;  // fs^3/um

    void validate() const;
    bool is_linear() const { return beta == 0.0 && gamma == 0.0; }
};

/// Lumped birefringent element with one dispersion relation per axis.
struct Sample {
    double length = 0.0;  // um; zero means "no sample"
    DispersionRelation h;
    DispersionRelation v;
    std::string label;

    void validate() const;
    bool is_linear() const { return h.is_linear() && v.is_linear(); }
};

/// V minus H differences, per unit length and lumped over the sample.
struct PMDDelta {
    double dk0 = 0.0;
    double dalpha = 0.0;
    double dbeta = 0.0;
    double dphi = 0.0;  // rad
    double dA = 0.0;    // fs
    double dB = 0.0;    // fs^2
};

struct SourceSpectrum {
    double omega0 = 0.0;     // rad/fs, half the pump frequency
    double tau_minus = 0.0;  // fs
    std::string description;

    void validate() const;
};

struct DelayConfig {
    double tau1 = 0.0;   // fs, birefringent, before the beam splitter
    double tau2 = 0.0;   // fs, birefringent, after
    double tau = 0.0;    // fs, nonbirefringent, after; absolute so >= 0 physically
    double delta = 0.0;  // um, classical path delay

    void validate(bool physical) const;
};

/// k(Omega0 + w) - k0 included, evaluated with Horner's rule. Accepts a
/// scalar or an Eigen array of detunings.
template <typename T>
auto wavenumber(const DispersionRelation& rel, const T& detuning) {
    return rel.k0 + detuning * (rel.alpha + detuning * (rel.beta + detuning * rel.gamma));
}

struct EvenOdd {
    double even;
    double odd;
};

EvenOdd even_odd_split(const DispersionRelation& rel, double detuning);

PMDDelta pmd_delta(const Sample& sample);

/// Relation holding the V - H coefficient differences.
DispersionRelation difference(const Sample& sample);

double omega0_from_wavelength(double lambda0_nm);

/// Coefficients (c0, c1, c2, c3) of the relation as a polynomial in the
/// detuning.
inline Eigen::Vector4d coefficients(const DispersionRelation& rel) {
    return {rel.k0, rel.alpha, rel.beta, rel.gamma};
}

}  // namespace pmdq
