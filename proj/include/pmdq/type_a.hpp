#pragma once

// Coincidence interferometer with polarizers at 45 degrees and no second
// beam splitter. Rate R = R0 (1 + C M), C = tau_minus / (2 pi).

#include <vector>

#include <Eigen/Core>

#include "pmdq/dispersion.hpp"
#include "pmdq/scan.hpp"
#include "pmdq/spectral.hpp"

namespace pmdq {

struct TypeAConfig {
    SourceSpectrum spectrum;
    Sample sample_pre;   // l1, before the beam splitter
    Sample sample_post;  // l2, after
    DelayConfig delays;
    double r0 = 1.0;

    void validate() const;
    bool is_linear() const { return sample_pre.is_linear() && sample_post.is_linear(); }
};

/// C = 1 / integral |Phi|^2 = tau_minus / (2 pi).
inline double normalization(double tau_minus) { return tau_minus / (2.0 * kPi); }

/// cos(A) cos(B) written as four exponentials, where A collects the odd
/// orders and the group delays and B the even orders and Omega0 tau2.
std::vector<PhaseTerm> type_a_terms(const TypeAConfig& cfg);

/// Factorized modulation integral M(tau1, tau2).
QuadratureResult type_a_modulation_integral(const TypeAConfig& cfg, const SpectralOptions& options = {});
double type_a_modulation(const TypeAConfig& cfg, const SpectralOptions& options = {});

/// The unfactorized complex form, before the sine terms are dropped. Its
/// imaginary part vanishes analytically.
QuadratureResult type_a_modulation_literal(const TypeAConfig& cfg, const SpectralOptions& options = {});

/// Negative control: the partner photon no longer sits at the mirrored
/// frequency, so the pre-BS phase is 2 l1 dk(w) instead of 2 l1 dk_odd(w).
double type_a_modulation_correlated(const TypeAConfig& cfg, const SpectralOptions& options = {});

/// Closed form of M for linear samples.
double type_a_modulation_linear(const TypeAConfig& cfg);

double type_a_rate_linear(const TypeAConfig& cfg);

/// Rate using the closed form or quadrature as selected by `engine`.
double type_a_rate(const TypeAConfig& cfg, Engine engine, const SpectralOptions& options = {});

/// Tau1 where the dip (or peak) sits for a tau1 scan.
double type_a_dip_center(const TypeAConfig& cfg);

ScanResult type_a_scan(const TypeAConfig& cfg, Axis axis, const Eigen::VectorXd& grid,
                       const ScanOptions& options = {});

}  // namespace pmdq
