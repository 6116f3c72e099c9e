#pragma once

// Coincidence interferometer with a second beam splitter before the
// detectors. Rate R = R0 (1 + C M) as for Type A.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pmdq/dispersion.hpp"
#include "pmdq/scan.hpp"
#include "pmdq/spectral.hpp"

namespace pmdq {

struct TypeBConfig {
    SourceSpectrum spectrum;
    Sample sample_pre;   // l1
    Sample sample_post;  // l2
    DelayConfig delays;  // tau1, tau2, tau
    double r0 = 1.0;

    void validate(bool physical = false) const;
    bool is_linear() const { return sample_pre.is_linear() && sample_post.is_linear(); }
};

/// The eight exponentials of the modulation integrand.
std::vector<PhaseTerm> type_b_terms(const TypeBConfig& cfg);

QuadratureResult type_b_modulation_integral(const TypeBConfig& cfg, const SpectralOptions& options = {});

/// Real part of the modulation integral. Throws QuadratureError if the
/// imaginary part exceeds what the quadrature error allows.
double type_b_modulation(const TypeBConfig& cfg, const SpectralOptions& options = {});

/// Five-triangle closed form of M for linear samples.
double type_b_modulation_linear(const TypeBConfig& cfg);
double type_b_rate_linear(const TypeBConfig& cfg);
double type_b_rate(const TypeBConfig& cfg, Engine engine, const SpectralOptions& options = {});

/// Special case l1 = tau1 = 0, written out separately. ConfigError when
/// the precondition does not hold.
double postponed_delay_rate(const TypeBConfig& cfg);

enum class FeatureKind { plain, modulated };

std::string to_string(FeatureKind kind);

struct DipPrediction {
    int term = 0;  // 1..5, order of the triangles in the closed form
    Axis axis = Axis::tau1;
    FeatureKind kind = FeatureKind::plain;
    std::optional<double> center;  // empty when the triangle does not move along the axis
    double half_width = 0.0;       // triangle half-support along the axis
    double weight = 0.0;           // signed factor in front of the triangle in C*M
    std::string provenance;        // the triangle argument
    std::string modulation;        // sine arguments, modulated feature only
    double delay_pre = 0.0;        // V minus H delay before the beam splitter
    double delay_post = 0.0;       // V minus H delay after, for the matching outcome
    bool overlapping = false;
};

/// Zeros of the five triangle arguments along `axis`, with the other
/// delays held at their configured values.
std::vector<DipPrediction> predict_dips(const TypeBConfig& cfg, Axis axis);

/// Same centers from the delay-compensation argument: a feature appears
/// where the pre-BS delay cancels the post-BS delay of one beam-splitter
/// outcome (or, for the modulated one, where 2 dtau_pre + dA_post + tau2 = 0).
std::array<std::optional<double>, 5> delay_table_centers(const TypeBConfig& cfg, Axis axis);

ScanResult type_b_scan(const TypeBConfig& cfg, Axis axis, const Eigen::VectorXd& grid,
                       const ScanOptions& options = {});

}  // namespace pmdq
