#pragma once

// Downconversion spectrum, the unit triangle, and integrals of the form
//
//     I = integral over all w of |Phi(w)|^2 * sum_j c_j exp(i P_j(w))
//
// with Phi(w) = sinc(tau_minus w / 2) and each P_j a cubic polynomial in
// the detuning. Every simulator in the library reduces to this shape.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pmdq/quadrature.hpp"

namespace pmdq {

/// sinc(tau_minus * w / 2), with sinc(0) = 1.
double phi(double detuning, double tau_minus);

/// Unit triangle: 1 - |x| on |x| <= 1, zero outside.
double triangle(double x);

/// Integral of sinc^2(a w) cos(w shift) over the real line, (pi/a) triangle(shift/2a).
double sinc2_cos_integral(double a, double shift);

/// Bound on the integral of |Phi|^2 outside [-half_width, half_width]
/// (both sides), 2 * (2/tau_minus) * (2/(N pi)) with half_width = N pi/tau_minus.
double sinc2_tail_bound(double tau_minus, double half_width);

/// Coefficients (c0..c3) of a phase c0 + c1 w + c2 w^2 + c3 w^3.
using PhasePoly = Eigen::Vector4d;

/// P(-w).
inline PhasePoly reflect(const PhasePoly& p) { return p.cwiseProduct(PhasePoly(1.0, -1.0, 1.0, -1.0)); }

inline double evaluate(const PhasePoly& p, double w) { return p[0] + w * (p[1] + w * (p[2] + w * p[3])); }

struct PhaseTerm {
    std::complex<double> coeff;
    PhasePoly phase;
};

struct SpectralOptions {
    int lobes = 4;  // quadrature half-width in units of 2 pi / tau_minus
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_evaluations = 200000;
};

/// Full-line integral of |Phi|^2 sum_j c_j exp(i P_j). The finite part is
/// done by adaptive quadrature on lobe-aligned panels; the |w| > X part is
/// added term by term from `oscillatory_tail`, so the result has no
/// truncation bias.
QuadratureResult spectral_integral(std::span<const PhaseTerm> terms, double tau_minus,
                                   const SpectralOptions& options = {});

/// Integral of exp(i Q(w)) / w^2 over [x, infinity), x > 0. Exact (Si/Ci)
/// for linear Q; for nonlinear Q the slow stretches are integrated
/// numerically and the rest by an integration-by-parts expansion.
std::complex<double> oscillatory_tail(const PhasePoly& q, double x, double abs_tol, double* error = nullptr);

/// Integral of sinc^2(a w) exp(i P(w)) over |w| > x.
std::complex<double> sinc2_tail(double a, double x, const PhasePoly& p, double abs_tol, double* error = nullptr);

}  // namespace pmdq
