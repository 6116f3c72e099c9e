#pragma once

#include "pmdq/recovery.hpp"
#include "pmdq/type_b.hpp"

namespace pmdq {

struct QuadraticFitOptions {
    Axis axis = Axis::tau1;
    double dbeta_min = -1.0;  // fs^2/um, coarse search range for the starting value
    double dbeta_max = 1.0;
    int grid_points = 9;
    unsigned threads = 1;
    SpectralOptions spectral{2, 1e-11, 1e-9, 400000};
};

/// Nonlinear least squares over (dk0, dbeta, shift, amp) for a Type B scan
/// around one feature. The forward model is the numeric simulator with
/// `model` as the known part of the setup: kV0 = kH0 + dk0 and
/// betaV = betaH + dbeta in the post-BS sample, predicted values
/// r0 + amp (R(x - shift) - r0). dk0 starts from the value in `model`,
/// dbeta from the best point of a coarse grid over [dbeta_min, dbeta_max].
/// Throws FitError if the fit diverges or dbeta leaves the search range.
RecoveryReport fit_quadratic(const ScanResult& scan, const TypeBConfig& model, const QuadraticFitOptions& options = {});

}  // namespace pmdq
