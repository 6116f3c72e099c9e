#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace pmdq {

using Integrand = std::function<std::complex<double>(double)>;

struct IntegralSpec {
    Integrand integrand;
    double half_width = 0.0;  // integrate over [-half_width, half_width]
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    /// Initial panel width; panels are aligned to multiples of it starting
    /// at -half_width. Zero means 20 equal panels.
    double panel_width = 0.0;
    std::size_t max_evaluations = 200000;
    /// Bound on whatever lies outside the domain; added to the error.
    double tail_bound = 0.0;
};

struct QuadratureResult {
    std::complex<double> value;
    double error = 0.0;
    std::size_t evaluations = 0;
};

QuadratureResult integrate(const IntegralSpec& spec);

/// Globally adaptive Gauss-Kronrod (7/15) over the panels delimited by
/// `breakpoints` (sorted). Throws QuadratureError when the budget runs out
/// before the error target max(abs_tol, rel_tol*|I|) is reached.
QuadratureResult integrate_panels(const Integrand& f, std::span<const double> breakpoints, double abs_tol,
                                  double rel_tol, std::size_t max_evaluations);

}  // namespace pmdq
