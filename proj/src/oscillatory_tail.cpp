#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_expint.h>

#include "pmdq/dispersion.hpp"
#include "pmdq/errors.hpp"
#include "pmdq/spectral.hpp"

namespace pmdq {
namespace {

using cplx = std::complex<double>;

// Largest ratio of successive integration-by-parts terms accepted before a
// stretch of the tail is handed to the asymptotic expansion.
constexpr double kFastRatio = 0.01;
constexpr int kJetOrder = 14;
// Critical points further out than this multiple of x only cost ~1/x * 1e-8.
constexpr double kFarCutoff = 1e8;

using Jet = std::array<cplx, kJetOrder>;

struct GslQuiet {
    GslQuiet() { gsl_set_error_handler_off(); }
};

double si(double x) {
    static const GslQuiet quiet;
    return gsl_sf_Si(x);
}

double ci(double x) {
    static const GslQuiet quiet;
    gsl_sf_result r;
    if (gsl_sf_Ci_e(x, &r) != GSL_SUCCESS) throw InputDomainError("Ci evaluation failed");
    return r.val;
}

double dphase(const PhasePoly& q, double w) { return q[1] + w * (2.0 * q[2] + 3.0 * q[3] * w); }
double ddphase(const PhasePoly& q, double w) { return 2.0 * q[2] + 6.0 * q[3] * w; }

/// Ratio governing convergence of the integration-by-parts series at w.
double fast_ratio(const PhasePoly& q, double w) {
    const double d = dphase(q, w);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return (2.0 / w + std::abs(ddphase(q, w) / d)) / std::abs(d);
}

/// Point between slow and fast, next to slow, where the series is usable.
double fast_edge(const PhasePoly& q, double slow, double fast) {
    for (int i = 0; i < 100 && std::abs(fast - slow) > 1e-13 * std::abs(fast); ++i) {
        const double mid = 0.5 * (slow + fast);
        (fast_ratio(q, mid) <= kFastRatio ? fast : slow) = mid;
    }
    return fast;
}

Jet multiply(const Jet& x, const Jet& y) {
    Jet z{};
    for (int i = 0; i < kJetOrder; ++i)
        for (int j = 0; i + j < kJetOrder; ++j) z[i + j] += x[i] * y[j];
    return z;
}

Jet reciprocal(const Jet& x) {
    Jet z{};
    z[0] = 1.0 / x[0];
    for (int n = 1; n < kJetOrder; ++n) {
        cplx s = 0.0;
        for (int k = 1; k <= n; ++k) s += x[k] * z[n - k];
        z[n] = -s / x[0];
    }
    return z;
}

Jet derivative(const Jet& x) {
    Jet z{};
    for (int n = 0; n + 1 < kJetOrder; ++n) z[n] = static_cast<double>(n + 1) * x[n + 1];
    return z;
}

/// Antiderivative of exp(iQ)/w^2 from the integration-by-parts series,
/// F = exp(iQ) sum_k (-1)^k g_k / (iQ'), g_0 = 1/w^2, g_{k+1} = (g_k/(iQ'))'.
cplx ibp_antiderivative(const PhasePoly& q, double w, double* error) {
    const cplx i(0.0, 1.0);
    Jet g{};
    for (int n = 0; n < kJetOrder; ++n) g[n] = (n % 2 ? -1.0 : 1.0) * (n + 1) / std::pow(w, n + 2);
    Jet qp{};
    qp[0] = i * dphase(q, w);
    qp[1] = i * ddphase(q, w);
    qp[2] = i * 3.0 * q[3];
    const Jet r = reciprocal(qp);

    cplx sum = 0.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kJetOrder - 1; ++k) {
        const Jet gr = multiply(g, r);
        const cplx term = (k % 2 ? -1.0 : 1.0) * gr[0];
        const double mag = std::abs(term);
        if (mag > last) break;
        sum += term;
        last = mag;
        if (mag <= 1e-17 * std::abs(sum)) break;
        g = derivative(gr);
    }
    if (error) *error = 10.0 * last;
    return std::polar(1.0, evaluate(q, w)) * sum;
}

cplx numeric_segment(const PhasePoly& q, double lo, double hi, double abs_tol, double* error) {
    std::vector<double> breaks{lo};
    if (hi / lo > 2.0) {
        const int n = static_cast<int>(std::ceil(std::log(hi / lo) / std::log(1.5)));
        for (int k = 1; k < n; ++k) breaks.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / n));
    } else {
        for (int k = 1; k < 4; ++k) breaks.push_back(lo + (hi - lo) * k / 4.0);
    }
    breaks.push_back(hi);
    auto f = [&q](double w) { return std::polar(1.0 / (w * w), evaluate(q, w)); };
    const QuadratureResult r = integrate_panels(f, breaks, abs_tol, 1e-14, 2000000);
    if (error) *error += r.error;
    return r.value;
}

cplx linear_tail(const PhasePoly& q, double x) {
    const double k = q[1];
    cplx j;
    if (k == 0.0) {
        j = 1.0 / x;
    } else {
        const double ax = std::abs(k) * x;
        j = std::polar(1.0 / x, k * x) - cplx(0.0, k * ci(ax)) - std::abs(k) * (0.5 * kPi - si(ax));
    }
    return std::polar(1.0, q[0]) * j;
}

std::vector<double> critical_points(const PhasePoly& q, double x) {
    std::vector<double> roots;
    auto keep = [&](double r) {
        if (std::isfinite(r) && r > x && r < kFarCutoff * x) roots.push_back(r);
    };
    // q' = q1 + 2 q2 w + 3 q3 w^2
    if (q[3] != 0.0) {
        const double a = 3.0 * q[3], b = 2.0 * q[2], c = q[1];
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            const double t = -0.5 * (b + std::copysign(s, b));
            if (t != 0.0) {
                keep(t / a);
                keep(c / t);
            }
        }
        keep(-q[2] / (3.0 * q[3]));
    } else if (q[2] != 0.0) {
        keep(-q[1] / (2.0 * q[2]));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace

cplx oscillatory_tail(const PhasePoly& q, double x, double abs_tol, double* error) {
    if (!(x > 0.0)) throw InputDomainError("tail start must be positive");
    if (error) *error = 0.0;
    if (q[2] == 0.0 && q[3] == 0.0) {
        if (error) *error = 64.0 * std::numeric_limits<double>::epsilon() / x;
        return linear_tail(q, x);
    }

    double err = 0.0;
    cplx total = 0.0;
    std::vector<double> edges{x};
    for (double c : critical_points(q, x)) edges.push_back(c);

    for (std::size_t s = 0; s < edges.size(); ++s) {
        const double p = edges[s];
        const bool last = s + 1 == edges.size();
        if (last) {
            double u = p;
            int steps = 0;
            while (fast_ratio(q, u) > kFastRatio && steps < 400) {
                u *= 1.25;
                ++steps;
            }
            if (steps > 0 && steps < 400) u = fast_edge(q, u / 1.25, u);
            if (u > p) total += numeric_segment(q, p, u, abs_tol, &err);
            double e = 0.0;
            total -= ibp_antiderivative(q, u, &e);
            err += e;
            continue;
        }
        const double r = edges[s + 1];
        constexpr int n = 256;
        const bool geometric = r / p > 4.0;
        std::array<double, n + 1> grid;
        for (int k = 0; k <= n; ++k)
            grid[k] = geometric ? p * std::pow(r / p, static_cast<double>(k) / n) : p + (r - p) * k / n;
        grid[n] = r;
        int first = -1, lastfast = -1;
        for (int k = 0; k <= n; ++k) {
            if (fast_ratio(q, grid[k]) <= kFastRatio) {
                if (first < 0) first = k;
                lastfast = k;
            }
        }
        bool contiguous = first >= 0 && lastfast > first;
        for (int k = first; contiguous && k <= lastfast; ++k)
            if (fast_ratio(q, grid[k]) > kFastRatio) contiguous = false;
        if (!contiguous) {
            total += numeric_segment(q, p, r, abs_tol, &err);
            continue;
        }
        const double a = first > 0 ? fast_edge(q, grid[first - 1], grid[first]) : grid[0];
        const double b = lastfast < n ? fast_edge(q, grid[lastfast + 1], grid[lastfast]) : grid[n];
        if (first > 0) total += numeric_segment(q, p, a, abs_tol, &err);
        double e0 = 0.0, e1 = 0.0;
        total += ibp_antiderivative(q, b, &e1) - ibp_antiderivative(q, a, &e0);
        err += e0 + e1;
        if (lastfast < n) total += numeric_segment(q, b, r, abs_tol, &err);
    }
    if (error) *error = err;
    return total;
}

}  // namespace pmdq
