#include "pmdq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pmdq/errors.hpp"

namespace pmdq {
namespace {

using cplx = std::complex<double>;

// Kronrod abscissae; odd indices are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    cplx value;
    double error;
    double floor;  // roundoff level, does not shrink under subdivision
    bool frozen;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<cplx, 15> fv;
    fv[7] = f(center);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }
    cplx resk = fv[7] * kWgk[7];
    cplx resg = fv[7] * kWg[3];
    double resabs = std::abs(fv[7]) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        resk += (fv[j] + fv[14 - j]) * kWgk[j];
        resabs += (std::abs(fv[j]) + std::abs(fv[14 - j])) * kWgk[j];
        if (j % 2 == 1) resg += (fv[j] + fv[14 - j]) * kWg[j / 2];
    }
    const cplx mean = resk * 0.5;
    double resasc = std::abs(fv[7] - mean) * kWgk[7];
    for (int j = 0; j < 7; ++j) resasc += (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean)) * kWgk[j];

    resasc *= std::abs(half);
    resabs *= std::abs(half);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double floor = 50.0 * eps * resabs;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(floor, err);
    const double width = b - a;
    const bool frozen = width <= 64.0 * eps * std::max(std::abs(a), std::abs(b));
    return {a, b, resk * half, err, floor, frozen};
}

}  // namespace

QuadratureResult integrate_panels(const Integrand& f, std::span<const double> breakpoints, double abs_tol,
                                  double rel_tol, std::size_t max_evaluations) {
    if (breakpoints.size() < 2) throw InputDomainError("need at least two breakpoints");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw InputDomainError("tolerances must be positive");

    std::vector<Panel> open;  // max-heap on error
    const ByError order;
    std::vector<Panel> done;
    std::size_t evaluations = 0;
    cplx total = 0.0;
    double total_error = 0.0;
    double total_floor = 0.0;
    auto target = [&](cplx sum, double floor) { return std::max({abs_tol, rel_tol * std::abs(sum), 2.0 * floor}); };
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) throw InputDomainError("breakpoints must increase");
        Panel p = gauss_kronrod(f, breakpoints[i], breakpoints[i + 1]);
        evaluations += 15;
        total += p.value;
        total_error += p.error;
        total_floor += p.floor;
        if (p.frozen) {
            done.push_back(p);
        } else {
            open.push_back(p);
            std::push_heap(open.begin(), open.end(), order);
        }
    }

    // Running sums drift when errors span many orders of magnitude, so the
    // stopping test is confirmed against an exact resummation.
    auto resum = [&] {
        total = 0.0;
        total_error = 0.0;
        total_floor = 0.0;
        for (const auto* set : {&open, &done})
            for (const Panel& p : *set) {
                total += p.value;
                total_error += p.error;
                total_floor += p.floor;
            }
    };
    while (!open.empty()) {
        if (total_error <= target(total, total_floor)) {
            resum();
            if (total_error <= target(total, total_floor)) break;
        }
        if (evaluations + 30 > max_evaluations) {
            throw QuadratureError("quadrature node budget of " + std::to_string(max_evaluations) + " exhausted",
                                  total.real(), total_error);
        }
        std::pop_heap(open.begin(), open.end(), order);
        const Panel worst = open.back();
        open.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        total_floor += left.floor + right.floor - worst.floor;
        for (const Panel& p : {left, right}) {
            if (p.frozen) {
                done.push_back(p);
            } else {
                open.push_back(p);
                std::push_heap(open.begin(), open.end(), order);
            }
        }
    }

    // Resum in domain order so the result does not depend on heap history.
    done.insert(done.end(), open.begin(), open.end());
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    cplx sum = 0.0;
    double err = 0.0;
    double floor = 0.0;
    for (const Panel& p : done) {
        sum += p.value;
        err += p.error;
        floor += p.floor;
    }
    if (err > target(sum, floor) * 1.0001) {
        throw QuadratureError("quadrature stalled at roundoff level", sum.real(), err);
    }
    return {sum, err, evaluations};
}

QuadratureResult integrate(const IntegralSpec& spec) {
    if (!spec.integrand) throw InputDomainError("integrand is empty");
    if (!(spec.half_width > 0.0) || !std::isfinite(spec.half_width))
        throw InputDomainError("half_width must be positive");
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0)) throw InputDomainError("tolerances must be positive");
    if (spec.panel_width < 0.0) throw InputDomainError("panel_width must be >= 0");

    const double lo = -spec.half_width;
    const double hi = spec.half_width;
    std::vector<double> breaks;
    if (spec.panel_width == 0.0) {
        for (int i = 0; i <= 20; ++i) breaks.push_back(lo + (hi - lo) * i / 20.0);
    } else {
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / spec.panel_width - 1e-9));
        for (std::size_t i = 0; i < n; ++i) breaks.push_back(lo + static_cast<double>(i) * spec.panel_width);
        breaks.push_back(hi);
    }
    QuadratureResult r = integrate_panels(spec.integrand, breaks, spec.abs_tol, spec.rel_tol, spec.max_evaluations);
    r.error += spec.tail_bound;
    return r;
}

}  // namespace pmdq
