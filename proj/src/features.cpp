#include "pmdq/features.hpp"

#include <algorithm>
#include <cmath>

#include "pmdq/errors.hpp"

namespace pmdq {
namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double sigma = 0.0;  // residual standard deviation
    double sxx = 0.0;
    double mean_x = 0.0;
    int n = 0;
    double at(double x) const { return intercept + slope * x; }
    double solve(double y) const { return (y - intercept) / slope; }
};

Line fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    Line l;
    l.n = static_cast<int>(xs.size());
    Eigen::Map<const Eigen::VectorXd> x(xs.data(), l.n), y(ys.data(), l.n);
    l.mean_x = x.mean();
    const double my = y.mean();
    l.sxx = (x.array() - l.mean_x).square().sum();
    l.slope = ((x.array() - l.mean_x) * (y.array() - my)).sum() / l.sxx;
    l.intercept = my - l.slope * l.mean_x;
    if (l.n > 2) {
        const double ss = (y.array() - (l.intercept + l.slope * x.array())).square().sum();
        l.sigma = std::sqrt(ss / (l.n - 2));
    }
    return l;
}

/// Standard error of the abscissa where the line reaches level y.
double crossing_sigma(const Line& l, double y) {
    if (l.n < 3 || l.slope == 0.0) return 0.0;
    const double x = l.solve(y);
    const double var_y = l.sigma * l.sigma * (1.0 / l.n + (x - l.mean_x) * (x - l.mean_x) / l.sxx);
    return std::sqrt(var_y) / std::abs(l.slope);
}

double median(Eigen::VectorXd v) {
    const auto n = static_cast<std::size_t>(v.size());
    auto* begin = v.data();
    std::nth_element(begin, begin + n / 2, begin + n);
    double m = v(n / 2);
    if (n % 2 == 0) m = 0.5 * (m + *std::max_element(begin, begin + n / 2));
    return m;
}

struct Extremum {
    Eigen::Index index;
    double prominence;
};

/// Local maxima of z with scipy-style prominence.
std::vector<Extremum> maxima(const Eigen::VectorXd& z) {
    std::vector<Extremum> out;
    const Eigen::Index n = z.size();
    Eigen::Index i = 1;
    while (i < n - 1) {
        if (z(i) > z(i - 1)) {
            Eigen::Index j = i;
            while (j + 1 < n && z(j + 1) == z(i)) ++j;
            if (j + 1 < n && z(j + 1) < z(i)) {
                const Eigen::Index peak = (i + j) / 2;
                double left_min = z(peak);
                for (Eigen::Index k = peak; k >= 0 && z(k) <= z(peak); --k) left_min = std::min(left_min, z(k));
                double right_min = z(peak);
                for (Eigen::Index k = peak; k < n && z(k) <= z(peak); ++k) right_min = std::min(right_min, z(k));
                out.push_back({peak, z(peak) - std::max(left_min, right_min)});
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

/// Points on one flank with 20-80% of the excursion. Walks away from the
/// tip and stops once the curve falls below 20% or turns back up.
void collect_flank(const Eigen::VectorXd& x, const Eigen::VectorXd& frac, Eigen::Index tip, int dir,
                   std::vector<double>& xs, std::vector<double>& fs) {
    double lowest = frac(tip);
    for (Eigen::Index k = tip + dir; k >= 0 && k < x.size(); k += dir) {
        const double f = frac(k);
        if (f < 0.2 || f > lowest + 0.1) break;
        lowest = std::min(lowest, f);
        if (f <= 0.8) {
            xs.push_back(x(k));
            fs.push_back(f);
        }
    }
}

/// Abscissa where frac first drops through `level` walking from the tip.
std::optional<double> level_crossing(const Eigen::VectorXd& x, const Eigen::VectorXd& frac, Eigen::Index tip,
                                     int dir, double level) {
    for (Eigen::Index k = tip; k + dir >= 0 && k + dir < x.size(); k += dir) {
        const double a = frac(k), b = frac(k + dir);
        if (a >= level && b < level) return x(k) + (x(k + dir) - x(k)) * (a - level) / (a - b);
    }
    return std::nullopt;
}

}  // namespace

std::vector<DipFeature> find_dips(const ScanResult& scan, double min_prominence, double tau_minus) {
    DipOptions o;
    o.min_prominence = min_prominence;
    o.tau_minus = tau_minus;
    return find_dips(scan, o);
}

std::vector<DipFeature> find_dips(const ScanResult& scan, const DipOptions& options) {
    if (scan.delay.size() != scan.value.size()) throw InputDomainError("scan columns differ in length");
    require_monotone(scan.delay);
    if (!(options.min_prominence > 0.0)) throw InputDomainError("min_prominence must be positive");
    Eigen::VectorXd x = scan.delay;
    Eigen::VectorXd y = scan.value;
    if (x.size() > 1 && x(1) < x(0)) {
        x.reverseInPlace();
        y.reverseInPlace();
    }
    std::vector<DipFeature> out;
    if (x.size() < 3) return out;
    const double base = options.baseline ? *options.baseline : median(y);

    for (const double sign : {1.0, -1.0}) {
        const Eigen::VectorXd z = sign * (y.array() - base);
        for (const Extremum& e : maxima(z)) {
            if (e.prominence < options.min_prominence || z(e.index) < options.min_prominence) continue;
            const Eigen::Index tip = e.index;
            DipFeature f;
            f.baseline = base;
            f.excursion = y(tip) - base;
            f.prominence = e.prominence;
            const Eigen::VectorXd frac = (y.array() - base) / f.excursion;

            std::vector<double> lx, lf, rx, rf;
            collect_flank(x, frac, tip, -1, lx, lf);
            collect_flank(x, frac, tip, +1, rx, rf);
            const auto half_l = level_crossing(x, frac, tip, -1, 0.5);
            const auto half_r = level_crossing(x, frac, tip, +1, 0.5);
            if (half_l && half_r) f.fwhm = *half_r - *half_l;

            if (lx.size() >= 4 && rx.size() >= 4) {
                const Line left = fit_line(lx, lf);
                const Line right = fit_line(rx, rf);
                if (left.slope > 0.0 && right.slope < 0.0) {
                    f.center = (right.intercept - left.intercept) / (left.slope - right.slope);
                    f.half_width = 0.5 * (right.solve(0.0) - left.solve(0.0));
                    f.center_sigma = 0.5 * std::hypot(crossing_sigma(left, 0.5), crossing_sigma(right, 0.5));
                    f.flank_fit = true;
                    // A sharp tip that fell between samples: take the depth from the lines.
                    const double apex = left.at(f.center);
                    const double step = std::max(x(tip) - x(tip - 1), x(tip + 1) - x(tip));
                    if (apex > 1.0 && apex - 1.0 <= 1.5 * step / f.half_width) {
                        f.excursion *= apex;
                        const auto l = level_crossing(x, frac, tip, -1, 0.5 * apex);
                        const auto r = level_crossing(x, frac, tip, +1, 0.5 * apex);
                        if (l && r) f.fwhm = *r - *l;
                    }
                }
            }
            if (!f.flank_fit) {
                const double x0 = x(tip - 1), x1 = x(tip), x2 = x(tip + 1);
                const double y0 = z(tip - 1), y1 = z(tip), y2 = z(tip + 1);
                const double d = (x0 - x1) * (x0 - x2) * (x1 - x2);
                const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d;
                const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / d;
                f.center = a < 0.0 ? std::clamp(-b / (2.0 * a), x0, x2) : x1;
                f.center_sigma = 0.25 * (x2 - x0);
                f.half_width = f.fwhm > 0.0 ? f.fwhm : 0.5 * (x2 - x0);
            }
            if (f.fwhm <= 0.0) f.fwhm = f.half_width;
            if (base > 0.0 && std::abs(f.excursion) <= base) f.visibility = std::abs(f.excursion) / base;
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end(), [](const DipFeature& a, const DipFeature& b) { return a.center < b.center; });
    if (options.tau_minus > 0.0) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            if (out[i + 1].center - out[i].center < 2.0 * options.tau_minus) {
                out[i].overlap_flag = true;
                out[i + 1].overlap_flag = true;
            }
        }
    }
    return out;
}

Eigen::VectorXd boxcar(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double window) {
    require_monotone(x);
    if (!(window > 0.0)) throw InputDomainError("smoothing window must be positive");
    const Eigen::Index n = x.size();
    const bool rising = n < 2 || x(1) > x(0);
    Eigen::VectorXd xs = x, ys = y;
    if (!rising) {
        xs.reverseInPlace();
        ys.reverseInPlace();
    }
    // Cumulative integral of the piecewise-linear interpolant.
    Eigen::VectorXd cum(n);
    cum(0) = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) cum(i) = cum(i - 1) + 0.5 * (ys(i) + ys(i - 1)) * (xs(i) - xs(i - 1));
    auto integral_to = [&](double t) {
        t = std::clamp(t, xs(0), xs(n - 1));
        const auto it = std::upper_bound(xs.data(), xs.data() + n, t);
        Eigen::Index k = std::max<Eigen::Index>(1, std::min<Eigen::Index>(n - 1, it - xs.data())) - 1;
        const double h = xs(k + 1) - xs(k);
        const double u = t - xs(k);
        const double slope = (ys(k + 1) - ys(k)) / h;
        return cum(k) + u * (ys(k) + 0.5 * slope * u);
    };
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lo = std::max(xs(0), xs(i) - 0.5 * window);
        const double hi = std::min(xs(n - 1), xs(i) + 0.5 * window);
        out(i) = hi > lo ? (integral_to(hi) - integral_to(lo)) / (hi - lo) : ys(i);
    }
    if (!rising) out.reverseInPlace();
    return out;
}

}  // namespace pmdq
