#include "pmdq/fringe_fit.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "pmdq/dispersion.hpp"
#include "pmdq/errors.hpp"
#include "pmdq/features.hpp"

namespace pmdq {
namespace {

struct EnvelopeFringeModel {
    const Eigen::VectorXd& x;
    const Eigen::VectorXd& y;
    double omega;

    int inputs() const { return 5; }
    int values() const { return static_cast<int>(x.size()); }

    // p = (A, x0, w, phi, c)
    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double u = (x(i) - p(1)) / p(2);
            r(i) = p(0) * triangle(u) * std::cos(omega * x(i) + p(3)) + p(4) - y(i);
        }
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double u = (x(i) - p(1)) / p(2);
            const double c = std::cos(omega * x(i) + p(3));
            const double s = std::sin(omega * x(i) + p(3));
            const double l = triangle(u);
            const bool inside = std::abs(u) < 1.0;
            j(i, 0) = l * c;
            j(i, 1) = inside ? p(0) * c * (u > 0 ? 1.0 : -1.0) / p(2) : 0.0;
            j(i, 2) = inside ? p(0) * c * std::abs(u) / p(2) : 0.0;
            j(i, 3) = -p(0) * l * s;
            j(i, 4) = 1.0;
        }
        return 0;
    }
};

std::optional<double> half_crossing(const Eigen::VectorXd& x, const Eigen::VectorXd& e, Eigen::Index tip, int dir) {
    const double level = 0.5 * e(tip);
    for (Eigen::Index k = tip; k + dir >= 0 && k + dir < x.size(); k += dir) {
        if (e(k) >= level && e(k + dir) < level)
            return x(k) + (x(k + dir) - x(k)) * (e(k) - level) / (e(k) - e(k + dir));
    }
    return std::nullopt;
}

}  // namespace

double wrap_phase(double phi) {
    double r = std::remainder(phi, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

FringeFit fit_envelope_and_fringe(const ScanResult& scan, double omega) {
    if (!(omega > 0.0)) throw InputDomainError("fringe frequency must be positive");
    require_monotone(scan.delay);
    Eigen::VectorXd x = scan.delay, y = scan.value;
    if (x.size() > 1 && x(1) < x(0)) {
        x.reverseInPlace();
        y.reverseInPlace();
    }
    const Eigen::Index n = x.size();
    const double period = 2.0 * kPi / omega;
    if (n < 16) throw InputDomainError("fringe fit needs at least 16 points");
    const double max_step = (x.tail(n - 1) - x.head(n - 1)).maxCoeff();
    if (max_step > period / 8.0) throw InputDomainError("fringe fit needs at least 8 points per fringe period");

    // Demodulate at the fringe frequency and average over one period.
    const double c0 = y.mean();
    Eigen::VectorXd re(n), im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> z = (y(i) - c0) * std::polar(1.0, -omega * x(i));
        re(i) = z.real();
        im(i) = z.imag();
    }
    re = boxcar(x, re, period);
    im = boxcar(x, im, period);
    const Eigen::VectorXd env = (re.array().square() + im.array().square()).sqrt();
    Eigen::Index tip;
    const double peak = env.maxCoeff(&tip);
    if (!(peak > 0.0)) throw FitError("scan has no fringes", 0.0);

    FringeFit fit;
    const auto lo = half_crossing(x, env, tip, -1);
    const auto hi = half_crossing(x, env, tip, +1);
    if (lo && hi) fit.envelope_fwhm = *hi - *lo;

    double area = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) {
        const double h = x(i) - x(i - 1);
        const double a = 0.5 * (env(i) + env(i - 1)) * h;
        area += a;
    }
    double centroid = 0.0, weight = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (env(i) > 0.5 * peak) {
            centroid += env(i) * x(i);
            weight += env(i);
        }
    }

    // Zero crossings inside the envelope give the fringe period.
    std::vector<double> crossings;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (env(i) < 0.5 * peak || env(i - 1) < 0.5 * peak) continue;
        const double a = y(i - 1) - c0, b = y(i) - c0;
        if ((a < 0.0) != (b < 0.0)) crossings.push_back(x(i - 1) + (x(i) - x(i - 1)) * a / (a - b));
    }
    if (crossings.size() >= 3) {
        const Eigen::Index m = static_cast<Eigen::Index>(crossings.size());
        const Eigen::VectorXd k = Eigen::VectorXd::LinSpaced(m, 0.0, double(m - 1));
        const Eigen::Map<const Eigen::VectorXd> xc(crossings.data(), m);
        const double kk = (k.array() - k.mean()).square().sum();
        fit.fringe_period = 2.0 * ((k.array() - k.mean()) * (xc.array() - xc.mean())).sum() / kk;
    }

    Eigen::VectorXd p(5);
    p << 2.0 * peak, centroid / weight, std::max(area / peak, 2.0 * max_step), std::arg(std::complex<double>(re(tip), im(tip))),
        c0;
    EnvelopeFringeModel model{x, y, omega};
    Eigen::LevenbergMarquardt<EnvelopeFringeModel> lm(model);
    lm.parameters.xtol = 1e-14;
    lm.parameters.ftol = 1e-14;
    lm.parameters.maxfev = 4000;
    const int status = lm.minimize(p);

    Eigen::VectorXd r(n);
    model(p, r);
    fit.residual = std::sqrt(r.squaredNorm() / double(n));
    const double scale = std::max(std::abs(p(0)), 1e-300);
    if (status <= 0 || !p.allFinite() || p(2) == 0.0 || fit.residual > 0.5 * scale)
        throw FitError("envelope/fringe fit did not converge", fit.residual);

    Eigen::MatrixXd j(n, 5);
    model.df(p, j);
    const double dof = std::max<double>(1.0, double(n - 5));
    const Eigen::MatrixXd cov = (j.transpose() * j).ldlt().solve(Eigen::MatrixXd::Identity(5, 5)) * (r.squaredNorm() / dof);

    fit.amplitude = p(0);
    fit.phase = p(3);
    if (fit.amplitude < 0.0) {
        fit.amplitude = -fit.amplitude;
        fit.phase += kPi;
    }
    fit.phase = wrap_phase(fit.phase);
    fit.center = p(1);
    fit.width = std::abs(p(2));
    fit.offset = p(4);
    fit.center_sigma = std::sqrt(std::max(0.0, cov(1, 1)));
    fit.phase_sigma = std::sqrt(std::max(0.0, cov(3, 3)));
    return fit;
}

}  // namespace pmdq
