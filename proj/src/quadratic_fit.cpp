#include "pmdq/quadratic_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "pmdq/errors.hpp"

namespace pmdq {
namespace {

double& axis_ref(DelayConfig& d, Axis axis) {
    switch (axis) {
        case Axis::tau1: return d.tau1;
        case Axis::tau2: return d.tau2;
        case Axis::tau: return d.tau;
        default: throw InputDomainError("quadratic fit runs on tau1, tau2 or tau scans");
    }
}

struct QuadraticModel {
    const Eigen::VectorXd& x;
    const Eigen::VectorXd& y;
    const TypeBConfig& base;
    const QuadraticFitOptions& options;
    Eigen::Vector4d steps;

    int inputs() const { return 4; }
    int values() const { return static_cast<int>(x.size()); }

    Eigen::VectorXd predict(const Eigen::VectorXd& p) const {
        TypeBConfig c = base;
        c.sample_post.v.k0 = c.sample_post.h.k0 + p(0);
        c.sample_post.v.beta = c.sample_post.h.beta + p(1);
        const Eigen::VectorXd shifted = x.array() - p(2);
        const Eigen::VectorXd r = parallel_map(shifted, options.threads, [&](double t) {
            TypeBConfig k = c;
            axis_ref(k.delays, options.axis) = t;
            return type_b_rate(k, Engine::numeric, options.spectral);
        });
        return base.r0 + p(3) * (r.array() - base.r0);
    }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        r = predict(p) - y;
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
        Eigen::VectorXd unit = p;
        unit(3) = 1.0;
        const Eigen::VectorXd f0 = predict(unit);
        for (int k = 0; k < 3; ++k) {
            Eigen::VectorXd hi = unit;
            hi(k) += steps(k);
            j.col(k) = p(3) * (predict(hi) - f0) / steps(k);
        }
        j.col(3) = f0.array() - base.r0;
        return 0;
    }
};

}  // namespace

RecoveryReport fit_quadratic(const ScanResult& scan, const TypeBConfig& model, const QuadraticFitOptions& options) {
    model.validate();
    require_monotone(scan.delay);
    if (scan.delay.size() < 6) throw InputDomainError("quadratic fit needs at least 6 points");
    if (!(options.dbeta_max > options.dbeta_min) || options.grid_points < 2)
        throw InputDomainError("quadratic fit needs a nonempty dbeta search range");
    if (!(model.sample_post.length > 0.0)) throw InputDomainError("quadratic fit needs a post-BS sample");

    const double l2 = model.sample_post.length;
    const double tm = model.spectrum.tau_minus;
    const double range = std::max(std::abs(options.dbeta_min), std::abs(options.dbeta_max));
    QuadraticModel m{scan.delay, scan.value, model, options,
                     Eigen::Vector4d(1e-4 / l2, 1e-3 * range, 1e-3 * tm, 0.0)};

    const double prior_dk0 = model.sample_post.v.k0 - model.sample_post.h.k0;
    const Eigen::Index n = scan.delay.size();
    Eigen::VectorXd p(4);
    p << prior_dk0, 0.0, 0.0, 1.0;
    // Best grid point on each side of zero; the two signs are fitted separately.
    double best[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double start[2] = {0.0, 0.0};
    for (int i = 0; i < options.grid_points; ++i) {
        p(1) = options.dbeta_min + (options.dbeta_max - options.dbeta_min) * i / (options.grid_points - 1);
        Eigen::VectorXd r(n);
        m(p, r);
        const int side = p(1) < 0.0 ? 0 : 1;
        if (r.squaredNorm() < best[side]) {
            best[side] = r.squaredNorm();
            start[side] = p(1);
        }
    }

    struct Candidate {
        Eigen::VectorXd p;
        double rms;
    };
    std::vector<Candidate> fits;
    for (int side = 0; side < 2; ++side) {
        if (!std::isfinite(best[side])) continue;
        Eigen::VectorXd q(4);
        q << prior_dk0, start[side], 0.0, 1.0;
        Eigen::LevenbergMarquardt<QuadraticModel> lm(m);
        lm.parameters.xtol = 1e-10;
        lm.parameters.ftol = 1e-12;
        lm.parameters.maxfev = 100;
        const int status = lm.minimize(q);
        Eigen::VectorXd r(n);
        m(q, r);
        const double rms = std::sqrt(r.squaredNorm() / double(n));
        if (status > 0 && q.allFinite() && std::abs(q(1)) <= 2.0 * range) fits.push_back({q, rms});
    }
    if (fits.empty()) throw FitError("quadratic fit diverged or left the dbeta search range", std::sqrt(best[0] / n));

    // (dk0, dbeta) and a mirrored pair can fit equally well; the data then
    // cannot fix the sign, and the pair nearer the prior dk0 is kept.
    std::sort(fits.begin(), fits.end(), [](const Candidate& a, const Candidate& b) { return a.rms < b.rms; });
    const double scale = scan.value.cwiseAbs().maxCoeff();
    std::size_t pick = 0;
    bool ambiguous = false;
    if (fits.size() == 2 && fits[1].rms <= 1.5 * fits[0].rms + 1e-9 * scale &&
        (fits[0].p(1) > 0.0) != (fits[1].p(1) > 0.0)) {
        ambiguous = true;
        if (std::abs(fits[1].p(0) - prior_dk0) < std::abs(fits[0].p(0) - prior_dk0)) pick = 1;
    }
    p = fits[pick].p;
    const double rms = fits[pick].rms;
    Eigen::VectorXd r(n);
    m(p, r);

    Eigen::MatrixXd j(n, 4);
    m.df(p, j);
    const Eigen::MatrixXd cov =
        (j.transpose() * j).ldlt().solve(Eigen::MatrixXd::Identity(4, 4)) * (r.squaredNorm() / std::max<double>(1.0, double(n - 4)));
    auto sd = [&cov](int k) { return std::sqrt(std::max(0.0, cov(k, k))); };

    RecoveryReport out;
    out.protocol = "fit_quadratic";
    out.estimates["dk0"] = {p(0), sd(0), "numeric model fit"};
    out.estimates["dbeta"] = {p(1), sd(1), "numeric model fit"};
    out.estimates["shift"] = {p(2), sd(2), "numeric model fit"};
    out.estimates["amplitude"] = {p(3), sd(3), "numeric model fit"};
    out.residual = rms;
    out.notes.push_back("starting dbeta " + std::to_string(start[0]) + " and " + std::to_string(start[1]) +
                        " from a " + std::to_string(options.grid_points) + "-point search");
    if (ambiguous) {
        const Eigen::VectorXd& other = fits[1 - pick].p;
        out.branches["dbeta"] = {p(1), other(1)};
        out.branches["dk0"] = {p(0), other(0)};
        out.notes.push_back("mirrored solution dbeta = " + std::to_string(other(1)) + ", dk0 = " +
                            std::to_string(other(0)) + " fits equally well; kept the one nearer the prior dk0");
    }
    return out;
}

}  // namespace pmdq
