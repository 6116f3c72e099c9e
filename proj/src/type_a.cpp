#include "pmdq/type_a.hpp"

#include <cmath>

#include "pmdq/errors.hpp"
#include "pmdq/serialize.hpp"

namespace pmdq {
namespace {

const PhasePoly kOdd(0.0, 1.0, 0.0, 1.0);
const PhasePoly kEven(1.0, 0.0, 1.0, 0.0);

PhasePoly delta_poly(const Sample& s) { return coefficients(difference(s)); }

void require_linear(const TypeAConfig& cfg) {
    if (!cfg.is_linear()) throw ClosedFormInapplicable("closed form needs beta = gamma = 0 in both samples");
}

double& axis_ref(DelayConfig& d, Axis axis) {
    switch (axis) {
        case Axis::tau1: return d.tau1;
        case Axis::tau2: return d.tau2;
        default: throw InputDomainError("Type A scans run over tau1 or tau2");
    }
}

}  // namespace

void TypeAConfig::validate() const {
    spectrum.validate();
    sample_pre.validate();
    sample_post.validate();
    delays.validate(false);
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw InputDomainError("r0 must be positive");
}

std::vector<PhaseTerm> type_a_terms(const TypeAConfig& cfg) {
    const double l1 = cfg.sample_pre.length;
    const double l2 = cfg.sample_post.length;
    const PhasePoly d1 = delta_poly(cfg.sample_pre);
    const PhasePoly d2 = delta_poly(cfg.sample_post);
    PhasePoly a = (2.0 * l1 * d1 + l2 * d2).cwiseProduct(kOdd);
    a[1] += 2.0 * cfg.delays.tau1 + cfg.delays.tau2;
    PhasePoly b = (l2 * d2).cwiseProduct(kEven);
    b[0] += cfg.spectrum.omega0 * cfg.delays.tau2;
    return {{0.25, a + b}, {0.25, a - b}, {0.25, -a + b}, {0.25, -a - b}};
}

QuadratureResult type_a_modulation_integral(const TypeAConfig& cfg, const SpectralOptions& options) {
    const auto terms = type_a_terms(cfg);
    return spectral_integral(terms, cfg.spectrum.tau_minus, options);
}

double type_a_modulation(const TypeAConfig& cfg, const SpectralOptions& options) {
    return type_a_modulation_integral(cfg, options).value.real();
}

QuadratureResult type_a_modulation_literal(const TypeAConfig& cfg, const SpectralOptions& options) {
    const double l1 = cfg.sample_pre.length;
    const double l2 = cfg.sample_post.length;
    const double w0 = cfg.spectrum.omega0;
    const double t1 = cfg.delays.tau1;
    const double t2 = cfg.delays.tau2;
    const PhasePoly d1 = delta_poly(cfg.sample_pre);
    const PhasePoly d2 = delta_poly(cfg.sample_post);
    PhasePoly pre = -l1 * (d1 - reflect(d1));
    pre[1] -= 2.0 * t1;
    PhasePoly first = pre + l2 * reflect(d2);
    first[0] += w0 * t2;
    first[1] -= t2;
    PhasePoly second = pre - l2 * d2;
    second[0] -= w0 * t2;
    second[1] -= t2;
    const PhaseTerm terms[] = {{0.5, first}, {0.5, second}};
    return spectral_integral(terms, cfg.spectrum.tau_minus, options);
}

double type_a_modulation_correlated(const TypeAConfig& cfg, const SpectralOptions& options) {
    const double l1 = cfg.sample_pre.length;
    const double l2 = cfg.sample_post.length;
    const double w0 = cfg.spectrum.omega0;
    const double t2 = cfg.delays.tau2;
    const PhasePoly d1 = delta_poly(cfg.sample_pre);
    const PhasePoly d2 = delta_poly(cfg.sample_post);
    PhasePoly pre = -2.0 * l1 * d1;
    pre[1] -= 2.0 * cfg.delays.tau1;
    PhasePoly first = pre + l2 * reflect(d2);
    first[0] += w0 * t2;
    first[1] -= t2;
    PhasePoly second = pre - l2 * d2;
    second[0] -= w0 * t2;
    second[1] -= t2;
    const PhaseTerm terms[] = {{0.5, first}, {0.5, second}};
    return spectral_integral(terms, cfg.spectrum.tau_minus, options).value.real();
}

double type_a_dip_center(const TypeAConfig& cfg) {
    const double shift = 2.0 * cfg.sample_pre.length * difference(cfg.sample_pre).alpha +
                         cfg.sample_post.length * difference(cfg.sample_post).alpha + cfg.delays.tau2;
    return -0.5 * shift;
}

double type_a_modulation_linear(const TypeAConfig& cfg) {
    require_linear(cfg);
    const double tm = cfg.spectrum.tau_minus;
    const double l2 = cfg.sample_post.length;
    const double s = 2.0 * (cfg.delays.tau1 - type_a_dip_center(cfg));
    const double phase = difference(cfg.sample_post).k0 * l2 + cfg.spectrum.omega0 * cfg.delays.tau2;
    return 2.0 * kPi / tm * std::cos(phase) * triangle(s / tm);
}

double type_a_rate_linear(const TypeAConfig& cfg) {
    return cfg.r0 * (1.0 + normalization(cfg.spectrum.tau_minus) * type_a_modulation_linear(cfg));
}

double type_a_rate(const TypeAConfig& cfg, Engine engine, const SpectralOptions& options) {
    if (use_closed_form(engine, cfg.is_linear())) return type_a_rate_linear(cfg);
    return cfg.r0 * (1.0 + normalization(cfg.spectrum.tau_minus) * type_a_modulation(cfg, options));
}

ScanResult type_a_scan(const TypeAConfig& cfg, Axis axis, const Eigen::VectorXd& grid, const ScanOptions& options) {
    cfg.validate();
    require_monotone(grid);
    DelayConfig check;
    axis_ref(check, axis);
    const bool analytic = use_closed_form(options.engine, cfg.is_linear());
    ScanResult out;
    out.axis = axis;
    out.delay = grid;
    out.value = parallel_map(grid, options.threads, [&](double x) {
        TypeAConfig c = cfg;
        axis_ref(c.delays, axis) = x;
        return type_a_rate(c, analytic ? Engine::analytic : Engine::numeric, options.spectral);
    });
    out.metadata = {{"mode", "type_a"},
                    {"axis", to_string(axis)},
                    {"engine", analytic ? "analytic" : "numeric"},
                    {"spectrum", to_json(cfg.spectrum)},
                    {"sample_pre", to_json(cfg.sample_pre)},
                    {"sample_post", to_json(cfg.sample_post)},
                    {"delays", to_json(cfg.delays)},
                    {"r0", cfg.r0}};
    return out;
}

}  // namespace pmdq
