#include "pmdq/type_b.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "pmdq/errors.hpp"
#include "pmdq/serialize.hpp"
#include "pmdq/type_a.hpp"

namespace pmdq {
namespace {

const PhasePoly kOdd(0.0, 1.0, 0.0, 1.0);

PhasePoly line(double c0, double c1) { return {c0, c1, 0.0, 0.0}; }

double& axis_ref(DelayConfig& d, Axis axis) {
    switch (axis) {
        case Axis::tau1: return d.tau1;
        case Axis::tau2: return d.tau2;
        case Axis::tau: return d.tau;
        default: throw InputDomainError("Type B scans run over tau1, tau2 or tau");
    }
}

/// Triangle argument (numerator, before dividing by tau_minus) as
/// offset + gradient . (tau1, tau2, tau).
struct Affine {
    double offset;
    Eigen::Vector3d gradient;
    double at(const DelayConfig& d) const { return offset + gradient.dot(Eigen::Vector3d(d.tau1, d.tau2, d.tau)); }
};

int axis_index(Axis axis) {
    switch (axis) {
        case Axis::tau1: return 0;
        case Axis::tau2: return 1;
        case Axis::tau: return 2;
        default: throw InputDomainError("Type B scans run over tau1, tau2 or tau");
    }
}

struct Triangle {
    Affine arg;
    FeatureKind kind;
    double weight;
    const char* label;
};

double sine_a(const TypeBConfig& cfg) {
    const DelayConfig& d = cfg.delays;
    return std::sin(cfg.sample_post.v.k0 * cfg.sample_post.length + cfg.spectrum.omega0 * (d.tau + d.tau2));
}

double sine_b(const TypeBConfig& cfg) {
    return std::sin(cfg.sample_post.h.k0 * cfg.sample_post.length + cfg.spectrum.omega0 * cfg.delays.tau);
}

std::array<Triangle, 5> triangles(const TypeBConfig& cfg) {
    const double pre = difference(cfg.sample_pre).alpha * cfg.sample_pre.length;
    const double l2 = cfg.sample_post.length;
    const double ah = cfg.sample_post.h.alpha * l2;
    const double av = cfg.sample_post.v.alpha * l2;
    const double post = av - ah;
    return {{
        {{2.0 * pre, {2.0, 0.0, 0.0}}, FeatureKind::plain, 1.0, "2(tau1 + dalpha1 l1)"},
        {{2.0 * pre + post, {2.0, 1.0, 0.0}},
         FeatureKind::modulated,
         4.0 * sine_a(cfg) * sine_b(cfg),
         "2 tau1 + 2 dalpha1 l1 + dalpha2 l2 + tau2"},
        {{2.0 * (pre + av), {2.0, 2.0, 2.0}}, FeatureKind::plain, -1.0, "2(tau1 + dalpha1 l1 + alphaV l2 + tau + tau2)"},
        {{2.0 * (pre - ah), {2.0, 0.0, -2.0}}, FeatureKind::plain, -1.0, "2(tau1 + dalpha1 l1 - alphaH l2 - tau)"},
        {{2.0 * (pre + post), {2.0, 2.0, 0.0}}, FeatureKind::plain, 1.0, "2(tau1 + dalpha1 l1 + dalpha2 l2 + tau2)"},
    }};
}

/// V minus H delays after the beam splitter for each outcome, in the
/// order of the five features (the modulated one has its own condition).
struct Outcome {
    double dtau_pre;
    std::array<double, 5> residual;  // zero at the feature center
    std::array<double, 5> dtau_post;
};

Outcome delay_table(const TypeBConfig& cfg, const DelayConfig& d) {
    const double l2 = cfg.sample_post.length;
    const double ah = cfg.sample_post.h.alpha;
    const double av = cfg.sample_post.v.alpha;
    Outcome o;
    o.dtau_pre = difference(cfg.sample_pre).alpha * cfg.sample_pre.length + d.tau1;
    const double both_lower = 0.0;
    const double both_upper = (av - ah) * l2 + d.tau2;
    const double v_upper = av * l2 + d.tau2 + d.tau;
    const double v_lower = -(ah * l2 + d.tau);
    o.dtau_post = {both_lower, both_upper, v_upper, v_lower, both_upper};
    o.residual = {o.dtau_pre + both_lower, 2.0 * o.dtau_pre + both_upper, o.dtau_pre + v_upper, o.dtau_pre + v_lower,
                  o.dtau_pre + both_upper};
    return o;
}

void require_linear(const TypeBConfig& cfg) {
    if (!cfg.is_linear()) throw ClosedFormInapplicable("closed form needs beta = gamma = 0 in both samples");
}

}  // namespace

void TypeBConfig::validate(bool physical) const {
    spectrum.validate();
    sample_pre.validate();
    sample_post.validate();
    delays.validate(physical);
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw InputDomainError("r0 must be positive");
}

std::string to_string(FeatureKind kind) { return kind == FeatureKind::plain ? "plain" : "modulated"; }

std::vector<PhaseTerm> type_b_terms(const TypeBConfig& cfg) {
    const double l1 = cfg.sample_pre.length;
    const double l2 = cfg.sample_post.length;
    const double w0 = cfg.spectrum.omega0;
    const DelayConfig& d = cfg.delays;
    PhasePoly pre = -2.0 * l1 * coefficients(difference(cfg.sample_pre)).cwiseProduct(kOdd);
    pre[1] -= 2.0 * d.tau1;
    const PhasePoly kh = l2 * coefficients(cfg.sample_post.h);
    const PhasePoly kv = l2 * coefficients(cfg.sample_post.v);
    const PhasePoly kh_m = reflect(kh);
    const PhasePoly kv_m = reflect(kv);
    return {
        {1.0, pre},
        {-1.0, pre - (kv - kv_m + line(0.0, 2.0 * (d.tau + d.tau2)))},
        {1.0, pre + kh - kv - line(w0 * d.tau2, d.tau2)},
        {1.0, pre + kv_m - kh_m + line(w0 * d.tau2, -d.tau2)},
        {-1.0, pre + kh - kh_m + line(0.0, 2.0 * d.tau)},
        {-1.0, pre + kh + kv_m + line(2.0 * w0 * d.tau + w0 * d.tau2, -d.tau2)},
        {-1.0, pre - (kh_m + kv + line(2.0 * w0 * d.tau + w0 * d.tau2, d.tau2))},
        {1.0, pre + kh - kh_m - kv + kv_m + line(0.0, -2.0 * d.tau2)},
    };
}

QuadratureResult type_b_modulation_integral(const TypeBConfig& cfg, const SpectralOptions& options) {
    const auto terms = type_b_terms(cfg);
    return spectral_integral(terms, cfg.spectrum.tau_minus, options);
}

double type_b_modulation(const TypeBConfig& cfg, const SpectralOptions& options) {
    const QuadratureResult r = type_b_modulation_integral(cfg, options);
    const double scale = 2.0 * kPi / cfg.spectrum.tau_minus;
    if (std::abs(r.value.imag()) > std::max(10.0 * r.error, 1e-9 * scale))
        throw QuadratureError("modulation integral has an imaginary residual of " +
                                  std::to_string(r.value.imag()),
                              r.value.real(), std::abs(r.value.imag()));
    return r.value.real();
}

double type_b_modulation_linear(const TypeBConfig& cfg) {
    require_linear(cfg);
    const double tm = cfg.spectrum.tau_minus;
    double m = 0.0;
    for (const Triangle& t : triangles(cfg)) m += t.weight * triangle(t.arg.at(cfg.delays) / tm);
    return 2.0 * kPi / tm * m;
}

double type_b_rate_linear(const TypeBConfig& cfg) {
    return cfg.r0 * (1.0 + normalization(cfg.spectrum.tau_minus) * type_b_modulation_linear(cfg));
}

double type_b_rate(const TypeBConfig& cfg, Engine engine, const SpectralOptions& options) {
    if (use_closed_form(engine, cfg.is_linear())) return type_b_rate_linear(cfg);
    return cfg.r0 * (1.0 + normalization(cfg.spectrum.tau_minus) * type_b_modulation(cfg, options));
}

double postponed_delay_rate(const TypeBConfig& cfg) {
    if (cfg.sample_pre.length != 0.0 || cfg.delays.tau1 != 0.0)
        throw ConfigError("postponed-delay rate needs l1 = 0 and tau1 = 0");
    require_linear(cfg);
    const double tm = cfg.spectrum.tau_minus;
    const double l2 = cfg.sample_post.length;
    const double ah = cfg.sample_post.h.alpha;
    const double av = cfg.sample_post.v.alpha;
    const double t = cfg.delays.tau;
    const double t2 = cfg.delays.tau2;
    const double da = (av - ah) * l2;
    return cfg.r0 * (2.0 + 4.0 * triangle((da + t2) / tm) * sine_a(cfg) * sine_b(cfg) -
                     triangle(2.0 * (av * l2 + t + t2) / tm) - triangle(2.0 * (ah * l2 + t) / tm) +
                     triangle(2.0 * (da + t2) / tm));
}

std::vector<DipPrediction> predict_dips(const TypeBConfig& cfg, Axis axis) {
    const int k = axis_index(axis);
    const double tm = cfg.spectrum.tau_minus;
    DelayConfig d = cfg.delays;
    const double here = axis_ref(d, axis);
    const Outcome table = delay_table(cfg, cfg.delays);
    std::vector<DipPrediction> out;
    int term = 0;
    for (const Triangle& t : triangles(cfg)) {
        DipPrediction p;
        p.term = ++term;
        p.axis = axis;
        p.kind = t.kind;
        p.weight = t.weight;
        p.provenance = t.label;
        const double g = t.arg.gradient[k];
        if (g != 0.0) {
            p.center = here - t.arg.at(cfg.delays) / g;
            p.half_width = tm / std::abs(g);
        } else {
            p.half_width = std::numeric_limits<double>::infinity();
        }
        if (t.kind == FeatureKind::modulated)
            p.modulation = "4 sin(kV0 l2 + Omega0 (tau + tau2)) sin(kH0 l2 + Omega0 tau) = " + std::to_string(t.weight);
        p.delay_pre = table.dtau_pre;
        p.delay_post = table.dtau_post[term - 1];
        out.push_back(p);
    }
    for (auto& a : out)
        for (const auto& b : out)
            if (&a != &b && a.center && b.center && std::abs(*a.center - *b.center) < 2.0 * tm) a.overlapping = true;
    return out;
}

std::array<std::optional<double>, 5> delay_table_centers(const TypeBConfig& cfg, Axis axis) {
    DelayConfig d0 = cfg.delays;
    DelayConfig d1 = cfg.delays;
    const double x0 = axis_ref(d0, axis);
    axis_ref(d1, axis) = x0 + 1.0;
    const Outcome r0 = delay_table(cfg, d0);
    const Outcome r1 = delay_table(cfg, d1);
    std::array<std::optional<double>, 5> out;
    for (int i = 0; i < 5; ++i) {
        const double slope = r1.residual[i] - r0.residual[i];
        if (std::abs(slope) > 1e-12) out[i] = x0 - r0.residual[i] / slope;
    }
    return out;
}

ScanResult type_b_scan(const TypeBConfig& cfg, Axis axis, const Eigen::VectorXd& grid, const ScanOptions& options) {
    cfg.validate(options.physical && axis != Axis::tau);
    require_monotone(grid);
    axis_index(axis);
    if (options.physical && axis == Axis::tau && (grid.array() < 0.0).any())
        throw InputDomainError("tau grid has negative values; tau is absolute and must be >= 0");
    const bool analytic = use_closed_form(options.engine, cfg.is_linear());
    ScanResult out;
    out.axis = axis;
    out.delay = grid;
    out.value = parallel_map(grid, options.threads, [&](double x) {
        TypeBConfig c = cfg;
        axis_ref(c.delays, axis) = x;
        return type_b_rate(c, analytic ? Engine::analytic : Engine::numeric, options.spectral);
    });
    out.metadata = {{"mode", "type_b"},
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
