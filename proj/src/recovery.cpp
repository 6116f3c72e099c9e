#include "pmdq/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmdq/dispersion.hpp"
#include "pmdq/errors.hpp"
#include "pmdq/fringe_fit.hpp"

namespace pmdq {
namespace {

void require_axis(const ScanResult& scan, Axis axis, const std::string& what) {
    if (scan.axis != axis)
        throw ProtocolError(what + " must be a " + to_string(axis) + " scan, got " + to_string(scan.axis));
}

std::vector<DipFeature> features(const ScanResult& scan, double min_prominence, double tau_minus) {
    DipOptions o;
    o.min_prominence = min_prominence;
    o.tau_minus = tau_minus;
    return find_dips(scan, o);
}

const DipFeature* strongest(const std::vector<DipFeature>& fs, double sign) {
    const DipFeature* best = nullptr;
    for (const auto& f : fs) {
        if (sign != 0.0 && f.excursion * sign <= 0.0) continue;
        if (!best || std::abs(f.excursion) > std::abs(best->excursion)) best = &f;
    }
    return best;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

}  // namespace

const Estimate& RecoveryReport::at(const std::string& name) const {
    const auto it = estimates.find(name);
    if (it == estimates.end()) throw ProtocolError("report has no estimate for " + name);
    return it->second;
}

RecoveryReport recover_type_a(const ScanResult& tau1_scan, const ScanResult& tau2_scan, const TypeAGeometry& g) {
    require_axis(tau1_scan, Axis::tau1, "first Type A scan");
    require_axis(tau2_scan, Axis::tau2, "second Type A scan");
    const double leff = 2.0 * g.l1 + g.l2;
    if (!(g.l2 > 0.0) || !(leff > 0.0)) throw InputDomainError("Type A recovery needs l2 > 0");
    if (!(g.tau_minus > 0.0) || !(g.omega0 > 0.0)) throw InputDomainError("Type A recovery needs tau_minus and omega0");

    RecoveryReport r;
    r.protocol = "type_a";
    const auto dips = features(tau1_scan, g.min_prominence, g.tau_minus);
    const DipFeature* dip = strongest(dips, 0.0);
    if (dip) {
        const double total = -(2.0 * dip->center + g.tau2_of_tau1_scan);
        const double sigma = 2.0 * dip->center_sigma;
        r.estimates["dalpha"] = {total / leff, sigma / leff, "tau1-scan dip center"};
        r.estimates["dA"] = {total / leff * g.l2, sigma / leff * g.l2, "tau1-scan dip center"};
        if (dip->overlap_flag) {
            r.notes.push_back("dip overlaps another feature; visibility-based dk0 refused");
        } else if (!dip->visibility) {
            r.notes.push_back("dip depth exceeds the baseline; visibility-based dk0 unavailable");
        } else if (*dip->visibility < 1e-3) {
            r.notes.push_back("visibility is zero; visibility-based dk0 indeterminate");
        } else {
            // cos(dk0 l2 + Omega0 tau2) = sign(excursion) * visibility
            const double s = dip->excursion < 0.0 ? -1.0 : 1.0;
            const double base = std::acos(std::clamp(s * *dip->visibility, -1.0, 1.0));
            std::vector<double> set;
            for (int n = -g.branch_range; n <= g.branch_range; ++n)
                for (double pm : {1.0, -1.0})
                    set.push_back((pm * base - g.omega0 * g.tau2_of_tau1_scan + 2.0 * kPi * n) / g.l2);
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            r.branches["dk0_visibility"] = set;
            r.estimates["visibility"] = {*dip->visibility, 0.0, "tau1-scan dip depth / baseline"};
        }
    } else {
        r.notes.push_back("no dip found in the tau1 scan");
    }

    const FringeFit ff = fit_envelope_and_fringe(tau2_scan, g.omega0);
    const double dk0 = ff.phase / g.l2;
    r.estimates["dk0"] = {dk0, ff.phase_sigma / g.l2, "tau2-scan fringe phase"};
    r.estimates["phase_delay"] = {ff.phase / g.omega0, ff.phase_sigma / g.omega0, "tau2-scan fringe phase"};
    const double env_alpha = -(ff.center + 2.0 * g.tau1_of_tau2_scan) / leff;
    r.estimates["dalpha_envelope"] = {env_alpha, ff.center_sigma / leff, "tau2-scan envelope center"};
    if (!dip) {
        r.estimates["dalpha"] = {env_alpha, ff.center_sigma / leff, "tau2-scan envelope center"};
        r.estimates["dA"] = {env_alpha * g.l2, ff.center_sigma / leff * g.l2, "tau2-scan envelope center"};
    }

    r.residual = std::abs(r.at("dalpha").value - env_alpha);
    const auto it = r.branches.find("dk0_visibility");
    if (it != r.branches.end()) {
        double nearest = INFINITY;
        for (double b : it->second) nearest = std::min(nearest, std::abs(b - dk0));
        r.residual = std::max(r.residual, nearest);
        r.notes.push_back("fringe dk0 lies " + fmt(nearest) + " rad/um from the nearest visibility branch");
    }
    return r;
}

RecoveryReport recover_type_b_three_scan(const ScanResult& scan_i, const ScanResult& scan_ii, const ScanResult& scan_iii,
                                         const TypeBGeometry& g, const TypeBSettings& si, const TypeBSettings& sii,
                                         const TypeBSettings& siii) {
    require_axis(scan_i, Axis::tau1, "procedure (i)");
    require_axis(scan_ii, Axis::tau1, "procedure (ii)");
    require_axis(scan_iii, Axis::tau1, "procedure (iii)");
    if (!(g.l2 > 0.0) || !(g.tau_minus > 0.0)) throw InputDomainError("Type B recovery needs l2 and tau_minus");
    RecoveryReport r;
    r.protocol = "type_b_three_scan";

    const auto fi = features(scan_i, g.min_prominence, g.tau_minus);
    const DipFeature* h = strongest(fi, -1.0);
    if (!h) throw ProtocolError("procedure (i): alphaH dip not found in the scan window");
    r.estimates["alphaH"] = {(h->center - si.tau) / g.l2, h->center_sigma / g.l2, "procedure (i) dip"};

    const auto fii = features(scan_ii, g.min_prominence, g.tau_minus);
    const DipFeature* v = strongest(fii, -1.0);
    if (!v) throw ProtocolError("procedure (ii): alphaV dip not found in the scan window");
    r.estimates["alphaV"] = {-(v->center + sii.tau + sii.tau2) / g.l2, v->center_sigma / g.l2, "procedure (ii) dip"};

    const auto fiii = features(scan_iii, g.min_prominence, g.tau_minus);
    if (fiii.empty()) throw ProtocolError("procedure (iii): no feature found in the scan window");
    const DipFeature* far = nullptr;
    for (const auto& f : fiii)
        if (std::abs(f.center) > 0.25 * g.tau_minus && (!far || std::abs(f.center) > std::abs(far->center))) far = &f;
    if (far) {
        r.estimates["dalpha"] = {-(far->center + siii.tau2) / g.l2, far->center_sigma / g.l2, "procedure (iii) feature"};
    } else {
        r.estimates["dalpha"] = {-siii.tau2 / g.l2, 0.0, "procedure (iii) feature"};
        r.notes.push_back("procedure (iii): all features coincide at the origin");
    }
    for (const auto* fs : {&fi, &fii, &fiii})
        for (const auto& f : *fs)
            if (f.overlap_flag) r.notes.push_back("overlapping features near " + fmt(f.center) + " fs");

    r.residual = std::abs(r.at("alphaV").value - r.at("alphaH").value - r.at("dalpha").value);
    return r;
}

RecoveryReport recover_type_b_two_scan(const ScanResult& scan_a, double tau2_a, const ScanResult& scan_b, double tau2_b,
                                       const TypeBGeometry& g) {
    require_axis(scan_a, Axis::tau, "first postponed-delay scan");
    require_axis(scan_b, Axis::tau, "second postponed-delay scan");
    if (tau2_a == tau2_b) throw ProtocolError("the two scans need different tau2");
    if (!(g.l2 > 0.0) || !(g.tau_minus > 0.0)) throw InputDomainError("Type B recovery needs l2 and tau_minus");

    RecoveryReport r;
    r.protocol = "type_b_two_scan";
    auto dips_of = [&](const ScanResult& s) {
        ScanResult work = s;
        if (g.omega0 > 0.0 && 0.5 * g.tau_minus >= kPi / g.omega0) {
            work.value = boxcar(s.delay, s.value, kPi / g.omega0);
        }
        std::vector<DipFeature> out;
        for (const auto& f : features(work, g.min_prominence, g.tau_minus))
            if (f.excursion < 0.0) out.push_back(f);
        return out;
    };
    auto da = dips_of(scan_a);
    auto db = dips_of(scan_b);
    double ta = tau2_a, tb = tau2_b;
    if (db.size() < da.size()) {
        std::swap(da, db);
        std::swap(ta, tb);
    }
    const double tol = g.tau_minus / 100.0;
    auto match = [tol](const std::vector<DipFeature>& fs, double c) -> const DipFeature* {
        for (const auto& f : fs)
            if (std::abs(f.center - c) < tol) return &f;
        return nullptr;
    };
    std::vector<const DipFeature*> stationary, moving;
    for (const auto& f : db) (match(da, f.center) ? stationary : moving).push_back(&f);
    if (stationary.size() != 1 || moving.size() != 1)
        throw PairingError("ambiguous dip pairing: " + std::to_string(stationary.size()) + " stationary and " +
                           std::to_string(moving.size()) + " moving dips");

    const DipFeature& s = *stationary.front();
    const DipFeature* s_other = match(da, s.center);
    const double ch = 0.5 * (s.center + s_other->center);
    r.estimates["alphaH"] = {-ch / g.l2, 0.5 * std::hypot(s.center_sigma, s_other->center_sigma) / g.l2,
                             "stationary dip"};

    const DipFeature& m = *moving.front();
    double av = -(m.center + tb) / g.l2;
    double av_sigma = m.center_sigma / g.l2;
    const DipFeature* m_other = match(da, m.center + (tb - ta));
    if (m_other) {
        av = 0.5 * (av - (m_other->center + ta) / g.l2);
        av_sigma = 0.5 * std::hypot(m.center_sigma, m_other->center_sigma) / g.l2;
        if (m_other == s_other) r.notes.push_back("moving dip coincides with the stationary one in one scan");
    }
    r.estimates["alphaV"] = {av, av_sigma, "moving dip"};
    const Estimate& h = r.estimates["alphaH"];
    r.estimates["dalpha"] = {av - h.value, std::hypot(av_sigma, h.uncertainty), "difference of moving and stationary"};
    r.residual = m_other ? std::abs((m.center + tb) - (m_other->center + ta)) / g.l2 : 0.0;
    return r;
}

}  // namespace pmdq
