#pragma once

#include <map>
#include <string>
#include <vector>

#include "pmdq/features.hpp"
#include "pmdq/scan.hpp"

namespace pmdq {

struct Estimate {
    double value = 0.0;
    double uncertainty = 0.0;
    std::string method;
};

struct RecoveryReport {
    std::string protocol;
    std::map<std::string, Estimate> estimates;
    /// Solution sets that cannot be reduced to one value (visibility branches).
    std::map<std::string, std::vector<double>> branches;
    double residual = 0.0;
    std::vector<std::string> notes;

    const Estimate& at(const std::string& name) const;
    bool has(const std::string& name) const { return estimates.count(name) > 0; }
};

struct TypeAGeometry {
    double l1 = 0.0;  // um
    double l2 = 0.0;  // um
    double omega0 = 0.0;
    double tau_minus = 0.0;
    double tau2_of_tau1_scan = 0.0;  // fixed tau2 during the tau1 scan
    double tau1_of_tau2_scan = 0.0;  // fixed tau1 during the tau2 scan
    double min_prominence = 0.05;
    int branch_range = 2;  // visibility branches for n in [-range, range]
};

/// dalpha from the tau1-scan dip and from the tau2-scan envelope; dk0 from
/// the fringe phase (unique within one fringe) and from the dip visibility
/// (a branch set). Assumes the same material before and after the beam
/// splitter, so the dip sits at tau1 = -(dalpha (2 l1 + l2) + tau2) / 2.
RecoveryReport recover_type_a(const ScanResult& tau1_scan, const ScanResult& tau2_scan, const TypeAGeometry& geometry);

struct TypeBSettings {
    double tau = 0.0;
    double tau2 = 0.0;
};

struct TypeBGeometry {
    double l2 = 0.0;
    double tau_minus = 0.0;
    double omega0 = 0.0;  // needed only for fringe smoothing in tau scans
    double min_prominence = 0.05;
};

/// Procedures (i)-(iii): tau1 scans with l1 = 0. (i) reads alphaH from the
/// dip at alphaH l2 + tau, (ii) alphaV from the dip at -(alphaV l2 + tau +
/// tau2), (iii) dalpha from the feature at -(dalpha l2 + tau2).
RecoveryReport recover_type_b_three_scan(const ScanResult& scan_i, const ScanResult& scan_ii, const ScanResult& scan_iii,
                                         const TypeBGeometry& geometry, const TypeBSettings& settings_i,
                                         const TypeBSettings& settings_ii, const TypeBSettings& settings_iii);

/// Two tau scans (l1 = tau1 = 0) at different tau2. The dip that stays put
/// sits at tau = -alphaH l2; the one that moves at tau = -(alphaV l2 + tau2).
RecoveryReport recover_type_b_two_scan(const ScanResult& scan_a, double tau2_a, const ScanResult& scan_b, double tau2_b,
                                       const TypeBGeometry& geometry);

}  // namespace pmdq
