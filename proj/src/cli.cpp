#include "pmdq/cli.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "pmdq/classical.hpp"
#include "pmdq/config.hpp"
#include "pmdq/errors.hpp"
#include "pmdq/features.hpp"
#include "pmdq/quadratic_fit.hpp"
#include "pmdq/recovery.hpp"
#include "pmdq/report.hpp"
#include "pmdq/scan_io.hpp"
#include "pmdq/serialize.hpp"
#include "pmdq/type_a.hpp"
#include "pmdq/type_b.hpp"

namespace pmdq {
namespace {

using nlohmann::json;

std::string output_path(const CommandOptions& o, const ExperimentConfig& c) { return o.out ? *o.out : c.output_path; }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty())
        out << text;
    else
        write_text_file(path, text);
}

ScanResult postponed_analytic_scan(const TypeBConfig& cfg, Axis axis, const Eigen::VectorXd& grid, unsigned threads) {
    ScanResult s;
    s.axis = axis;
    s.delay = grid;
    s.value = parallel_map(grid, threads, [&](double x) {
        TypeBConfig c = cfg;
        (axis == Axis::tau ? c.delays.tau : c.delays.tau2) = x;
        return postponed_delay_rate(c);
    });
    s.metadata = {{"axis", to_string(axis)},
                  {"engine", "analytic"},
                  {"spectrum", to_json(cfg.spectrum)},
                  {"sample_pre", to_json(cfg.sample_pre)},
                  {"sample_post", to_json(cfg.sample_post)},
                  {"delays", to_json(cfg.delays)},
                  {"r0", cfg.r0}};
    return s;
}

int run_scan(const CommandOptions& o, std::ostream& out, std::ostream& err) {
    const ExperimentConfig c = load_config(o.config_path);
    if (!c.scan) throw ConfigError("scan: required for the scan command");
    ScanOptions so;
    so.engine = o.engine ? *o.engine : c.engine;
    so.threads = o.threads;
    so.physical = c.physical_mode;
    const Eigen::VectorXd grid = linspace(c.scan->start, c.scan->stop, c.scan->points);

    ScanResult s;
    try {
        switch (c.mode) {
            case Mode::classical: {
                ClassicalConfig cc = c.classical();
                s = classical_scan(cc, so);
                break;
            }
            case Mode::type_a: s = type_a_scan(c.type_a(), c.scan->axis, grid, so); break;
            case Mode::type_b: s = type_b_scan(c.type_b(), c.scan->axis, grid, so); break;
            case Mode::type_b_postponed: {
                const TypeBConfig b = c.type_b();
                if (use_closed_form(so.engine, b.is_linear())) {
                    b.validate(so.physical);
                    if (so.physical && c.scan->axis == Axis::tau && c.scan->start < 0.0)
                        throw InputDomainError("tau grid has negative values");
                    s = postponed_analytic_scan(b, c.scan->axis, grid, so.threads);
                } else {
                    s = type_b_scan(b, c.scan->axis, grid, so);
                }
                break;
            }
        }
    } catch (const InputDomainError& e) {
        throw ConfigError(e.what());
    }
    s.metadata["mode"] = to_string(c.mode);
    if (c.noise.relative > 0.0) {
        const std::uint64_t seed = o.seed ? *o.seed : c.noise.seed;
        apply_noise(s, c.noise.relative, seed);
        s.metadata["noise"] = {{"relative", c.noise.relative}, {"seed", seed}};
    }

    std::ostringstream text;
    write_scan(text, s, c.source);
    const std::string path = output_path(o, c);
    emit(path, text.str(), out);

    Eigen::Index imin, imax;
    s.value.minCoeff(&imin);
    s.value.maxCoeff(&imax);
    const auto features = find_dips(s, 0.05, c.mode == Mode::classical ? 0.0 : c.spectrum.tau_minus);
    std::ostream& summary = path.empty() ? err : out;
    summary << "points = " << s.size() << "\n"
            << "engine = " << s.metadata.value("engine", "") << "\n"
            << "extrema = " << features.size() << "\n"
            << "min = " << s.value(imin) << " at " << s.delay(imin) << "\n"
            << "max = " << s.value(imax) << " at " << s.delay(imax) << "\n";
    if (!path.empty()) summary << "wrote " << path << "\n";
    return kExitOk;
}

int run_predict(const CommandOptions& o, std::ostream& out, std::ostream& err) {
    const ExperimentConfig c = load_config(o.config_path);
    if (c.mode != Mode::type_b && c.mode != Mode::type_b_postponed)
        throw ConfigError("mode: predict needs type_b or type_b_postponed");
    const Axis axis = c.scan ? c.scan->axis : Axis::tau1;
    std::optional<Window> window;
    if (c.scan) window = Window{c.scan->start, c.scan->stop};
    const auto predictions = predict_dips(c.type_b(), axis);
    const std::string path = output_path(o, c);
    emit(path, format_predictions(predictions, window), out);
    if (!path.empty()) out << "wrote " << path << "\n";
    (void)err;
    return kExitOk;
}

struct LoadedScan {
    ScanResult scan;
    std::string path;
};

const json& meta(const LoadedScan& s, const std::string& key) {
    if (!s.scan.metadata.contains(key)) throw ProtocolError(s.path + ": metadata has no '" + key + "'");
    return s.scan.metadata.at(key);
}

SourceSpectrum spectrum_of(const LoadedScan& s) {
    try {
        return parse_spectrum(meta(s, "spectrum"), s.path + " metadata.spectrum");
    } catch (const ConfigError& e) {
        throw ProtocolError(e.what());
    }
}

Sample sample_of(const LoadedScan& s, const std::string& key) {
    if (!s.scan.metadata.contains(key)) return {};
    return parse_sample(meta(s, key), s.path + " metadata." + key);
}

DelayConfig delays_of(const LoadedScan& s) { return parse_delays(meta(s, "delays"), s.path + " metadata.delays"); }

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

int run_recover(const CommandOptions& o, std::ostream& out, std::ostream& err) {
    const ExperimentConfig c = load_config(o.config_path);
    if (!c.recover) throw ConfigError("recover: required for the recover command");
    const RecoverSpec& spec = *c.recover;
    const std::vector<std::string> paths = o.scans.empty() ? spec.scans : o.scans;

    std::vector<LoadedScan> scans;
    for (const auto& p : paths) scans.push_back({read_scan_file(p), p});
    if (scans.empty()) throw ConfigError("recover.scans: no scan files given");

    const SourceSpectrum ref = c.has_spectrum ? c.spectrum : spectrum_of(scans.front());
    for (const auto& s : scans) {
        const SourceSpectrum sp = spectrum_of(s);
        if (!same(sp.omega0, ref.omega0)) throw ProtocolError(s.path + ": omega0 differs from the other scans");
        if (!same(sp.tau_minus, ref.tau_minus)) throw ProtocolError(s.path + ": tau_minus differs from the other scans");
    }
    auto expect = [&](std::size_t n) {
        if (scans.size() != n)
            throw ConfigError("recover.scans: protocol " + spec.protocol + " needs " + std::to_string(n) + " scans");
    };

    RecoveryReport report;
    if (spec.protocol == "type_a") {
        expect(2);
        const LoadedScan* t1 = nullptr;
        const LoadedScan* t2 = nullptr;
        for (const auto& s : scans) (s.scan.axis == Axis::tau1 ? t1 : t2) = &s;
        if (!t1 || !t2) throw ProtocolError("type_a recovery needs one tau1 scan and one tau2 scan");
        TypeAGeometry g;
        g.l1 = sample_of(*t1, "sample_pre").length;
        g.l2 = sample_of(*t1, "sample_post").length;
        if (!same(sample_of(*t2, "sample_post").length, g.l2) || !same(sample_of(*t2, "sample_pre").length, g.l1))
            throw ProtocolError("the two scans were taken with different sample lengths");
        g.omega0 = ref.omega0;
        g.tau_minus = ref.tau_minus;
        g.tau2_of_tau1_scan = delays_of(*t1).tau2;
        g.tau1_of_tau2_scan = delays_of(*t2).tau1;
        g.min_prominence = spec.min_prominence;
        report = recover_type_a(t1->scan, t2->scan, g);
    } else if (spec.protocol == "type_b_three_scan" || spec.protocol == "type_b_two_scan") {
        TypeBGeometry g;
        g.l2 = sample_of(scans.front(), "sample_post").length;
        g.tau_minus = ref.tau_minus;
        g.omega0 = ref.omega0;
        g.min_prominence = spec.min_prominence;
        for (const auto& s : scans) {
            if (!same(sample_of(s, "sample_post").length, g.l2))
                throw ProtocolError(s.path + ": sample length differs from the other scans");
            if (sample_of(s, "sample_pre").length != 0.0) throw ProtocolError(s.path + ": protocol needs l1 = 0");
        }
        if (spec.protocol == "type_b_three_scan") {
            expect(3);
            std::vector<TypeBSettings> st = spec.settings;
            if (st.empty())
                for (const auto& s : scans) st.push_back({delays_of(s).tau, delays_of(s).tau2});
            if (st.size() != 3) throw ConfigError("recover.settings: needs three entries");
            report = recover_type_b_three_scan(scans[0].scan, scans[1].scan, scans[2].scan, g, st[0], st[1], st[2]);
        } else {
            expect(2);
            for (const auto& s : scans)
                if (delays_of(s).tau1 != 0.0) throw ProtocolError(s.path + ": protocol needs tau1 = 0");
            report = recover_type_b_two_scan(scans[0].scan, delays_of(scans[0]).tau2, scans[1].scan,
                                             delays_of(scans[1]).tau2, g);
        }
    } else {
        expect(1);
        const LoadedScan& s = scans.front();
        TypeBConfig model{ref, sample_of(s, "sample_pre"), sample_of(s, "sample_post"), delays_of(s),
                          s.scan.metadata.value("r0", 1.0)};
        QuadraticFitOptions q;
        q.axis = s.scan.axis;
        q.dbeta_min = spec.dbeta_min;
        q.dbeta_max = spec.dbeta_max;
        q.threads = o.threads;
        report = fit_quadratic(s.scan, model, q);
    }
    const std::string path = output_path(o, c);
    emit(path, format_report(report), out);
    if (!path.empty()) out << "wrote " << path << "\n";
    (void)err;
    return kExitOk;
}

}  // namespace

int run_command(const std::string& command, const CommandOptions& options, std::ostream& out, std::ostream& err) {
    try {
        if (command == "scan") return run_scan(options, out, err);
        if (command == "predict") return run_predict(options, out, err);
        if (command == "recover") return run_recover(options, out, err);
        err << "error: unknown command '" << command << "'\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ClosedFormInapplicable& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InputDomainError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const QuadratureError& e) {
        err << "numeric failure: " << e.what() << " (estimate " << e.estimate() << ", bound " << e.bound() << ")\n";
        return kExitNumeric;
    } catch (const FitError& e) {
        err << "numeric failure: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitNumeric;
    } catch (const ProtocolError& e) {
        err << "protocol error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace pmdq
