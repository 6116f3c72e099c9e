#include "pmdq/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "pmdq/errors.hpp"
#include "pmdq/serialize.hpp"

namespace pmdq {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

/// Strict view of one JSON object.
class Fields {
public:
    Fields(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) throw ConfigError((path_.empty() ? "document" : path_) + ": expected an object");
        for (const auto& [key, value] : j.items())
            if (!allowed.count(key)) throw ConfigError(join(path_, key) + ": unknown field");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    const json& raw(const std::string& key) const { return j_.at(key); }
    std::string where(const std::string& key) const { return join(path_, key); }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        return number(key);
    }
    double number(const std::string& key) const {
        if (!has(key)) throw ConfigError(where(key) + ": required field missing");
        const json& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(where(key) + ": must be finite");
        return d;
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key) const {
        if (!has(key)) throw ConfigError(where(key) + ": required field missing");
        return text(key, "");
    }
    bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
        return v.get<bool>();
    }
    long long integer(const std::string& key) const {
        if (!has(key)) throw ConfigError(where(key) + ": required field missing");
        const json& v = j_.at(key);
        if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError(where(key) + ": expected an integer");
        return v.get<long long>();
    }

private:
    const json& j_;
    std::string path_;
};

template <typename F>
auto guarded(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const InputDomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Mode parse_mode(const std::string& s, const std::string& path) {
    if (s == "classical") return Mode::classical;
    if (s == "type_a") return Mode::type_a;
    if (s == "type_b") return Mode::type_b;
    if (s == "type_b_postponed") return Mode::type_b_postponed;
    throw ConfigError(path + ": unknown mode '" + s + "'");
}

}  // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::classical: return "classical";
        case Mode::type_a: return "type_a";
        case Mode::type_b: return "type_b";
        case Mode::type_b_postponed: return "type_b_postponed";
    }
    return "?";
}

json to_json(const DispersionRelation& r) {
    return {{"k0", r.k0}, {"alpha", r.alpha}, {"beta", r.beta}, {"gamma", r.gamma}};
}

json to_json(const Sample& s) {
    return {{"length", s.length}, {"h", to_json(s.h)}, {"v", to_json(s.v)}, {"label", s.label}};
}

json to_json(const SourceSpectrum& s) {
    return {{"omega0", s.omega0}, {"tau_minus", s.tau_minus}, {"description", s.description}};
}

json to_json(const DelayConfig& d) {
    return {{"tau1", d.tau1}, {"tau2", d.tau2}, {"tau", d.tau}, {"delta", d.delta}};
}

DispersionRelation parse_relation(const json& j, const std::string& path) {
    const Fields f(j, path, {"k0", "alpha", "beta", "gamma"});
    return {f.number("k0", 0.0), f.number("alpha", 0.0), f.number("beta", 0.0), f.number("gamma", 0.0)};
}

Sample parse_sample(const json& j, const std::string& path) {
    const Fields f(j, path, {"length", "h", "v", "label"});
    Sample s;
    s.length = f.number("length");
    if (f.has("h")) s.h = parse_relation(f.raw("h"), f.where("h"));
    if (f.has("v")) s.v = parse_relation(f.raw("v"), f.where("v"));
    s.label = f.text("label", "");
    guarded(path, [&] {
        s.validate();
        return 0;
    });
    return s;
}

SourceSpectrum parse_spectrum(const json& j, const std::string& path) {
    const Fields f(j, path, {"omega0", "lambda0_nm", "tau_minus", "bandwidth_nm", "description"});
    SourceSpectrum s;
    if (f.has("omega0") == f.has("lambda0_nm"))
        throw ConfigError(path + ": give exactly one of omega0 and lambda0_nm");
    if (f.has("tau_minus") == f.has("bandwidth_nm"))
        throw ConfigError(path + ": give exactly one of tau_minus and bandwidth_nm");
    if (f.has("omega0")) {
        s.omega0 = f.number("omega0");
    } else {
        s.omega0 = guarded(f.where("lambda0_nm"), [&] { return omega0_from_wavelength(f.number("lambda0_nm")); });
    }
    if (f.has("tau_minus")) {
        s.tau_minus = f.number("tau_minus");
    } else {
        if (!f.has("lambda0_nm")) throw ConfigError(f.where("bandwidth_nm") + ": needs lambda0_nm");
        s.tau_minus = guarded(f.where("bandwidth_nm"), [&] {
            return tau_minus_from_bandwidth(f.number("lambda0_nm"), f.number("bandwidth_nm"));
        });
    }
    s.description = f.text("description", "");
    guarded(path, [&] {
        s.validate();
        return 0;
    });
    return s;
}

DelayConfig parse_delays(const json& j, const std::string& path) {
    const Fields f(j, path, {"tau1", "tau2", "tau", "delta"});
    return {f.number("tau1", 0.0), f.number("tau2", 0.0), f.number("tau", 0.0), f.number("delta", 0.0)};
}

ClassicalConfig ExperimentConfig::classical() const {
    ClassicalConfig c;
    c.spectrum = spectrum;
    c.sample = sample_post;
    c.path_diff = path_diff;
    if (scan) c.scan = linspace(scan->start, scan->stop, scan->points);
    return c;
}

TypeAConfig ExperimentConfig::type_a() const { return {spectrum, sample_pre, sample_post, delays, r0}; }

TypeBConfig ExperimentConfig::type_b() const { return {spectrum, sample_pre, sample_post, delays, r0}; }

ExperimentConfig parse_config(const json& doc, const std::string& base_dir) {
    const Fields f(doc, "",
                   {"schema_version", "mode", "spectrum", "sample", "sample_pre", "sample_post", "delays", "path_diff",
                    "r0", "scan", "engine", "physical_mode", "noise", "output", "recover"});
    ExperimentConfig c;
    c.source = doc;
    const long long version = f.integer("schema_version");
    if (version != kSchemaVersion)
        throw ConfigError("schema_version: unsupported version " + std::to_string(version));
    c.mode = parse_mode(f.text("mode"), "mode");
    const bool classical = c.mode == Mode::classical;

    if (f.has("spectrum")) {
        c.spectrum = parse_spectrum(f.raw("spectrum"), "spectrum");
        c.has_spectrum = true;
    }
    if (classical) {
        if (f.has("sample_pre") || f.has("sample_post"))
            throw ConfigError("sample_pre: classical mode takes a single 'sample'");
        if (f.has("sample")) c.sample_post = parse_sample(f.raw("sample"), "sample");
    } else {
        if (f.has("sample")) throw ConfigError("sample: use sample_pre/sample_post outside classical mode");
        if (f.has("path_diff")) throw ConfigError("path_diff: only used in classical mode");
        if (f.has("sample_pre")) c.sample_pre = parse_sample(f.raw("sample_pre"), "sample_pre");
        if (f.has("sample_post")) c.sample_post = parse_sample(f.raw("sample_post"), "sample_post");
    }
    if (f.has("delays")) c.delays = parse_delays(f.raw("delays"), "delays");
    c.path_diff = f.number("path_diff", 0.0);
    c.r0 = f.number("r0", 1.0);
    if (!(c.r0 > 0.0)) throw ConfigError("r0: must be positive");
    c.engine = guarded("engine", [&] { return f.has("engine") ? parse_engine(f.text("engine")) : Engine::automatic; });
    c.physical_mode = f.flag("physical_mode", false);

    const bool type_b = c.mode == Mode::type_b || c.mode == Mode::type_b_postponed;
    if (type_b && !f.has("recover") && !(f.has("delays") && doc.at("delays").contains("tau")))
        throw ConfigError("delays.tau: required in " + to_string(c.mode) + " mode");
    if (c.physical_mode && c.delays.tau < 0.0) throw ConfigError("delays.tau: must be >= 0 in physical mode");
    if (c.mode == Mode::type_b_postponed && (c.sample_pre.length != 0.0 || c.delays.tau1 != 0.0))
        throw ConfigError("sample_pre.length: postponed-delay mode needs l1 = 0 and tau1 = 0");

    if (f.has("scan")) {
        const Fields s(f.raw("scan"), "scan", {"axis", "start", "stop", "points"});
        ScanSpec spec;
        spec.axis = guarded("scan.axis", [&] { return parse_axis(s.text("axis")); });
        spec.start = s.number("start");
        spec.stop = s.number("stop");
        const long long points = s.integer("points");
        if (points < 2) throw ConfigError("scan.points: must be >= 2");
        if (points > 10000000) throw ConfigError("scan.points: too large");
        spec.points = static_cast<int>(points);
        if (!(spec.start < spec.stop)) throw ConfigError("scan.start: must be below scan.stop");
        if (classical && spec.axis != Axis::delta) throw ConfigError("scan.axis: classical mode scans delta");
        if (c.mode == Mode::type_a && spec.axis != Axis::tau1 && spec.axis != Axis::tau2)
            throw ConfigError("scan.axis: Type A scans tau1 or tau2");
        if (type_b && spec.axis == Axis::delta) throw ConfigError("scan.axis: Type B scans tau1, tau2 or tau");
        if (c.mode == Mode::type_b_postponed && spec.axis == Axis::tau1)
            throw ConfigError("scan.axis: postponed-delay mode keeps tau1 = 0");
        if (c.physical_mode && spec.axis == Axis::tau && spec.start < 0.0)
            throw ConfigError("scan.start: tau must be >= 0 in physical mode");
        c.scan = spec;
    }
    if (f.has("noise")) {
        const Fields n(f.raw("noise"), "noise", {"relative", "seed"});
        c.noise.relative = n.number("relative", 0.0);
        if (!(c.noise.relative >= 0.0)) throw ConfigError("noise.relative: must be >= 0");
        if (n.has("seed")) {
            const long long seed = n.integer("seed");
            if (seed < 0) throw ConfigError("noise.seed: must be >= 0");
            c.noise.seed = static_cast<std::uint64_t>(seed);
        }
    }
    if (f.has("output")) {
        const Fields o(f.raw("output"), "output", {"path", "format"});
        c.output_path = o.text("path", "");
        c.output_format = o.text("format", "tsv");
        if (c.output_format != "tsv") throw ConfigError("output.format: only 'tsv' is supported");
    }
    if (f.has("recover")) {
        const Fields r(f.raw("recover"), "recover",
                       {"protocol", "scans", "settings", "min_prominence", "dbeta_min", "dbeta_max"});
        RecoverSpec spec;
        spec.protocol = r.text("protocol");
        static const std::set<std::string> known{"type_a", "type_b_three_scan", "type_b_two_scan", "quadratic"};
        if (!known.count(spec.protocol)) throw ConfigError("recover.protocol: unknown protocol '" + spec.protocol + "'");
        if (!r.has("scans") || !r.raw("scans").is_array()) throw ConfigError("recover.scans: expected a list of paths");
        for (std::size_t i = 0; i < r.raw("scans").size(); ++i) {
            const json& p = r.raw("scans")[i];
            if (!p.is_string()) throw ConfigError("recover.scans[" + std::to_string(i) + "]: expected a path");
            const std::filesystem::path path(p.get<std::string>());
            spec.scans.push_back(path.is_absolute() ? path.string() : (std::filesystem::path(base_dir) / path).string());
        }
        if (r.has("settings")) {
            if (!r.raw("settings").is_array()) throw ConfigError("recover.settings: expected a list");
            for (std::size_t i = 0; i < r.raw("settings").size(); ++i) {
                const std::string where = "recover.settings[" + std::to_string(i) + "]";
                const Fields s(r.raw("settings")[i], where, {"tau", "tau2"});
                spec.settings.push_back({s.number("tau", 0.0), s.number("tau2", 0.0)});
            }
        }
        spec.min_prominence = r.number("min_prominence", 0.05);
        if (!(spec.min_prominence > 0.0)) throw ConfigError("recover.min_prominence: must be positive");
        spec.dbeta_min = r.number("dbeta_min", -1.0);
        spec.dbeta_max = r.number("dbeta_max", 1.0);
        if (!(spec.dbeta_min < spec.dbeta_max)) throw ConfigError("recover.dbeta_min: must be below dbeta_max");
        c.recover = spec;
    }
    if (!c.recover && !c.has_spectrum) throw ConfigError("spectrum: required field missing");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(doc, std::filesystem::path(path).parent_path().string());
}

}  // namespace pmdq
