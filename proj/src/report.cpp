#include "pmdq/report.hpp"

#include <cstdio>
#include <map>
#include <sstream>

namespace pmdq {
namespace {

std::string number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string estimate_unit(const std::string& name) {
    static const std::map<std::string, std::string> units{
        {"dalpha", "fs/um"}, {"dalpha_envelope", "fs/um"}, {"alphaH", "fs/um"}, {"alphaV", "fs/um"},
        {"dk0", "rad/um"},   {"dbeta", "fs^2/um"},         {"dA", "fs"},        {"phase_delay", "fs"},
        {"shift", "fs"},     {"dk0_visibility", "rad/um"}};
    const auto it = units.find(name);
    return it == units.end() ? "" : it->second;
}

std::string format_report(const RecoveryReport& r) {
    std::ostringstream s;
    s << "protocol = " << r.protocol << "\n";
    for (const auto& [name, e] : r.estimates) {
        s << name << ".value = " << number(e.value) << "\n";
        s << name << ".uncertainty = " << number(e.uncertainty) << "\n";
        s << name << ".unit = " << estimate_unit(name) << "\n";
        s << name << ".method = " << e.method << "\n";
    }
    for (const auto& [name, set] : r.branches) {
        s << name << ".branches =";
        for (std::size_t i = 0; i < set.size(); ++i) s << (i ? ", " : " ") << number(set[i]);
        s << "\n";
    }
    s << "residual = " << number(r.residual) << "\n";
    s << "#\n# " << r.protocol << " recovery\n";
    for (const auto& [name, e] : r.estimates)
        s << "#   " << name << " = " << number(e.value) << " +/- " << number(e.uncertainty) << " "
          << estimate_unit(name) << "  (" << e.method << ")\n";
    for (const auto& [name, set] : r.branches)
        s << "#   " << name << ": " << set.size() << " candidate values, see " << name << ".branches\n";
    for (const auto& note : r.notes) s << "#   note: " << note << "\n";
    return s.str();
}

std::string format_predictions(const std::vector<DipPrediction>& predictions, std::optional<Window> window) {
    std::ostringstream s;
    s << "# term\tkind\taxis\tcenter\thalf_width\tweight\tdelay_pre\tdelay_post\tflags\tprovenance\tmodulation\n";
    for (const auto& p : predictions) {
        std::string flags;
        auto add = [&flags](const char* f) { flags += flags.empty() ? f : std::string(",") + f; };
        if (!p.center) add("not-localized");
        if (p.overlapping) add("overlapping");
        if (window && p.center && (*p.center < window->start || *p.center > window->stop)) add("out-of-window");
        if (flags.empty()) flags = "-";
        s << p.term << "\t" << to_string(p.kind) << "\t" << to_string(p.axis) << "\t"
          << (p.center ? number(*p.center) : "nan") << "\t" << number(p.half_width) << "\t" << number(p.weight) << "\t"
          << number(p.delay_pre) << "\t" << number(p.delay_post) << "\t" << flags << "\t" << p.provenance << "\t"
          << (p.modulation.empty() ? "-" : p.modulation) << "\n";
    }
    return s.str();
}

}  // namespace pmdq
