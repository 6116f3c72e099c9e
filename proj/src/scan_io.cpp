#include "pmdq/scan_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "pmdq/errors.hpp"

namespace pmdq {

namespace {

std::string number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string value_column(const nlohmann::json& metadata) {
    return metadata.value("mode", "") == "classical" ? "intensity" : "rate";
}

}  // namespace

void write_scan(std::ostream& out, const ScanResult& scan, const nlohmann::json& config_echo) {
    out << "# format_version: " << kScanFormatVersion << "\n";
    out << "# columns: " << to_string(scan.axis) << "[" << axis_unit(scan.axis) << "]\t" << value_column(scan.metadata)
        << "\n";
    if (!config_echo.is_null()) out << "# config: " << config_echo.dump() << "\n";
    out << "# metadata: " << scan.metadata.dump() << "\n";
    for (Eigen::Index i = 0; i < scan.size(); ++i) out << number(scan.delay(i)) << "\t" << number(scan.value(i)) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError(path + ": cannot open for writing");
        f << text;
        f.flush();
        if (!f) throw ConfigError(path + ": write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ConfigError(path + ": cannot move output into place: " + ec.message());
    }
}

void write_scan_file(const std::string& path, const ScanResult& scan, const nlohmann::json& config_echo) {
    std::ostringstream s;
    write_scan(s, scan, config_echo);
    write_text_file(path, s.str());
}

ScanResult read_scan(std::istream& in, const std::string& name) {
    ScanResult scan;
    std::vector<double> xs, ys;
    std::string line;
    bool have_axis = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto meta = line.find("# metadata: ");
            const auto cols = line.find("# columns: ");
            if (meta == 0) {
                try {
                    scan.metadata = nlohmann::json::parse(line.substr(12));
                } catch (const nlohmann::json::parse_error& e) {
                    throw ConfigError(name + ":" + std::to_string(lineno) + ": bad metadata: " + e.what());
                }
                if (scan.metadata.contains("axis")) {
                    scan.axis = parse_axis(scan.metadata.at("axis").get<std::string>());
                    have_axis = true;
                }
            } else if (cols == 0 && !have_axis) {
                const std::string first = line.substr(11, line.find_first_of("[\t", 11) - 11);
                scan.axis = parse_axis(first);
                have_axis = true;
            }
            continue;
        }
        std::istringstream row(line);
        double x, y;
        if (!(row >> x >> y)) throw ConfigError(name + ":" + std::to_string(lineno) + ": expected two numbers");
        xs.push_back(x);
        ys.push_back(y);
    }
    if (!have_axis) throw ConfigError(name + ": no axis in header");
    scan.delay = Eigen::Map<Eigen::VectorXd>(xs.data(), Eigen::Index(xs.size()));
    scan.value = Eigen::Map<Eigen::VectorXd>(ys.data(), Eigen::Index(ys.size()));
    return scan;
}

ScanResult read_scan_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(path + ": cannot open scan file");
    return read_scan(f, path);
}

}  // namespace pmdq
