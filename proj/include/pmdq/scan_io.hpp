#pragma once

// Scan files: UTF-8 text, '#' header lines (format version, column names,
// config echo, metadata as single-line JSON), then "delay<TAB>value" rows.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pmdq/scan.hpp"

namespace pmdq {

inline constexpr int kScanFormatVersion = 1;

void write_scan(std::ostream& out, const ScanResult& scan, const nlohmann::json& config_echo);

/// Writes to a temporary file next to `path` and renames it into place.
void write_scan_file(const std::string& path, const ScanResult& scan, const nlohmann::json& config_echo);

/// Also accepts files without a metadata line (measured data); the axis
/// then comes from the column header.
ScanResult read_scan(std::istream& in, const std::string& name = "scan");
ScanResult read_scan_file(const std::string& path);

/// Writes `text` atomically (temp file + rename).
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pmdq
