#pragma once

// Experiment configuration files: JSON, schema version 1, strict (unknown
// fields are rejected and every error names the offending field path).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmdq/classical.hpp"
#include "pmdq/dispersion.hpp"
#include "pmdq/scan.hpp"
#include "pmdq/type_a.hpp"
#include "pmdq/recovery.hpp"
#include "pmdq/type_b.hpp"

namespace pmdq {

inline constexpr int kSchemaVersion = 1;

enum class Mode { classical, type_a, type_b, type_b_postponed };

std::string to_string(Mode mode);

struct ScanSpec {
    Axis axis = Axis::tau1;
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
};

struct NoiseSpec {
    double relative = 0.0;
    std::uint64_t seed = 0;
};

struct RecoverSpec {
    std::string protocol;             // type_a | type_b_three_scan | type_b_two_scan | quadratic
    std::vector<std::string> scans;   // resolved against the config file's directory
    std::vector<TypeBSettings> settings;  // three-scan only; defaults to each scan's own delays
    double min_prominence = 0.05;
    double dbeta_min = -1.0;
    double dbeta_max = 1.0;
};

struct ExperimentConfig {
    Mode mode = Mode::type_a;
    SourceSpectrum spectrum;
    bool has_spectrum = false;
    Sample sample_pre;
    Sample sample_post;  // the classical sample lives here
    DelayConfig delays;
    double path_diff = 0.0;
    double r0 = 1.0;
    std::optional<ScanSpec> scan;
    Engine engine = Engine::automatic;
    bool physical_mode = false;
    NoiseSpec noise;
    std::string output_path;
    std::string output_format = "tsv";
    std::optional<RecoverSpec> recover;
    nlohmann::json source;  // the document as read

    ClassicalConfig classical() const;
    TypeAConfig type_a() const;
    TypeBConfig type_b() const;
};

/// Throws ConfigError naming the field path on any schema violation.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

DispersionRelation parse_relation(const nlohmann::json& j, const std::string& path);
Sample parse_sample(const nlohmann::json& j, const std::string& path);
SourceSpectrum parse_spectrum(const nlohmann::json& j, const std::string& path);
DelayConfig parse_delays(const nlohmann::json& j, const std::string& path);

}  // namespace pmdq
