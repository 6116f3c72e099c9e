#pragma once

// JSON images of the data model, used for scan metadata and config echo.

#include <json.hpp>

#include "pmdq/dispersion.hpp"

namespace pmdq {

nlohmann::json to_json(const DispersionRelation& rel);
nlohmann::json to_json(const Sample& sample);
nlohmann::json to_json(const SourceSpectrum& spectrum);
nlohmann::json to_json(const DelayConfig& delays);

}  // namespace pmdq
