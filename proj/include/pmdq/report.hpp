#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmdq/recovery.hpp"
#include "pmdq/type_b.hpp"

namespace pmdq {

/// Unit of a named estimate ("fs/um" for dalpha and so on), "" if unitless.
std::string estimate_unit(const std::string& name);

/// Key = value block followed by a '#' human summary.
std::string format_report(const RecoveryReport& report);

struct Window {
    double start;
    double stop;
};

/// Tab-separated prediction table with a header. Centers outside `window`
/// (or not localized along the axis) are flagged.
std::string format_predictions(const std::vector<DipPrediction>& predictions, std::optional<Window> window);

}  // namespace pmdq
