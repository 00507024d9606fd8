#pragma once

#include "reports.hpp"
#include "rmt.hpp"
#include "spectral.hpp"

#include <json.hpp>

namespace freeconv {

nlohmann::json to_json(const SupportReport& rep);
nlohmann::json to_json(const BoundsReport& rep);
nlohmann::json to_json(const ValidationReport& rep);
/// Grid summary without the per-point columns.
nlohmann::json grid_summary(const DensityGrid& dg);

} // namespace freeconv
